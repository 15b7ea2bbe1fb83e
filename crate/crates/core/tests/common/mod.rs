#![allow(dead_code)]

use std::sync::Arc;

use prymrank::cartier::HyperellipticCurve;
use prymrank::gf::{Field, FieldCtx, FieldElement};
use prymrank::poly::Poly;
use rand::Rng;

pub fn random_element<R: Rng>(rng: &mut R, ctx: &FieldCtx) -> FieldElement {
    ctx.from_code(rng.gen_range(0..ctx.order().unwrap()))
}

/// Random squarefree f of degree 2g+1 or 2g+2.
pub fn random_curve<R: Rng>(rng: &mut R, ctx: &Arc<FieldCtx>, genus: usize) -> HyperellipticCurve {
    loop {
        let deg = 2 * genus + 1 + rng.gen_range(0..2);
        let mut coeffs: Vec<FieldElement> = (0..=deg).map(|_| random_element(rng, ctx)).collect();
        while coeffs[deg].is_zero() {
            coeffs[deg] = random_element(rng, ctx);
        }
        if let Ok(c) = HyperellipticCurve::new(Poly::new(ctx, coeffs).unwrap()) {
            return c;
        }
    }
}

/// Random curve whose 2g+2 branch points are all rational: 2g+1 or 2g+2
/// distinct roots and a random nonzero leading coefficient.
pub fn random_split_curve<R: Rng>(rng: &mut R, ctx: &Arc<FieldCtx>, genus: usize) -> HyperellipticCurve {
    split_curve(rng, ctx, genus, false)
}

pub fn random_monic_split_curve<R: Rng>(rng: &mut R, ctx: &Arc<FieldCtx>, genus: usize) -> HyperellipticCurve {
    split_curve(rng, ctx, genus, true)
}

fn split_curve<R: Rng>(rng: &mut R, ctx: &Arc<FieldCtx>, genus: usize, monic: bool) -> HyperellipticCurve {
    let n = 2 * genus + 1 + rng.gen_range(0..2);
    assert!(n as u128 <= ctx.order().unwrap(), "field too small for {n} roots");
    let mut roots: Vec<FieldElement> = Vec::new();
    while roots.len() < n {
        let r = random_element(rng, ctx);
        if !roots.contains(&r) {
            roots.push(r);
        }
    }
    let mut lead = if monic { ctx.one() } else { random_element(rng, ctx) };
    while lead.is_zero() {
        lead = random_element(rng, ctx);
    }
    let f = Poly::from_roots(ctx, &roots).unwrap().scale(lead).unwrap();
    HyperellipticCurve::new(f).unwrap()
}

/// 1, -1 or 0 by Euler's criterion.
pub fn chi(ctx: &FieldCtx, a: FieldElement) -> i64 {
    if a.is_zero() {
        return 0;
    }
    let q = ctx.order().unwrap() as u64;
    if ctx.pow(a, (q - 1) / 2) == ctx.one() {
        1
    } else {
        -1
    }
}

/// Points of the smooth model of y^2 = f over F_{q^m}, counted one x at a time.
pub fn brute_count(f: &Poly, m: usize) -> u64 {
    let base = f.ctx();
    let ext = FieldCtx::new(base.p(), base.degree() * m, None).unwrap();
    let g = f.lift(&ext, 1 << 24).unwrap();
    let affine: i64 = ext.enumerate(1 << 24).unwrap().map(|x| 1 + chi(&ext, g.eval(x))).sum();
    let deg = g.degree().unwrap();
    let infinity = if deg % 2 == 1 { 1 } else { 1 + chi(&ext, g.leading().unwrap()) };
    (affine + infinity) as u64
}

/// p-rank from L(T) mod p, with L rebuilt from enumerated point counts.
pub fn brute_p_rank(f: &Poly, genus: usize) -> usize {
    if genus == 0 {
        return 0;
    }
    let ctx = f.ctx();
    let counts: Vec<u64> = (1..=genus).map(|m| brute_count(f, m)).collect();
    prymrank::zeta::LPolynomial::from_counts(ctx.order().unwrap() as u64, genus, &counts)
        .unwrap()
        .degree_mod(ctx.p() as u64)
}
