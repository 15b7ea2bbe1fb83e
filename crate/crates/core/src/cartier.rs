//! Cartier-Manin matrices of hyperelliptic curves y^2 = f(x) and p-ranks.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gf::{Field, FieldCtx, FieldElement};
use crate::poly::{dense, Poly};

/// Largest genus accepted by [`p_rank`].
pub const GENUS_CAP: usize = 4;

/// y^2 = f(x) with f squarefree of degree at least 3.
#[derive(Clone, PartialEq, Eq)]
pub struct HyperellipticCurve {
    f: Poly,
    genus: usize,
}

impl fmt::Debug for HyperellipticCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HyperellipticCurve({})", self.encode())
    }
}

impl fmt::Display for HyperellipticCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encode())
    }
}

impl HyperellipticCurve {
    pub fn new(f: Poly) -> Result<HyperellipticCurve> {
        let deg = f.degree().unwrap_or(0);
        if deg < 3 {
            return Err(Error::InvalidCurve(format!("degree {deg} < 3")));
        }
        if !f.is_squarefree()? {
            return Err(Error::InvalidCurve(format!("{} is not squarefree", f.encode())));
        }
        Ok(HyperellipticCurve { genus: (deg - 1) / 2, f })
    }

    pub fn f(&self) -> &Poly {
        &self.f
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        self.f.ctx()
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    /// "<field spec>;f=<poly>".
    pub fn encode(&self) -> String {
        format!("{};f={}", self.ctx().spec(), self.f.encode())
    }

    pub fn parse(s: &str) -> Result<HyperellipticCurve> {
        let (field, poly) = s
            .split_once(";f=")
            .ok_or_else(|| Error::Parse(format!("expected '<field>;f=<poly>', got '{s}'")))?;
        let ctx = FieldCtx::parse_spec(field)?;
        HyperellipticCurve::new(Poly::parse(&ctx, poly)?)
    }
}

/// g x g matrix with entry (i, j) = c_{ip-j} (1-indexed), c_n the
/// coefficients of f^((p-1)/2).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CartierMatrix {
    ctx: Arc<FieldCtx>,
    entries: Vec<Vec<FieldElement>>,
}

impl CartierMatrix {
    pub fn entries(&self) -> &[Vec<FieldElement>] {
        &self.entries
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(|e| e.is_zero())
    }

    pub fn rank(&self) -> usize {
        rank(self.ctx.as_ref(), self.entries.clone())
    }

    pub fn determinant(&self) -> FieldElement {
        determinant(self.ctx.as_ref(), self.entries.clone())
    }

    pub fn mul(&self, rhs: &CartierMatrix) -> Result<CartierMatrix> {
        if self.ctx.id() != rhs.ctx.id() {
            return Err(Error::ContextMismatch);
        }
        Ok(CartierMatrix {
            ctx: self.ctx.clone(),
            entries: mat_mul(self.ctx.as_ref(), &self.entries, &rhs.entries),
        })
    }

    /// Rows joined by ';', entries by ' ', elements in gf encoding.
    pub fn encode(&self) -> String {
        self.entries
            .iter()
            .map(|row| row.iter().map(|e| e.encode()).collect::<Vec<_>>().join(" "))
            .collect::<Vec<_>>()
            .join("; ")
    }
}

/// Cartier matrix entries from the coefficients of f, for any field type.
pub fn cartier_entries<F: Field>(field: &F, f: &[F::Elem], genus: usize) -> Vec<Vec<F::Elem>> {
    let p = field.characteristic() as usize;
    let h = dense::pow_trunc(field, f, (p as u64 - 1) / 2, genus * p);
    let c = |n: usize| h.get(n).copied().unwrap_or_else(|| field.zero());
    (1..=genus)
        .map(|i| (1..=genus).map(|j| c(i * p - j)).collect())
        .collect()
}

pub fn mat_mul<F: Field>(field: &F, a: &[Vec<F::Elem>], b: &[Vec<F::Elem>]) -> Vec<Vec<F::Elem>> {
    let n = a.len();
    let m = b.first().map_or(0, |r| r.len());
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    (0..b.len()).fold(field.zero(), |acc, t| field.add(acc, field.mul(a[i][t], b[t][j])))
                })
                .collect()
        })
        .collect()
}

/// Entrywise Frobenius.
pub fn twist<F: Field>(field: &F, m: &[Vec<F::Elem>]) -> Vec<Vec<F::Elem>> {
    m.iter().map(|row| row.iter().map(|&e| field.frobenius(e)).collect()).collect()
}

/// Rank by Gaussian elimination.
pub fn rank<F: Field>(field: &F, mut m: Vec<Vec<F::Elem>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows).find(|&i| !field.is_zero(m[i][c])) else {
            continue;
        };
        m.swap(r, piv);
        let inv = field.inv(m[r][c]).expect("pivot is nonzero");
        for i in r + 1..rows {
            if field.is_zero(m[i][c]) {
                continue;
            }
            let factor = field.mul(m[i][c], inv);
            for j in c..cols {
                let t = field.mul(factor, m[r][j]);
                m[i][j] = field.sub(m[i][j], t);
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

pub fn determinant<F: Field>(field: &F, mut m: Vec<Vec<F::Elem>>) -> F::Elem {
    let n = m.len();
    let mut det = field.one();
    for c in 0..n {
        let Some(piv) = (c..n).find(|&i| !field.is_zero(m[i][c])) else {
            return field.zero();
        };
        if piv != c {
            m.swap(c, piv);
            det = field.neg(det);
        }
        det = field.mul(det, m[c][c]);
        let inv = field.inv(m[c][c]).expect("pivot is nonzero");
        for i in c + 1..n {
            let factor = field.mul(m[i][c], inv);
            for j in c..n {
                let t = field.mul(factor, m[c][j]);
                m[i][j] = field.sub(m[i][j], t);
            }
        }
    }
    det
}

/// Rank of M^(p^(g-1)) ... M^(p) M.
pub fn stable_rank<F: Field>(field: &F, m: &[Vec<F::Elem>]) -> usize {
    let g = m.len();
    let mut product = m.to_vec();
    let mut twisted = m.to_vec();
    for _ in 1..g {
        twisted = twist(field, &twisted);
        product = mat_mul(field, &twisted, &product);
    }
    rank(field, product)
}

/// p-rank of y^2 = f(x) given the coefficients of f (degree >= 3, squarefree).
pub fn p_rank_of<F: Field>(field: &F, f: &[F::Elem]) -> usize {
    let genus = (f.len() - 2) / 2;
    if genus == 1 {
        return usize::from(!field.is_zero(hasse_invariant(field, f)));
    }
    stable_rank(field, &cartier_entries(field, f, genus))
}

/// c_{p-1} of f^((p-1)/2): the Hasse invariant of a genus-1 curve y^2 = f.
pub fn hasse_invariant<F: Field>(field: &F, f: &[F::Elem]) -> F::Elem {
    let p = field.characteristic() as usize;
    let h = dense::pow_trunc(field, f, (p as u64 - 1) / 2, p);
    h.get(p - 1).copied().unwrap_or_else(|| field.zero())
}

pub fn cartier_matrix(curve: &HyperellipticCurve) -> CartierMatrix {
    let ctx = curve.ctx().clone();
    let entries = cartier_entries(ctx.as_ref(), curve.f().coeffs(), curve.genus());
    CartierMatrix { ctx, entries }
}

pub fn frobenius_twist(m: &CartierMatrix) -> CartierMatrix {
    CartierMatrix { ctx: m.ctx.clone(), entries: twist(m.ctx.as_ref(), &m.entries) }
}

/// The g-fold twisted product M^(p^(g-1)) ... M^(p) M.
pub fn twisted_product(m: &CartierMatrix) -> CartierMatrix {
    let field = m.ctx.as_ref();
    let mut product = m.entries.clone();
    let mut twisted = m.entries.clone();
    for _ in 1..m.size() {
        twisted = twist(field, &twisted);
        product = mat_mul(field, &twisted, &product);
    }
    CartierMatrix { ctx: m.ctx.clone(), entries: product }
}

pub fn p_rank(curve: &HyperellipticCurve) -> Result<usize> {
    if curve.genus() > GENUS_CAP {
        return Err(Error::GenusCap { genus: curve.genus(), cap: GENUS_CAP });
    }
    Ok(p_rank_of(curve.ctx().as_ref(), curve.f().coeffs()))
}

fn binomial_mod(n: u64, k: u64, p: u64) -> u64 {
    // n < p here, so the plain product formula is fine mod p
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..k {
        num = num * ((n - i) % p) % p;
        den = den * ((i + 1) % p) % p;
    }
    let mut inv = 1u64;
    let mut b = den;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            inv = inv * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    num * inv % p
}

/// H_p(λ) = Σ_{i=0}^{m} C(m, i)^2 λ^i, m = (p-1)/2, over F_p. Up to the sign
/// (-1)^m this is c_{p-1} of (x(x-1)(x-λ))^m.
pub fn deuring_polynomial(p: u32) -> Result<Poly> {
    let ctx = FieldCtx::prime(p)?;
    let m = (p as u64 - 1) / 2;
    let coeffs: Vec<i64> = (0..=m)
        .map(|i| {
            let b = binomial_mod(m, i, p as u64);
            (b * b % p as u64) as i64
        })
        .collect();
    Ok(Poly::from_ints(&ctx, &coeffs))
}

/// Whether E_λ: y^2 = x(x-1)(x-λ) is supersingular, i.e. H_p(λ) = 0.
pub fn is_supersingular_lambda(ctx: &Arc<FieldCtx>, lambda: &FieldElement) -> Result<bool> {
    if !ctx.owns(lambda) {
        return Err(Error::ContextMismatch);
    }
    if lambda.is_zero() || *lambda == ctx.one() {
        return Err(Error::InvalidCurve("Legendre parameter must avoid 0 and 1".into()));
    }
    let h = deuring_polynomial(ctx.p())?;
    let value = h
        .coeffs()
        .iter()
        .rev()
        .fold(ctx.zero(), |acc, c| ctx.add(ctx.mul(acc, *lambda), ctx.from_int(c.coeffs()[0] as i64)));
    Ok(value.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::DEFAULT_ENUM_CAP;

    fn curve(p: u32, coeffs: &[i64]) -> HyperellipticCurve {
        let k = FieldCtx::prime(p).unwrap();
        HyperellipticCurve::new(Poly::from_ints(&k, coeffs)).unwrap()
    }

    fn legendre(ctx: &Arc<FieldCtx>, roots: &[FieldElement]) -> HyperellipticCurve {
        HyperellipticCurve::new(Poly::from_roots(ctx, roots).unwrap()).unwrap()
    }

    #[test]
    fn curve_validation() {
        let k = FieldCtx::prime(5).unwrap();
        assert!(HyperellipticCurve::new(Poly::from_ints(&k, &[0, 0, 1])).is_err());
        assert!(HyperellipticCurve::new(Poly::from_ints(&k, &[0, 0, 1, 1])).is_err());
        let c = curve(5, &[0, -1, 0, 0, 0, 1]);
        assert_eq!(c.genus(), 2);
        assert_eq!(HyperellipticCurve::parse(&c.encode()).unwrap(), c);
        assert_eq!(c.encode(), "p=5;f=0,4,0,0,0,1");
    }

    #[test]
    fn cartier_matrix_examples() {
        let c = curve(5, &[0, -1, 0, 0, 0, 1]);
        assert!(cartier_matrix(&c).is_zero());
        assert_eq!(p_rank(&c).unwrap(), 0);

        let k5 = FieldCtx::prime(5).unwrap();
        let e = legendre(&k5, &[k5.from_int(0), k5.from_int(1), k5.from_int(2)]);
        let m = cartier_matrix(&e);
        assert_eq!(m.entries(), &[vec![k5.from_int(3)]]);
        assert_eq!(p_rank(&e).unwrap(), 1);

        // p = 3: the single entry is the x^2 coefficient -(1 + λ)
        let k3 = FieldCtx::prime(3).unwrap();
        let e3 = legendre(&k3, &[k3.from_int(0), k3.from_int(1), k3.from_int(2)]);
        assert_eq!(cartier_matrix(&e3).entries(), &[vec![k3.from_int(-3)]]);
    }

    #[test]
    fn twist_examples() {
        let f25 = FieldCtx::new(5, 2, Some(&[2, 4, 1])).unwrap();
        let m = CartierMatrix { ctx: f25.clone(), entries: vec![vec![f25.generator()]] };
        assert_eq!(frobenius_twist(&m).entries()[0][0], f25.element(&[1, 4]).unwrap());
        assert_eq!(frobenius_twist(&frobenius_twist(&m)), m);
        let z = CartierMatrix { ctx: f25.clone(), entries: vec![vec![f25.zero(); 2]; 2] };
        assert_eq!(frobenius_twist(&z), z);
        let c = curve(7, &[1, 2, 3, 0, 1, 0, 1]);
        let cm = cartier_matrix(&c);
        assert_eq!(frobenius_twist(&cm), cm);
    }

    #[test]
    fn worked_example_has_p_rank_one() {
        let f25 = FieldCtx::new(5, 2, Some(&[2, 4, 1])).unwrap();
        let a = f25.generator();
        let lambda = f25.pow(a, 4);
        let c = legendre(&f25, &[f25.zero(), f25.one(), lambda, f25.pow(a, 16), a]);
        assert_eq!(p_rank(&c).unwrap(), 1);
        // D = det M vanishes, N = M^(p) M is nonzero
        let m = cartier_matrix(&c);
        assert!(m.determinant().is_zero());
        assert!(!twisted_product(&m).is_zero());
    }

    #[test]
    fn deuring_examples() {
        assert_eq!(deuring_polynomial(3).unwrap().encode(), "1,1");
        assert_eq!(deuring_polynomial(5).unwrap().encode(), "1,4,1");
        // 1, 9, 9, 1 mod 7
        assert_eq!(deuring_polynomial(7).unwrap().encode(), "1,2,2,1");
    }

    #[test]
    fn deuring_matches_hasse_coefficient() {
        // brute force: c_{p-1} of (x(x-1)(x-λ))^m equals (-1)^m H_p(λ) for every λ
        for p in [3u32, 5, 7, 11, 13] {
            let k = FieldCtx::prime(p).unwrap();
            let h = deuring_polynomial(p).unwrap();
            let sign = if (p - 1) / 2 % 2 == 0 { 1 } else { -1 };
            for l in 0..p as i64 {
                let f = dense::from_roots(k.as_ref(), &[k.zero(), k.one(), k.from_int(l)]);
                let c = hasse_invariant(k.as_ref(), &f);
                assert_eq!(c, k.mul(k.from_int(sign), h.eval(k.from_int(l))), "p={p} λ={l}");
            }
        }
    }

    #[test]
    fn supersingular_examples() {
        let f25 = FieldCtx::new(5, 2, Some(&[2, 4, 1])).unwrap();
        let lambda = f25.pow(f25.generator(), 4);
        assert!(is_supersingular_lambda(&f25, &lambda).unwrap());
        let k3 = FieldCtx::prime(3).unwrap();
        assert!(is_supersingular_lambda(&k3, &k3.from_int(2)).unwrap());
        let k5 = FieldCtx::prime(5).unwrap();
        assert!(!is_supersingular_lambda(&k5, &k5.from_int(2)).unwrap());
        assert!(is_supersingular_lambda(&k5, &k5.one()).is_err());
        assert!(is_supersingular_lambda(&k5, &k5.zero()).is_err());
    }

    #[test]
    fn deuring_roots_live_in_f_p2() {
        for p in [3u32, 5, 7, 11, 13] {
            let h = deuring_polynomial(p).unwrap();
            let ext = FieldCtx::new(p, 2, None).unwrap();
            let roots = h.roots_in(&ext, DEFAULT_ENUM_CAP).unwrap();
            assert_eq!(roots.len(), h.degree().unwrap(), "p={p}");
        }
    }

    #[test]
    fn genus_cap_enforced() {
        let k = FieldCtx::prime(11).unwrap();
        let roots: Vec<_> = (0..11).map(|i| k.from_int(i)).collect();
        let c = legendre(&k, &roots);
        assert_eq!(c.genus(), 5);
        assert!(matches!(p_rank(&c), Err(Error::GenusCap { .. })));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]
            #[test]
            fn p_rank_invariant_under_affine_change(
                p in prop::sample::select(vec![5u32, 7, 11]),
                coeffs in prop::collection::vec(0i64..11, 6..9),
                u in 1i64..11,
                c in 0i64..11,
            ) {
                let ctx = FieldCtx::prime(p).unwrap();
                let mut coeffs = coeffs;
                let last = coeffs.len() - 1;
                if coeffs[last] % p as i64 == 0 {
                    coeffs[last] = 1;
                }
                let f = Poly::from_ints(&ctx, &coeffs);
                prop_assume!(f.is_squarefree().unwrap());
                prop_assume!(u % p as i64 != 0);
                let x = HyperellipticCurve::new(f.clone()).unwrap();
                let g = f.substitute_affine(ctx.from_int(u), ctx.from_int(c)).unwrap();
                let y = HyperellipticCurve::new(g).unwrap();
                prop_assert_eq!(p_rank(&x).unwrap(), p_rank(&y).unwrap());
            }
        }
    }
}
