//! Unramified double covers of hyperelliptic curves.
//!
//! A double cover of y^2 = f(x) corresponds to a splitting of the 2g + 2
//! branch points into two nonempty parts of even size. The cover Y is the
//! fiber product of the two hyperelliptic curves branched over the parts, and
//! the Prym variety is isogenous to the product of their Jacobians, so the
//! Prym p-rank is the sum of the two part-curve p-ranks.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cartier::{self, HyperellipticCurve};
use crate::error::{Error, Result};
use crate::gf::{Field, FieldCtx, FieldElement, DEFAULT_ENUM_CAP};
use crate::poly::{dense, Poly};
use crate::zeta;

/// Largest base genus for which covers are enumerated.
pub const COVER_GENUS_CAP: usize = 3;

/// Token used for the point at infinity in text and JSON.
pub const INFINITY_TOKEN: &str = "INF";

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum BranchPoint {
    Infinity,
    Finite(FieldElement),
}

impl BranchPoint {
    pub fn encode(&self) -> String {
        match self {
            BranchPoint::Infinity => INFINITY_TOKEN.to_string(),
            BranchPoint::Finite(e) => e.encode(),
        }
    }

    pub fn parse(ctx: &FieldCtx, s: &str) -> Result<BranchPoint> {
        if s.trim() == INFINITY_TOKEN {
            Ok(BranchPoint::Infinity)
        } else {
            Ok(BranchPoint::Finite(ctx.parse_element(s)?))
        }
    }
}

impl fmt::Display for BranchPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encode())
    }
}

/// Branch points of a hyperelliptic curve: ∞ first (when deg f is odd), then
/// the roots of f in increasing code order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BranchSet {
    ctx: Arc<FieldCtx>,
    points: Vec<BranchPoint>,
}

impl BranchSet {
    pub fn points(&self) -> &[BranchPoint] {
        &self.points
    }

    pub fn has_infinity(&self) -> bool {
        self.points.first() == Some(&BranchPoint::Infinity)
    }

    pub fn affine(&self) -> Vec<FieldElement> {
        self.points
            .iter()
            .filter_map(|b| match b {
                BranchPoint::Finite(e) => Some(*e),
                BranchPoint::Infinity => None,
            })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }
}

pub fn branch_set(curve: &HyperellipticCurve) -> Result<BranchSet> {
    let ctx = curve.ctx().clone();
    let f = curve.f();
    let deg = f.degree().expect("curve polynomial is nonzero");
    let roots = f.roots_in(&ctx, DEFAULT_ENUM_CAP)?;
    if roots.len() != deg {
        return Err(Error::NonRationalBranch);
    }
    let mut points = Vec::with_capacity(deg + 1);
    if deg % 2 == 1 {
        points.push(BranchPoint::Infinity);
    }
    points.extend(roots.into_iter().map(BranchPoint::Finite));
    Ok(BranchSet { ctx, points })
}

/// Bitmasks (over branch point indices) of the first part of every even
/// partition of `n` points. Point 0 always lies in the first part; the masks
/// are ordered lexicographically by their sorted index lists.
pub fn partition_masks(n: usize) -> Vec<u32> {
    let full: u32 = (1 << n) - 1;
    let mut masks: Vec<u32> = (0..1u32 << (n - 1))
        .map(|s| (s << 1) | 1)
        .filter(|&m| m.count_ones() % 2 == 0 && m != full)
        .collect();
    let key = |m: u32| (0..n).filter(|&i| m >> i & 1 == 1).collect::<Vec<_>>();
    masks.sort_by_key(|&m| key(m));
    masks
}

/// Two disjoint parts of even size covering a branch set. The first part
/// contains the first branch point.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EvenPartition {
    part1: Vec<BranchPoint>,
    part2: Vec<BranchPoint>,
}

impl EvenPartition {
    pub fn new(branch: &BranchSet, part1: Vec<BranchPoint>) -> Result<EvenPartition> {
        if part1.iter().any(|b| !branch.points.contains(b)) {
            return Err(Error::InvalidPartition("point outside the branch set".into()));
        }
        let part2: Vec<BranchPoint> =
            branch.points.iter().filter(|b| !part1.contains(b)).copied().collect();
        let part1: Vec<BranchPoint> =
            branch.points.iter().filter(|b| part1.contains(b)).copied().collect();
        if part1.is_empty() || part2.is_empty() || part1.len() % 2 == 1 || part2.len() % 2 == 1 {
            return Err(Error::InvalidPartition(format!(
                "parts of sizes {} and {}",
                part1.len(),
                part2.len()
            )));
        }
        // canonical: the part holding the first branch point comes first
        if part1.first() == branch.points.first() {
            Ok(EvenPartition { part1, part2 })
        } else {
            Ok(EvenPartition { part1: part2, part2: part1 })
        }
    }

    fn from_mask(branch: &BranchSet, mask: u32) -> EvenPartition {
        let (mut part1, mut part2) = (Vec::new(), Vec::new());
        for (i, &b) in branch.points.iter().enumerate() {
            if mask >> i & 1 == 1 {
                part1.push(b);
            } else {
                part2.push(b);
            }
        }
        EvenPartition { part1, part2 }
    }

    pub fn part1(&self) -> &[BranchPoint] {
        &self.part1
    }

    pub fn part2(&self) -> &[BranchPoint] {
        &self.part2
    }

    pub fn swapped(&self) -> EvenPartition {
        EvenPartition { part1: self.part2.clone(), part2: self.part1.clone() }
    }

    pub fn encode(&self) -> [Vec<String>; 2] {
        [
            self.part1.iter().map(BranchPoint::encode).collect(),
            self.part2.iter().map(BranchPoint::encode).collect(),
        ]
    }
}

impl fmt::Display for EvenPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b] = self.encode();
        write!(f, "{{{}}} | {{{}}}", a.join("; "), b.join("; "))
    }
}

pub fn enumerate_even_partitions(branch: &BranchSet) -> Vec<EvenPartition> {
    partition_masks(branch.len())
        .into_iter()
        .map(|m| EvenPartition::from_mask(branch, m))
        .collect()
}

/// Quotient curve attached to one part: y^2 = Π (x - b) over the affine points.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum QuotientCurve {
    /// Two branch points; keeps the (degree 1 or 2) right-hand side.
    Genus0(Poly),
    Curve(HyperellipticCurve),
}

impl QuotientCurve {
    pub fn genus(&self) -> usize {
        match self {
            QuotientCurve::Genus0(_) => 0,
            QuotientCurve::Curve(c) => c.genus(),
        }
    }

    pub fn f(&self) -> &Poly {
        match self {
            QuotientCurve::Genus0(f) => f,
            QuotientCurve::Curve(c) => c.f(),
        }
    }

    pub fn p_rank(&self) -> Result<usize> {
        match self {
            QuotientCurve::Genus0(_) => Ok(0),
            QuotientCurve::Curve(c) => cartier::p_rank(c),
        }
    }
}

pub fn subcurve_from_part(part: &[BranchPoint], ctx: &Arc<FieldCtx>) -> Result<QuotientCurve> {
    if part.is_empty() || part.len() % 2 == 1 {
        return Err(Error::InvalidPartition(format!("part of odd size {}", part.len())));
    }
    let roots: Vec<FieldElement> = part
        .iter()
        .filter_map(|b| match b {
            BranchPoint::Finite(e) => Some(*e),
            BranchPoint::Infinity => None,
        })
        .collect();
    let f = Poly::from_roots(ctx, &roots)?;
    if part.len() == 2 {
        Ok(QuotientCurve::Genus0(f))
    } else {
        Ok(QuotientCurve::Curve(HyperellipticCurve::new(f)?))
    }
}

pub fn prym_p_rank(curve: &HyperellipticCurve, partition: &EvenPartition) -> Result<usize> {
    let ctx = curve.ctx();
    Ok(subcurve_from_part(&partition.part1, ctx)?.p_rank()?
        + subcurve_from_part(&partition.part2, ctx)?.p_rank()?)
}

/// One unramified double cover with its three p-ranks.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CoverDatum {
    pub base: HyperellipticCurve,
    pub partition: EvenPartition,
    pub quotient1: QuotientCurve,
    pub quotient2: QuotientCurve,
    /// p-rank of the base curve
    pub f: usize,
    /// p-rank of the Prym variety
    pub f_prime: usize,
    /// p-rank of the cover, f + f_prime
    pub f_y: usize,
}

/// JSON form of a [`CoverDatum`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverRecord {
    pub field: String,
    pub f_coeffs: Vec<String>,
    pub partition: [Vec<String>; 2],
    pub f: usize,
    pub f_prime: usize,
    #[serde(rename = "f_Y")]
    pub f_y: usize,
}

impl CoverDatum {
    pub fn record(&self) -> CoverRecord {
        CoverRecord {
            field: self.base.ctx().spec(),
            f_coeffs: self.base.f().coeffs().iter().map(|c| c.encode()).collect(),
            partition: self.partition.encode(),
            f: self.f,
            f_prime: self.f_prime,
            f_y: self.f_y,
        }
    }
}

impl CoverRecord {
    /// Rebuilds the cover, taking the recorded p-ranks at face value.
    pub fn to_datum(&self) -> Result<CoverDatum> {
        let ctx = FieldCtx::parse_spec(&self.field)?;
        let coeffs = self
            .f_coeffs
            .iter()
            .map(|s| ctx.parse_element(s))
            .collect::<Result<Vec<_>>>()?;
        let base = HyperellipticCurve::new(Poly::new(&ctx, coeffs)?)?;
        let branch = branch_set(&base)?;
        let part1 = self.partition[0]
            .iter()
            .map(|s| BranchPoint::parse(&ctx, s))
            .collect::<Result<Vec<_>>>()?;
        let partition = EvenPartition::new(&branch, part1)?;
        Ok(CoverDatum {
            quotient1: subcurve_from_part(&partition.part1, &ctx)?,
            quotient2: subcurve_from_part(&partition.part2, &ctx)?,
            base,
            partition,
            f: self.f,
            f_prime: self.f_prime,
            f_y: self.f_y,
        })
    }
}

fn check_cover_genus(curve: &HyperellipticCurve) -> Result<()> {
    if curve.genus() > COVER_GENUS_CAP {
        Err(Error::GenusCap { genus: curve.genus(), cap: COVER_GENUS_CAP })
    } else {
        Ok(())
    }
}

pub fn cover_profile(curve: &HyperellipticCurve) -> Result<Vec<CoverDatum>> {
    check_cover_genus(curve)?;
    let branch = branch_set(curve)?;
    let ctx = curve.ctx();
    let f = cartier::p_rank(curve)?;
    enumerate_even_partitions(&branch)
        .into_iter()
        .map(|partition| {
            let quotient1 = subcurve_from_part(&partition.part1, ctx)?;
            let quotient2 = subcurve_from_part(&partition.part2, ctx)?;
            let f_prime = quotient1.p_rank()? + quotient2.p_rank()?;
            Ok(CoverDatum {
                base: curve.clone(),
                partition,
                quotient1,
                quotient2,
                f,
                f_prime,
                f_y: f + f_prime,
            })
        })
        .collect()
}

/// p-ranks of a curve and of all its double-cover Pryms, from the branch
/// points alone. `points[i] = None` stands for ∞ and must come first. The
/// Prym ranks follow [`partition_masks`] order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfileRanks {
    pub f: usize,
    pub f_primes: Vec<usize>,
}

/// Part-curve p-ranks, memoized by subset mask.
pub struct SubsetRanks<'a, F: Field> {
    field: &'a F,
    points: &'a [Option<F::Elem>],
    memo: Vec<u8>,
}

impl<'a, F: Field> SubsetRanks<'a, F> {
    pub fn new(field: &'a F, points: &'a [Option<F::Elem>]) -> Self {
        SubsetRanks { field, points, memo: vec![u8::MAX; 1 << points.len()] }
    }

    pub fn rank(&mut self, mask: u32) -> usize {
        let slot = &mut self.memo[mask as usize];
        if *slot != u8::MAX {
            return *slot as usize;
        }
        let size = mask.count_ones() as usize;
        let r = if size <= 2 {
            0
        } else {
            let roots: Vec<F::Elem> = (0..self.points.len())
                .filter(|&i| mask >> i & 1 == 1)
                .filter_map(|i| self.points[i])
                .collect();
            let f = dense::from_roots(self.field, &roots);
            cartier::p_rank_of(self.field, &f)
        };
        self.memo[mask as usize] = r as u8;
        r
    }

    /// Prym p-rank of the cover with first part `mask`.
    pub fn prym(&mut self, mask: u32) -> usize {
        let full = (1u32 << self.points.len()) - 1;
        self.rank(mask) + self.rank(full & !mask)
    }
}

pub fn profile_ranks<F: Field>(field: &F, points: &[Option<F::Elem>]) -> ProfileRanks {
    let full = (1u32 << points.len()) - 1;
    let mut sub = SubsetRanks::new(field, points);
    let f = sub.rank(full);
    let f_primes = partition_masks(points.len()).into_iter().map(|m| sub.prym(m)).collect();
    ProfileRanks { f, f_primes }
}

/// Whether the theta divisor contains a point of order 2, i.e. whether some
/// double cover has a non-ordinary Prym.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaReport {
    pub contains_order_2: bool,
    pub witnesses: Vec<EvenPartition>,
}

pub fn theta_two_torsion_report(curve: &HyperellipticCurve) -> Result<ThetaReport> {
    let g = curve.genus();
    let witnesses: Vec<EvenPartition> = cover_profile(curve)?
        .into_iter()
        .filter(|c| c.f_prime + 1 < g)
        .map(|c| c.partition)
        .collect();
    Ok(ThetaReport { contains_order_2: !witnesses.is_empty(), witnesses })
}

/// Point-count check of a cover: the fiber product Y of the part curves must
/// satisfy #Y = #X' + #C1 + #C2 - 2(q^m + 1), X': y^2 = f1 f2, over F_{q^m}.
/// Returns (direct count of Y, right-hand side).
pub fn fiber_product_trace_check(
    curve: &HyperellipticCurve,
    partition: &EvenPartition,
    m: usize,
    cap: u128,
) -> Result<(u64, i64)> {
    let ctx = curve.ctx();
    let q1 = subcurve_from_part(&partition.part1, ctx)?;
    let q2 = subcurve_from_part(&partition.part2, ctx)?;
    let (f1, f2) = (q1.f(), q2.f());
    let y = zeta::count_fiber_product_points_with_cap(f1, f2, m, cap)?;
    let x = f1.mul(f2)?;
    let qm = (ctx.order().expect("small field") as i64).pow(m as u32);
    let rhs = [&x, f1, f2]
        .iter()
        .map(|f| zeta::count_points_with_cap(f, m, cap).map(|n| n as i64))
        .sum::<Result<i64>>()?
        - 2 * (qm + 1);
    Ok((y, rhs))
}

/// (Prym p-rank, cover p-rank) read off L_{C1} L_{C2} and L_X L_{C1} L_{C2} mod p.
pub fn cover_p_rank_zeta(
    curve: &HyperellipticCurve,
    partition: &EvenPartition,
    cap: u128,
) -> Result<(usize, usize)> {
    let ctx = curve.ctx();
    let p = ctx.p() as u64;
    let lx = zeta::l_polynomial_with_cap(curve.f(), cap)?;
    let l1 = zeta::l_polynomial_with_cap(subcurve_from_part(&partition.part1, ctx)?.f(), cap)?;
    let l2 = zeta::l_polynomial_with_cap(subcurve_from_part(&partition.part2, ctx)?.f(), cap)?;
    let prym = l1.mul(&l2);
    Ok((prym.degree_mod(p), lx.mul(&prym).degree_mod(p)))
}
