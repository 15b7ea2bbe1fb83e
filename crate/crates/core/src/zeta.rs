//! Point counting over extension fields and L-polynomials: an independent
//! route to the p-rank (the degree of L(t) mod p) and to Prym p-ranks through
//! direct counts on fiber products.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::cartier::HyperellipticCurve;
use crate::error::{Error, Result};
use crate::gf::{Embedding, Field, FieldCtx, TableField};
use crate::poly::{dense, Poly};

/// Default bound on the size of the field enumerated when counting.
pub const DEFAULT_COUNT_CAP: u128 = 1 << 22;

type TableCache = Mutex<HashMap<(u32, usize), Arc<TableField>>>;

fn table_cache() -> &'static TableCache {
    static CACHE: OnceLock<TableCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Log tables for F_{p^n} with the default modulus, built once per process.
pub fn table_for(p: u32, n: usize, cap: u128) -> Result<Arc<TableField>> {
    let size = (p as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if size > cap {
        return Err(Error::CapExceeded { what: "point count field", size, cap });
    }
    let mut cache = table_cache().lock().expect("table cache poisoned");
    if let Some(t) = cache.get(&(p, n)) {
        return Ok(t.clone());
    }
    let t = Arc::new(TableField::new(FieldCtx::new(p, n, None)?, cap)?);
    cache.insert((p, n), t.clone());
    Ok(t)
}

/// Polynomials over F_q carried into F_{q^m} for counting.
struct Lifted {
    table: Arc<TableField>,
    /// size of the coefficient field q
    q: u32,
    polys: Vec<Vec<u32>>,
}

fn lift(polys: &[&Poly], m: usize, cap: u128) -> Result<Lifted> {
    let ctx = polys[0].ctx().clone();
    if polys.iter().any(|f| f.ctx().id() != ctx.id()) {
        return Err(Error::ContextMismatch);
    }
    let table = table_for(ctx.p(), ctx.degree() * m, cap)?;
    let q = ctx.order().expect("counting field fits") as u32;
    let emb = Embedding::find(&ctx, table.as_ref(), table.subfield(q))
        .expect("F_q embeds in F_{q^m}");
    let polys = polys
        .iter()
        .map(|f| f.coeffs().iter().map(|c| emb.map(table.as_ref(), c)).collect())
        .collect();
    Ok(Lifted { table, q, polys })
}

/// Σ term(x) over x in F_Q, where `term` is invariant under x -> x^q. Each
/// orbit of the q-power Frobenius is evaluated once and weighted by its size.
fn frobenius_orbit_sum(t: &TableField, q: u32, term: impl Fn(u32) -> i64) -> i64 {
    let n = t.order() as u64 - 1;
    let mut total = term(t.zero());
    if n + 1 == q as u64 {
        for i in 0..n {
            total += term(i as u32);
        }
        return total;
    }
    let q = q as u64;
    'outer: for i in 0..n {
        let mut j = i;
        let mut size = 0;
        loop {
            j = j * q % n;
            size += 1;
            if j == i {
                break;
            }
            if j < i {
                continue 'outer;
            }
        }
        total += size * term(i as u32);
    }
    total
}

fn chi_at_infinity(t: &TableField, f: &[u32]) -> i64 {
    let deg = f.len() - 1;
    if deg % 2 == 1 {
        0
    } else {
        t.chi(*f.last().expect("nonzero polynomial"))
    }
}

/// #X(F_{q^m}) for the smooth projective model of y^2 = f(x).
pub fn count_points(curve: &HyperellipticCurve, m: usize) -> Result<u64> {
    count_points_with_cap(curve.f(), m, DEFAULT_COUNT_CAP)
}

/// Point count of the smooth model of y^2 = f(x) for any nonzero f without
/// repeated roots, including the genus-0 cases deg f <= 2.
pub fn count_points_with_cap(f: &Poly, m: usize, cap: u128) -> Result<u64> {
    if f.is_zero() {
        return Err(Error::InvalidCurve("y^2 = 0".into()));
    }
    let lifted = lift(&[f], m, cap)?;
    let t = lifted.table.as_ref();
    let coeffs = &lifted.polys[0];
    let affine = frobenius_orbit_sum(t, lifted.q, |x| 1 + t.chi(dense::eval(t, coeffs, x)));
    // smooth model: one point over ∞ when deg f is odd, otherwise two or none
    // depending on whether the leading coefficient is a square
    let infinity = 1 + chi_at_infinity(t, coeffs);
    Ok((affine + infinity) as u64)
}

/// Number of points over F_{q^m} of the normalized fiber product of
/// y1^2 = f1(x) and y2^2 = f2(x) over the x-line. f1 f2 must be squarefree.
pub fn count_fiber_product_points(f1: &Poly, f2: &Poly, m: usize) -> Result<u64> {
    count_fiber_product_points_with_cap(f1, f2, m, DEFAULT_COUNT_CAP)
}

pub fn count_fiber_product_points_with_cap(f1: &Poly, f2: &Poly, m: usize, cap: u128) -> Result<u64> {
    if f1.ctx().id() != f2.ctx().id() {
        return Err(Error::ContextMismatch);
    }
    if f1.degree().unwrap_or(0) == 0 || f2.degree().unwrap_or(0) == 0 {
        return Err(Error::InvalidCurve("fiber product factors must be nonconstant".into()));
    }
    if !f1.mul(f2)?.is_squarefree()? {
        return Err(Error::OverlappingBranch);
    }
    let lifted = lift(&[f1, f2], m, cap)?;
    let t = lifted.table.as_ref();
    let (a, b) = (&lifted.polys[0], &lifted.polys[1]);
    // Over an affine x the fiber has (1 + χ(f1))(1 + χ(f2)) points: 4 or 0
    // when x is unbranched, 2 or 0 when exactly one factor vanishes (the
    // loci are disjoint, so both never vanish).
    let affine = frobenius_orbit_sum(t, lifted.q, |x| {
        (1 + t.chi(dense::eval(t, a, x))) * (1 + t.chi(dense::eval(t, b, x)))
    });
    // Over ∞, by the parities of (deg f1, deg f2):
    //   (even, even): unbranched, 4 points iff both leading coefficients are squares
    //   (odd, even):  inertia fixes y2, 2 points iff lc(f2) is a square
    //   (even, odd):  symmetric
    //   (odd, odd):   inertia fixes y1 y2, 2 points iff lc(f1) lc(f2) is a square
    let (d1, d2) = (a.len() - 1, b.len() - 1);
    let (l1, l2) = (*a.last().unwrap(), *b.last().unwrap());
    let infinity = match (d1 % 2, d2 % 2) {
        (0, 0) => (1 + t.chi(l1)) * (1 + t.chi(l2)),
        (1, 0) => 1 + t.chi(l2),
        (0, 1) => 1 + t.chi(l1),
        _ => 1 + t.chi(t.mul(l1, l2)),
    };
    Ok((affine + infinity) as u64)
}

/// L(t) = 1 + a_1 t + ... + a_{2g} t^{2g}, the numerator of the zeta function
/// of a curve of genus g over F_q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LPolynomial {
    coeffs: Vec<i64>,
    q: u64,
    genus: usize,
}

impl LPolynomial {
    /// Reconstructs L from N_m = #X(F_{q^m}) for m = 1..=g.
    pub fn from_counts(q: u64, genus: usize, counts: &[u64]) -> Result<LPolynomial> {
        if counts.len() < genus {
            return Err(Error::InconsistentCounts(format!(
                "need {genus} counts, got {}",
                counts.len()
            )));
        }
        let q128 = q as i128;
        let sums: Vec<i128> = (1..=genus)
            .map(|m| q128.pow(m as u32) + 1 - counts[m - 1] as i128)
            .collect();
        let mut a: Vec<i128> = vec![1];
        for i in 1..=genus {
            let s: i128 = (1..=i).map(|j| sums[j - 1] * a[i - j]).sum();
            if s % i as i128 != 0 {
                return Err(Error::InconsistentCounts(format!("Newton step {i} not integral")));
            }
            a.push(-s / i as i128);
        }
        for i in (0..genus).rev() {
            a.push(q128.pow((genus - i) as u32) * a[i]);
        }
        let l = LPolynomial { coeffs: a.into_iter().map(|c| c as i64).collect(), q, genus };
        for m in 1..=2 * genus {
            if l.predicted_count(m) < 0 {
                return Err(Error::InconsistentCounts(format!("negative count over F_q^{m}")));
            }
        }
        Ok(l)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    /// Power sums S_m of the reciprocal roots.
    fn power_sums(&self, upto: usize) -> Vec<i128> {
        let a = |i: usize| self.coeffs.get(i).copied().unwrap_or(0) as i128;
        let mut s: Vec<i128> = Vec::with_capacity(upto);
        for m in 1..=upto {
            let tail: i128 = (1..m).map(|j| s[j - 1] * a(m - j)).sum();
            s.push(-(m as i128) * a(m) - tail);
        }
        s
    }

    /// #X(F_{q^m}) implied by L.
    pub fn predicted_count(&self, m: usize) -> i128 {
        let s = self.power_sums(m);
        (self.q as i128).pow(m as u32) + 1 - s[m - 1]
    }

    /// Degree of L mod p, which is the p-rank.
    pub fn degree_mod(&self, p: u64) -> usize {
        self.coeffs
            .iter()
            .rposition(|&c| c.rem_euclid(p as i64) != 0)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &LPolynomial) -> LPolynomial {
        assert_eq!(self.q, other.q, "L-polynomials over different fields");
        let mut out = vec![0i64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &x) in self.coeffs.iter().enumerate() {
            for (j, &y) in other.coeffs.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        LPolynomial { coeffs: out, q: self.q, genus: self.genus + other.genus }
    }

    /// The trivial L-polynomial of a genus-0 curve.
    pub fn one(q: u64) -> LPolynomial {
        LPolynomial { coeffs: vec![1], q, genus: 0 }
    }

    /// a_1 = -(trace of Frobenius) ... returned here as the trace q + 1 - N_1.
    pub fn trace(&self) -> i64 {
        -self.coeffs.get(1).copied().unwrap_or(0)
    }
}

pub fn l_polynomial(curve: &HyperellipticCurve) -> Result<LPolynomial> {
    l_polynomial_with_cap(curve.f(), DEFAULT_COUNT_CAP)
}

/// L-polynomial of y^2 = f for squarefree f of any degree >= 1.
pub fn l_polynomial_with_cap(f: &Poly, cap: u128) -> Result<LPolynomial> {
    let deg = f.degree().unwrap_or(0);
    let q = f.ctx().order().and_then(|o| u64::try_from(o).ok()).unwrap_or(u64::MAX);
    if deg <= 2 {
        return Ok(LPolynomial::one(q));
    }
    let genus = (deg - 1) / 2;
    let counts = (1..=genus)
        .map(|m| count_points_with_cap(f, m, cap))
        .collect::<Result<Vec<_>>>()?;
    LPolynomial::from_counts(q, genus, &counts)
}

pub fn p_rank_zeta(curve: &HyperellipticCurve) -> Result<usize> {
    Ok(l_polynomial(curve)?.degree_mod(curve.ctx().p() as u64))
}

/// Compares the count over F_{q^(g+1)} predicted by L with a direct count.
/// `None` when that extension is beyond the cap.
pub fn check_extra_count(curve: &HyperellipticCurve, cap: u128) -> Result<Option<bool>> {
    let l = l_polynomial_with_cap(curve.f(), cap)?;
    let m = curve.genus() + 1;
    match count_points_with_cap(curve.f(), m, cap) {
        Ok(n) => Ok(Some(n as i128 == l.predicted_count(m))),
        Err(Error::CapExceeded { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}
