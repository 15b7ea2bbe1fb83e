//! Sparse polynomials in (λ, t1, t2) and the Cartier matrix of the genus 2
//! family y^2 = x(x-1)(x-λ)(x-t1)(x-t2) with symbolic coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gf::{embed_into, Field, FieldCtx, FieldElement, DEFAULT_ENUM_CAP};

/// Largest prime for which the symbolic expansion is attempted.
pub const SYMBOLIC_PRIME_CAP: u32 = 13;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    Lambda,
    T1,
    T2,
}

impl Var {
    fn index(self) -> usize {
        match self {
            Var::Lambda => 0,
            Var::T1 => 1,
            Var::T2 => 2,
        }
    }

    fn name(i: usize) -> &'static str {
        ["λ", "t1", "t2"][i]
    }
}

type Exponents = [u32; 3];

#[derive(Clone, PartialEq, Eq)]
pub struct MvPoly {
    ctx: Arc<FieldCtx>,
    terms: BTreeMap<Exponents, FieldElement>,
}

impl MvPoly {
    pub fn zero(ctx: &Arc<FieldCtx>) -> MvPoly {
        MvPoly { ctx: ctx.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(ctx: &Arc<FieldCtx>, c: FieldElement) -> Result<MvPoly> {
        MvPoly::monomial(ctx, [0, 0, 0], c)
    }

    pub fn one(ctx: &Arc<FieldCtx>) -> MvPoly {
        MvPoly::monomial(ctx, [0, 0, 0], ctx.one()).expect("one belongs to its field")
    }

    pub fn var(ctx: &Arc<FieldCtx>, v: Var) -> MvPoly {
        let mut e = [0; 3];
        e[v.index()] = 1;
        MvPoly::monomial(ctx, e, ctx.one()).expect("one belongs to its field")
    }

    pub fn monomial(ctx: &Arc<FieldCtx>, exponents: [u32; 3], c: FieldElement) -> Result<MvPoly> {
        if !ctx.owns(&c) {
            return Err(Error::ContextMismatch);
        }
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exponents, c);
        }
        Ok(MvPoly { ctx: ctx.clone(), terms })
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms as (exponents of λ, t1, t2; coefficient), in print order.
    pub fn terms(&self) -> impl Iterator<Item = ([u32; 3], FieldElement)> + '_ {
        self.terms.iter().rev().map(|(e, c)| (*e, *c))
    }

    pub fn coeff(&self, exponents: [u32; 3]) -> FieldElement {
        self.terms.get(&exponents).copied().unwrap_or_else(|| self.ctx.zero())
    }

    fn same_ctx(&self, other: &MvPoly) -> Result<()> {
        if self.ctx.id() == other.ctx.id() {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    fn accumulate(&mut self, e: Exponents, c: FieldElement) {
        let field = self.ctx.clone();
        let entry = self.terms.entry(e).or_insert_with(|| field.zero());
        *entry = field.add(*entry, c);
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, other: &MvPoly) -> Result<MvPoly> {
        self.same_ctx(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.accumulate(*e, *c);
        }
        Ok(out)
    }

    pub fn neg(&self) -> MvPoly {
        MvPoly {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(e, c)| (*e, self.ctx.neg(*c))).collect(),
        }
    }

    pub fn sub(&self, other: &MvPoly) -> Result<MvPoly> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &MvPoly) -> Result<MvPoly> {
        self.same_ctx(other)?;
        let mut out = MvPoly::zero(&self.ctx);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
                out.accumulate(e, self.ctx.mul(*ca, *cb));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: FieldElement) -> Result<MvPoly> {
        self.mul(&MvPoly::constant(&self.ctx, c)?)
    }

    pub fn pow(&self, n: u32) -> MvPoly {
        (0..n).fold(MvPoly::one(&self.ctx), |acc, _| acc.mul(self).expect("same field"))
    }

    /// The same polynomial over an extension field.
    pub fn lift(&self, target: &Arc<FieldCtx>) -> Result<MvPoly> {
        if target.id() == self.ctx.id() {
            return Ok(self.clone());
        }
        let emb = embed_into(&self.ctx, target, DEFAULT_ENUM_CAP)?;
        Ok(MvPoly {
            ctx: target.clone(),
            terms: self.terms.iter().map(|(e, c)| (*e, emb.map(target.as_ref(), c))).collect(),
        })
    }

    /// Substitutes the given variables; values must lie in the coefficient
    /// field (see [`MvPoly::specialize_in`] for extensions).
    pub fn specialize(&self, values: [Option<FieldElement>; 3]) -> Result<MvPoly> {
        self.specialize_in_place(values)
    }

    /// [`MvPoly::specialize`] with an explicit extension field for the values.
    pub fn specialize_in(&self, ext: &Arc<FieldCtx>, values: [Option<FieldElement>; 3]) -> Result<MvPoly> {
        self.lift(ext)?.specialize_in_place(values)
    }

    fn specialize_in_place(&self, values: [Option<FieldElement>; 3]) -> Result<MvPoly> {
        if values.iter().flatten().any(|v| !self.ctx.owns(v)) {
            return Err(Error::ContextMismatch);
        }
        let field = self.ctx.as_ref();
        let mut out = MvPoly::zero(&self.ctx);
        for (e, c) in &self.terms {
            let mut coeff = *c;
            let mut rest = *e;
            for (i, v) in values.iter().enumerate() {
                if let Some(v) = v {
                    coeff = field.mul(coeff, field.pow(*v, e[i] as u64));
                    rest[i] = 0;
                }
            }
            out.accumulate(rest, coeff);
        }
        Ok(out)
    }

    /// Full evaluation.
    pub fn evaluate(&self, lambda: FieldElement, t1: FieldElement, t2: FieldElement) -> Result<FieldElement> {
        let rest = self.specialize_in_place([Some(lambda), Some(t1), Some(t2)])?;
        Ok(rest.coeff([0, 0, 0]))
    }

    /// The nonzero constant c with self = c·other, if there is one.
    pub fn scalar_ratio(&self, other: &MvPoly) -> Result<Option<FieldElement>> {
        self.same_ctx(other)?;
        let Some((e, a)) = self.terms.iter().next_back() else {
            return Ok(None);
        };
        let Some(b_inv) = self.ctx.inv(other.coeff(*e)) else {
            return Ok(None);
        };
        let c = self.ctx.mul(*a, b_inv);
        Ok((other.scale(c)? == *self).then_some(c))
    }
}

impl fmt::Display for MvPoly {
    /// Terms in descending lexicographic order of (λ, t1, t2) exponents, as
    /// `3λ^2t1t2^2 + 4t1 + 1`. Coefficients over extensions are bracketed.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let ext = self.ctx.degree() > 1;
        let parts: Vec<String> = self
            .terms()
            .map(|(e, c)| {
                let mut s = String::new();
                let constant = e == [0, 0, 0];
                if ext {
                    if constant || c != self.ctx.one() {
                        s.push_str(&format!("[{}]", c.encode()));
                    }
                } else if constant || c != self.ctx.one() {
                    s.push_str(&c.encode());
                }
                for (i, &k) in e.iter().enumerate() {
                    match k {
                        0 => {}
                        1 => s.push_str(Var::name(i)),
                        _ => s.push_str(&format!("{}^{}", Var::name(i), k)),
                    }
                }
                s
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for MvPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MvPoly({})", self)
    }
}

impl MvPoly {
    /// Parses the printed form. Variables may be written `λ` or `l`; a term is
    /// an optional coefficient (integer, or `[c0,c1,...]` over an extension)
    /// followed by powers of variables.
    pub fn parse(ctx: &Arc<FieldCtx>, s: &str) -> Result<MvPoly> {
        let mut out = MvPoly::zero(ctx);
        let s = s.trim();
        if s == "0" {
            return Ok(out);
        }
        for term in s.split('+') {
            let term: String = term.chars().filter(|c| !c.is_whitespace()).collect();
            if term.is_empty() {
                return Err(Error::Parse(format!("empty term in {s:?}")));
            }
            let (coeff, mut rest) = if let Some(body) = term.strip_prefix('[') {
                let end = body.find(']').ok_or_else(|| Error::Parse(format!("unclosed bracket in {term:?}")))?;
                (ctx.parse_element(&body[..end])?, &body[end + 1..])
            } else {
                let digits = term.find(|c: char| !c.is_ascii_digit()).unwrap_or(term.len());
                let c = if digits == 0 {
                    ctx.one()
                } else {
                    let n: i64 = term[..digits].parse().map_err(|_| Error::Parse(term.clone()))?;
                    ctx.from_int(n)
                };
                (c, &term[digits..])
            };
            let mut e = [0u32; 3];
            while !rest.is_empty() {
                let (i, after) = if let Some(r) = rest.strip_prefix("λ").or_else(|| rest.strip_prefix('l')) {
                    (0, r)
                } else if let Some(r) = rest.strip_prefix("t1") {
                    (1, r)
                } else if let Some(r) = rest.strip_prefix("t2") {
                    (2, r)
                } else {
                    return Err(Error::Parse(format!("unexpected {rest:?} in {term:?}")));
                };
                let (power, after) = match after.strip_prefix('^') {
                    Some(r) => {
                        let d = r.find(|c: char| !c.is_ascii_digit()).unwrap_or(r.len());
                        let n: u32 = r[..d].parse().map_err(|_| Error::Parse(term.clone()))?;
                        (n, &r[d..])
                    }
                    None => (1, after),
                };
                e[i] += power;
                rest = after;
            }
            out.accumulate(e, coeff);
        }
        Ok(out)
    }
}

/// The 2x2 Cartier matrix [[c_{p-1}, c_{p-2}], [c_{2p-1}, c_{2p-2}]] of the
/// genus 2 family, entries in F_p[λ, t1, t2].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicCartier {
    pub p: u32,
    pub entries: [[MvPoly; 2]; 2],
}

impl SymbolicCartier {
    /// c_i of f^((p-1)/2) for i in {p-2, p-1, 2p-2, 2p-1}.
    pub fn coefficient(&self, i: u32) -> Option<&MvPoly> {
        let p = self.p;
        match i {
            _ if i == p - 1 => Some(&self.entries[0][0]),
            _ if i == p - 2 => Some(&self.entries[0][1]),
            _ if i == 2 * p - 1 => Some(&self.entries[1][0]),
            _ if i == 2 * p - 2 => Some(&self.entries[1][1]),
            _ => None,
        }
    }

    pub fn determinant(&self) -> MvPoly {
        let [[a, b], [c, d]] = &self.entries;
        a.mul(d).and_then(|ad| ad.sub(&b.mul(c)?)).expect("entries share a field")
    }
}

pub fn symbolic_cartier_entries(p: u32) -> Result<SymbolicCartier> {
    if p > SYMBOLIC_PRIME_CAP {
        return Err(Error::CapExceeded {
            what: "symbolic expansion prime",
            size: p as u128,
            cap: SYMBOLIC_PRIME_CAP as u128,
        });
    }
    let ctx = FieldCtx::prime(p)?;
    let one = MvPoly::one(&ctx);
    let zero = MvPoly::zero(&ctx);
    // x - r for r in {0, 1, λ, t1, t2}, as coefficient lists in x
    let roots = [
        zero.clone(),
        one.clone(),
        MvPoly::var(&ctx, Var::Lambda),
        MvPoly::var(&ctx, Var::T1),
        MvPoly::var(&ctx, Var::T2),
    ];
    let mut f = vec![one.clone()];
    for r in &roots {
        let mut next = vec![zero.clone(); f.len() + 1];
        for (i, c) in f.iter().enumerate() {
            next[i + 1] = next[i + 1].add(c)?;
            next[i] = next[i].sub(&c.mul(r)?)?;
        }
        f = next;
    }
    // only x-degrees below 2p are ever read
    let len = 2 * p as usize;
    let mut h = vec![one];
    for _ in 0..(p - 1) / 2 {
        let mut next = vec![zero.clone(); len.min(h.len() + f.len() - 1)];
        for (i, a) in h.iter().enumerate() {
            for (j, b) in f.iter().enumerate() {
                if i + j < len && !a.is_zero() && !b.is_zero() {
                    next[i + j] = next[i + j].add(&a.mul(b)?)?;
                }
            }
        }
        h = next;
    }
    let c = |i: usize| h.get(i).cloned().unwrap_or_else(|| zero.clone());
    let p = p as usize;
    Ok(SymbolicCartier {
        p: p as u32,
        entries: [[c(p - 1), c(p - 2)], [c(2 * p - 1), c(2 * p - 2)]],
    })
}

/// D = c_{p-1} c_{2p-2} - c_{p-2} c_{2p-1}.
pub fn d_poly(p: u32) -> Result<MvPoly> {
    Ok(symbolic_cartier_entries(p)?.determinant())
}

/// Outcome of comparing a specialization against an expected polynomial for
/// one choice of root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootComparison {
    pub root: FieldElement,
    pub exact: bool,
    /// c with specialized = c·expected, when it exists
    pub ratio: Option<FieldElement>,
}

/// For every root a of `minimal` in `ext`, specializes λ = lambda(a) in `d`
/// and compares with expected(a). A named root of `minimal` is only
/// meaningful up to conjugacy, so all roots are reported.
pub fn compare_over_roots(
    d: &MvPoly,
    ext: &Arc<FieldCtx>,
    minimal: &crate::poly::Poly,
    lambda: impl Fn(FieldElement) -> FieldElement,
    expected: impl Fn(FieldElement) -> Result<MvPoly>,
) -> Result<Vec<RootComparison>> {
    minimal
        .roots_in(ext, DEFAULT_ENUM_CAP)?
        .into_iter()
        .map(|a| {
            let got = d.specialize_in(ext, [Some(lambda(a)), None, None])?;
            let want = expected(a)?;
            Ok(RootComparison { root: a, exact: got == want, ratio: got.scalar_ratio(&want)? })
        })
        .collect()
}
