//! Dense univariate polynomials over a finite field.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gf::{embed_into, Field, FieldCtx, FieldElement};

/// Routines on raw coefficient slices (constant term first), generic over the
/// field representation. Results are not normalized unless stated.
pub mod dense {
    use crate::gf::Field;

    pub fn trim<F: Field>(field: &F, v: &mut Vec<F::Elem>) {
        while let Some(&last) = v.last() {
            if field.is_zero(last) {
                v.pop();
            } else {
                break;
            }
        }
    }

    /// Product truncated to the first `len` coefficients.
    pub fn mul_trunc<F: Field>(field: &F, a: &[F::Elem], b: &[F::Elem], len: usize) -> Vec<F::Elem> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let n = (a.len() + b.len() - 1).min(len);
        let mut out = vec![field.zero(); n];
        for (i, &x) in a.iter().enumerate().take(n) {
            if field.is_zero(x) {
                continue;
            }
            for (j, &y) in b.iter().enumerate().take(n - i) {
                out[i + j] = field.add(out[i + j], field.mul(x, y));
            }
        }
        out
    }

    /// `a^e` truncated to the first `len` coefficients.
    pub fn pow_trunc<F: Field>(field: &F, a: &[F::Elem], e: u64, len: usize) -> Vec<F::Elem> {
        let mut acc = vec![field.one()];
        acc.truncate(len);
        for _ in 0..e {
            acc = mul_trunc(field, &acc, a, len);
        }
        acc
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots<F: Field>(field: &F, roots: &[F::Elem]) -> Vec<F::Elem> {
        let mut out = vec![field.one()];
        for &r in roots {
            let mut next = vec![field.zero(); out.len() + 1];
            for (i, &c) in out.iter().enumerate() {
                next[i + 1] = field.add(next[i + 1], c);
                next[i] = field.sub(next[i], field.mul(c, r));
            }
            out = next;
        }
        out
    }

    pub fn eval<F: Field>(field: &F, a: &[F::Elem], x: F::Elem) -> F::Elem {
        a.iter().rev().fold(field.zero(), |acc, &c| field.add(field.mul(acc, x), c))
    }
}

/// A polynomial with coefficients in one [`FieldCtx`], normalized so that the
/// leading coefficient is nonzero (the zero polynomial has no coefficients).
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    ctx: Arc<FieldCtx>,
    coeffs: Vec<FieldElement>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self.encode())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encode())
    }
}

impl Poly {
    pub fn new(ctx: &Arc<FieldCtx>, coeffs: Vec<FieldElement>) -> Result<Poly> {
        if coeffs.iter().any(|c| !ctx.owns(c)) {
            return Err(Error::ContextMismatch);
        }
        Ok(Self::from_raw(ctx, coeffs))
    }

    pub(crate) fn from_raw(ctx: &Arc<FieldCtx>, mut coeffs: Vec<FieldElement>) -> Poly {
        dense::trim(ctx.as_ref(), &mut coeffs);
        Poly { ctx: ctx.clone(), coeffs }
    }

    /// From integer coefficients in the prime field, constant term first.
    pub fn from_ints(ctx: &Arc<FieldCtx>, coeffs: &[i64]) -> Poly {
        Self::from_raw(ctx, coeffs.iter().map(|&c| ctx.from_int(c)).collect())
    }

    pub fn zero(ctx: &Arc<FieldCtx>) -> Poly {
        Poly { ctx: ctx.clone(), coeffs: Vec::new() }
    }

    pub fn one(ctx: &Arc<FieldCtx>) -> Poly {
        Poly { ctx: ctx.clone(), coeffs: vec![ctx.one()] }
    }

    pub fn x(ctx: &Arc<FieldCtx>) -> Poly {
        Poly { ctx: ctx.clone(), coeffs: vec![ctx.zero(), ctx.one()] }
    }

    /// Monic polynomial `prod (x - r)`.
    pub fn from_roots(ctx: &Arc<FieldCtx>, roots: &[FieldElement]) -> Result<Poly> {
        if roots.iter().any(|r| !ctx.owns(r)) {
            return Err(Error::ContextMismatch);
        }
        Ok(Self::from_raw(ctx, dense::from_roots(ctx.as_ref(), roots)))
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of x^i; zero outside the stored range.
    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).copied().unwrap_or_else(|| self.ctx.zero())
    }

    pub fn leading(&self) -> Option<FieldElement> {
        self.coeffs.last().copied()
    }

    fn same_ctx(&self, other: &Poly) -> Result<()> {
        if self.ctx.id() == other.ctx.id() {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn add(&self, other: &Poly) -> Result<Poly> {
        self.same_ctx(other)?;
        let f = self.ctx.as_ref();
        let n = self.coeffs.len().max(other.coeffs.len());
        let v = (0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect();
        Ok(Self::from_raw(&self.ctx, v))
    }

    pub fn sub(&self, other: &Poly) -> Result<Poly> {
        self.same_ctx(other)?;
        let f = self.ctx.as_ref();
        let n = self.coeffs.len().max(other.coeffs.len());
        let v = (0..n).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect();
        Ok(Self::from_raw(&self.ctx, v))
    }

    pub fn mul(&self, other: &Poly) -> Result<Poly> {
        self.same_ctx(other)?;
        let v = dense::mul_trunc(self.ctx.as_ref(), &self.coeffs, &other.coeffs, usize::MAX);
        Ok(Self::from_raw(&self.ctx, v))
    }

    pub fn scale(&self, c: FieldElement) -> Result<Poly> {
        if !self.ctx.owns(&c) {
            return Err(Error::ContextMismatch);
        }
        let f = self.ctx.as_ref();
        Ok(Self::from_raw(&self.ctx, self.coeffs.iter().map(|&a| f.mul(a, c)).collect()))
    }

    pub fn pow(&self, e: u64) -> Poly {
        let v = dense::pow_trunc(self.ctx.as_ref(), &self.coeffs, e, usize::MAX);
        Self::from_raw(&self.ctx, v)
    }

    /// f^((p-1)/2), the polynomial whose coefficients fill the Cartier matrix.
    pub fn half_power(&self) -> Poly {
        self.pow((self.ctx.p() as u64 - 1) / 2)
    }

    pub fn eval(&self, x: FieldElement) -> FieldElement {
        dense::eval(self.ctx.as_ref(), &self.coeffs, x)
    }

    pub fn derivative(&self) -> Poly {
        let f = self.ctx.as_ref();
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.mul(f.from_int(i as i64), c))
            .collect();
        Self::from_raw(&self.ctx, v)
    }

    pub fn div_rem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        self.same_ctx(divisor)?;
        let f = self.ctx.as_ref();
        let lead = divisor.leading().ok_or(Error::DivisionByZero)?;
        let lead_inv = f.inv(lead).expect("leading coefficient is nonzero");
        let db = divisor.coeffs.len() - 1;
        let mut r = self.coeffs.clone();
        if r.len() <= db {
            return Ok((Poly::zero(&self.ctx), self.clone()));
        }
        let mut q = vec![f.zero(); r.len() - db];
        for shift in (0..q.len()).rev() {
            let t = f.mul(r[shift + db], lead_inv);
            q[shift] = t;
            if f.is_zero(t) {
                continue;
            }
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                r[shift + j] = f.sub(r[shift + j], f.mul(t, d));
            }
        }
        r.truncate(db);
        Ok((Self::from_raw(&self.ctx, q), Self::from_raw(&self.ctx, r)))
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => self.clone(),
            Some(l) => {
                let inv = self.ctx.inv(l).expect("nonzero leading coefficient");
                self.scale(inv).expect("same context")
            }
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Result<Poly> {
        self.same_ctx(other)?;
        if self.is_zero() && other.is_zero() {
            return Err(Error::InvalidCurve("gcd(0, 0) is undefined".into()));
        }
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.div_rem(&b)?.1;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    pub fn is_squarefree(&self) -> Result<bool> {
        if self.is_zero() {
            return Err(Error::InvalidCurve("zero polynomial".into()));
        }
        let d = self.derivative();
        if d.is_zero() {
            // a p-th power in x (or a constant)
            return Ok(self.degree() == Some(0));
        }
        Ok(self.gcd(&d)?.degree() == Some(0))
    }

    /// f(u x + c).
    pub fn substitute_affine(&self, u: FieldElement, c: FieldElement) -> Result<Poly> {
        let lin = Poly::new(&self.ctx, vec![c, u])?;
        let mut acc = Poly::zero(&self.ctx);
        for &a in self.coeffs.iter().rev() {
            acc = acc.mul(&lin)?.add(&Poly::new(&self.ctx, vec![a])?)?;
        }
        Ok(acc)
    }

    /// Image of this polynomial in a field containing its coefficient field.
    pub fn lift(&self, target: &Arc<FieldCtx>, cap: u128) -> Result<Poly> {
        let emb = embed_into(&self.ctx, target, cap)?;
        let v = self.coeffs.iter().map(|c| emb.map(target.as_ref(), c)).collect();
        Ok(Self::from_raw(target, v))
    }

    /// Distinct roots in `ext` (a field containing the coefficient field),
    /// found by evaluating at every element.
    pub fn roots_in(&self, ext: &Arc<FieldCtx>, cap: u128) -> Result<Vec<FieldElement>> {
        let lifted = self.lift(ext, cap)?;
        Ok(ext.enumerate(cap)?.filter(|&x| lifted.eval(x).is_zero()).collect())
    }

    /// Comma-separated coefficient encodings, constant term first. Over
    /// extension fields each coefficient is bracketed: "[0,1],[2,0],1".
    pub fn encode(&self) -> String {
        if self.coeffs.is_empty() {
            return "0".into();
        }
        let k = self.ctx.degree();
        self.coeffs
            .iter()
            .map(|c| if k == 1 { c.encode() } else { format!("[{}]", c.encode()) })
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Inverse of [`encode`](Self::encode). Bare integers are accepted as
    /// prime-field constants over extension fields too.
    pub fn parse(ctx: &Arc<FieldCtx>, s: &str) -> Result<Poly> {
        let mut coeffs = Vec::new();
        let mut depth = 0;
        let mut start = 0;
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let bytes = s.as_bytes();
        for (i, &b) in bytes.iter().enumerate() {
            match b {
                b'[' => depth += 1,
                b']' => {
                    if depth == 0 {
                        return Err(Error::Parse(format!("unbalanced ']' in '{s}'")));
                    }
                    depth -= 1
                }
                b',' if depth == 0 => {
                    coeffs.push(ctx.parse_element(&s[start..i])?);
                    start = i + 1;
                }
                _ => {}
            }
        }
        if depth != 0 {
            return Err(Error::Parse(format!("unbalanced '[' in '{s}'")));
        }
        coeffs.push(ctx.parse_element(&s[start..])?);
        Ok(Self::from_raw(ctx, coeffs))
    }
}
