//! Finite fields F_p and F_{p^k} with elements stored as residue vectors
//! modulo a monic irreducible polynomial.

pub(crate) mod fp;
mod table;

pub use table::{TableField, DEFAULT_TABLE_CAP};

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest supported extension degree.
pub const MAX_DEGREE: usize = 12;

/// Default bound on `p^k` for exhaustive enumeration.
pub const DEFAULT_ENUM_CAP: u128 = 1 << 22;

/// Arithmetic over a finite field with `Copy` elements.
///
/// Implemented by [`FieldCtx`] (residue vectors, any supported field) and by
/// [`TableField`] (discrete-log tables, small fields only). Curve routines are
/// written once against this trait.
pub trait Field: Send + Sync {
    type Elem: Copy + Eq + fmt::Debug + Send + Sync;

    fn characteristic(&self) -> u32;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_int(&self, n: i64) -> Self::Elem;
    fn add(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn sub(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn neg(&self, a: Self::Elem) -> Self::Elem;
    fn mul(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn inv(&self, a: Self::Elem) -> Option<Self::Elem>;

    fn is_zero(&self, a: Self::Elem) -> bool {
        a == self.zero()
    }

    fn pow(&self, a: Self::Elem, mut n: u64) -> Self::Elem {
        let mut acc = self.one();
        let mut base = a;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    fn frobenius(&self, a: Self::Elem) -> Self::Elem {
        self.pow(a, self.characteristic() as u64)
    }
}

/// An element of F_{p^k}: `c[0] + c[1] a + ... + c[k-1] a^(k-1)` where `a` is
/// the class of x modulo the field's modulus.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    ctx: u64,
    k: u8,
    c: [u16; MAX_DEGREE],
}

impl FieldElement {
    pub fn coeffs(&self) -> &[u16] {
        &self.c[..self.k as usize]
    }

    pub fn ctx_id(&self) -> u64 {
        self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs().iter().all(|&c| c == 0)
    }

    /// Encoding "c0,c1,...,c{k-1}".
    pub fn encode(&self) -> String {
        self.coeffs()
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encode())
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.encode())
    }
}

/// Add, subtract, multiply or divide; see [`FieldCtx::arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// The field F_p[x]/(modulus).
#[derive(Clone, PartialEq, Eq)]
pub struct FieldCtx {
    p: u32,
    k: usize,
    /// Monic, constant term first, length k + 1.
    modulus: Vec<u32>,
    id: u64,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldCtx({})", self.spec())
    }
}

fn fingerprint(p: u32, modulus: &[u32]) -> u64 {
    // FNV-1a over (p, modulus)
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for w in std::iter::once(p).chain(modulus.iter().copied()) {
        for b in w.to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    }
    h
}

impl FieldCtx {
    /// Builds F_{p^k}. Without an explicit modulus the first monic irreducible
    /// of degree k is used, scanning coefficient vectors (c0, ..., c_{k-1}) in
    /// increasing order of `c0 + c1 p + ... + c_{k-1} p^(k-1)`.
    pub fn new(p: u32, k: usize, modulus: Option<&[u32]>) -> Result<Arc<FieldCtx>> {
        if p >= 1 << 16 {
            return Err(Error::CharacteristicTooLarge(p));
        }
        if p == 2 || !fp::is_prime(p) {
            return Err(Error::BadCharacteristic(p));
        }
        if k == 0 || k > MAX_DEGREE {
            return Err(Error::BadDegree(k));
        }
        let modulus = match modulus {
            Some(m) => {
                if m.len() != k + 1 || m[k] % p != 1 {
                    return Err(Error::BadModulus { expected: k });
                }
                let m: Vec<u32> = m.iter().map(|c| c % p).collect();
                if k > 1 && !fp::is_irreducible(&m, p) {
                    return Err(Error::ReducibleModulus(format_residues(&m)));
                }
                m
            }
            None if k == 1 => vec![0, 1],
            None => first_irreducible(p, k),
        };
        let id = fingerprint(p, &modulus);
        Ok(Arc::new(FieldCtx { p, k, modulus, id }))
    }

    pub fn prime(p: u32) -> Result<Arc<FieldCtx>> {
        Self::new(p, 1, None)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    /// `p^k`, or `None` if it does not fit in a u128.
    pub fn order(&self) -> Option<u128> {
        (self.p as u128).checked_pow(self.k as u32)
    }

    /// Field spec string, e.g. "p=5,k=2,mod=2,4,1".
    pub fn spec(&self) -> String {
        if self.k == 1 {
            format!("p={}", self.p)
        } else {
            format!("p={},k={},mod={}", self.p, self.k, format_residues(&self.modulus))
        }
    }

    /// Parses a field spec: "p=5", "p=5,k=2" or "p=5,k=2,mod=2,4,1".
    pub fn parse_spec(s: &str) -> Result<Arc<FieldCtx>> {
        let s = s.trim();
        let (head, modulus) = match s.find("mod=") {
            Some(i) => (&s[..i], Some(&s[i + 4..])),
            None => (s, None),
        };
        let mut p = None;
        let mut k = None;
        for tok in head.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (key, val) = tok
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("bad field spec token '{tok}'")))?;
            let val: u64 = val
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad number in '{tok}'")))?;
            match key.trim() {
                "p" => p = Some(val),
                "k" => k = Some(val),
                other => return Err(Error::Parse(format!("unknown field key '{other}'"))),
            }
        }
        let p = p.ok_or_else(|| Error::Parse("field spec needs p=".into()))?;
        let p = u32::try_from(p).map_err(|_| Error::CharacteristicTooLarge(u32::MAX))?;
        let modulus = modulus
            .map(|m| {
                m.split(',')
                    .map(|t| {
                        t.trim()
                            .parse::<u32>()
                            .map_err(|_| Error::Parse(format!("bad modulus coefficient '{t}'")))
                    })
                    .collect::<Result<Vec<u32>>>()
            })
            .transpose()?;
        let k = match (k, &modulus) {
            (Some(k), _) => k as usize,
            (None, Some(m)) => m.len().saturating_sub(1),
            (None, None) => 1,
        };
        FieldCtx::new(p, k, modulus.as_deref())
    }

    fn raw(&self, c: [u16; MAX_DEGREE]) -> FieldElement {
        FieldElement { ctx: self.id, k: self.k as u8, c }
    }

    /// Element from residues, constant term first; missing entries are zero.
    pub fn element(&self, coeffs: &[i64]) -> Result<FieldElement> {
        if coeffs.len() > self.k {
            return Err(Error::Parse(format!(
                "{} residues given for a degree-{} field",
                coeffs.len(),
                self.k
            )));
        }
        let mut c = [0u16; MAX_DEGREE];
        for (slot, &v) in c.iter_mut().zip(coeffs) {
            *slot = v.rem_euclid(self.p as i64) as u16;
        }
        Ok(self.raw(c))
    }

    /// The class of x, a root of the modulus. For k = 1 this is 0.
    pub fn generator(&self) -> FieldElement {
        if self.k == 1 {
            return self.zero();
        }
        let mut c = [0u16; MAX_DEGREE];
        c[1] = 1;
        self.raw(c)
    }

    /// Parses "c0,c1,..." (or a bracketed "[c0,c1,...]").
    pub fn parse_element(&self, s: &str) -> Result<FieldElement> {
        let s = s.trim().trim_start_matches('[').trim_end_matches(']');
        let vals = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<i64>()
                    .map_err(|_| Error::Parse(format!("bad residue '{t}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        self.element(&vals)
    }

    pub fn encode(&self, e: &FieldElement) -> String {
        e.encode()
    }

    pub fn owns(&self, e: &FieldElement) -> bool {
        e.ctx == self.id
    }

    fn check(&self, e: &FieldElement) -> Result<()> {
        if self.owns(e) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    /// Checked arithmetic: errors on context mismatch and division by zero.
    pub fn arith(&self, a: &FieldElement, b: &FieldElement, op: ArithOp) -> Result<FieldElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(match op {
            ArithOp::Add => Field::add(self, *a, *b),
            ArithOp::Sub => Field::sub(self, *a, *b),
            ArithOp::Mul => Field::mul(self, *a, *b),
            ArithOp::Div => {
                let inv = Field::inv(self, *b).ok_or(Error::DivisionByZero)?;
                Field::mul(self, *a, inv)
            }
        })
    }

    /// `e^n`; rejects 0^0.
    pub fn checked_pow(&self, e: &FieldElement, n: u64) -> Result<FieldElement> {
        self.check(e)?;
        if n == 0 && e.is_zero() {
            return Err(Error::ZeroToZero);
        }
        Ok(Field::pow(self, *e, n))
    }

    /// Index of `e` in enumeration order: `c0 + c1 p + ...`.
    pub fn code(&self, e: &FieldElement) -> u128 {
        e.coeffs()
            .iter()
            .rev()
            .fold(0u128, |acc, &c| acc * self.p as u128 + c as u128)
    }

    pub fn from_code(&self, mut code: u128) -> FieldElement {
        let mut c = [0u16; MAX_DEGREE];
        for slot in c.iter_mut().take(self.k) {
            *slot = (code % self.p as u128) as u16;
            code /= self.p as u128;
        }
        self.raw(c)
    }

    /// Every element once, in increasing [`code`](Self::code) order.
    pub fn enumerate(&self, cap: u128) -> Result<impl Iterator<Item = FieldElement> + '_> {
        let size = self.order().unwrap_or(u128::MAX);
        if size > cap {
            return Err(Error::CapExceeded { what: "field enumeration", size, cap });
        }
        Ok((0..size).map(move |code| self.from_code(code)))
    }

    fn residues(&self, e: &FieldElement) -> Vec<u32> {
        let mut v: Vec<u32> = e.coeffs().iter().map(|&c| c as u32).collect();
        fp::trim(&mut v);
        v
    }

    fn from_residues(&self, v: &[u32]) -> FieldElement {
        let mut c = [0u16; MAX_DEGREE];
        for (slot, &r) in c.iter_mut().zip(v) {
            *slot = r as u16;
        }
        self.raw(c)
    }

    #[inline]
    fn assert_owns(&self, a: &FieldElement) {
        assert_eq!(a.ctx, self.id, "field element from a different context");
    }
}

impl Field for FieldCtx {
    type Elem = FieldElement;

    fn characteristic(&self) -> u32 {
        self.p
    }

    fn zero(&self) -> FieldElement {
        self.raw([0; MAX_DEGREE])
    }

    fn one(&self) -> FieldElement {
        let mut c = [0u16; MAX_DEGREE];
        c[0] = 1;
        self.raw(c)
    }

    fn from_int(&self, n: i64) -> FieldElement {
        let mut c = [0u16; MAX_DEGREE];
        c[0] = n.rem_euclid(self.p as i64) as u16;
        self.raw(c)
    }

    fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.assert_owns(&a);
        self.assert_owns(&b);
        let mut c = [0u16; MAX_DEGREE];
        let p = self.p;
        for i in 0..self.k {
            let s = a.c[i] as u32 + b.c[i] as u32;
            c[i] = if s >= p { s - p } else { s } as u16;
        }
        self.raw(c)
    }

    fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.assert_owns(&a);
        self.assert_owns(&b);
        let mut c = [0u16; MAX_DEGREE];
        let p = self.p;
        for i in 0..self.k {
            let s = a.c[i] as u32 + p - b.c[i] as u32;
            c[i] = if s >= p { s - p } else { s } as u16;
        }
        self.raw(c)
    }

    fn neg(&self, a: FieldElement) -> FieldElement {
        self.sub(self.zero(), a)
    }

    fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.assert_owns(&a);
        self.assert_owns(&b);
        let p = self.p as u64;
        let k = self.k;
        if k == 1 {
            return self.from_int((a.c[0] as u64 * b.c[0] as u64 % p) as i64);
        }
        let mut acc = [0u64; 2 * MAX_DEGREE - 1];
        for i in 0..k {
            let x = a.c[i] as u64;
            if x == 0 {
                continue;
            }
            for j in 0..k {
                acc[i + j] += x * b.c[j] as u64;
            }
        }
        for i in (k..2 * k - 1).rev() {
            let t = acc[i] % p;
            if t == 0 {
                continue;
            }
            // x^i = x^(i-k) * x^k = -x^(i-k) * (modulus - x^k)
            for j in 0..k {
                let m = self.modulus[j] as u64;
                if m != 0 {
                    acc[i - k + j] += t * (p - m);
                }
            }
            acc[i - k] %= p;
        }
        let mut c = [0u16; MAX_DEGREE];
        for i in 0..k {
            c[i] = (acc[i] % p) as u16;
        }
        self.raw(c)
    }

    fn inv(&self, a: FieldElement) -> Option<FieldElement> {
        self.assert_owns(&a);
        if a.is_zero() {
            return None;
        }
        if self.k == 1 {
            return Some(self.from_int(fp::inv_mod(a.c[0] as u32, self.p) as i64));
        }
        let r = fp::inv_poly_mod(&self.residues(&a), &self.modulus, self.p)?;
        Some(self.from_residues(&r))
    }

    fn frobenius(&self, a: FieldElement) -> FieldElement {
        if self.k == 1 {
            return a;
        }
        self.pow(a, self.p as u64)
    }
}

fn format_residues(v: &[u32]) -> String {
    v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
}

fn first_irreducible(p: u32, k: usize) -> Vec<u32> {
    let mut coeffs = vec![0u32; k + 1];
    coeffs[k] = 1;
    loop {
        if fp::is_irreducible(&coeffs, p) {
            return coeffs;
        }
        // increment (c0, ..., c_{k-1}) as a base-p counter, c0 fastest
        for c in coeffs.iter_mut().take(k) {
            *c += 1;
            if *c < p {
                break;
            }
            *c = 0;
        }
    }
}

/// A field embedding F_{p^k} -> target, fixed by the image of the source
/// generator (a root of the source modulus in the target).
#[derive(Clone, Debug)]
pub struct Embedding<E> {
    source: Arc<FieldCtx>,
    image: E,
}

impl<E: Copy> Embedding<E> {
    /// Finds the first root of the source modulus among `candidates`.
    pub fn find<F: Field<Elem = E>>(
        source: &Arc<FieldCtx>,
        target: &F,
        candidates: impl IntoIterator<Item = E>,
    ) -> Option<Self> {
        if source.degree() == 1 {
            return Some(Embedding { source: source.clone(), image: target.zero() });
        }
        let m: Vec<E> = source.modulus().iter().map(|&c| target.from_int(c as i64)).collect();
        candidates
            .into_iter()
            .find(|&x| {
                let v = m.iter().rev().fold(target.zero(), |acc, &c| target.add(target.mul(acc, x), c));
                target.is_zero(v)
            })
            .map(|image| Embedding { source: source.clone(), image })
    }

    pub fn source(&self) -> &Arc<FieldCtx> {
        &self.source
    }

    pub fn map<F: Field<Elem = E>>(&self, target: &F, e: &FieldElement) -> E {
        assert!(self.source.owns(e), "embedding applied to a foreign element");
        e.coeffs()
            .iter()
            .rev()
            .fold(target.zero(), |acc, &c| target.add(target.mul(acc, self.image), target.from_int(c as i64)))
    }
}

/// Embedding of `source` into the larger residue field `target` found by
/// enumerating `target`. Requires deg source | deg target.
pub fn embed_into(
    source: &Arc<FieldCtx>,
    target: &Arc<FieldCtx>,
    cap: u128,
) -> Result<Embedding<FieldElement>> {
    if source.p() != target.p() || target.degree() % source.degree() != 0 {
        return Err(Error::NotSubfield { sub: source.degree(), sup: target.degree() });
    }
    if source.id() == target.id() {
        return Ok(Embedding { source: source.clone(), image: target.generator() });
    }
    let candidates = target.enumerate(cap)?;
    Embedding::find(source, target.as_ref(), candidates)
        .ok_or(Error::NotSubfield { sub: source.degree(), sup: target.degree() })
}
