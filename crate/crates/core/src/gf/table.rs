//! Zech-logarithm representation of small fields: an element is its discrete
//! log to a fixed primitive root, with `order - 1` standing for zero. Addition
//! is one table lookup, multiplication an addition of exponents.

use std::sync::Arc;

use super::{fp, Field, FieldCtx, FieldElement};
use crate::error::{Error, Result};

/// Largest field (`p^k`) for which tables are built by default.
pub const DEFAULT_TABLE_CAP: u128 = 1 << 22;

pub struct TableField {
    ctx: Arc<FieldCtx>,
    q: u32,
    /// q - 1, also the encoding of zero.
    n: u32,
    primitive: FieldElement,
    /// exp[i] = code of g^i
    exp: Vec<u32>,
    /// log[code]; log[0] = n
    log: Vec<u32>,
    /// zech[i] = log(1 + g^i)
    zech: Vec<u32>,
}

impl std::fmt::Debug for TableField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "TableField({})", self.ctx.spec())
    }
}

impl TableField {
    pub fn new(ctx: Arc<FieldCtx>, cap: u128) -> Result<TableField> {
        let size = ctx.order().unwrap_or(u128::MAX);
        if size > cap || size > u32::MAX as u128 {
            return Err(Error::CapExceeded { what: "field tables", size, cap });
        }
        let q = size as u32;
        let n = q - 1;
        let primes = fp::factor(n as u64);
        let primitive = (1..q as u128)
            .map(|c| ctx.from_code(c))
            .find(|&g| primes.iter().all(|&r| ctx.pow(g, n as u64 / r) != ctx.one()))
            .expect("multiplicative group of a finite field is cyclic");

        let mut exp = Vec::with_capacity(n as usize);
        let mut log = vec![n; q as usize];
        let mut cur = ctx.one();
        for i in 0..n {
            let code = ctx.code(&cur) as u32;
            exp.push(code);
            log[code as usize] = i;
            cur = ctx.mul(cur, primitive);
        }
        let p = ctx.p();
        let zech = exp
            .iter()
            .map(|&code| {
                let c0 = code % p;
                let plus_one = code - c0 + (c0 + 1) % p;
                log[plus_one as usize]
            })
            .collect();
        Ok(TableField { ctx, q, n, primitive, exp, log, zech })
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn primitive(&self) -> FieldElement {
        self.primitive
    }

    #[inline]
    pub fn from_code(&self, code: u32) -> u32 {
        self.log[code as usize]
    }

    #[inline]
    pub fn code(&self, e: u32) -> u32 {
        if e == self.n {
            0
        } else {
            self.exp[e as usize]
        }
    }

    pub fn from_element(&self, e: &FieldElement) -> u32 {
        assert!(self.ctx.owns(e), "element from a different field");
        self.from_code(self.ctx.code(e) as u32)
    }

    pub fn to_element(&self, e: u32) -> FieldElement {
        self.ctx.from_code(self.code(e) as u128)
    }

    /// g^i for `i` taken mod q - 1.
    #[inline]
    pub fn power_of_primitive(&self, i: u64) -> u32 {
        (i % self.n as u64) as u32
    }

    /// Quadratic character: 0, 1 or -1.
    #[inline]
    pub fn chi(&self, e: u32) -> i64 {
        if e == self.n {
            0
        } else if e & 1 == 0 {
            1
        } else {
            -1
        }
    }

    /// All elements in code order.
    pub fn elements(&self) -> impl Iterator<Item = u32> + '_ {
        self.log.iter().copied()
    }

    /// Elements of the subfield of size `sub` (which must be p^d with d | k).
    pub fn subfield(&self, sub: u32) -> impl Iterator<Item = u32> + '_ {
        let step = self.n / (sub - 1);
        std::iter::once(self.n).chain((0..sub - 1).map(move |j| j * step))
    }

    #[inline]
    fn reduce(&self, s: u32) -> u32 {
        if s >= self.n {
            s - self.n
        } else {
            s
        }
    }
}

impl Field for TableField {
    type Elem = u32;

    fn characteristic(&self) -> u32 {
        self.ctx.p()
    }

    #[inline]
    fn zero(&self) -> u32 {
        self.n
    }

    #[inline]
    fn one(&self) -> u32 {
        0
    }

    fn from_int(&self, n: i64) -> u32 {
        self.log[n.rem_euclid(self.ctx.p() as i64) as usize]
    }

    #[inline]
    fn add(&self, a: u32, b: u32) -> u32 {
        if a == self.n {
            return b;
        }
        if b == self.n {
            return a;
        }
        let d = if b >= a { b - a } else { b + self.n - a };
        let z = self.zech[d as usize];
        if z == self.n {
            self.n
        } else {
            self.reduce(a + z)
        }
    }

    #[inline]
    fn neg(&self, a: u32) -> u32 {
        if a == self.n {
            a
        } else {
            self.reduce(a + self.n / 2)
        }
    }

    #[inline]
    fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    fn mul(&self, a: u32, b: u32) -> u32 {
        if a == self.n || b == self.n {
            self.n
        } else {
            self.reduce(a + b)
        }
    }

    fn inv(&self, a: u32) -> Option<u32> {
        if a == self.n {
            None
        } else if a == 0 {
            Some(0)
        } else {
            Some(self.n - a)
        }
    }

    #[inline]
    fn is_zero(&self, a: u32) -> bool {
        a == self.n
    }

    fn pow(&self, a: u32, e: u64) -> u32 {
        if a == self.n {
            return if e == 0 { 0 } else { self.n };
        }
        ((a as u64 * (e % self.n as u64)) % self.n as u64) as u32
    }

    fn frobenius(&self, a: u32) -> u32 {
        self.pow(a, self.ctx.p() as u64)
    }
}
