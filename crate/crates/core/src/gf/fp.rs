//! Dense polynomials over a prime field, stored as `Vec<u32>` with the
//! constant term first. Only what modulus selection and inversion need.

pub(crate) fn trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

pub(crate) fn inv_mod(a: u32, p: u32) -> u32 {
    pow_mod(a, p as u64 - 2, p)
}

pub(crate) fn pow_mod(mut b: u32, mut e: u64, p: u32) -> u32 {
    let p64 = p as u64;
    let mut acc = 1u64;
    let mut base = b as u64 % p64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p64;
        }
        base = base * base % p64;
        e >>= 1;
    }
    b = acc as u32;
    b
}

pub(crate) fn sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let n = a.len().max(b.len());
    let mut out: Vec<u32> = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(&mut out);
    out
}

pub(crate) fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let p64 = p as u64;
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p64;
        }
    }
    let mut out: Vec<u32> = out.into_iter().map(|v| v as u32).collect();
    trim(&mut out);
    out
}

/// Quotient and remainder of `a` by nonzero `b`.
pub(crate) fn div_rem(a: &[u32], b: &[u32], p: u32) -> (Vec<u32>, Vec<u32>) {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let lead_inv = inv_mod(b[db], p) as u64;
    let p64 = p as u64;
    let mut q = vec![0u32; r.len() - db];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let t = (r[r.len() - 1] as u64 * lead_inv % p64) as u32;
        q[shift] = t;
        for (j, &bj) in b.iter().enumerate() {
            let sub = (bj as u64 * t as u64 % p64) as u32;
            r[shift + j] = (r[shift + j] + p - sub) % p;
        }
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

pub(crate) fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    div_rem(a, m, p).1
}

pub(crate) fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    if let Some(&lead) = a.last() {
        let inv = inv_mod(lead, p) as u64;
        for c in a.iter_mut() {
            *c = (*c as u64 * inv % p as u64) as u32;
        }
    }
    a
}

/// `base^e mod m`.
pub(crate) fn pow_poly_mod(base: &[u32], mut e: u64, m: &[u32], p: u32) -> Vec<u32> {
    let mut acc = vec![1u32];
    let mut b = rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = rem(&mul(&acc, &b, p), m, p);
        }
        b = rem(&mul(&b, &b, p), m, p);
        e >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m` by the extended Euclidean algorithm, if it exists.
pub(crate) fn inv_poly_mod(a: &[u32], m: &[u32], p: u32) -> Option<Vec<u32>> {
    let mut r0 = m.to_vec();
    let mut r1 = rem(a, m, p);
    let mut s0: Vec<u32> = Vec::new();
    let mut s1: Vec<u32> = vec![1];
    while !r1.is_empty() {
        let (q, r) = div_rem(&r0, &r1, p);
        let s = sub(&s0, &mul(&q, &s1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    if r0.len() != 1 {
        return None;
    }
    let c = inv_mod(r0[0], p) as u64;
    let mut out: Vec<u32> = s0.iter().map(|&v| (v as u64 * c % p as u64) as u32).collect();
    out = rem(&out, m, p);
    Some(out)
}

fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's test: monic `f` of degree k is irreducible over F_p iff
/// x^(p^k) = x mod f and gcd(x^(p^(k/r)) - x, f) = 1 for every prime r | k.
pub(crate) fn is_irreducible(f: &[u32], p: u32) -> bool {
    let k = f.len() - 1;
    if k == 0 {
        return false;
    }
    if k == 1 {
        return true;
    }
    let x = vec![0u32, 1];
    // frob[i] = x^(p^i) mod f
    let mut frob = Vec::with_capacity(k + 1);
    frob.push(rem(&x, f, p));
    for i in 1..=k {
        let prev: &Vec<u32> = &frob[i - 1];
        frob.push(pow_poly_mod(prev, p as u64, f, p));
    }
    if sub(&frob[k], &x, p) != Vec::<u32>::new() {
        return false;
    }
    prime_factors(k).into_iter().all(|r| {
        let d = sub(&frob[k / r], &x, p);
        gcd(&d, f, p).len() == 1
    })
}

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn factor(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut n = n;
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rabin_small_cases() {
        // x^2 + 4x + 2 over F_5: discriminant 16 - 8 = 8 = 3, a nonsquare
        assert!(is_irreducible(&[2, 4, 1], 5));
        // x^2 + 1 = (x + 2)(x + 3) over F_5
        assert!(!is_irreducible(&[1, 0, 1], 5));
        // (x^2 + 2)^2 has degree 4 but is reducible
        let sq = mul(&[2, 0, 1], &[2, 0, 1], 5);
        assert!(!is_irreducible(&sq, 5));
    }

    #[test]
    fn inverse_mod_modulus() {
        let m = [2, 4, 1];
        let a = [0, 1];
        let inv = inv_poly_mod(&a, &m, 5).unwrap();
        assert_eq!(rem(&mul(&a, &inv, 5), &m, 5), vec![1]);
    }
}
