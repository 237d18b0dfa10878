//! Dense polynomials over `F_p` as `Vec<u64>` (lowest degree first), and
//! Cantor-Zassenhaus factorization.

use num_bigint::BigUint;
use num_traits::One;
use rand::Rng;

use super::inv_mod;

pub(crate) type FpPoly = Vec<u64>;

#[inline]
fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
fn addmod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

#[inline]
fn submod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + (p - b)
    }
}

pub(crate) fn trim(a: &mut FpPoly) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

pub(crate) fn degree(a: &[u64]) -> Option<usize> {
    a.len().checked_sub(1)
}

pub(crate) fn is_one(a: &[u64]) -> bool {
    a.len() == 1 && a[0] == 1
}

pub(crate) fn add(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    let mut out: FpPoly = (0..a.len().max(b.len()))
        .map(|i| addmod(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0), p))
        .collect();
    trim(&mut out);
    out
}

pub(crate) fn sub(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    let mut out: FpPoly = (0..a.len().max(b.len()))
        .map(|i| submod(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0), p))
        .collect();
    trim(&mut out);
    out
}

pub(crate) fn scale(a: &[u64], c: u64, p: u64) -> FpPoly {
    let mut out: FpPoly = a.iter().map(|&x| mulmod(x, c, p)).collect();
    trim(&mut out);
    out
}

pub(crate) fn mul(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut acc = vec![0u128; a.len() + b.len() - 1];
    let pp = p as u128;
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            acc[i + j] = (acc[i + j] + x as u128 * y as u128) % pp;
        }
    }
    let mut out: FpPoly = acc.into_iter().map(|v| v as u64).collect();
    trim(&mut out);
    out
}

/// Quotient and remainder; `b` must be nonzero.
pub(crate) fn divmod(a: &[u64], b: &[u64], p: u64) -> (FpPoly, FpPoly) {
    let db = degree(b).expect("nonzero divisor");
    let inv = inv_mod(b[db], p).expect("invertible leading coefficient");
    let mut r = a.to_vec();
    trim(&mut r);
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![0u64; r.len() - db];
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let t = mulmod(*r.last().unwrap(), inv, p);
        q[shift] = t;
        for (j, &bc) in b.iter().enumerate() {
            r[shift + j] = submod(r[shift + j], mulmod(t, bc, p), p);
        }
        r.pop();
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

pub(crate) fn rem(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    divmod(a, b, p).1
}

pub(crate) fn monic(a: &[u64], p: u64) -> FpPoly {
    match a.last() {
        None => Vec::new(),
        Some(&l) => scale(a, inv_mod(l, p).expect("nonzero"), p),
    }
}

/// Monic gcd (zero when both inputs are zero).
pub(crate) fn gcd(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    monic(&x, p)
}

/// `(g, s, t)` with `s*a + t*b = g` and `g` monic.
pub(crate) fn xgcd(a: &[u64], b: &[u64], p: u64) -> (FpPoly, FpPoly, FpPoly) {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    let (mut s0, mut s1) = (vec![1u64], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = divmod(&r0, &r1, p);
        let s = sub(&s0, &mul(&q, &s1, p), p);
        let t = sub(&t0, &mul(&q, &t1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    let inv = inv_mod(*r0.last().expect("not both zero"), p).expect("nonzero");
    (scale(&r0, inv, p), scale(&s0, inv, p), scale(&t0, inv, p))
}

pub(crate) fn derivative(a: &[u64], p: u64) -> FpPoly {
    let mut out: FpPoly = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| mulmod(c, (i as u64) % p, p))
        .collect();
    trim(&mut out);
    out
}

/// `base^exp mod m`.
pub(crate) fn powmod(base: &[u64], exp: &BigUint, m: &[u64], p: u64) -> FpPoly {
    let mut result: FpPoly = rem(&[1], m, p);
    let base = rem(base, m, p);
    for i in (0..exp.bits()).rev() {
        result = rem(&mul(&result, &result, p), m, p);
        if exp.bit(i) {
            result = rem(&mul(&result, &base, p), m, p);
        }
    }
    result
}

/// Splits a monic squarefree polynomial into monic irreducible factors.
pub(crate) fn factor_squarefree<R: Rng + ?Sized>(f: &[u64], p: u64, rng: &mut R) -> Vec<FpPoly> {
    let mut out = Vec::new();
    for (g, d) in distinct_degree(f, p) {
        equal_degree(&g, d, p, rng, &mut out);
    }
    out
}

/// Groups irreducible factors by degree: `(product, degree)`.
fn distinct_degree(f: &[u64], p: u64) -> Vec<(FpPoly, usize)> {
    let mut res = Vec::new();
    let mut rest = monic(f, p);
    let x: FpPoly = vec![0, 1];
    let pb = BigUint::from(p);
    let mut h = rem(&x, &rest, p);
    let mut i = 1;
    while degree(&rest).unwrap_or(0) >= 2 * i {
        h = powmod(&h, &pb, &rest, p);
        let g = gcd(&sub(&h, &x, p), &rest, p);
        if !is_one(&g) {
            rest = divmod(&rest, &g, p).0;
            h = rem(&h, &rest, p);
            res.push((g, i));
        }
        i += 1;
    }
    if degree(&rest).unwrap_or(0) > 0 {
        let d = degree(&rest).unwrap();
        res.push((rest, d));
    }
    res
}

fn equal_degree<R: Rng + ?Sized>(g: &[u64], d: usize, p: u64, rng: &mut R, out: &mut Vec<FpPoly>) {
    let n = degree(g).expect("nonconstant");
    if n == d {
        out.push(g.to_vec());
        return;
    }
    let exp = (BigUint::from(p).pow(d as u32) - BigUint::one()) >> 1;
    loop {
        let mut a: FpPoly = (0..n).map(|_| rng.gen_range(0..p)).collect();
        trim(&mut a);
        if degree(&a).unwrap_or(0) == 0 {
            continue;
        }
        let b = if p == 2 {
            // absolute trace map onto F_2
            let mut t = a.clone();
            let mut cur = a.clone();
            for _ in 1..d {
                cur = rem(&mul(&cur, &cur, p), g, p);
                t = add(&t, &cur, p);
            }
            t
        } else {
            let mut b = powmod(&a, &exp, g, p);
            b = sub(&b, &[1], p);
            b
        };
        let h = gcd(&b, g, p);
        let dh = degree(&h).unwrap_or(0);
        if dh > 0 && dh < n {
            let other = divmod(g, &h, p).0;
            equal_degree(&h, d, p, rng, out);
            equal_degree(&other, d, p, rng, out);
            return;
        }
    }
}

/// Monic squarefree decomposition: `(part, multiplicity)` with distinct
/// multiplicities, handling vanishing derivatives by `p`-th roots.
pub(crate) fn squarefree(f: &[u64], p: u64) -> Vec<(FpPoly, u32)> {
    let f = monic(f, p);
    let mut res: Vec<(FpPoly, u32)> = Vec::new();
    if degree(&f).unwrap_or(0) == 0 {
        return res;
    }
    let df = derivative(&f, p);
    let mut c;
    if df.is_empty() {
        c = f;
    } else {
        c = gcd(&f, &df, p);
        let mut w = divmod(&f, &c, p).0;
        let mut i = 1u32;
        while !is_one(&w) {
            let y = gcd(&w, &c, p);
            let fac = divmod(&w, &y, p).0;
            if degree(&fac).unwrap_or(0) > 0 {
                res.push((fac, i));
            }
            i += 1;
            w = y;
            c = divmod(&c, &w, p).0;
        }
    }
    if degree(&c).unwrap_or(0) > 0 {
        let root: FpPoly = c.iter().step_by(p as usize).copied().collect();
        for (g, m) in squarefree(&root, p) {
            res.push((g, m * p as u32));
        }
    }
    res.sort_by_key(|(_, m)| *m);
    let mut merged: Vec<(FpPoly, u32)> = Vec::new();
    for (g, m) in res {
        match merged.last_mut() {
            Some((h, k)) if *k == m => *h = mul(h, &g, p),
            _ => merged.push((g, m)),
        }
    }
    merged
}
