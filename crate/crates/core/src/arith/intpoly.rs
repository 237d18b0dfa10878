//! Dense integer polynomials (lowest degree first) used for content
//! splitting over the rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::fpoly::{self, FpPoly};
use super::modular::{bigint_residue, large_primes, Crt};

pub(crate) type IntPoly = Vec<BigInt>;

pub(crate) fn trim(p: &mut IntPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

pub(crate) fn content(p: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for c in p {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    g
}

/// Primitive part with positive leading coefficient.
pub(crate) fn primitive_part(p: &[BigInt]) -> IntPoly {
    let mut c = content(p);
    if c.is_zero() {
        return Vec::new();
    }
    if p.last().is_some_and(|l| l.is_negative()) {
        c = -c;
    }
    p.iter().map(|x| x / &c).collect()
}

/// Clears denominators: returns the primitive integer polynomial
/// associated with `p` (positive leading coefficient).
pub(crate) fn from_rationals(p: &[BigRational]) -> IntPoly {
    let mut den = BigInt::one();
    for c in p {
        den = den.lcm(c.denom());
    }
    let ints: IntPoly = p.iter().map(|c| (c * &den).to_integer()).collect();
    primitive_part(&ints)
}

pub(crate) fn mul(a: &[BigInt], b: &[BigInt]) -> IntPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

/// Exact quotient `a / b` over the integers, or `None` when `b` does not
/// divide `a` in `Z[x]`.
pub(crate) fn div_exact(a: &[BigInt], b: &[BigInt]) -> Option<IntPoly> {
    if b.is_empty() {
        return None;
    }
    if a.is_empty() {
        return Some(Vec::new());
    }
    if a.len() < b.len() {
        return None;
    }
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r = a.to_vec();
    let mut q = vec![BigInt::zero(); a.len() - db];
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let (t, rem) = r.last().unwrap().div_rem(lb);
        if !rem.is_zero() {
            return None;
        }
        for (j, bc) in b.iter().enumerate() {
            r[shift + j] -= &t * bc;
        }
        q[shift] = t;
        r.pop();
        trim(&mut r);
    }
    if r.is_empty() {
        trim(&mut q);
        Some(q)
    } else {
        None
    }
}

/// Gcd from images modulo word-size primes, primitive with positive
/// leading coefficient. An image of degree `d` modulo a prime not dividing
/// either leading coefficient bounds the true degree by `d`, so a candidate
/// of minimal image degree that divides both inputs is the gcd.
pub(crate) fn gcd(a: &[BigInt], b: &[BigInt]) -> IntPoly {
    let x = primitive_part(a);
    let y = primitive_part(b);
    if x.is_empty() {
        return y;
    }
    if y.is_empty() {
        return x;
    }
    if x.len() == 1 || y.len() == 1 {
        return vec![BigInt::one()];
    }
    let scale = x.last().unwrap().gcd(y.last().unwrap());
    let mut best: Option<(usize, Crt)> = None;
    let mut last: Option<IntPoly> = None;
    for p in large_primes() {
        let (lx, ly) = (bigint_residue(x.last().unwrap(), p), bigint_residue(y.last().unwrap(), p));
        if lx == 0 || ly == 0 {
            continue;
        }
        let g = fpoly::gcd(&reduce(&x, p), &reduce(&y, p), p);
        let d = g.len() - 1;
        if d == 0 {
            return vec![BigInt::one()];
        }
        let s = bigint_residue(&scale, p);
        let image = fpoly::scale(&fpoly::monic(&g, p), s, p);
        match &mut best {
            Some((bd, _)) if d > *bd => continue,
            Some((bd, crt)) if d == *bd => crt.add(p, &image),
            _ => {
                let mut crt = Crt::new(d + 1);
                crt.add(p, &image);
                best = Some((d, crt));
                last = None;
                continue;
            }
        }
        let crt = &best.as_ref().unwrap().1;
        let cand = primitive_part(&crt.symmetric());
        if last.as_ref() == Some(&cand) && div_exact(&x, &cand).is_some() && div_exact(&y, &cand).is_some() {
            return cand;
        }
        last = Some(cand);
    }
    unreachable!("infinitely many primes")
}

fn reduce(a: &[BigInt], p: u64) -> FpPoly {
    let mut out: FpPoly = a.iter().map(|c| bigint_residue(c, p)).collect();
    fpoly::trim(&mut out);
    out
}
