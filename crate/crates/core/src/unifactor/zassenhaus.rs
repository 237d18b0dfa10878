//! Factorization of squarefree primitive integer polynomials: modular
//! factorization, quadratic Hensel lifting, and subset recombination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::arith::fpoly::{self as fp, FpPoly};
use crate::arith::intpoly::{self, IntPoly};
use crate::arith::is_prime_u64;

/// Number of admissible primes compared before lifting.
const PRIME_CANDIDATES: usize = 5;

/// Irreducible factors (primitive, positive leading coefficient) of a
/// squarefree primitive `f` of positive degree.
pub(crate) fn factor_squarefree_primitive<R: Rng + ?Sized>(f: &IntPoly, rng: &mut R) -> Vec<IntPoly> {
    let n = f.len() - 1;
    if n <= 1 {
        return vec![f.clone()];
    }
    let (p, modular) = choose_prime(f, rng);
    if modular.len() == 1 {
        return vec![f.clone()];
    }
    let lc = f.last().unwrap().clone();
    let bound = coefficient_bound(f);
    let target = &bound * 2u32 + 1u32;
    let mut modulus = BigInt::from(p);
    while modulus < target {
        modulus = &modulus * &modulus;
    }
    let lifted = multifactor_lift(f, &lc, modular, p, &modulus);
    recombine(f, lifted, &modulus)
}

/// Smallest odd primes not dividing `lc(f)` with `f mod p` squarefree; the
/// one with the fewest modular factors wins.
fn choose_prime<R: Rng + ?Sized>(f: &IntPoly, rng: &mut R) -> (u64, Vec<FpPoly>) {
    let lc = f.last().unwrap();
    let mut best: Option<(u64, Vec<FpPoly>)> = None;
    let mut tried = 0;
    let mut p = 3u64;
    while tried < PRIME_CANDIDATES {
        if is_prime_u64(p) && !(lc % p).is_zero() {
            let fp_ = reduce(f, p);
            let df = fp::derivative(&fp_, p);
            if fp::is_one(&fp::gcd(&fp_, &df, p)) {
                tried += 1;
                let facs = fp::factor_squarefree(&fp::monic(&fp_, p), p, rng);
                let better = best.as_ref().is_none_or(|(_, b)| facs.len() < b.len());
                if better {
                    let done = facs.len() == 1;
                    best = Some((p, facs));
                    if done {
                        break;
                    }
                }
            }
        }
        p += 2;
    }
    best.expect("some prime is admissible")
}

fn reduce(f: &[BigInt], p: u64) -> FpPoly {
    let pb = BigInt::from(p);
    let mut out: FpPoly = f
        .iter()
        .map(|c| c.mod_floor(&pb).to_u64().expect("residue fits"))
        .collect();
    fp::trim(&mut out);
    out
}

/// Bound on the absolute coefficients of `lc(f) * g` for any factor `g`
/// of `f`.
fn coefficient_bound(f: &IntPoly) -> BigInt {
    let n = f.len() - 1;
    let norm2_sq: BigInt = f.iter().map(|c| c * c).sum();
    let norm2 = norm2_sq.sqrt() + 1u32;
    let lc = f.last().unwrap().abs();
    (BigInt::one() << n) * norm2 * lc
}

fn lift_poly(a: &[u64]) -> IntPoly {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

fn modp(a: &[BigInt], m: &BigInt) -> IntPoly {
    let mut out: IntPoly = a.iter().map(|c| c.mod_floor(m)).collect();
    intpoly::trim(&mut out);
    out
}

fn add_m(a: &[BigInt], b: &[BigInt], m: &BigInt) -> IntPoly {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    let v: IntPoly = (0..n)
        .map(|i| a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z))
        .collect();
    modp(&v, m)
}

fn sub_m(a: &[BigInt], b: &[BigInt], m: &BigInt) -> IntPoly {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    let v: IntPoly = (0..n)
        .map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z))
        .collect();
    modp(&v, m)
}

fn mul_m(a: &[BigInt], b: &[BigInt], m: &BigInt) -> IntPoly {
    modp(&intpoly::mul(a, b), m)
}

/// Division by a monic `b` modulo `m`.
fn divmod_monic(a: &[BigInt], b: &[BigInt], m: &BigInt) -> (IntPoly, IntPoly) {
    let db = b.len() - 1;
    let mut r = modp(a, m);
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![BigInt::zero(); r.len() - db];
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let t = r.last().unwrap().clone();
        for (j, bc) in b.iter().enumerate() {
            r[shift + j] = (&r[shift + j] - &t * bc).mod_floor(m);
        }
        q[shift] = t;
        r.pop();
        intpoly::trim(&mut r);
    }
    intpoly::trim(&mut q);
    (q, r)
}

/// Lifts `f = g * h mod p` (with `h` monic) to a factorization modulo
/// `target`, which must be a power of `p` of the form `p^(2^k)`.
fn hensel_pair(
    f: &IntPoly,
    g0: &FpPoly,
    h0: &FpPoly,
    p: u64,
    target: &BigInt,
) -> (IntPoly, IntPoly) {
    let (one, s0, t0) = fp::xgcd(g0, h0, p);
    debug_assert!(fp::is_one(&one));
    let (mut g, mut h, mut s, mut t) = (lift_poly(g0), lift_poly(h0), lift_poly(&s0), lift_poly(&t0));
    let mut m = BigInt::from(p);
    while &m < target {
        m = &m * &m;
        let e = sub_m(f, &mul_m(&g, &h, &m), &m);
        let (q, r) = divmod_monic(&mul_m(&s, &e, &m), &h, &m);
        let g_new = add_m(&add_m(&g, &mul_m(&t, &e, &m), &m), &mul_m(&q, &g, &m), &m);
        let h_new = add_m(&h, &r, &m);
        let b = sub_m(
            &add_m(&mul_m(&s, &g_new, &m), &mul_m(&t, &h_new, &m), &m),
            &[BigInt::one()],
            &m,
        );
        let (c, d) = divmod_monic(&mul_m(&s, &b, &m), &h_new, &m);
        s = sub_m(&s, &d, &m);
        t = sub_m(&sub_m(&t, &mul_m(&t, &b, &m), &m), &mul_m(&c, &g_new, &m), &m);
        g = g_new;
        h = h_new;
    }
    (g, h)
}

/// Lifts `f = lc * prod(factors) mod p` to monic factors modulo `modulus`.
fn multifactor_lift(
    f: &IntPoly,
    lc: &BigInt,
    factors: Vec<FpPoly>,
    p: u64,
    modulus: &BigInt,
) -> Vec<IntPoly> {
    let lc_inv = lc.modinv(modulus).expect("lc is a unit modulo p");
    if factors.len() == 1 {
        return vec![modp(&f.iter().map(|c| c * &lc_inv).collect::<IntPoly>(), modulus)];
    }
    let k = factors.len() / 2;
    let right = factors[k..].to_vec();
    let mut left = factors;
    left.truncate(k);
    let prod = |fs: &[FpPoly]| fs.iter().fold(vec![1u64], |acc, g| fp::mul(&acc, g, p));
    let a = prod(&left);
    let b = prod(&right);
    let lc_p = (lc.mod_floor(&BigInt::from(p))).to_u64().unwrap();
    let g0 = fp::scale(&a, lc_p, p);
    let (g, h) = hensel_pair(f, &g0, &b, p, modulus);
    let g_monic = modp(&g.iter().map(|c| c * &lc_inv).collect::<IntPoly>(), modulus);
    let one = BigInt::one();
    let mut out = multifactor_lift(&g_monic, &one, left, p, modulus);
    out.extend(multifactor_lift(&h, &one, right, p, modulus));
    out
}

fn symmetric(a: &[BigInt], m: &BigInt) -> IntPoly {
    let half = m >> 1;
    let mut out: IntPoly = a
        .iter()
        .map(|c| {
            let r = c.mod_floor(m);
            if r > half {
                r - m
            } else {
                r
            }
        })
        .collect();
    intpoly::trim(&mut out);
    out
}

/// Subset recombination by increasing subset size.
fn recombine(f: &IntPoly, mut lifted: Vec<IntPoly>, m: &BigInt) -> Vec<IntPoly> {
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut size = 1;
    while 2 * size <= lifted.len() {
        let mut found = None;
        let lc = rest.last().unwrap().clone();
        let const_target = &lc * &rest[0];
        for subset in Combinations::new(lifted.len(), size) {
            // constant-term divisibility is a cheap necessary condition
            let c0 = subset
                .iter()
                .fold(lc.clone(), |acc, &i| (acc * &lifted[i][0]).mod_floor(m));
            let c0 = symmetric(&[c0], m).pop().unwrap_or_default();
            if c0.is_zero() {
                if !const_target.is_zero() {
                    continue;
                }
            } else if !(&const_target % &c0).is_zero() {
                continue;
            }
            let cand = subset
                .iter()
                .fold(vec![lc.clone()], |acc, &i| mul_m(&acc, &lifted[i], m));
            let g = intpoly::primitive_part(&symmetric(&cand, m));
            if let Some(q) = intpoly::div_exact(&rest, &g) {
                found = Some((subset, g, q));
                break;
            }
        }
        match found {
            Some((subset, g, q)) => {
                out.push(g);
                rest = q;
                for &i in subset.iter().rev() {
                    lifted.remove(i);
                }
            }
            None => size += 1,
        }
    }
    if rest.len() > 1 {
        out.push(intpoly::primitive_part(&rest));
    }
    out
}

/// Index subsets of a fixed size in lexicographic order.
struct Combinations {
    n: usize,
    idx: Vec<usize>,
    first: bool,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        Combinations {
            n,
            idx: (0..k).collect(),
            first: true,
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;
    fn next(&mut self) -> Option<Vec<usize>> {
        let k = self.idx.len();
        if k > self.n {
            return None;
        }
        if self.first {
            self.first = false;
            return Some(self.idx.clone());
        }
        let mut i = k;
        while i > 0 {
            i -= 1;
            if self.idx[i] < self.n - k + i {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                return Some(self.idx.clone());
            }
        }
        None
    }
}
