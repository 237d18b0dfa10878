//! Helpers for computing over `Q` through images modulo word-size primes.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::field::{inv_mod, is_prime_u64};
use super::{Field, FieldElement};

/// Largest prime strictly below `n`.
pub(crate) fn prev_prime(mut n: u64) -> u64 {
    loop {
        n -= 1;
        if is_prime_u64(n) {
            return n;
        }
    }
}

/// Descending primes below `2^62`.
pub(crate) fn large_primes() -> impl Iterator<Item = u64> {
    std::iter::successors(Some(prev_prime(1 << 62)), |&p| Some(prev_prime(p)))
}

/// Image of a rational element in `F_p`; `None` when `p` divides the
/// denominator.
pub(crate) fn reduce(c: &FieldElement, p: u64) -> Option<FieldElement> {
    let q = c.as_rational()?;
    Field::Prime(p).from_ratio(q).ok()
}

pub(crate) fn bigint_residue(x: &BigInt, p: u64) -> u64 {
    x.mod_floor(&BigInt::from(p)).to_u64().expect("reduced residue")
}

/// Residues of a list of integers combined across coprime moduli.
#[derive(Clone, Debug)]
pub(crate) struct Crt {
    pub modulus: BigInt,
    pub values: Vec<BigInt>,
}

impl Crt {
    pub fn new(len: usize) -> Self {
        Crt {
            modulus: BigInt::one(),
            values: vec![BigInt::zero(); len],
        }
    }

    /// Folds in residues modulo a new prime `p`.
    pub fn add(&mut self, p: u64, residues: &[u64]) {
        debug_assert_eq!(residues.len(), self.values.len());
        let pb = BigInt::from(p);
        let m_inv = inv_mod(bigint_residue(&self.modulus, p), p).expect("coprime moduli");
        for (v, &r) in self.values.iter_mut().zip(residues) {
            let cur = bigint_residue(v, p);
            let diff = (r as u128 + p as u128 - cur as u128) % p as u128;
            let t = (diff * m_inv as u128) % p as u128;
            *v += &self.modulus * BigInt::from(t as u64);
        }
        self.modulus *= pb;
    }

    /// Values in the symmetric range `(-m/2, m/2]`.
    pub fn symmetric(&self) -> Vec<BigInt> {
        let half = &self.modulus >> 1;
        self.values
            .iter()
            .map(|v| if v > &half { v - &self.modulus } else { v.clone() })
            .collect()
    }

    /// Rational reconstruction of every value, or `None` if any fails.
    pub fn rationals(&self) -> Option<Vec<BigRational>> {
        self.values
            .iter()
            .map(|v| rational_reconstruction(v, &self.modulus))
            .collect()
    }
}

/// The fraction `n/d` with `|n|, d <= sqrt(m/2)` and `n = a*d (mod m)`, if
/// one exists.
pub(crate) fn rational_reconstruction(a: &BigInt, m: &BigInt) -> Option<BigRational> {
    let bound = (m >> 1u32).sqrt();
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let (q, r) = r0.div_rem(&r1);
        (r0, r1) = (r1, r);
        let t = &t0 - &q * &t1;
        (t0, t1) = (t1, t);
    }
    if t1.is_zero() || t1.abs() > bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    Some(BigRational::new(r1, t1))
}
