use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// The ground field: the rationals or a word-size prime field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Rational,
    Prime(u64),
}

/// An exact element of a [`Field`].
///
/// Rationals are kept in lowest terms with a positive denominator, prime
/// field residues in `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldElement {
    Rational(BigRational),
    Prime { value: u64, modulus: u64 },
}

impl Field {
    /// The prime field of order `p`; rejects composite or tiny moduli.
    pub fn prime(p: u64) -> Result<Field> {
        if is_prime_u64(p) {
            Ok(Field::Prime(p))
        } else {
            Err(Error::BadModulus(p))
        }
    }

    pub fn characteristic(&self) -> u64 {
        match *self {
            Field::Rational => 0,
            Field::Prime(p) => p,
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, Field::Rational)
    }

    pub fn zero(&self) -> FieldElement {
        self.from_i64(0)
    }

    pub fn one(&self) -> FieldElement {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> FieldElement {
        match *self {
            Field::Rational => FieldElement::Rational(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => FieldElement::Prime {
                value: (n as i128).rem_euclid(p as i128) as u64,
                modulus: p,
            },
        }
    }

    pub fn from_u64(&self, n: u64) -> FieldElement {
        match *self {
            Field::Rational => FieldElement::Rational(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => FieldElement::Prime {
                value: n % p,
                modulus: p,
            },
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> FieldElement {
        match *self {
            Field::Rational => FieldElement::Rational(BigRational::from_integer(n.clone())),
            Field::Prime(p) => {
                let r = n.mod_floor(&BigInt::from(p));
                FieldElement::Prime {
                    value: r.to_u64().expect("residue fits in u64"),
                    modulus: p,
                }
            }
        }
    }

    /// Maps a rational number into the field; fails when the denominator
    /// vanishes modulo the characteristic.
    pub fn from_ratio(&self, q: &BigRational) -> Result<FieldElement> {
        match *self {
            Field::Rational => Ok(FieldElement::Rational(q.clone())),
            Field::Prime(_) => {
                let num = self.from_bigint(q.numer());
                let den = self.from_bigint(q.denom());
                num.checked_div(&den)
            }
        }
    }

    /// All elements of a prime field in increasing residue order.
    pub fn elements(&self) -> Option<Vec<FieldElement>> {
        match *self {
            Field::Rational => None,
            Field::Prime(p) => Some(
                (0..p)
                    .map(|value| FieldElement::Prime { value, modulus: p })
                    .collect(),
            ),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

#[inline]
fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let (s, overflow) = a.overflowing_add(b);
    if overflow || s >= p {
        s.wrapping_sub(p)
    } else {
        s
    }
}

/// Modular inverse by the extended Euclidean algorithm. `None` when
/// `gcd(a, p) != 1`.
pub(crate) fn inv_mod(a: u64, p: u64) -> Option<u64> {
    let (mut r0, mut r1) = (p as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(p as i128) as u64)
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &SMALL {
        if n % q == 0 {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

impl FieldElement {
    pub fn field(&self) -> Field {
        match self {
            FieldElement::Rational(_) => Field::Rational,
            FieldElement::Prime { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElement::Rational(q) => q.is_zero(),
            FieldElement::Prime { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElement::Rational(q) => q.is_one(),
            FieldElement::Prime { value, .. } => *value == 1,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            FieldElement::Rational(q) => Some(q),
            FieldElement::Prime { .. } => None,
        }
    }

    /// Residue in `[0, p)` for prime field elements.
    pub fn residue(&self) -> Option<u64> {
        match self {
            FieldElement::Rational(_) => None,
            FieldElement::Prime { value, .. } => Some(*value),
        }
    }

    /// Whether the printed form starts with a minus sign. Prime field
    /// residues above `p/2` print as negative integers.
    pub fn is_negative(&self) -> bool {
        match self {
            FieldElement::Rational(q) => q.is_negative(),
            FieldElement::Prime { value, modulus } => *value > modulus / 2,
        }
    }

    pub fn inv(&self) -> Result<FieldElement> {
        match self {
            FieldElement::Rational(q) => {
                if q.is_zero() {
                    Err(Error::ZeroInversion)
                } else {
                    Ok(FieldElement::Rational(q.recip()))
                }
            }
            FieldElement::Prime { value, modulus } => {
                if *value == 0 {
                    return Err(Error::ZeroInversion);
                }
                inv_mod(*value, *modulus)
                    .map(|value| FieldElement::Prime {
                        value,
                        modulus: *modulus,
                    })
                    .ok_or(Error::BadModulus(*modulus))
            }
        }
    }

    pub fn checked_div(&self, rhs: &FieldElement) -> Result<FieldElement> {
        Ok(self * &rhs.inv()?)
    }

    pub fn pow(&self, mut exp: u64) -> FieldElement {
        let mut acc = self.field().one();
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Total order used for canonical output: numeric for rationals,
    /// residue order for prime fields.
    pub fn canonical_cmp(&self, other: &FieldElement) -> Ordering {
        match (self, other) {
            (FieldElement::Rational(a), FieldElement::Rational(b)) => a.cmp(b),
            (FieldElement::Prime { value: a, .. }, FieldElement::Prime { value: b, .. }) => {
                a.cmp(b)
            }
            _ => panic!("comparison of elements from different fields"),
        }
    }

    /// Absolute value of the printed form (see [`FieldElement::is_negative`]).
    pub fn abs_display(&self) -> FieldElement {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }
}

fn mismatch() -> ! {
    panic!("arithmetic on elements from different fields")
}

impl Add<&FieldElement> for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        match (self, rhs) {
            (FieldElement::Rational(a), FieldElement::Rational(b)) => FieldElement::Rational(a + b),
            (
                FieldElement::Prime { value: a, modulus },
                FieldElement::Prime { value: b, modulus: m2 },
            ) if modulus == m2 => FieldElement::Prime {
                value: add_mod(*a, *b, *modulus),
                modulus: *modulus,
            },
            _ => mismatch(),
        }
    }
}

impl Sub<&FieldElement> for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        match (self, rhs) {
            (FieldElement::Rational(a), FieldElement::Rational(b)) => FieldElement::Rational(a - b),
            (
                FieldElement::Prime { value: a, modulus },
                FieldElement::Prime { value: b, modulus: m2 },
            ) if modulus == m2 => FieldElement::Prime {
                value: add_mod(*a, if *b == 0 { 0 } else { modulus - b }, *modulus),
                modulus: *modulus,
            },
            _ => mismatch(),
        }
    }
}

impl Mul<&FieldElement> for &FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        match (self, rhs) {
            (FieldElement::Rational(a), FieldElement::Rational(b)) => FieldElement::Rational(a * b),
            (
                FieldElement::Prime { value: a, modulus },
                FieldElement::Prime { value: b, modulus: m2 },
            ) if modulus == m2 => FieldElement::Prime {
                value: mul_mod(*a, *b, *modulus),
                modulus: *modulus,
            },
            _ => mismatch(),
        }
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        match self {
            FieldElement::Rational(a) => FieldElement::Rational(-a),
            FieldElement::Prime { value, modulus } => FieldElement::Prime {
                value: if *value == 0 { 0 } else { modulus - value },
                modulus: *modulus,
            },
        }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident, $atr:ident, $am:ident) => {
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: FieldElement) -> FieldElement {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: &FieldElement) -> FieldElement {
                (&self).$m(rhs)
            }
        }
        impl $tr<FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: FieldElement) -> FieldElement {
                self.$m(&rhs)
            }
        }
        impl $atr<&FieldElement> for FieldElement {
            fn $am(&mut self, rhs: &FieldElement) {
                *self = (&*self).$m(rhs);
            }
        }
        impl $atr<FieldElement> for FieldElement {
            fn $am(&mut self, rhs: FieldElement) {
                *self = (&*self).$m(&rhs);
            }
        }
    };
}

forward_owned!(Add, add, AddAssign, add_assign);
forward_owned!(Sub, sub, SubAssign, sub_assign);
forward_owned!(Mul, mul, MulAssign, mul_assign);

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElement::Rational(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            FieldElement::Prime { value, modulus } => {
                if *value > modulus / 2 {
                    write!(f, "-{}", modulus - value)
                } else {
                    write!(f, "{value}")
                }
            }
        }
    }
}
