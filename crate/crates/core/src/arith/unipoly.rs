use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;

use super::field::{Field, FieldElement};
use super::intpoly;
use crate::error::{Error, Result};

/// Dense univariate polynomial over a [`Field`], lowest degree first.
///
/// The zero polynomial has no coefficients; otherwise the last
/// coefficient is nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UniPoly {
    field: Field,
    coeffs: Vec<FieldElement>,
}

impl UniPoly {
    pub fn new(field: Field, mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        debug_assert!(coeffs.iter().all(|c| c.field() == field));
        UniPoly { field, coeffs }
    }

    pub fn from_i64s(field: Field, coeffs: &[i64]) -> Self {
        Self::new(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    /// Coefficients given as `(numerator, denominator)` pairs, lowest first.
    pub fn from_ratios(field: Field, coeffs: &[(i64, i64)]) -> Result<Self> {
        let cs = coeffs
            .iter()
            .map(|&(n, d)| field.from_ratio(&BigRational::new(n.into(), d.into())))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(field, cs))
    }

    pub fn zero(field: Field) -> Self {
        UniPoly { field, coeffs: Vec::new() }
    }

    pub fn one(field: Field) -> Self {
        Self::constant(field.one())
    }

    pub fn constant(c: FieldElement) -> Self {
        let field = c.field();
        Self::new(field, vec![c])
    }

    /// The indeterminate itself.
    pub fn x(field: Field) -> Self {
        Self::monomial(field.one(), 1)
    }

    pub fn monomial(c: FieldElement, degree: usize) -> Self {
        let field = c.field();
        let mut coeffs = vec![field.zero(); degree + 1];
        coeffs[degree] = c;
        Self::new(field, coeffs)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<FieldElement> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&FieldElement> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        if c.is_zero() {
            return Self::zero(self.field);
        }
        UniPoly {
            field: self.field,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Monic associate; the zero polynomial stays zero.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some(l) if l.is_one() => self.clone(),
            Some(l) => self.scale(&l.inv().expect("leading coefficient is nonzero")),
        }
    }

    /// Euclidean division `self = q * g + r` with `deg r < deg g`.
    pub fn divmod(&self, g: &UniPoly) -> Result<(UniPoly, UniPoly)> {
        let dg = g.degree().ok_or(Error::DivisionByZeroPoly)?;
        if self.coeffs.len() <= dg {
            return Ok((Self::zero(self.field), self.clone()));
        }
        let lead_inv = g.coeffs[dg].inv()?;
        let mut r = self.coeffs.clone();
        let mut q = vec![self.field.zero(); r.len() - dg];
        for shift in (0..q.len()).rev() {
            let top = &r[shift + dg];
            if top.is_zero() {
                continue;
            }
            let t = top * &lead_inv;
            for (j, gc) in g.coeffs.iter().enumerate() {
                let d = &t * gc;
                r[shift + j] -= &d;
            }
            q[shift] = t;
        }
        r.truncate(dg);
        Ok((Self::new(self.field, q), Self::new(self.field, r)))
    }

    pub fn rem(&self, g: &UniPoly) -> Result<UniPoly> {
        Ok(self.divmod(g)?.1)
    }

    /// Exact quotient, or `None` when `g` does not divide `self`.
    pub fn div_exact(&self, g: &UniPoly) -> Option<UniPoly> {
        let (q, r) = self.divmod(g).ok()?;
        r.is_zero().then_some(q)
    }

    /// Monic greatest common divisor; zero only when both inputs are zero.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        match self.field {
            Field::Rational => {
                let a = self.to_int_poly();
                let b = other.to_int_poly();
                let g = intpoly::gcd(&a, &b);
                Self::from_int_poly(&g).monic()
            }
            Field::Prime(_) => {
                let (mut a, mut b) = (self.clone(), other.clone());
                while !b.is_zero() {
                    let r = a.rem(&b).expect("nonzero divisor");
                    a = b;
                    b = r;
                }
                a.monic()
            }
        }
    }

    /// Formal derivative.
    pub fn derivative(&self) -> UniPoly {
        let cs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * &self.field.from_i64(i as i64))
            .collect();
        Self::new(self.field, cs)
    }

    pub fn eval(&self, x: &FieldElement) -> FieldElement {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn pow(&self, mut exp: u32) -> UniPoly {
        let mut acc = Self::one(self.field);
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

    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && self.gcd(&self.derivative()).degree() == Some(0)
    }

    /// Primitive integer polynomial associated with a rational polynomial.
    pub(crate) fn to_int_poly(&self) -> intpoly::IntPoly {
        let qs: Vec<BigRational> = self
            .coeffs
            .iter()
            .map(|c| c.as_rational().expect("rational polynomial").clone())
            .collect();
        intpoly::from_rationals(&qs)
    }

    pub(crate) fn from_int_poly(p: &[num_bigint::BigInt]) -> UniPoly {
        Self::new(
            Field::Rational,
            p.iter().map(|c| Field::Rational.from_bigint(c)).collect(),
        )
    }

    /// Formats with the given indeterminate name, highest degree first.
    pub fn display<'a>(&'a self, var: &'a str) -> impl fmt::Display + 'a {
        UniDisplay { poly: self, var }
    }
}

struct UniDisplay<'a> {
    poly: &'a UniPoly,
    var: &'a str,
}

impl fmt::Display for UniDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.poly.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs_display();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let mono = match i {
                0 => String::new(),
                1 => self.var.to_string(),
                _ => format!("{}^{}", self.var, i),
            };
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{mag}*{mono}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display("x"))
    }
}

impl Add<&UniPoly> for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let cs = (0..n).map(|i| &self.coeff(i) + &rhs.coeff(i)).collect();
        UniPoly::new(self.field, cs)
    }
}

impl Sub<&UniPoly> for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let cs = (0..n).map(|i| &self.coeff(i) - &rhs.coeff(i)).collect();
        UniPoly::new(self.field, cs)
    }
}

impl Mul<&UniPoly> for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero(self.field);
        }
        let mut cs = vec![self.field.zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                let t = a * b;
                cs[i + j] += &t;
            }
        }
        UniPoly::new(self.field, cs)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly {
            field: self.field,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}
