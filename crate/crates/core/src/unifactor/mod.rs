//! Univariate factorization over the ground field.

mod zassenhaus;

use std::cmp::Ordering;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::arith::fpoly as fp;
use crate::arith::{Field, FieldElement, UniPoly};
use crate::error::{Error, Result};

/// `unit * prod(factor^multiplicity)` with monic irreducible factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniFactorization {
    pub unit: FieldElement,
    pub factors: Vec<(UniPoly, u32)>,
}

impl UniFactorization {
    pub fn expand(&self) -> UniPoly {
        self.factors
            .iter()
            .fold(UniPoly::constant(self.unit.clone()), |acc, (g, m)| &acc * &g.pow(*m))
    }

    fn sort(&mut self) {
        self.factors.sort_by(|a, b| poly_cmp(&a.0, &b.0).then(a.1.cmp(&b.1)));
    }
}

/// Orders by degree, then coefficients from the top down.
pub(crate) fn poly_cmp(a: &UniPoly, b: &UniPoly) -> Ordering {
    a.degree().cmp(&b.degree()).then_with(|| {
        for (x, y) in a.coeffs().iter().rev().zip(b.coeffs().iter().rev()) {
            match x.canonical_cmp(y) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    })
}

/// Squarefree decomposition into monic, pairwise coprime parts with
/// distinct multiplicities, in increasing multiplicity.
pub fn squarefree_decompose(f: &UniPoly) -> Result<Vec<(UniPoly, u32)>> {
    if f.is_zero() {
        return Err(Error::DivisionByZeroPoly);
    }
    let field = f.field();
    Ok(match field {
        Field::Rational => yun(&f.monic()),
        Field::Prime(p) => fp::squarefree(&to_fp(f), p)
            .into_iter()
            .map(|(g, m)| (from_fp(field, &g), m))
            .collect(),
    })
}

fn yun(f: &UniPoly) -> Vec<(UniPoly, u32)> {
    let mut out = Vec::new();
    if f.degree() == Some(0) {
        return out;
    }
    let df = f.derivative();
    let b = f.gcd(&df);
    let mut c = f.div_exact(&b).expect("gcd divides");
    let mut d = &df.div_exact(&b).expect("gcd divides") - &c.derivative();
    let mut i = 1;
    while c.degree() > Some(0) {
        let a = c.gcd(&d);
        c = c.div_exact(&a).expect("gcd divides");
        d = &d.div_exact(&a).expect("gcd divides") - &c.derivative();
        if a.degree() > Some(0) {
            out.push((a, i));
        }
        i += 1;
    }
    out
}

fn to_fp(f: &UniPoly) -> Vec<u64> {
    f.coeffs()
        .iter()
        .map(|c| c.residue().expect("prime field element"))
        .collect()
}

fn from_fp(field: Field, a: &[u64]) -> UniPoly {
    UniPoly::new(
        field,
        a.iter().map(|&c| field.from_u64(c)).collect(),
    )
}

/// Complete factorization over `F_p`.
pub fn factor_fp<R: Rng + ?Sized>(f: &UniPoly, rng: &mut R) -> Result<UniFactorization> {
    let Field::Prime(p) = f.field() else {
        return Err(Error::FieldMismatch);
    };
    let unit = f.leading().cloned().ok_or(Error::DivisionByZeroPoly)?;
    let mut factors = Vec::new();
    for (part, m) in fp::squarefree(&to_fp(f), p) {
        for g in fp::factor_squarefree(&part, p, rng) {
            factors.push((from_fp(f.field(), &g), m));
        }
    }
    let mut out = UniFactorization { unit, factors };
    out.sort();
    Ok(out)
}

/// Complete factorization over the rationals.
pub fn factor_q(f: &UniPoly) -> Result<UniFactorization> {
    factor_q_with(f, &mut ChaCha8Rng::seed_from_u64(0))
}

pub fn factor_q_with<R: Rng + ?Sized>(f: &UniPoly, rng: &mut R) -> Result<UniFactorization> {
    if !f.field().is_rational() {
        return Err(Error::FieldMismatch);
    }
    let unit = f.leading().cloned().ok_or(Error::DivisionByZeroPoly)?;
    let mut factors = Vec::new();
    for (part, m) in yun(&f.monic()) {
        let int = part.to_int_poly();
        for g in zassenhaus::factor_squarefree_primitive(&int, rng) {
            factors.push((UniPoly::from_int_poly(&g).monic(), m));
        }
    }
    let mut out = UniFactorization { unit, factors };
    out.sort();
    Ok(out)
}

/// Factors over whichever ground field `f` lives in.
pub fn factor<R: Rng + ?Sized>(f: &UniPoly, rng: &mut R) -> Result<UniFactorization> {
    match f.field() {
        Field::Rational => factor_q_with(f, rng),
        Field::Prime(_) => factor_fp(f, rng),
    }
}
