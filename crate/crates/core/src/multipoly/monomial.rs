use std::cmp::Ordering;

use crate::error::{Error, Result};

/// Orders usable inside a block. Variables with a higher index take
/// precedence: under `Lex`, `x2 > x1^k` for every `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BaseOrder {
    Lex,
    GrevLex,
}

/// A monomial order on a fixed number of variables.
///
/// `Elimination` treats the last variable as its own block that dominates
/// the remaining variables, which are compared by the inner order. This is
/// the `y > x` order under which a Groebner basis of `I` together with a
/// lift of a monic `f` is again a Groebner basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    Lex,
    GrevLex,
    Elimination(BaseOrder),
}

impl MonomialOrder {
    /// The order on the variable block below the eliminated variable.
    pub fn inner(self) -> MonomialOrder {
        match self {
            MonomialOrder::Elimination(BaseOrder::Lex) | MonomialOrder::Lex => MonomialOrder::Lex,
            MonomialOrder::Elimination(BaseOrder::GrevLex) | MonomialOrder::GrevLex => {
                MonomialOrder::GrevLex
            }
        }
    }

    /// The elimination order with this order on the inner block.
    pub fn eliminating(self) -> MonomialOrder {
        match self.inner() {
            MonomialOrder::GrevLex => MonomialOrder::Elimination(BaseOrder::GrevLex),
            _ => MonomialOrder::Elimination(BaseOrder::Lex),
        }
    }

    pub fn is_elimination(self) -> bool {
        matches!(self, MonomialOrder::Elimination(_))
    }
}

/// Exponent vector, one entry per ambient variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        other
            .divides(self)
            .then(|| Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Appends zero exponents up to `nvars` variables.
    pub fn extended(&self, nvars: usize) -> Monomial {
        let mut e = self.0.clone();
        e.resize(nvars, 0);
        Monomial(e)
    }

    /// Index of the single variable when the monomial is a pure power
    /// `x_i^k` with `k >= 1`.
    pub fn pure_power_var(&self) -> Option<usize> {
        let mut found = None;
        for (i, &e) in self.0.iter().enumerate() {
            if e > 0 {
                if found.is_some() {
                    return None;
                }
                found = Some(i);
            }
        }
        found
    }
}

/// Compares two monomials under `order`.
pub fn mono_cmp(a: &Monomial, b: &Monomial, order: MonomialOrder) -> Result<Ordering> {
    if a.nvars() != b.nvars() {
        return Err(Error::ArityMismatch {
            expected: a.nvars(),
            found: b.nvars(),
        });
    }
    Ok(cmp_exps(&a.0, &b.0, order))
}

pub(crate) fn cmp_exps(a: &[u32], b: &[u32], order: MonomialOrder) -> Ordering {
    match order {
        MonomialOrder::Lex => cmp_lex(a, b),
        MonomialOrder::GrevLex => cmp_grevlex(a, b),
        MonomialOrder::Elimination(inner) => {
            let n = a.len();
            if n == 0 {
                return Ordering::Equal;
            }
            a[n - 1].cmp(&b[n - 1]).then_with(|| match inner {
                BaseOrder::Lex => cmp_lex(&a[..n - 1], &b[..n - 1]),
                BaseOrder::GrevLex => cmp_grevlex(&a[..n - 1], &b[..n - 1]),
            })
        }
    }
}

fn cmp_lex(a: &[u32], b: &[u32]) -> Ordering {
    for i in (0..a.len()).rev() {
        match a[i].cmp(&b[i]) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

fn cmp_grevlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    if da != db {
        return da.cmp(&db);
    }
    // the least significant variable is index 0; a smaller exponent there wins
    for i in 0..a.len() {
        if a[i] != b[i] {
            return b[i].cmp(&a[i]);
        }
    }
    Ordering::Equal
}

/// Ordering used for listing standard monomials and for printing: the
/// eliminated variable (if any) first, then `x1, x2, ...` in declaration
/// order, compared lexicographically on exponents.
pub fn presentation_cmp(a: &Monomial, b: &Monomial, order: MonomialOrder) -> Ordering {
    let n = a.nvars();
    if order.is_elimination() && n > 0 {
        a.0[n - 1]
            .cmp(&b.0[n - 1])
            .then_with(|| a.0[..n - 1].cmp(&b.0[..n - 1]))
    } else {
        a.0.cmp(&b.0)
    }
}
