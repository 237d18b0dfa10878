use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::monomial::{cmp_exps, presentation_cmp, Monomial, MonomialOrder};
use crate::arith::{Field, FieldElement, UniPoly};
use crate::error::{Error, Result};

/// Map key ordering monomials under a runtime-selected order.
#[derive(Clone, Debug)]
struct Key {
    mono: Monomial,
    order: MonomialOrder,
}

impl PartialEq for Key {
    fn eq(&self, other: &Self) -> bool {
        self.mono == other.mono
    }
}

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        cmp_exps(self.mono.exps(), other.mono.exps(), self.order)
    }
}

/// Sparse multivariate polynomial; zero coefficients are never stored.
#[derive(Clone, Debug)]
pub struct MultiPoly {
    field: Field,
    nvars: usize,
    order: MonomialOrder,
    terms: BTreeMap<Key, FieldElement>,
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.nvars == other.nvars
            && self.terms.len() == other.terms.len()
            && self
                .terms
                .iter()
                .zip(other.terms.iter())
                .all(|((ka, ca), (kb, cb))| ka.mono == kb.mono && ca == cb)
    }
}

impl Eq for MultiPoly {}

impl MultiPoly {
    pub fn zero(field: Field, nvars: usize, order: MonomialOrder) -> Self {
        MultiPoly {
            field,
            nvars,
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: FieldElement, nvars: usize, order: MonomialOrder) -> Self {
        let mut p = Self::zero(c.field(), nvars, order);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn one(field: Field, nvars: usize, order: MonomialOrder) -> Self {
        Self::constant(field.one(), nvars, order)
    }

    /// The variable with index `i`.
    pub fn var(field: Field, nvars: usize, order: MonomialOrder, i: usize) -> Self {
        let mut p = Self::zero(field, nvars, order);
        p.add_term(Monomial::var(nvars, i), field.one());
        p
    }

    pub fn from_terms<I>(field: Field, nvars: usize, order: MonomialOrder, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, FieldElement)>,
    {
        let mut p = Self::zero(field, nvars, order);
        for (m, c) in terms {
            assert_eq!(m.nvars(), nvars, "monomial arity");
            p.add_term(m, c);
        }
        p
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// The polynomial is a (possibly zero) constant.
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|k| k.mono.is_one())
    }

    pub fn constant_term(&self) -> FieldElement {
        self.coeff(&Monomial::one(self.nvars))
    }

    pub fn coeff(&self, m: &Monomial) -> FieldElement {
        self.terms
            .get(&self.key(m.clone()))
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &FieldElement)> {
        self.terms.iter().map(|(k, c)| (&k.mono, c))
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &FieldElement)> {
        self.terms.iter().next_back().map(|(k, c)| (&k.mono, c))
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.leading_term().map(|(m, _)| m)
    }

    pub fn leading_coeff(&self) -> Option<&FieldElement> {
        self.leading_term().map(|(_, c)| c)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.mono.degree()).max()
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|k| k.mono.exps()[var]).max()
    }

    fn key(&self, mono: Monomial) -> Key {
        Key {
            mono,
            order: self.order,
        }
    }

    /// `self += c * m`.
    pub fn add_term(&mut self, m: Monomial, c: FieldElement) {
        if c.is_zero() {
            return;
        }
        let key = self.key(m);
        match self.terms.get_mut(&key) {
            Some(existing) => {
                *existing += &c;
                if existing.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    /// `self += c * m * other`.
    pub fn add_scaled(&mut self, other: &MultiPoly, m: &Monomial, c: &FieldElement) {
        if c.is_zero() {
            return;
        }
        for (k, oc) in &other.terms {
            self.add_term(k.mono.mul(m), oc * c);
        }
    }

    /// Removes and returns the leading term.
    pub fn pop_leading(&mut self) -> Option<(Monomial, FieldElement)> {
        self.terms.pop_last().map(|(k, c)| (k.mono, c))
    }

    fn check_compatible(&self, other: &MultiPoly) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::ArityMismatch {
                expected: self.nvars,
                found: other.nvars,
            });
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.mono.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_compatible(other)?;
        let mut out = Self::zero(self.field, self.nvars, self.order);
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                out.add_term(ka.mono.mul(&kb.mono), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &FieldElement) -> MultiPoly {
        if c.is_zero() {
            return Self::zero(self.field, self.nvars, self.order);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = &*v * c;
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial) -> MultiPoly {
        let mut out = Self::zero(self.field, self.nvars, self.order);
        for (k, c) in &self.terms {
            out.terms.insert(out.key(k.mono.mul(m)), c.clone());
        }
        out
    }

    pub fn pow(&self, mut exp: u32) -> MultiPoly {
        let mut acc = Self::one(self.field, self.nvars, self.order);
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

    /// Monic associate under the current order; zero stays zero.
    pub fn monic(&self) -> MultiPoly {
        match self.leading_coeff() {
            Some(c) if !c.is_one() => self.scale(&c.inv().expect("nonzero leading coefficient")),
            _ => self.clone(),
        }
    }

    /// The same polynomial keyed under a different order.
    pub fn with_order(&self, order: MonomialOrder) -> MultiPoly {
        let mut out = Self::zero(self.field, self.nvars, order);
        for (k, c) in &self.terms {
            out.terms.insert(out.key(k.mono.clone()), c.clone());
        }
        out
    }

    /// Embeds into a ring with more variables (appended at the end).
    pub fn extend_vars(&self, nvars: usize, order: MonomialOrder) -> MultiPoly {
        assert!(nvars >= self.nvars);
        let mut out = Self::zero(self.field, nvars, order);
        for (k, c) in &self.terms {
            out.terms.insert(out.key(k.mono.extended(nvars)), c.clone());
        }
        out
    }

    /// Drops trailing variables; fails if any dropped variable occurs.
    pub fn restrict_vars(&self, nvars: usize, order: MonomialOrder) -> Result<MultiPoly> {
        let mut out = Self::zero(self.field, nvars, order);
        for (k, c) in &self.terms {
            let e = k.mono.exps();
            if e[nvars..].iter().any(|&x| x != 0) {
                return Err(Error::InvalidInput(
                    "polynomial involves a variable outside the target ring".into(),
                ));
            }
            out.terms.insert(out.key(Monomial::new(e[..nvars].to_vec())), c.clone());
        }
        Ok(out)
    }

    /// Splits by powers of variable `var`: entry `i` is the coefficient of
    /// `var^i`, with `var` removed from the monomials (exponent set to 0).
    pub fn coefficients_in(&self, var: usize) -> Vec<MultiPoly> {
        let deg = self.degree_in(var).unwrap_or(0) as usize;
        let mut out = vec![Self::zero(self.field, self.nvars, self.order); deg + 1];
        if self.is_zero() {
            return Vec::new();
        }
        for (k, c) in &self.terms {
            let mut e = k.mono.exps().to_vec();
            let d = e[var] as usize;
            e[var] = 0;
            out[d].add_term(Monomial::new(e), c.clone());
        }
        out
    }

    /// Evaluates `q` at `r` by Horner's scheme without intermediate reduction.
    pub fn substitute_univariate(q: &UniPoly, r: &MultiPoly) -> MultiPoly {
        Self::substitute_univariate_with(q, r, |p| p)
    }

    /// Horner evaluation of `q(r)` applying `reduce` after every step.
    pub fn substitute_univariate_with<F>(q: &UniPoly, r: &MultiPoly, mut reduce: F) -> MultiPoly
    where
        F: FnMut(MultiPoly) -> MultiPoly,
    {
        let mut acc = Self::zero(r.field, r.nvars, r.order);
        let one = Monomial::one(r.nvars);
        for c in q.coeffs().iter().rev() {
            acc = &acc * r;
            acc.add_term(one.clone(), c.clone());
            acc = reduce(acc);
        }
        acc
    }

    /// Terms sorted for printing (see [`presentation_cmp`]), largest first.
    pub fn presentation_terms(&self) -> Vec<(&Monomial, &FieldElement)> {
        let mut ts: Vec<_> = self.terms().collect();
        ts.sort_by(|a, b| presentation_cmp(b.0, a.0, self.order));
        ts
    }

    /// Formats using the given variable names.
    pub fn display<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        PolyDisplay { poly: self, names }
    }
}

pub(crate) fn format_monomial(m: &Monomial, names: &[String]) -> String {
    let mut parts = Vec::new();
    // print x-variables in declaration order with the eliminated variable last
    for (i, &e) in m.exps().iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(names[i].clone()),
            _ => parts.push(format!("{}^{}", names[i], e)),
        }
    }
    parts.join("*")
}

/// Writes `terms` as a signed sum. Returns without output for no terms.
pub(crate) fn write_terms(
    f: &mut fmt::Formatter<'_>,
    terms: &[(&Monomial, &FieldElement)],
    names: &[String],
    leading_sign: bool,
) -> fmt::Result {
    for (idx, (m, c)) in terms.iter().enumerate() {
        let neg = c.is_negative();
        let mag = c.abs_display();
        if idx == 0 && !leading_sign {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if neg { '-' } else { '+' })?;
        }
        let mono = format_monomial(m, names);
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

struct PolyDisplay<'a> {
    poly: &'a MultiPoly,
    names: &'a [String],
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        write_terms(f, &self.poly.presentation_terms(), self.names, false)
    }
}

/// Default names `x1..xn`, or `x1..x(n-1), y` under an elimination order.
pub fn default_names(nvars: usize, order: MonomialOrder) -> Vec<String> {
    (0..nvars)
        .map(|i| {
            if order.is_elimination() && i + 1 == nvars {
                "y".to_string()
            } else {
                format!("x{}", i + 1)
            }
        })
        .collect()
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = default_names(self.nvars, self.order);
        fmt::Display::fmt(
            &PolyDisplay {
                poly: self,
                names: &names,
            },
            f,
        )
    }
}

impl Add<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.checked_add(rhs).expect("compatible operands")
    }
}

impl Sub<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self.checked_add(&-rhs).expect("compatible operands")
    }
}

impl Mul<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.checked_mul(rhs).expect("compatible operands")
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = -&*v;
        }
        out
    }
}
