//! Arithmetic in `K = k[x1..xn]/I` and in `K[y]`.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use crate::arith::modular::{self, large_primes};
use crate::arith::{Field, FieldElement};
use crate::error::{Error, Result};
use crate::linalg::{self, ExactMatrix};
use crate::multipoly::{default_names, presentation_cmp, write_terms, Monomial, MonomialOrder, MultiPoly};
use crate::reduction::GroebnerBasis;

/// Element of `K`, stored as its normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtElement {
    rep: MultiPoly,
}

impl ExtElement {
    pub fn rep(&self) -> &MultiPoly {
        &self.rep
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.rep.is_constant() && self.rep.constant_term().is_one()
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        self.rep.display(names)
    }
}

impl fmt::Display for ExtElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.rep, f)
    }
}

/// Polynomial in `y` over `K`, lowest degree first with a nonzero leading
/// coefficient (empty for zero).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtPoly {
    coeffs: Vec<ExtElement>,
}

impl ExtPoly {
    pub fn coeffs(&self) -> &[ExtElement] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&ExtElement> {
        self.coeffs.last()
    }

    pub fn coeff(&self, i: usize) -> Option<&ExtElement> {
        self.coeffs.get(i)
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(ExtElement::is_one)
    }

    fn trimmed(mut coeffs: Vec<ExtElement>) -> Self {
        while coeffs.last().is_some_and(ExtElement::is_zero) {
            coeffs.pop();
        }
        ExtPoly { coeffs }
    }

    /// Formats the natural lift with the given names (`x`-variables then `y`).
    pub fn display<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        ExtPolyDisplay { poly: self, names }
    }
}

struct ExtPolyDisplay<'a> {
    poly: &'a ExtPoly,
    names: &'a [String],
}

impl fmt::Display for ExtPolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        let n = self.names.len() - 1;
        let mut owned: Vec<(Monomial, FieldElement)> = Vec::new();
        for (j, c) in self.poly.coeffs.iter().enumerate().rev() {
            for (m, v) in c.rep.presentation_terms() {
                let mut e = m.exps().to_vec();
                debug_assert_eq!(e.len(), n);
                e.push(j as u32);
                owned.push((Monomial::new(e), v.clone()));
            }
        }
        let terms: Vec<(&Monomial, &FieldElement)> = owned.iter().map(|(m, c)| (m, c)).collect();
        write_terms(f, &terms, self.names, false)
    }
}

/// The field `K` given by a Groebner basis of a maximal ideal `I`.
#[derive(Clone, Debug)]
pub struct ExtField {
    gb: GroebnerBasis,
    staircase: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl ExtField {
    pub fn new(gb: GroebnerBasis) -> Result<Self> {
        if gb.order().is_elimination() {
            return Err(Error::InvalidInput(
                "the ideal must use a lex or grevlex order".into(),
            ));
        }
        if gb.is_unit_ideal() {
            return Err(Error::InvalidInput("the ideal is the whole ring".into()));
        }
        let staircase = gb.staircase()?;
        let index = staircase
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        Ok(ExtField {
            gb,
            staircase,
            index,
        })
    }

    pub fn basis(&self) -> &GroebnerBasis {
        &self.gb
    }

    pub fn field(&self) -> Field {
        self.gb.field()
    }

    pub fn nvars(&self) -> usize {
        self.gb.nvars()
    }

    pub fn order(&self) -> MonomialOrder {
        self.gb.order()
    }

    /// `dim_k K`.
    pub fn degree(&self) -> usize {
        self.staircase.len()
    }

    pub fn staircase(&self) -> &[Monomial] {
        &self.staircase
    }

    /// Default names `x1..xn, y` for printing.
    pub fn names(&self) -> Vec<String> {
        default_names(self.nvars() + 1, self.order().eliminating())
    }

    pub fn element(&self, p: &MultiPoly) -> Result<ExtElement> {
        if p.nvars() != self.nvars() {
            return Err(Error::ArityMismatch {
                expected: self.nvars(),
                found: p.nvars(),
            });
        }
        if p.field() != self.field() {
            return Err(Error::FieldMismatch);
        }
        Ok(ExtElement {
            rep: self.gb.normal_form(p),
        })
    }

    pub fn zero(&self) -> ExtElement {
        ExtElement {
            rep: MultiPoly::zero(self.field(), self.nvars(), self.order()),
        }
    }

    pub fn one(&self) -> ExtElement {
        self.constant(self.field().one())
    }

    pub fn constant(&self, c: FieldElement) -> ExtElement {
        ExtElement {
            rep: MultiPoly::constant(c, self.nvars(), self.order()),
        }
    }

    /// The class `alpha_i` of `x_i` (0-based).
    pub fn generator(&self, i: usize) -> ExtElement {
        ExtElement {
            rep: self
                .gb
                .normal_form(&MultiPoly::var(self.field(), self.nvars(), self.order(), i)),
        }
    }

    pub fn add(&self, a: &ExtElement, b: &ExtElement) -> ExtElement {
        ExtElement { rep: &a.rep + &b.rep }
    }

    pub fn sub(&self, a: &ExtElement, b: &ExtElement) -> ExtElement {
        ExtElement { rep: &a.rep - &b.rep }
    }

    pub fn neg(&self, a: &ExtElement) -> ExtElement {
        ExtElement { rep: -&a.rep }
    }

    pub fn mul(&self, a: &ExtElement, b: &ExtElement) -> ExtElement {
        if a.is_zero() || b.is_zero() {
            return self.zero();
        }
        if a.rep.is_constant() {
            return ExtElement {
                rep: b.rep.scale(&a.rep.constant_term()),
            };
        }
        if b.rep.is_constant() {
            return ExtElement {
                rep: a.rep.scale(&b.rep.constant_term()),
            };
        }
        ExtElement {
            rep: self.gb.normal_form(&(&a.rep * &b.rep)),
        }
    }

    pub fn coordinates(&self, a: &ExtElement) -> Vec<FieldElement> {
        let mut v = vec![self.field().zero(); self.degree()];
        for (m, c) in a.rep.terms() {
            v[self.index[m]] = c.clone();
        }
        v
    }

    pub fn from_coordinates(&self, v: &[FieldElement]) -> ExtElement {
        ExtElement {
            rep: MultiPoly::from_terms(
                self.field(),
                self.nvars(),
                self.order(),
                self.staircase
                    .iter()
                    .zip(v)
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(m, c)| (m.clone(), c.clone())),
            ),
        }
    }

    /// Matrix of multiplication by `a` on the staircase of `I`; row `i`
    /// holds the coordinates of `a * B[i]`.
    pub fn multiplication_matrix(&self, a: &ExtElement) -> ExactMatrix {
        let rows = self
            .staircase
            .iter()
            .map(|b| {
                let p = self.gb.normal_form(&a.rep.mul_monomial(b));
                self.coordinates(&ExtElement { rep: p })
            })
            .collect();
        ExactMatrix::from_rows(self.field(), rows).expect("square matrix")
    }

    /// Inverse by solving `M_a^T x = e_1`. A singular system exposes a
    /// zero divisor and proves `I` is not maximal.
    pub fn inv(&self, a: &ExtElement) -> Result<ExtElement> {
        if a.is_zero() {
            return Err(Error::ZeroInversion);
        }
        if a.rep.is_constant() {
            return Ok(self.constant(a.rep.constant_term().inv()?));
        }
        let mt = self.multiplication_matrix(a).transpose();
        let one = self.index[&Monomial::one(self.nvars())];
        let mut e = vec![self.field().zero(); self.degree()];
        e[one] = self.field().one();
        match linalg::solve(&mt, &e) {
            Ok(x) => Ok(self.from_coordinates(&x)),
            Err(Error::Singular { kernel }) => Err(Error::NotMaximalIdeal {
                element: a.rep.clone(),
                annihilator: self.from_coordinates(&kernel).rep,
            }),
            Err(e) => Err(e),
        }
    }

    pub fn poly(&self, coeffs: Vec<ExtElement>) -> ExtPoly {
        ExtPoly::trimmed(coeffs)
    }

    pub fn poly_zero(&self) -> ExtPoly {
        ExtPoly { coeffs: Vec::new() }
    }

    pub fn poly_one(&self) -> ExtPoly {
        ExtPoly {
            coeffs: vec![self.one()],
        }
    }

    /// `y - a`.
    pub fn linear(&self, a: &ExtElement) -> ExtPoly {
        ExtPoly {
            coeffs: vec![self.neg(a), self.one()],
        }
    }

    pub fn poly_add(&self, f: &ExtPoly, g: &ExtPoly) -> ExtPoly {
        let n = f.coeffs.len().max(g.coeffs.len());
        let z = self.zero();
        ExtPoly::trimmed(
            (0..n)
                .map(|i| self.add(f.coeffs.get(i).unwrap_or(&z), g.coeffs.get(i).unwrap_or(&z)))
                .collect(),
        )
    }

    pub fn poly_sub(&self, f: &ExtPoly, g: &ExtPoly) -> ExtPoly {
        let n = f.coeffs.len().max(g.coeffs.len());
        let z = self.zero();
        ExtPoly::trimmed(
            (0..n)
                .map(|i| self.sub(f.coeffs.get(i).unwrap_or(&z), g.coeffs.get(i).unwrap_or(&z)))
                .collect(),
        )
    }

    pub fn poly_mul(&self, f: &ExtPoly, g: &ExtPoly) -> ExtPoly {
        if f.is_zero() || g.is_zero() {
            return self.poly_zero();
        }
        // accumulate unreduced products, then reduce each coefficient once
        let mut acc: Vec<MultiPoly> = vec![self.zero().rep; f.coeffs.len() + g.coeffs.len() - 1];
        for (i, a) in f.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in g.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    acc[i + j] = &acc[i + j] + &(&a.rep * &b.rep);
                }
            }
        }
        ExtPoly::trimmed(
            acc.into_iter()
                .map(|p| ExtElement {
                    rep: self.gb.normal_form(&p),
                })
                .collect(),
        )
    }

    pub fn poly_scale(&self, f: &ExtPoly, c: &ExtElement) -> ExtPoly {
        ExtPoly::trimmed(f.coeffs.iter().map(|a| self.mul(a, c)).collect())
    }

    pub fn poly_pow(&self, f: &ExtPoly, e: u32) -> ExtPoly {
        (0..e).fold(self.poly_one(), |acc, _| self.poly_mul(&acc, f))
    }

    pub fn poly_monic(&self, f: &ExtPoly) -> Result<ExtPoly> {
        match f.leading() {
            None => Ok(f.clone()),
            Some(l) if l.is_one() => Ok(f.clone()),
            Some(l) => Ok(self.poly_scale(f, &self.inv(l)?)),
        }
    }

    pub fn poly_divmod(&self, f: &ExtPoly, g: &ExtPoly) -> Result<(ExtPoly, ExtPoly)> {
        let dg = g.degree().ok_or(Error::DivisionByZeroPoly)?;
        let lc_inv = if g.is_monic() {
            self.one()
        } else {
            self.inv(g.leading().unwrap())?
        };
        let mut r = f.coeffs.clone();
        if r.len() <= dg {
            return Ok((self.poly_zero(), f.clone()));
        }
        let mut q = vec![self.zero(); r.len() - dg];
        while r.len() > dg {
            let shift = r.len() - 1 - dg;
            let t = self.mul(r.last().unwrap(), &lc_inv);
            for (j, b) in g.coeffs.iter().enumerate().take(dg) {
                let prod = self.mul(&t, b);
                r[shift + j] = self.sub(&r[shift + j], &prod);
            }
            q[shift] = t;
            r.pop();
            while r.last().is_some_and(ExtElement::is_zero) {
                r.pop();
            }
        }
        Ok((ExtPoly::trimmed(q), ExtPoly::trimmed(r)))
    }

    /// Exact quotient, or `None` if `g` does not divide `f`.
    pub fn poly_div_exact(&self, f: &ExtPoly, g: &ExtPoly) -> Result<Option<ExtPoly>> {
        let (q, r) = self.poly_divmod(f, g)?;
        Ok(r.is_zero().then_some(q))
    }

    /// Monic gcd by the Euclidean algorithm, normalizing every remainder.
    pub fn poly_gcd(&self, f: &ExtPoly, g: &ExtPoly) -> Result<ExtPoly> {
        let mut a = self.poly_monic(f)?;
        let mut b = self.poly_monic(g)?;
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = self.poly_divmod(&a, &b)?.1;
            a = b;
            b = self.poly_monic(&r)?;
        }
        Ok(a)
    }

    pub fn poly_derivative(&self, f: &ExtPoly) -> ExtPoly {
        ExtPoly::trimmed(
            f.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| ExtElement {
                    rep: c.rep.scale(&self.field().from_u64(i as u64)),
                })
                .collect(),
        )
    }

    /// Squarefree part of `f` (monic) together with the parts of its
    /// squarefree decomposition. In characteristic `p`, any factor whose
    /// multiplicity is divisible by `p` is rejected.
    pub fn squarefree_part(&self, f: &ExtPoly) -> Result<(ExtPoly, Vec<(ExtPoly, u32)>)> {
        if f.degree().unwrap_or(0) == 0 {
            return Err(Error::InvalidInput(
                "squarefree part of a constant polynomial".into(),
            ));
        }
        let p = self.field().characteristic();
        let f = self.poly_monic(f)?;
        let df = self.poly_derivative(&f);
        if df.is_zero() {
            return Err(Error::InseparableInput(p));
        }
        if self.coprime_modulo_some_prime(&f, &df) {
            return Ok((f.clone(), vec![(f, 1)]));
        }
        let mut c = self.poly_gcd(&f, &df)?;
        let mut w = self.poly_div_exact(&f, &c)?.expect("gcd divides");
        let radical = w.clone();
        let mut parts = Vec::new();
        let mut i = 1;
        while w.degree() > Some(0) {
            let y = self.poly_gcd(&w, &c)?;
            let fac = self.poly_div_exact(&w, &y)?.expect("gcd divides");
            if fac.degree() > Some(0) {
                parts.push((fac, i));
            }
            c = self.poly_div_exact(&c, &y)?.expect("gcd divides");
            w = y;
            i += 1;
        }
        if c.degree() > Some(0) {
            return Err(Error::InseparableInput(p));
        }
        Ok((radical, parts))
    }

    /// Over the rationals: whether `f` (monic) and `g` are coprime modulo
    /// one of a few large primes, which implies they are coprime over `K`.
    fn coprime_modulo_some_prime(&self, f: &ExtPoly, g: &ExtPoly) -> bool {
        if !self.field().is_rational() {
            return false;
        }
        large_primes().take(3).any(|p| {
            let Some(kp) = self.modulo(p) else {
                return false;
            };
            match (self.poly_modulo(&kp, f), self.poly_modulo(&kp, g)) {
                (Some(fp), Some(gp)) => kp.poly_gcd(&fp, &gp).is_ok_and(|h| h.degree() == Some(0)),
                _ => false,
            }
        })
    }

    /// `K` modulo `p`, provided the basis reduces without a zero
    /// denominator and keeps its staircase.
    pub(crate) fn modulo(&self, p: u64) -> Option<ExtField> {
        let gens = self
            .gb
            .generators()
            .iter()
            .map(|g| reduce_poly(g, p))
            .collect::<Option<Vec<_>>>()?;
        let gb = GroebnerBasis::new(Field::Prime(p), self.nvars(), self.order(), gens).ok()?;
        let kp = ExtField::new(gb).ok()?;
        (kp.staircase == self.staircase).then_some(kp)
    }

    /// Image of `f` in `kp[y]` for `kp` produced by [`ExtField::modulo`].
    pub(crate) fn poly_modulo(&self, kp: &ExtField, f: &ExtPoly) -> Option<ExtPoly> {
        let p = kp.field().characteristic();
        let coeffs = f
            .coeffs
            .iter()
            .map(|c| Some(ExtElement { rep: reduce_poly(&c.rep, p)? }))
            .collect::<Option<Vec<_>>>()?;
        Some(ExtPoly::trimmed(coeffs))
    }

    /// Replaces each `alpha_i` by `x_i`; the result lives in `n + 1`
    /// variables under the elimination order.
    pub fn natural_lift(&self, f: &ExtPoly) -> MultiPoly {
        let n = self.nvars();
        let order = self.order().eliminating();
        let mut h = MultiPoly::zero(self.field(), n + 1, order);
        for (j, c) in f.coeffs.iter().enumerate() {
            let mut yj = vec![0; n + 1];
            yj[n] = j as u32;
            h.add_scaled(
                &c.rep.extend_vars(n + 1, order),
                &Monomial::new(yj),
                &self.field().one(),
            );
        }
        h
    }

    /// Coefficient-wise normal form of a polynomial in `x1..xn, y`.
    pub fn sigma(&self, h: &MultiPoly) -> Result<ExtPoly> {
        let n = self.nvars();
        if h.nvars() != n + 1 {
            return Err(Error::ArityMismatch {
                expected: n + 1,
                found: h.nvars(),
            });
        }
        let mut coeffs = Vec::new();
        for c in h.coefficients_in(n) {
            let cx = c.restrict_vars(n, self.order())?;
            coeffs.push(ExtElement {
                rep: self.gb.normal_form(&cx),
            });
        }
        Ok(ExtPoly::trimmed(coeffs))
    }
}

/// Coefficient-wise image modulo `p`; `None` if `p` divides a denominator.
pub(crate) fn reduce_poly(g: &MultiPoly, p: u64) -> Option<MultiPoly> {
    let terms = g
        .terms()
        .map(|(m, c)| Some((m.clone(), modular::reduce(c, p)?)))
        .collect::<Option<Vec<_>>>()?;
    Some(MultiPoly::from_terms(Field::Prime(p), g.nvars(), g.order(), terms))
}

/// Canonical order on elements: larger leading terms first.
fn element_key_cmp(a: &ExtElement, b: &ExtElement, order: MonomialOrder) -> Ordering {
    let ta = a.rep.presentation_terms();
    let tb = b.rep.presentation_terms();
    for ((ma, ca), (mb, cb)) in ta.iter().zip(&tb) {
        match presentation_cmp(ma, mb, order)
            .then_with(|| ca.canonical_cmp(cb))
        {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    ta.len().cmp(&tb.len())
}

/// Output order for factors: by degree, then coefficient representatives
/// from the top down in descending order.
pub fn ext_poly_cmp(a: &ExtPoly, b: &ExtPoly) -> Ordering {
    a.degree().cmp(&b.degree()).then_with(|| {
        for (x, y) in a.coeffs.iter().rev().zip(b.coeffs.iter().rev()) {
            let order = x.rep.order();
            match element_key_cmp(y, x, order) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    })
}
