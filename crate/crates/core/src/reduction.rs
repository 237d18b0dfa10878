//! Normal forms modulo a Groebner basis, standard monomials, and the
//! presentation of `k[x, y]/<I, h>`.

use std::collections::{BTreeSet, HashMap};

use crate::arith::{Field, FieldElement};
use crate::error::{Error, Result};
use crate::multipoly::{presentation_cmp, Monomial, MonomialOrder, MultiPoly};

/// Generators of an ideal, assumed (or verified) to form a Groebner basis
/// under `order`. Generators are stored monic.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    field: Field,
    nvars: usize,
    order: MonomialOrder,
    generators: Vec<MultiPoly>,
    /// generator minus its leading term
    tails: Vec<MultiPoly>,
    leading: Vec<Monomial>,
    verified: bool,
}

impl GroebnerBasis {
    /// Collects generators (re-keyed under `order`, zeros dropped, made
    /// monic). No Groebner check is performed; see [`GroebnerBasis::verify`].
    pub fn new(
        field: Field,
        nvars: usize,
        order: MonomialOrder,
        generators: Vec<MultiPoly>,
    ) -> Result<Self> {
        let mut gens = Vec::with_capacity(generators.len());
        for g in generators {
            if g.nvars() != nvars {
                return Err(Error::ArityMismatch {
                    expected: nvars,
                    found: g.nvars(),
                });
            }
            if g.field() != field {
                return Err(Error::FieldMismatch);
            }
            if g.is_zero() {
                continue;
            }
            gens.push(g.with_order(order).monic());
        }
        let mut tails = Vec::with_capacity(gens.len());
        let mut leading = Vec::with_capacity(gens.len());
        for g in &gens {
            let mut t = g.clone();
            let (m, _) = t.pop_leading().expect("nonzero generator");
            leading.push(m);
            tails.push(t);
        }
        Ok(GroebnerBasis {
            field,
            nvars,
            order,
            generators: gens,
            tails,
            leading,
            verified: false,
        })
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

    pub fn generators(&self) -> &[MultiPoly] {
        &self.generators
    }

    pub fn leading_monomials(&self) -> &[Monomial] {
        &self.leading
    }

    pub fn is_verified(&self) -> bool {
        self.verified
    }

    /// Some generator is a nonzero constant, so the ideal is the whole ring.
    pub fn is_unit_ideal(&self) -> bool {
        self.leading.iter().any(|m| m.is_one())
    }

    /// Runs the S-polynomial criterion and marks the basis verified.
    pub fn verify(mut self) -> Result<Self> {
        if let Some((i, j)) = self.failing_pair() {
            return Err(Error::NotGroebner(format!(
                "S-polynomial of generators {} and {} does not reduce to zero",
                i + 1,
                j + 1
            )));
        }
        self.verified = true;
        Ok(self)
    }

    /// True iff every S-polynomial reduces to zero. Pairs with coprime
    /// leading monomials are skipped, as are pairs covered by the chain
    /// criterion.
    pub fn is_groebner(&self) -> bool {
        self.failing_pair().is_none()
    }

    fn failing_pair(&self) -> Option<(usize, usize)> {
        for j in 0..self.generators.len() {
            for i in 0..j {
                let (li, lj) = (&self.leading[i], &self.leading[j]);
                if li.is_coprime(lj) {
                    continue;
                }
                let lcm = li.lcm(lj);
                let chained = self.leading.iter().enumerate().any(|(k, lk)| {
                    k != i
                        && k != j
                        && lk.divides(&lcm)
                        && li.lcm(lk) != lcm
                        && lj.lcm(lk) != lcm
                });
                if chained {
                    continue;
                }
                let mi = lcm.div(li).expect("lcm is a multiple");
                let mj = lcm.div(lj).expect("lcm is a multiple");
                // the leading terms cancel, so only the tails contribute
                let mut s = self.tails[i].mul_monomial(&mi);
                s.add_scaled(&self.tails[j], &mj, &-self.field.one());
                if !self.normal_form(&s).is_zero() {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// Fully reduced remainder of `p` on division by the generators.
    ///
    /// The largest remaining term is reduced first, using the earliest
    /// listed generator whose leading monomial divides it.
    pub fn normal_form(&self, p: &MultiPoly) -> MultiPoly {
        let mut work = if p.order() == self.order {
            p.clone()
        } else {
            p.with_order(self.order)
        };
        let mut rem = MultiPoly::zero(self.field, self.nvars, self.order);
        while let Some((m, c)) = work.pop_leading() {
            match self.leading.iter().position(|l| l.divides(&m)) {
                Some(idx) => {
                    let q = m.div(&self.leading[idx]).expect("divisible");
                    work.add_scaled(&self.tails[idx], &q, &-c);
                }
                None => rem.add_term(m, c),
            }
        }
        rem
    }

    /// Standard monomials (not divisible by any leading monomial), sorted
    /// with [`presentation_cmp`].
    pub fn staircase(&self) -> Result<Vec<Monomial>> {
        if self.is_unit_ideal() {
            return Ok(Vec::new());
        }
        for v in 0..self.nvars {
            let bounded = self
                .leading
                .iter()
                .any(|m| m.pure_power_var() == Some(v));
            if !bounded {
                return Err(Error::NotZeroDimensional(v));
            }
        }
        let mut seen = BTreeSet::new();
        let mut frontier = vec![Monomial::one(self.nvars)];
        seen.insert(Monomial::one(self.nvars));
        while let Some(m) = frontier.pop() {
            for v in 0..self.nvars {
                let next = m.mul(&Monomial::var(self.nvars, v));
                if seen.contains(&next) || self.leading.iter().any(|l| l.divides(&next)) {
                    continue;
                }
                seen.insert(next.clone());
                frontier.push(next);
            }
        }
        let mut out: Vec<Monomial> = seen.into_iter().collect();
        out.sort_by(|a, b| presentation_cmp(a, b, self.order));
        Ok(out)
    }
}

/// The quotient `k[x1..xn, y]/<I, h>` for a lift `h` monic in `y`, with its
/// basis of standard monomials.
#[derive(Clone, Debug)]
pub struct QuotientPresentation {
    basis: GroebnerBasis,
    h: MultiPoly,
    staircase: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    x_dimension: usize,
    y_degree: usize,
}

impl QuotientPresentation {
    /// Forms `{G, h}` under the elimination order `y > x`.
    ///
    /// The `y`-coefficients of `h` are first reduced modulo `gb_i`; the
    /// leading one must then equal 1.
    pub fn build(gb_i: &GroebnerBasis, h: &MultiPoly) -> Result<Self> {
        let n = gb_i.nvars();
        if h.nvars() != n + 1 {
            return Err(Error::ArityMismatch {
                expected: n + 1,
                found: h.nvars(),
            });
        }
        if h.field() != gb_i.field() {
            return Err(Error::FieldMismatch);
        }
        let x_stair = gb_i.staircase()?;
        let order = gb_i.order().eliminating();
        let field = gb_i.field();
        let y = n;

        let mut coeffs: Vec<MultiPoly> = Vec::new();
        for c in h.coefficients_in(y) {
            let cx = c.restrict_vars(n, gb_i.order())?;
            coeffs.push(gb_i.normal_form(&cx));
        }
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        let deg = coeffs.len().checked_sub(1).ok_or(Error::NotMonicInY)?;
        let top = &coeffs[deg];
        if !(top.is_constant() && top.constant_term().is_one()) {
            return Err(Error::NotMonicInY);
        }
        if deg == 0 {
            return Err(Error::InvalidInput(
                "the lifted polynomial must have positive degree in y".into(),
            ));
        }
        let mut h_red = MultiPoly::zero(field, n + 1, order);
        for (i, c) in coeffs.iter().enumerate() {
            let ym = Monomial::var(n + 1, y);
            let yi = (0..i).fold(Monomial::one(n + 1), |acc, _| acc.mul(&ym));
            h_red.add_scaled(&c.extend_vars(n + 1, order), &yi, &field.one());
        }

        let mut gens: Vec<MultiPoly> = gb_i
            .generators()
            .iter()
            .map(|g| g.extend_vars(n + 1, order))
            .collect();
        gens.push(h_red.clone());
        let mut basis = GroebnerBasis::new(field, n + 1, order, gens)?;
        // leading monomials of G are y-free and LM(h) = y^d is coprime to them
        basis.verified = true;

        let mut staircase = Vec::with_capacity(x_stair.len() * deg);
        for i in 0..deg {
            for m in &x_stair {
                let mut e = m.exps().to_vec();
                e.push(i as u32);
                staircase.push(Monomial::new(e));
            }
        }
        let index = staircase
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        Ok(QuotientPresentation {
            basis,
            h: h_red,
            staircase,
            index,
            x_dimension: x_stair.len(),
            y_degree: deg,
        })
    }

    pub fn basis(&self) -> &GroebnerBasis {
        &self.basis
    }

    /// The lift with reduced coefficients actually used as a generator.
    pub fn lift(&self) -> &MultiPoly {
        &self.h
    }

    pub fn staircase(&self) -> &[Monomial] {
        &self.staircase
    }

    /// Position of a standard monomial in the staircase.
    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn dimension(&self) -> usize {
        self.staircase.len()
    }

    pub fn x_dimension(&self) -> usize {
        self.x_dimension
    }

    pub fn y_degree(&self) -> usize {
        self.y_degree
    }

    pub fn field(&self) -> Field {
        self.basis.field()
    }

    pub fn normal_form(&self, p: &MultiPoly) -> MultiPoly {
        self.basis.normal_form(p)
    }

    /// Coordinates of a reduced polynomial in the staircase basis.
    pub fn coordinates(&self, reduced: &MultiPoly) -> Vec<FieldElement> {
        let mut v = vec![self.field().zero(); self.dimension()];
        for (m, c) in reduced.terms() {
            let i = *self
                .index
                .get(m)
                .expect("reduced polynomial is supported on the staircase");
            v[i] = c.clone();
        }
        v
    }

    pub fn from_coordinates(&self, v: &[FieldElement]) -> MultiPoly {
        MultiPoly::from_terms(
            self.field(),
            self.basis.nvars(),
            self.basis.order(),
            self.staircase
                .iter()
                .zip(v)
                .filter(|(_, c)| !c.is_zero())
                .map(|(m, c)| (m.clone(), c.clone())),
        )
    }
}
