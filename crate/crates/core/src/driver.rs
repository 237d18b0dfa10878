//! Factorization in `K[y]` through characteristic polynomials of
//! multiplication maps.

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::modular::{self, large_primes, Crt};
use crate::arith::{Field, FieldElement, UniPoly};
use crate::error::{Error, Result};
use crate::extfield::{ext_poly_cmp, ExtElement, ExtField, ExtPoly};
use crate::linalg::{self, CharPolyMethod, ExactMatrix};
use crate::multipoly::{Monomial, MultiPoly};
use crate::reduction::QuotientPresentation;
use crate::unifactor;

pub const DEFAULT_MAX_RANDOM: usize = 12;
pub const DEFAULT_RECURSION_LIMIT: usize = 64;
/// Largest quotient dimension for which the minimal polynomial is tried
/// first by default over a prime field.
const MINPOLY_DIM_LIMIT: usize = 64;
/// Primes tried for gcds over the rationals before exact Euclid.
const MODULAR_GCD_PRIMES: usize = 24;

/// Why a factor is known to be irreducible.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Certificate {
    /// Its ground factor has multiplicity one in the characteristic polynomial.
    MultiplicityOne,
    /// The characteristic polynomial for it is irreducible.
    IrreducibleCharPoly,
    DegreeOne,
}

impl Certificate {
    pub fn as_str(self) -> &'static str {
        match self {
            Certificate::MultiplicityOne => "MultiplicityOne",
            Certificate::IrreducibleCharPoly => "IrreducibleCharPoly",
            Certificate::DegreeOne => "DegreeOne",
        }
    }

    pub fn parse(s: &str) -> Option<Certificate> {
        match s {
            "MultiplicityOne" => Some(Certificate::MultiplicityOne),
            "IrreducibleCharPoly" => Some(Certificate::IrreducibleCharPoly),
            "DegreeOne" => Some(Certificate::DegreeOne),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor {
    /// Monic.
    pub poly: ExtPoly,
    pub multiplicity: u32,
    pub certified: bool,
    pub certificate: Option<Certificate>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    /// Dimension of the quotient used at the top level.
    pub dimension: usize,
    /// Every `r` tried, in order.
    pub r_used: Vec<MultiPoly>,
    pub recursion_depth: usize,
}

/// One characteristic polynomial computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceNode {
    pub depth: usize,
    pub input: ExtPoly,
    pub r: MultiPoly,
    pub dimension: usize,
    pub char_poly: UniPoly,
    pub ground_factors: Vec<(UniPoly, u32)>,
    /// `gcd(f, sigma(q_i(r)))` per ground factor; empty when nothing split.
    pub gcds: Vec<ExtPoly>,
}

#[derive(Clone, Debug)]
pub struct FactorizationResult {
    pub constant: ExtElement,
    pub factors: Vec<Factor>,
    pub stats: Stats,
    pub trace: Vec<TraceNode>,
}

impl FactorizationResult {
    /// `constant * prod(factor^multiplicity)`.
    pub fn expand(&self, k: &ExtField) -> ExtPoly {
        self.factors.iter().fold(
            k.poly(vec![self.constant.clone()]),
            |acc, f| k.poly_mul(&acc, &k.poly_pow(&f.poly, f.multiplicity)),
        )
    }
}

#[derive(Clone, Debug)]
pub struct DriverOptions {
    pub seed: u64,
    /// Consumed one per `r` request, in pre-order over the recursion.
    pub forced_r: Vec<MultiPoly>,
    pub max_random: usize,
    /// `None` picks by field and dimension.
    pub prefer_minpoly: Option<bool>,
    pub recursion_limit: usize,
    pub char_poly_method: CharPolyMethod,
}

impl Default for DriverOptions {
    fn default() -> Self {
        DriverOptions {
            seed: 0,
            forced_r: Vec::new(),
            max_random: DEFAULT_MAX_RANDOM,
            prefer_minpoly: None,
            recursion_limit: DEFAULT_RECURSION_LIMIT,
            char_poly_method: CharPolyMethod::Hessenberg,
        }
    }
}

/// A linear form `y + sum a_i x_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearFormChoice {
    pub coefficients: Vec<FieldElement>,
    pub attempt: usize,
    /// Sampling bound for random attempts; `None` on the grid.
    pub bound: Option<u64>,
}

impl LinearFormChoice {
    pub fn to_poly(&self, k: &ExtField) -> MultiPoly {
        let n = k.nvars();
        let order = k.order().eliminating();
        let mut r = MultiPoly::var(k.field(), n + 1, order, n);
        for (i, c) in self.coefficients.iter().enumerate() {
            if !c.is_zero() {
                r.add_term(Monomial::var(n + 1, i), c.clone());
            }
        }
        r
    }
}

/// Variables that are themselves leading monomials of the basis of `I`.
fn excluded_vars(k: &ExtField) -> Vec<bool> {
    let n = k.nvars();
    let mut out = vec![false; n];
    for m in k.basis().leading_monomials() {
        if m.degree() == 1 {
            if let Some(i) = m.pure_power_var() {
                out[i] = true;
            }
        }
    }
    out
}

/// Linear form for the given attempt. Attempts below `max_random` draw
/// integers from `[-B, B]` with `B = 3 * 2^(attempt / 3)`; later attempts
/// walk the grid `{0..=grid_bound}^m` over the `m` usable variables, starting
/// at the origin.
pub fn choose_r<R: Rng + ?Sized>(
    k: &ExtField,
    attempt: usize,
    max_random: usize,
    grid_bound: u64,
    rng: &mut R,
) -> Result<LinearFormChoice> {
    let field = k.field();
    let excluded = excluded_vars(k);
    if attempt < max_random {
        let bound = 3u64 << (attempt / 3).min(60);
        let b = bound.min(i64::MAX as u64) as i64;
        let coefficients = excluded
            .iter()
            .map(|&ex| {
                if ex {
                    field.zero()
                } else {
                    field.from_i64(rng.gen_range(-b..=b))
                }
            })
            .collect();
        return Ok(LinearFormChoice {
            coefficients,
            attempt,
            bound: Some(bound),
        });
    }
    let mut index = (attempt - max_random) as u128;
    let base = grid_bound as u128 + 1;
    let active = excluded.iter().filter(|&&e| !e).count() as u32;
    if let Some(size) = base.checked_pow(active) {
        if index >= size {
            return Err(Error::ExhaustedGrid);
        }
    }
    let coefficients = excluded
        .iter()
        .map(|&ex| {
            if ex {
                field.zero()
            } else {
                let digit = index % base;
                index /= base;
                field.from_u64(digit as u64)
            }
        })
        .collect();
    Ok(LinearFormChoice {
        coefficients,
        attempt,
        bound: None,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharPolyOutcome {
    pub char_poly: UniPoly,
    /// Set when the minimal polynomial was computed.
    pub min_poly: Option<UniPoly>,
    pub squarefree: bool,
}

/// Characteristic polynomial of multiplication by `r` on the quotient.
pub fn charpoly_of_r(
    r: &MultiPoly,
    qp: &QuotientPresentation,
    prefer_minpoly: bool,
) -> Result<CharPolyOutcome> {
    let m = linalg::multiplication_matrix(r, qp)?;
    charpoly_of_matrix(&m, qp, prefer_minpoly, CharPolyMethod::Hessenberg)
}

fn charpoly_of_matrix(
    m: &ExactMatrix,
    qp: &QuotientPresentation,
    prefer_minpoly: bool,
    method: CharPolyMethod,
) -> Result<CharPolyOutcome> {
    if prefer_minpoly {
        // the quotient is commutative with 1, so the annihilator of 1 is
        // the minimal polynomial
        let mp = linalg::vector_annihilator(m, unit_vector(qp));
        if mp.degree() == Some(qp.dimension()) {
            return Ok(CharPolyOutcome {
                squarefree: mp.is_squarefree(),
                char_poly: mp.clone(),
                min_poly: Some(mp),
            });
        }
        let cp = linalg::char_poly_with(m, method)?;
        return Ok(CharPolyOutcome {
            char_poly: cp,
            min_poly: Some(mp),
            squarefree: false,
        });
    }
    let cp = linalg::char_poly_with(m, method)?;
    Ok(CharPolyOutcome {
        squarefree: cp.is_squarefree(),
        char_poly: cp,
        min_poly: None,
    })
}

fn unit_vector(qp: &QuotientPresentation) -> Vec<FieldElement> {
    let field = qp.field();
    let mut e = vec![field.zero(); qp.dimension()];
    let one = qp
        .staircase()
        .iter()
        .position(Monomial::is_one)
        .expect("1 is a standard monomial");
    e[one] = field.one();
    e
}

/// Reads a coordinate vector of the quotient as a polynomial in `K[y]`.
fn vector_to_ext_poly(k: &ExtField, qp: &QuotientPresentation, v: &[FieldElement]) -> ExtPoly {
    let n = k.nvars();
    let mut coeffs: Vec<Vec<(Monomial, FieldElement)>> = vec![Vec::new(); qp.y_degree()];
    for (m, c) in qp.staircase().iter().zip(v) {
        if c.is_zero() {
            continue;
        }
        let j = m.exps()[n] as usize;
        coeffs[j].push((Monomial::new(m.exps()[..n].to_vec()), c.clone()));
    }
    k.poly(
        coeffs
            .into_iter()
            .map(|terms| {
                k.element(&MultiPoly::from_terms(k.field(), n, k.order(), terms))
                    .expect("same ring")
            })
            .collect(),
    )
}

/// `gcd(f, sigma(q(r)))` for every ground factor `q`, by Euclid over `K`.
fn exact_gcds(
    k: &ExtField,
    f: &ExtPoly,
    qp: &QuotientPresentation,
    m: &ExactMatrix,
    e0: &[FieldElement],
    ground: &[(UniPoly, u32)],
) -> Result<Vec<ExtPoly>> {
    ground
        .iter()
        .map(|(q, _)| {
            let v = m.vec_poly_action(e0, q);
            k.poly_gcd(f, &vector_to_ext_poly(k, qp, &v))
        })
        .collect()
}

/// The gcds computed in `K mod p`, or `None` if `p` is unusable.
fn gcds_mod_p(
    k: &ExtField,
    p: u64,
    f: &ExtPoly,
    qp: &QuotientPresentation,
    m: &ExactMatrix,
    ground: &[(UniPoly, u32)],
) -> Option<(ExtField, Vec<ExtPoly>)> {
    let pf = Field::Prime(p);
    let kp = k.modulo(p)?;
    let rows = (0..m.rows())
        .map(|i| m.row(i).iter().map(|c| modular::reduce(c, p)).collect::<Option<Vec<_>>>())
        .collect::<Option<Vec<_>>>()?;
    let mp = ExactMatrix::from_rows(pf, rows).ok()?;
    let fp = k.poly_modulo(&kp, f)?;
    let e0: Vec<FieldElement> = unit_vector(qp).iter().map(|c| modular::reduce(c, p)).collect::<Option<_>>()?;
    let mut out = Vec::with_capacity(ground.len());
    for (q, _) in ground {
        let coeffs = q.coeffs().iter().map(|c| modular::reduce(c, p)).collect::<Option<Vec<_>>>()?;
        let v = mp.vec_poly_action(&e0, &UniPoly::new(pf, coeffs));
        out.push(kp.poly_gcd(&fp, &vector_to_ext_poly(&kp, qp, &v)).ok()?);
    }
    Some((kp, out))
}

struct Driver<'a> {
    k: &'a ExtField,
    opts: &'a DriverOptions,
    rng: ChaCha8Rng,
    forced: VecDeque<MultiPoly>,
    stats: Stats,
    trace: Vec<TraceNode>,
}

impl Driver<'_> {
    fn prefer_minpoly(&self, dim: usize) -> bool {
        self.opts.prefer_minpoly.unwrap_or(match self.k.field() {
            Field::Rational => false,
            Field::Prime(_) => dim <= MINPOLY_DIM_LIMIT,
        })
    }

    fn next_r(&mut self, history: &[MultiPoly], attempt: &mut usize, dim: usize) -> Result<MultiPoly> {
        if let Some(r) = self.forced.pop_front() {
            return Ok(r);
        }
        let d = dim as u64;
        let grid_bound = (d * d.saturating_sub(1) / 2).max(1);
        loop {
            let choice = choose_r(self.k, *attempt, self.opts.max_random, grid_bound, &mut self.rng)?;
            *attempt += 1;
            let r = choice.to_poly(self.k);
            if !history.contains(&r) {
                return Ok(r);
            }
        }
    }

    /// Gcds recovered from images modulo primes and then checked exactly:
    /// each candidate `g` divides `f`, `q(r)` vanishes modulo `g`, and the
    /// degrees add up to `deg f`. `None` sends the caller to exact Euclid.
    fn modular_gcds(
        &self,
        f: &ExtPoly,
        r: &MultiPoly,
        qp: &QuotientPresentation,
        m: &ExactMatrix,
        ground: &[(UniPoly, u32)],
    ) -> Result<Option<Vec<ExtPoly>>> {
        let k = self.k;
        if !k.field().is_rational() {
            return Ok(None);
        }
        let deg_f = f.degree().unwrap_or(0);
        let mut pattern: Vec<usize> = Vec::new();
        let mut crt = Crt::new(0);
        for p in large_primes().take(MODULAR_GCD_PRIMES) {
            let Some((kp, gs)) = gcds_mod_p(k, p, f, qp, m, ground) else {
                continue;
            };
            let degrees: Vec<usize> = gs.iter().map(|g| g.degree().unwrap_or(0)).collect();
            if degrees.iter().sum::<usize>() != deg_f || degrees.contains(&0) {
                continue;
            }
            let residues: Vec<u64> = gs
                .iter()
                .flat_map(|g| g.coeffs().iter().flat_map(|c| kp.coordinates(c)))
                .map(|c| c.residue().expect("prime field"))
                .collect();
            if degrees != pattern {
                pattern = degrees;
                crt = Crt::new(residues.len());
            }
            crt.add(p, &residues);
            let Some(values) = crt.rationals() else {
                continue;
            };
            let dim_k = k.degree();
            let mut chunks = values.chunks(dim_k);
            let candidates: Vec<ExtPoly> = pattern
                .iter()
                .map(|&d| {
                    k.poly(
                        (0..=d)
                            .map(|_| {
                                let v: Vec<FieldElement> = chunks
                                    .next()
                                    .expect("one chunk per coefficient")
                                    .iter()
                                    .map(|q| FieldElement::Rational(q.clone()))
                                    .collect();
                                k.from_coordinates(&v)
                            })
                            .collect(),
                    )
                })
                .collect();
            if self.gcds_hold(f, r, ground, &candidates)? {
                return Ok(Some(candidates));
            }
        }
        Ok(None)
    }

    fn gcds_hold(
        &self,
        f: &ExtPoly,
        r: &MultiPoly,
        ground: &[(UniPoly, u32)],
        candidates: &[ExtPoly],
    ) -> Result<bool> {
        let k = self.k;
        for (g, (q, _)) in candidates.iter().zip(ground) {
            if !g.is_monic() || k.poly_div_exact(f, g)?.is_none() {
                return Ok(false);
            }
            let qpi = QuotientPresentation::build(k.basis(), &k.natural_lift(g))?;
            let mi = linalg::multiplication_matrix(r, &qpi)?;
            if mi.vec_poly_action(&unit_vector(&qpi), q).iter().any(|c| !c.is_zero()) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn node(&mut self, f: ExtPoly, depth: usize, inherited: Vec<MultiPoly>) -> Result<Vec<Factor>> {
        if f.degree() == Some(1) {
            return Ok(vec![Factor {
                poly: f,
                multiplicity: 1,
                certified: true,
                certificate: Some(Certificate::DegreeOne),
            }]);
        }
        if depth > self.opts.recursion_limit {
            return Err(Error::RecursionLimit(self.opts.recursion_limit));
        }
        self.stats.recursion_depth = self.stats.recursion_depth.max(depth);
        let k = self.k;
        let qp = QuotientPresentation::build(k.basis(), &k.natural_lift(&f))?;
        let dim = qp.dimension();
        let e0 = unit_vector(&qp);
        let mut history = inherited;
        let mut attempt = 0;
        loop {
            let r = self.next_r(&history, &mut attempt, dim)?;
            history.push(r.clone());
            self.stats.r_used.push(r.clone());

            let m = linalg::multiplication_matrix(&r, &qp)?;
            let outcome =
                charpoly_of_matrix(&m, &qp, self.prefer_minpoly(dim), self.opts.char_poly_method)?;
            let ground = unifactor::factor(&outcome.char_poly, &mut self.rng)?.factors;
            let mut node = TraceNode {
                depth,
                input: f.clone(),
                r: r.clone(),
                dimension: dim,
                char_poly: outcome.char_poly,
                ground_factors: ground.clone(),
                gcds: Vec::new(),
            };

            if ground.len() == 1 {
                let irreducible = ground[0].1 == 1;
                self.trace.push(node);
                if irreducible {
                    return Ok(vec![Factor {
                        poly: f,
                        multiplicity: 1,
                        certified: true,
                        certificate: Some(Certificate::IrreducibleCharPoly),
                    }]);
                }
                continue;
            }

            let gcds = match self.modular_gcds(&f, &r, &qp, &m, &ground)? {
                Some(gcds) => gcds,
                None => exact_gcds(k, &f, &qp, &m, &e0, &ground)?,
            };
            let total: usize = gcds.iter().map(|g| g.degree().unwrap_or(0)).sum();
            if total != f.degree().unwrap_or(0) || gcds.iter().any(|g| g.degree() == Some(0)) {
                return Err(Error::InvalidInput(
                    "the gcds do not split the polynomial; the ideal may not be maximal".into(),
                ));
            }
            node.gcds = gcds.clone();
            self.trace.push(node);

            let mut out = Vec::new();
            for (g, (_, mult)) in gcds.into_iter().zip(&ground) {
                if *mult == 1 {
                    out.push(Factor {
                        poly: g,
                        multiplicity: 1,
                        certified: true,
                        certificate: Some(Certificate::MultiplicityOne),
                    });
                } else {
                    out.extend(self.node(g, depth + 1, vec![r.clone()])?);
                }
            }
            return Ok(out);
        }
    }
}

/// Factors a squarefree monic `f` of positive degree.
pub fn factor_squarefree(k: &ExtField, f: &ExtPoly, opts: &DriverOptions) -> Result<FactorizationResult> {
    if !f.is_monic() || f.degree() == Some(0) {
        return Err(Error::InvalidInput(
            "expected a monic polynomial of positive degree".into(),
        ));
    }
    let mut driver = Driver {
        k,
        opts,
        rng: ChaCha8Rng::seed_from_u64(opts.seed),
        forced: opts.forced_r.iter().cloned().collect(),
        stats: Stats {
            dimension: k.degree() * f.degree().unwrap_or(0),
            ..Stats::default()
        },
        trace: Vec::new(),
    };
    let mut factors = driver.node(f.clone(), 0, Vec::new())?;
    factors.sort_by(|a, b| ext_poly_cmp(&a.poly, &b.poly));
    Ok(FactorizationResult {
        constant: k.one(),
        factors,
        stats: driver.stats,
        trace: driver.trace,
    })
}

/// Factors any nonzero `f`: extracts the leading coefficient, factors the
/// squarefree part and recovers multiplicities by trial division.
pub fn factor(k: &ExtField, f: &ExtPoly, opts: &DriverOptions) -> Result<FactorizationResult> {
    let constant = f
        .leading()
        .cloned()
        .ok_or_else(|| Error::InvalidInput("cannot factor the zero polynomial".into()))?;
    if f.degree() == Some(0) {
        return Ok(FactorizationResult {
            constant,
            factors: Vec::new(),
            stats: Stats::default(),
            trace: Vec::new(),
        });
    }
    let monic = k.poly_monic(f)?;
    let (radical, _) = k.squarefree_part(&monic)?;
    let mut result = factor_squarefree(k, &radical, opts)?;
    for factor in &mut result.factors {
        let mut rest = monic.clone();
        let mut m = 0;
        while let Some(q) = k.poly_div_exact(&rest, &factor.poly)? {
            rest = q;
            m += 1;
        }
        factor.multiplicity = m;
    }
    result.constant = constant;
    Ok(result)
}
