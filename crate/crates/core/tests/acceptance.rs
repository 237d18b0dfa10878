//! Acceptance suite. Runs every criterion in order and prints one
//! `PASS`/`FAIL` line for each; the process fails if any criterion does.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use extfactor::arith::{Field, FieldElement, UniPoly};
use extfactor::cli::{self, JsonResult, Session};
use extfactor::driver::{self, DriverOptions, FactorizationResult};
use extfactor::extfield::ExtPoly;
use extfactor::linalg::{self, ExactMatrix};
use extfactor::multipoly::{Monomial, MonomialOrder, MultiPoly};
use extfactor::reduction::{GroebnerBasis, QuotientPresentation};
use extfactor::unifactor;
use extfactor::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn lib<T>(r: extfactor::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn main() {
    let criteria: [(&str, fn() -> Check); 9] = [
        ("worked example, first linear form", worked_example_first_form),
        ("worked example, repeated ground factor", worked_example_repeated_factor),
        ("quotient dimensions of the benchmark problems", benchmark_dimensions),
        ("benchmark factorizations verify and are certified", benchmark_factorizations),
        ("Cayley-Hamilton on random quotients", cayley_hamilton),
        ("agreement with exhaustive trial division over F5 and F7", brute_force_oracle),
        ("univariate factorization", univariate_suite),
        ("failure modes", failure_modes),
        ("deterministic JSON across the corpus", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name} ({detail}; {secs:.2}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why} ({secs:.2}s)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

fn corpus() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

fn worked_example_path() -> PathBuf {
    corpus().join("worked_example.prob")
}

fn benchmarks() -> Vec<PathBuf> {
    (1..=10)
        .map(|i| corpus().join("benchmarks").join(format!("f{i:02}.prob")))
        .collect()
}

fn run_cli(args: &[&str], stdin: &[u8]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("extfactor").chain(args.iter().copied());
    let code = cli::run_with(argv, &mut &stdin[..], &mut out, &mut err);
    (
        code,
        String::from_utf8(out).expect("utf-8 output"),
        String::from_utf8(err).expect("utf-8 output"),
    )
}

fn path_str(p: &Path) -> &str {
    p.to_str().expect("utf-8 path")
}

fn file_name(p: &Path) -> String {
    p.file_name().unwrap().to_string_lossy().into_owned()
}

// ---------------------------------------------------------------------------
// Worked example

const Q: Field = Field::Rational;

fn zpoly(coeffs: &[i64]) -> UniPoly {
    UniPoly::from_i64s(Q, coeffs)
}

fn qpoly(coeffs: &[(i64, i64)]) -> UniPoly {
    UniPoly::from_ratios(Q, coeffs).expect("nonzero denominators")
}

fn worked_example() -> Result<Session, String> {
    lib(Session::from_text(
        &std::fs::read_to_string(worked_example_path()).map_err(|e| e.to_string())?,
        true,
    ))
}

fn ext(s: &Session, text: &str) -> Result<ExtPoly, String> {
    lib(s.field.sigma(&lib(s.spec.parse_in_y(text))?))
}

fn exponents(stair: &[Monomial]) -> Vec<Vec<u32>> {
    stair.iter().map(|m| m.exps().to_vec()).collect()
}

/// Checks that each ground factor produced the expected gcd.
fn check_gcds(
    s: &Session,
    node: &driver::TraceNode,
    expected: &[(UniPoly, u32, &str)],
) -> Result<(), String> {
    ensure!(
        node.ground_factors.len() == expected.len() && node.gcds.len() == expected.len(),
        "expected {} ground factors with gcds, found {} and {}",
        expected.len(),
        node.ground_factors.len(),
        node.gcds.len()
    );
    for (q, m, g) in expected {
        let i = node
            .ground_factors
            .iter()
            .position(|(f, _)| f == q)
            .ok_or_else(|| format!("ground factor {q} missing"))?;
        ensure!(node.ground_factors[i].1 == *m, "multiplicity of {q} is {}", node.ground_factors[i].1);
        ensure!(node.gcds[i] == ext(s, g)?, "gcd for {q} is not {g}");
    }
    Ok(())
}

fn check_final(s: &Session, result: &FactorizationResult, expected: &[&str]) -> Result<(), String> {
    ensure!(
        result.factors.len() == expected.len(),
        "expected {} factors, found {}",
        expected.len(),
        result.factors.len()
    );
    for text in expected {
        let g = ext(s, text)?;
        let f = result
            .factors
            .iter()
            .find(|f| f.poly == g)
            .ok_or_else(|| format!("factor {text} missing"))?;
        ensure!(f.multiplicity == 1, "{text} has multiplicity {}", f.multiplicity);
        ensure!(f.certified, "{text} is not certified");
    }
    ensure!(result.expand(&s.field) == s.target, "product of the factors differs from f");
    Ok(())
}

fn worked_example_first_form() -> Check {
    let start = Instant::now();
    let s = worked_example()?;
    let r = lib(s.spec.parse_in_y("x1+2*x2+y"))?;
    let qp = lib(s.quotient())?;
    let basis = [
        [0, 0, 0],
        [0, 1, 0],
        [1, 0, 0],
        [1, 1, 0],
        [0, 0, 1],
        [0, 1, 1],
        [1, 0, 1],
        [1, 1, 1],
        [0, 0, 2],
        [0, 1, 2],
        [1, 0, 2],
        [1, 1, 2],
    ];
    ensure!(
        exponents(qp.staircase()) == basis.map(Vec::from),
        "basis is {:?}",
        exponents(qp.staircase())
    );

    let m = lib(linalg::multiplication_matrix(&r, &qp))?;
    let expected = lib(ExactMatrix::from_i64_rows(
        Q,
        &[
            &[0, 2, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0],
            &[0, 0, -2, 1, 0, 1, 0, 0, 0, 0, 0, 0],
            &[-1, 0, 0, 2, 0, 0, 1, 0, 0, 0, 0, 0],
            &[2, -1, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0],
            &[0, 0, 0, 0, 0, 2, 1, 0, 1, 0, 0, 0],
            &[0, 0, 0, 0, 0, 0, -2, 1, 0, 1, 0, 0],
            &[0, 0, 0, 0, -1, 0, 0, 2, 0, 0, 1, 0],
            &[0, 0, 0, 0, 2, -1, 0, 0, 0, 0, 0, 1],
            &[0, 0, -1, 1, 2, -2, 0, -1, 0, 3, 3, -1],
            &[1, 0, 0, -1, -1, 2, 2, 0, -1, 0, -3, 3],
            &[1, -1, 0, 0, 0, 1, 2, -2, -3, 1, 0, 3],
            &[0, 1, 1, 0, -2, 0, -1, 2, 3, -3, -1, 0],
        ],
    ))?;
    ensure!(m == expected, "multiplication matrix differs:\n{m:?}");

    let p_r = zpoly(&[
        55872, -134592, 155984, -109088, 49922, -17916, 6802, -2064, 371, -116, 26, 0, 1,
    ]);
    let cp = lib(linalg::char_poly(&m))?;
    ensure!(cp == p_r, "characteristic polynomial is {cp}");

    let q1 = zpoly(&[18, -12, 10, 0, 1]);
    let q2 = zpoly(&[97, -72, 8, 0, 1]);
    let q3 = zpoly(&[32, -32, 8, 0, 1]);
    let fact = lib(unifactor::factor_q(&cp))?;
    let mut got: Vec<_> = fact.factors.clone();
    let mut want = vec![(q1.clone(), 1), (q2.clone(), 1), (q3.clone(), 1)];
    got.sort_by_key(|(q, _)| q.to_string());
    want.sort_by_key(|(q, _)| q.to_string());
    ensure!(got == want && fact.unit.is_one(), "ground factorization differs");

    let opts = DriverOptions {
        forced_r: vec![r.clone()],
        ..DriverOptions::default()
    };
    let result = lib(driver::factor(&s.field, &s.target, &opts))?;
    let root = &result.trace[0];
    ensure!(root.r == r && root.char_poly == p_r, "driver used a different linear form");
    check_gcds(&s, root, &[(q1, 1, "y + x1*x2"), (q2, 1, "y - x1 - x2"), (q3, 1, "y - x1")])?;
    check_final(&s, &result, &["y + x1*x2", "y - x1 - x2", "y - x1"])?;
    ensure!(result.trace.len() == 1, "no recursion expected");

    let (code, out, err) = run_cli(&["factor", path_str(&worked_example_path()), "--r", "x1+2*x2+y"], b"");
    ensure!(code == 0, "factor exited with {code}: {err}");
    let first = out.lines().next().unwrap_or_default();
    ensure!(
        first == "(y + x1*x2) * (y - x1 - x2) * (y - x1)",
        "command line printed {first}"
    );
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    Ok(format!("basis, matrix, p_r, quartics and factors exact in {elapsed:.2?}"))
}

fn worked_example_repeated_factor() -> Check {
    let start = Instant::now();
    let s = worked_example()?;
    let r = lib(s.spec.parse_in_y("-3/2*x1-1/2*x2+y"))?;
    let r2 = lib(s.spec.parse_in_y("-2*x1-2*x2+y"))?;
    let opts = DriverOptions {
        forced_r: vec![r.clone(), r2.clone()],
        ..DriverOptions::default()
    };
    let result = lib(driver::factor(&s.field, &s.target, &opts))?;
    ensure!(result.trace.len() == 2, "expected two nodes, found {}", result.trace.len());
    let root = result.trace.iter().find(|n| n.depth == 0).ok_or("no root node")?;
    let child = result.trace.iter().find(|n| n.depth == 1).ok_or("no child node")?;

    let p_r = qpoly(&[
        (89, 512),
        (169, 128),
        (467, 128),
        (67, 16),
        (273, 64),
        (41, 4),
        (33, 4),
        (-3, 2),
        (113, 8),
        (-7, 2),
        (7, 2),
        (0, 1),
        (1, 1),
    ]);
    ensure!(root.r == r && root.char_poly == p_r, "p_r is {}", root.char_poly);
    let q1 = qpoly(&[(89, 8), (-9, 2), (5, 2), (0, 1), (1, 1)]);
    let q2 = qpoly(&[(1, 8), (1, 2), (1, 2), (0, 1), (1, 1)]);
    ensure!(&q1 * &q2.pow(2) == p_r, "printed factorization does not multiply out");
    let partial = "y^2 - (2*x1 + x2)*y + x1*x2 - 1";
    check_gcds(&s, root, &[(q1, 1, "y + x1*x2"), (q2, 2, partial)])?;

    let f_prime = ext(&s, partial)?;
    ensure!(child.input == f_prime && child.r == r2, "recursion did not start from the partial factor");
    let qp = lib(QuotientPresentation::build(s.field.basis(), &s.field.natural_lift(&f_prime)))?;
    let basis = [
        [0, 0, 0],
        [0, 1, 0],
        [1, 0, 0],
        [1, 1, 0],
        [0, 0, 1],
        [0, 1, 1],
        [1, 0, 1],
        [1, 1, 1],
    ];
    ensure!(exponents(qp.staircase()) == basis.map(Vec::from), "B' differs");
    ensure!(child.dimension == 8, "child dimension {}", child.dimension);
    let p_r2 = zpoly(&[34, 100, 102, 40, 23, 20, 4, 0, 1]);
    ensure!(child.char_poly == p_r2, "p_r' is {}", child.char_poly);
    check_gcds(
        &s,
        child,
        &[
            (zpoly(&[17, 16, 2, 0, 1]), 1, "y - x1"),
            (zpoly(&[2, 4, 2, 0, 1]), 1, "y - x1 - x2"),
        ],
    )?;
    check_final(&s, &result, &["y + x1*x2", "y - x1", "y - x1 - x2"])?;
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    Ok(format!("squared quartic, partial factor and recursion exact in {elapsed:.2?}"))
}

// ---------------------------------------------------------------------------
// Benchmark problems

fn benchmark_dimensions() -> Check {
    let expected = [16, 28, 48, 32, 64, 32, 48, 48, 80, 64];
    for (path, dim) in benchmarks().iter().zip(expected) {
        let (code, out, err) = run_cli(&["dim", path_str(path)], b"");
        ensure!(code == 0, "{}: exit {code}: {err}", file_name(path));
        ensure!(out.trim() == dim.to_string(), "{}: dimension {} instead of {dim}", file_name(path), out.trim());
    }
    Ok(format!("{expected:?}"))
}

fn benchmark_factorizations() -> Check {
    let mut slowest = (String::new(), Duration::ZERO);
    for path in benchmarks() {
        let name = file_name(&path);
        let start = Instant::now();
        let (code, out, err) = run_cli(&["factor", "--json", path_str(&path)], b"");
        let elapsed = start.elapsed();
        ensure!(code == 0, "{name}: factor exited with {code}: {err}");
        if elapsed > slowest.1 {
            slowest = (name.clone(), elapsed);
        }
        let doc: JsonResult = serde_json::from_str(&out).map_err(|e| format!("{name}: {e}"))?;
        ensure!(!doc.factors.is_empty(), "{name}: no factors");
        for f in &doc.factors {
            ensure!(f.certified, "{name}: factor {} is not certified", f.poly);
        }
        let (code, verdict, err) = run_cli(&["verify", path_str(&path)], out.as_bytes());
        ensure!(code == 0 && verdict == "ok\n", "{name}: verify said {verdict}{err}");
    }
    let soft = if slowest.1 < Duration::from_secs(120) {
        "within"
    } else {
        "over"
    };
    Ok(format!(
        "10 problems; slowest {} at {:.1?}, {soft} the 120 s soft target",
        slowest.0, slowest.1
    ))
}

// ---------------------------------------------------------------------------
// Cayley-Hamilton

const LEX: MonomialOrder = MonomialOrder::Lex;

fn random_coeff(field: Field, rng: &mut ChaCha8Rng) -> FieldElement {
    match field {
        Field::Rational => {
            let n: i64 = rng.gen_range(-4..=4);
            let d: i64 = [1, 1, 1, 2, 3][rng.gen_range(0..5)];
            field.from_ratio(&num_rational::BigRational::new(n.into(), d.into())).unwrap()
        }
        Field::Prime(p) => field.from_u64(rng.gen_range(0..p)),
    }
}

fn mono(exps: &[u32]) -> Monomial {
    Monomial::new(exps.to_vec())
}

/// A triangular zero-dimensional system `x1^a + ..., x2^b + ...` and a
/// monic `h = y^c + ...` with reduced coefficients.
fn random_quotient(
    field: Field,
    (a, b, c): (u32, u32, u32),
    rng: &mut ChaCha8Rng,
) -> Result<QuotientPresentation, String> {
    let mut g1 = vec![(mono(&[a, 0]), field.one())];
    g1.extend((0..a).map(|i| (mono(&[i, 0]), random_coeff(field, rng))));
    let mut g2 = vec![(mono(&[0, b]), field.one())];
    for j in 0..b {
        for i in 0..a {
            g2.push((mono(&[i, j]), random_coeff(field, rng)));
        }
    }
    let order = LEX.eliminating();
    let mut h = vec![(mono(&[0, 0, c]), field.one())];
    for k in 0..c {
        for j in 0..b {
            for i in 0..a {
                if rng.gen_bool(0.6) {
                    h.push((mono(&[i, j, k]), random_coeff(field, rng)));
                }
            }
        }
    }
    let gb = lib(GroebnerBasis::new(
        field,
        2,
        LEX,
        vec![
            MultiPoly::from_terms(field, 2, LEX, g1),
            MultiPoly::from_terms(field, 2, LEX, g2),
        ],
    ))?;
    lib(QuotientPresentation::build(&gb, &MultiPoly::from_terms(field, 3, order, h)))
}

fn cayley_hamilton() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE);
    let fields = [Q, Field::Prime(5), Q, Field::Prime(7), Q, Field::Prime(32003)];
    let mut largest = 0;
    for trial in 0..50 {
        let field = fields[trial % fields.len()];
        let shape = loop {
            let s = (rng.gen_range(1..=3), rng.gen_range(1..=3), rng.gen_range(1..=3));
            if s.0 * s.1 * s.2 <= 24 {
                break s;
            }
        };
        let qp = random_quotient(field, shape, &mut rng)?;
        let dim = qp.dimension();
        ensure!(dim == (shape.0 * shape.1 * shape.2) as usize, "trial {trial}: dimension {dim}");
        largest = largest.max(dim);
        let order = qp.basis().order();
        let r = MultiPoly::from_terms(
            field,
            3,
            order,
            [
                (mono(&[0, 0, 1]), field.from_i64(rng.gen_range(1..=5))),
                (mono(&[1, 0, 0]), field.from_i64(rng.gen_range(-5..=5))),
                (mono(&[0, 1, 0]), field.from_i64(rng.gen_range(-5..=5))),
                (mono(&[0, 0, 0]), field.from_i64(rng.gen_range(-2..=2))),
            ],
        );
        let m = lib(linalg::multiplication_matrix(&r, &qp))?;
        let cp = lib(linalg::char_poly(&m))?;
        ensure!(cp.degree() == Some(dim) && cp.is_monic(), "trial {trial}: bad characteristic polynomial");
        let value = MultiPoly::substitute_univariate_with(&cp, &r, |p| qp.normal_form(&p));
        ensure!(value.is_zero(), "trial {trial}: p_r(r) does not vanish in the quotient");
        let mp = lib(linalg::min_poly(&m))?;
        ensure!(lib(cp.rem(&mp))?.is_zero(), "trial {trial}: minimal polynomial does not divide p_r");
        let mp_value = MultiPoly::substitute_univariate_with(&mp, &r, |p| qp.normal_form(&p));
        ensure!(mp_value.is_zero(), "trial {trial}: minimal polynomial does not annihilate r");
    }
    Ok(format!("50 instances over Q, F5, F7, F32003; dimensions up to {largest}"))
}

// ---------------------------------------------------------------------------
// Exhaustive oracle over small fields

/// Dense polynomials over `F_p`, lowest coefficient first.
mod dense {
    pub fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        trim(out)
    }

    pub fn add(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut out = vec![0; a.len().max(b.len())];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (a.get(i).unwrap_or(&0) + b.get(i).unwrap_or(&0)) % p;
        }
        trim(out)
    }

    pub fn neg(a: &[u64], p: u64) -> Vec<u64> {
        a.iter().map(|x| (p - x) % p).collect()
    }

    /// Remainder modulo a monic polynomial.
    pub fn rem_monic(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut a = a.to_vec();
        let d = m.len() - 1;
        while a.len() > d {
            let c = a.pop().unwrap();
            let shift = a.len() - d;
            for (i, mi) in m[..d].iter().enumerate() {
                a[shift + i] = (a[shift + i] + (p - c) * mi) % p;
            }
        }
        trim(a)
    }

    /// All polynomials of degree `< len`, as digit vectors.
    pub fn all(len: u32, p: u64) -> impl Iterator<Item = Vec<u64>> {
        (0..p.pow(len)).map(move |mut n| {
            let mut v = Vec::with_capacity(len as usize);
            for _ in 0..len {
                v.push(n % p);
                n /= p;
            }
            v
        })
    }

    /// Monic `g` has no monic factor of degree `1..=deg/2`.
    pub fn is_irreducible(g: &[u64], p: u64) -> bool {
        let d = g.len() - 1;
        (1..=d / 2).all(|k| {
            all(k as u32, p).all(|mut h| {
                h.push(1);
                !rem_monic(g, &h, p).is_empty()
            })
        })
    }
}

/// `F_p[x1, x2]/<g1(x1), g2(x1, x2)>` with `g1` monic of degree `a` and
/// `g2` monic of degree `b` in `x2`. Elements are `a*b` digits, index
/// `j*a + i` for `x1^i x2^j`.
#[derive(Clone, Debug)]
struct Tower {
    p: u64,
    a: usize,
    b: usize,
    g1: Vec<u64>,
    g2: Vec<Vec<u64>>,
}

type Elem = Vec<u64>;

impl Tower {
    fn size(&self) -> u64 {
        self.p.pow((self.a * self.b) as u32)
    }

    fn element(&self, n: u64) -> Elem {
        let mut n = n;
        (0..self.a * self.b)
            .map(|_| {
                let d = n % self.p;
                n /= self.p;
                d
            })
            .collect()
    }

    fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.size()).map(|n| self.element(n))
    }

    fn zero(&self) -> Elem {
        vec![0; self.a * self.b]
    }

    fn one(&self) -> Elem {
        let mut e = self.zero();
        e[0] = 1;
        e
    }

    fn rows(&self, u: &Elem) -> Vec<Vec<u64>> {
        u.chunks(self.a).map(|c| dense::trim(c.to_vec())).collect()
    }

    fn pack(&self, rows: Vec<Vec<u64>>) -> Elem {
        let mut e = self.zero();
        for (j, row) in rows.into_iter().enumerate() {
            let row = dense::rem_monic(&row, &self.g1, self.p);
            for (i, c) in row.into_iter().enumerate() {
                e[j * self.a + i] = c;
            }
        }
        e
    }

    fn add(&self, u: &Elem, v: &Elem) -> Elem {
        u.iter().zip(v).map(|(x, y)| (x + y) % self.p).collect()
    }

    fn neg(&self, u: &Elem) -> Elem {
        dense::neg(u, self.p)
    }

    fn mul(&self, u: &Elem, v: &Elem) -> Elem {
        let p = self.p;
        let (ru, rv) = (self.rows(u), self.rows(v));
        let mut prod = vec![Vec::new(); 2 * self.b - 1];
        for (i, x) in ru.iter().enumerate() {
            for (j, y) in rv.iter().enumerate() {
                prod[i + j] = dense::add(&prod[i + j], &dense::mul(x, y, p), p);
            }
        }
        for k in (self.b..prod.len()).rev() {
            let c = std::mem::take(&mut prod[k]);
            for (j, gj) in self.g2[..self.b].iter().enumerate() {
                let t = dense::neg(&dense::mul(&c, gj, p), p);
                prod[k - self.b + j] = dense::add(&prod[k - self.b + j], &t, p);
            }
        }
        prod.truncate(self.b);
        self.pack(prod)
    }

    fn inv(&self, u: &Elem) -> Elem {
        let one = self.one();
        self.elements().find(|v| self.mul(u, v) == one).expect("field element is invertible")
    }

    /// Whether the quotient is a field: `g1` irreducible over `F_p` and `g2`
    /// (of degree at most 3) without a root in `F_p[x1]/g1`.
    fn is_field(&self) -> bool {
        if !dense::is_irreducible(&self.g1, self.p) {
            return false;
        }
        assert!(self.b <= 3);
        if self.b == 1 {
            return true;
        }
        let base = Tower {
            b: 1,
            g2: vec![vec![], vec![1]],
            ..self.clone()
        };
        let rootless = base.elements().all(|t| {
            let mut acc = base.zero();
            for gj in self.g2.iter().rev() {
                acc = base.mul(&acc, &t);
                acc = base.add(&acc, &base.pack(vec![gj.clone()]));
            }
            acc != base.zero()
        });
        rootless
    }

    fn poly_eval(&self, f: &[Elem], t: &Elem) -> Elem {
        f.iter().rev().fold(self.zero(), |acc, c| self.add(&self.mul(&acc, t), c))
    }

    fn poly_mul(&self, f: &[Elem], g: &[Elem]) -> Vec<Elem> {
        let mut out = vec![self.zero(); f.len() + g.len() - 1];
        for (i, x) in f.iter().enumerate() {
            for (j, y) in g.iter().enumerate() {
                out[i + j] = self.add(&out[i + j], &self.mul(x, y));
            }
        }
        out
    }

    /// Quotient and remainder on division by a monic `g`.
    fn poly_divmod(&self, f: &[Elem], g: &[Elem]) -> (Vec<Elem>, Vec<Elem>) {
        let d = g.len() - 1;
        let mut rem = f.to_vec();
        if rem.len() <= d {
            return (Vec::new(), rem);
        }
        let mut quo = vec![self.zero(); rem.len() - d];
        while rem.len() > d {
            let c = rem.pop().unwrap();
            let shift = rem.len() - d;
            for (i, gi) in g[..d].iter().enumerate() {
                rem[shift + i] = self.add(&rem[shift + i], &self.neg(&self.mul(&c, gi)));
            }
            quo[shift] = c;
        }
        while rem.last().is_some_and(|c| *c == self.zero()) {
            rem.pop();
        }
        (quo, rem)
    }

    /// Monic irreducible factors with repetition, by exhaustive search for
    /// roots and then quadratic divisors; needs `deg f <= 4`.
    fn trial_division(&self, f: &[Elem]) -> Vec<Vec<Elem>> {
        let inv = self.inv(f.last().unwrap());
        let mut f: Vec<Elem> = f.iter().map(|c| self.mul(c, &inv)).collect();
        let mut out = Vec::new();
        'roots: while f.len() > 2 {
            for t in self.elements() {
                if self.poly_eval(&f, &t) == self.zero() {
                    let lin = vec![self.neg(&t), self.one()];
                    f = self.poly_divmod(&f, &lin).0;
                    out.push(lin);
                    continue 'roots;
                }
            }
            break;
        }
        if f.len() == 5 {
            for u in self.elements() {
                for v in self.elements() {
                    let quad = vec![v.clone(), u.clone(), self.one()];
                    let (q, r) = self.poly_divmod(&f, &quad);
                    if r.is_empty() {
                        out.push(quad);
                        out.push(q);
                        return out;
                    }
                }
            }
        }
        if f.len() > 1 {
            out.push(f);
        }
        out
    }

    fn elem_text(&self, u: &Elem) -> String {
        let mut terms = Vec::new();
        for j in 0..self.b {
            for i in 0..self.a {
                let c = u[j * self.a + i];
                if c != 0 {
                    terms.push(format!("{c}*x1^{i}*x2^{j}"));
                }
            }
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }

    fn problem_text(&self, f: &[Elem]) -> String {
        let g1: Vec<String> = self.g1.iter().enumerate().map(|(i, c)| format!("{c}*x1^{i}")).collect();
        let mut g2 = Vec::new();
        for (j, cj) in self.g2.iter().enumerate() {
            for (i, c) in cj.iter().enumerate() {
                g2.push(format!("{c}*x1^{i}*x2^{j}"));
            }
        }
        let poly: Vec<String> = f
            .iter()
            .enumerate()
            .map(|(k, c)| format!("({})*y^{k}", self.elem_text(c)))
            .collect();
        format!(
            "field: GF({})\nvars: x1 x2\norder: lex\nideal:\n  {}\n  {}\npoly: {}\n",
            self.p,
            g1.join(" + "),
            g2.join(" + "),
            poly.join(" + ")
        )
    }

    fn from_rep(&self, rep: &MultiPoly) -> Elem {
        let mut e = self.zero();
        for (m, c) in rep.terms() {
            let (i, j) = (m.exps()[0] as usize, m.exps()[1] as usize);
            e[j * self.a + i] = c.residue().expect("prime field");
        }
        e
    }
}

fn random_tower(p: u64, rng: &mut ChaCha8Rng) -> Tower {
    loop {
        let (a, b) = (rng.gen_range(1..=3usize), rng.gen_range(1..=3usize));
        if p.pow((a * b) as u32) > 15625 {
            continue;
        }
        let mut g1: Vec<u64> = (0..a).map(|_| rng.gen_range(0..p)).collect();
        g1.push(1);
        let mut g2: Vec<Vec<u64>> = (0..b)
            .map(|_| dense::trim((0..a).map(|_| rng.gen_range(0..p)).collect()))
            .collect();
        g2.push(vec![1]);
        let t = Tower { p, a, b, g1, g2 };
        if t.is_field() {
            return t;
        }
    }
}

fn random_monic(t: &Tower, deg: usize, rng: &mut ChaCha8Rng) -> Vec<Elem> {
    let mut f: Vec<Elem> = (0..deg).map(|_| t.element(rng.gen_range(0..t.size()))).collect();
    f.push(t.one());
    f
}

fn brute_force_oracle() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5_7);
    let mut nontrivial = 0;
    let mut largest = 0;
    for trial in 0..100 {
        let p = if trial % 2 == 0 { 5 } else { 7 };
        let t = random_tower(p, &mut rng);
        largest = largest.max(t.a * t.b);
        let max_deg = if t.size() <= 125 { 4 } else { 3 };
        let mut f = vec![t.one()];
        let target = rng.gen_range(1..=max_deg);
        while f.len() - 1 < target {
            let d = rng.gen_range(1..=(target - (f.len() - 1)).min(2));
            let g = random_monic(&t, d, &mut rng);
            f = t.poly_mul(&f, &g);
            if f.len() - 1 + d <= target && rng.gen_bool(0.2) {
                f = t.poly_mul(&f, &g);
            }
        }
        let unit = loop {
            let c = t.element(rng.gen_range(0..t.size()));
            if c != t.zero() {
                break c;
            }
        };
        let f: Vec<Elem> = f.iter().map(|c| t.mul(c, &unit)).collect();

        let mut expected = t.trial_division(&f);
        expected.sort();
        let text = t.problem_text(&f);
        let s = lib(Session::from_text(&text, true)).map_err(|e| format!("trial {trial}: {e}\n{text}"))?;
        let opts = DriverOptions {
            seed: trial as u64,
            ..DriverOptions::default()
        };
        let result = lib(driver::factor(&s.field, &s.target, &opts)).map_err(|e| format!("trial {trial}: {e}\n{text}"))?;
        let mut got = Vec::new();
        for fac in &result.factors {
            let coeffs: Vec<Elem> = fac.poly.coeffs().iter().map(|c| t.from_rep(c.rep())).collect();
            for _ in 0..fac.multiplicity {
                got.push(coeffs.clone());
            }
        }
        got.sort();
        ensure!(got == expected, "trial {trial}: driver {got:?} oracle {expected:?}\n{text}");
        ensure!(
            t.from_rep(result.constant.rep()) == unit,
            "trial {trial}: constant differs from the leading coefficient"
        );
        if expected.len() > 1 {
            nontrivial += 1;
        }
    }
    Ok(format!("100 inputs, {nontrivial} reducible, dim(K) up to {largest}"))
}

// ---------------------------------------------------------------------------
// Univariate factorization

fn to_residues(q: &UniPoly) -> Vec<u64> {
    q.coeffs().iter().map(|c| c.residue().unwrap()).collect()
}

fn univariate_suite() -> Check {
    let p_r = zpoly(&[
        55872, -134592, 155984, -109088, 49922, -17916, 6802, -2064, 371, -116, 26, 0, 1,
    ]);
    let fact = lib(unifactor::factor_q(&p_r))?;
    let mut got: Vec<String> = fact.factors.iter().map(|(q, m)| format!("{q}^{m}")).collect();
    let mut want: Vec<String> = [[18, -12, 10, 0, 1], [97, -72, 8, 0, 1], [32, -32, 8, 0, 1]]
        .iter()
        .map(|c| format!("{}^1", zpoly(c)))
        .collect();
    got.sort();
    want.sort();
    ensure!(got == want, "factor_q(p_r) gave {got:?}");

    let fact = lib(unifactor::factor_q(&zpoly(&[-1, 0, 0, 0, 1])))?;
    let mut got: Vec<_> = fact.factors.clone();
    let mut want = vec![(zpoly(&[-1, 1]), 1), (zpoly(&[1, 1]), 1), (zpoly(&[1, 0, 1]), 1)];
    got.sort_by_key(|(q, _)| q.to_string());
    want.sort_by_key(|(q, _)| q.to_string());
    ensure!(got == want && fact.unit.is_one(), "factor_q(T^4 - 1) gave {:?}", fact.factors);

    let mut rng = ChaCha8Rng::seed_from_u64(500);
    let primes = [2u64, 3, 5, 7, 11, 13, 101];
    for trial in 0..500 {
        let p = primes[trial % primes.len()];
        let field = Field::Prime(p);
        let max_deg = if p > 13 { 3 } else { 4 };
        let mut chosen: BTreeMap<Vec<u64>, u32> = BTreeMap::new();
        for _ in 0..rng.gen_range(1..=4) {
            let g = loop {
                let d = rng.gen_range(1..=max_deg);
                let mut g: Vec<u64> = (0..d).map(|_| rng.gen_range(0..p)).collect();
                g.push(1);
                if dense::is_irreducible(&g, p) {
                    break g;
                }
            };
            *chosen.entry(g).or_default() += rng.gen_range(1..=3);
        }
        let unit = rng.gen_range(1..p);
        let mut f = vec![unit];
        for (g, m) in &chosen {
            for _ in 0..*m {
                f = dense::mul(&f, g, p);
            }
        }
        let fpoly = UniPoly::new(field, f.iter().map(|&c| field.from_u64(c)).collect());
        let fact = lib(unifactor::factor(&fpoly, &mut rng))?;
        ensure!(fact.expand() == fpoly, "trial {trial}: factors do not multiply back over F{p}");
        ensure!(fact.unit.residue() == Some(unit), "trial {trial}: unit differs");
        let got: BTreeMap<Vec<u64>, u32> = fact.factors.iter().map(|(q, m)| (to_residues(q), *m)).collect();
        ensure!(
            got == chosen && got.len() == fact.factors.len(),
            "trial {trial} over F{p}: expected {chosen:?}, got {got:?}"
        );
    }
    Ok("worked-example quartics, T^4 - 1, 500 random products over F_p".into())
}

// ---------------------------------------------------------------------------
// Failure modes

fn write_problem(name: &str, text: &str) -> PathBuf {
    let path = Path::new(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, text).expect("writable temporary directory");
    path
}

fn failure_modes() -> Check {
    let not_maximal = "field: Q\nvars: x1\norder: lex\nideal: x1^2 - x1\npoly: x1*y + 1\n";
    let err = Session::from_text(not_maximal, true)
        .and_then(|s| driver::factor(&s.field, &s.target, &DriverOptions::default()))
        .err()
        .ok_or("non-maximal ideal was accepted")?;
    let Error::NotMaximalIdeal { element, annihilator } = &err else {
        return Err(format!("expected NotMaximalIdeal, got {err}"));
    };
    let x1 = MultiPoly::var(Q, 1, LEX, 0);
    let gb = lib(GroebnerBasis::new(Q, 1, LEX, vec![lib(x1.pow(2).checked_add(&x1.scale(&Q.from_i64(-1))))?]))?;
    ensure!(
        !gb.normal_form(element).is_zero() && !gb.normal_form(annihilator).is_zero(),
        "witness factors must be nonzero in the quotient"
    );
    ensure!(
        gb.normal_form(&lib(element.checked_mul(annihilator))?).is_zero(),
        "witness product does not reduce to zero"
    );
    let path = write_problem("not_maximal.prob", not_maximal);
    let (code, _, stderr) = run_cli(&["factor", path_str(&path)], b"");
    ensure!(code == 2, "non-maximal ideal exited with {code}");
    ensure!(stderr.contains("witness"), "no witness printed: {stderr}");

    let inseparable = "field: GF(5)\nvars: x1\norder: lex\nideal: x1^2 - 2\npoly: y^5 + x1\n";
    let err = Session::from_text(inseparable, true)
        .and_then(|s| driver::factor(&s.field, &s.target, &DriverOptions::default()))
        .err()
        .ok_or("inseparable input was accepted")?;
    ensure!(matches!(err, Error::InseparableInput(5)), "expected InseparableInput, got {err}");
    let path = write_problem("inseparable.prob", inseparable);
    let (code, _, stderr) = run_cli(&["factor", path_str(&path)], b"");
    ensure!(code == 2, "inseparable input exited with {code}: {stderr}");
    Ok(format!(
        "witness ({}) * ({}) reduces to 0; both exit with code 2",
        element.display(&["x1".to_string()]),
        annihilator.display(&["x1".to_string()])
    ))
}

// ---------------------------------------------------------------------------
// Determinism

fn determinism() -> Check {
    let mut files = vec![worked_example_path()];
    files.extend(benchmarks());
    for path in &files {
        let args = ["factor", "--json", "--seed", "20080101", path_str(path)];
        let (c1, first, e1) = run_cli(&args, b"");
        let (c2, second, e2) = run_cli(&args, b"");
        ensure!(c1 == 0 && c2 == 0, "{}: {e1}{e2}", file_name(path));
        ensure!(first == second, "{}: outputs differ", file_name(path));
        let doc: JsonResult = serde_json::from_str(&first).map_err(|e| e.to_string())?;
        ensure!(!doc.stats.r_used.is_empty(), "{}: empty r_used trace", file_name(path));
    }
    Ok(format!("{} problems, byte-identical JSON", files.len()))
}
