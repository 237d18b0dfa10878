//! Command-line round trips over the problem corpus.

use std::path::{Path, PathBuf};

use extfactor::cli::{self, parse_problem, JsonResult, Session};
use extfactor::driver::{self, Certificate, DriverOptions};
use extfactor::linalg;
use extfactor::multipoly::{Monomial, MultiPoly};
use extfactor::reduction::QuotientPresentation;
use extfactor::unifactor;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn corpus() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

fn corpus_files() -> Vec<PathBuf> {
    let mut files = vec![corpus().join("worked_example.prob")];
    let mut benchmarks: Vec<_> = std::fs::read_dir(corpus().join("benchmarks"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    benchmarks.sort();
    files.extend(benchmarks);
    files
}

fn run(args: &[&str], stdin: &[u8]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("extfactor").chain(args.iter().copied());
    let code = cli::run_with(argv, &mut &stdin[..], &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn write_problem(name: &str, text: &str) -> PathBuf {
    let path = Path::new(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn worked_example() -> String {
    corpus().join("worked_example.prob").to_str().unwrap().to_string()
}

#[test]
fn problems_survive_a_print_parse_cycle() {
    for path in corpus_files() {
        let spec = parse_problem(&std::fs::read_to_string(&path).unwrap()).unwrap();
        let again = parse_problem(&spec.to_text()).unwrap();
        assert_eq!(again, spec, "{}", path.display());
    }
}

#[test]
fn human_output_parses_back_to_the_target() {
    let (code, out, err) = run(&["factor", &worked_example()], b"");
    assert_eq!(code, 0, "{err}");
    let s = Session::from_path(Path::new(&worked_example()), true).unwrap();
    let product = out.lines().next().unwrap();
    assert_eq!(s.field.sigma(&s.spec.parse_in_y(product).unwrap()).unwrap(), s.target);
    assert!(out.contains("# dimension: 12"));
    assert_eq!(out.matches("certified by").count(), 3);
}

#[test]
fn verify_accepts_factor_output_and_rejects_tampering() {
    let (code, out, _) = run(&["factor", "--json", &worked_example()], b"");
    assert_eq!(code, 0);
    assert_eq!(run(&["verify", &worked_example()], out.as_bytes()), (0, "ok\n".into(), String::new()));

    let saved = write_problem("worked_example.json", &out);
    let (code, verdict, _) = run(&["verify", &worked_example(), saved.to_str().unwrap()], b"");
    assert_eq!((code, verdict.as_str()), (0, "ok\n"));

    let mut doc: JsonResult = serde_json::from_str(&out).unwrap();
    doc.factors[0].multiplicity = 2;
    let tampered = serde_json::to_string(&doc).unwrap();
    let (code, verdict, _) = run(&["verify", &worked_example()], tampered.as_bytes());
    assert_eq!(code, 1);
    assert!(verdict.starts_with("mismatch"));

    let (code, _, err) = run(&["verify", &worked_example()], b"{not json");
    assert_eq!(code, 1);
    assert!(err.contains("malformed result"));
}

#[test]
fn charpoly_prints_basis_matrix_and_ground_factors() {
    let (code, out, err) = run(
        &["charpoly", &worked_example(), "--r", "x1+2*x2+y", "--basis", "--matrix"],
        b"",
    );
    assert_eq!(code, 0, "{err}");
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "# dimension: 12");
    assert_eq!(
        lines[1],
        "basis: [1, x2, x1, x1*x2, y, x2*y, x1*y, x1*x2*y, y^2, x2*y^2, x1*y^2, x1*x2*y^2]"
    );
    assert_eq!(lines[2], "matrix:");
    assert_eq!(lines[3], "  [0, 2, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0]");
    assert_eq!(lines[14], "  [0, 1, 1, 0, -2, 0, -1, 2, 3, -3, -1, 0]");
    assert!(lines[15].starts_with("charpoly: T^12 + 26*T^10 - 116*T^9"));
    assert_eq!(lines.iter().filter(|l| l.starts_with("factor: ")).count(), 3);

    let (code, _, err) = run(&["charpoly", &worked_example()], b"");
    assert_eq!(code, 1);
    assert!(err.contains("--r"));
}

#[test]
fn dim_of_the_worked_example() {
    assert_eq!(run(&["dim", &worked_example()], b"").1, "12\n");
}

#[test]
fn forced_form_and_seed_are_reported() {
    let (code, out, _) = run(
        &["factor", "--json", &worked_example(), "--r", "-3/2*x1-1/2*x2+y", "--seed", "9"],
        b"",
    );
    assert_eq!(code, 0);
    let doc: JsonResult = serde_json::from_str(&out).unwrap();
    assert_eq!(doc.stats.r_used[0], "y - 3/2*x1 - 1/2*x2");
    assert_eq!(doc.stats.recursion_depth, 1);
    assert_eq!(doc.factors.len(), 3);
}

#[test]
fn usage_and_input_errors() {
    let (code, out, _) = run(&["--help"], b"");
    assert_eq!(code, 0);
    assert!(out.contains("factor"));
    assert_eq!(run(&["frobnicate"], b"").0, 1);
    assert_eq!(run(&["factor", "/nonexistent/problem.prob"], b"").0, 1);

    let bad = write_problem("bad_syntax.prob", "field: Q\nvars: x1\nideal: x1^2 + \npoly: y\n");
    let (code, _, err) = run(&["factor", bad.to_str().unwrap()], b"");
    assert_eq!(code, 1);
    assert!(err.contains("line 3"), "{err}");

    let not_gb = write_problem(
        "not_groebner.prob",
        "field: Q\nvars: x1 x2\norder: lex\nideal:\n  x2^2 - x1\n  x1*x2 - 1\npoly: y^2 - x1\n",
    );
    let (code, _, err) = run(&["factor", not_gb.to_str().unwrap()], b"");
    assert_eq!(code, 1);
    assert!(err.contains("Groebner"), "{err}");
}

/// Factors of small benchmark problems that carry a multiplicity-one
/// certificate give an irreducible characteristic polynomial for some
/// fresh linear form.
#[test]
fn certified_corpus_factors_are_irreducible() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut checked = 0;
    for name in ["f01.prob", "f02.prob"] {
        let s = Session::from_path(&corpus().join("benchmarks").join(name), true).unwrap();
        let k = &s.field;
        let result = driver::factor(k, &s.target, &DriverOptions::default()).unwrap();
        for fac in &result.factors {
            if fac.certificate != Some(Certificate::MultiplicityOne) || fac.poly.degree() == Some(1) {
                continue;
            }
            let qp = QuotientPresentation::build(k.basis(), &k.natural_lift(&fac.poly)).unwrap();
            let n = k.nvars();
            let irreducible = (0..6).any(|_| {
                let mut terms = vec![(Monomial::var(n + 1, n), k.field().one())];
                for i in 0..n {
                    terms.push((Monomial::var(n + 1, i), k.field().from_i64(rng.gen_range(-9..=9))));
                }
                let r = MultiPoly::from_terms(k.field(), n + 1, qp.basis().order(), terms);
                let cp = linalg::char_poly(&linalg::multiplication_matrix(&r, &qp).unwrap()).unwrap();
                let fact = unifactor::factor(&cp, &mut rng).unwrap();
                fact.factors.len() == 1 && fact.factors[0].1 == 1
            });
            assert!(irreducible, "{name}: certified factor failed the cross-check");
            checked += 1;
        }
    }
    assert!(checked >= 2);
}
