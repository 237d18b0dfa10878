//! Command-line front end.

mod emit;
mod parse;

use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::driver::{self, DriverOptions, DEFAULT_MAX_RANDOM};
use crate::error::{Error, Result};
use crate::extfield::{ExtField, ExtPoly};
use crate::linalg;
use crate::reduction::{GroebnerBasis, QuotientPresentation};
use crate::unifactor;

pub use emit::{emit_result, product_expression, JsonFactor, JsonResult, JsonStats, OutputMode};
pub use parse::{parse_expr, parse_problem, ProblemSpec, Y};

/// Name of the indeterminate in printed characteristic polynomials.
pub const CHARPOLY_VAR: &str = "T";

#[derive(Parser, Debug)]
#[command(name = "extfactor", version, about = "Factor polynomials over algebraic extension fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct InputArgs {
    /// Problem file.
    file: PathBuf,
    /// Trust the ideal generators to form a Groebner basis.
    #[arg(long)]
    no_verify_gb: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Factor the target polynomial.
    Factor {
        #[command(flatten)]
        input: InputArgs,
        /// Seed for every random choice (overrides the file).
        #[arg(long)]
        seed: Option<u64>,
        /// First linear form to try (overrides the file).
        #[arg(long = "r", value_name = "EXPR", allow_hyphen_values = true)]
        r: Option<String>,
        /// Compute minimal polynomials before characteristic polynomials.
        #[arg(long)]
        prefer_minpoly: bool,
        /// Random attempts per node before the deterministic grid.
        #[arg(long, default_value_t = DEFAULT_MAX_RANDOM)]
        max_random: usize,
        #[arg(long)]
        json: bool,
    },
    /// Check a JSON factorization against the problem.
    Verify {
        #[command(flatten)]
        input: InputArgs,
        /// JSON result file; standard input when omitted.
        result: Option<PathBuf>,
    },
    /// Print the characteristic polynomial of multiplication by `r` and
    /// its factorization over the ground field.
    Charpoly {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long = "r", value_name = "EXPR", allow_hyphen_values = true)]
        r: Option<String>,
        /// Also print the multiplication matrix.
        #[arg(long)]
        matrix: bool,
        /// Also print the monomial basis of the quotient.
        #[arg(long)]
        basis: bool,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Print the dimension of the quotient by the target polynomial.
    Dim {
        #[command(flatten)]
        input: InputArgs,
    },
}

/// A parsed problem with its field and target in `K[y]`.
pub struct Session {
    pub spec: ProblemSpec,
    pub field: ExtField,
    pub target: ExtPoly,
}

impl Session {
    pub fn from_text(text: &str, verify_gb: bool) -> Result<Self> {
        let spec = parse_problem(text)?;
        let gb = GroebnerBasis::new(spec.field, spec.vars.len(), spec.x_order(), spec.ideal.clone())?;
        let gb = if verify_gb { gb.verify()? } else { gb };
        let field = ExtField::new(gb)?;
        let target = field.sigma(&spec.poly)?;
        if target.is_zero() {
            return Err(Error::InvalidInput("the target polynomial is zero in K[y]".into()));
        }
        Ok(Session { spec, field, target })
    }

    pub fn from_path(path: &Path, verify_gb: bool) -> Result<Self> {
        Self::from_text(&std::fs::read_to_string(path)?, verify_gb)
    }

    /// Variable names for printing: the declared ones, then `y`.
    pub fn names(&self) -> Vec<String> {
        self.spec.names()
    }

    /// Monic squarefree part of the target.
    pub fn radical(&self) -> Result<ExtPoly> {
        let monic = self.field.poly_monic(&self.target)?;
        Ok(self.field.squarefree_part(&monic)?.0)
    }

    pub fn quotient(&self) -> Result<QuotientPresentation> {
        let radical = self.radical()?;
        QuotientPresentation::build(self.field.basis(), &self.field.natural_lift(&radical))
    }

    /// `constant * prod(poly^multiplicity)` from a JSON result.
    pub fn expand_json(&self, doc: &JsonResult) -> Result<ExtPoly> {
        let k = &self.field;
        let c = k.element(&self.spec.parse_in_x(&doc.constant)?)?;
        let mut acc = k.poly(vec![c]);
        for f in &doc.factors {
            let g = k.sigma(&self.spec.parse_in_y(&f.poly)?)?;
            acc = k.poly_mul(&acc, &k.poly_pow(&g, f.multiplicity));
        }
        Ok(acc)
    }
}

/// Runs the command line with the process streams.
pub fn run<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    run_with(
        args,
        &mut std::io::stdin().lock(),
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    )
}

/// Runs the command line against the given streams and returns the exit code.
pub fn run_with<I, S>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    1
                }
            };
        }
    };
    match dispatch(cli.command, stdin, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if let Error::NotMaximalIdeal { element, annihilator } = &e {
                let names: Vec<String> = (1..=element.nvars()).map(|i| format!("x{i}")).collect();
                let _ = writeln!(
                    err,
                    "witness: ({}) * ({}) lies in the ideal",
                    element.display(&names),
                    annihilator.display(&names)
                );
            }
            e.exit_code()
        }
    }
}

fn dispatch(command: Command, stdin: &mut dyn Read, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Factor {
            input,
            seed,
            r,
            prefer_minpoly,
            max_random,
            json,
        } => {
            let s = Session::from_path(&input.file, !input.no_verify_gb)?;
            let forced = match r {
                Some(text) => Some(s.spec.parse_in_y(&text)?),
                None => s.spec.r.clone(),
            };
            let opts = DriverOptions {
                seed: seed.or(s.spec.seed).unwrap_or(0),
                forced_r: forced.into_iter().collect(),
                max_random,
                prefer_minpoly: prefer_minpoly.then_some(true),
                ..DriverOptions::default()
            };
            let result = driver::factor(&s.field, &s.target, &opts)?;
            let mode = if json { OutputMode::Json } else { OutputMode::Human };
            out.write_all(emit_result(&s.names(), &result, mode).as_bytes())?;
            Ok(0)
        }
        Command::Verify { input, result } => {
            let s = Session::from_path(&input.file, !input.no_verify_gb)?;
            let text = match result {
                Some(path) => std::fs::read_to_string(path)?,
                None => {
                    let mut buf = String::new();
                    stdin.read_to_string(&mut buf)?;
                    buf
                }
            };
            let doc: JsonResult = serde_json::from_str(&text)
                .map_err(|e| Error::InvalidInput(format!("malformed result: {e}")))?;
            if s.expand_json(&doc)? == s.target {
                writeln!(out, "ok")?;
                Ok(0)
            } else {
                writeln!(out, "mismatch: the product differs from the target")?;
                Ok(1)
            }
        }
        Command::Charpoly {
            input,
            r,
            matrix,
            basis,
            seed,
        } => {
            let s = Session::from_path(&input.file, !input.no_verify_gb)?;
            let r = match r {
                Some(text) => s.spec.parse_in_y(&text)?,
                None => s
                    .spec
                    .r
                    .clone()
                    .ok_or_else(|| Error::InvalidInput("no `r` given in the file or with --r".into()))?,
            };
            let names = s.names();
            let qp = s.quotient()?;
            let m = linalg::multiplication_matrix(&r, &qp)?;
            let cp = linalg::char_poly(&m)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed.or(s.spec.seed).unwrap_or(0));
            let fact = unifactor::factor(&cp, &mut rng)?;
            writeln!(out, "# dimension: {}", qp.dimension())?;
            if basis {
                let b: Vec<String> = qp
                    .staircase()
                    .iter()
                    .map(|m| {
                        let p = crate::multipoly::MultiPoly::from_terms(
                            s.spec.field,
                            names.len(),
                            s.spec.y_order(),
                            [(m.clone(), s.spec.field.one())],
                        );
                        let text = p.display(&names).to_string();
                        text
                    })
                    .collect();
                writeln!(out, "basis: [{}]", b.join(", "))?;
            }
            if matrix {
                writeln!(out, "matrix:")?;
                for i in 0..m.rows() {
                    let row: Vec<String> = m.row(i).iter().map(ToString::to_string).collect();
                    writeln!(out, "  [{}]", row.join(", "))?;
                }
            }
            writeln!(out, "charpoly: {}", cp.display(CHARPOLY_VAR))?;
            for (q, e) in &fact.factors {
                writeln!(out, "factor: ({})^{}", q.display(CHARPOLY_VAR), e)?;
            }
            Ok(0)
        }
        Command::Dim { input } => {
            let s = Session::from_path(&input.file, !input.no_verify_gb)?;
            let dim = s.field.degree() * s.radical()?.degree().unwrap_or(0);
            writeln!(out, "{dim}")?;
            Ok(0)
        }
    }
}
