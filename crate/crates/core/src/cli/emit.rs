//! Human-readable and JSON renderings of a factorization.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::driver::FactorizationResult;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputMode {
    Human,
    Json,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonFactor {
    pub poly: String,
    pub multiplicity: u32,
    pub certified: bool,
    pub certificate: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonStats {
    pub dimension: usize,
    pub r_used: Vec<String>,
    pub recursion_depth: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonResult {
    pub constant: String,
    pub factors: Vec<JsonFactor>,
    pub stats: JsonStats,
}

impl JsonResult {
    /// `names` lists the `x`-variables followed by `y`.
    pub fn from_result(names: &[String], result: &FactorizationResult) -> Self {
        JsonResult {
            constant: result.constant.display(names).to_string(),
            factors: result
                .factors
                .iter()
                .map(|f| JsonFactor {
                    poly: f.poly.display(names).to_string(),
                    multiplicity: f.multiplicity,
                    certified: f.certified,
                    certificate: f.certificate.map(|c| c.as_str()).unwrap_or("none").to_string(),
                })
                .collect(),
            stats: JsonStats {
                dimension: result.stats.dimension,
                r_used: result
                    .stats
                    .r_used
                    .iter()
                    .map(|r| r.display(names).to_string())
                    .collect(),
                recursion_depth: result.stats.recursion_depth,
            },
        }
    }
}

/// The product `c * f1^m1 * ...` as a parseable expression.
pub fn product_expression(names: &[String], result: &FactorizationResult) -> String {
    let c = result.constant.display(names).to_string();
    if result.factors.is_empty() {
        return c;
    }
    let mut parts = Vec::new();
    if !result.constant.is_one() {
        parts.push(format!("({c})"));
    }
    for f in &result.factors {
        let mut s = format!("({})", f.poly.display(names));
        if f.multiplicity != 1 {
            s.push_str(&format!("^{}", f.multiplicity));
        }
        parts.push(s);
    }
    parts.join(" * ")
}

pub fn emit_result(names: &[String], result: &FactorizationResult, mode: OutputMode) -> String {
    match mode {
        OutputMode::Json => {
            let doc = JsonResult::from_result(names, result);
            let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
            s.push('\n');
            s
        }
        OutputMode::Human => {
            let doc = JsonResult::from_result(names, result);
            let mut s = product_expression(names, result);
            s.push('\n');
            let _ = writeln!(s, "# constant: {}", doc.constant);
            for (i, f) in doc.factors.iter().enumerate() {
                let _ = writeln!(
                    s,
                    "# factor {}: {} (multiplicity {}, {})",
                    i + 1,
                    f.poly,
                    f.multiplicity,
                    if f.certified {
                        format!("certified by {}", f.certificate)
                    } else {
                        "uncertified".to_string()
                    }
                );
            }
            let _ = writeln!(s, "# dimension: {}", doc.stats.dimension);
            let _ = writeln!(s, "# r used: {}", doc.stats.r_used.join("; "));
            let _ = writeln!(s, "# recursion depth: {}", doc.stats.recursion_depth);
            s
        }
    }
}
