//! Problem files and polynomial expressions.
//!
//! ```text
//! field: Q            # or GF(p)
//! vars: x1 x2
//! order: lex          # or grevlex
//! ideal:
//!   x1^2 + 1
//!   x2^2 + x1
//! poly: y^3 + (x1*x2 - 2*x1 - x2)*y^2
//!   + (x1*x2 + 2*x2 - 2)*y + x1 - x1*x2
//! r: x1 + 2*x2 + y    # optional
//! seed: 7             # optional
//! ```

use num_bigint::BigInt;

use crate::arith::{Field, FieldElement};
use crate::error::{Error, Result};
use crate::multipoly::{BaseOrder, Monomial, MonomialOrder, MultiPoly};

/// Name of the distinguished variable.
pub const Y: &str = "y";

#[derive(Clone, Debug, PartialEq)]
pub struct ProblemSpec {
    pub field: Field,
    pub vars: Vec<String>,
    pub order: BaseOrder,
    /// Generators in the `x`-variables under `order`.
    pub ideal: Vec<MultiPoly>,
    /// Target in `x1..xn, y` under the elimination order.
    pub poly: MultiPoly,
    pub r: Option<MultiPoly>,
    pub seed: Option<u64>,
}

impl ProblemSpec {
    pub fn x_order(&self) -> MonomialOrder {
        match self.order {
            BaseOrder::Lex => MonomialOrder::Lex,
            BaseOrder::GrevLex => MonomialOrder::GrevLex,
        }
    }

    pub fn y_order(&self) -> MonomialOrder {
        MonomialOrder::Elimination(self.order)
    }

    /// Variable names followed by `y`.
    pub fn names(&self) -> Vec<String> {
        let mut n = self.vars.clone();
        n.push(Y.to_string());
        n
    }

    /// Parses an expression in `x1..xn, y`.
    pub fn parse_in_y(&self, text: &str) -> Result<MultiPoly> {
        parse_expr(text, self.field, &self.names(), self.y_order())
    }

    /// Parses an expression in the `x`-variables only.
    pub fn parse_in_x(&self, text: &str) -> Result<MultiPoly> {
        parse_expr(text, self.field, &self.vars, self.x_order())
    }

    /// Renders the problem back in the file grammar.
    pub fn to_text(&self) -> String {
        let names = self.names();
        let mut s = String::new();
        s.push_str(&format!(
            "field: {}\n",
            match self.field {
                Field::Rational => "Q".to_string(),
                Field::Prime(p) => format!("GF({p})"),
            }
        ));
        s.push_str(&format!("vars: {}\n", self.vars.join(" ")));
        s.push_str(&format!(
            "order: {}\n",
            match self.order {
                BaseOrder::Lex => "lex",
                BaseOrder::GrevLex => "grevlex",
            }
        ));
        s.push_str("ideal:\n");
        for g in &self.ideal {
            s.push_str(&format!("  {}\n", g.display(&self.vars)));
        }
        s.push_str(&format!("poly: {}\n", self.poly.display(&names)));
        if let Some(r) = &self.r {
            s.push_str(&format!("r: {}\n", r.display(&names)));
        }
        if let Some(seed) = self.seed {
            s.push_str(&format!("seed: {seed}\n"));
        }
        s
    }
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

/// A logical entry: key, value text and the position of each value line.
struct Entry {
    key: String,
    line: usize,
    /// (line number, column of first char, text)
    parts: Vec<(usize, usize, String)>,
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

fn entries(text: &str) -> Result<Vec<Entry>> {
    let mut out: Vec<Entry> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = strip_comment(raw);
        if line.trim().is_empty() {
            continue;
        }
        let indent = line.len() - line.trim_start().len();
        if indent > 0 {
            let Some(last) = out.last_mut() else {
                return Err(syntax(lineno, indent + 1, "indented line outside an entry"));
            };
            let body = line.trim_end();
            last.parts.push((lineno, indent + 1, body[indent..].to_string()));
            continue;
        }
        let Some(colon) = line.find(':') else {
            return Err(syntax(lineno, 1, "expected `key: value`"));
        };
        let key = line[..colon].trim().to_string();
        let rest = &line[colon + 1..];
        let mut parts = Vec::new();
        let lead = rest.len() - rest.trim_start().len();
        if !rest.trim().is_empty() {
            parts.push((lineno, colon + 2 + lead, rest.trim().to_string()));
        }
        out.push(Entry {
            key,
            line: lineno,
            parts,
        });
    }
    Ok(out)
}

pub fn parse_field(text: &str, line: usize, column: usize) -> Result<Field> {
    let t = text.trim();
    if t == "Q" || t == "QQ" {
        return Ok(Field::Rational);
    }
    let inner = t
        .strip_prefix("GF(")
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| syntax(line, column, "expected `Q` or `GF(p)`"))?;
    let p: u64 = inner
        .trim()
        .parse()
        .map_err(|_| syntax(line, column + 3, "expected a prime modulus"))?;
    Field::prime(p)
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    chars
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub fn parse_problem(text: &str) -> Result<ProblemSpec> {
    let entries = entries(text)?;
    let mut field = None;
    let mut vars: Option<Vec<String>> = None;
    let mut order = BaseOrder::Lex;
    let mut ideal_parts = None;
    let mut poly_parts = None;
    let mut r_parts = None;
    let mut seed = None;
    let last_line = text.lines().count() + 1;

    for e in entries {
        let single = |e: &Entry| -> Result<(usize, usize, String)> {
            if e.parts.len() != 1 {
                return Err(syntax(e.line, 1, format!("`{}` takes a single value", e.key)));
            }
            Ok(e.parts[0].clone())
        };
        match e.key.as_str() {
            "field" => {
                let (l, c, t) = single(&e)?;
                field = Some(parse_field(&t, l, c)?);
            }
            "vars" => {
                let (l, c, t) = single(&e)?;
                let mut vs: Vec<String> = Vec::new();
                for v in t.split(|ch: char| ch.is_whitespace() || ch == ',').filter(|s| !s.is_empty()) {
                    let col = c + t.find(v).unwrap_or(0);
                    if !is_ident(v) {
                        return Err(syntax(l, col, format!("`{v}` is not a variable name")));
                    }
                    if v == Y {
                        return Err(syntax(l, col, "`y` is reserved for the polynomial variable"));
                    }
                    if vs.iter().any(|w| w == v) {
                        return Err(syntax(l, col, format!("variable `{v}` declared twice")));
                    }
                    vs.push(v.to_string());
                }
                if vs.is_empty() {
                    return Err(syntax(l, c, "expected at least one variable"));
                }
                vars = Some(vs);
            }
            "order" => {
                let (l, c, t) = single(&e)?;
                order = match t.as_str() {
                    "lex" => BaseOrder::Lex,
                    "grevlex" => BaseOrder::GrevLex,
                    _ => return Err(syntax(l, c, "expected `lex` or `grevlex`")),
                };
            }
            "ideal" => {
                if e.parts.is_empty() {
                    return Err(syntax(e.line, 1, "`ideal:` needs at least one generator"));
                }
                ideal_parts = Some(e.parts);
            }
            "poly" => {
                if e.parts.is_empty() {
                    return Err(syntax(e.line, 1, "`poly:` needs a polynomial"));
                }
                poly_parts = Some(e.parts);
            }
            "r" => {
                if e.parts.is_empty() {
                    return Err(syntax(e.line, 1, "`r:` needs a polynomial"));
                }
                r_parts = Some(e.parts);
            }
            "seed" => {
                let (l, c, t) = single(&e)?;
                seed = Some(t.parse().map_err(|_| syntax(l, c, "expected an unsigned integer"))?);
            }
            other => return Err(syntax(e.line, 1, format!("unknown key `{other}`"))),
        }
    }

    let field = field.ok_or_else(|| syntax(last_line, 1, "missing `field:`"))?;
    let vars = vars.ok_or_else(|| syntax(last_line, 1, "missing `vars:`"))?;
    let ideal_parts = ideal_parts.ok_or_else(|| syntax(last_line, 1, "missing `ideal:`"))?;
    let poly_parts = poly_parts.ok_or_else(|| syntax(last_line, 1, "missing `poly:`"))?;

    let mut names = vars.clone();
    names.push(Y.to_string());
    let x_order = match order {
        BaseOrder::Lex => MonomialOrder::Lex,
        BaseOrder::GrevLex => MonomialOrder::GrevLex,
    };
    let y_order = MonomialOrder::Elimination(order);
    let n = vars.len();

    let mut ideal = Vec::new();
    for (l, c, t) in &ideal_parts {
        let g = Parser::new(t, *l, *c, field, &names, y_order).parse_all()?;
        if g.degree_in(n).unwrap_or(0) > 0 {
            return Err(syntax(*l, *c, "ideal generators cannot use `y`"));
        }
        ideal.push(g.restrict_vars(n, x_order)?);
    }
    let poly = parse_joined(&poly_parts, field, &names, y_order)?;
    let r = r_parts
        .map(|p| parse_joined(&p, field, &names, y_order))
        .transpose()?;

    Ok(ProblemSpec {
        field,
        vars,
        order,
        ideal,
        poly,
        r,
        seed,
    })
}

/// Parses an expression spread over several lines.
fn parse_joined(
    parts: &[(usize, usize, String)],
    field: Field,
    names: &[String],
    order: MonomialOrder,
) -> Result<MultiPoly> {
    let mut p = Parser::multi(parts, field, names, order);
    p.parse_all()
}

/// Parses a standalone expression over the given variable names.
pub fn parse_expr(text: &str, field: Field, names: &[String], order: MonomialOrder) -> Result<MultiPoly> {
    Parser::new(text, 1, 1, field, names, order).parse_all()
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
    End,
}

struct Parser<'a> {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
    field: Field,
    names: &'a [String],
    order: MonomialOrder,
    lex_error: Option<Error>,
}

impl<'a> Parser<'a> {
    fn new(
        text: &str,
        line: usize,
        column: usize,
        field: Field,
        names: &'a [String],
        order: MonomialOrder,
    ) -> Self {
        Self::multi(&[(line, column, text.to_string())], field, names, order)
    }

    fn multi(
        parts: &[(usize, usize, String)],
        field: Field,
        names: &'a [String],
        order: MonomialOrder,
    ) -> Self {
        let mut toks = Vec::new();
        let mut lex_error = None;
        let mut end = (1, 1);
        'outer: for (line, col0, text) in parts {
            let chars: Vec<char> = text.chars().collect();
            let mut i = 0;
            while i < chars.len() {
                let c = chars[i];
                let col = col0 + i;
                if c.is_whitespace() {
                    i += 1;
                } else if c.is_ascii_digit() {
                    let start = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    let s: String = chars[start..i].iter().collect();
                    toks.push((Tok::Num(s.parse().expect("digits")), *line, col));
                } else if c.is_ascii_alphabetic() || c == '_' {
                    let start = i;
                    while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                        i += 1;
                    }
                    toks.push((Tok::Ident(chars[start..i].iter().collect()), *line, col));
                } else if "+-*/^()".contains(c) {
                    toks.push((Tok::Op(c), *line, col));
                    i += 1;
                } else {
                    lex_error = Some(syntax(*line, col, format!("unexpected character `{c}`")));
                    break 'outer;
                }
            }
            end = (*line, col0 + chars.len());
        }
        toks.push((Tok::End, end.0, end.1));
        Parser {
            toks,
            pos: 0,
            field,
            names,
            order,
            lex_error,
        }
    }

    fn peek(&self) -> &(Tok, usize, usize) {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> (Tok, usize, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err_here(&self, message: impl Into<String>) -> Error {
        let (_, l, c) = self.peek();
        syntax(*l, *c, message)
    }

    fn parse_all(&mut self) -> Result<MultiPoly> {
        if let Some(e) = self.lex_error.take() {
            return Err(e);
        }
        let p = self.expr()?;
        match self.peek().0 {
            Tok::End => Ok(p),
            Tok::Op(')') => Err(self.err_here("unmatched `)`")),
            _ => Err(self.err_here("expected an operator")),
        }
    }

    fn nvars(&self) -> usize {
        self.names.len()
    }

    fn expr(&mut self) -> Result<MultiPoly> {
        let mut acc = self.term()?;
        loop {
            match self.peek().0 {
                Tok::Op('+') => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Op('-') => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly> {
        let mut acc = self.unary()?;
        loop {
            match self.peek().0 {
                Tok::Op('*') => {
                    self.bump();
                    acc = &acc * &self.unary()?;
                }
                Tok::Op('/') => {
                    let (_, l, c) = self.bump();
                    let d = self.unary()?;
                    if !d.is_constant() {
                        return Err(syntax(l, c, "division is only allowed by a nonzero constant"));
                    }
                    let inv = d
                        .constant_term()
                        .inv()
                        .map_err(|_| syntax(l, c, "division by zero"))?;
                    acc = acc.scale(&inv);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<MultiPoly> {
        match self.peek().0 {
            Tok::Op('-') => {
                self.bump();
                Ok(-&self.unary()?)
            }
            Tok::Op('+') => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<MultiPoly> {
        let base = self.atom()?;
        if self.peek().0 != Tok::Op('^') {
            return Ok(base);
        }
        self.bump();
        match self.bump() {
            (Tok::Num(n), l, c) => {
                let e: u32 = n
                    .try_into()
                    .map_err(|_| syntax(l, c, "exponent is too large"))?;
                Ok(base.pow(e))
            }
            (_, l, c) => Err(syntax(l, c, "expected a nonnegative integer exponent")),
        }
    }

    fn constant(&self, c: FieldElement) -> MultiPoly {
        MultiPoly::constant(c, self.nvars(), self.order)
    }

    fn atom(&mut self) -> Result<MultiPoly> {
        match self.bump() {
            (Tok::Num(n), _, _) => Ok(self.constant(self.field.from_bigint(&n))),
            (Tok::Ident(name), l, c) => match self.names.iter().position(|v| *v == name) {
                Some(i) => Ok(MultiPoly::from_terms(
                    self.field,
                    self.nvars(),
                    self.order,
                    [(Monomial::var(self.nvars(), i), self.field.one())],
                )),
                None => Err(Error::UnknownVariable {
                    name,
                    line: l,
                    column: c,
                }),
            },
            (Tok::Op('('), _, _) => {
                let inner = self.expr()?;
                match self.bump() {
                    (Tok::Op(')'), _, _) => Ok(inner),
                    (_, l, c) => Err(syntax(l, c, "expected `)`")),
                }
            }
            (Tok::End, l, c) => Err(syntax(l, c, "unexpected end of expression")),
            (_, l, c) => Err(syntax(l, c, "expected a number, variable or `(`")),
        }
    }
}
