//! Text formats: presentation files, cup-product data and lattice bases.
//!
//! A presentation file is line oriented:
//!
//! ```text
//! # Heisenberg algebra
//! class 3
//! gen x
//! gen y:1
//! rel [x,[x,y]]
//! rel [y,[x,y]]
//! ```
//!
//! Relations use `expr := term (('+'|'-') term)*`,
//! `term := [rational '*'] factor`, `factor := name | '[' expr ',' expr ']'`,
//! `rational := int ['/' posint]`. A leading `-` before the first term is
//! also accepted, so printed elements parse back unchanged.

use std::sync::Arc;

use nilpotent_lie::obstruction::CupData;
use nilpotent_lie::{Error as CoreError, Expr, FreeLieAlgebra, Generator, LieElement, LiePresentation, Limits, Q};
use num_traits::{One, Zero};

/// Position is 1-based; columns count characters.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

fn err<T>(line: usize, col: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, col, message: message.into() })
}

struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    /// Column of `chars[0]`.
    offset: usize,
    known: Option<&'a [String]>,
    seen: Vec<String>,
}

impl Cursor<'_> {
    fn col(&self) -> usize {
        self.offset + self.pos
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        match self.peek() {
            Some(x) if x == c => {
                self.pos += 1;
                Ok(())
            }
            Some(x) => err(self.line, self.col(), format!("expected `{c}`, found `{x}`")),
            None => err(self.line, self.col(), format!("expected `{c}`, found end of line")),
        }
    }

    fn digits(&mut self) -> Option<String> {
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| self.chars[start..self.pos].iter().collect())
    }

    fn rational(&mut self) -> Result<Q, ParseError> {
        let num = self.digits().expect("caller checked for a digit");
        let num: num_bigint::BigInt = num.parse().expect("digits parse");
        let save = self.pos;
        if self.peek() == Some('/') {
            self.pos += 1;
            self.skip_ws();
            let dcol = self.col();
            let Some(den) = self.digits() else {
                return err(self.line, dcol, "expected a positive denominator after `/`");
            };
            let den: num_bigint::BigInt = den.parse().expect("digits parse");
            if den.is_zero() {
                return err(self.line, dcol, "denominator must be positive");
            }
            return Ok(Q::new(num, den));
        }
        self.pos = save;
        Ok(Q::from_integer(num))
    }

    fn name(&mut self) -> Result<String, ParseError> {
        self.skip_ws();
        let col = self.col();
        let start = self.pos;
        match self.chars.get(self.pos) {
            Some(c) if c.is_alphabetic() || *c == '_' => self.pos += 1,
            Some(c) => return err(self.line, col, format!("expected a generator name or `[`, found `{c}`")),
            None => return err(self.line, col, "expected a generator name or `[`, found end of line"),
        }
        while self.chars.get(self.pos).is_some_and(|c| c.is_alphanumeric() || *c == '_') {
            self.pos += 1;
        }
        let name: String = self.chars[start..self.pos].iter().collect();
        if let Some(known) = self.known {
            if !known.contains(&name) {
                return err(self.line, col, format!("unknown generator `{name}`"));
            }
        }
        if !self.seen.contains(&name) {
            self.seen.push(name.clone());
        }
        Ok(name)
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        if self.peek() == Some('[') {
            self.pos += 1;
            let a = self.expr()?;
            self.expect(',')?;
            let b = self.expr()?;
            self.expect(']')?;
            Ok(Expr::bracket(a, b))
        } else {
            Ok(Expr::gen(&self.name()?))
        }
    }

    fn term(&mut self) -> Result<(Q, Expr), ParseError> {
        if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            let c = self.rational()?;
            self.expect('*')?;
            Ok((c, self.factor()?))
        } else {
            Ok((Q::one(), self.factor()?))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut terms = Vec::new();
        let mut sign = Q::one();
        if self.peek() == Some('-') {
            self.pos += 1;
            sign = -sign;
        }
        loop {
            let (c, f) = self.term()?;
            terms.push((c * &sign, f));
            match self.peek() {
                Some('+') => sign = Q::one(),
                Some('-') => sign = -Q::one(),
                _ => break,
            }
            self.pos += 1;
        }
        if terms.len() == 1 && terms[0].0.is_one() {
            return Ok(terms.pop().unwrap().1);
        }
        Ok(Expr::sum(terms))
    }
}

/// Parses one expression occupying `text`, which starts at `(line, col)`.
/// With `known`, names outside it are rejected. Returns the names in order
/// of first appearance.
pub fn parse_expr_at(
    text: &str,
    line: usize,
    col: usize,
    known: Option<&[String]>,
) -> Result<(Expr, Vec<String>), ParseError> {
    let mut c = Cursor { chars: text.chars().collect(), pos: 0, line, offset: col, known, seen: Vec::new() };
    if c.peek().is_none() {
        return err(line, col, "empty expression");
    }
    let e = c.expr()?;
    if let Some(x) = c.peek() {
        return err(line, c.col(), format!("unexpected `{x}` after expression"));
    }
    Ok((e, c.seen))
}

pub fn parse_expr(text: &str, known: Option<&[String]>) -> Result<(Expr, Vec<String>), ParseError> {
    parse_expr_at(text, 1, 1, known)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Located<T> {
    pub line: usize,
    pub value: T,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentationFile {
    pub class: usize,
    pub generators: Vec<Generator>,
    pub relations: Vec<Located<Expr>>,
}

/// Splits `line` into its directive keyword and the rest, with the rest's column.
fn directive(line: &str) -> Option<(&str, &str, usize)> {
    let body = line.split('#').next().unwrap_or("");
    let trimmed = body.trim_start();
    if trimmed.trim().is_empty() {
        return None;
    }
    let lead = body.chars().count() - trimmed.chars().count();
    let kw_len = trimmed.find(char::is_whitespace).unwrap_or(trimmed.len());
    let (kw, rest) = trimmed.split_at(kw_len);
    Some((kw, rest, lead + kw.chars().count() + 1))
}

fn is_name(s: &str) -> bool {
    let mut cs = s.chars();
    cs.next().is_some_and(|c| c.is_alphabetic() || c == '_') && cs.all(|c| c.is_alphanumeric() || c == '_')
}

fn positive_integer(s: &str, line: usize, col: usize, what: &str) -> Result<usize, ParseError> {
    match s.trim().parse::<usize>() {
        Ok(n) if n > 0 => Ok(n),
        _ => err(line, col, format!("{what} must be a positive integer, found `{}`", s.trim())),
    }
}

fn rest_col(rest: &str, col: usize) -> usize {
    col + rest.chars().take_while(|c| c.is_whitespace()).count()
}

pub fn parse_presentation(text: &str) -> Result<PresentationFile, ParseError> {
    let mut class = None;
    let mut generators: Vec<Generator> = Vec::new();
    let mut pending = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let Some((kw, rest, col)) = directive(raw) else { continue };
        let rc = rest_col(rest, col);
        match kw {
            "class" => {
                if class.is_some() {
                    return err(line, 1, "duplicate `class` directive");
                }
                class = Some(positive_integer(rest, line, rc, "class")?);
            }
            "gen" => {
                let spec = rest.trim();
                let (name, weight) = match spec.split_once(':') {
                    Some((n, w)) => {
                        let wcol = rc + n.chars().count() + 1;
                        (n.trim(), positive_integer(w, line, wcol, "generator weight")? as u32)
                    }
                    None => (spec, 1),
                };
                if !is_name(name) {
                    return err(line, rc, format!("invalid generator name `{name}`"));
                }
                if generators.iter().any(|g| g.name() == name) {
                    return err(line, rc, format!("duplicate generator `{name}`"));
                }
                generators.push(Generator::new(name, weight).map_err(|e| ParseError {
                    line,
                    col: rc,
                    message: e.to_string(),
                })?);
            }
            "rel" => pending.push((line, rest.to_string(), col)),
            other => return err(line, col - other.chars().count(), format!("unknown directive `{other}`")),
        }
    }
    let Some(class) = class else {
        return err(text.lines().count().max(1), 1, "missing `class` directive");
    };
    if generators.is_empty() {
        return err(text.lines().count().max(1), 1, "at least one `gen` directive is required");
    }
    let names: Vec<String> = generators.iter().map(|g| g.name().to_string()).collect();
    let mut relations = Vec::new();
    for (line, rest, col) in pending {
        let (e, _) = parse_expr_at(&rest, line, col, Some(&names))?;
        relations.push(Located { line, value: e });
    }
    Ok(PresentationFile { class, generators, relations })
}

/// Failure turning a parsed file into a presentation.
#[derive(Debug, thiserror::Error)]
pub enum BuildError {
    #[error("line {line}: {message}")]
    Relation { line: usize, message: String },
    #[error(transparent)]
    Core(#[from] CoreError),
}

impl PresentationFile {
    pub fn algebra(&self, limits: &Limits) -> Result<Arc<FreeLieAlgebra>, BuildError> {
        if self.class > limits.max_class {
            return Err(CoreError::ClassLimitExceeded { requested: self.class, limit: limits.max_class }.into());
        }
        Ok(FreeLieAlgebra::new(self.generators.clone(), self.class)?)
    }

    pub fn build(&self, limits: &Limits) -> Result<LiePresentation, BuildError> {
        let alg = self.algebra(limits)?;
        let mut rels = Vec::new();
        for r in &self.relations {
            let e = alg.rewrite(&r.value).map_err(|e| BuildError::Relation { line: r.line, message: e.to_string() })?;
            if e.is_zero() {
                return Err(BuildError::Relation {
                    line: r.line,
                    message: "relation is zero in the free algebra at this class".into(),
                });
            }
            if e.lengths().contains(&1) {
                return Err(BuildError::Relation {
                    line: r.line,
                    message: "relation has a degree-1 part; generators must be independent".into(),
                });
            }
            rels.push(e);
        }
        if rels.is_empty() {
            Ok(LiePresentation::free(alg))
        } else {
            Ok(LiePresentation::new(alg, rels)?)
        }
    }
}

/// Canonical text form; parsing it gives back the same presentation.
pub fn serialize(pres: &LiePresentation) -> String {
    let mut out = format!("class {}\n", pres.class_cap());
    for g in pres.generators() {
        if g.weight() == 1 {
            out += &format!("gen {}\n", g.name());
        } else {
            out += &format!("gen {}:{}\n", g.name(), g.weight());
        }
    }
    for r in pres.relations() {
        out += &format!("rel {r}\n");
    }
    out
}

/// Cup data file:
///
/// ```text
/// h1 4
/// h2 1
/// names a1 b1 a2 b2
/// cup 1 2 1 1
/// cup 3 4 1 1
/// ```
///
/// `cup i j k c` sets the `k`-th coordinate of `h_i ∪ h_j` to `c` (indices
/// 1-based); `h_j ∪ h_i` follows by antisymmetry.
pub fn parse_cup(text: &str) -> Result<CupData, ParseError> {
    let mut h1 = None;
    let mut h2 = None;
    let mut names = None;
    let mut entries = Vec::new();
    let mut last = 1;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last = line;
        let Some((kw, rest, col)) = directive(raw) else { continue };
        let rc = rest_col(rest, col);
        match kw {
            "h1" | "h2" => {
                let n: usize = rest.trim().parse().or_else(|_| err(line, rc, "expected a dimension"))?;
                if kw == "h1" {
                    h1 = Some(n);
                } else {
                    h2 = Some(n);
                }
            }
            "names" => {
                let ns: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
                if let Some(bad) = ns.iter().find(|n| !is_name(n)) {
                    return err(line, rc, format!("invalid name `{bad}`"));
                }
                names = Some(ns);
            }
            "cup" => {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                if parts.len() != 4 {
                    return err(line, rc, "expected `cup i j k value`");
                }
                let (Some(n1), Some(n2)) = (h1, h2) else {
                    return err(line, 1, "`h1` and `h2` must precede `cup` lines");
                };
                let idx = |s: &str, bound: usize| -> Result<usize, ParseError> {
                    match s.parse::<usize>() {
                        Ok(v) if v >= 1 && v <= bound => Ok(v - 1),
                        _ => err(line, rc, format!("index `{s}` out of range 1..={bound}")),
                    }
                };
                let (a, b, k) = (idx(parts[0], n1)?, idx(parts[1], n1)?, idx(parts[2], n2)?);
                let (v, _) = parse_coefficient(parts[3], line, rc)?;
                entries.push((a, b, k, v));
            }
            other => return err(line, col - other.chars().count(), format!("unknown directive `{other}`")),
        }
    }
    let (Some(h1), Some(h2)) = (h1, h2) else {
        return err(last, 1, "`h1` and `h2` directives are required");
    };
    CupData::from_entries(h1, h2, names, entries).map_err(|e| ParseError { line: last, col: 1, message: e.to_string() })
}

fn parse_coefficient(s: &str, line: usize, col: usize) -> Result<(Q, usize), ParseError> {
    let (neg, body) = match s.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, s),
    };
    let mut c = Cursor { chars: body.chars().collect(), pos: 0, line, offset: col, known: None, seen: Vec::new() };
    if !c.peek().is_some_and(|x| x.is_ascii_digit()) {
        return err(line, col, format!("expected a rational number, found `{s}`"));
    }
    let v = c.rational()?;
    if c.peek().is_some() {
        return err(line, col, format!("expected a rational number, found `{s}`"));
    }
    Ok((if neg { -v } else { v }, c.pos))
}

pub fn serialize_cup(data: &CupData) -> String {
    let mut out = format!("h1 {}\nh2 {}\nnames {}\n", data.dim_h1(), data.dim_h2(), data.names().join(" "));
    for i in 0..data.dim_h1() {
        for j in (i + 1)..data.dim_h1() {
            for (k, v) in data.value(i, j).iter().enumerate() {
                if !v.is_zero() {
                    out += &format!("cup {} {} {} {v}\n", i + 1, j + 1, k + 1);
                }
            }
        }
    }
    out
}

/// Lattice file: one `elem <expr>` line per basis element.
pub fn parse_lattice(text: &str, known: &[String]) -> Result<Vec<Located<Expr>>, ParseError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let Some((kw, rest, col)) = directive(raw) else { continue };
        if kw != "elem" {
            return err(line, col - kw.chars().count(), format!("unknown directive `{kw}`"));
        }
        out.push(Located { line, value: parse_expr_at(rest, line, col, Some(known))?.0 });
    }
    Ok(out)
}

/// Evaluates a parsed expression in `alg`.
pub fn element(alg: &Arc<FreeLieAlgebra>, e: &Expr) -> Result<LieElement, CoreError> {
    alg.rewrite(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Q {
        Q::new(n.into(), d.into())
    }

    #[test]
    fn expressions() {
        let (e, seen) = parse_expr("x + y + 1/2*[x,y] - 1/12*[y,[x,y]]", None).unwrap();
        assert_eq!(seen, vec!["x", "y"]);
        let alg = FreeLieAlgebra::with_names(&["x", "y"], 3).unwrap();
        assert_eq!(alg.rewrite(&e).unwrap().to_string(), "x + y + 1/2*[x,y] - 1/12*[y,[x,y]]");
        let (e, _) = parse_expr("-[x,y]", None).unwrap();
        assert_eq!(alg.rewrite(&e).unwrap().to_string(), "-[x,y]");
        let (e, _) = parse_expr(" 3 / 4 * [ y , x ] ", None).unwrap();
        assert_eq!(alg.rewrite(&e).unwrap().coefficient(&alg.basis_words(2)[0]), q(-3, 4));
    }

    #[test]
    fn expression_errors() {
        let e = parse_expr("[x,y", None).unwrap_err();
        assert_eq!((e.line, e.col), (1, 5));
        let e = parse_expr("x + 1/0*y", None).unwrap_err();
        assert_eq!(e.col, 7);
        let e = parse_expr("2 x", None).unwrap_err();
        assert!(e.message.contains("expected `*`"));
        let known = vec!["x".to_string()];
        let e = parse_expr("[x, z]", Some(&known)).unwrap_err();
        assert_eq!((e.col, e.message.as_str()), (5, "unknown generator `z`"));
    }

    #[test]
    fn presentation_round_trip() {
        let text = "# h3\nclass 3\ngen x\ngen y:2\nrel [x,[x,y]]\nrel [y,[x,y]]  # second\n";
        let f = parse_presentation(text).unwrap();
        assert_eq!(f.class, 3);
        assert_eq!(f.generators[1].weight(), 2);
        let p = f.build(&Limits::default()).unwrap();
        let again = parse_presentation(&serialize(&p)).unwrap().build(&Limits::default()).unwrap();
        assert_eq!(serialize(&again), serialize(&p));
        assert_eq!(again.relations(), p.relations());
    }

    #[test]
    fn presentation_errors() {
        let e = parse_presentation("class 2\ngen x\nrel [x, w]\n").unwrap_err();
        assert_eq!((e.line, e.col, e.message.as_str()), (3, 9, "unknown generator `w`"));
        let e = parse_presentation("gen x\n").unwrap_err();
        assert!(e.message.contains("class"));
        let e = parse_presentation("class 2\nclass 3\ngen x\n").unwrap_err();
        assert_eq!(e.line, 2);
        let e = parse_presentation("class 2\ngen x\nfoo bar\n").unwrap_err();
        assert_eq!((e.line, e.col), (3, 1));
        let e = parse_presentation("class 0\ngen x\n").unwrap_err();
        assert_eq!((e.line, e.col), (1, 7));
        let f = parse_presentation("class 2\ngen x\ngen y\nrel [x,x]\n").unwrap();
        assert!(matches!(f.build(&Limits::default()), Err(BuildError::Relation { line: 4, .. })));
    }

    #[test]
    fn cup_files() {
        let d = parse_cup("h1 4\nh2 1\nnames a1 b1 a2 b2\ncup 1 2 1 1\ncup 3 4 1 1\n").unwrap();
        assert_eq!(d.value(1, 0), &[q(-1, 1)]);
        assert_eq!(parse_cup(&serialize_cup(&d)).unwrap(), d);
        assert!(parse_cup("h1 2\nh2 1\ncup 1 3 1 1\n").is_err());
        assert!(parse_cup("h1 2\nh2 1\ncup 1 1 1 1\n").is_err());
        assert_eq!(parse_cup("h1 2\nh2 1\ncup 1 2 1 -1/2\n").unwrap().value(0, 1), &[q(-1, 2)]);
    }
}
