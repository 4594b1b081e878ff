//! The TOML input format: complexes with stage-dependent sizes, map descriptions,
//! inductive systems and queries. The grammar is documented in `docs/input-format.md`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};
use toml::Spanned;

use crate::error::{Error, Result};
use crate::fgab::IntMatrix;
use crate::harness::report::{Provenance, ScenarioReport};
use crate::homind::{
    identify_localized_limit, maps_equal_on_k, normalize, Assignment, ComplexSystem, Degree, Eval, MapDescription, Part,
};
use crate::nccw::{classify_block, make_ideal_spec_labels, IdealExtension, NccwComplex};

/// Built-in documents, by name.
pub const BUILTIN_DOCUMENTS: [(&str, &str); 2] = [
    ("thm3.3", include_str!("../../../../docs/inputs/thm3.3.toml")),
    ("ex6.1", include_str!("../../../../docs/inputs/ex6.1.toml")),
];

/// A block size: an integer or an expression in the stage `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Size {
    Int(i64),
    Expr(String),
}

impl Size {
    pub fn eval(&self, n: u64) -> Result<BigInt> {
        match self {
            Size::Int(v) => Ok(BigInt::from(*v)),
            Size::Expr(s) => eval_expr(s, n),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexEntry {
    pub name: String,
    pub k: Vec<Size>,
    pub h: Vec<Size>,
    pub alpha: Vec<Vec<i64>>,
    pub beta: Vec<Vec<i64>>,
    #[serde(default = "yes")]
    pub unital: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapEntry {
    pub name: String,
    pub source: String,
    pub target: String,
    pub points: Vec<String>,
    pub intervals: Vec<String>,
    #[serde(default = "yes")]
    pub unital: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemEntry {
    pub name: String,
    pub map: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ideal: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constant_from: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k1_constant_from: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QueryEntry {
    pub id: String,
    pub kind: QueryKind,
    pub target: String,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub stage: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub other: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub summands: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub part: Option<PartName>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<DegreeName>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stages: Option<usize>,
    pub expect: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<ProvenanceName>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QueryKind {
    Ktheory,
    Ideal,
    Classify,
    Induced,
    MapsEqual,
    Limit,
    Purity,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PartName {
    Ideal,
    Algebra,
    Quotient,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DegreeName {
    K0,
    K1,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum ProvenanceName {
    Paper,
    Trivial,
    Derived,
}

fn yes() -> bool {
    true
}

fn is_zero(v: &u64) -> bool {
    *v == 0
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputDocument {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub complex: Vec<ComplexEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub map: Vec<MapEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub system: Vec<SystemEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub query: Vec<QueryEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    #[serde(default)]
    complex: Vec<Spanned<ComplexEntry>>,
    #[serde(default)]
    map: Vec<Spanned<MapEntry>>,
    #[serde(default)]
    system: Vec<Spanned<SystemEntry>>,
    #[serde(default)]
    query: Vec<Spanned<QueryEntry>>,
}

fn position(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, col)
}

fn located(text: &str, offset: usize, what: &str, e: Error) -> Error {
    let (line, col) = position(text, offset);
    Error::Parse(format!("line {line}, column {col}: {what}: {e}"))
}

/// Parses and validates a document; errors carry a line and column.
pub fn parse(text: &str) -> Result<InputDocument> {
    let raw: RawDocument = toml::from_str(text).map_err(|e| {
        let at = e.span().map(|s| position(text, s.start));
        match at {
            Some((line, col)) => Error::Parse(format!("line {line}, column {col}: {}", e.message())),
            None => Error::Parse(e.message().to_string()),
        }
    })?;
    let doc = InputDocument {
        complex: raw.complex.iter().map(|s| s.get_ref().clone()).collect(),
        map: raw.map.iter().map(|s| s.get_ref().clone()).collect(),
        system: raw.system.iter().map(|s| s.get_ref().clone()).collect(),
        query: raw.query.iter().map(|s| s.get_ref().clone()).collect(),
    };
    let mut seen = BTreeMap::new();
    let names = raw
        .complex
        .iter()
        .map(|c| (&c.get_ref().name, c.span().start))
        .chain(raw.map.iter().map(|m| (&m.get_ref().name, m.span().start)))
        .chain(raw.system.iter().map(|s| (&s.get_ref().name, s.span().start)));
    for (name, at) in names {
        if seen.insert(name.clone(), at).is_some() {
            return Err(located(text, at, name, Error::InvalidArgument("duplicate name".into())));
        }
    }
    for c in &raw.complex {
        let name = &c.get_ref().name;
        doc.complex(name, 0).map_err(|e| located(text, c.span().start, &format!("complex {name:?}"), e))?;
    }
    for m in &raw.map {
        let name = &m.get_ref().name;
        doc.map(name, 0).map_err(|e| located(text, m.span().start, &format!("map {name:?}"), e))?;
    }
    for s in &raw.system {
        let entry = s.get_ref();
        let check = || -> Result<()> {
            let sys = doc.system(&entry.name)?;
            sys.bond(0)?;
            sys.ideal_spec(0)?;
            Ok(())
        };
        check().map_err(|e| located(text, s.span().start, &format!("system {:?}", entry.name), e))?;
    }
    for q in &raw.query {
        let entry = q.get_ref();
        doc.check_query_refs(entry).map_err(|e| located(text, q.span().start, &format!("query {:?}", entry.id), e))?;
    }
    Ok(doc)
}

/// Renders a document back to TOML; `parse(render(d)) == d`.
pub fn render(doc: &InputDocument) -> String {
    toml::to_string(doc).expect("documents serialize")
}

impl InputDocument {
    fn complex_entry(&self, name: &str) -> Result<&ComplexEntry> {
        self.complex
            .iter()
            .find(|c| c.name == name)
            .ok_or_else(|| Error::InvalidArgument(format!("no complex named {name:?}")))
    }

    fn map_entry(&self, name: &str) -> Result<&MapEntry> {
        self.map.iter().find(|m| m.name == name).ok_or_else(|| Error::InvalidArgument(format!("no map named {name:?}")))
    }

    fn system_entry(&self, name: &str) -> Result<&SystemEntry> {
        self.system
            .iter()
            .find(|s| s.name == name)
            .ok_or_else(|| Error::InvalidArgument(format!("no system named {name:?}")))
    }

    /// The complex `name` at stage `n`.
    pub fn complex(&self, name: &str, n: u64) -> Result<NccwComplex<BigInt>> {
        let c = self.complex_entry(name)?;
        let sizes = |v: &[Size]| v.iter().map(|s| s.eval(n)).collect::<Result<Vec<_>>>();
        let matrix = |rows: &[Vec<i64>], what: &str| -> Result<IntMatrix<BigInt>> {
            if rows.len() != c.h.len() {
                return Err(Error::Dimension(format!("{what} has {} rows, expected l = {}", rows.len(), c.h.len())));
            }
            let data: Vec<BigInt> = rows.iter().flatten().map(|&v| BigInt::from(v)).collect();
            if rows.iter().any(|r| r.len() != c.k.len()) {
                return Err(Error::Dimension(format!("{what} rows must have p = {} entries", c.k.len())));
            }
            IntMatrix::from_vec(rows.len(), c.k.len(), data)
        };
        NccwComplex::new(sizes(&c.k)?, sizes(&c.h)?, matrix(&c.alpha, "alpha")?, matrix(&c.beta, "beta")?, c.unital)
    }

    /// The map `name` from its source at stage `n` to its target at stage `n + 1`.
    pub fn map(&self, name: &str, n: u64) -> Result<MapDescription<BigInt>> {
        let m = self.map_entry(name)?;
        let parse_all = |v: &[String]| v.iter().map(|s| parse_assignment(s)).collect::<Result<Vec<_>>>();
        MapDescription::new(
            self.complex(&m.source, n)?,
            self.complex(&m.target, n + 1)?,
            parse_all(&m.points)?,
            parse_all(&m.intervals)?,
            m.unital,
        )
    }

    pub fn system(&self, name: &str) -> Result<ComplexSystem<BigInt>> {
        let s = self.system_entry(name)?.clone();
        self.map_entry(&s.map)?;
        let doc = self.clone();
        let ideal = s.ideal.as_ref().map(|labels| labels.iter().map(|l| l.saturating_sub(1)).collect());
        if s.ideal.as_ref().is_some_and(|l| l.contains(&0)) {
            return Err(Error::InvalidArgument("ideal labels are 1-based".into()));
        }
        let map = s.map.clone();
        let sys = ComplexSystem::new(move |n| doc.map(&map, n as u64), s.constant_from, ideal);
        Ok(match s.k1_constant_from {
            Some(c) => sys.with_constant_from(Degree::K1, Some(c)),
            None => sys,
        })
    }

    pub fn complex_names(&self) -> Vec<&str> {
        self.complex.iter().map(|c| c.name.as_str()).collect()
    }

    pub fn system_names(&self) -> Vec<&str> {
        self.system.iter().map(|s| s.name.as_str()).collect()
    }

    fn check_query_refs(&self, q: &QueryEntry) -> Result<()> {
        let need = |present: bool, what: &str| match present {
            true => Ok(()),
            false => Err(Error::InvalidArgument(format!("{:?} query needs `{what}`", q.kind))),
        };
        match q.kind {
            QueryKind::Ktheory | QueryKind::Classify => self.complex_entry(&q.target).map(|_| ()),
            QueryKind::Ideal => {
                self.complex_entry(&q.target)?;
                need(q.summands.is_some(), "summands")
            }
            QueryKind::Induced => self.map_entry(&q.target).map(|_| ()),
            QueryKind::MapsEqual => {
                self.map_entry(&q.target)?;
                self.map_entry(q.other.as_deref().unwrap_or_default()).map(|_| ())
            }
            QueryKind::Limit => {
                self.system_entry(&q.target)?;
                need(q.part.is_some(), "part")?;
                need(q.degree.is_some(), "degree")
            }
            QueryKind::Purity => {
                self.system_entry(&q.target)?;
                need(q.degree.is_some(), "degree")
            }
        }
    }

    /// Runs every query as a claim of a report named `name`.
    pub fn run_queries(&self, name: &str) -> ScenarioReport {
        let mut r = ScenarioReport::new(name);
        for q in &self.query {
            let provenance = match q.provenance {
                Some(ProvenanceName::Paper) => Provenance::Paper,
                Some(ProvenanceName::Trivial) => Provenance::Trivial,
                _ => Provenance::Derived,
            };
            r.check_with(&q.id, &format!("{:?} {}", q.kind, q.target), self.evaluate(q), &q.expect, provenance);
        }
        r
    }

    pub fn evaluate(&self, q: &QueryEntry) -> Result<String> {
        let degree = match q.degree {
            Some(DegreeName::K1) => Degree::K1,
            _ => Degree::K0,
        };
        match q.kind {
            QueryKind::Ktheory => Ok(k_summary(&self.complex(&q.target, q.stage)?)),
            QueryKind::Ideal => {
                ideal_summary(&self.complex(&q.target, q.stage)?, q.summands.as_deref().unwrap_or_default())
            }
            QueryKind::Classify => classify_summary(&self.complex(&q.target, q.stage)?),
            QueryKind::Induced => induced_summary(&self.map(&q.target, q.stage)?),
            QueryKind::MapsEqual => {
                let other = self.map(q.other.as_deref().unwrap_or_default(), q.stage)?;
                Ok(maps_equal_on_k(&self.map(&q.target, q.stage)?, &other)?.to_string())
            }
            QueryKind::Limit => {
                let part = match q.part {
                    Some(PartName::Ideal) => Part::Ideal,
                    Some(PartName::Quotient) => Part::Quotient,
                    _ => Part::Algebra,
                };
                let sys = self.system(&q.target)?.k_system(part, degree);
                Ok(identify_localized_limit(&sys)?.map_or("unidentified".into(), |l| l.to_string()))
            }
            QueryKind::Purity => Ok(self.system(&q.target)?.limit_purity(degree, q.stages.unwrap_or(3))?.to_string()),
        }
    }
}

/// `K0 = …, K1 = …`.
pub fn k_summary(a: &NccwComplex<BigInt>) -> String {
    let k = a.k_theory();
    format!("K0 = {}, K1 = {}", k.k0(), k.k1())
}

/// K-theory of the ideal generated by the 1-based point labels and of its quotient,
/// and K-purity of the extension.
pub fn ideal_summary(a: &NccwComplex<BigInt>, labels: &[usize]) -> Result<String> {
    let spec = make_ideal_spec_labels(a, labels)?;
    let ext = IdealExtension::new(a, &spec)?;
    Ok(format!(
        "{spec}; ideal {}; quotient {}; boundary trivial {}; K-pure {}",
        k_summary(&ext.ideal),
        k_summary(&ext.quotient),
        ext.boundary_trivial()?,
        ext.is_k_pure()?
    ))
}

pub fn classify_summary(a: &NccwComplex<BigInt>) -> Result<String> {
    let c = classify_block(a)?;
    Ok(match c.odd_witness {
        Some(w) => format!("{} {w}", c.kind),
        None => c.kind.to_string(),
    })
}

pub fn induced_summary(d: &MapDescription<BigInt>) -> Result<String> {
    Ok(format!("K0 = {}, K1 = {}", d.induced_k0()?.matrix(), d.induced_k1()?.matrix()))
}

/// Parses `2*interior 1 + path 1 + point 3` (1-based labels); `0` is the empty assignment.
pub fn parse_assignment(s: &str) -> Result<Assignment<BigInt>> {
    let s = s.trim();
    if s == "0" || s.is_empty() {
        return Ok(Vec::new());
    }
    let bad = |t: &str| Error::Parse(format!("bad assignment term {t:?} (expected [m*]point|interior|path j)"));
    let mut terms = Vec::new();
    for term in s.split('+') {
        let term = term.trim();
        let (mult, eval) = match term.split_once('*') {
            Some((m, e)) => (m.trim().parse::<BigInt>().map_err(|_| bad(term))?, e.trim()),
            None => (BigInt::one(), term),
        };
        let (kind, index) = eval.split_once(char::is_whitespace).ok_or_else(|| bad(term))?;
        let index: usize = index.trim().parse().map_err(|_| bad(term))?;
        if index == 0 || !mult.is_positive() {
            return Err(bad(term));
        }
        let e = match kind {
            "point" => Eval::AtPoint(index - 1),
            "interior" => Eval::AtInterior(index - 1),
            "path" => Eval::FullPath(index - 1),
            _ => return Err(bad(term)),
        };
        terms.push((mult, e));
    }
    Ok(normalize(&terms))
}

/// Evaluates a size expression at stage `n`:
/// `expr := term (('+'|'-') term)*`, `term := power ('*' power)*`,
/// `power := atom ('^' atom)?`, `atom := integer | 'n' | '(' expr ')'`.
pub fn eval_expr(s: &str, n: u64) -> Result<BigInt> {
    let tokens: Vec<char> = s.chars().collect();
    let mut p = ExprParser { tokens: &tokens, pos: 0, n, src: s };
    let v = p.expr()?;
    if p.peek().is_some() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(v)
}

struct ExprParser<'a> {
    tokens: &'a [char],
    pos: usize,
    n: u64,
    src: &'a str,
}

impl ExprParser<'_> {
    fn error(&self, what: &str) -> Error {
        Error::Parse(format!("size expression {:?}: {what} at character {}", self.src, self.pos + 1))
    }

    fn peek(&mut self) -> Option<char> {
        while self.tokens.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
        self.tokens.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<BigInt> {
        let mut v = self.term()?;
        while let Some(c @ ('+' | '-')) = self.peek() {
            self.pos += 1;
            let t = self.term()?;
            v = if c == '+' { v + t } else { v - t };
        }
        Ok(v)
    }

    fn term(&mut self) -> Result<BigInt> {
        let mut v = self.power()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            v *= self.power()?;
        }
        Ok(v)
    }

    fn power(&mut self) -> Result<BigInt> {
        let base = self.atom()?;
        if self.peek() != Some('^') {
            return Ok(base);
        }
        self.pos += 1;
        let e = self.atom()?;
        if e.is_negative() {
            return Err(self.error("negative exponent"));
        }
        let e = e.to_u32().ok_or_else(|| self.error("exponent too large"))?;
        Ok(base.pow(e))
    }

    fn atom(&mut self) -> Result<BigInt> {
        match self.peek() {
            Some('n') => {
                self.pos += 1;
                Ok(BigInt::from(self.n))
            }
            Some('(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.tokens.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
                    self.pos += 1;
                }
                let digits: String = self.tokens[start..self.pos].iter().collect();
                Ok(digits.parse().expect("digits"))
            }
            _ => Err(self.error("expected integer, 'n' or '('")),
        }
    }
}

impl fmt::Display for InputDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self))
    }
}
