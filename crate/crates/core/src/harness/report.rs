//! Scenario reports: claims with computed and expected values, rendered as text or JSON.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

/// Where an expected value comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Provenance {
    /// Stated in the source text.
    Paper,
    /// Follows from definitions.
    Trivial,
    /// Computed by an independent route.
    Derived,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Paper => "PAPER",
            Provenance::Trivial => "TRIVIAL",
            Provenance::Derived => "DERIVED",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Claim {
    pub id: String,
    pub anchor: String,
    pub computed: String,
    pub expected: String,
    pub provenance: Provenance,
    pub pass: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ScenarioReport {
    pub scenario: String,
    pub claims: Vec<Claim>,
    pub notes: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(Format::Text),
            "json" | "json-like" => Ok(Format::Json),
            _ => Err(Error::InvalidArgument(format!("unknown format {s:?} (text, json)"))),
        }
    }
}

impl ScenarioReport {
    pub fn new(scenario: &str) -> Self {
        ScenarioReport { scenario: scenario.to_owned(), ..Default::default() }
    }

    /// Records a claim that passes iff `computed == expected`.
    pub fn check(
        &mut self,
        id: &str,
        anchor: &str,
        computed: impl ToString,
        expected: impl ToString,
        provenance: Provenance,
    ) {
        let (computed, expected) = (computed.to_string(), expected.to_string());
        let pass = computed == expected;
        self.claims.push(Claim { id: id.into(), anchor: anchor.into(), computed, expected, provenance, pass });
    }

    /// Records a claim whose computation failed.
    pub fn error(&mut self, id: &str, anchor: &str, err: &Error, expected: impl ToString, provenance: Provenance) {
        self.claims.push(Claim {
            id: id.into(),
            anchor: anchor.into(),
            computed: format!("error: {err}"),
            expected: expected.to_string(),
            provenance,
            pass: false,
        });
    }

    /// Records `check` on a fallible computation.
    pub fn check_with<V: ToString>(
        &mut self,
        id: &str,
        anchor: &str,
        computed: Result<V>,
        expected: impl ToString,
        provenance: Provenance,
    ) {
        match computed {
            Ok(v) => self.check(id, anchor, v, expected, provenance),
            Err(e) => self.error(id, anchor, &e, expected, provenance),
        }
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn all_pass(&self) -> bool {
        self.claims.iter().all(|c| c.pass)
    }

    pub fn passed(&self) -> usize {
        self.claims.iter().filter(|c| c.pass).count()
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.to_string(),
            Format::Json => serde_json::to_string_pretty(self).expect("report serializes") + "\n",
        }
    }
}

impl fmt::Display for ScenarioReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "scenario {}", self.scenario)?;
        for c in &self.claims {
            writeln!(f, "[{}] {} ({})", if c.pass { "PASS" } else { "FAIL" }, c.id, c.provenance)?;
            writeln!(f, "    anchor:   \"{}\"", c.anchor)?;
            writeln!(f, "    computed: {}", c.computed)?;
            writeln!(f, "    expected: {}", c.expected)?;
        }
        for n in &self.notes {
            writeln!(f, "note: {n}")?;
        }
        writeln!(f, "{}/{} claims passed", self.passed(), self.claims.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_and_verdict() {
        let mut r = ScenarioReport::new("demo");
        r.check("a", "x", 2 + 2, 4, Provenance::Trivial);
        r.check_with("b", "y", Err::<i32, _>(Error::Parse("bad".into())), 1, Provenance::Derived);
        assert!(!r.all_pass());
        let text = r.render(Format::Text);
        assert!(text.contains("[PASS] a (TRIVIAL)") && text.contains("[FAIL] b (DERIVED)"));
        assert!(text.ends_with("1/2 claims passed\n"));
        let json: serde_json::Value = serde_json::from_str(&r.render(Format::Json)).unwrap();
        assert_eq!(json["claims"][0]["provenance"], "TRIVIAL");
        assert_eq!(json["claims"][1]["pass"], false);
        assert_eq!("json".parse::<Format>().unwrap(), Format::Json);
    }
}
