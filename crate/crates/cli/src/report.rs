//! Reports printed by every subcommand, as aligned text or JSON.
//!
//! The JSON form is the serde encoding of [`Report`]; `docs/report.schema.json`
//! describes it. Unknown fields are rejected when reading a report back.

use nilpotent_lie::obstruction::{CheckRun, Verdict, Violation, Witness};
use serde::{Deserialize, Serialize};

/// Violations listed in a rendered weight certificate; the count is always complete.
pub const MAX_LISTED_VIOLATIONS: usize = 8;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub command: String,
    pub input: Option<String>,
    pub generators: Vec<String>,
    pub class_cap: Option<usize>,
    /// Quotient dimension in each degree `1..=class_cap`.
    pub dims: Vec<usize>,
    /// Dimensions of `Γ_n/Γ_{n+1}` while nonzero.
    pub lcs_dims: Vec<usize>,
    /// Minimal relation degrees with multiplicity.
    pub relation_degrees: Vec<usize>,
    /// Command-specific results, in display order.
    pub results: Vec<Entry>,
    pub verdicts: Vec<VerdictReport>,
    pub checks_run: Vec<CheckRunReport>,
    pub caveat: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Entry {
    pub key: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerdictReport {
    pub mode: String,
    pub outcome: String,
    pub witnesses: Vec<WitnessReport>,
    /// Witnesses from informational checks.
    pub notes: Vec<WitnessReport>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessReport {
    pub check: String,
    pub summary: String,
    pub degrees: Vec<usize>,
    pub offending_degrees: Vec<usize>,
    pub massey_triple: Vec<String>,
    pub massey_class: Option<String>,
    pub infeasible_assignments: Option<u64>,
    pub violations: Vec<ViolationReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ViolationReport {
    pub assignment: Vec<u32>,
    /// 1-based, as in the input file.
    pub relation: usize,
    pub degree: usize,
    pub weight: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckRunReport {
    pub check: String,
    pub passed: bool,
    pub informational: bool,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report { command: command.into(), caveat: nilpotent_lie::obstruction::CAVEAT.into(), ..Default::default() }
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.results.push(Entry { key: key.into(), value: value.into() });
    }

    pub fn result(&self, key: &str) -> Option<&str> {
        self.results.iter().find(|e| e.key == key).map(|e| e.value.as_str())
    }
}

fn join<T: ToString>(xs: &[T], sep: &str) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(sep)
}

fn set_text(xs: &[usize]) -> String {
    format!("{{{}}}", join(xs, ","))
}

fn violation(v: &Violation) -> ViolationReport {
    ViolationReport { assignment: v.assignment.clone(), relation: v.relation + 1, degree: v.degree, weight: v.weight }
}

pub fn witness_report(w: &Witness) -> WitnessReport {
    let check = w.check().as_str().to_string();
    match w {
        Witness::RelationDegrees { degrees, allowed, offending } => WitnessReport {
            check,
            summary: format!(
                "minimal relation degrees {} include {} outside {}",
                set_text(degrees),
                set_text(offending),
                set_text(allowed)
            ),
            degrees: degrees.clone(),
            offending_degrees: offending.clone(),
            ..Default::default()
        },
        Witness::WeightInfeasible { generator_weights, relation_weights, certificate } => WitnessReport {
            check,
            summary: format!(
                "no generator weights in {{{}}} give relation weights in {{{}}} ({} assignments, each violated)",
                join(generator_weights, ","),
                join(relation_weights, ","),
                certificate.len()
            ),
            infeasible_assignments: Some(certificate.len() as u64),
            violations: certificate.iter().take(MAX_LISTED_VIOLATIONS).map(violation).collect(),
            ..Default::default()
        },
        Witness::Massey { labels, class_text, class_cap, .. } => WitnessReport {
            check,
            summary: format!("<{}> is nonvanishing at class cap {class_cap}", labels.join(", ")),
            massey_triple: labels.to_vec(),
            massey_class: Some(class_text.clone()),
            ..Default::default()
        },
    }
}

pub fn verdict_report(v: &Verdict) -> VerdictReport {
    VerdictReport {
        mode: v.mode.as_str().into(),
        outcome: v.outcome.as_str().into(),
        witnesses: v.witnesses.iter().map(witness_report).collect(),
        notes: v.notes.iter().map(witness_report).collect(),
    }
}

pub fn check_runs(runs: &[CheckRun]) -> Vec<CheckRunReport> {
    runs.iter()
        .map(|r| CheckRunReport { check: r.check.as_str().into(), passed: r.passed, informational: r.informational })
        .collect()
}

const KEY_WIDTH: usize = 20;

fn line(out: &mut String, key: &str, value: &str) {
    let pad = KEY_WIDTH.saturating_sub(key.chars().count()).max(1);
    out.push_str(key);
    out.push_str(&" ".repeat(pad));
    out.push_str(value);
    out.push('\n');
}

pub fn render_text(r: &Report) -> String {
    let mut out = String::new();
    line(&mut out, "command", &r.command);
    if let Some(i) = &r.input {
        line(&mut out, "input", i);
    }
    if !r.generators.is_empty() {
        line(&mut out, "generators", &r.generators.join(" "));
    }
    if let Some(c) = r.class_cap {
        line(&mut out, "class cap", &c.to_string());
    }
    if !r.dims.is_empty() {
        line(&mut out, "dims", &join(&r.dims, " "));
    }
    if !r.lcs_dims.is_empty() {
        line(&mut out, "lcs dims", &join(&r.lcs_dims, " "));
    }
    if r.class_cap.is_some() {
        let degrees = if r.relation_degrees.is_empty() { "none".to_string() } else { join(&r.relation_degrees, " ") };
        line(&mut out, "relation degrees", &degrees);
    }
    for e in &r.results {
        line(&mut out, &e.key, &e.value);
    }
    for v in &r.verdicts {
        line(&mut out, "verdict", &format!("{}: {}", v.mode, v.outcome));
        for w in &v.witnesses {
            line(&mut out, "  witness", &format!("{}: {}", w.check, w.summary));
            if let Some(c) = &w.massey_class {
                line(&mut out, "    class", c);
            }
        }
        for w in &v.notes {
            line(&mut out, "  note", &format!("{}: {}", w.check, w.summary));
        }
    }
    if !r.checks_run.is_empty() {
        let runs: Vec<String> = r
            .checks_run
            .iter()
            .map(|c| {
                let status = if c.passed { "pass" } else { "fail" };
                if c.informational {
                    format!("{} ({status}, informational)", c.check)
                } else {
                    format!("{} ({status})", c.check)
                }
            })
            .collect();
        line(&mut out, "checks run", &runs.join(", "));
    }
    line(&mut out, "caveat", &r.caveat);
    out
}

pub fn render_json(r: &Report) -> String {
    let mut s = serde_json::to_string_pretty(r).expect("reports serialize");
    s.push('\n');
    s
}

pub fn render_json_all(rs: &[Report]) -> String {
    let mut s = serde_json::to_string_pretty(rs).expect("reports serialize");
    s.push('\n');
    s
}

pub fn parse_json(s: &str) -> Result<Report, serde_json::Error> {
    serde_json::from_str(s)
}
