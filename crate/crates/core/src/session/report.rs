//! Task results and their text and JSON-lines renderings.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    /// The task produced a verdict.
    Verdict,
    Unknown,
    Inconsistent,
    ResourceCap,
    InputError,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Verdict => 0,
            Status::InputError => 1,
            Status::Unknown => 2,
            Status::Inconsistent => 3,
            Status::ResourceCap => 4,
        }
    }

    fn priority(self) -> u8 {
        match self {
            Status::Verdict => 0,
            Status::Unknown => 1,
            Status::ResourceCap => 2,
            Status::InputError => 3,
            Status::Inconsistent => 4,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fact {
    pub key: String,
    pub value: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub tag: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stats {
    pub micros: u64,
    pub bases: u64,
    pub spairs: u64,
    pub prefilter_agree: u64,
    pub prefilter_disagree: u64,
    pub prefilter_skipped: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskResult {
    pub task: String,
    pub status: Status,
    pub summary: String,
    pub facts: Vec<Fact>,
    pub assertions: Vec<String>,
    /// Only present in verbose runs, which are therefore not reproducible
    /// byte for byte.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stats: Option<Stats>,
}

impl TaskResult {
    pub fn new(task: impl Into<String>) -> Self {
        TaskResult {
            task: task.into(),
            status: Status::Verdict,
            summary: String::new(),
            facts: Vec::new(),
            assertions: Vec::new(),
            stats: None,
        }
    }

    pub fn fact(&mut self, key: impl Into<String>, value: impl ToString) {
        self.tagged(key, value, "");
    }

    pub fn tagged(&mut self, key: impl Into<String>, value: impl ToString, tag: &str) {
        self.facts.push(Fact {
            key: key.into(),
            value: value.to_string(),
            tag: tag.into(),
        });
    }

    pub fn assert(&mut self, a: impl Into<String>) {
        let a = a.into();
        if !self.assertions.contains(&a) {
            self.assertions.push(a);
        }
    }

    /// First fact with the given key.
    pub fn get(&self, key: &str) -> Option<&str> {
        self.facts
            .iter()
            .find(|f| f.key == key)
            .map(|f| f.value.as_str())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub results: Vec<TaskResult>,
}

impl Report {
    /// Inconsistency beats input errors, which beat resource caps, which
    /// beat unknown verdicts.
    pub fn exit_code(&self) -> i32 {
        self.results
            .iter()
            .map(|r| r.status)
            .max_by_key(|s| s.priority())
            .map_or(0, Status::exit_code)
    }

    pub fn from_json_lines(text: &str) -> Result<Report> {
        let results = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| serde_json::from_str(l).map_err(|e| Error::InvalidInput(e.to_string())))
            .collect::<Result<Vec<_>>>()?;
        Ok(Report { results })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    JsonLines,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(Format::Text),
            "json-lines" => Ok(Format::JsonLines),
            other => Err(Error::InvalidInput(format!("unknown format `{other}`"))),
        }
    }
}

pub fn render_report(r: &Report, format: Format) -> String {
    let mut out = String::new();
    match format {
        Format::JsonLines => {
            for t in &r.results {
                out.push_str(&serde_json::to_string(t).expect("serializable"));
                out.push('\n');
            }
        }
        Format::Text => {
            for (i, t) in r.results.iter().enumerate() {
                if i > 0 {
                    out.push('\n');
                }
                render_text(&mut out, t);
            }
        }
    }
    out
}

fn render_text(out: &mut String, t: &TaskResult) {
    let status = serde_json::to_value(t.status).expect("serializable");
    writeln!(out, "task {} [{}]", t.task, status.as_str().unwrap_or("?")).unwrap();
    for f in &t.facts {
        if f.tag.is_empty() {
            writeln!(out, "  {}: {}", f.key, f.value).unwrap();
        } else {
            writeln!(out, "  {}: {}  {}", f.key, f.value, f.tag).unwrap();
        }
    }
    for a in &t.assertions {
        writeln!(out, "  assumed: {a}").unwrap();
    }
    if let Some(s) = &t.stats {
        writeln!(
            out,
            "  stats: {} us, {} bases, {} S-pairs, prefilter {}/{}/{} (agree/disagree/skipped)",
            s.micros, s.bases, s.spairs, s.prefilter_agree, s.prefilter_disagree, s.prefilter_skipped
        )
        .unwrap();
    }
    writeln!(out, "  => {}", t.summary).unwrap();
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut a = TaskResult::new("ledger a");
        a.tagged("upper bound", "2 from 2 generators", "[ara]");
        a.assert("A: domain");
        a.summary = "supht(a) = 2, D(a) NOT AFFINE".into();
        let mut b = TaskResult::new("surface cfg");
        b.status = Status::Unknown;
        b.summary = "no conclusion".into();
        Report {
            results: vec![a, b],
        }
    }

    #[test]
    fn json_lines_round_trip() {
        let r = sample();
        let text = render_report(&r, Format::JsonLines);
        assert_eq!(text.lines().count(), 2);
        assert_eq!(Report::from_json_lines(&text).unwrap(), r);
    }

    #[test]
    fn empty_report() {
        let r = Report::default();
        assert_eq!(render_report(&r, Format::Text), "");
        assert_eq!(render_report(&r, Format::JsonLines), "");
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn exit_code_precedence() {
        let mut r = sample();
        assert_eq!(r.exit_code(), 2);
        r.results[0].status = Status::ResourceCap;
        assert_eq!(r.exit_code(), 4);
        r.results[1].status = Status::Inconsistent;
        assert_eq!(r.exit_code(), 3);
    }

    #[test]
    fn text_carries_every_fact() {
        let text = render_report(&sample(), Format::Text);
        assert!(text.contains("upper bound: 2 from 2 generators  [ara]"));
        assert!(text.contains("assumed: A: domain"));
        assert!(text.contains("=> supht(a) = 2, D(a) NOT AFFINE"));
    }
}
