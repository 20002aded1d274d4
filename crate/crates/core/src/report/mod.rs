//! Verification reports: named verdicts grouped by topic, rendered as JSON or Markdown.

mod tasks;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

pub use tasks::{
    certify_files, euler_section, family_sections, ga_section, involution_section, multiplicity_section,
    nonnormal_cubic_section, open_question_section, quadric_sections, verify_all, FamilyRun, VerifyAllOptions,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "reason", rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped(String),
    /// A resource bound stopped the computation; neither pass nor fail.
    Aborted(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub name: String,
    #[serde(flatten)]
    pub status: Status,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl Verdict {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Verdict { name: name.into(), status: if passed { Status::Pass } else { Status::Fail }, detail: detail.into() }
    }

    pub fn skipped(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Verdict { name: name.into(), status: Status::Skipped(reason.into()), detail: String::new() }
    }

    pub fn aborted(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Verdict { name: name.into(), status: Status::Aborted(reason.into()), detail: String::new() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Section {
    pub topic: String,
    pub verdicts: Vec<Verdict>,
}

impl Section {
    pub fn new(topic: impl Into<String>) -> Self {
        Section { topic: topic.into(), verdicts: Vec::new() }
    }

    pub fn push(&mut self, v: Verdict) {
        self.verdicts.push(v);
    }

    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| !matches!(v.status, Status::Fail | Status::Aborted(_)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub task: String,
    pub version: String,
    pub domain: String,
    pub inputs: BTreeMap<String, String>,
    pub sections: Vec<Section>,
    /// Computed values of a query subcommand; serialized as top-level keys.
    #[serde(skip)]
    pub result: Option<serde_json::Map<String, serde_json::Value>>,
    /// Wall-clock milliseconds per section; only filled on request so that
    /// reports stay byte-identical across runs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, u64>>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub aborted: usize,
}

impl VerificationReport {
    pub fn new(task: impl Into<String>, domain: impl Into<String>) -> Self {
        VerificationReport {
            task: task.into(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            domain: domain.into(),
            inputs: BTreeMap::new(),
            sections: Vec::new(),
            result: None,
            timings_ms: None,
        }
    }

    pub fn input(mut self, key: &str, value: impl ToString) -> Self {
        self.inputs.insert(key.to_string(), value.to_string());
        self
    }

    pub fn tally(&self) -> Tally {
        let mut t = Tally::default();
        for v in self.sections.iter().flat_map(|s| &s.verdicts) {
            match v.status {
                Status::Pass => t.passed += 1,
                Status::Fail => t.failed += 1,
                Status::Skipped(_) => t.skipped += 1,
                Status::Aborted(_) => t.aborted += 1,
            }
        }
        t
    }

    /// 0 when nothing failed or aborted, 1 on a failure, 3 on an abort without failures.
    pub fn exit_code(&self) -> i32 {
        let t = self.tally();
        if t.failed > 0 {
            1
        } else if t.aborted > 0 {
            3
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v["summary"] = serde_json::to_value(self.tally()).expect("tally serializes");
        if let Some(result) = &self.result {
            for (k, val) in result {
                v[k] = val.clone();
            }
        }
        serde_json::to_string_pretty(&v).expect("report serializes")
    }

    pub fn to_markdown(&self) -> String {
        let esc = |s: &str| s.replace('|', "\\|").replace('\n', " ");
        let mut out = String::new();
        let _ = writeln!(out, "# {}\n", self.task);
        let _ = writeln!(out, "- version: {}", self.version);
        let _ = writeln!(out, "- coefficient domain: {}", self.domain);
        for (k, v) in &self.inputs {
            let _ = writeln!(out, "- {k}: `{v}`");
        }
        if let Some(result) = &self.result {
            let _ = writeln!(out, "\n## Result\n");
            for (k, val) in result {
                let shown = match val {
                    serde_json::Value::String(s) => s.clone(),
                    other => other.to_string(),
                };
                let _ = writeln!(out, "- {k}: {shown}");
            }
        }
        for s in &self.sections {
            let _ = writeln!(out, "\n## {}\n", s.topic);
            let _ = writeln!(out, "| check | verdict | detail |\n|---|---|---|");
            for v in &s.verdicts {
                let (verdict, extra) = match &v.status {
                    Status::Pass => ("pass".to_string(), String::new()),
                    Status::Fail => ("**FAIL**".to_string(), String::new()),
                    Status::Skipped(r) => ("skipped".to_string(), r.clone()),
                    Status::Aborted(r) => ("**ABORTED**".to_string(), r.clone()),
                };
                let detail = [extra.as_str(), v.detail.as_str()]
                    .iter()
                    .filter(|s| !s.is_empty())
                    .copied()
                    .collect::<Vec<_>>()
                    .join("; ");
                let _ = writeln!(out, "| {} | {} | {} |", esc(&v.name), verdict, esc(&detail));
            }
        }
        if let Some(t) = &self.timings_ms {
            let _ = writeln!(out, "\n## Timings\n");
            for (k, ms) in t {
                let _ = writeln!(out, "- {k}: {ms} ms");
            }
        }
        let t = self.tally();
        let _ = writeln!(
            out,
            "\n**Summary:** {} passed, {} failed, {} skipped, {} aborted.",
            t.passed, t.failed, t.skipped, t.aborted
        );
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_and_rendering() {
        let mut r = VerificationReport::new("demo", "Q").input("d", 4);
        let mut s = Section::new("topic");
        s.push(Verdict::new("a | b", true, ""));
        s.push(Verdict::skipped("c", "not applicable"));
        r.sections.push(s.clone());
        assert_eq!(r.exit_code(), 0);
        r.sections[0].push(Verdict::aborted("e", "too many terms"));
        assert_eq!(r.exit_code(), 3);
        r.sections[0].push(Verdict::new("f", false, "mismatch"));
        assert_eq!(r.exit_code(), 1);
        let md = r.to_markdown();
        assert!(md.contains("a \\| b"));
        assert!(md.contains("1 passed, 1 failed, 1 skipped, 1 aborted"));
        let json: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(json["sections"][0]["verdicts"][1]["status"], "skipped");
        assert_eq!(json["sections"][0]["verdicts"][1]["reason"], "not applicable");
        assert_eq!(json["summary"]["failed"], 1);
        assert_eq!(r.to_json(), r.clone().to_json());
    }
}
