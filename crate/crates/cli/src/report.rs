use std::fmt::Write as _;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn from_bool(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Row {
    pub check: String,
    pub status: Status,
    pub summary: String,
}

/// Output of one command. Row order is the order checks were made, which
/// is deterministic for a fixed input and seed.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub results: Vec<Row>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
}

impl Report {
    pub fn new(command: Vec<String>) -> Report {
        Report { command, seed: None, results: vec![], timing_ms: None }
    }

    pub fn push(&mut self, check: impl Into<String>, ok: bool, summary: impl Into<String>) {
        self.results.push(Row { check: check.into(), status: Status::from_bool(ok), summary: summary.into() });
    }

    pub fn info(&mut self, check: impl Into<String>, summary: impl ToString) {
        self.push(check, true, summary.to_string());
    }

    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.status == Status::Pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("check\tstatus\tsummary\n");
        for r in &self.results {
            let status = if r.status == Status::Pass { "pass" } else { "fail" };
            let _ = writeln!(out, "{}\t{status}\t{}", r.check, r.summary.replace(['\t', '\n'], " "));
        }
        if let Some(seed) = self.seed {
            let _ = writeln!(out, "# seed\t{seed}");
        }
        if let Some(ms) = self.timing_ms {
            let _ = writeln!(out, "# timing_ms\t{ms}");
        }
        out
    }
}
