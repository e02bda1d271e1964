//! Per-check records and run reports.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub suite: String,
    pub id: String,
    /// The identity being verified, in plain notation.
    pub anchor: String,
    pub status: Status,
    /// Largest coefficient magnitude of the residual (0 for exact success).
    pub residual: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    /// `(order, coefficient text)` rows for Laurent comparisons.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub laurent: Vec<(i32, String)>,
}

impl Check {
    pub fn new(suite: &str, id: impl Into<String>, anchor: impl Into<String>, ok: bool) -> Self {
        Check {
            suite: suite.into(),
            id: id.into(),
            anchor: anchor.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            residual: 0.0,
            detail: None,
            laurent: Vec::new(),
        }
    }

    /// Passes iff `residual == 0`.
    pub fn exact(suite: &str, id: impl Into<String>, anchor: impl Into<String>, residual: f64) -> Self {
        let mut c = Check::new(suite, id, anchor, residual == 0.0);
        c.residual = residual;
        c
    }

    /// Passes iff `residual < tol`.
    pub fn within(
        suite: &str,
        id: impl Into<String>,
        anchor: impl Into<String>,
        residual: f64,
        tol: f64,
    ) -> Self {
        let mut c = Check::new(suite, id, anchor, residual < tol);
        c.residual = residual;
        c
    }

    pub fn with_residual(mut self, r: f64) -> Self {
        self.residual = r;
        self
    }

    pub fn with_detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteTiming {
    pub suite: String,
    pub wall_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub engine: String,
    pub version: String,
    pub ring: String,
    pub modes: (usize, usize),
    pub seed: u64,
    pub checks: Vec<Check>,
    pub summary: Summary,
    /// Wall times; excluded from golden comparisons.
    #[serde(default)]
    pub timings: Vec<SuiteTiming>,
}

impl RunReport {
    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    /// The report without timing data, for reproducibility comparisons.
    pub fn without_timings(&self) -> RunReport {
        RunReport { timings: Vec::new(), ..self.clone() }
    }
}

pub fn summarize(checks: &[Check]) -> Summary {
    let passed = checks.iter().filter(|c| c.passed()).count();
    Summary { total: checks.len(), passed, failed: checks.len() - passed }
}
