use std::time::Instant;

use serde::Serialize;

use crate::config::RunConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    /// Passes when the residual is at most the tolerance.
    AtMost,
    /// Witness check: passes when the value is at least the threshold.
    AtLeast,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub name: String,
    /// `None` when the check could not be evaluated; see `error`.
    pub residual: Option<f64>,
    pub tolerance: f64,
    pub bound: Bound,
    pub pass: bool,
    #[serde(rename = "N")]
    pub lattice: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seconds: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceRow {
    pub check: String,
    #[serde(rename = "N")]
    pub lattice: usize,
    pub residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub delta_t_sec: f64,
    pub rapidity: f64,
    pub leakage: f64,
    /// Probability on lattice cells outside the shadow.
    pub outside: f64,
    #[serde(rename = "N")]
    pub lattice: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub suite: String,
    pub config: RunConfig,
    pub checks: Vec<CheckRecord>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub convergence: Vec<ConvergenceRow>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub sweep: Vec<SweepRow>,
    pub all_pass: bool,
}

/// Collects checks for one suite run.
pub struct Recorder {
    report: RunReport,
    timing: bool,
}

impl Recorder {
    pub fn new(suite: &str, config: &RunConfig, timing: bool) -> Self {
        Self {
            report: RunReport {
                suite: suite.to_string(),
                config: config.clone(),
                checks: Vec::new(),
                convergence: Vec::new(),
                sweep: Vec::new(),
                all_pass: true,
            },
            timing,
        }
    }

    /// Runs `f` and records its value against the bound.
    pub fn check<F>(&mut self, name: &str, lattice: usize, tolerance: f64, bound: Bound, f: F) -> Option<f64>
    where
        F: FnOnce() -> minkabs::Result<f64>,
    {
        let start = Instant::now();
        let outcome = f();
        let seconds = self.timing.then(|| start.elapsed().as_secs_f64());
        let (residual, error) = match outcome {
            Ok(v) => (Some(v), None),
            Err(e) => (None, Some(e.to_string())),
        };
        let pass = residual.is_some_and(|v| match bound {
            Bound::AtMost => v <= tolerance,
            Bound::AtLeast => v >= tolerance,
        });
        self.report.all_pass &= pass;
        self.report.checks.push(CheckRecord {
            name: name.to_string(),
            residual,
            tolerance,
            bound,
            pass,
            lattice,
            seconds,
            error,
        });
        residual
    }

    pub fn convergence(&mut self, check: &str, lattice: usize, residual: f64) {
        self.report.convergence.push(ConvergenceRow {
            check: check.to_string(),
            lattice,
            residual,
        });
    }

    pub fn sweep(&mut self, row: SweepRow) {
        self.report.sweep.push(row);
    }

    pub fn finish(self) -> RunReport {
        self.report
    }
}

impl RunReport {
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }

    /// Sweep rows when present, otherwise the check table.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        if self.sweep.is_empty() {
            out.push_str("name,residual,tolerance,bound,pass,N\n");
            for c in &self.checks {
                let residual = c.residual.map(|r| format!("{r:e}")).unwrap_or_default();
                let bound = match c.bound {
                    Bound::AtMost => "at_most",
                    Bound::AtLeast => "at_least",
                };
                out.push_str(&format!(
                    "{},{residual},{:e},{bound},{},{}\n",
                    c.name, c.tolerance, c.pass, c.lattice
                ));
            }
        } else {
            out.push_str("delta_t_sec,rapidity,leakage,N\n");
            for r in &self.sweep {
                out.push_str(&format!(
                    "{},{},{:e},{}\n",
                    r.delta_t_sec, r.rapidity, r.leakage, r.lattice
                ));
            }
        }
        out
    }
}
