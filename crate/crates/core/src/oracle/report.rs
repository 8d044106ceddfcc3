use std::io::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

/// Both sides of one inequality on one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialResult {
    pub trial_id: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub params: String,
}

impl TrialResult {
    pub fn margin(&self) -> f64 {
        self.rhs - self.lhs
    }

    /// Violation beyond roundoff: `margin < −1e−12·(|LHS| + |RHS|)`.
    pub fn violates(&self) -> bool {
        self.margin() < -1e-12 * (self.lhs.abs() + self.rhs.abs())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InequalityReport {
    pub inequality: String,
    pub family: String,
    pub seed: u64,
    pub trials: Vec<TrialResult>,
    /// Empirical constants, each the smallest value making every trial pass.
    pub fitted: Vec<(String, f64)>,
}

impl InequalityReport {
    pub fn new(inequality: &str, family: &str, seed: u64, trials: Vec<TrialResult>) -> Self {
        Self {
            inequality: inequality.to_string(),
            family: family.to_string(),
            seed,
            trials,
            fitted: Vec::new(),
        }
    }

    pub fn violations(&self) -> usize {
        self.trials.iter().filter(|t| t.violates()).count()
    }

    pub fn worst(&self) -> Option<&TrialResult> {
        self.trials
            .iter()
            .min_by(|a, b| a.margin().total_cmp(&b.margin()))
    }

    pub fn worst_margin(&self) -> f64 {
        self.worst().map_or(f64::INFINITY, |t| t.margin())
    }

    pub fn fitted(&self, name: &str) -> Option<f64> {
        self.fitted.iter().find(|(n, _)| n == name).map(|&(_, v)| v)
    }

    /// Appends the reports of `other` for the same inequality.
    pub fn merge(mut self, other: InequalityReport) -> Self {
        let offset = self.trials.len();
        self.trials.extend(other.trials.into_iter().map(|mut t| {
            t.trial_id += offset;
            t
        }));
        self
    }
}

pub const CSV_HEADER: &str = "inequality,trial_id,lhs,rhs,margin,params";

pub fn write_reports_csv(path: &Path, reports: &[InequalityReport]) -> Result<()> {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in reports {
        for t in &r.trials {
            out.push_str(&format!(
                "{},{},{:.16e},{:.16e},{:.16e},\"{}\"\n",
                r.inequality,
                t.trial_id,
                t.lhs,
                t.rhs,
                t.margin(),
                t.params.replace('"', "'")
            ));
        }
    }
    let mut f = std::fs::File::create(path).map_err(|source| Error::Unwritable {
        path: path.to_path_buf(),
        source,
    })?;
    f.write_all(out.as_bytes())?;
    Ok(())
}
