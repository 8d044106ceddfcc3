use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::GridSpec;

/// Exponential time-differencing scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scheme {
    /// Nonlinearity frozen at the step start; first order.
    Etd1,
    /// Cox–Matthews predictor-corrector; second order.
    Etd2,
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "ETD1" => Ok(Scheme::Etd1),
            "ETD2" => Ok(Scheme::Etd2),
            _ => Err(Error::config("scheme", format!("unknown scheme `{s}`"))),
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scheme::Etd1 => write!(f, "ETD1"),
            Scheme::Etd2 => write!(f, "ETD2"),
        }
    }
}

pub const DEFAULT_SUP_FACTOR: f64 = 1e4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub grid: GridSpec,
    pub lambda: f64,
    pub dt: f64,
    pub t_end: f64,
    pub scheme: Scheme,
    /// 2/3-rule filtering of the chemotactic flux.
    pub dealias: bool,
    /// `false` switches off the flux term, leaving `u` under pure heat flow.
    pub chemotaxis: bool,
    /// `None` resolves to `1e4 · ‖u₀‖_∞` when a run starts.
    pub blowup_sup_threshold: Option<f64>,
    pub blowup_tail_threshold: f64,
    /// Negativity tolerance relative to `max u`.
    pub neg_tolerance: f64,
    pub diag_every: usize,
    /// Steps between stored snapshots; `0` keeps only the first and last.
    pub snapshot_every: usize,
    /// Cut-off radii recorded in every diagnostics row; each below `L/32`.
    pub radii: Vec<f64>,
    /// Largest admissible `∫_{|x|>L/4} u₀`, keeping the periodic images of
    /// the initial mass negligible.
    pub tail_mass_tolerance: f64,
}

impl RunConfig {
    pub fn new(grid: GridSpec) -> Self {
        Self {
            grid,
            lambda: 0.0,
            dt: 1e-3,
            t_end: 10.0,
            scheme: Scheme::Etd2,
            dealias: false,
            chemotaxis: true,
            blowup_sup_threshold: None,
            blowup_tail_threshold: 0.1,
            neg_tolerance: 1e-8,
            diag_every: 100,
            snapshot_every: 0,
            radii: Vec::new(),
            tail_mass_tolerance: 1e-10,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |key: &str, msg: String| Err(Error::config(key, msg));
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return bad("lambda", format!("must be >= 0, got {}", self.lambda));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return bad("dt", format!("must be > 0, got {}", self.dt));
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return bad("t_end", format!("must be > 0, got {}", self.t_end));
        }
        if let Some(s) = self.blowup_sup_threshold {
            if !(s > 0.0) {
                return bad("blowup_sup_threshold", format!("must be > 0, got {s}"));
            }
        }
        if !(self.blowup_tail_threshold > 0.0) {
            return bad(
                "blowup_tail_threshold",
                format!("must be > 0, got {}", self.blowup_tail_threshold),
            );
        }
        if !(self.neg_tolerance > 0.0) {
            return bad("neg_tolerance", format!("must be > 0, got {}", self.neg_tolerance));
        }
        if self.diag_every == 0 {
            return bad("diag_every", "must be at least 1".into());
        }
        let r_max = self.grid.box_length() / 32.0;
        if let Some(r) = self.radii.iter().find(|&&r| !(r > 0.0 && r < r_max)) {
            return bad("radii", format!("radius {r} must lie in (0, L/32 = {r_max})"));
        }
        if !(self.tail_mass_tolerance >= 0.0) {
            return bad("tail_mass_tolerance", "must be >= 0".into());
        }
        Ok(())
    }

    /// Number of steps needed to reach `t_end`, the last one possibly short.
    pub fn step_count(&self) -> usize {
        let k = (self.t_end / self.dt - 1e-9).ceil();
        k.max(1.0) as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_count_handles_roundoff() {
        let mut cfg = RunConfig::new(GridSpec::new(8, 1.0).unwrap());
        cfg.dt = 1e-3;
        cfg.t_end = 10.0;
        assert_eq!(cfg.step_count(), 10_000);
        cfg.t_end = 0.0105;
        assert_eq!(cfg.step_count(), 11);
    }

    #[test]
    fn validation_names_the_field() {
        let mut cfg = RunConfig::new(GridSpec::new(8, 1.0).unwrap());
        cfg.dt = 0.0;
        assert!(cfg.validate().unwrap_err().to_string().contains("dt"));
    }

    #[test]
    fn scheme_parse() {
        assert_eq!("etd2".parse::<Scheme>().unwrap(), Scheme::Etd2);
        assert!("rk4".parse::<Scheme>().is_err());
    }
}
