//! Discrete checks of the functional inequalities used by the analysis.

pub mod checks;
pub mod family;
pub mod report;
pub mod sharpness;
pub mod verify;

pub use checks::{
    dirichlet_energy, fit_cubic, gn_check, heat_lplq_check, nss_check, required_c_eps, tm_check,
    tm_check_with, tm_sides, weighted_l2l3_check, weighted_terms, GnTerms, HeatReport, TmSides,
    WeightedTerms, MAX_EXP_ARGUMENT,
};
pub use family::{moser_function, FamilyKind, Trial, TrialDomain, TrialFamily};
pub use report::{write_reports_csv, InequalityReport, TrialResult, CSV_HEADER};
pub use sharpness::{moser_eps_ladder, moser_trials, tm_sharpness_probe, MoserSample, SharpnessProbe};
pub use verify::{verify_inequalities, verify_on, OracleConfig};
