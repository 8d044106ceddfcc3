//! Time integration of the coupled system in its mild (Duhamel) form.

pub mod blowup;
pub mod config;
pub mod picard;
pub mod run;
pub mod state;
pub mod stepper;

pub use blowup::{blowup_check, BlowupCriterion, BlowupReason, BlowupStatus};
pub use config::{RunConfig, Scheme, DEFAULT_SUP_FACTOR};
pub use picard::{
    continuous_dependence_probe, log_spaced, picard_solve, picard_trajectory, weighted_xt_norms,
    PicardConfig, PicardReport,
    Trajectory,
};
pub use run::{run, RunOutcome, RunOutput};
pub use state::SimState;
pub use stepper::{duhamel_step, rhs_v, Integrator};
