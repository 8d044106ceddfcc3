//! Functionals, cut-off quantities and identity residuals evaluated on
//! simulation snapshots.

pub mod cutoff;
pub mod exterior;
pub mod functionals;
pub mod identity;
pub mod interior;
pub mod row;

pub use cutoff::{profile_constants, CutoffKind, CutoffSpec, ProfileConstants};
pub use exterior::{
    exterior_l2, exterior_mass, exterior_norms, interior_mass, local_min_u, probe_ring,
    DiskProbe, ExteriorMass, ExteriorNorms, EXTERIOR_P,
};
pub use functionals::{
    dissipation_dtilde, fm_rhs, functional_fm, lyapunov_l, lyapunov_lm, FmRhs,
};
pub use identity::{
    fill_identity_residuals, fm_identity_residual, fm_monotonicity_check, fm_time_derivative,
    identity_residual_scale, identity_residuals_abs, MonotonicityReport, MonotonicityViolation,
};
pub use interior::{
    interior_balance, interior_entropy, interior_identity_residual, interior_lyapunov_lr,
    InteriorBalance,
};
pub use row::{csv_header, csv_line, write_csv, DiagnosticsRow};
