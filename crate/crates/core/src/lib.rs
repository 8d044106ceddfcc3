//! Pseudo-spectral simulation of the two-dimensional parabolic-parabolic
//! Keller–Segel system
//!
//! ```text
//! ∂_t u = Δu − ∇·(u∇v)
//! ∂_t v = Δv − λv + u
//! ```
//!
//! on a periodic box, with Lyapunov and cut-off diagnostics, a Picard
//! harness for the Duhamel map and numerical checks of the functional
//! inequalities behind the critical-mass theory.

pub mod diagnostics;
pub mod error;
pub mod experiment;
pub mod field;
pub mod grid;
pub mod oracle;
pub mod snapshot;
pub mod solver;
pub mod spectral;

pub use error::{Error, Result};
pub use field::ScalarField;
pub use grid::GridSpec;
pub use solver::{run, RunConfig, Scheme, SimState};
