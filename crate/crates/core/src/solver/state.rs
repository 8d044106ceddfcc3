use crate::error::{Error, Result};
use crate::field::ScalarField;

/// Snapshot `(t, u, v)` of the coupled system.
#[derive(Debug, Clone, PartialEq)]
pub struct SimState {
    pub t: f64,
    pub u: ScalarField,
    pub v: ScalarField,
    initial_mass: f64,
}

impl SimState {
    pub fn new(t: f64, u: ScalarField, v: ScalarField) -> Result<Self> {
        u.grid().check_same(v.grid())?;
        u.check_finite()?;
        v.check_finite()?;
        let initial_mass = u.integrate_raw();
        Ok(Self {
            t,
            u,
            v,
            initial_mass,
        })
    }

    /// Successor state that keeps the mass recorded at construction.
    pub(crate) fn evolved(&self, t: f64, u: ScalarField, v: ScalarField) -> Self {
        Self {
            t,
            u,
            v,
            initial_mass: self.initial_mass,
        }
    }

    pub fn initial_mass(&self) -> f64 {
        self.initial_mass
    }

    pub fn mass(&self) -> f64 {
        self.u.integrate_raw()
    }

    pub fn mass_drift(&self) -> f64 {
        (self.mass() - self.initial_mass).abs() / self.initial_mass.abs().max(f64::MIN_POSITIVE)
    }

    pub(crate) fn require_nonnegative_data(&self) -> Result<()> {
        for (name, f) in [("u0", &self.u), ("v0", &self.v)] {
            if f.min() < 0.0 {
                return Err(Error::InitialData(format!("{name} has negative values")));
            }
            if f.max() <= 0.0 {
                return Err(Error::InitialData(format!("{name} vanishes identically")));
            }
        }
        Ok(())
    }
}
