use crate::error::{Error, Result};
use crate::grid::GridSpec;

/// Real-valued function sampled on a [`GridSpec`], stored row-major
/// (`values[iy * n + ix]`).
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    grid: GridSpec,
    values: Vec<f64>,
}

impl ScalarField {
    pub fn new(grid: GridSpec, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "expected {} values, got {}",
                grid.len(),
                values.len()
            )));
        }
        let f = Self { grid, values };
        f.check_finite()?;
        Ok(f)
    }

    pub(crate) fn from_vec_unchecked(grid: GridSpec, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self { grid, values }
    }

    pub fn zeros(grid: GridSpec) -> Self {
        Self::constant(grid, 0.0)
    }

    pub fn constant(grid: GridSpec, c: f64) -> Self {
        Self {
            grid,
            values: vec![c; grid.len()],
        }
    }

    /// Sample `f(x, y)` at every grid point.
    pub fn from_fn(grid: GridSpec, mut f: impl FnMut(f64, f64) -> f64) -> Self {
        let n = grid.n();
        let mut values = Vec::with_capacity(grid.len());
        for iy in 0..n {
            let y = grid.coord(iy);
            for ix in 0..n {
                values.push(f(grid.coord(ix), y));
            }
        }
        Self { grid, values }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.values
    }

    #[inline]
    pub fn at(&self, ix: usize, iy: usize) -> f64 {
        self.values[iy * self.grid.n() + ix]
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn check_finite(&self) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(Error::NonFinite)
        }
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Apply `f(x, y, value)` pointwise.
    pub fn map_xy(&self, mut f: impl FnMut(f64, f64, f64) -> f64) -> Self {
        let n = self.grid.n();
        let mut values = Vec::with_capacity(self.values.len());
        for iy in 0..n {
            let y = self.grid.coord(iy);
            for ix in 0..n {
                values.push(f(self.grid.coord(ix), y, self.values[iy * n + ix]));
            }
        }
        Self {
            grid: self.grid,
            values,
        }
    }

    pub fn zip_map(&self, other: &ScalarField, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        self.grid.check_same(&other.grid)?;
        Ok(Self {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn add(&self, other: &ScalarField) -> Result<Self> {
        self.zip_map(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &ScalarField) -> Result<Self> {
        self.zip_map(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &ScalarField) -> Result<Self> {
        self.zip_map(other, |a, b| a * b)
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map(|v| c * v)
    }

    /// Midpoint quadrature `h² Σ f`.
    pub fn integrate(&self) -> Result<f64> {
        self.check_finite()?;
        Ok(self.integrate_raw())
    }

    pub(crate) fn integrate_raw(&self) -> f64 {
        self.grid.cell_area() * self.values.iter().sum::<f64>()
    }

    /// `(∫|f|^p)^{1/p}`, or `max |f|` for `p = ∞`.
    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        if !(p >= 1.0) {
            return Err(Error::InvalidExponent(p));
        }
        self.check_finite()?;
        Ok(self.lp_raw(p))
    }

    pub(crate) fn lp_raw(&self, p: f64) -> f64 {
        if p.is_infinite() {
            self.sup_abs()
        } else if p == 1.0 {
            self.grid.cell_area() * self.values.iter().map(|v| v.abs()).sum::<f64>()
        } else if p == 2.0 {
            self.l2_raw()
        } else {
            let s: f64 = self.values.iter().map(|v| v.abs().powf(p)).sum();
            (self.grid.cell_area() * s).powf(1.0 / p)
        }
    }

    pub(crate) fn l2_raw(&self) -> f64 {
        (self.grid.cell_area() * self.values.iter().map(|v| v * v).sum::<f64>()).sqrt()
    }

    pub fn sup_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// `∫ f·g`.
    pub fn inner(&self, other: &ScalarField) -> Result<f64> {
        self.grid.check_same(&other.grid)?;
        Ok(self.grid.cell_area()
            * self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a * b)
                .sum::<f64>())
    }

    /// `∫ |min(f, 0)|`.
    pub fn negative_mass(&self) -> f64 {
        self.grid.cell_area() * self.values.iter().map(|v| (-v).max(0.0)).sum::<f64>()
    }

    /// `∫_{mask} f` over the cells where `keep(x, y)` holds.
    pub fn integrate_where(&self, mut keep: impl FnMut(f64, f64) -> bool) -> f64 {
        let n = self.grid.n();
        let mut s = 0.0;
        for iy in 0..n {
            let y = self.grid.coord(iy);
            for ix in 0..n {
                if keep(self.grid.coord(ix), y) {
                    s += self.values[iy * n + ix];
                }
            }
        }
        self.grid.cell_area() * s
    }
}

/// Heat kernel `G_t(x) = (4πt)^{-1} exp(-|x-c|²/(4t))` with unit mass.
pub fn heat_kernel(grid: GridSpec, t: f64, center: (f64, f64)) -> ScalarField {
    let c = 1.0 / (4.0 * std::f64::consts::PI * t);
    ScalarField::from_fn(grid, |x, y| {
        let r2 = (x - center.0).powi(2) + (y - center.1).powi(2);
        c * (-r2 / (4.0 * t)).exp()
    })
}

/// Gaussian of total mass `mass` and standard deviation `sigma`; the heat
/// kernel `G_t` is the case `sigma² = 2t`.
pub fn gaussian(grid: GridSpec, mass: f64, sigma: f64, center: (f64, f64)) -> ScalarField {
    let s2 = sigma * sigma;
    let c = mass / (2.0 * std::f64::consts::PI * s2);
    ScalarField::from_fn(grid, |x, y| {
        let r2 = (x - center.0).powi(2) + (y - center.1).powi(2);
        c * (-r2 / (2.0 * s2)).exp()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn non_finite_rejected() {
        let g = GridSpec::new(8, 1.0).unwrap();
        let mut v = vec![0.0; 64];
        v[3] = f64::NAN;
        assert!(matches!(ScalarField::new(g, v), Err(Error::NonFinite)));
        let f = ScalarField::from_vec_unchecked(g, vec![f64::INFINITY; 64]);
        assert_eq!(f.integrate().unwrap_err().to_string(), "non-finite field");
    }

    #[test]
    fn exponent_below_one() {
        let g = GridSpec::new(8, 1.0).unwrap();
        let f = ScalarField::constant(g, 1.0);
        assert!(f.lp_norm(0.5).unwrap_err().to_string().contains("invalid exponent"));
        assert!(f.lp_norm(f64::NAN).is_err());
    }

    #[test]
    fn constant_norms() {
        let g = GridSpec::new(16, 4.0).unwrap();
        let f = ScalarField::constant(g, 2.5);
        assert_eq!(f.integrate().unwrap(), 2.5 * 16.0);
        assert!((f.lp_norm(1.0).unwrap() - 40.0).abs() < 1e-12);
        assert!((f.lp_norm(3.0).unwrap() - 2.5 * 16f64.powf(1.0 / 3.0)).abs() < 1e-12);
        assert_eq!(f.lp_norm(f64::INFINITY).unwrap(), 2.5);
    }

    #[test]
    fn negative_mass_counts_only_negatives() {
        let g = GridSpec::new(8, 8.0).unwrap();
        let f = ScalarField::from_fn(g, |x, _| x);
        // x in {-4..3}: negative part sums to 10 per row, 8 rows
        assert_eq!(f.negative_mass(), 80.0);
    }
}
