use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Periodic square grid on `[-L/2, L/2)²` with `n` cells per side.
///
/// Grid point `(i, j)` sits at `x = -L/2 + i·h`, `y = -L/2 + j·h`; the origin
/// is the point `(n/2, n/2)`. Because `n` is a power of two, `h = L/n` is an
/// exact binary rescaling and `h·n == L` holds bit for bit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    n: usize,
    box_length: f64,
}

impl GridSpec {
    pub fn new(n: usize, box_length: f64) -> Result<Self> {
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "n = {n} must be a power of two and at least 8"
            )));
        }
        if !(box_length.is_finite() && box_length > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "box length {box_length} must be positive"
            )));
        }
        Ok(Self { n, box_length })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn box_length(&self) -> f64 {
        self.box_length
    }

    #[inline]
    pub fn spacing(&self) -> f64 {
        self.box_length / self.n as f64
    }

    /// Area of one cell, the weight of the midpoint quadrature.
    #[inline]
    pub fn cell_area(&self) -> f64 {
        let h = self.spacing();
        h * h
    }

    #[inline]
    pub fn area(&self) -> f64 {
        self.box_length * self.box_length
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n * self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Coordinate of grid index `i` along either axis.
    #[inline]
    pub fn coord(&self, i: usize) -> f64 {
        -0.5 * self.box_length + i as f64 * self.spacing()
    }

    /// Signed wavenumber of FFT index `i`; index `n/2` maps to the Nyquist
    /// frequency `-π/h`.
    #[inline]
    pub fn wavenumber(&self, i: usize) -> f64 {
        let n = self.n as i64;
        let i = i as i64;
        let m = if i < n / 2 { i } else { i - n };
        2.0 * PI / self.box_length * m as f64
    }

    #[inline]
    pub fn is_nyquist(&self, i: usize) -> bool {
        i == self.n / 2
    }

    /// True when either index lies in the top third of the resolved band,
    /// the modes removed by the 2/3 dealiasing rule.
    #[inline]
    pub fn in_top_third(&self, ix: usize, iy: usize) -> bool {
        let n = self.n as i64;
        let signed = |i: usize| {
            let i = i as i64;
            if i < n / 2 { i } else { i - n }.abs()
        };
        let cut = n / 3;
        signed(ix) > cut || signed(iy) > cut
    }

    pub fn check_same(&self, other: &GridSpec) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::IncompatibleGrids)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_sizes() {
        assert!(GridSpec::new(4, 1.0).is_err());
        assert!(GridSpec::new(48, 1.0).is_err());
        assert!(GridSpec::new(64, 0.0).is_err());
        assert!(GridSpec::new(64, f64::NAN).is_err());
    }

    #[test]
    fn spacing_is_exact() {
        for &(n, l) in &[(8, 1.0), (256, 32.0), (128, 10.0), (64, 3.7)] {
            let g = GridSpec::new(n, l).unwrap();
            assert_eq!(g.spacing() * n as f64, l);
        }
    }

    #[test]
    fn wavenumbers_wrap() {
        let g = GridSpec::new(8, 2.0 * PI).unwrap();
        let k: Vec<f64> = (0..8).map(|i| g.wavenumber(i)).collect();
        assert_eq!(k, vec![0.0, 1.0, 2.0, 3.0, -4.0, -3.0, -2.0, -1.0]);
        assert_eq!(g.coord(4), 0.0);
    }
}
