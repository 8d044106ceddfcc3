//! Smooth radial cut-offs.
//!
//! The exterior profile is `φ(r) = 0` for `r < 1`, `1` for `r > 2`, joined
//! on `[1, 2]` by the bump quotient `f(r−1) / (f(r−1) + f(2−r))` with
//! `f(s) = exp(−1/s)`. Scaled versions are `φ_R(x) = φ(|x|/R)` and the
//! interior cut-off is `ψ_R = 1 − φ_{8R}`, supported in `|x| ≤ 16R`.

use std::sync::OnceLock;

use crate::field::ScalarField;
use crate::grid::GridSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CutoffKind {
    ExteriorPhi,
    InteriorPsi,
}

/// Constants `C` with `|∇φ_R| ≤ C φ_{R/2}/R` and `|Δφ_R| ≤ C φ_{R/2}/R²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileConstants {
    pub gradient: f64,
    pub laplacian: f64,
}

// f, f', f'' of exp(-1/s), zero for s below the underflow range
fn bump(s: f64) -> (f64, f64, f64) {
    if s <= 1e-3 {
        return (0.0, 0.0, 0.0);
    }
    let f = (-1.0 / s).exp();
    let s2 = s * s;
    (f, f / s2, f * (1.0 / (s2 * s2) - 2.0 / (s2 * s)))
}

/// `(φ, φ', φ'')` of the unit exterior profile at radius `r`.
pub fn profile(r: f64) -> (f64, f64, f64) {
    if r <= 1.0 {
        return (0.0, 0.0, 0.0);
    }
    if r >= 2.0 {
        return (1.0, 0.0, 0.0);
    }
    let (a, da, dda) = bump(r - 1.0);
    let (b, db0, ddb) = bump(2.0 - r);
    let db = -db0;
    let s = a + b;
    let ds = da + db;
    let num = da * b - a * db;
    let dnum = dda * b - a * ddb;
    (a / s, num / (s * s), (dnum * s - 2.0 * num * ds) / (s * s * s))
}

/// Constants of [`profile`], measured once on a fine radial grid.
pub fn profile_constants() -> ProfileConstants {
    static C: OnceLock<ProfileConstants> = OnceLock::new();
    *C.get_or_init(|| {
        let samples = 200_000;
        let (mut g, mut l) = (0.0f64, 0.0f64);
        for i in 0..=samples {
            let r = 1.0 + i as f64 / samples as f64;
            let (_, d1, d2) = profile(r);
            // φ_{1/2} = 1 on the transition annulus
            g = g.max(d1.abs());
            l = l.max((d2 + d1 / r).abs());
        }
        ProfileConstants {
            gradient: g,
            laplacian: l,
        }
    })
}

/// A sampled cut-off together with its analytic gradient.
#[derive(Debug, Clone)]
pub struct CutoffSpec {
    pub radius: f64,
    pub kind: CutoffKind,
    pub profile: ScalarField,
    pub constants: ProfileConstants,
    grad_x: ScalarField,
    grad_y: ScalarField,
}

impl CutoffSpec {
    /// `φ_R`.
    pub fn exterior(grid: GridSpec, radius: f64) -> Self {
        Self::build(grid, radius, CutoffKind::ExteriorPhi)
    }

    /// `ψ_R = 1 − φ_{8R}`.
    pub fn interior(grid: GridSpec, radius: f64) -> Self {
        Self::build(grid, radius, CutoffKind::InteriorPsi)
    }

    fn build(grid: GridSpec, radius: f64, kind: CutoffKind) -> Self {
        let scale = match kind {
            CutoffKind::ExteriorPhi => radius,
            CutoffKind::InteriorPsi => 8.0 * radius,
        };
        let sign = match kind {
            CutoffKind::ExteriorPhi => 1.0,
            CutoffKind::InteriorPsi => -1.0,
        };
        let n = grid.n();
        let mut vals = Vec::with_capacity(grid.len());
        let mut gx = Vec::with_capacity(grid.len());
        let mut gy = Vec::with_capacity(grid.len());
        for iy in 0..n {
            let y = grid.coord(iy);
            for ix in 0..n {
                let x = grid.coord(ix);
                let r = (x * x + y * y).sqrt();
                let (p, d1, _) = profile(r / scale);
                vals.push(match kind {
                    CutoffKind::ExteriorPhi => p,
                    CutoffKind::InteriorPsi => 1.0 - p,
                });
                let dr = if r > 0.0 { sign * d1 / (scale * r) } else { 0.0 };
                gx.push(dr * x);
                gy.push(dr * y);
            }
        }
        Self {
            radius,
            kind,
            profile: ScalarField::from_vec_unchecked(grid, vals),
            constants: profile_constants(),
            grad_x: ScalarField::from_vec_unchecked(grid, gx),
            grad_y: ScalarField::from_vec_unchecked(grid, gy),
        }
    }

    pub fn gradient(&self) -> (&ScalarField, &ScalarField) {
        (&self.grad_x, &self.grad_y)
    }

    /// `∇(c²) = 2c∇c`.
    pub fn gradient_of_square(&self) -> (ScalarField, ScalarField) {
        let c = &self.profile;
        (
            c.zip_map(&self.grad_x, |a, g| 2.0 * a * g).expect("same grid"),
            c.zip_map(&self.grad_y, |a, g| 2.0 * a * g).expect("same grid"),
        )
    }

    /// `∇(c^{1/2}) = ∇c / (2 c^{1/2})`, zero where `c` vanishes.
    pub fn gradient_of_sqrt(&self) -> (ScalarField, ScalarField) {
        let c = &self.profile;
        let f = |a: f64, g: f64| if a > 0.0 { g / (2.0 * a.sqrt()) } else { 0.0 };
        (
            c.zip_map(&self.grad_x, f).expect("same grid"),
            c.zip_map(&self.grad_y, f).expect("same grid"),
        )
    }

    /// Outer radius of the support (`2R` for `φ_R`'s complement, `16R` for
    /// `ψ_R`).
    pub fn support_radius(&self) -> f64 {
        match self.kind {
            CutoffKind::ExteriorPhi => f64::INFINITY,
            CutoffKind::InteriorPsi => 16.0 * self.radius,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_endpoints_and_monotone() {
        assert_eq!(profile(0.5).0, 0.0);
        assert_eq!(profile(1.0).0, 0.0);
        assert_eq!(profile(2.0).0, 1.0);
        assert!((profile(1.5).0 - 0.5).abs() < 1e-15);
        let mut prev = 0.0;
        for i in 0..=1000 {
            let r = 1.0 + i as f64 / 1000.0;
            let (p, d1, _) = profile(r);
            assert!(p >= prev && (0.0..=1.0).contains(&p));
            assert!(d1 >= 0.0);
            prev = p;
        }
    }

    #[test]
    fn derivatives_match_differences() {
        let h = 1e-5;
        for &r in &[1.1, 1.3, 1.5, 1.77, 1.95] {
            let (_, d1, d2) = profile(r);
            let fd1 = (profile(r + h).0 - profile(r - h).0) / (2.0 * h);
            let fd2 = (profile(r + h).1 - profile(r - h).1) / (2.0 * h);
            assert!((d1 - fd1).abs() < 1e-7, "{r}: {d1} vs {fd1}");
            assert!((d2 - fd2).abs() < 1e-5, "{r}: {d2} vs {fd2}");
        }
    }

    #[test]
    fn constants_are_finite() {
        let c = profile_constants();
        assert!(c.gradient > 1.0 && c.gradient < 10.0, "{c:?}");
        assert!(c.laplacian.is_finite() && c.laplacian > c.gradient);
    }
}
