//! Quantities localized away from the origin by the exterior cut-off.

use crate::diagnostics::cutoff::CutoffSpec;
use crate::diagnostics::functionals::mod_entropy_density;
use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::grid::GridSpec;
use crate::solver::SimState;
use crate::spectral::{plan, SpectralCoeffs};

/// Mass beyond radius `R`, measured two ways.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExteriorMass {
    /// `∫_{|x|>R} u`
    pub indicator: f64,
    /// `∫u φ_{R/2}`
    pub smooth: f64,
}

fn outside(r: f64) -> impl Fn(f64, f64) -> bool {
    move |x, y| x * x + y * y > r * r
}

pub fn exterior_mass(state: &SimState, radius: f64) -> Result<ExteriorMass> {
    let grid = *state.u.grid();
    if !(radius > 0.0 && radius < grid.box_length() / 4.0) {
        return Err(Error::Geometry(format!(
            "R = {radius} too large for the box (need 0 < R < L/4)"
        )));
    }
    let phi = CutoffSpec::exterior(grid, radius / 2.0);
    Ok(ExteriorMass {
        indicator: state.u.integrate_where(outside(radius)),
        smooth: state.u.inner(&phi.profile)?,
    })
}

/// `∫_{|x|≤R} u`, the complement of [`ExteriorMass::indicator`].
pub fn interior_mass(state: &SimState, radius: f64) -> f64 {
    let r2 = radius * radius;
    state.u.integrate_where(|x, y| x * x + y * y <= r2)
}

/// `‖u‖_{L²(|x|>R)}`, recorded in every diagnostics row.
pub fn exterior_l2(u: &ScalarField, radius: f64) -> f64 {
    u.map(|v| v * v).integrate_where(outside(radius)).sqrt()
}

/// Exponent of the exterior `L^p` norm beyond `8R`.
pub const EXTERIOR_P: f64 = 3.0;

/// Monitored exterior norms at cut-off radius `R`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ExteriorNorms {
    pub radius: f64,
    /// `∫_{|x|>2R}(1+u)ln(1+u)`
    pub entropy_beyond_2r: f64,
    /// `‖u‖_{L²(|x|>4R)}`
    pub u_l2_beyond_4r: f64,
    /// `‖u‖_{L^3(|x|>8R)}`
    pub u_lp_beyond_8r: f64,
    /// `‖∇(vφ_{4R})‖_∞`
    pub grad_v_phi4r_inf: f64,
    /// `‖uφ_{8R}‖_∞`
    pub u_phi8r_inf: f64,
    /// `‖∇(uφ_{8R})‖₂`
    pub grad_u_phi8r_l2: f64,
    /// `‖Δ(uφ_{8R})‖₂`
    pub lap_u_phi8r_l2: f64,
    /// `‖∇Δ(uφ_{8R})‖₂`
    pub grad_lap_u_phi8r_l2: f64,
    /// `‖Δ(vφ_{8R})‖₂`
    pub lap_v_phi8r_l2: f64,
    /// `‖∇Δ(vφ_{8R})‖₂`
    pub grad_lap_v_phi8r_l2: f64,
}

/// `‖(−Δ)^{s/2} f‖₂` for `s ∈ {1, 2, 3}` by Parseval.
fn sobolev_seminorms(f: &ScalarField) -> [f64; 3] {
    let grid = f.grid();
    let p = plan(grid);
    let c = SpectralCoeffs::from_field(f);
    let n = grid.n();
    let mut acc = [0.0; 3];
    for a in 0..p.half() {
        for b in 0..n {
            let k2 = p.k2(a, b);
            let w = p.weight(a) * c.data()[a * n + b].norm_sqr();
            acc[0] += w * k2;
            acc[1] += w * k2 * k2;
            acc[2] += w * k2 * k2 * k2;
        }
    }
    let area = grid.area();
    acc.map(|s| (area * s).sqrt())
}

fn grad_sup(f: &ScalarField) -> f64 {
    let grid = f.grid();
    let p = plan(grid);
    let (dx, dy) = SpectralCoeffs::from_field(f).derivatives();
    let gx = p.inverse(dx.data());
    let gy = p.inverse(dy.data());
    gx.iter()
        .zip(&gy)
        .map(|(a, b)| (a * a + b * b).sqrt())
        .fold(0.0, f64::max)
}

pub fn exterior_norms(state: &SimState, radius: f64) -> Result<ExteriorNorms> {
    let grid = *state.u.grid();
    check_small_radius(&grid, radius)?;
    let u = &state.u;
    let ent = u.map(mod_entropy_density).integrate_where(outside(2.0 * radius));
    let l2 = exterior_l2(u, 4.0 * radius);
    let lp = u
        .map(|v| v.abs().powf(EXTERIOR_P))
        .integrate_where(outside(8.0 * radius))
        .powf(1.0 / EXTERIOR_P);
    let phi4 = CutoffSpec::exterior(grid, 4.0 * radius);
    let phi8 = CutoffSpec::exterior(grid, 8.0 * radius);
    let v4 = state.v.mul(&phi4.profile)?;
    let u8 = u.mul(&phi8.profile)?;
    let v8 = state.v.mul(&phi8.profile)?;
    let su = sobolev_seminorms(&u8);
    let sv = sobolev_seminorms(&v8);
    Ok(ExteriorNorms {
        radius,
        entropy_beyond_2r: ent,
        u_l2_beyond_4r: l2,
        u_lp_beyond_8r: lp,
        grad_v_phi4r_inf: grad_sup(&v4),
        u_phi8r_inf: u8.sup_abs(),
        grad_u_phi8r_l2: su[0],
        lap_u_phi8r_l2: su[1],
        grad_lap_u_phi8r_l2: su[2],
        lap_v_phi8r_l2: sv[1],
        grad_lap_v_phi8r_l2: sv[2],
    })
}

/// `16R` must fit inside half the box.
pub(crate) fn check_small_radius(grid: &GridSpec, radius: f64) -> Result<()> {
    if !(radius > 0.0 && 16.0 * radius < grid.box_length() / 2.0) {
        return Err(Error::Geometry(format!(
            "R = {radius} needs 16R < L/2 = {}",
            grid.box_length() / 2.0
        )));
    }
    Ok(())
}

/// Minimum of `u` over the grid cells within `radius` of `center`.
pub fn local_min_u(state: &SimState, center: (f64, f64), radius: f64) -> Result<f64> {
    let grid = state.u.grid();
    let h = grid.spacing();
    if radius < h {
        return Err(Error::EmptyDisk { radius, spacing: h });
    }
    let half = grid.box_length() / 2.0;
    if center.0 - radius < -half
        || center.0 + radius >= half
        || center.1 - radius < -half
        || center.1 + radius >= half
    {
        return Err(Error::Geometry(format!(
            "disk at {center:?} with radius {radius} leaves the box"
        )));
    }
    let n = grid.n();
    let r2 = radius * radius;
    let mut lo = f64::INFINITY;
    for iy in 0..n {
        let dy = grid.coord(iy) - center.1;
        if dy.abs() > radius {
            continue;
        }
        for ix in 0..n {
            let dx = grid.coord(ix) - center.0;
            if dx * dx + dy * dy <= r2 {
                lo = lo.min(state.u.at(ix, iy));
            }
        }
    }
    Ok(lo)
}

/// Result of scanning a ring of candidate disks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskProbe {
    pub center: (f64, f64),
    pub radius: f64,
    pub min_u: f64,
}

/// Scan `count` disks of radius `disk_radius` centred on the circle of
/// radius `ring_radius` and return the one with the largest minimum.
pub fn probe_ring(
    state: &SimState,
    ring_radius: f64,
    disk_radius: f64,
    count: usize,
) -> Result<DiskProbe> {
    let mut best: Option<DiskProbe> = None;
    for k in 0..count.max(1) {
        let a = std::f64::consts::TAU * k as f64 / count.max(1) as f64;
        let center = (ring_radius * a.cos(), ring_radius * a.sin());
        let m = local_min_u(state, center, disk_radius)?;
        if best.is_none_or(|b| m > b.min_u) {
            best = Some(DiskProbe {
                center,
                radius: disk_radius,
                min_u: m,
            });
        }
    }
    Ok(best.expect("at least one disk"))
}
