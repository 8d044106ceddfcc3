//! Cut-off partition of unity and the exterior mass bookkeeping.
//!
//! `cargo run --release --example cutoff_exterior`

use ks2d::diagnostics::{exterior_mass, exterior_norms, interior_mass, CutoffSpec};
use ks2d::field::gaussian;
use ks2d::{GridSpec, SimState};

fn main() -> ks2d::Result<()> {
    let grid = GridSpec::new(128, 16.0)?;
    let u = gaussian(grid, 8.0 * std::f64::consts::PI, 0.5, (0.0, 0.0));
    let v = gaussian(grid, 1.0, 1.0, (0.0, 0.0));
    let state = SimState::new(0.0, u, v)?;

    for r in [0.25, 0.45] {
        let phi = CutoffSpec::exterior(grid, 8.0 * r);
        let psi = CutoffSpec::interior(grid, r);
        let gap = phi
            .profile
            .add(&psi.profile)?
            .as_slice()
            .iter()
            .fold(0.0f64, |m, x| m.max((x - 1.0).abs()));
        let ext = exterior_mass(&state, r)?;
        let int = interior_mass(&state, r);
        let norms = exterior_norms(&state, r)?;
        println!(
            "R = {r}: |phi_8R + psi_R - 1| <= {gap:.1e}, exterior {:.6} + interior {:.6} = {:.6} (mass {:.6})",
            ext.indicator,
            int,
            ext.indicator + int,
            state.mass()
        );
        println!(
            "        entropy beyond 2R {:.4}, |u|_2 beyond 4R {:.4e}",
            norms.entropy_beyond_2r, norms.u_l2_beyond_4r
        );
    }
    Ok(())
}
