//! Free-energy decay and the residual of its dissipation identity.
//!
//! `cargo run --release --example lyapunov_diagnostics`

use ks2d::diagnostics::{fm_monotonicity_check, identity_residual_scale};
use ks2d::field::gaussian;
use ks2d::{run, GridSpec, RunConfig};

fn main() -> ks2d::Result<()> {
    let grid = GridSpec::new(128, 16.0)?;
    let u0 = gaussian(grid, 4.0 * std::f64::consts::PI, 0.5, (0.0, 0.0));
    let v0 = gaussian(grid, 1.0, 1.0, (0.5, 0.0));
    let mut cfg = RunConfig::new(grid);
    cfg.t_end = 2.0;
    cfg.diag_every = 50;
    let out = run(&u0, &v0, &cfg)?.into_result()?;

    println!("{:>6} {:>14} {:>14} {:>12}", "t", "F_m", "D~", "residual");
    for r in out.rows.iter().step_by(4) {
        println!(
            "{:>6.2} {:>14.8} {:>14.6e} {:>12.3e}",
            r.t, r.fm, r.d_tilde, r.fm_identity_residual
        );
    }
    let rep = fm_monotonicity_check(&out.rows, cfg.lambda);
    println!(
        "monotonicity: {} violations, min F_m {:.6}, largest |dF/dt + D~ - RHS| {:.3e}",
        rep.violations.len(),
        rep.min_fm,
        identity_residual_scale(&out.rows, cfg.lambda)
    );
    Ok(())
}
