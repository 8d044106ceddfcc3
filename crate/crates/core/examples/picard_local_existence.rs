//! Picard iteration of the Duhamel map and continuous dependence on data.
//!
//! `cargo run --release --example picard_local_existence`

use ks2d::field::gaussian;
use ks2d::solver::{continuous_dependence_probe, picard_solve, PicardConfig};
use ks2d::{GridSpec, ScalarField};

fn main() -> ks2d::Result<()> {
    let grid = GridSpec::new(64, 16.0)?;
    let u0 = gaussian(grid, 2.0, 0.8, (0.0, 0.0));
    let v0 = gaussian(grid, 1.0, 1.0, (0.0, 0.0));
    let cfg = PicardConfig::new(1e-2);

    let (state, rep) = picard_solve(&u0, &v0, &cfg)?;
    for (k, d) in rep.distances.iter().enumerate() {
        println!("iter {:>2}  d = {d:.3e}", k + 1);
    }
    println!(
        "converged after {:?}, max ratio {:.4}, mass at T {:.12}",
        rep.converged_after,
        rep.max_ratio(),
        state.mass()
    );

    let du = gaussian(grid, 1e-3, 0.8, (0.3, 0.0));
    let dv = ScalarField::zeros(grid);
    let k = continuous_dependence_probe(&u0, &v0, &du, &dv, &cfg)?;
    println!("sup |u - u~|_1 / |du|_1 = {k:.4}");
    Ok(())
}
