//! Spectral heat propagation against the closed-form kernel.
//!
//! `cargo run --release --example heat_kernel`

use ks2d::field::heat_kernel;
use ks2d::spectral::heat_propagate;
use ks2d::GridSpec;

fn main() -> ks2d::Result<()> {
    let grid = GridSpec::new(128, 16.0)?;
    let t0 = 0.05;
    let g0 = heat_kernel(grid, t0, (0.0, 0.0));
    println!("{:>6} {:>12} {:>12} {:>12}", "t", "rel L2 err", "mass", "sup");
    for t in [0.05, 0.1, 0.25, 0.5] {
        let approx = heat_propagate(&g0, t, 0.0)?;
        let exact = heat_kernel(grid, t0 + t, (0.0, 0.0));
        let err = approx.sub(&exact)?.lp_norm(2.0)? / exact.lp_norm(2.0)?;
        println!(
            "{t:>6} {err:>12.3e} {:>12.9} {:>12.6}",
            approx.integrate()?,
            approx.sup_abs()
        );
    }

    // e^{t(Δ−λ)} damps the mean by e^{−λt}
    let damped = heat_propagate(&g0, 1.0, 0.5)?;
    println!("lambda = 0.5, t = 1: mass {:.9} (expected {:.9})", damped.integrate()?, (-0.5f64).exp());
    Ok(())
}
