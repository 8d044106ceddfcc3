//! Sub-critical, critical and super-critical Gaussian data on a small grid.
//!
//! `cargo run --release --example critical_mass`

use ks2d::experiment::{run_scenario, Scenario};
use ks2d::solver::RunOutcome;

fn main() -> ks2d::Result<()> {
    let base = Scenario::parse(
        "name = critical_mass\n\
         mass = 4pi\n\
         sigma = 0.5\n\
         n = 256\n\
         box_length = 16\n\
         dt = 1e-3\n\
         t_end = 2\n\
         blowup_sup_threshold = 100\n\
         diag_every = 100\n",
    )?;
    for (label, m) in ks2d::experiment::parse_mass_list("4pi,8pi,12pi")? {
        let s = base.with_mass(&label, m);
        let r = run_scenario(&s, None)?;
        let o = &r.output;
        match &o.outcome {
            RunOutcome::Blowup { t_star, reason, .. } => {
                println!("{label:>5}: blowup at t* = {t_star:.4}, {reason}")
            }
            other => println!(
                "{label:>5}: {} at t = {:.3}, max |u|_inf = {:.3}",
                other.label(),
                o.final_state.t,
                o.max_sup
            ),
        }
    }
    Ok(())
}
