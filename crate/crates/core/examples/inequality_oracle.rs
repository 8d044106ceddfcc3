//! Functional inequalities on random trial families, plus the Moser
//! sequence probe of the exponential inequality.
//!
//! `cargo run --release --example inequality_oracle -- 40`

use std::f64::consts::PI;

use ks2d::oracle::{
    moser_eps_ladder, tm_sharpness_probe, verify_inequalities, FamilyKind, OracleConfig,
    TrialDomain,
};

fn main() -> ks2d::Result<()> {
    let trials = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(20);
    let reports = verify_inequalities(&OracleConfig::new(FamilyKind::ALL.to_vec(), trials, 7))?;
    for r in &reports {
        println!(
            "{:<22} {:>4} trials  {} violations  worst margin {:.3e}",
            r.inequality,
            r.trials.len(),
            r.violations(),
            r.worst_margin()
        );
    }
    let c_tm = reports.iter().find_map(|r| r.fitted("C_TM")).unwrap_or(1.0);
    let domain = TrialDomain::standard();
    let eps = moser_eps_ladder(&domain, 5);
    for k in [16.0, 17.0] {
        let p = tm_sharpness_probe(&domain, c_tm, k * PI, &eps)?;
        println!(
            "kappa = {k}pi: max ratio {:.4}, growth along the ladder {:.3}",
            p.max_ratio(),
            p.growth()
        );
    }
    Ok(())
}
