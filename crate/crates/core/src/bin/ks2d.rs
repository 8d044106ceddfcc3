use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ks2d::experiment::{parse_mass_list, run_scenario, sweep_mass, worker_count, Scenario};
use ks2d::oracle::{
    moser_eps_ladder, tm_sharpness_probe, verify_inequalities, write_reports_csv, FamilyKind,
    OracleConfig, TrialDomain,
};
use ks2d::solver::RunOutcome;

#[derive(Parser)]
#[command(name = "ks2d", version, about = "2D Keller–Segel simulator and inequality checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario. Exit code 0 = completed, 2 = blowup, 1 = failure.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
        /// Evenly spaced snapshots to store besides the first and last.
        #[arg(long, default_value_t = 0)]
        snapshots: usize,
    },
    /// Run the scenario once per mass; KS2D_WORKERS caps parallel entries.
    SweepMass {
        #[arg(long)]
        config: PathBuf,
        /// Comma separated, e.g. "4pi,8pi,12pi".
        #[arg(long)]
        masses: String,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Check the functional inequalities on seeded trial families.
    VerifyInequalities {
        /// gaussians, bumps, random_bandlimited, peaked or all.
        #[arg(long, default_value = "all")]
        family: String,
        /// Trials per family.
        #[arg(long, default_value_t = 250)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Picard iteration of the Duhamel map up to `picard_t`.
    LocalExistence {
        #[arg(long)]
        config: PathBuf,
    },
}

fn main() -> ExitCode {
    match dispatch(Cli::parse().command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(cmd: Command) -> ks2d::Result<ExitCode> {
    match cmd {
        Command::Run {
            config,
            out_dir,
            snapshots,
        } => {
            let s = Scenario::from_path(&config)?.with_snapshot_count(snapshots);
            let r = run_scenario(&s, Some(&out_dir))?;
            let o = &r.output;
            println!(
                "{}: {} at t = {} after {} steps, max |u|_inf = {:.6e}",
                s.name,
                o.outcome.label(),
                o.final_state.t,
                o.steps,
                o.max_sup
            );
            Ok(match &o.outcome {
                RunOutcome::Completed => ExitCode::SUCCESS,
                RunOutcome::Blowup { t_star, reason, .. } => {
                    println!("blowup t* = {t_star}: {reason}");
                    ExitCode::from(2)
                }
                RunOutcome::ResolutionFailure { t, min_u } => {
                    eprintln!("resolution failure at t = {t}: min u = {min_u:e}");
                    ExitCode::from(1)
                }
            })
        }
        Command::SweepMass {
            config,
            masses,
            out_dir,
        } => {
            let s = Scenario::from_path(&config)?;
            let masses = parse_mass_list(&masses)?;
            let r = sweep_mass(&s, &masses, Some(&out_dir), worker_count())?;
            for e in &r.entries {
                println!(
                    "{:>8} {:<18} t* = {:<12} max |u|_inf = {:.4e}{}",
                    e.label,
                    e.status,
                    e.t_star.map_or("-".into(), |t| format!("{t:.4}")),
                    e.max_sup,
                    e.error.as_deref().map_or(String::new(), |m| format!("  ({m})"))
                );
            }
            for (a, b) in r.sup_monotonicity_violations() {
                println!("note: max |u|_inf at {b} is below that at {a}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::VerifyInequalities {
            family,
            trials,
            seed,
            out,
        } => {
            let families = if family == "all" {
                FamilyKind::ALL.to_vec()
            } else {
                family
                    .split(',')
                    .map(|f| f.trim().parse())
                    .collect::<ks2d::Result<Vec<_>>>()?
            };
            let reports = verify_inequalities(&OracleConfig::new(families, trials, seed))?;
            write_reports_csv(&out, &reports)?;
            let mut violations = 0;
            for r in &reports {
                violations += r.violations();
                let fitted: Vec<String> = r.fitted.iter().map(|(k, v)| format!("{k}={v:.6e}")).collect();
                println!(
                    "{:<22} trials={} violations={} worst_margin={:.3e} {}",
                    r.inequality,
                    r.trials.len(),
                    r.violations(),
                    r.worst_margin(),
                    fitted.join(" ")
                );
            }
            let c_tm = reports
                .iter()
                .find_map(|r| r.fitted("C_TM"))
                .unwrap_or(1.0);
            let domain = TrialDomain::standard();
            let eps = moser_eps_ladder(&domain, 6);
            for k in [15.0, 16.0, 17.0] {
                let p = tm_sharpness_probe(&domain, c_tm, k * PI, &eps)?;
                println!(
                    "moser probe kappa={k}pi violations={} max_ratio={:.4} growth={:.4}",
                    p.violations,
                    p.max_ratio(),
                    p.growth()
                );
            }
            Ok(if violations == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::LocalExistence { config } => {
            let s = Scenario::from_path(&config)?;
            let (state, rep) = ks2d::experiment::local_existence(&s)?;
            println!("p = {}, q = {}, T = {}", rep.p, rep.q, rep.horizon);
            for (k, d) in rep.distances.iter().enumerate() {
                let ratio = if k > 0 { rep.ratios.get(k - 1).copied() } else { None };
                println!(
                    "iter {:>3}  d = {d:.6e}  ratio = {}",
                    k + 1,
                    ratio.map_or("-".into(), |r| format!("{r:.4}"))
                );
            }
            println!(
                "converged_after = {}",
                rep.converged_after.map_or("none".into(), |k| k.to_string())
            );
            println!("sup t^(1-1/p)|u|_p = {:.6e}", rep.weighted_u);
            println!("sup t^(1/2-1/q)|grad v|_q = {:.6e}", rep.weighted_grad_v);
            println!("mass at T = {:.15e}", state.mass());
            Ok(ExitCode::SUCCESS)
        }
    }
}
