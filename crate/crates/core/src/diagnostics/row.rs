use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use crate::diagnostics::cutoff::CutoffSpec;
use crate::diagnostics::exterior::{check_small_radius, exterior_l2};
use crate::diagnostics::functionals::{functionals, FmRhs};
use crate::diagnostics::interior::{entropy_with, lr_with};
use crate::error::{Error, Result};
use crate::solver::{rhs_v, SimState};
use crate::spectral::gradient;

/// One timestamped record of the monitored functionals and norms.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticsRow {
    pub t: f64,
    pub mass_u: f64,
    pub int_v: f64,
    pub u_l2: f64,
    pub u_l3: f64,
    pub u_linf: f64,
    pub grad_v_l2: f64,
    pub v_l2: f64,
    pub entropy_mod: f64,
    pub entropy_int: f64,
    pub l: f64,
    pub lm: f64,
    pub fm: f64,
    pub d_tilde: f64,
    /// Filled in after the run from neighbouring rows; `NaN` until then.
    pub fm_identity_residual: f64,
    pub radii: Vec<f64>,
    /// `∫_{|x|>R} u` per radius.
    pub exterior_mass: Vec<f64>,
    /// `‖u‖_{L²(|x|>R)}` per radius.
    pub exterior_l2: Vec<f64>,
    pub interior_lr: Vec<f64>,
    /// `∫(u ln u)ψ_R²` per radius.
    pub interior_entropy: Vec<f64>,
    pub min_u: f64,
    pub neg_mass: f64,
    /// Right-hand side integrals of the `F_m` identity, kept so residuals
    /// can be recomputed from the CSV alone.
    pub rhs: FmRhs,
}

impl DiagnosticsRow {
    pub fn compute(state: &SimState, lambda: f64, radii: &[f64]) -> Result<Self> {
        let grid = *state.u.grid();
        for &r in radii {
            check_small_radius(&grid, r)?;
        }
        let grad_v = gradient(&state.v)?;
        let dtv = rhs_v(state, lambda)?;
        let f = functionals(state, lambda, &grad_v, &dtv)?;
        let u = &state.u;
        let mut row = Self {
            t: state.t,
            mass_u: u.integrate_raw(),
            int_v: state.v.integrate_raw(),
            u_l2: u.l2_raw(),
            u_l3: u.lp_raw(3.0),
            u_linf: u.sup_abs(),
            grad_v_l2: f.grad_v_l2,
            v_l2: state.v.l2_raw(),
            entropy_mod: f.entropy_mod,
            entropy_int: f.entropy_int,
            l: f.l,
            lm: f.lm,
            fm: f.fm,
            d_tilde: f.d_tilde,
            fm_identity_residual: f64::NAN,
            radii: radii.to_vec(),
            exterior_mass: Vec::with_capacity(radii.len()),
            exterior_l2: Vec::with_capacity(radii.len()),
            interior_lr: Vec::with_capacity(radii.len()),
            interior_entropy: Vec::with_capacity(radii.len()),
            min_u: u.min(),
            neg_mass: u.negative_mass(),
            rhs: f.rhs,
        };
        for &r in radii {
            row.exterior_mass
                .push(u.integrate_where(|x, y| x * x + y * y > r * r));
            row.exterior_l2.push(exterior_l2(u, r));
            let psi = CutoffSpec::interior(grid, r);
            row.interior_lr
                .push(lr_with(state, lambda, &psi, (&grad_v.0, &grad_v.1)));
            row.interior_entropy.push(entropy_with(state, &psi));
        }
        Ok(row)
    }

    pub fn is_finite(&self) -> bool {
        self.values().iter().all(|v| v.is_finite())
    }

    /// Values in CSV column order.
    pub fn values(&self) -> Vec<f64> {
        let mut v = vec![
            self.t,
            self.mass_u,
            self.int_v,
            self.u_l2,
            self.u_l3,
            self.u_linf,
            self.grad_v_l2,
            self.v_l2,
            self.entropy_mod,
            self.entropy_int,
            self.l,
            self.lm,
            self.fm,
            self.d_tilde,
            self.fm_identity_residual,
        ];
        v.extend(&self.exterior_mass);
        v.extend(&self.exterior_l2);
        v.extend(&self.interior_lr);
        v.extend(&self.interior_entropy);
        v.extend([
            self.min_u,
            self.neg_mass,
            self.rhs.dtv,
            self.rhs.frac,
            self.rhs.v_over,
        ]);
        v
    }
}

/// CSV header for rows recorded at the given cut-off radii.
pub fn csv_header(radii: &[f64]) -> String {
    let mut cols: Vec<String> = [
        "t",
        "mass_u",
        "int_v",
        "u_l2",
        "u_l3",
        "u_linf",
        "grad_v_l2",
        "v_l2",
        "entropy_mod",
        "entropy_int",
        "L",
        "L_m",
        "F_m",
        "D_tilde",
        "fm_identity_residual",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    for prefix in ["exterior_mass", "exterior_l2", "interior_L", "interior_entropy"] {
        cols.extend(radii.iter().map(|r| format!("{prefix}_R{r}")));
    }
    cols.extend(
        ["min_u", "neg_mass", "fm_rhs_dtv", "fm_rhs_frac", "fm_rhs_v"]
            .iter()
            .map(|s| s.to_string()),
    );
    cols.join(",")
}

pub fn csv_line(row: &DiagnosticsRow) -> String {
    let mut s = String::new();
    for (i, v) in row.values().iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        write!(s, "{v:.16e}").expect("write to string");
    }
    s
}

pub fn write_csv(path: &Path, rows: &[DiagnosticsRow]) -> Result<()> {
    let radii = rows.first().map(|r| r.radii.as_slice()).unwrap_or(&[]);
    let mut out = String::new();
    out.push_str(&csv_header(radii));
    out.push('\n');
    for r in rows {
        out.push_str(&csv_line(r));
        out.push('\n');
    }
    let mut f = std::fs::File::create(path).map_err(|source| Error::Unwritable {
        path: path.to_path_buf(),
        source,
    })?;
    f.write_all(out.as_bytes())?;
    Ok(())
}
