use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{gaussian, ScalarField};
use crate::grid::GridSpec;
use crate::solver::{PicardConfig, RunConfig};
use crate::spectral::gradient;

/// Shape of `u₀`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum InitialFamily {
    /// One radial Gaussian.
    Gaussian { center: (f64, f64) },
    /// Two equal Gaussians at `(±separation/2, 0)`, each with half the mass.
    TwoBump { separation: f64 },
}

/// One simulation setup: initial data plus solver settings.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub family: InitialFamily,
    /// `∫u₀`.
    pub mass: f64,
    /// Width of each Gaussian in `u₀`.
    pub sigma: f64,
    /// `∫v₀`.
    pub v0_mass: f64,
    /// Width of `v₀`; `None` means `2σ`.
    pub v0_sigma: Option<f64>,
    pub seed: u64,
    pub run: RunConfig,
    pub picard: PicardConfig,
    /// Every key/value as read, for the manifest.
    pub raw: BTreeMap<String, String>,
}

/// Keys accepted in a scenario file.
pub const KEYS: &[&str] = &[
    "name",
    "family",
    "mass",
    "sigma",
    "center_x",
    "center_y",
    "separation",
    "v0_mass",
    "v0_sigma",
    "seed",
    "n",
    "box_length",
    "lambda",
    "dt",
    "t_end",
    "scheme",
    "dealias",
    "chemotaxis",
    "blowup_sup_threshold",
    "blowup_tail_threshold",
    "neg_tolerance",
    "diag_every",
    "snapshot_every",
    "radii",
    "tail_mass_tolerance",
    "picard_t",
    "picard_p",
    "picard_nodes",
    "picard_max_iter",
    "picard_tol",
];

/// Parses `"8pi"`, `"8π"`, `"pi"`, `"critical"` or a plain number.
pub fn parse_mass(s: &str) -> Result<f64> {
    let t = s.trim();
    if t.eq_ignore_ascii_case("critical") {
        return Ok(8.0 * PI);
    }
    let bad = || Error::config("mass", format!("cannot parse `{s}`"));
    let lower = t.to_ascii_lowercase();
    let stripped = lower
        .strip_suffix("pi")
        .or_else(|| lower.strip_suffix('π'))
        .map(str::trim);
    let m = match stripped {
        Some("") => PI,
        Some(k) => k.trim_end_matches('*').parse::<f64>().map_err(|_| bad())? * PI,
        None => t.parse::<f64>().map_err(|_| bad())?,
    };
    if !(m > 0.0 && m.is_finite()) {
        return Err(Error::config("mass", format!("must be > 0, got `{s}`")));
    }
    Ok(m)
}

/// Comma separated masses, e.g. `"4pi,8pi,12pi"`.
pub fn parse_mass_list(s: &str) -> Result<Vec<(String, f64)>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| Ok((t.to_string(), parse_mass(t)?)))
        .collect()
}

fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.trim()
        .parse()
        .map_err(|_| Error::config(key, format!("cannot parse `{v}`")))
}

fn boolean(key: &str, v: &str) -> Result<bool> {
    match v.trim() {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(Error::config(key, format!("expected true or false, got `{v}`"))),
    }
}

impl Scenario {
    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config("config", format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Parses `key = value` lines; `#` starts a comment. `mass` is required.
    pub fn parse(text: &str) -> Result<Self> {
        let mut raw = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Error::config("config", format!("line {}: expected key=value", lineno + 1))
            })?;
            let k = k.trim();
            if !KEYS.contains(&k) {
                return Err(Error::config(k, "unknown key"));
            }
            if raw.insert(k.to_string(), v.trim().to_string()).is_some() {
                return Err(Error::config(k, "given twice"));
            }
        }
        Self::from_map(raw)
    }

    pub fn from_map(raw: BTreeMap<String, String>) -> Result<Self> {
        let get = |k: &str| raw.get(k).map(String::as_str);
        let mass = parse_mass(get("mass").ok_or_else(|| Error::config("mass", "missing required key"))?)?;
        let n = get("n").map_or(Ok(256), |v| num("n", v))?;
        let l = get("box_length").map_or(Ok(32.0), |v| num("box_length", v))?;
        let grid = GridSpec::new(n, l).map_err(|e| Error::config("n", e.to_string()))?;

        let mut run = RunConfig::new(grid);
        if let Some(v) = get("lambda") {
            run.lambda = num("lambda", v)?;
        }
        if let Some(v) = get("dt") {
            run.dt = num("dt", v)?;
        }
        if let Some(v) = get("t_end") {
            run.t_end = num("t_end", v)?;
        }
        if let Some(v) = get("scheme") {
            run.scheme = v.parse()?;
        }
        if let Some(v) = get("dealias") {
            run.dealias = boolean("dealias", v)?;
        }
        if let Some(v) = get("chemotaxis") {
            run.chemotaxis = boolean("chemotaxis", v)?;
        }
        if let Some(v) = get("blowup_sup_threshold") {
            run.blowup_sup_threshold = Some(num("blowup_sup_threshold", v)?);
        }
        if let Some(v) = get("blowup_tail_threshold") {
            run.blowup_tail_threshold = num("blowup_tail_threshold", v)?;
        }
        if let Some(v) = get("neg_tolerance") {
            run.neg_tolerance = num("neg_tolerance", v)?;
        }
        if let Some(v) = get("diag_every") {
            run.diag_every = num("diag_every", v)?;
        }
        if let Some(v) = get("snapshot_every") {
            run.snapshot_every = num("snapshot_every", v)?;
        }
        if let Some(v) = get("tail_mass_tolerance") {
            run.tail_mass_tolerance = num("tail_mass_tolerance", v)?;
        }
        if let Some(v) = get("radii") {
            run.radii = v
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|s| num("radii", s))
                .collect::<Result<_>>()?;
        }

        let mut picard = PicardConfig::new(get("picard_t").map_or(Ok(1e-2), |v| num("picard_t", v))?);
        picard.lambda = run.lambda;
        picard.chemotaxis = run.chemotaxis;
        if let Some(v) = get("picard_p") {
            picard.p = num("picard_p", v)?;
        }
        if let Some(v) = get("picard_nodes") {
            picard.nodes = num("picard_nodes", v)?;
        }
        if let Some(v) = get("picard_max_iter") {
            picard.max_iter = num("picard_max_iter", v)?;
        }
        if let Some(v) = get("picard_tol") {
            picard.tol = num("picard_tol", v)?;
        }

        let family = match get("family").unwrap_or("gaussian") {
            "gaussian" => InitialFamily::Gaussian {
                center: (
                    get("center_x").map_or(Ok(0.0), |v| num("center_x", v))?,
                    get("center_y").map_or(Ok(0.0), |v| num("center_y", v))?,
                ),
            },
            "two_bump" => InitialFamily::TwoBump {
                separation: get("separation")
                    .ok_or_else(|| Error::config("separation", "missing required key for two_bump"))
                    .and_then(|v| num("separation", v))?,
            },
            other => return Err(Error::config("family", format!("unknown family `{other}`"))),
        };

        let s = Scenario {
            name: get("name").unwrap_or("scenario").to_string(),
            family,
            mass,
            sigma: get("sigma").map_or(Ok(1.0), |v| num("sigma", v))?,
            v0_mass: get("v0_mass").map_or(Ok(1.0), |v| num("v0_mass", v))?,
            v0_sigma: get("v0_sigma").map(|v| num("v0_sigma", v)).transpose()?,
            seed: get("seed").map_or(Ok(0), |v| num("seed", v))?,
            run,
            picard,
            raw,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let h = self.run.grid.spacing();
        if !(self.sigma > 2.0 * h) {
            return Err(Error::config(
                "sigma",
                format!("sigma must exceed 2h = {} (got {})", 2.0 * h, self.sigma),
            ));
        }
        if let Some(s) = self.v0_sigma {
            if !(s > 2.0 * h) {
                return Err(Error::config(
                    "v0_sigma",
                    format!("v0_sigma must exceed 2h = {} (got {s})", 2.0 * h),
                ));
            }
        }
        if !(self.mass > 0.0) {
            return Err(Error::config("mass", "must be > 0"));
        }
        if !(self.v0_mass > 0.0) {
            return Err(Error::config("v0_mass", "must be > 0"));
        }
        self.run.validate()?;
        self.picard.validate()
    }

    /// The same scenario with another mass; the name gains the label.
    pub fn with_mass(&self, label: &str, mass: f64) -> Self {
        let mut s = self.clone();
        s.mass = mass;
        s.name = format!("{}_{label}", self.name);
        s.raw.insert("mass".into(), label.to_string());
        s
    }

    /// Spreads `k` snapshots evenly over the run.
    pub fn with_snapshot_count(mut self, k: usize) -> Self {
        self.run.snapshot_every = if k == 0 {
            0
        } else {
            (self.run.step_count() / k).max(1)
        };
        self
    }

    pub fn v0_width(&self) -> f64 {
        self.v0_sigma.unwrap_or(2.0 * self.sigma)
    }
}

/// Norms of the generated initial data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InitialDataSummary {
    pub u0_mass: f64,
    pub u0_sup: f64,
    pub v0_l1: f64,
    pub v0_grad_l2: f64,
}

fn rescaled(f: ScalarField, mass: f64) -> ScalarField {
    let m = f.integrate().expect("finite");
    f.scale(mass / m)
}

/// `u₀` with `∫u₀` equal to the requested mass after discretisation, and
/// `v₀` a Gaussian of width `2σ` (or `v0_sigma`) with mass `v0_mass`.
pub fn make_initial_data(s: &Scenario) -> Result<(ScalarField, ScalarField, InitialDataSummary)> {
    s.validate()?;
    let grid = s.run.grid;
    let (u0, center) = match s.family {
        InitialFamily::Gaussian { center } => (gaussian(grid, s.mass, s.sigma, center), center),
        InitialFamily::TwoBump { separation } => {
            let half = 0.5 * s.mass;
            let a = rescaled(gaussian(grid, half, s.sigma, (-0.5 * separation, 0.0)), half);
            let b = rescaled(gaussian(grid, half, s.sigma, (0.5 * separation, 0.0)), half);
            (a.add(&b)?, (0.0, 0.0))
        }
    };
    let u0 = rescaled(u0, s.mass);
    let v0 = rescaled(gaussian(grid, s.v0_mass, s.v0_width(), center), s.v0_mass);
    let (gx, gy) = gradient(&v0)?;
    let summary = InitialDataSummary {
        u0_mass: u0.integrate()?,
        u0_sup: u0.sup_abs(),
        v0_l1: v0.lp_norm(1.0)?,
        v0_grad_l2: (gx.l2_raw().powi(2) + gy.l2_raw().powi(2)).sqrt(),
    };
    Ok((u0, v0, summary))
}
