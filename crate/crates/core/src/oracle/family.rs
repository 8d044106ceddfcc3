//! Seeded trial functions, all supported in a disk strictly inside the box.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::diagnostics::CutoffSpec;
use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::grid::GridSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    Gaussians,
    Bumps,
    RandomBandlimited,
    Peaked,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 4] = [
        FamilyKind::Gaussians,
        FamilyKind::Bumps,
        FamilyKind::RandomBandlimited,
        FamilyKind::Peaked,
    ];
}

impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussians" => Ok(FamilyKind::Gaussians),
            "bumps" => Ok(FamilyKind::Bumps),
            "random_bandlimited" => Ok(FamilyKind::RandomBandlimited),
            "peaked" => Ok(FamilyKind::Peaked),
            _ => Err(Error::config("family", format!("unknown family `{s}`"))),
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FamilyKind::Gaussians => "gaussians",
            FamilyKind::Bumps => "bumps",
            FamilyKind::RandomBandlimited => "random_bandlimited",
            FamilyKind::Peaked => "peaked",
        };
        f.write_str(s)
    }
}

/// Disk `D = {|x| ≤ 16R}` and the interior cut-off `ψ_R` that confines
/// every trial to it.
#[derive(Debug, Clone)]
pub struct TrialDomain {
    pub grid: GridSpec,
    pub mask: CutoffSpec,
}

impl TrialDomain {
    pub fn new(grid: GridSpec, radius: f64) -> Result<Self> {
        crate::diagnostics::exterior::check_small_radius(&grid, radius)?;
        Ok(Self {
            grid,
            mask: CutoffSpec::interior(grid, radius),
        })
    }

    /// `n = 128` on `[−8, 8)²` with `D` of radius 6.4.
    pub fn standard() -> Self {
        Self::new(GridSpec::new(128, 16.0).expect("valid grid"), 0.4).expect("fits")
    }

    pub fn disk_radius(&self) -> f64 {
        self.mask.support_radius()
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        let r = self.disk_radius();
        x * x + y * y <= r * r
    }

    /// Discrete area of `D`.
    pub fn area(&self) -> f64 {
        ScalarField::constant(self.grid, 1.0).integrate_where(|x, y| self.contains(x, y))
    }

    /// `f·ψ_R`.
    pub fn confine(&self, f: &ScalarField) -> ScalarField {
        f.mul(&self.mask.profile).expect("same grid")
    }
}

/// One generated trial function with a description of its parameters.
#[derive(Debug, Clone)]
pub struct Trial {
    pub id: usize,
    pub field: ScalarField,
    pub params: String,
}

/// A reproducible stream of trials of one kind.
#[derive(Debug, Clone)]
pub struct TrialFamily {
    pub kind: FamilyKind,
    pub seed: u64,
    /// Largest allowed `‖f‖_∞`.
    pub max_amplitude: f64,
}

impl TrialFamily {
    pub fn new(kind: FamilyKind, seed: u64) -> Self {
        Self {
            kind,
            seed,
            max_amplitude: 20.0,
        }
    }

    /// `count` nonnegative trials confined to the domain.
    pub fn generate(&self, domain: &TrialDomain, count: usize) -> Vec<Trial> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ (self.kind as u64) << 32);
        (0..count)
            .map(|id| {
                let (raw, params) = self.sample(domain, &mut rng);
                let mut field = domain.confine(&raw);
                let sup = field.sup_abs();
                if sup > self.max_amplitude {
                    field = field.scale(self.max_amplitude / sup);
                }
                Trial { id, field, params }
            })
            .collect()
    }

    fn sample(&self, domain: &TrialDomain, rng: &mut ChaCha8Rng) -> (ScalarField, String) {
        let grid = domain.grid;
        let h = grid.spacing();
        let reach = 0.5 * domain.disk_radius();
        match self.kind {
            FamilyKind::Gaussians => {
                let k = rng.random_range(1..=3);
                let mut parts = Vec::new();
                let mut f = ScalarField::zeros(grid);
                for _ in 0..k {
                    let (cx, cy) = (rng.random_range(-reach..reach), rng.random_range(-reach..reach));
                    let w = rng.random_range(0.4..2.0);
                    let a = rng.random_range(0.05..6.0);
                    f = f
                        .add(&ScalarField::from_fn(grid, |x, y| {
                            a * (-((x - cx).powi(2) + (y - cy).powi(2)) / (2.0 * w * w)).exp()
                        }))
                        .expect("same grid");
                    parts.push(format!("g({cx:.3};{cy:.3};w={w:.3};a={a:.3})"));
                }
                (f, parts.join(" "))
            }
            FamilyKind::Bumps => {
                let (cx, cy) = (rng.random_range(-reach..reach), rng.random_range(-reach..reach));
                let w = rng.random_range(0.8..3.0);
                let a = rng.random_range(0.05..8.0);
                let f = ScalarField::from_fn(grid, |x, y| {
                    let s = ((x - cx).powi(2) + (y - cy).powi(2)) / (w * w);
                    if s < 1.0 {
                        a * (1.0 - 1.0 / (1.0 - s)).exp()
                    } else {
                        0.0
                    }
                });
                (f, format!("bump({cx:.3};{cy:.3};w={w:.3};a={a:.3})"))
            }
            FamilyKind::RandomBandlimited => {
                let l = grid.box_length();
                let kmax = rng.random_range(2..=6);
                let mut modes = Vec::new();
                for kx in -kmax..=kmax {
                    for ky in -kmax..=kmax {
                        if kx * kx + ky * ky <= kmax * kmax {
                            let c = rng.random_range(-1.0..1.0) / (1.0 + (kx * kx + ky * ky) as f64);
                            let ph = rng.random_range(0.0..2.0 * PI);
                            modes.push((kx as f64, ky as f64, c, ph));
                        }
                    }
                }
                let a = rng.random_range(0.05..3.0);
                let g = ScalarField::from_fn(grid, |x, y| {
                    modes
                        .iter()
                        .map(|&(kx, ky, c, ph)| c * (2.0 * PI * (kx * x + ky * y) / l + ph).cos())
                        .sum()
                });
                // squared to stay nonnegative, rescaled to amplitude a
                let sq = g.map(|v| v * v);
                let f = sq.scale(a / sq.sup_abs().max(1e-300));
                (f, format!("bandlimited(kmax={kmax};a={a:.3})"))
            }
            FamilyKind::Peaked => {
                let (cx, cy) = (rng.random_range(-reach..reach), rng.random_range(-reach..reach));
                let w = rng.random_range(2.0 * h..0.6);
                let a = rng.random_range(0.5..15.0);
                let f = ScalarField::from_fn(grid, |x, y| {
                    let r2 = (x - cx).powi(2) + (y - cy).powi(2);
                    a / (1.0 + r2 / (w * w)).powi(2)
                });
                (f, format!("peak({cx:.3};{cy:.3};w={w:.4};a={a:.3})"))
            }
        }
    }
}

/// Moser function of the disk of radius `rho` with inner radius `eps`,
/// normalised so that `‖∇m‖₂ = 1` in the continuum.
pub fn moser_function(grid: GridSpec, rho: f64, eps: f64) -> ScalarField {
    let l = (rho / eps).ln();
    let c = 1.0 / (2.0 * PI).sqrt();
    ScalarField::from_fn(grid, |x, y| {
        let r = (x * x + y * y).sqrt();
        if r <= eps {
            c * l.sqrt()
        } else if r < rho {
            c * (rho / r).ln() / l.sqrt()
        } else {
            0.0
        }
    })
}
