//! Real 2D Fourier transforms on the periodic grid and the diagonal
//! operators built on them (derivatives, Laplacian, heat propagators).
//!
//! Coefficients are stored as a half spectrum: `kx` runs over `0..=n/2` and
//! `ky` over the full range, laid out as `data[a * n + b]` with `a` the `kx`
//! index and `b` the `ky` index. The forward transform is normalised by
//! `1/n²`, so the zero mode is the mean of the field.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::grid::GridSpec;

/// Transform plans and wavenumber tables for one grid.
pub(crate) struct Plan {
    n: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    /// `kx` of half-spectrum column `a`.
    pub kx: Vec<f64>,
    /// `ky` of index `b`.
    pub ky: Vec<f64>,
    /// Same with the Nyquist entry zeroed, for odd derivatives.
    pub kx_odd: Vec<f64>,
    pub ky_odd: Vec<f64>,
}

type PlanKey = (usize, u64);

fn cache() -> &'static Mutex<HashMap<PlanKey, Arc<Plan>>> {
    static CACHE: OnceLock<Mutex<HashMap<PlanKey, Arc<Plan>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

pub(crate) fn plan(grid: &GridSpec) -> Arc<Plan> {
    let key = (grid.n(), grid.box_length().to_bits());
    let mut map = cache().lock().expect("plan cache poisoned");
    map.entry(key)
        .or_insert_with(|| Arc::new(Plan::new(grid)))
        .clone()
}

impl Plan {
    fn new(grid: &GridSpec) -> Self {
        let n = grid.n();
        let m = n / 2 + 1;
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(n);
        let inv = planner.plan_fft_inverse(n);
        let kx: Vec<f64> = (0..m).map(|a| grid.wavenumber(a).abs()).collect();
        let ky: Vec<f64> = (0..n).map(|b| grid.wavenumber(b)).collect();
        let mut kx_odd = kx.clone();
        kx_odd[n / 2] = 0.0;
        let mut ky_odd = ky.clone();
        ky_odd[n / 2] = 0.0;
        Self {
            n,
            fwd,
            inv,
            kx,
            ky,
            kx_odd,
            ky_odd,
        }
    }

    #[inline]
    pub fn half(&self) -> usize {
        self.n / 2 + 1
    }

    #[inline]
    pub fn k2(&self, a: usize, b: usize) -> f64 {
        self.kx[a] * self.kx[a] + self.ky[b] * self.ky[b]
    }

    /// Multiplicity of half-spectrum column `a` in the full spectrum.
    #[inline]
    pub fn weight(&self, a: usize) -> f64 {
        if a == 0 || a == self.n / 2 {
            1.0
        } else {
            2.0
        }
    }

    /// Forward transform of a row-major real array (`values[iy * n + ix]`).
    pub fn forward(&self, values: &[f64]) -> Vec<Complex64> {
        let n = self.n;
        let m = self.half();
        debug_assert_eq!(values.len(), n * n);
        let mut scratch = vec![Complex64::default(); self.fwd.get_inplace_scratch_len()];
        let mut rows = vec![Complex64::default(); n];
        let mut out = vec![Complex64::default(); m * n];
        // two real rows per complex transform
        for pair in 0..n / 2 {
            let r0 = 2 * pair;
            let r1 = r0 + 1;
            for ix in 0..n {
                rows[ix] = Complex64::new(values[r0 * n + ix], values[r1 * n + ix]);
            }
            self.fwd.process_with_scratch(&mut rows, &mut scratch);
            for a in 0..m {
                let z = rows[a];
                let zc = rows[(n - a) % n].conj();
                let f0 = (z + zc) * 0.5;
                let f1 = (z - zc) * Complex64::new(0.0, -0.5);
                out[a * n + r0] = f0;
                out[a * n + r1] = f1;
            }
        }
        self.fwd.process_with_scratch(&mut out, &mut scratch);
        let norm = 1.0 / (n * n) as f64;
        for z in out.iter_mut() {
            *z *= norm;
        }
        out
    }

    /// Inverse of [`Plan::forward`]; the Hermitian part of the input is used.
    pub fn inverse(&self, coeffs: &[Complex64]) -> Vec<f64> {
        let n = self.n;
        let m = self.half();
        debug_assert_eq!(coeffs.len(), m * n);
        let mut scratch = vec![Complex64::default(); self.inv.get_inplace_scratch_len()];
        let mut cols = coeffs.to_vec();
        self.inv.process_with_scratch(&mut cols, &mut scratch);
        let mut values = vec![0.0; n * n];
        let mut rows = vec![Complex64::default(); n];
        let i = Complex64::new(0.0, 1.0);
        for pair in 0..n / 2 {
            let r0 = 2 * pair;
            let r1 = r0 + 1;
            for a in 0..m {
                let mut f0 = cols[a * n + r0];
                let mut f1 = cols[a * n + r1];
                if a == 0 || a == n / 2 {
                    f0.im = 0.0;
                    f1.im = 0.0;
                }
                rows[a] = f0 + i * f1;
                if a != 0 && a != n / 2 {
                    rows[n - a] = f0.conj() + i * f1.conj();
                }
            }
            self.inv.process_with_scratch(&mut rows, &mut scratch);
            for ix in 0..n {
                values[r0 * n + ix] = rows[ix].re;
                values[r1 * n + ix] = rows[ix].im;
            }
        }
        values
    }
}

/// Fourier coefficients of a real field (half spectrum, see module docs).
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralCoeffs {
    grid: GridSpec,
    data: Vec<Complex64>,
}

impl SpectralCoeffs {
    pub fn from_field(f: &ScalarField) -> Self {
        let p = plan(f.grid());
        Self {
            grid: *f.grid(),
            data: p.forward(f.as_slice()),
        }
    }

    pub(crate) fn from_raw(grid: GridSpec, data: Vec<Complex64>) -> Self {
        Self { grid, data }
    }

    pub fn to_field(&self) -> ScalarField {
        let p = plan(&self.grid);
        ScalarField::from_vec_unchecked(self.grid, p.inverse(&self.data))
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub(crate) fn data(&self) -> &[Complex64] {
        &self.data
    }

    /// Coefficient of full-spectrum index `(ix, iy)`, reconstructed from the
    /// half spectrum by conjugate symmetry.
    pub fn mode(&self, ix: usize, iy: usize) -> Complex64 {
        let n = self.grid.n();
        if ix <= n / 2 {
            self.data[ix * n + iy]
        } else {
            self.data[(n - ix) * n + (n - iy) % n].conj()
        }
    }

    pub fn zero_mode(&self) -> f64 {
        self.data[0].re
    }

    /// `Σ |c_k|²` over the full spectrum.
    pub fn energy(&self) -> f64 {
        let p = plan(&self.grid);
        let n = self.grid.n();
        let mut s = 0.0;
        for a in 0..p.half() {
            let w = p.weight(a);
            s += w * self.data[a * n..(a + 1) * n]
                .iter()
                .map(|z| z.norm_sqr())
                .sum::<f64>();
        }
        s
    }

    /// Fraction of the non-mean spectral energy carried by the top third of
    /// the resolved band.
    pub fn tail_fraction(&self) -> f64 {
        let p = plan(&self.grid);
        let n = self.grid.n();
        let (mut tail, mut total) = (0.0, 0.0);
        for a in 0..p.half() {
            let w = p.weight(a);
            for b in 0..n {
                if a == 0 && b == 0 {
                    continue;
                }
                let e = w * self.data[a * n + b].norm_sqr();
                total += e;
                if self.grid.in_top_third(a, b) {
                    tail += e;
                }
            }
        }
        if total > 0.0 {
            tail / total
        } else {
            0.0
        }
    }

    /// Multiply every mode by `mult(|k|²)`.
    pub(crate) fn map_k2(&mut self, mult: impl Fn(f64) -> f64) {
        let p = plan(&self.grid);
        let n = self.grid.n();
        for a in 0..p.half() {
            for b in 0..n {
                self.data[a * n + b] *= mult(p.k2(a, b));
            }
        }
    }

    /// `∂x` and `∂y` in spectral space (Nyquist modes dropped).
    pub(crate) fn derivatives(&self) -> (SpectralCoeffs, SpectralCoeffs) {
        let p = plan(&self.grid);
        let n = self.grid.n();
        let mut dx = self.data.clone();
        let mut dy = self.data.clone();
        for a in 0..p.half() {
            for b in 0..n {
                let c = self.data[a * n + b];
                dx[a * n + b] = Complex64::new(-c.im, c.re) * p.kx_odd[a];
                dy[a * n + b] = Complex64::new(-c.im, c.re) * p.ky_odd[b];
            }
        }
        (
            SpectralCoeffs::from_raw(self.grid, dx),
            SpectralCoeffs::from_raw(self.grid, dy),
        )
    }
}

/// Spectral gradient `(∂x f, ∂y f)`.
pub fn gradient(f: &ScalarField) -> Result<(ScalarField, ScalarField)> {
    f.check_finite()?;
    let (dx, dy) = SpectralCoeffs::from_field(f).derivatives();
    Ok((dx.to_field(), dy.to_field()))
}

/// Spectral divergence `∂x fx + ∂y fy`.
pub fn divergence(fx: &ScalarField, fy: &ScalarField) -> Result<ScalarField> {
    fx.grid().check_same(fy.grid())?;
    fx.check_finite()?;
    fy.check_finite()?;
    let (dxx, _) = SpectralCoeffs::from_field(fx).derivatives();
    let (_, dyy) = SpectralCoeffs::from_field(fy).derivatives();
    let mut out = dxx;
    for (o, d) in out.data.iter_mut().zip(dyy.data.iter()) {
        *o += *d;
    }
    Ok(out.to_field())
}

/// Spectral Laplacian, multiplying mode `k` by `-|k|²`.
pub fn laplacian(f: &ScalarField) -> Result<ScalarField> {
    f.check_finite()?;
    let mut c = SpectralCoeffs::from_field(f);
    c.map_k2(|k2| -k2);
    Ok(c.to_field())
}

/// Exact propagator `e^{t(Δ-λ)} f`: mode `k` is multiplied by
/// `exp(-t(|k|² + λ))`. With `λ = 0` the zero mode is left untouched.
pub fn heat_propagate(f: &ScalarField, t: f64, lambda: f64) -> Result<ScalarField> {
    if !(t >= 0.0) {
        return Err(Error::NegativeTime(t));
    }
    if !(lambda >= 0.0) {
        return Err(Error::InvalidConfig(format!("negative rate λ = {lambda}")));
    }
    f.check_finite()?;
    if t == 0.0 {
        return Ok(f.clone());
    }
    let mut c = SpectralCoeffs::from_field(f);
    propagate_coeffs(&mut c, t, lambda);
    Ok(c.to_field())
}

pub(crate) fn propagate_coeffs(c: &mut SpectralCoeffs, t: f64, lambda: f64) {
    c.map_k2(|k2| {
        let rate = k2 + lambda;
        if rate == 0.0 {
            1.0
        } else {
            (-t * rate).exp()
        }
    });
}
