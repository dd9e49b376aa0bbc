//! Second-moment widths, the Δx·Δk uncertainty product, and the
//! single-pulse ambiguity function χ(τ, f_d).
//!
//! The pulse variable is the grid coordinate; wavenumbers are angular, so
//! the minimum product is 1/2.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Grid1D;
use crate::spectral::Spectral;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PulseShape {
    Gaussian,
    Sech,
    Rectangular,
    Custom,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PulseProfile {
    pub grid: Grid1D,
    pub samples: Vec<Complex64>,
    pub label: PulseShape,
}

impl PulseProfile {
    pub fn custom(grid: Grid1D, samples: Vec<Complex64>) -> Result<Self> {
        if samples.len() != grid.n {
            return Err(Error::config(format!("pulse has {} samples, grid has {}", samples.len(), grid.n)));
        }
        if samples.iter().any(|x| !x.re.is_finite() || !x.im.is_finite()) {
            return Err(Error::domain("pulse contains non-finite samples"));
        }
        Ok(PulseProfile { grid, samples, label: PulseShape::Custom })
    }

    fn from_fn(grid: Grid1D, label: PulseShape, f: impl Fn(f64) -> Complex64) -> Self {
        PulseProfile { grid, samples: grid.coords().into_iter().map(f).collect(), label }
    }

    /// exp(−x²/2 + i c x²).
    pub fn chirped_gaussian(grid: Grid1D, chirp: f64) -> Self {
        Self::from_fn(grid, PulseShape::Gaussian, |x| Complex64::from_polar((-x * x / 2.0).exp(), chirp * x * x))
    }

    pub fn gaussian(grid: Grid1D) -> Self {
        Self::chirped_gaussian(grid, 0.0)
    }

    pub fn sech(grid: Grid1D) -> Self {
        Self::from_fn(grid, PulseShape::Sech, |x| Complex64::new(1.0 / x.cosh(), 0.0))
    }

    /// Unit pulse on the `round(duration/dz)` nodes starting at −duration/2.
    pub fn rectangular(grid: Grid1D, duration: f64) -> Result<Self> {
        let m = (duration / grid.dz()).round() as usize;
        if m == 0 || m > grid.n {
            return Err(Error::domain(format!("duration {duration} is not resolvable on the grid")));
        }
        let start = ((-duration / 2.0 - grid.z_min) / grid.dz()).round().max(0.0) as usize;
        let mut samples = vec![Complex64::new(0.0, 0.0); grid.n];
        for s in samples.iter_mut().skip(start).take(m) {
            *s = Complex64::new(1.0, 0.0);
        }
        Ok(PulseProfile { grid, samples, label: PulseShape::Rectangular })
    }

    pub fn by_shape(grid: Grid1D, shape: PulseShape, duration: f64) -> Result<Self> {
        match shape {
            PulseShape::Gaussian => Ok(Self::gaussian(grid)),
            PulseShape::Sech => Ok(Self::sech(grid)),
            PulseShape::Rectangular => Self::rectangular(grid, duration),
            PulseShape::Custom => Err(Error::config("custom pulses need explicit samples")),
        }
    }

    pub fn norm(&self) -> f64 {
        self.grid.integrate(&self.samples.iter().map(|x| x.norm_sqr()).collect::<Vec<_>>())
    }

    /// Copy scaled to unit norm.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if !(n > 0.0) {
            return Err(Error::domain("pulse has zero norm"));
        }
        let s = 1.0 / n.sqrt();
        Ok(PulseProfile { grid: self.grid, samples: self.samples.iter().map(|x| x * s).collect(), label: self.label })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Widths {
    pub delta_x: f64,
    pub delta_k: f64,
    /// True when the k² moment is not converged on the grid (e.g. a
    /// rectangular pulse, whose exact Δk is infinite); `delta_k` is then
    /// only the finite discrete-grid value.
    pub divergent: bool,
}

impl Widths {
    pub fn product(&self) -> f64 {
        self.delta_x * self.delta_k
    }
}

fn spread(weights: &[f64], x: &[f64]) -> f64 {
    let total: f64 = weights.iter().sum();
    let mean = weights.iter().zip(x).map(|(w, x)| w * x).sum::<f64>() / total;
    (weights.iter().zip(x).map(|(w, x)| w * (x - mean).powi(2)).sum::<f64>() / total).sqrt()
}

/// Δx under |u|² and Δk under the discrete Fourier power spectrum.
pub fn moment_widths(pulse: &PulseProfile) -> Result<Widths> {
    let rho: Vec<f64> = pulse.samples.iter().map(|x| x.norm_sqr()).collect();
    if !(rho.iter().sum::<f64>() > 0.0) {
        return Err(Error::domain("pulse has zero norm"));
    }
    let delta_x = spread(&rho, &pulse.grid.coords());
    let mut spec = pulse.samples.clone();
    let mut sp = Spectral::new(pulse.grid);
    sp.forward(&mut spec);
    let power: Vec<f64> = spec.iter().map(|x| x.norm_sqr()).collect();
    let k = sp.k().to_vec();
    let delta_k = spread(&power, &k);
    let k_nyquist = PI / pulse.grid.dz();
    let total: f64 = power.iter().zip(&k).map(|(p, k)| p * k * k).sum();
    let outer: f64 = power.iter().zip(&k).filter(|(_, k)| k.abs() > 0.5 * k_nyquist).map(|(p, k)| p * k * k).sum();
    let divergent = total > 0.0 && outer > 1e-6 * total;
    Ok(Widths { delta_x, delta_k, divergent })
}

/// Δx·Δk.
pub fn uncertainty_product(pulse: &PulseProfile) -> Result<f64> {
    moment_widths(pulse).map(|w| w.product())
}

/// ½√(1 + 4c²), the exact product of exp(−x²/2 + i c x²).
pub fn chirped_gaussian_product(chirp: f64) -> f64 {
    0.5 * (1.0 + 4.0 * chirp * chirp).sqrt()
}

/// π/6, the exact product of sech(x) (sech ↔ π·sech(πk/2)).
pub const SECH_PRODUCT: f64 = PI / 6.0;

/// Test corpus: random superpositions of Hermite functions of order ≤ 5 with
/// random width, centre and chirp.
pub fn hermite_corpus(grid: Grid1D, count: usize, seed: u64) -> Vec<PulseProfile> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut uniform = move || (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
    let half = 0.5 * grid.length();
    (0..count)
        .map(|_| {
            let coeffs: Vec<Complex64> =
                (0..6).map(|_| Complex64::new(2.0 * uniform() - 1.0, 2.0 * uniform() - 1.0)).collect();
            let width = 0.5 + uniform();
            let center = grid.z_min + half + (uniform() - 0.5) * 0.2 * half;
            let chirp = (uniform() - 0.5) * 0.5;
            let samples = grid
                .coords()
                .into_iter()
                .map(|z| {
                    let x = (z - center) / width;
                    let (mut h0, mut h1) = (1.0, 2.0 * x);
                    let mut acc = coeffs[0] * h0 + coeffs[1] * h1;
                    for (j, c) in coeffs.iter().enumerate().skip(2) {
                        let h2 = 2.0 * x * h1 - 2.0 * (j - 1) as f64 * h0;
                        acc += c * h2 / (1u64 << j) as f64;
                        h0 = h1;
                        h1 = h2;
                    }
                    acc * Complex64::from_polar((-x * x / 2.0).exp(), chirp * x * x)
                })
                .collect();
            PulseProfile { grid, samples, label: PulseShape::Custom }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AmbiguitySurface {
    pub delay_axis: Vec<f64>,
    pub doppler_axis: Vec<f64>,
    /// |χ(τ_i, f_j)|, indexed [delay][doppler].
    pub magnitude: Vec<Vec<f64>>,
    /// Σ|χ|² Δτ Δf over the lattice.
    pub volume: f64,
    /// Set when the requested lattice exceeds what the grid resolves.
    pub warning: Option<String>,
}

/// χ(τ, f_d) = ∫u(t)u*(t−τ)e^{i2πf_d t}dt on the normalized pulse, for
/// `n_delay` lags of one grid step centred on zero and `n_doppler`
/// frequencies spanning the full Doppler period 1/dt.
pub fn ambiguity_surface(pulse: &PulseProfile, n_delay: usize, n_doppler: usize) -> Result<AmbiguitySurface> {
    if n_delay == 0 || n_doppler == 0 {
        return Err(Error::config("ambiguity lattice needs at least one delay and one Doppler bin"));
    }
    let p = pulse.normalized()?;
    let n = p.grid.n;
    let dt = p.grid.dz();
    let mut warnings = vec![];
    if n_delay > 2 * n - 1 {
        warnings.push(format!("{n_delay} delays requested but only {} lags exist", 2 * n - 1));
    }
    if n_doppler > n {
        warnings.push(format!("{n_doppler} Doppler bins requested but the grid resolves only {n}"));
    }
    let df = 1.0 / (n_doppler as f64 * dt);
    let lags: Vec<i64> = (0..n_delay as i64).map(|i| i - n_delay as i64 / 2).collect();
    let doppler_axis: Vec<f64> = (0..n_doppler).map(|j| (j as f64 - (n_doppler / 2) as f64) * df).collect();
    let t = p.grid.coords();
    let u = &p.samples;
    let magnitude: Vec<Vec<f64>> = lags
        .par_iter()
        .map(|&m| {
            let prod: Vec<(f64, Complex64)> = (0..n as i64)
                .filter_map(|i| {
                    let j = i - m;
                    (0..n as i64).contains(&j).then(|| (t[i as usize], u[i as usize] * u[j as usize].conj()))
                })
                .filter(|(_, a)| *a != Complex64::new(0.0, 0.0))
                .collect();
            doppler_axis
                .iter()
                .map(|&f| {
                    prod.iter()
                        .map(|&(ti, a)| a * Complex64::from_polar(1.0, 2.0 * PI * f * ti))
                        .sum::<Complex64>()
                        .norm()
                        * dt
                })
                .collect()
        })
        .collect();
    let volume = magnitude.iter().flatten().map(|x| x * x).sum::<f64>() * dt * df;
    Ok(AmbiguitySurface {
        delay_axis: lags.iter().map(|&m| m as f64 * dt).collect(),
        doppler_axis,
        magnitude,
        volume,
        warning: if warnings.is_empty() { None } else { Some(warnings.join("; ")) },
    })
}
