//! Leapfrog evolver for the 1+1D Klein-Gordon equation
//! `∂²u/∂t² − ∂²u/∂z² + ω_o² u = 0` (c = 1, ω_o = 2π f_o).
//!
//! Wavenumbers are in cycles per length, so a plane wave `cos(2πkz)`
//! oscillates at `f = √(f_o² + k²)`. Reported frequencies are plain (not
//! angular) frequencies.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::Grid1D;

/// Real field on a periodic grid with the two time levels leapfrog needs.
#[derive(Debug, Clone, PartialEq)]
pub struct RealField1D {
    pub grid: Grid1D,
    pub u: Vec<f64>,
    /// Samples at `t − dt`.
    pub u_prev: Vec<f64>,
    pub t: f64,
    pub dt: f64,
}

impl RealField1D {
    /// Builds the two starting levels from closures for `u(z, 0)` and `u(z, −dt)`.
    pub fn from_levels(grid: Grid1D, dt: f64, now: impl Fn(f64) -> f64, previous: impl Fn(f64) -> f64) -> Result<Self> {
        grid.require_spectral(16)?;
        if !(dt > 0.0) {
            return Err(Error::config(format!("time step must be positive, got {dt}")));
        }
        let z = grid.coords();
        Ok(RealField1D {
            grid,
            u: z.iter().map(|&z| now(z)).collect(),
            u_prev: z.iter().map(|&z| previous(z)).collect(),
            t: 0.0,
            dt,
        })
    }

    /// Standing wave `cos(2πkz)·cos(2πft)` with the continuum frequency.
    pub fn standing_wave(grid: Grid1D, k: f64, f_o: f64, dt: f64) -> Result<Self> {
        let f = f_o.hypot(k);
        let phase = (2.0 * PI * f * dt).cos();
        RealField1D::from_levels(grid, dt, |z| (2.0 * PI * k * z).cos(), |z| (2.0 * PI * k * z).cos() * phase)
    }

    /// Discrete energy at the half step between `u_prev` and `u`:
    /// `dz·Σ[(Δu/dt)² + D⁺u·D⁺u_prev + ω_o²·u·u_prev]`, exactly conserved by leapfrog.
    pub fn energy(&self, f_o: f64) -> f64 {
        let n = self.grid.n;
        let dz = self.grid.dz();
        let w2 = (2.0 * PI * f_o).powi(2);
        let mut e = 0.0;
        for i in 0..n {
            let j = (i + 1) % n;
            let ut = (self.u[i] - self.u_prev[i]) / self.dt;
            let gz_now = (self.u[j] - self.u[i]) / dz;
            let gz_prev = (self.u_prev[j] - self.u_prev[i]) / dz;
            e += ut * ut + gz_now * gz_prev + w2 * self.u[i] * self.u_prev[i];
        }
        e * dz
    }

    /// Swaps the two time levels, which runs leapfrog backwards in time.
    pub fn reverse(&mut self) {
        std::mem::swap(&mut self.u, &mut self.u_prev);
        self.dt = -self.dt;
    }
}

fn check_cfl(grid: &Grid1D, f_o: f64, dt: f64) -> Result<()> {
    let dz = grid.dz();
    let w = 2.0 * PI * f_o;
    if dt.abs() > dz {
        return Err(Error::config(format!("CFL violated: dt = {} exceeds dz = {dz}", dt.abs())));
    }
    // von Neumann bound including the mass term
    if dt * dt * (4.0 / (dz * dz) + w * w) > 4.0 {
        return Err(Error::config(format!(
            "leapfrog unstable: dt = {} too large for dz = {dz}, f_o = {f_o}",
            dt.abs()
        )));
    }
    Ok(())
}

fn leapfrog_step(u: &[f64], u_prev: &[f64], out: &mut [f64], c1: f64, c2: f64) {
    let n = u.len();
    for i in 0..n {
        let left = u[(i + n - 1) % n];
        let right = u[(i + 1) % n];
        out[i] = c1 * u[i] - u_prev[i] + c2 * (left + right);
    }
}

/// Advances `field` by `steps` leapfrog steps of size `dt`, calling
/// `observe` after each step.
pub fn evolve_kg_observed(
    field: &mut RealField1D,
    f_o: f64,
    dt: f64,
    steps: usize,
    mut observe: impl FnMut(&RealField1D),
) -> Result<()> {
    if (dt - field.dt).abs() > 1e-15 * dt.abs().max(1.0) {
        return Err(Error::config(format!(
            "field was initialised with dt = {} but evolve was called with dt = {dt}",
            field.dt
        )));
    }
    check_cfl(&field.grid, f_o, dt)?;
    let dz = field.grid.dz();
    let r = (dt / dz).powi(2);
    let w2 = (2.0 * PI * f_o).powi(2);
    let c1 = 2.0 - 2.0 * r - dt * dt * w2;
    let mut next = vec![0.0; field.grid.n];
    for _ in 0..steps {
        leapfrog_step(&field.u, &field.u_prev, &mut next, c1, r);
        std::mem::swap(&mut field.u_prev, &mut field.u);
        std::mem::swap(&mut field.u, &mut next);
        field.t += dt;
        observe(field);
    }
    Ok(())
}

pub fn evolve_kg(mut field: RealField1D, f_o: f64, dt: f64, steps: usize) -> Result<RealField1D> {
    evolve_kg_observed(&mut field, f_o, dt, steps, |_| {})?;
    Ok(field)
}

/// Frequency of a plane wave of wavenumber `k` under the discrete scheme.
pub fn leapfrog_frequency(k: f64, f_o: f64, dz: f64, dt: f64) -> f64 {
    let kk = 2.0 / dz * (PI * k * dz).sin();
    let w = 2.0 * PI * f_o;
    let rhs = (kk * kk + w * w).sqrt() * dt / 2.0;
    2.0 / dt * rhs.asin() / (2.0 * PI)
}

/// Frequency of a sampled oscillation from its zero crossings (linear
/// interpolation between samples).
pub fn zero_crossing_frequency(samples: &[f64], dt: f64) -> Option<f64> {
    let mut crossings = Vec::new();
    for (i, w) in samples.windows(2).enumerate() {
        if w[0] == 0.0 {
            crossings.push(i as f64 * dt);
        } else if w[0] * w[1] < 0.0 {
            crossings.push((i as f64 + w[0] / (w[0] - w[1])) * dt);
        }
    }
    if crossings.len() < 3 {
        return None;
    }
    let span = crossings[crossings.len() - 1] - crossings[0];
    Some((crossings.len() - 1) as f64 / (2.0 * span))
}

#[derive(Debug, Clone, Serialize)]
pub struct PlaneWaveRun {
    pub k: f64,
    pub f_o: f64,
    pub measured_frequency: f64,
    pub continuum_frequency: f64,
    pub discrete_frequency: f64,
    pub relative_error: f64,
    pub energy_drift: f64,
    pub steps: usize,
    /// `(t, u(z=0, t))` after each step.
    pub series: Vec<(f64, f64)>,
}

/// Evolves a standing wave over one wavelength with `n` points, CFL number
/// `courant`, for at least `periods` oscillation periods, and measures its
/// frequency from the field at z = 0.
pub fn plane_wave_run(k: f64, f_o: f64, n: usize, courant: f64, periods: f64) -> Result<PlaneWaveRun> {
    if !(k >= 0.0) || !(f_o > 0.0) {
        return Err(Error::domain(format!("need k >= 0 and f_o > 0, got k={k}, f_o={f_o}")));
    }
    let length = if k > 0.0 { 1.0 / k } else { 1.0 / f_o };
    let grid = Grid1D::new(0.0, length, n)?;
    let dt = courant * grid.dz();
    let f = f_o.hypot(k);
    let steps = (periods / (f * dt)).ceil() as usize;
    let mut field = RealField1D::standing_wave(grid, k, f_o, dt)?;
    let e0 = field.energy(f_o);
    let mut samples = Vec::with_capacity(steps + 1);
    let mut series = Vec::with_capacity(steps + 1);
    samples.push(field.u[0]);
    series.push((0.0, field.u[0]));
    evolve_kg_observed(&mut field, f_o, dt, steps, |fld| {
        samples.push(fld.u[0]);
        series.push((fld.t, fld.u[0]));
    })?;
    let measured = zero_crossing_frequency(&samples, dt)
        .ok_or_else(|| Error::NumericalAbort("too few zero crossings to measure a frequency".into()))?;
    let e1 = field.energy(f_o);
    Ok(PlaneWaveRun {
        k,
        f_o,
        measured_frequency: measured,
        continuum_frequency: f,
        discrete_frequency: leapfrog_frequency(k, f_o, grid.dz(), dt),
        relative_error: (measured - f).abs() / f,
        energy_drift: ((e1 - e0) / e0).abs(),
        steps,
        series,
    })
}

/// Closed-form spatial decay rate (per unit length) of an evanescent field
/// driven below cutoff: 2π√(f_o² − f²).
pub fn evanescent_decay_rate(f_drive: f64, f_o: f64) -> Result<f64> {
    if !(f_drive > 0.0 && f_drive < f_o) {
        return Err(Error::domain(format!(
            "evanescent regime needs 0 < f_drive < f_o, got f_drive={f_drive}, f_o={f_o}"
        )));
    }
    Ok(2.0 * PI * ((f_o - f_drive) * (f_o + f_drive)).sqrt())
}

#[derive(Debug, Clone, Serialize)]
pub struct DrivenConfig {
    pub f_drive: f64,
    pub f_o: f64,
    /// Domain `[0, length]`; the drive sits at z = 0.
    pub length: f64,
    pub n: usize,
    pub courant: f64,
    /// Center and width of the tanh switch-on of the drive.
    pub ramp_center: f64,
    pub ramp_width: f64,
    /// Drive periods averaged by the lock-in amplitude measurement.
    pub lockin_periods: usize,
    /// Fraction of the domain at the far end covered by the damping sponge.
    pub sponge_fraction: f64,
    pub sponge_strength: f64,
    /// Fit window for the log-amplitude regression.
    pub fit_window: (f64, f64),
}

impl DrivenConfig {
    pub fn new(f_drive: f64, f_o: f64) -> Self {
        DrivenConfig {
            f_drive,
            f_o,
            length: 3.0,
            n: 600,
            courant: 0.5,
            ramp_center: 40.0,
            ramp_width: 5.0,
            lockin_periods: 20,
            sponge_fraction: 0.2,
            sponge_strength: 20.0,
            fit_window: (0.1, 1.2),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DrivenResult {
    pub closed_form_rate: f64,
    pub fitted_rate: f64,
    pub relative_error: f64,
    /// `(z, lock-in amplitude)` in steady state.
    pub profile: Vec<(f64, f64)>,
}

/// Drives node 0 at `f_drive` (a masked source), absorbs at the far end and
/// fits the steady-state amplitude envelope to `exp(−κz)`.
pub fn driven_decay(cfg: &DrivenConfig) -> Result<DrivenResult> {
    let kappa = evanescent_decay_rate(cfg.f_drive, cfg.f_o)?;
    if cfg.n < 16 || !(cfg.length > 0.0) {
        return Err(Error::config("driven domain needs n >= 16 and positive length"));
    }
    let n = cfg.n + 1;
    let dz = cfg.length / cfg.n as f64;
    let dt = cfg.courant * dz;
    if cfg.courant > 1.0 || dt * dt * (4.0 / (dz * dz) + (2.0 * PI * cfg.f_o).powi(2)) > 4.0 {
        return Err(Error::config("driven run violates the CFL condition"));
    }
    let w = 2.0 * PI * cfg.f_drive;
    let w2 = (2.0 * PI * cfg.f_o).powi(2);
    let r = (dt / dz).powi(2);
    let sponge_start = cfg.length * (1.0 - cfg.sponge_fraction);
    let sigma: Vec<f64> = (0..n)
        .map(|i| {
            let z = i as f64 * dz;
            if z > sponge_start {
                cfg.sponge_strength * ((z - sponge_start) / (cfg.length - sponge_start)).powi(2)
            } else {
                0.0
            }
        })
        .collect();
    let drive = |t: f64| 0.5 * (1.0 + ((t - cfg.ramp_center) / cfg.ramp_width).tanh()) * (w * t).sin();

    let period = 1.0 / cfg.f_drive;
    let settle = cfg.ramp_center + 6.0 * cfg.ramp_width;
    let lockin_steps = (cfg.lockin_periods as f64 * period / dt).round() as usize;
    let lockin_span = lockin_steps as f64 * dt;
    let start_step = (settle / dt).ceil() as usize;

    let mut u_prev = vec![0.0; n];
    let mut u = vec![0.0; n];
    let mut next = vec![0.0; n];
    let mut acc_cos = vec![0.0; n];
    let mut acc_sin = vec![0.0; n];
    for step in 1..=start_step + lockin_steps {
        let t = step as f64 * dt;
        for i in 1..n - 1 {
            let lap = u[i - 1] - 2.0 * u[i] + u[i + 1];
            let damp = 0.5 * sigma[i] * dt;
            next[i] = (2.0 * u[i] - (1.0 - damp) * u_prev[i] + r * lap - dt * dt * w2 * u[i]) / (1.0 + damp);
        }
        next[0] = drive(t);
        next[n - 1] = 0.0;
        std::mem::swap(&mut u_prev, &mut u);
        std::mem::swap(&mut u, &mut next);
        if step > start_step {
            let (s, c) = (w * t).sin_cos();
            for i in 0..n {
                acc_cos[i] += u[i] * c;
                acc_sin[i] += u[i] * s;
            }
        }
    }
    let profile: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let a = 2.0 * dt / lockin_span * acc_cos[i].hypot(acc_sin[i]);
            (i as f64 * dz, a)
        })
        .collect();
    let (xs, ys): (Vec<f64>, Vec<f64>) = profile
        .iter()
        .filter(|(z, a)| *z >= cfg.fit_window.0 && *z <= cfg.fit_window.1 && *a > 0.0)
        .map(|(z, a)| (*z, a.ln()))
        .unzip();
    let slope = linear_fit(&xs, &ys)
        .ok_or_else(|| Error::NumericalAbort("fit window contains fewer than two samples".into()))?
        .0;
    let fitted = -slope;
    Ok(DrivenResult {
        closed_form_rate: kappa,
        fitted_rate: fitted,
        relative_error: (fitted - kappa).abs() / kappa,
        profile,
    })
}

/// Least-squares line `y = slope·x + intercept`.
pub(crate) fn linear_fit(x: &[f64], y: &[f64]) -> Option<(f64, f64)> {
    let n = x.len();
    if n < 2 || y.len() != n {
        return None;
    }
    let mx = x.iter().sum::<f64>() / n as f64;
    let my = y.iter().sum::<f64>() / n as f64;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}
