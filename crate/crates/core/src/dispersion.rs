//! Closed-form relativistic waveguide kinematics.
//!
//! Everything here is in normalized units: frequencies in units of the
//! cutoff `f_o` (or with `f_o` passed explicitly), velocities as fractions of
//! `c`, wavenumbers in cycles per length with `c = 1` so that the Compton
//! wavenumber equals `f_o`.

use serde::Serialize;

use crate::error::{Error, Result};

fn check_velocity(v: f64) -> Result<()> {
    if (0.0..1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::domain(format!("velocity must lie in [0, 1) (units of c), got {v}")))
    }
}

pub fn lorentz_gamma(v: f64) -> Result<f64> {
    check_velocity(v)?;
    Ok(1.0 / (1.0 - v * v).sqrt())
}

/// Time-dilated internal clock frequency f_o·√(1 − v²).
pub fn clock_frequency(f_o: f64, v: f64) -> Result<f64> {
    check_velocity(v)?;
    Ok(f_o * (1.0 - v * v).sqrt())
}

/// Frequency of the accompanying wave f_o/√(1 − v²).
pub fn wave_frequency(f_o: f64, v: f64) -> Result<f64> {
    check_velocity(v)?;
    Ok(f_o / (1.0 - v * v).sqrt())
}

/// Kinematic quantities of a corpuscle zigzagging at longitudinal velocity `v`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KinematicState {
    pub v: f64,
    pub gamma: f64,
    pub f_clock: f64,
    pub f_wave: f64,
    /// Zigzag frequency; identical to the clock frequency.
    pub f_zigzag: f64,
    /// Zigzag angle with v = sin φ.
    pub phi: f64,
    /// Phase velocity 1/sin φ. `f64::INFINITY` at rest.
    pub v_phase: f64,
}

pub fn zigzag_state(v: f64) -> Result<KinematicState> {
    zigzag_state_with_cutoff(1.0, v)
}

pub fn zigzag_state_with_cutoff(f_o: f64, v: f64) -> Result<KinematicState> {
    let gamma = lorentz_gamma(v)?;
    let f_clock = clock_frequency(f_o, v)?;
    let phi = v.asin();
    let v_phase = if v == 0.0 { f64::INFINITY } else { 1.0 / phi.sin() };
    Ok(KinematicState { v, gamma, f_clock, f_wave: wave_frequency(f_o, v)?, f_zigzag: f_clock, phi, v_phase })
}

/// Klein-Gordon dispersion f = √(f_o² + k²).
pub fn kg_frequency(k: f64, f_o: f64) -> f64 {
    f_o.hypot(k)
}

/// Parabolic low-velocity branch, optionally including the rest frequency.
pub fn schrodinger_frequency(k: f64, f_o: f64, include_rest: bool) -> f64 {
    let kinetic = k * k / (2.0 * f_o);
    if include_rest {
        f_o + kinetic
    } else {
        kinetic
    }
}

/// Group velocity dω/dk = k/f of the Klein-Gordon branch.
pub fn kg_group_velocity(k: f64, f_o: f64) -> f64 {
    k / kg_frequency(k, f_o)
}

/// Clock frequency of the corpuscle whose wave has wavenumber `k`:
/// f_o·√(1 − v_g²) = f_o²/f_kg(k). For f_o = 1 this is the group velocity
/// curve read at the reciprocal wavenumber 1/k.
pub fn clock_branch_frequency(k: f64, f_o: f64) -> f64 {
    f_o * f_o / kg_frequency(k, f_o)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DispersionCurve {
    pub k_samples: Vec<f64>,
    pub f_kg: Vec<f64>,
    pub f_schrod: Vec<f64>,
    pub f_clock_branch: Vec<f64>,
}

pub fn dispersion_table(k_min: f64, k_max: f64, n_points: usize, f_o: f64) -> Result<DispersionCurve> {
    if n_points < 2 || !(k_min < k_max) || !k_min.is_finite() || !k_max.is_finite() {
        return Err(Error::domain(format!(
            "need n_points >= 2 and k_min < k_max, got n={n_points}, [{k_min}, {k_max}]"
        )));
    }
    if !(f_o > 0.0) {
        return Err(Error::domain(format!("cutoff must be positive, got {f_o}")));
    }
    let step = (k_max - k_min) / (n_points - 1) as f64;
    let k_samples: Vec<f64> =
        (0..n_points).map(|i| if i == n_points - 1 { k_max } else { k_min + i as f64 * step }).collect();
    Ok(DispersionCurve {
        f_kg: k_samples.iter().map(|&k| kg_frequency(k, f_o)).collect(),
        f_schrod: k_samples.iter().map(|&k| schrodinger_frequency(k, f_o, true)).collect(),
        f_clock_branch: k_samples.iter().map(|&k| clock_branch_frequency(k, f_o)).collect(),
        k_samples,
    })
}
