//! Bohr orbits from force balance, the phase accordance between the internal
//! clock and the accompanying wave, and the extra-arc quantization.
//!
//! Orbits are in SI with the Gaussian e² mapped to e²/(4πε₀). The kinematic
//! identities (phase accordance, extra arc time) take speeds as fractions of c
//! and work with c = 1, so lengths and times share one unit.

use serde::Serialize;

use crate::constants::{PhysicalConstants, CODATA_2018};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BohrOrbit {
    pub n: u32,
    /// Radius (m).
    pub r: f64,
    /// Orbital speed (m/s).
    pub v_e: f64,
    /// Total energy (J).
    #[serde(rename = "E")]
    pub energy: f64,
    /// Angular momentum (J·s).
    #[serde(rename = "M")]
    pub angular_momentum: f64,
    /// Orbital period (s).
    #[serde(rename = "T")]
    pub period: f64,
}

impl BohrOrbit {
    pub fn beta(&self) -> f64 {
        self.v_e / CODATA_2018.c
    }

    pub fn energy_ev(&self) -> f64 {
        self.energy / CODATA_2018.e_charge
    }

    pub fn kinetic_energy(&self) -> f64 {
        0.5 * CODATA_2018.m_e * self.v_e * self.v_e
    }

    /// Extra-arc quantization number for this orbit.
    pub fn quantization_number(&self) -> Result<f64> {
        let f_o = CODATA_2018.compton_cutoff(CODATA_2018.m_e)?;
        quantization_number(self.beta(), self.period, f_o)
    }

    /// m·v²·T/h, the non-relativistic form of the same condition.
    pub fn action_number(&self) -> f64 {
        let k = CODATA_2018;
        k.m_e * self.v_e * self.v_e * self.period / k.h
    }
}

pub fn orbit_from_n(n: u32) -> Result<BohrOrbit> {
    orbit_with_constants(n, &CODATA_2018)
}

pub fn orbit_with_constants(n: u32, k: &PhysicalConstants) -> Result<BohrOrbit> {
    if n < 1 {
        return Err(Error::domain("quantum number must be at least 1"));
    }
    let nf = n as f64;
    let e2 = k.coulomb_e2();
    let v_e = e2 / (nf * k.hbar);
    let r = nf * nf * k.hbar * k.hbar / (k.m_e * e2);
    let energy = -k.m_e * e2 * e2 / (2.0 * k.hbar * k.hbar * nf * nf);
    Ok(BohrOrbit { n, r, v_e, energy, angular_momentum: nf * k.hbar, period: 2.0 * std::f64::consts::PI * r / v_e })
}

/// Relative mismatch between centrifugal and Coulomb terms, (m v² r − e²)/e².
pub fn force_balance_residual(r: f64, v_e: f64) -> f64 {
    let e2 = CODATA_2018.coulomb_e2();
    (CODATA_2018.m_e * v_e * v_e * r - e2) / e2
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhasePair {
    pub phi_clock: f64,
    pub phi_wave: f64,
    pub z: f64,
    pub v: f64,
}

impl PhasePair {
    pub fn relative_deviation(&self) -> f64 {
        let scale = self.phi_clock.abs().max(f64::MIN_POSITIVE);
        (self.phi_wave - self.phi_clock).abs() / scale
    }
}

fn check_open_speed(v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("speed must lie in (0, 1), got {v}")))
    }
}

/// Phases in cycles of the moving clock and of the accompanying wave at arc
/// positions `z`, for a clock of rest frequency `f_o` (c = 1).
///
/// The clock route counts ticks of the dilated clock over the travel time
/// z/v. The wave route evaluates the wave of frequency f_o·γ and phase speed
/// 1/v at the event (t = z/v, z).
pub fn phase_accordance(v: f64, f_o: f64, z_samples: &[f64]) -> Result<Vec<PhasePair>> {
    check_open_speed(v)?;
    if !(f_o.is_finite() && f_o > 0.0) {
        return Err(Error::domain(format!("rest frequency must be positive, got {f_o}")));
    }
    let gamma = 1.0 / (1.0 - v * v).sqrt();
    let f_clock = f_o / gamma;
    let f_wave = f_o * gamma;
    let v_phase = 1.0 / v;
    Ok(z_samples
        .iter()
        .map(|&z| {
            let t = z / v;
            PhasePair { phi_clock: f_clock * t, phi_wave: f_wave * (t - z / v_phase), z, v }
        })
        .collect())
}

/// Extra time τ = T·v²/(1 − v²) for the wave pattern to catch the corpuscle
/// again after one round trip of duration `period`.
pub fn extra_arc_time(v: f64, period: f64) -> Result<f64> {
    if !(v.is_finite() && (0.0..1.0).contains(&v)) {
        return Err(Error::domain(format!("speed must lie in [0, 1), got {v}")));
    }
    if !(period.is_finite() && period > 0.0) {
        return Err(Error::domain(format!("period must be positive, got {period}")));
    }
    Ok(period * v * v / (1.0 - v * v))
}

/// Relative residual of c²τ/v = (τ + T)·v with c = 1.
pub fn extra_arc_residual(v: f64, period: f64, tau: f64) -> f64 {
    let lhs = tau / v;
    let rhs = (tau + period) * v;
    (lhs - rhs).abs() / lhs.abs().max(rhs.abs()).max(f64::MIN_POSITIVE)
}

/// Cycles of the dilated clock during the extra arc time, f_o·√(1 − v²)·τ.
pub fn quantization_number(v: f64, period: f64, f_o: f64) -> Result<f64> {
    check_open_speed(v)?;
    if !(f_o.is_finite() && f_o > 0.0) {
        return Err(Error::domain(format!("rest frequency must be positive, got {f_o}")));
    }
    let tau = extra_arc_time(v, period)?;
    Ok(f_o * (1.0 - v * v).sqrt() * tau)
}

/// One row of the orbit table written by the command-line runner.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrbitRow {
    pub n: u32,
    pub r: f64,
    pub v_over_c: f64,
    pub energy_ev: f64,
    pub m_over_hbar: f64,
    pub n_quantization: f64,
}

pub fn orbit_table(n_min: u32, n_max: u32) -> Result<Vec<OrbitRow>> {
    if n_min < 1 || n_max < n_min {
        return Err(Error::domain(format!("invalid orbit range {n_min}..{n_max}")));
    }
    (n_min..=n_max)
        .map(|n| {
            let o = orbit_from_n(n)?;
            Ok(OrbitRow {
                n,
                r: o.r,
                v_over_c: o.beta(),
                energy_ev: o.energy_ev(),
                m_over_hbar: o.angular_momentum / CODATA_2018.hbar,
                n_quantization: o.quantization_number()?,
            })
        })
        .collect()
}
