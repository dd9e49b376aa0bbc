use num_complex::Complex64;
use serde::Serialize;

use super::potential::{PotentialSpec, Segment};
use crate::constants::QuantumUnits;
use crate::error::{Error, Result};

type Mat2 = [[Complex64; 2]; 2];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScatteringResult {
    pub energy: f64,
    /// |r|²
    pub r_prob: f64,
    /// (k_out/k_in)·|t|²
    pub t_prob: f64,
    /// Reflected amplitude, phase referenced to the end of the incoming lead.
    pub r: Complex64,
    /// Transmitted amplitude, phase referenced to the start of the outgoing lead.
    pub t: Complex64,
}

fn local_k(energy: f64, v: f64, units: QuantumUnits) -> Complex64 {
    (Complex64::new(2.0 * units.mass * (energy - v), 0.0)).sqrt() / units.hbar
}

/// Maps (ψ, ψ') across a constant-potential slab of the given width.
/// The determinant is exactly one for any complex `k`.
pub fn segment_matrix(k: Complex64, width: f64) -> Mat2 {
    let x = k * width;
    let (c, s) = (x.cos(), x.sin());
    // sin(kL)/k without the 0/0 at k = 0
    let sinc = if x.norm() < 1e-4 { Complex64::new(width, 0.0) * (1.0 - x * x / 6.0) } else { s / k };
    [[c, sinc], [-k * s, c]]
}

fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

fn mat_vec(a: &Mat2, v: [Complex64; 2]) -> [Complex64; 2] {
    [a[0][0] * v[0] + a[0][1] * v[1], a[1][0] * v[0] + a[1][1] * v[1]]
}

fn piecewise_segments(potential: &PotentialSpec) -> Result<&[Segment]> {
    potential.validate()?;
    match potential {
        PotentialSpec::Piecewise { segments } => Ok(segments),
        other => Err(Error::config(format!("scattering needs a piecewise-constant potential, got {other:?}"))),
    }
}

fn check_leads(segments: &[Segment], energy: f64) -> Result<()> {
    let (first, last) = (segments[0].v, segments[segments.len() - 1].v);
    if !(energy > first && energy > last) {
        return Err(Error::domain(format!("energy {energy} must exceed both asymptotic potentials ({first}, {last})")));
    }
    Ok(())
}

/// Product of the interior slab matrices, left to right.
pub(crate) fn interior_transfer(segments: &[Segment], energy: f64, units: QuantumUnits) -> Mat2 {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let mut m = [[one, zero], [zero, one]];
    if segments.len() > 2 {
        for s in &segments[1..segments.len() - 1] {
            let k = local_k(energy, s.v, units);
            m = mat_mul(&segment_matrix(k, s.z_end - s.z_start), &m);
        }
    }
    m
}

/// Exact transfer-matrix solution for a wave incident from the left.
pub fn solve_scattering(potential: &PotentialSpec, energy: f64, units: QuantumUnits) -> Result<ScatteringResult> {
    let segments = piecewise_segments(potential)?;
    check_leads(segments, energy)?;
    let k_in = local_k(energy, segments[0].v, units);
    let k_out = local_k(energy, segments[segments.len() - 1].v, units);
    let i = Complex64::i();
    let (r, t) = if segments.len() == 1 {
        (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0))
    } else {
        let m = interior_transfer(segments, energy, units);
        // left lead state at the interface: (1 + r, i k_in (1 − r))
        let a = m[0][0] + i * k_in * m[0][1];
        let b = m[0][0] - i * k_in * m[0][1];
        let c = m[1][0] + i * k_in * m[1][1];
        let d = m[1][0] - i * k_in * m[1][1];
        let r = (c - i * k_out * a) / (i * k_out * b - d);
        (r, a + r * b)
    };
    Ok(ScatteringResult { energy, r_prob: r.norm_sqr(), t_prob: k_out.re / k_in.re * t.norm_sqr(), r, t })
}

/// The scattering state ψ(z) for incidence from the left with unit amplitude.
pub fn scattering_wavefunction(
    potential: &PotentialSpec,
    energy: f64,
    units: QuantumUnits,
    z: &[f64],
) -> Result<Vec<Complex64>> {
    let res = solve_scattering(potential, energy, units)?;
    let segments = piecewise_segments(potential)?;
    let i = Complex64::i();
    let k_in = local_k(energy, segments[0].v, units);
    let k_out = local_k(energy, segments[segments.len() - 1].v, units);
    if segments.len() == 1 {
        return Ok(z.iter().map(|&z| (i * k_in * z).exp()).collect());
    }
    let z_left = segments[0].z_end;
    let z_right = segments[segments.len() - 1].z_start;
    // (ψ, ψ') at the start of each interior segment
    let mut states = Vec::with_capacity(segments.len());
    let mut state = [1.0 + res.r, i * k_in * (1.0 - res.r)];
    for s in &segments[1..segments.len() - 1] {
        states.push(state);
        let k = local_k(energy, s.v, units);
        state = mat_vec(&segment_matrix(k, s.z_end - s.z_start), state);
    }
    Ok(z.iter()
        .map(|&zz| {
            if zz < z_left {
                (i * k_in * (zz - z_left)).exp() + res.r * (-i * k_in * (zz - z_left)).exp()
            } else if zz >= z_right {
                res.t * (i * k_out * (zz - z_right)).exp()
            } else {
                let idx = segments[1..segments.len() - 1].partition_point(|s| s.z_end <= zz);
                let s = &segments[1 + idx];
                let k = local_k(energy, s.v, units);
                mat_vec(&segment_matrix(k, zz - s.z_start), states[idx])[0]
            }
        })
        .collect())
}

/// Textbook transmission through a rectangular barrier of height `v0` and
/// width `a`, for `E > 0`.
pub fn rectangular_barrier(v0: f64, a: f64, energy: f64, units: QuantumUnits) -> f64 {
    if energy == v0 {
        // limit of both branches as q → 0
        return 1.0 / (1.0 + units.mass * v0 * a * a / (2.0 * units.hbar * units.hbar));
    }
    let q = (2.0 * units.mass * (v0 - energy).abs()).sqrt() / units.hbar;
    let s = if energy < v0 { (q * a).sinh() } else { (q * a).sin() };
    1.0 / (1.0 + v0 * v0 * s * s / (4.0 * energy * (v0 - energy).abs()))
}
