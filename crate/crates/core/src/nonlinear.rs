//! Evolvers for the normalized NLS equation `i u_t + u_zz + 2|u|²u = 0`, the
//! Gross-Pitaevskii equation and the quantum-potential-cancelling equation
//!
//! ```text
//! iħ ψ_t = −(ħ²/2m) ψ_zz + V ψ + (ħ²/2m)(∂²|ψ|/∂z²)/|ψ| · ψ
//! ```
//!
//! whose last term is exactly −Q, so the modulus obeys pressureless transport.
//! All evolvers work on periodic power-of-two grids.

use num_complex::Complex64;
use serde::Serialize;

use crate::bohm::{self, Stencil};
use crate::constants::QuantumUnits;
use crate::error::{Error, Result};
use crate::grid::Grid1D;
use crate::spectral::Spectral;
use crate::stationary::PotentialSpec;

/// Relative norm drift that aborts a run.
pub const NORM_DRIFT_LIMIT: f64 = 1e-6;
/// Default modulus floor of the NLQ evolver, relative to max|ψ|.
pub const NLQ_FLOOR: f64 = 1e-8;
/// Default high-mode damping of the NLQ evolver; see [`NlqParams`].
pub const NLQ_FILTER_RATE: f64 = 3.6e4;
pub const NLQ_FILTER_ORDER: i32 = 8;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComplexField1D {
    pub grid: Grid1D,
    pub u: Vec<Complex64>,
    pub t: f64,
}

impl ComplexField1D {
    pub fn new(grid: Grid1D, u: Vec<Complex64>) -> Result<Self> {
        grid.require_spectral(16)?;
        if u.len() != grid.n {
            return Err(Error::config(format!("field has {} samples, grid has {}", u.len(), grid.n)));
        }
        if u.iter().any(|x| !x.re.is_finite() || !x.im.is_finite()) {
            return Err(Error::domain("field contains non-finite samples"));
        }
        Ok(ComplexField1D { grid, u, t: 0.0 })
    }

    pub fn from_fn(grid: Grid1D, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let u = grid.coords().into_iter().map(f).collect();
        Self::new(grid, u)
    }

    pub fn density(&self) -> Vec<f64> {
        self.u.iter().map(|x| x.norm_sqr()).collect()
    }

    pub fn modulus(&self) -> Vec<f64> {
        self.u.iter().map(|x| x.norm()).collect()
    }

    pub fn norm(&self) -> f64 {
        self.grid.integrate(&self.density())
    }

    pub fn moments(&self) -> Moments {
        let rho = self.density();
        let z = self.grid.coords();
        let norm = self.grid.integrate(&rho);
        if norm == 0.0 {
            return Moments { norm, centroid: f64::NAN, variance: f64::NAN };
        }
        let centroid = self.grid.integrate(&rho.iter().zip(&z).map(|(r, z)| r * z).collect::<Vec<_>>()) / norm;
        let variance =
            self.grid.integrate(&rho.iter().zip(&z).map(|(r, z)| r * (z - centroid).powi(2)).collect::<Vec<_>>())
                / norm;
        Moments { norm, centroid, variance }
    }

    pub fn conj(&self) -> Self {
        ComplexField1D { grid: self.grid, u: self.u.iter().map(|x| x.conj()).collect(), t: -self.t }
    }

    /// max |u − other| pointwise.
    pub fn max_distance(&self, other: &[Complex64]) -> f64 {
        self.u.iter().zip(other).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Moments {
    pub norm: f64,
    pub centroid: f64,
    /// Second central moment of |u|².
    pub variance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConservedSet {
    pub norm: f64,
    pub momentum: f64,
    pub energy: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Equation<'a> {
    Nls,
    Gp { potential: &'a PotentialSpec, g: f64, include_rest: bool },
    Nlq { potential: &'a PotentialSpec },
}

/// Norm, momentum Im∫u*u_z and the Hamiltonian of `equation`, by spectral quadrature.
pub fn conserved_set(field: &ComplexField1D, equation: Equation<'_>, units: QuantumUnits) -> ConservedSet {
    let grid = field.grid;
    let mut sp = Spectral::new(grid);
    let uz = sp.derivative(&field.u);
    let rho = field.density();
    let norm = grid.integrate(&rho);
    let momentum = grid.integrate(&field.u.iter().zip(&uz).map(|(u, d)| (u.conj() * d).im).collect::<Vec<_>>());
    let grad2: Vec<f64> = uz.iter().map(|d| d.norm_sqr()).collect();
    let z = grid.coords();
    let energy = match equation {
        Equation::Nls => grid.integrate(&grad2.iter().zip(&rho).map(|(g, r)| g - r * r).collect::<Vec<_>>()),
        Equation::Gp { potential, g, include_rest } => {
            let rest = if include_rest { units.mass } else { 0.0 };
            let v = potential.sample(&z);
            grid.integrate(
                &(0..grid.n)
                    .map(|i| units.kinetic() * grad2[i] + (v[i] + rest) * rho[i] + 0.5 * g * rho[i] * rho[i])
                    .collect::<Vec<_>>(),
            )
        }
        Equation::Nlq { potential } => {
            let rz = sp.derivative_real(&field.modulus());
            let v = potential.sample(&z);
            grid.integrate(
                &(0..grid.n).map(|i| units.kinetic() * (grad2[i] - rz[i] * rz[i]) + v[i] * rho[i]).collect::<Vec<_>>(),
            )
        }
    };
    ConservedSet { norm, momentum, energy }
}

/// Exact NLS breather a·exp[i(vz/2 + (a² − v²/4)t)]·sech[a(z − vt − z₀)].
pub fn breather_exact(a: f64, v: f64, z0: f64, z: f64, t: f64) -> Complex64 {
    let phase = v * z / 2.0 + (a * a - v * v / 4.0) * t;
    Complex64::from_polar(a / (a * (z - v * t - z0)).cosh(), phase)
}

/// Map between the Gross-Pitaevskii equation (V = 0, attractive g < 0) and
/// the normalized NLS: φ(z, t) = A·u(z, γt) with γ = ħ/2m and A² = −ħ²/(m g).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GpScaling {
    pub amplitude: f64,
    pub time_scale: f64,
}

pub fn gp_scaling(g: f64, units: QuantumUnits) -> Result<GpScaling> {
    if !(g < 0.0) {
        return Err(Error::domain(format!("the NLS map needs an attractive coupling g < 0, got {g}")));
    }
    Ok(GpScaling {
        amplitude: (-units.hbar * units.hbar / (units.mass * g)).sqrt(),
        time_scale: units.hbar / (2.0 * units.mass),
    })
}

/// Breather solution of the V = 0 Gross-Pitaevskii equation with coupling `g`.
pub fn gp_breather(a: f64, v: f64, z0: f64, g: f64, units: QuantumUnits, z: f64, t: f64) -> Result<Complex64> {
    let s = gp_scaling(g, units)?;
    Ok(s.amplitude * breather_exact(a, v, z0, z, s.time_scale * t))
}

/// GP coupling whose nonlinearity reproduces −Q (up to a constant) for the
/// envelope `amplitude·sech(a z)`: g·amplitude² = −ħ²a²/m.
pub fn locked_coupling(a: f64, amplitude: f64, units: QuantumUnits) -> f64 {
    -units.hbar * units.hbar * a * a / (units.mass * amplitude * amplitude)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Splitting {
    /// Second-order Strang splitting.
    #[default]
    Strang,
    /// Fourth-order Yoshida composition of Strang steps.
    Yoshida4,
}

impl Splitting {
    fn weights(self) -> &'static [f64] {
        const CBRT2: f64 = 1.259_921_049_894_873_2;
        const W1: f64 = 1.0 / (2.0 - CBRT2);
        const W0: f64 = -CBRT2 / (2.0 - CBRT2);
        match self {
            Splitting::Strang => &[1.0],
            Splitting::Yoshida4 => &[W1, W0, W1],
        }
    }
}

struct SplitStep {
    sp: Spectral,
    /// Linear propagators exp(−iω(k)τ) per distinct substep.
    propagators: Vec<Vec<Complex64>>,
    weights: &'static [f64],
    dt: f64,
}

impl SplitStep {
    fn new(grid: Grid1D, dt: f64, splitting: Splitting, omega: impl Fn(f64) -> f64) -> Self {
        let sp = Spectral::new(grid);
        let weights = splitting.weights();
        let propagators = weights
            .iter()
            .map(|w| sp.k().iter().map(|&k| Complex64::from_polar(1.0, -omega(k) * w * dt)).collect())
            .collect();
        SplitStep { sp, propagators, weights, dt }
    }

    /// One step; `rate(i, |u|²)` is the local phase rate of the nonlinear part.
    fn step(&mut self, u: &mut [Complex64], rate: &impl Fn(usize, f64) -> f64) {
        for (j, w) in self.weights.iter().enumerate() {
            let half = 0.5 * w * self.dt;
            rotate(u, half, rate);
            self.sp.forward(u);
            u.iter_mut().zip(&self.propagators[j]).for_each(|(x, p)| *x *= p);
            self.sp.inverse(u);
            rotate(u, half, rate);
        }
    }
}

fn rotate(u: &mut [Complex64], tau: f64, rate: &impl Fn(usize, f64) -> f64) {
    for (i, x) in u.iter_mut().enumerate() {
        let r = rate(i, x.norm_sqr());
        *x *= Complex64::from_polar(1.0, -r * tau);
    }
}

fn check_run(dt: f64) -> Result<()> {
    if !(dt.is_finite() && dt != 0.0) {
        return Err(Error::config(format!("time step must be finite and nonzero, got {dt}")));
    }
    Ok(())
}

fn check_norm(field: &ComplexField1D, n0: f64, step: usize) -> Result<()> {
    if n0 == 0.0 {
        return Ok(());
    }
    let drift = (field.norm() - n0).abs() / n0;
    if !(drift <= NORM_DRIFT_LIMIT) {
        return Err(Error::NumericalAbort(format!(
            "norm drift {drift:.3e} exceeds {NORM_DRIFT_LIMIT:.0e} at step {step} (t = {})",
            field.t
        )));
    }
    Ok(())
}

/// Calls `observe` on the initial field and then every `every` steps.
pub type Observer<'a> = &'a mut dyn FnMut(&ComplexField1D);

fn run_split(
    mut field: ComplexField1D,
    dt: f64,
    steps: usize,
    mut stepper: SplitStep,
    rate: impl Fn(usize, f64) -> f64,
    every: usize,
    observe: Observer<'_>,
) -> Result<ComplexField1D> {
    check_run(dt)?;
    let n0 = field.norm();
    let every = every.max(1);
    observe(&field);
    for s in 1..=steps {
        stepper.step(&mut field.u, &rate);
        field.t += dt;
        check_norm(&field, n0, s)?;
        if s % every == 0 {
            observe(&field);
        }
    }
    Ok(field)
}

/// Split-step evolution of `i u_t + u_zz + 2|u|²u = 0`.
pub fn evolve_nls(u0: ComplexField1D, dt: f64, steps: usize, splitting: Splitting) -> Result<ComplexField1D> {
    evolve_nls_observed(u0, dt, steps, splitting, usize::MAX, &mut |_| {})
}

pub fn evolve_nls_observed(
    u0: ComplexField1D,
    dt: f64,
    steps: usize,
    splitting: Splitting,
    every: usize,
    observe: Observer<'_>,
) -> Result<ComplexField1D> {
    let stepper = SplitStep::new(u0.grid, dt, splitting, |k| k * k);
    run_split(u0, dt, steps, stepper, |_, rho| -2.0 * rho, every, observe)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GpParams {
    pub potential: PotentialSpec,
    pub g: f64,
    /// Keep the rest-energy term mc²φ (c = 1); it only rotates the global phase.
    pub include_rest: bool,
    pub units: QuantumUnits,
    pub splitting: Splitting,
}

impl GpParams {
    pub fn free(g: f64) -> Self {
        GpParams {
            potential: PotentialSpec::Free {},
            g,
            include_rest: false,
            units: QuantumUnits::default(),
            splitting: Splitting::Strang,
        }
    }
}

/// Split-step evolution of the Gross-Pitaevskii equation, with V, g|φ|² and
/// the optional rest energy in the phase step.
pub fn evolve_gp(phi0: ComplexField1D, params: &GpParams, dt: f64, steps: usize) -> Result<ComplexField1D> {
    evolve_gp_observed(phi0, params, dt, steps, usize::MAX, &mut |_| {})
}

pub fn evolve_gp_observed(
    phi0: ComplexField1D,
    params: &GpParams,
    dt: f64,
    steps: usize,
    every: usize,
    observe: Observer<'_>,
) -> Result<ComplexField1D> {
    params.potential.validate()?;
    let u = params.units;
    let rest = if params.include_rest { u.mass } else { 0.0 };
    let v: Vec<f64> = params.potential.sample(&phi0.grid.coords()).into_iter().map(|v| v + rest).collect();
    let stepper = SplitStep::new(phi0.grid, dt, params.splitting, |k| u.hbar * k * k / (2.0 * u.mass));
    let g = params.g;
    run_split(phi0, dt, steps, stepper, move |i, rho| (v[i] + g * rho) / u.hbar, every, observe)
}

/// The nonlinear potential U = (ħ²/2m)(∂²R/∂z²)/R of the Q-cancelling
/// equation, with R = max(|ψ|, floor·max|ψ|).
pub fn nlq_potential(
    grid: &Grid1D,
    psi: &[Complex64],
    units: QuantumUnits,
    stencil: Stencil,
    floor: f64,
) -> Result<Vec<f64>> {
    if psi.len() != grid.n {
        return Err(Error::config(format!("field has {} samples, grid has {}", psi.len(), grid.n)));
    }
    let r = regularized_modulus(psi, floor);
    let d2 = bohm::second_derivative(grid, &r, stencil)?;
    Ok(d2.iter().zip(&r).map(|(d, r)| units.kinetic() * d / r).collect())
}

fn regularized_modulus(psi: &[Complex64], floor: f64) -> Vec<f64> {
    let peak = psi.iter().map(|x| x.norm()).fold(0.0, f64::max);
    let eps = floor * peak;
    psi.iter().map(|x| x.norm().max(eps).max(f64::MIN_POSITIVE)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct NlqParams {
    pub potential: PotentialSpec,
    pub units: QuantumUnits,
    /// Modulus floor relative to the initial max|ψ|.
    pub eps: f64,
    /// High-mode damping rate ν₀ of the filter exp(−dt·ν₀(k/k_Nyquist)^order).
    pub filter_rate: f64,
    pub filter_order: i32,
}

impl Default for NlqParams {
    fn default() -> Self {
        NlqParams {
            potential: PotentialSpec::Free {},
            units: QuantumUnits::default(),
            eps: NLQ_FLOOR,
            filter_rate: NLQ_FILTER_RATE,
            filter_order: NLQ_FILTER_ORDER,
        }
    }
}

struct NlqRhs {
    sp: Spectral,
    v: Vec<f64>,
    units: QuantumUnits,
    eps: f64,
    work: Vec<Complex64>,
    modulus: Vec<Complex64>,
}

impl NlqRhs {
    /// ψ_t = (−i/ħ)[−K ψ'' + V ψ + K (R''/R) ψ], spectral derivatives.
    fn eval(&mut self, psi: &[Complex64], out: &mut [Complex64]) {
        let k = self.units.kinetic();
        self.work.copy_from_slice(psi);
        self.sp.forward(&mut self.work);
        for (x, &kk) in self.work.iter_mut().zip(self.sp.k()) {
            *x *= -kk * kk;
        }
        self.sp.inverse(&mut self.work);
        for (m, p) in self.modulus.iter_mut().zip(psi) {
            *m = Complex64::new(p.norm().max(self.eps), 0.0);
        }
        let r: Vec<f64> = self.modulus.iter().map(|m| m.re).collect();
        self.sp.forward(&mut self.modulus);
        for (x, &kk) in self.modulus.iter_mut().zip(self.sp.k()) {
            *x *= -kk * kk;
        }
        self.sp.inverse(&mut self.modulus);
        let scale = Complex64::new(0.0, -1.0 / self.units.hbar);
        for i in 0..psi.len() {
            let h = -k * self.work[i] + (self.v[i] + k * self.modulus[i].re / r[i]) * psi[i];
            out[i] = scale * h;
        }
    }
}

/// Fraction of the active support (between the outermost points with
/// |ψ| ≥ 1e-2·max) lying below the floor.
fn underflow_fraction(psi: &[Complex64], eps: f64) -> f64 {
    let m: Vec<f64> = psi.iter().map(|x| x.norm()).collect();
    let peak = m.iter().fold(0.0f64, |a, &b| a.max(b));
    let Some(lo) = m.iter().position(|&x| x >= 1e-2 * peak) else { return 0.0 };
    let hi = m.iter().rposition(|&x| x >= 1e-2 * peak).unwrap_or(lo);
    let below = m[lo..=hi].iter().filter(|&&x| x < eps).count();
    below as f64 / (hi - lo + 1) as f64
}

/// RK4 evolution of the Q-cancelling equation, with an exponential
/// high-mode filter applied after every step.
pub fn evolve_nlq(psi0: ComplexField1D, params: &NlqParams, dt: f64, steps: usize) -> Result<ComplexField1D> {
    evolve_nlq_observed(psi0, params, dt, steps, usize::MAX, &mut |_| {})
}

pub fn evolve_nlq_observed(
    mut field: ComplexField1D,
    params: &NlqParams,
    dt: f64,
    steps: usize,
    every: usize,
    observe: Observer<'_>,
) -> Result<ComplexField1D> {
    check_run(dt)?;
    params.potential.validate()?;
    if !(params.eps > 0.0 && params.eps < 1.0) {
        return Err(Error::config(format!("eps must lie in (0, 1), got {}", params.eps)));
    }
    let n = field.grid.n;
    let peak = field.u.iter().map(|x| x.norm()).fold(0.0, f64::max);
    let eps = params.eps * peak;
    let mut rhs = NlqRhs {
        sp: Spectral::new(field.grid),
        v: params.potential.sample(&field.grid.coords()),
        units: params.units,
        eps: eps.max(f64::MIN_POSITIVE),
        work: vec![ZERO; n],
        modulus: vec![ZERO; n],
    };
    let n0 = field.norm();
    let every = every.max(1);
    let k_nyquist = std::f64::consts::PI / field.grid.dz();
    let filter: Vec<f64> = rhs
        .sp
        .k()
        .iter()
        .map(|k| (-dt.abs() * params.filter_rate * (k / k_nyquist).abs().powi(params.filter_order)).exp())
        .collect();
    let (mut k1, mut k2, mut k3, mut k4) = (vec![ZERO; n], vec![ZERO; n], vec![ZERO; n], vec![ZERO; n]);
    let mut stage = vec![ZERO; n];
    observe(&field);
    if peak == 0.0 {
        field.t += dt * steps as f64;
        return Ok(field);
    }
    for s in 1..=steps {
        let u = &field.u;
        rhs.eval(u, &mut k1);
        for i in 0..n {
            stage[i] = u[i] + 0.5 * dt * k1[i];
        }
        rhs.eval(&stage, &mut k2);
        for i in 0..n {
            stage[i] = u[i] + 0.5 * dt * k2[i];
        }
        rhs.eval(&stage, &mut k3);
        for i in 0..n {
            stage[i] = u[i] + dt * k3[i];
        }
        rhs.eval(&stage, &mut k4);
        for i in 0..n {
            field.u[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        // The modulus equation is only weakly hyperbolic, so the small
        // aliasing mismatch between ψ'' and |ψ|'' near Nyquist grows
        // exponentially unless the high modes are damped.
        rhs.sp.forward(&mut field.u);
        field.u.iter_mut().zip(&filter).for_each(|(x, f)| *x *= f);
        rhs.sp.inverse(&mut field.u);
        field.t += dt;
        let frac = underflow_fraction(&field.u, eps);
        if frac > 0.1 {
            return Err(Error::NumericalAbort(format!(
                "modulus below the floor on {:.1}% of the active support at t = {} (singular regime)",
                100.0 * frac,
                field.t
            )));
        }
        check_norm(&field, n0, s)?;
        if s % every == 0 {
            observe(&field);
        }
    }
    Ok(field)
}

/// Least-squares fit y ≈ c₀ + c₁x + c₂x²; returns [c₀, c₁, c₂].
pub fn quadratic_fit(x: &[f64], y: &[f64]) -> Option<[f64; 3]> {
    if x.len() < 3 || y.len() != x.len() {
        return None;
    }
    let x0 = x.iter().sum::<f64>() / x.len() as f64;
    let mut a = [[0.0f64; 4]; 3];
    for (&xi, &yi) in x.iter().zip(y) {
        let d = xi - x0;
        let p = [1.0, d, d * d];
        for r in 0..3 {
            for c in 0..3 {
                a[r][c] += p[r] * p[c];
            }
            a[r][3] += p[r] * yi;
        }
    }
    for col in 0..3 {
        let piv = (col..3).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        a.swap(col, piv);
        if a[col][col].abs() < 1e-300 {
            return None;
        }
        for r in 0..3 {
            if r != col {
                let f = a[r][col] / a[col][col];
                for c in col..4 {
                    a[r][c] -= f * a[col][c];
                }
            }
        }
    }
    let (b0, b1, b2) = (a[0][3] / a[0][0], a[1][3] / a[1][1], a[2][3] / a[2][2]);
    // undo the shift x → x − x0
    Some([b0 - b1 * x0 + b2 * x0 * x0, b1 - 2.0 * b2 * x0, b2])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stationary::{solve_bound_states, BoundOptions};
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn grid(l: f64, n: usize) -> Grid1D {
        Grid1D::new(-l, l, n).unwrap()
    }

    fn breather_field(g: Grid1D, a: f64, v: f64, t: f64) -> ComplexField1D {
        ComplexField1D::from_fn(g, |z| breather_exact(a, v, 0.0, z, t)).unwrap()
    }

    #[test]
    fn breather_examples() {
        assert_eq!(breather_exact(1.0, 0.0, 0.0, 0.0, 0.0), Complex64::new(1.0, 0.0));
        assert!((breather_exact(1.0, 0.0, 0.0, 0.0, PI) + 1.0).norm() < 1e-15);
    }

    proptest! {
        #[test]
        fn breather_modulus(a in 0.1f64..3.0, v in -2.0f64..2.0, z0 in -3.0f64..3.0, z in -10.0f64..10.0, t in 0.0f64..5.0) {
            let m = breather_exact(a, v, z0, z, t).norm();
            let want = a / (a * (z - v * t - z0)).cosh();
            prop_assert!((m - want).abs() <= 1e-14 * a);
        }

        #[test]
        fn norm_invariant_under_global_phase(theta in 0.0f64..(2.0 * PI)) {
            let f = breather_field(grid(20.0, 256), 1.0, 0.5, 0.0);
            let mut g = f.clone();
            g.u.iter_mut().for_each(|x| *x *= Complex64::from_polar(1.0, theta));
            let (a, b) = (conserved_set(&f, Equation::Nls, QuantumUnits::default()), conserved_set(&g, Equation::Nls, QuantumUnits::default()));
            prop_assert!((a.norm - b.norm).abs() < 1e-12);
            prop_assert!((a.momentum - b.momentum).abs() < 1e-12);
        }
    }

    #[test]
    fn conserved_set_examples() {
        let f = breather_field(grid(40.0, 1024), 1.0, 0.0, 0.0);
        let c = conserved_set(&f, Equation::Nls, QuantumUnits::default());
        assert!((c.norm - 2.0).abs() < 1e-12);
        assert!(c.momentum.abs() < 1e-14);
        // E = ∫ sech²tanh² − sech⁴ = 2/3 − 4/3
        assert!((c.energy + 2.0 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn breather_matches_exact_solution() {
        let g = grid(40.0, 2048);
        let out = evolve_nls(breather_field(g, 1.0, 0.0, 0.0), 1e-4, 50_000, Splitting::Yoshida4).unwrap();
        let err = out.max_distance(&breather_field(g, 1.0, 0.0, out.t).u);
        assert!(err < 1e-8, "{err}");
    }

    #[test]
    fn strang_is_second_order_and_yoshida_fourth() {
        let g = grid(30.0, 512);
        let err = |dt: f64, s: Splitting| {
            let steps = (1.0 / dt).round() as usize;
            let out = evolve_nls(breather_field(g, 1.0, 0.5, 0.0), dt, steps, s).unwrap();
            out.max_distance(&breather_field(g, 1.0, 0.5, out.t).u)
        };
        let r = err(0.02, Splitting::Strang) / err(0.01, Splitting::Strang);
        assert!((r - 4.0).abs() < 0.2, "{r}");
        let r = err(0.04, Splitting::Yoshida4) / err(0.02, Splitting::Yoshida4);
        assert!((r - 16.0).abs() < 2.0, "{r}");
    }

    #[test]
    fn moving_breather_and_invariants() {
        let g = grid(40.0, 1024);
        let f0 = breather_field(g, 1.0, 1.0, 0.0);
        let c0 = conserved_set(&f0, Equation::Nls, QuantumUnits::default());
        let (mut t, mut zc) = (vec![], vec![]);
        let out = evolve_nls_observed(f0, 1e-3, 5000, Splitting::Strang, 250, &mut |f| {
            t.push(f.t);
            zc.push(f.moments().centroid);
        })
        .unwrap();
        let (slope, _) = crate::kg::linear_fit(&t, &zc).unwrap();
        assert!((slope - 1.0).abs() < 1e-4, "{slope}");
        let c = conserved_set(&out, Equation::Nls, QuantumUnits::default());
        assert!((c.norm - c0.norm).abs() < 5e-10);
        assert!((c.momentum - c0.momentum).abs() < 5e-10);
        assert!((c.energy - c0.energy).abs() < 5e-8);
    }

    #[test]
    fn zero_is_fixed_point() {
        let g = grid(10.0, 64);
        let z = ComplexField1D::new(g, vec![ZERO; 64]).unwrap();
        assert!(evolve_nls(z.clone(), 0.01, 10, Splitting::Strang).unwrap().u.iter().all(|x| *x == ZERO));
        assert!(evolve_gp(z.clone(), &GpParams::free(-1.0), 0.01, 10).unwrap().u.iter().all(|x| *x == ZERO));
        assert!(evolve_nlq(z, &NlqParams::default(), 0.01, 10).unwrap().u.iter().all(|x| *x == ZERO));
    }

    #[test]
    fn conjugation_reverses_time() {
        let g = grid(20.0, 256);
        let f0 = breather_field(g, 1.2, 0.7, 0.0);
        let fwd = evolve_nls(f0.clone(), 1e-3, 500, Splitting::Strang).unwrap();
        let back = evolve_nls(fwd.conj(), 1e-3, 500, Splitting::Strang).unwrap();
        let err = back.conj().max_distance(&f0.u);
        assert!(err < 1e-10, "{err}");
    }

    #[test]
    fn gp_reduces_to_free_propagation() {
        let g = grid(20.0, 512);
        let packet = |z: f64| Complex64::from_polar((-z * z / 2.0).exp(), 2.0 * z);
        let f0 = ComplexField1D::from_fn(g, packet).unwrap();
        let out = evolve_gp(f0.clone(), &GpParams::free(0.0), 1e-2, 100).unwrap();
        // exact free propagation of the same samples
        let mut sp = Spectral::new(g);
        let mut u = f0.u.clone();
        sp.apply(&mut u, |k| Complex64::from_polar(1.0, -0.5 * k * k * out.t));
        assert!(out.max_distance(&u) < 1e-10);
    }

    #[test]
    fn gp_reproduces_scaled_breather() {
        let g = grid(40.0, 1024);
        let units = QuantumUnits::default();
        let (gc, a, v) = (-2.0, 1.0, 0.6);
        let exact = |t: f64| ComplexField1D::from_fn(g, |z| gp_breather(a, v, 0.0, gc, units, z, t).unwrap()).unwrap();
        let mut p = GpParams::free(gc);
        p.splitting = Splitting::Yoshida4;
        let out = evolve_gp(exact(0.0), &p, 2e-3, 2000).unwrap();
        let err = out.max_distance(&exact(out.t).u);
        assert!(err < 1e-7, "{err}");
        assert!(gp_scaling(1.0, units).is_err());
    }

    #[test]
    fn include_rest_only_rotates_phase() {
        let g = grid(20.0, 256);
        let f0 = breather_field(g, 1.0, 0.0, 0.0);
        let mut p = GpParams::free(-1.0);
        let a = evolve_gp(f0.clone(), &p, 1e-3, 300).unwrap();
        p.include_rest = true;
        let b = evolve_gp(f0, &p, 1e-3, 300).unwrap();
        let rot = Complex64::from_polar(1.0, -a.t);
        let err = a.u.iter().zip(&b.u).map(|(x, y)| (x * rot - y).norm()).fold(0.0, f64::max);
        assert!(err < 1e-12);
    }

    #[test]
    fn harmonic_ground_state_is_stationary() {
        let fine = Grid1D::new(-10.0, 10.0, 1 << 14).unwrap();
        let trap = PotentialSpec::Harmonic { stiffness: 1.0, center: 0.0 };
        let states = solve_bound_states(&trap, &fine, 1, BoundOptions::default()).unwrap();
        let coarse = Grid1D::new(-10.0, 10.0, 512).unwrap();
        let psi: Vec<Complex64> = states.states[0].psi.iter().step_by(32).map(|&x| Complex64::new(x, 0.0)).collect();
        let f0 = ComplexField1D::new(coarse, psi).unwrap();
        let m0 = f0.modulus();
        let p = GpParams {
            potential: trap,
            g: 0.0,
            include_rest: false,
            units: QuantumUnits::default(),
            splitting: Splitting::Yoshida4,
        };
        let mut worst = 0.0f64;
        evolve_gp_observed(f0, &p, 1e-3, 10_000, 500, &mut |f| {
            let d = f.modulus().iter().zip(&m0).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            worst = worst.max(d);
        })
        .unwrap();
        assert!(worst < 1e-8, "{worst}");
    }

    #[test]
    fn nlq_potential_is_minus_q() {
        let g = grid(15.0, 1024);
        let psi: Vec<Complex64> = g.coords().iter().map(|z| Complex64::from_polar(1.0 / z.cosh(), 0.3 * z)).collect();
        let u = nlq_potential(&g, &psi, QuantumUnits::default(), Stencil::Central, NLQ_FLOOR).unwrap();
        let r: Vec<f64> = psi.iter().map(|x| x.norm()).collect();
        let q = bohm::quantum_potential(&g, &r, QuantumUnits::default(), Stencil::Central).unwrap();
        for (a, b) in u.iter().zip(&q.q) {
            assert!((a + b).abs() < 1e-12 * a.abs().max(1.0));
        }
    }

    fn sech_field(g: Grid1D, v: f64) -> ComplexField1D {
        ComplexField1D::from_fn(g, |z| Complex64::from_polar(1.0 / z.cosh(), v * z)).unwrap()
    }

    fn nlq_grid() -> Grid1D {
        grid(32.0, 1024)
    }

    #[test]
    fn nlq_sech_at_rest_keeps_its_shape() {
        let f0 = sech_field(nlq_grid(), 0.0);
        let m0 = f0.modulus();
        let out = evolve_nlq(f0, &NlqParams::default(), 1e-3, 5000).unwrap();
        let d = out.modulus().iter().zip(&m0).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(d < 1e-4, "{d}");
    }

    fn centroid_track(f0: ComplexField1D, params: &NlqParams, t_end: f64) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
        let (mut t, mut zc, mut var) = (vec![], vec![], vec![]);
        let dt = 1e-3;
        evolve_nlq_observed(f0, params, dt, (t_end / dt).round() as usize, 50, &mut |f| {
            let m = f.moments();
            t.push(f.t);
            zc.push(m.centroid);
            var.push(m.variance);
        })
        .unwrap();
        (t, zc, var)
    }

    #[test]
    fn nlq_moving_envelope_translates_without_spreading() {
        // v chosen so the plane-wave phase is periodic on the domain
        let v = 2.0 * PI * 5.0 / 64.0;
        let (t, zc, var) = centroid_track(sech_field(nlq_grid(), v), &NlqParams::default(), 2.0);
        let (slope, _) = crate::kg::linear_fit(&t, &zc).unwrap();
        assert!((slope - v).abs() < 1e-3, "{slope}");
        let growth = var.iter().map(|x| (x - var[0]).abs()).fold(0.0, f64::max);
        assert!(growth < 1e-3, "{growth}");
    }

    #[test]
    fn nlq_ramp_accelerates_classically() {
        let params = NlqParams { potential: PotentialSpec::Linear { force: 0.5, origin: 0.0 }, ..NlqParams::default() };
        let (t, zc, _) = centroid_track(sech_field(nlq_grid(), 0.0), &params, 2.0);
        let c = quadratic_fit(&t, &zc).unwrap();
        assert!((2.0 * c[2] - 0.5).abs() < 1e-3, "{c:?}");
    }

    #[test]
    fn nlq_agrees_with_locked_gp() {
        let g = nlq_grid();
        let units = QuantumUnits::default();
        let a = 1.0;
        let f0 = sech_field(g, 0.0);
        let nlq = evolve_nlq(f0.clone(), &NlqParams::default(), 1e-3, 1000).unwrap();
        let mut p = GpParams::free(locked_coupling(a, 1.0, units));
        p.splitting = Splitting::Yoshida4;
        let gp = evolve_gp(f0, &p, 1e-3, 1000).unwrap();
        let phase = Complex64::from_polar(1.0, units.hbar * a * a * gp.t / (2.0 * units.mass));
        let err = nlq.u.iter().zip(&gp.u).map(|(x, y)| (x * phase - y).norm()).fold(0.0, f64::max);
        assert!(err < 1e-5, "{err}");
    }

    #[test]
    fn nlq_aborts_on_nodes() {
        // a node-laden field: most of the support sits below a large floor
        let g = grid(10.0, 256);
        let f0 = ComplexField1D::from_fn(g, |z| Complex64::new((3.0 * z).sin() * (-z * z / 20.0).exp(), 0.0)).unwrap();
        let p = NlqParams { eps: 0.5, ..NlqParams::default() };
        assert!(matches!(evolve_nlq(f0, &p, 1e-4, 10), Err(Error::NumericalAbort(_))));
    }

    #[test]
    fn quadratic_fit_recovers_parabola() {
        let x: Vec<f64> = (0..20).map(|i| i as f64 * 0.1 + 3.0).collect();
        let y: Vec<f64> = x.iter().map(|x| 1.5 - 0.2 * x + 0.35 * x * x).collect();
        let c = quadratic_fit(&x, &y).unwrap();
        assert!((c[0] - 1.5).abs() < 1e-9 && (c[1] + 0.2).abs() < 1e-10 && (c[2] - 0.35).abs() < 1e-11);
    }
}
