//! One function per subcommand: resolved config in, [`RunReport`] out.
//!
//! Numerical aborts come back as `Err(Error::NumericalAbort)`; the caller
//! turns them into an aborted report.

use num_complex::Complex64;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

use super::config::*;
use super::output::{RunReport, Table};
use crate::ambiguity::{ambiguity_surface, hermite_corpus, moment_widths, PulseProfile, PulseShape};
use crate::bohm::{
    continuity_residual, decompose, hamilton_jacobi_residual, quantum_potential, sech_quantum_potential, Dynamics,
    ResidualOptions, Snapshot,
};
use crate::bohr::{orbit_from_n, orbit_table};
use crate::constants::{PhysicalConstants, QuantumUnits, CODATA_2018};
use crate::dispersion::dispersion_table;
use crate::error::{Error, Result};
use crate::grid::Grid1D;
use crate::kg::{
    driven_decay, evolve_kg_observed, leapfrog_frequency, zero_crossing_frequency, DrivenConfig, RealField1D,
};
use crate::nonlinear::{
    breather_exact, conserved_set, evolve_gp_observed, evolve_nlq_observed, evolve_nls_observed, gp_breather,
    ComplexField1D, Equation, GpParams, NlqParams,
};
use crate::stationary::{scattering_wavefunction, solve_bound_states, solve_scattering, BoundOptions, PotentialSpec};
use crate::zigzag::{convergence_study, ensemble_scatter};

/// Width of the waveguide as printed for the electron (m).
pub const PRINTED_WIDTH: f64 = 1.21e-11;

pub fn constants(cfg: &ConstantsConfig) -> Result<RunReport> {
    let k: PhysicalConstants = CODATA_2018;
    let mut r = RunReport::new();
    for (name, v) in [
        ("c", k.c),
        ("h", k.h),
        ("hbar", k.hbar),
        ("m_e", k.m_e),
        ("e", k.e_charge),
        ("G", k.g_newton),
        ("epsilon_0", k.epsilon_0),
    ] {
        r.scalar(name, v);
    }
    r.scalar("mass", cfg.mass);
    r.scalar("compton_cutoff", k.compton_cutoff(cfg.mass)?);
    r.scalar("waveguide_width", k.waveguide_width(cfg.mass)?);
    r.scalar("planck_length", k.planck_length());
    r.scalar("planck_mass", k.planck_mass());
    r.scalar("bohr_radius", orbit_from_n(1)?.r);
    Ok(r)
}

pub fn dispersion(cfg: &DispersionConfig) -> Result<RunReport> {
    let curve = dispersion_table(cfg.k_min, cfg.k_max, cfg.n, cfg.f_o)?;
    let mut t = Table::new(&["k", "f_kg", "f_schrod", "f_clock"]);
    for i in 0..curve.k_samples.len() {
        t.push(vec![curve.k_samples[i], curve.f_kg[i], curve.f_schrod[i], curve.f_clock_branch[i]]);
    }
    let mut r = RunReport::new();
    r.add_series("dispersion", t);
    Ok(r)
}

pub fn kg(cfg: &KgConfig) -> Result<RunReport> {
    if let Some(f_drive) = cfg.drive {
        let res = driven_decay(&DrivenConfig::new(f_drive, cfg.f_o))?;
        let mut t = Table::new(&["z", "amplitude"]);
        res.profile.iter().for_each(|&(z, a)| t.push(vec![z, a]));
        let mut r = RunReport::new();
        r.add_series("evanescent", t);
        r.scalar("closed_form_rate", res.closed_form_rate);
        r.scalar("fitted_rate", res.fitted_rate);
        r.scalar("relative_error", res.relative_error);
        return Ok(r);
    }
    if !(cfg.k > 0.0) {
        return Err(Error::config(format!("k must be positive, got {}", cfg.k)));
    }
    let grid = Grid1D::new(0.0, 1.0 / cfg.k, cfg.points_per_wavelength)?;
    let dt = cfg.courant * grid.dz();
    let f = cfg.f_o.hypot(cfg.k);
    let steps = cfg.steps.unwrap_or_else(|| (10.0 / (f * dt)).ceil() as usize);
    let mut field = RealField1D::standing_wave(grid, cfg.k, cfg.f_o, dt)?;
    let e0 = field.energy(cfg.f_o);
    let mut series = Table::new(&["t", "u0"]);
    let mut snaps = Table::new(&["t", "z", "u"]);
    let z = grid.coords();
    let mut record = |fld: &RealField1D, step: usize| {
        series.push(vec![fld.t, fld.u[0]]);
        if cfg.snapshot_every > 0 && step.is_multiple_of(cfg.snapshot_every) {
            for (zi, ui) in z.iter().zip(&fld.u) {
                snaps.push(vec![fld.t, *zi, *ui]);
            }
        }
    };
    record(&field, 0);
    let mut step = 0;
    evolve_kg_observed(&mut field, cfg.f_o, dt, steps, |fld| {
        step += 1;
        record(fld, step);
    })?;
    let mut r = RunReport::new();
    let u0 = series.column("u0").unwrap_or_default();
    match zero_crossing_frequency(&u0, dt) {
        Some(m) => {
            r.scalar("measured_frequency", m);
            r.scalar("relative_error", (m - f).abs() / f);
        }
        None => r.warn("too few zero crossings to measure a frequency"),
    }
    r.scalar("continuum_frequency", f);
    r.scalar("discrete_frequency", leapfrog_frequency(cfg.k, cfg.f_o, grid.dz(), dt));
    r.scalar("energy_drift", ((field.energy(cfg.f_o) - e0) / e0).abs());
    r.scalar("steps", steps as f64);
    r.add_series("series", series);
    if cfg.snapshot_every > 0 {
        r.add_series("snapshots", snaps);
    }
    Ok(r)
}

fn piecewise_span(p: &PotentialSpec) -> Result<(f64, f64)> {
    match p {
        PotentialSpec::Piecewise { segments } if !segments.is_empty() => {
            Ok((segments[0].z_start, segments[segments.len() - 1].z_end))
        }
        _ => Err(Error::config("scattering needs a piecewise potential")),
    }
}

pub fn scatter(cfg: &ScatterConfig) -> Result<RunReport> {
    let res = solve_scattering(&cfg.potential, cfg.energy, cfg.units)?;
    let (a, b) = piecewise_span(&cfg.potential)?;
    if cfg.samples < 2 {
        return Err(Error::config("need at least two wavefunction samples"));
    }
    let z: Vec<f64> = (0..cfg.samples).map(|i| a + (b - a) * i as f64 / (cfg.samples - 1) as f64).collect();
    let psi = scattering_wavefunction(&cfg.potential, cfg.energy, cfg.units, &z)?;
    let v = cfg.potential.sample(&z);
    let mut t = Table::new(&["z", "re", "im", "abs2", "V"]);
    for i in 0..z.len() {
        t.push(vec![z[i], psi[i].re, psi[i].im, psi[i].norm_sqr(), v[i]]);
    }
    let mut r = RunReport::new();
    r.add_series("wavefunction", t);
    r.scalar("R", res.r_prob);
    r.scalar("T", res.t_prob);
    r.scalar("unitarity_defect", (res.r_prob + res.t_prob - 1.0).abs());
    if let Some(sw) = &cfg.sweep {
        if sw.n < 2 || !(sw.e_max > sw.e_min) {
            return Err(Error::config("energy sweep needs n >= 2 and e_min < e_max"));
        }
        let mut s = Table::new(&["E", "R", "T"]);
        for i in 0..sw.n {
            let e = sw.e_min + (sw.e_max - sw.e_min) * i as f64 / (sw.n - 1) as f64;
            let x = solve_scattering(&cfg.potential, e, cfg.units)?;
            s.push(vec![e, x.r_prob, x.t_prob]);
        }
        r.add_series("sweep", s);
    }
    Ok(r)
}

pub fn bound(cfg: &BoundConfig) -> Result<RunReport> {
    let grid = Grid1D::new(cfg.grid.zmin, cfg.grid.zmax, cfg.grid.n)?;
    let opts = BoundOptions { units: cfg.units, boundary: cfg.boundary, extrapolate: cfg.extrapolate };
    let states = solve_bound_states(&cfg.potential, &grid, cfg.n_states, opts)?;
    let z = grid.coords();
    let v = cfg.potential.sample(&z);
    let mut cols = vec!["z".to_string(), "V".to_string()];
    cols.extend(states.states.iter().map(|s| format!("psi_{}", s.index)));
    let mut t = Table::new(&cols);
    for i in 0..z.len() {
        let mut row = vec![z[i], v[i]];
        row.extend(states.states.iter().map(|s| s.psi[i]));
        t.push(row);
    }
    let mut e = Table::new(&["index", "energy", "raw_energy"]);
    for s in &states.states {
        e.push(vec![s.index as f64, s.energy, s.raw_energy]);
    }
    let mut r = RunReport::new();
    r.add_series("energies", e);
    r.add_series("states", t);
    if !states.complete {
        r.warn(format!("found {} of {} requested bound states", states.states.len(), states.requested));
    }
    Ok(r)
}

fn envelope(profile: Profile, x: f64) -> f64 {
    match profile {
        Profile::Sech => 1.0 / x.cosh(),
        Profile::Gaussian => (-x * x / 2.0).exp(),
    }
}

pub fn quantum_potential_profile(cfg: &QpConfig) -> Result<RunReport> {
    let grid = cfg.grid.grid()?;
    let z = grid.coords();
    let rr: Vec<f64> = z.iter().map(|&z| envelope(cfg.profile, cfg.a * z)).collect();
    let qp = quantum_potential(&grid, &rr, cfg.units, cfg.stencil)?;
    let scale = if cfg.normalized { cfg.units.kinetic() * cfg.a * cfg.a } else { 1.0 };
    let mut t = Table::new(&["z", "R", "Q", "Q_closed"]);
    let mut worst: f64 = 0.0;
    for i in 0..z.len() {
        let closed = match cfg.profile {
            Profile::Sech => sech_quantum_potential(cfg.a, z[i], cfg.units),
            Profile::Gaussian => {
                let x = cfg.a * z[i];
                -cfg.units.kinetic() * cfg.a * cfg.a * (x * x - 1.0)
            }
        };
        let q = if qp.defined[i] { qp.q[i] } else { f64::NAN };
        if qp.defined[i] {
            worst = worst.max((q - closed).abs());
        }
        t.push(vec![z[i], rr[i], q / scale, closed / scale]);
    }
    let mut r = RunReport::new();
    r.add_series("qp", t);
    r.scalar("max_abs_error", worst);
    r.scalar("scale", scale);
    Ok(r)
}

/// `repro fig7.2` data: Q/(ħ²a²/2m) for R = sech(z) on |z| ≤ 5 from a wider
/// periodic grid, so the periodic wrap never touches the window.
pub fn fig7_2() -> Result<RunReport> {
    let cfg = QpConfig::default();
    let full = quantum_potential_profile(&cfg)?;
    let src = full.series("qp").expect("qp series");
    let mut t = Table::new(&src.columns);
    for row in &src.rows {
        if row[0] >= -5.0 - 1e-9 && row[0] <= 5.0 + 1e-9 {
            t.push(row.clone());
        }
    }
    let mut r = RunReport::new();
    r.add_series("fig7.2", t);
    r.scalar("max_abs_error", full.scalars["max_abs_error"]);
    r.scalar("Q_at_0", sech_quantum_potential(1.0, 0.0, QuantumUnits::default()));
    Ok(r)
}

/// Units and residual dynamics under which each equation is a Schrödinger-type flow.
fn equation_frame(cfg: &SolitonConfig) -> (QuantumUnits, Dynamics, f64) {
    match cfg.equation {
        // i u_t + u_zz + 2|u|²u = 0 is GP with ħ = 1, m = 1/2, g = −2
        EquationKind::Nls => (QuantumUnits { hbar: 1.0, mass: 0.5 }, Dynamics::GrossPitaevskii { g: -2.0 }, 0.0),
        EquationKind::Gp => {
            (cfg.units, Dynamics::GrossPitaevskii { g: cfg.g }, if cfg.include_rest { cfg.units.mass } else { 0.0 })
        }
        EquationKind::Nlq => (cfg.units, Dynamics::CancelledQ, 0.0),
    }
}

fn initial_field(cfg: &SolitonConfig) -> Result<ComplexField1D> {
    let grid = cfg.grid.grid()?;
    let init = &cfg.init;
    let (units, _, _) = equation_frame(cfg);
    let wavenumber = units.mass * init.v / units.hbar;
    let exact_breather = init.profile == Profile::Sech;
    let mut field = ComplexField1D::from_fn(grid, |z| match (cfg.equation, exact_breather) {
        (EquationKind::Nls, true) => breather_exact(init.a, init.v, init.z0, z, 0.0),
        (EquationKind::Gp, true) if cfg.g < 0.0 => {
            gp_breather(init.a, init.v, init.z0, cfg.g, units, z, 0.0).unwrap_or_default()
        }
        _ => Complex64::from_polar(envelope(init.profile, init.a * (z - init.z0)), wavenumber * z),
    })?;
    if init.noise != 0.0 {
        let mut rng = ChaCha20Rng::seed_from_u64(cfg.seed);
        for u in field.u.iter_mut() {
            let xi = (rng.next_u64() >> 11) as f64 * 2f64.powi(-53) * 2.0 - 1.0;
            *u *= 1.0 + init.noise * xi;
        }
    }
    Ok(field)
}

/// Runs the configured equation; returns the time levels seen every
/// `snapshot_every` steps (including t = 0).
pub fn evolve_soliton(cfg: &SolitonConfig) -> Result<Vec<ComplexField1D>> {
    if !(cfg.dt > 0.0 && cfg.t_end >= 0.0) {
        return Err(Error::config("need dt > 0 and t_end >= 0"));
    }
    let steps = (cfg.t_end / cfg.dt).round() as usize;
    if (steps as f64 * cfg.dt - cfg.t_end).abs() > 1e-9 * cfg.t_end.max(1.0) {
        return Err(Error::config(format!("t_end {} is not a multiple of dt {}", cfg.t_end, cfg.dt)));
    }
    let every = cfg.snapshot_every.max(1);
    let u0 = initial_field(cfg)?;
    let mut levels = Vec::new();
    let mut observe = |f: &ComplexField1D| levels.push(f.clone());
    match cfg.equation {
        EquationKind::Nls => {
            evolve_nls_observed(u0, cfg.dt, steps, cfg.splitting, every, &mut observe)?;
        }
        EquationKind::Gp => {
            let params = GpParams {
                potential: cfg.potential.clone(),
                g: cfg.g,
                include_rest: cfg.include_rest,
                units: cfg.units,
                splitting: cfg.splitting,
            };
            evolve_gp_observed(u0, &params, cfg.dt, steps, every, &mut observe)?;
        }
        EquationKind::Nlq => {
            let params = NlqParams {
                potential: cfg.potential.clone(),
                units: cfg.units,
                eps: cfg.eps,
                filter_rate: cfg.filter_rate,
                filter_order: cfg.filter_order,
            };
            evolve_nlq_observed(u0, &params, cfg.dt, steps, every, &mut observe)?;
        }
    }
    Ok(levels)
}

pub fn soliton(cfg: &SolitonConfig) -> Result<RunReport> {
    let levels = evolve_soliton(cfg)?;
    let equation = match cfg.equation {
        EquationKind::Nls => Equation::Nls,
        EquationKind::Gp => Equation::Gp { potential: &cfg.potential, g: cfg.g, include_rest: cfg.include_rest },
        EquationKind::Nlq => Equation::Nlq { potential: &cfg.potential },
    };
    let mut conserved = Table::new(&["t", "norm", "momentum", "energy", "centroid", "variance"]);
    let mut snaps = Table::new(&["t", "z", "re", "im", "abs2"]);
    let z = levels[0].grid.coords();
    for f in &levels {
        let c = conserved_set(f, equation, cfg.units);
        let m = f.moments();
        conserved.push(vec![f.t, c.norm, c.momentum, c.energy, m.centroid, m.variance]);
        for (zi, u) in z.iter().zip(&f.u) {
            snaps.push(vec![f.t, *zi, u.re, u.im, u.norm_sqr()]);
        }
    }
    let first = &conserved.rows[0];
    let last = &conserved.rows[conserved.rows.len() - 1];
    let mut r = RunReport::new();
    r.scalar("norm_drift", ((last[1] - first[1]) / first[1]).abs());
    r.scalar("energy_drift", (last[3] - first[3]).abs() / first[3].abs().max(f64::MIN_POSITIVE));
    r.scalar("t_final", last[0]);
    r.scalar("centroid_final", last[4]);
    let plain = cfg.init.profile == Profile::Sech && cfg.init.noise == 0.0;
    let fin = &levels[levels.len() - 1];
    let exact: Option<Vec<Complex64>> = match cfg.equation {
        EquationKind::Nls if plain => {
            Some(z.iter().map(|&x| breather_exact(cfg.init.a, cfg.init.v, cfg.init.z0, x, fin.t)).collect())
        }
        EquationKind::Gp if plain && cfg.g < 0.0 && cfg.potential == PotentialSpec::Free {} && !cfg.include_rest => z
            .iter()
            .map(|&x| gp_breather(cfg.init.a, cfg.init.v, cfg.init.z0, cfg.g, cfg.units, x, fin.t))
            .collect::<Result<Vec<_>>>()
            .ok(),
        _ => None,
    };
    if let Some(e) = exact {
        r.scalar("breather_error", fin.max_distance(&e));
    }
    r.add_series("conserved", conserved);
    r.add_series("snapshots", snaps);
    Ok(r)
}

pub fn bohm_residuals(cfg: &SolitonConfig) -> Result<RunReport> {
    let levels = evolve_soliton(cfg)?;
    if levels.len() < 3 {
        return Err(Error::config("residuals need at least three snapshots; lower snapshot_every or raise t_end"));
    }
    let (units, dynamics, rest_energy) = equation_frame(cfg);
    let history: Vec<Snapshot> = levels
        .iter()
        .map(|f| decompose(&f.grid, &f.u, units.hbar).map(|field| Snapshot { t: f.t, field }))
        .collect::<Result<_>>()?;
    let opts = ResidualOptions { units, dynamics, rest_energy, ..Default::default() };
    let hj = hamilton_jacobi_residual(&history, &cfg.potential, opts)?;
    let cont = continuity_residual(&history, opts)?;
    let level_max = |vals: &[f64]| vals.iter().filter(|x| x.is_finite()).fold(0.0f64, |m, x| m.max(x.abs()));
    let mut t = Table::new(&["t", "hamilton_jacobi", "continuity"]);
    for j in 0..hj.times.len() {
        t.push(vec![hj.times[j], level_max(&hj.values[j]), level_max(&cont.values[j])]);
    }
    let mut r = RunReport::new();
    r.add_series("residuals", t);
    r.scalar("hamilton_jacobi_max", hj.max_abs);
    r.scalar("continuity_max", cont.max_abs);
    r.scalar("snapshot_dt", cfg.dt * cfg.snapshot_every.max(1) as f64);
    Ok(r)
}

pub fn zigzag(cfg: &ZigzagConfig) -> Result<RunReport> {
    let res = ensemble_scatter(cfg.energy, &cfg.potential, cfg.n, cfg.seed, cfg.units)?;
    let mut r = RunReport::new();
    r.scalar("t_hat", res.t_hat);
    r.scalar("wave_t", res.wave_t);
    r.scalar("wave_r", res.wave_r);
    r.scalar("sigma", res.sigma);
    r.scalar("z_score", res.z_score);
    if res.z_score.abs() > 5.0 {
        r.warn(format!("ensemble T deviates from the wave value by {:.2} sigma", res.z_score));
    }
    if let Some(conv) = &cfg.convergence {
        let study = convergence_study(res.wave_t.clamp(0.0, 1.0), &conv.sizes, conv.seeds)?;
        let mut t = Table::new(&["n", "rms_error"]);
        for (n, e) in study.sizes.iter().zip(&study.rms_error) {
            t.push(vec![*n as f64, *e]);
        }
        r.add_series("convergence", t);
        r.scalar("convergence_slope", study.slope);
    }
    r.add_document("ensemble", serde_json::to_value(&res)?);
    Ok(r)
}

fn pulse(shape: PulseShape, duration: f64, chirp: f64, grid: Grid1D) -> Result<PulseProfile> {
    match shape {
        PulseShape::Gaussian if chirp != 0.0 => Ok(PulseProfile::chirped_gaussian(grid, chirp)),
        _ => PulseProfile::by_shape(grid, shape, duration),
    }
}

pub fn ambiguity(cfg: &SurfaceConfig) -> Result<RunReport> {
    let p = pulse(cfg.shape, cfg.duration, cfg.chirp, cfg.grid.grid()?)?;
    let s = ambiguity_surface(&p, cfg.n_delay, cfg.n_doppler)?;
    let mut t = Table::new(&["tau", "fd", "magnitude"]);
    for (i, tau) in s.delay_axis.iter().enumerate() {
        for (j, fd) in s.doppler_axis.iter().enumerate() {
            t.push(vec![*tau, *fd, s.magnitude[i][j]]);
        }
    }
    let mut r = RunReport::new();
    r.add_series("surface", t);
    r.scalar("volume", s.volume);
    if let Some(w) = s.warning {
        r.warn(w);
    }
    Ok(r)
}

pub fn widths(cfg: &WidthsConfig) -> Result<RunReport> {
    let grid = cfg.grid.grid()?;
    let w = moment_widths(&pulse(cfg.shape, cfg.duration, cfg.chirp, grid)?)?;
    let mut r = RunReport::new();
    r.scalar("delta_x", w.delta_x);
    r.scalar("delta_k", w.delta_k);
    r.scalar("product", w.product());
    r.scalar("divergent", if w.divergent { 1.0 } else { 0.0 });
    if w.divergent {
        r.warn("the k-space second moment is not converged on this grid");
    }
    if cfg.corpus > 0 {
        let mut t = Table::new(&["index", "delta_x", "delta_k", "product"]);
        let mut min = f64::INFINITY;
        for (i, p) in hermite_corpus(grid, cfg.corpus, cfg.seed).iter().enumerate() {
            let w = moment_widths(p)?;
            min = min.min(w.product());
            t.push(vec![i as f64, w.delta_x, w.delta_k, w.product()]);
        }
        r.add_series("corpus", t);
        r.scalar("corpus_min_product", min);
    }
    Ok(r)
}

pub fn bohr(cfg: &BohrConfig) -> Result<RunReport> {
    let rows = orbit_table(cfg.n_min, cfg.n_max)?;
    let mut t = Table::new(&["n", "r", "v_over_c", "E_eV", "M_over_hbar", "N_quantization"]);
    for o in &rows {
        t.push(vec![o.n as f64, o.r, o.v_over_c, o.energy_ev, o.m_over_hbar, o.n_quantization]);
    }
    let mut r = RunReport::new();
    r.add_series("orbits", t);
    Ok(r)
}

pub fn width_check() -> Result<RunReport> {
    let w = CODATA_2018.waveguide_width(CODATA_2018.m_e)?;
    let a0 = orbit_from_n(1)?.r;
    let mut r = RunReport::new();
    r.scalar("waveguide_width", w);
    r.scalar("printed_width", PRINTED_WIDTH);
    r.scalar("relative_to_printed", (w - PRINTED_WIDTH) / PRINTED_WIDTH);
    r.scalar("bohr_radius", a0);
    r.scalar("width_over_bohr_radius", w / a0);
    if ((w - PRINTED_WIDTH) / PRINTED_WIDTH).abs() > 0.01 {
        r.warn(format!("h/(2 m_e c) = {w:e} m differs from the printed {PRINTED_WIDTH:e} m"));
    }
    if !(0.20..=0.30).contains(&(w / a0)) {
        r.warn(format!("width / Bohr radius = {:.4}, not about a quarter", w / a0));
    }
    Ok(r)
}

pub fn planck() -> Result<RunReport> {
    let mut r = RunReport::new();
    r.scalar("planck_length", CODATA_2018.planck_length());
    r.scalar("planck_mass", CODATA_2018.planck_mass());
    Ok(r)
}

/// `repro fig5.1` data: the three branches for f_o = 1, c = 1.
pub fn fig5_1() -> Result<RunReport> {
    let mut r = dispersion(&DispersionConfig::default())?;
    let (_, t) = r.series.remove(0);
    r.add_series("fig5.1", t);
    Ok(r)
}
