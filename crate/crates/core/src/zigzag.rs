//! Hidden-phase barrier scattering.
//!
//! Each corpuscle carries a zigzag phase θ that cannot be measured. The
//! outcome at a barrier is a pure function of θ: transmit iff θ/2π lies in
//! a window of measure T, where T is the wave transmission probability.
//! A uniform prior over θ then reproduces Born statistics for the ensemble.
//!
//! Phases come from ChaCha20 (`rand_chacha`), seeded with
//! `seed_from_u64(seed)`; sample `i` uses keystream words `2i` and `2i + 1`,
//! so results do not depend on how samples are split across threads.

use std::f64::consts::PI;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::constants::QuantumUnits;
use crate::error::{Error, Result};
use crate::stationary::{solve_scattering, PotentialSpec};

pub const PHASE_GENERATOR: &str = "chacha20/seed_from_u64/2-words-per-sample";
pub const RULE_VERSION: &str = "phase-window/1";

const CHUNK: usize = 1 << 15;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorpuscleState {
    /// Zigzag phase in [0, 2π).
    pub theta: f64,
    /// Longitudinal velocity as a fraction of c.
    pub v: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Reflect,
    Transmit,
}

fn unit_from(word: u64) -> f64 {
    (word >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn phases(seed: u64, start: usize, len: usize, mut f: impl FnMut(f64)) {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_word_pos(2 * start as u128);
    for _ in 0..len {
        f(2.0 * PI * unit_from(rng.next_u64()));
    }
}

/// `n` reproducible uniform phases (with v = 0).
pub fn sample_phase(seed: u64, n: usize) -> Result<Vec<CorpuscleState>> {
    if n == 0 {
        return Err(Error::config("sample count must be at least 1"));
    }
    let mut out = Vec::with_capacity(n);
    phases(seed, 0, n, |theta| out.push(CorpuscleState { theta, v: 0.0 }));
    Ok(out)
}

/// Phase-window rule: transmit iff θ/2π < T.
pub fn scatter_decision(state: CorpuscleState, wave_t: f64) -> Result<Outcome> {
    if !(0.0..=1.0).contains(&wave_t) {
        return Err(Error::domain(format!("transmission probability {wave_t} outside [0, 1]")));
    }
    Ok(if state.theta / (2.0 * PI) < wave_t { Outcome::Transmit } else { Outcome::Reflect })
}

/// Transverse offset (w/2)·sin θ of the zigzag inside a guide of width `w`.
/// Diagnostic only; the decision rule does not use it.
pub fn transverse_position(state: CorpuscleState, width: f64) -> f64 {
    0.5 * width * state.theta.sin()
}

/// Relativistic speed (fraction of c) of a particle with kinetic energy `e`.
pub fn speed_from_kinetic(e: f64, units: QuantumUnits) -> f64 {
    let gamma = 1.0 + e / units.mass;
    (1.0 - 1.0 / (gamma * gamma)).sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnsembleResult {
    pub energy: f64,
    pub n_samples: u64,
    pub n_reflected: u64,
    pub n_transmitted: u64,
    pub wave_r: f64,
    pub wave_t: f64,
    pub t_hat: f64,
    /// Binomial standard error √(T(1−T)/n) around the wave value.
    pub sigma: f64,
    /// (T̂ − T)/σ; zero when σ = 0 and T̂ = T.
    pub z_score: f64,
    /// 5σ band around T̂.
    pub ci: (f64, f64),
    pub corpuscle_speed: f64,
    pub seed: u64,
    pub generator: String,
    pub rule: String,
}

/// Counts transmissions among `n` hidden phases against a fixed T.
pub fn count_transmitted(wave_t: f64, n: usize, seed: u64) -> Result<u64> {
    if !(0.0..=1.0).contains(&wave_t) {
        return Err(Error::domain(format!("transmission probability {wave_t} outside [0, 1]")));
    }
    let chunks = n.div_ceil(CHUNK);
    Ok((0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * CHUNK;
            let len = CHUNK.min(n - start);
            let mut k = 0u64;
            phases(seed, start, len, |theta| {
                if theta / (2.0 * PI) < wave_t {
                    k += 1;
                }
            });
            k
        })
        .sum())
}

/// Scatters `n` corpuscles off `barrier` at energy `energy`.
pub fn ensemble_scatter(
    energy: f64,
    barrier: &PotentialSpec,
    n: usize,
    seed: u64,
    units: QuantumUnits,
) -> Result<EnsembleResult> {
    if n == 0 {
        return Err(Error::config("sample count must be at least 1"));
    }
    let wave = solve_scattering(barrier, energy, units)?;
    let wave_t = wave.t_prob.clamp(0.0, 1.0);
    let k = count_transmitted(wave_t, n, seed)?;
    let nf = n as f64;
    let t_hat = k as f64 / nf;
    let sigma = (wave_t * (1.0 - wave_t) / nf).sqrt();
    let z_score = if sigma > 0.0 {
        (t_hat - wave_t) / sigma
    } else if t_hat == wave_t {
        0.0
    } else {
        f64::INFINITY
    };
    let s_hat = (t_hat * (1.0 - t_hat) / nf).sqrt();
    Ok(EnsembleResult {
        energy,
        n_samples: n as u64,
        n_reflected: n as u64 - k,
        n_transmitted: k,
        wave_r: wave.r_prob,
        wave_t: wave.t_prob,
        t_hat,
        sigma,
        z_score,
        ci: ((t_hat - 5.0 * s_hat).max(0.0), (t_hat + 5.0 * s_hat).min(1.0)),
        corpuscle_speed: speed_from_kinetic(energy, units),
        seed,
        generator: PHASE_GENERATOR.to_string(),
        rule: RULE_VERSION.to_string(),
    })
}

/// Lebesgue measure (as a fraction of 2π) of the phases that transmit,
/// by a dense θ grid with bisection of every decision boundary.
pub fn transmit_measure(wave_t: f64, grid_points: usize) -> Result<f64> {
    let decide =
        |theta: f64| scatter_decision(CorpuscleState { theta, v: 0.0 }, wave_t).map(|o| o == Outcome::Transmit);
    let n = grid_points.max(2);
    let h = 2.0 * PI / n as f64;
    // last sample sits just below 2π so the final cell is searched too
    let node = |i: usize| if i == n { (2.0 * PI).next_down() } else { i as f64 * h };
    let mut measure = 0.0;
    let mut prev = decide(0.0)?;
    let mut left = if prev { Some(0.0) } else { None };
    for i in 1..=n {
        let now = decide(node(i))?;
        if now == prev {
            continue;
        }
        let (mut a, mut b) = (node(i - 1), node(i));
        loop {
            let m = 0.5 * (a + b);
            if m == a || m == b {
                break;
            }
            if decide(m)? == prev {
                a = m;
            } else {
                b = m;
            }
        }
        if now {
            left = Some(b);
        } else if let Some(l) = left.take() {
            measure += b - l;
        }
        prev = now;
    }
    if let Some(l) = left {
        measure += 2.0 * PI - l;
    }
    Ok(measure / (2.0 * PI))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceStudy {
    pub sizes: Vec<usize>,
    /// RMS of T̂ − T over the seeds, per size.
    pub rms_error: Vec<f64>,
    pub slope: f64,
}

/// Log-log slope of the RMS ensemble error against n, over `seeds` independent seeds.
pub fn convergence_study(wave_t: f64, sizes: &[usize], seeds: u64) -> Result<ConvergenceStudy> {
    if sizes.len() < 2 || seeds == 0 {
        return Err(Error::config("need at least two sizes and one seed"));
    }
    let rms_error = sizes
        .iter()
        .map(|&n| {
            let sq: f64 = (0..seeds)
                .map(|s| count_transmitted(wave_t, n, s).map(|k| (k as f64 / n as f64 - wave_t).powi(2)))
                .sum::<Result<f64>>()?;
            Ok((sq / seeds as f64).sqrt())
        })
        .collect::<Result<Vec<f64>>>()?;
    let lx: Vec<f64> = sizes.iter().map(|&n| (n as f64).ln()).collect();
    let ly: Vec<f64> = rms_error.iter().map(|e| e.ln()).collect();
    let (slope, _) = crate::kg::linear_fit(&lx, &ly).ok_or_else(|| Error::config("degenerate sizes"))?;
    Ok(ConvergenceStudy { sizes: sizes.to_vec(), rms_error, slope })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stationary::rectangular_barrier;
    use proptest::prelude::*;

    #[test]
    fn sampling_is_deterministic() {
        assert_eq!(sample_phase(42, 3).unwrap(), sample_phase(42, 3).unwrap());
        assert_ne!(sample_phase(42, 3).unwrap(), sample_phase(43, 3).unwrap());
        assert_eq!(sample_phase(1, 1).unwrap().len(), 1);
        assert!(sample_phase(1, 0).is_err());
    }

    #[test]
    fn chunked_streams_match_sequential() {
        let n = 3 * CHUNK + 17;
        let seq = sample_phase(9, n).unwrap();
        let mut chunked = vec![];
        for c in 0..n.div_ceil(CHUNK) {
            let start = c * CHUNK;
            phases(9, start, CHUNK.min(n - start), |t| chunked.push(t));
        }
        assert!(seq.iter().zip(&chunked).all(|(a, b)| a.theta == *b));
    }

    #[test]
    fn phases_are_uniform() {
        let s = sample_phase(2024, 1_000_000).unwrap();
        let mean = s.iter().map(|c| c.theta).sum::<f64>() / s.len() as f64;
        // uniform on [0, 2π): σ = 2π/√12
        let se = 2.0 * PI / 12f64.sqrt() / (s.len() as f64).sqrt();
        assert!((mean - PI).abs() < 5.0 * se);
        assert!(s.iter().all(|c| (0.0..2.0 * PI).contains(&c.theta)));
    }

    #[test]
    fn decision_examples() {
        let at = |theta| CorpuscleState { theta, v: 0.0 };
        for theta in [0.0, 1.0, 3.0, 6.2] {
            assert_eq!(scatter_decision(at(theta), 0.0).unwrap(), Outcome::Reflect);
            assert_eq!(scatter_decision(at(theta), 1.0).unwrap(), Outcome::Transmit);
        }
        assert_eq!(scatter_decision(at(PI), 0.25).unwrap(), Outcome::Reflect);
        assert!(matches!(scatter_decision(at(1.0), 1.5), Err(Error::Domain(_))));
    }

    #[test]
    fn ensemble_examples() {
        let u = QuantumUnits::default();
        let barrier = PotentialSpec::rectangular_barrier(1.0, 1.0);
        let r = ensemble_scatter(0.5, &barrier, 100_000, 7, u).unwrap();
        assert!((r.wave_t - rectangular_barrier(1.0, 1.0, 0.5, u)).abs() < 1e-10);
        assert!(r.z_score.abs() < 5.0);
        assert_eq!(r.n_reflected + r.n_transmitted, r.n_samples);
        let hi = ensemble_scatter(50.0, &barrier, 100_000, 7, u).unwrap();
        assert!((hi.t_hat - hi.wave_t).abs() < 5.0 * hi.sigma.max(1.0 / 100_000.0));
        let one = ensemble_scatter(0.5, &barrier, 1, 7, u).unwrap();
        assert_eq!(one.n_reflected + one.n_transmitted, 1);
        assert_eq!(r, ensemble_scatter(0.5, &barrier, 100_000, 7, u).unwrap());
    }

    #[test]
    fn independent_of_thread_count() {
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| count_transmitted(0.37, 500_000, 11).unwrap())
        };
        assert_eq!(run(1), run(4));
    }

    proptest! {
        #[test]
        fn transmit_set_has_measure_t(t in 0.0f64..=1.0) {
            let m = transmit_measure(t, 4096).unwrap();
            prop_assert!((m - t).abs() < 1e-9, "{} vs {}", m, t);
        }

        #[test]
        fn transverse_offset_stays_inside_guide(theta in 0.0f64..(2.0 * PI), w in 1e-3f64..10.0) {
            let x = transverse_position(CorpuscleState { theta, v: 0.0 }, w);
            prop_assert!(x.abs() <= w / 2.0);
        }
    }

    #[test]
    fn error_shrinks_as_inverse_square_root() {
        let s = convergence_study(0.3, &[1_000, 10_000, 100_000], 64).unwrap();
        assert!((s.slope + 0.5).abs() < 0.1, "{s:?}");
    }
}
