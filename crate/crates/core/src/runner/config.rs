//! Scenario configurations and the strict JSON loader.
//!
//! Every field has a default, so `{}` is a valid config for any scenario.
//! Unknown keys, duplicate keys and type mismatches are rejected with the
//! JSON path of the offending value.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::ambiguity::PulseShape;
use crate::bohm::Stencil;
use crate::constants::{QuantumUnits, CODATA_2018};
use crate::error::{Error, Result};
use crate::grid::Grid1D;
use crate::nonlinear::{Splitting, NLQ_FILTER_ORDER, NLQ_FILTER_RATE, NLQ_FLOOR};
use crate::stationary::{Boundary, PotentialSpec};

/// Parses `text` into `T`, reporting the JSON path and position of errors.
pub fn parse_config<T: DeserializeOwned>(text: &str, origin: &str) -> Result<T> {
    if !text.trim_start().starts_with('{') {
        return Err(Error::config(format!("{origin}: configuration must be a JSON object")));
    }
    let mut de = serde_json::Deserializer::from_str(text);
    let value = serde_path_to_error::deserialize(&mut de)
        .map_err(|e| Error::config(format!("{origin}: at `{}`: {}", e.path(), e.inner())))?;
    de.end().map_err(|e| Error::config(format!("{origin}: {e}")))?;
    Ok(value)
}

pub fn load_config<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::config(format!("cannot read config {}: {e}", path.display())))?;
    parse_config(&text, &path.display().to_string())
}

/// Periodic grid in the `{zmin, zmax, n}` form used by run configs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub zmin: f64,
    pub zmax: f64,
    pub n: usize,
}

impl GridConfig {
    pub fn grid(&self) -> Result<Grid1D> {
        Grid1D::new(self.zmin, self.zmax, self.n)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConstantsConfig {
    /// Particle mass for the cutoff and width (kg).
    pub mass: f64,
}

impl Default for ConstantsConfig {
    fn default() -> Self {
        ConstantsConfig { mass: CODATA_2018.m_e }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DispersionConfig {
    pub k_min: f64,
    pub k_max: f64,
    pub n: usize,
    pub f_o: f64,
}

impl Default for DispersionConfig {
    fn default() -> Self {
        DispersionConfig { k_min: 0.0, k_max: 3.0, n: 301, f_o: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct KgConfig {
    /// Wavenumber in cycles per unit length.
    pub k: f64,
    pub f_o: f64,
    pub points_per_wavelength: usize,
    pub courant: f64,
    /// Step count; when absent, enough steps for ten periods.
    pub steps: Option<usize>,
    /// Snapshot cadence in steps; 0 disables snapshots.
    pub snapshot_every: usize,
    /// Drive frequency below cutoff; switches to the evanescent-decay run.
    pub drive: Option<f64>,
}

impl Default for KgConfig {
    fn default() -> Self {
        KgConfig {
            k: 1.0,
            f_o: 1.0,
            points_per_wavelength: 256,
            courant: 0.5,
            steps: None,
            snapshot_every: 0,
            drive: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnergySweep {
    pub e_min: f64,
    pub e_max: f64,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScatterConfig {
    pub potential: PotentialSpec,
    pub energy: f64,
    pub units: QuantumUnits,
    /// Number of sample points for the scattering wavefunction.
    pub samples: usize,
    pub sweep: Option<EnergySweep>,
}

impl Default for ScatterConfig {
    fn default() -> Self {
        ScatterConfig {
            potential: PotentialSpec::rectangular_barrier(1.0, 1.0),
            energy: 0.5,
            units: QuantumUnits::default(),
            samples: 801,
            sweep: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BoundConfig {
    pub potential: PotentialSpec,
    pub grid: GridConfig,
    pub n_states: usize,
    pub boundary: Boundary,
    pub extrapolate: bool,
    pub units: QuantumUnits,
}

impl Default for BoundConfig {
    fn default() -> Self {
        BoundConfig {
            potential: PotentialSpec::Harmonic { stiffness: 1.0, center: 0.0 },
            grid: GridConfig { zmin: -10.0, zmax: 10.0, n: 2048 },
            n_states: 5,
            boundary: Boundary::Confining,
            extrapolate: true,
            units: QuantumUnits::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Profile {
    Sech,
    Gaussian,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QpConfig {
    pub profile: Profile,
    pub a: f64,
    pub grid: GridConfig,
    pub stencil: Stencil,
    /// Divide Q by ħ²a²/2m.
    pub normalized: bool,
    pub units: QuantumUnits,
}

impl Default for QpConfig {
    fn default() -> Self {
        QpConfig {
            profile: Profile::Sech,
            a: 1.0,
            grid: GridConfig { zmin: -25.0, zmax: 25.0, n: 5000 },
            stencil: Stencil::Central,
            normalized: true,
            units: QuantumUnits::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum EquationKind {
    Nls,
    Gp,
    Nlq,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InitConfig {
    pub profile: Profile,
    pub a: f64,
    pub v: f64,
    pub z0: f64,
    /// Relative amplitude of seeded multiplicative noise.
    pub noise: f64,
}

impl Default for InitConfig {
    fn default() -> Self {
        InitConfig { profile: Profile::Sech, a: 1.0, v: 0.0, z0: 0.0, noise: 0.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolitonConfig {
    #[serde(alias = "eq")]
    pub equation: EquationKind,
    pub grid: GridConfig,
    pub init: InitConfig,
    pub potential: PotentialSpec,
    /// Gross-Pitaevskii coupling.
    pub g: f64,
    pub dt: f64,
    pub t_end: f64,
    pub snapshot_every: usize,
    /// Modulus floor of the Q-cancelling equation.
    pub eps: f64,
    pub include_rest: bool,
    pub seed: u64,
    pub splitting: Splitting,
    pub units: QuantumUnits,
    pub filter_rate: f64,
    pub filter_order: i32,
}

impl Default for SolitonConfig {
    fn default() -> Self {
        SolitonConfig {
            equation: EquationKind::Nls,
            grid: GridConfig { zmin: -32.0, zmax: 32.0, n: 1024 },
            init: InitConfig::default(),
            potential: PotentialSpec::Free {},
            g: -1.0,
            dt: 1e-3,
            t_end: 1.0,
            snapshot_every: 100,
            eps: NLQ_FLOOR,
            include_rest: false,
            seed: 0,
            splitting: Splitting::Strang,
            units: QuantumUnits::default(),
            filter_rate: NLQ_FILTER_RATE,
            filter_order: NLQ_FILTER_ORDER,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvergenceConfig {
    pub sizes: Vec<usize>,
    pub seeds: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ZigzagConfig {
    pub potential: PotentialSpec,
    pub energy: f64,
    pub n: usize,
    pub seed: u64,
    pub units: QuantumUnits,
    pub convergence: Option<ConvergenceConfig>,
}

impl Default for ZigzagConfig {
    fn default() -> Self {
        ZigzagConfig {
            potential: PotentialSpec::rectangular_barrier(1.0, 1.0),
            energy: 0.5,
            n: 100_000,
            seed: 0,
            units: QuantumUnits::default(),
            convergence: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SurfaceConfig {
    pub shape: PulseShape,
    /// Duration of the rectangular pulse.
    pub duration: f64,
    /// Linear chirp applied to the Gaussian.
    pub chirp: f64,
    pub grid: GridConfig,
    pub n_delay: usize,
    pub n_doppler: usize,
}

impl Default for SurfaceConfig {
    fn default() -> Self {
        SurfaceConfig {
            shape: PulseShape::Sech,
            duration: 2.0,
            chirp: 0.0,
            grid: GridConfig { zmin: -16.0, zmax: 16.0, n: 256 },
            n_delay: 255,
            n_doppler: 256,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WidthsConfig {
    pub shape: PulseShape,
    pub duration: f64,
    pub chirp: f64,
    pub grid: GridConfig,
    /// Number of random Hermite superpositions to audit; 0 skips the corpus.
    pub corpus: usize,
    pub seed: u64,
}

impl Default for WidthsConfig {
    fn default() -> Self {
        WidthsConfig {
            shape: PulseShape::Sech,
            duration: 2.0,
            chirp: 0.0,
            grid: GridConfig { zmin: -40.0, zmax: 40.0, n: 4096 },
            corpus: 0,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BohrConfig {
    pub n_min: u32,
    pub n_max: u32,
}

impl Default for BohrConfig {
    fn default() -> Self {
        BohrConfig { n_min: 1, n_max: 10 }
    }
}

/// Parses `a..b`, `a..=b` or a single `n`.
pub fn parse_n_range(s: &str) -> Result<(u32, u32)> {
    let bad = || Error::config(format!("expected `n` or `a..b`, got `{s}`"));
    let num = |t: &str| t.trim().parse::<u32>().map_err(|_| bad());
    if let Some((a, b)) = s.split_once("..") {
        Ok((num(a)?, num(b.strip_prefix('=').unwrap_or(b))?))
    } else {
        let n = num(s)?;
        Ok((n, n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_soliton_config_gets_defaults() {
        let c: SolitonConfig = parse_config(r#"{"eq": "nls", "init": {"profile": "sech", "a": 1}}"#, "t").unwrap();
        assert_eq!(c.equation, EquationKind::Nls);
        assert_eq!(c.init.a, 1.0);
        assert_eq!(c.grid, SolitonConfig::default().grid);
        assert_eq!(c.dt, 1e-3);
    }

    #[test]
    fn unknown_key_is_named() {
        let e = parse_config::<SolitonConfig>(r#"{"init": {"profile": "sech", "amp": 2}}"#, "t").unwrap_err();
        let msg = e.to_string();
        assert!(matches!(e, Error::Config(_)));
        assert!(msg.contains("amp") && msg.contains("init"), "{msg}");
    }

    #[test]
    fn type_mismatch_names_path() {
        let e = parse_config::<SolitonConfig>(r#"{"grid": {"zmin": -1, "zmax": 1, "n": "many"}}"#, "t").unwrap_err();
        let msg = e.to_string();
        assert!(msg.contains("grid.n") && msg.contains("expected usize"), "{msg}");
    }

    #[test]
    fn duplicate_key_rejected() {
        let e = parse_config::<DispersionConfig>(r#"{"n": 3, "n": 4}"#, "t").unwrap_err();
        assert!(e.to_string().contains("duplicate"), "{e}");
    }

    #[test]
    fn non_object_and_trailing_garbage_rejected() {
        assert!(parse_config::<DispersionConfig>("[1, 2]", "t").is_err());
        assert!(parse_config::<DispersionConfig>("{} {}", "t").is_err());
        assert!(parse_config::<DispersionConfig>("{\"n\": 3", "t").unwrap_err().to_string().contains("line"));
    }

    #[test]
    fn resolved_config_round_trips() {
        let c: SolitonConfig =
            parse_config(r#"{"equation": "nlq", "potential": {"kind": "linear", "force": 0.5}}"#, "t").unwrap();
        let text = serde_json::to_string(&c).unwrap();
        let back: SolitonConfig = parse_config(&text, "t").unwrap();
        assert_eq!(back, c);
        let z: ZigzagConfig = parse_config(&serde_json::to_string(&ZigzagConfig::default()).unwrap(), "t").unwrap();
        assert_eq!(z, ZigzagConfig::default());
    }

    #[test]
    fn n_ranges() {
        assert_eq!(parse_n_range("1..10").unwrap(), (1, 10));
        assert_eq!(parse_n_range("2..=4").unwrap(), (2, 4));
        assert_eq!(parse_n_range("3").unwrap(), (3, 3));
        assert!(parse_n_range("x..2").is_err());
    }
}
