//! Physical constants, Planck-scale quantities and the unit-system contract.
//!
//! Values are CODATA 2018 (exact SI definitions for `c`, `h`, `e`). Every
//! solver in the crate works in natural units where ħ = m = c = 1; SI is a
//! presentation layer handled by [`UnitSystem`].

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    /// Speed of light in vacuum (m/s).
    pub c: f64,
    /// Planck constant (J·s).
    pub h: f64,
    /// Reduced Planck constant (J·s).
    pub hbar: f64,
    /// Electron rest mass (kg).
    pub m_e: f64,
    /// Elementary charge (C).
    pub e_charge: f64,
    /// Newtonian gravitational constant (m³/(kg·s²)).
    #[serde(rename = "G")]
    pub g_newton: f64,
    /// Vacuum permittivity (F/m), used to map Gaussian e² onto SI.
    pub epsilon_0: f64,
}

pub const CODATA_2018: PhysicalConstants = PhysicalConstants {
    c: 299_792_458.0,
    h: 6.626_070_15e-34,
    hbar: 6.626_070_15e-34 / (2.0 * PI),
    m_e: 9.109_383_701_5e-31,
    e_charge: 1.602_176_634e-19,
    g_newton: 6.674_30e-11,
    epsilon_0: 8.854_187_812_8e-12,
};

impl Default for PhysicalConstants {
    fn default() -> Self {
        CODATA_2018
    }
}

fn check_mass(mass: f64) -> Result<()> {
    if mass.is_finite() && mass > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("mass must be positive and finite, got {mass}")))
    }
}

impl PhysicalConstants {
    /// Lowest propagating frequency of the waveguide mode, f_o = m·c²/h (Hz).
    pub fn compton_cutoff(&self, mass: f64) -> Result<f64> {
        check_mass(mass)?;
        Ok(mass * self.c * self.c / self.h)
    }

    /// Waveguide width w = c/(2 f_o) = h/(2 m c), half the Compton wavelength (m).
    pub fn waveguide_width(&self, mass: f64) -> Result<f64> {
        check_mass(mass)?;
        Ok(self.h / (2.0 * mass * self.c))
    }

    /// l_p = √(ħG/c³).
    pub fn planck_length(&self) -> f64 {
        (self.hbar * self.g_newton / self.c.powi(3)).sqrt()
    }

    /// m_p = √(ħc/G).
    pub fn planck_mass(&self) -> f64 {
        (self.hbar * self.c / self.g_newton).sqrt()
    }

    /// Coulomb coupling e²/(4πε₀) in J·m.
    pub fn coulomb_e2(&self) -> f64 {
        self.e_charge * self.e_charge / (4.0 * PI * self.epsilon_0)
    }
}

pub fn compton_cutoff(mass: f64) -> Result<f64> {
    CODATA_2018.compton_cutoff(mass)
}

pub fn waveguide_width(mass: f64) -> Result<f64> {
    CODATA_2018.waveguide_width(mass)
}

pub fn planck_length() -> f64 {
    CODATA_2018.planck_length()
}

pub fn planck_mass() -> f64 {
    CODATA_2018.planck_mass()
}

/// ħ and particle mass as seen by the solvers; natural units by default.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuantumUnits {
    pub hbar: f64,
    pub mass: f64,
}

impl Default for QuantumUnits {
    fn default() -> Self {
        QuantumUnits { hbar: 1.0, mass: 1.0 }
    }
}

impl QuantumUnits {
    /// ħ²/(2m), the kinetic prefactor.
    pub fn kinetic(&self) -> f64 {
        self.hbar * self.hbar / (2.0 * self.mass)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnitMode {
    #[serde(rename = "SI")]
    Si,
    Natural,
}

/// Physical dimension of a quantity being converted between unit modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    Mass,
    Length,
    Time,
    Energy,
    Velocity,
    Frequency,
    Momentum,
    Action,
    Wavenumber,
}

/// Two-mode unit contract. In natural mode ħ = m = c = 1 for the reference
/// mass, so lengths are in reduced Compton wavelengths ħ/(mc) and times in
/// ħ/(mc²).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitSystem {
    pub mode: UnitMode,
    pub reference_mass: f64,
    pub constants: PhysicalConstants,
}

impl Default for UnitSystem {
    fn default() -> Self {
        UnitSystem::natural(CODATA_2018.m_e)
    }
}

impl UnitSystem {
    pub fn natural(reference_mass: f64) -> Self {
        UnitSystem { mode: UnitMode::Natural, reference_mass, constants: CODATA_2018 }
    }

    pub fn si() -> Self {
        UnitSystem { mode: UnitMode::Si, reference_mass: CODATA_2018.m_e, constants: CODATA_2018 }
    }

    /// SI size of one natural unit of the given dimension.
    pub fn scale(&self, dim: Dimension) -> f64 {
        let PhysicalConstants { c, hbar, .. } = self.constants;
        let m = self.reference_mass;
        match dim {
            Dimension::Mass => m,
            Dimension::Length => hbar / (m * c),
            Dimension::Time => hbar / (m * c * c),
            Dimension::Energy => m * c * c,
            Dimension::Velocity => c,
            Dimension::Frequency => m * c * c / hbar,
            Dimension::Momentum => m * c,
            Dimension::Action => hbar,
            Dimension::Wavenumber => m * c / hbar,
        }
    }

    /// Converts an SI value into this system's representation.
    pub fn from_si(&self, value: f64, dim: Dimension) -> f64 {
        match self.mode {
            UnitMode::Si => value,
            UnitMode::Natural => value / self.scale(dim),
        }
    }

    /// Converts a value expressed in this system into SI.
    pub fn to_si(&self, value: f64, dim: Dimension) -> f64 {
        match self.mode {
            UnitMode::Si => value,
            UnitMode::Natural => value * self.scale(dim),
        }
    }
}
