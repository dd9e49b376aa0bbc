use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform periodic 1D grid: `n` nodes at `z_min + i·dz`, `dz = (z_max − z_min)/n`.
///
/// The right endpoint is the periodic image of the left one and is not a node.
/// Quadrature on this grid is the periodic trapezoidal rule, `dz·Σ f_i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid1D {
    pub z_min: f64,
    pub z_max: f64,
    pub n: usize,
}

impl Grid1D {
    pub fn new(z_min: f64, z_max: f64, n: usize) -> Result<Self> {
        let grid = Grid1D { z_min, z_max, n };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.z_min.is_finite() && self.z_max.is_finite()) || self.z_max <= self.z_min {
            return Err(Error::config(format!(
                "grid bounds must satisfy z_min < z_max, got [{}, {}]",
                self.z_min, self.z_max
            )));
        }
        if self.n < 2 {
            return Err(Error::config(format!("grid needs at least 2 points, got {}", self.n)));
        }
        Ok(())
    }

    /// Grids used by spectral solvers must be a power of two and at least `min` long.
    pub fn require_spectral(&self, min: usize) -> Result<()> {
        self.validate()?;
        if !self.n.is_power_of_two() || self.n < min {
            return Err(Error::config(format!("spectral grid length must be a power of two >= {min}, got {}", self.n)));
        }
        Ok(())
    }

    pub fn length(&self) -> f64 {
        self.z_max - self.z_min
    }

    pub fn dz(&self) -> f64 {
        self.length() / self.n as f64
    }

    pub fn z(&self, i: usize) -> f64 {
        self.z_min + i as f64 * self.dz()
    }

    pub fn coords(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.z(i)).collect()
    }

    /// Angular wavenumbers in FFT order.
    pub fn wavenumbers(&self) -> Vec<f64> {
        let n = self.n as i64;
        let dk = 2.0 * PI / self.length();
        (0..n).map(|i| if i < (n + 1) / 2 { i } else { i - n }).map(|i| i as f64 * dk).collect()
    }

    pub fn integrate(&self, f: &[f64]) -> f64 {
        debug_assert_eq!(f.len(), self.n);
        self.dz() * f.iter().sum::<f64>()
    }

    /// Same grid with `factor` times as many nodes; every old node is kept.
    pub fn refined(&self, factor: usize) -> Grid1D {
        Grid1D { n: self.n * factor, ..*self }
    }
}
