//! FFT plans and spectral differentiation on a periodic [`Grid1D`].

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::grid::Grid1D;

pub struct Spectral {
    grid: Grid1D,
    k: Vec<f64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    scratch: Vec<Complex64>,
}

impl Spectral {
    pub fn new(grid: Grid1D) -> Self {
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(grid.n);
        let inverse = planner.plan_fft_inverse(grid.n);
        let scratch_len = forward.get_inplace_scratch_len().max(inverse.get_inplace_scratch_len());
        Spectral { grid, k: grid.wavenumbers(), forward, inverse, scratch: vec![Complex64::new(0.0, 0.0); scratch_len] }
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    /// Angular wavenumbers in FFT order.
    pub fn k(&self) -> &[f64] {
        &self.k
    }

    pub fn forward(&mut self, data: &mut [Complex64]) {
        self.forward.process_with_scratch(data, &mut self.scratch);
    }

    /// Inverse transform including the 1/n normalisation.
    pub fn inverse(&mut self, data: &mut [Complex64]) {
        self.inverse.process_with_scratch(data, &mut self.scratch);
        let norm = 1.0 / self.grid.n as f64;
        data.iter_mut().for_each(|x| *x *= norm);
    }

    /// Multiplies the spectrum of `data` by `symbol(k)` in place.
    pub fn apply(&mut self, data: &mut [Complex64], symbol: impl Fn(f64) -> Complex64) {
        self.forward(data);
        for (x, &k) in data.iter_mut().zip(&self.k) {
            *x *= symbol(k);
        }
        self.inverse(data);
    }

    pub fn derivative(&mut self, f: &[Complex64]) -> Vec<Complex64> {
        let nyquist = if self.grid.n.is_multiple_of(2) { Some(self.grid.n / 2) } else { None };
        let mut out = f.to_vec();
        self.forward(&mut out);
        for (i, (x, &k)) in out.iter_mut().zip(&self.k).enumerate() {
            *x = if Some(i) == nyquist { Complex64::new(0.0, 0.0) } else { *x * Complex64::new(0.0, k) };
        }
        self.inverse(&mut out);
        out
    }

    pub fn second_derivative(&mut self, f: &[Complex64]) -> Vec<Complex64> {
        let mut out = f.to_vec();
        self.apply(&mut out, |k| Complex64::new(-k * k, 0.0));
        out
    }

    pub fn second_derivative_real(&mut self, f: &[f64]) -> Vec<f64> {
        let c: Vec<Complex64> = f.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        self.second_derivative(&c).into_iter().map(|x| x.re).collect()
    }

    pub fn derivative_real(&mut self, f: &[f64]) -> Vec<f64> {
        let c: Vec<Complex64> = f.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        self.derivative(&c).into_iter().map(|x| x.re).collect()
    }
}
