//! Time-independent Schrödinger machinery: local wavenumbers, exact
//! transfer-matrix scattering on piecewise-constant potentials, bound states
//! of a symmetric tridiagonal discretization, and the Born density.

mod bound;
mod potential;
mod scattering;

pub use bound::{solve_bound_states, BoundOptions, BoundState, BoundStates, Boundary};
pub use potential::{PotentialSpec, Segment};
pub use scattering::{
    rectangular_barrier, scattering_wavefunction, segment_matrix, solve_scattering, ScatteringResult,
};

use num_complex::Complex64;
use serde::Serialize;

use crate::constants::QuantumUnits;
use crate::error::{Error, Result};
use crate::grid::Grid1D;

/// Local wavenumber: propagating `k` where `E > V`, decay rate `κ` otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "regime", content = "value", rename_all = "snake_case")]
pub enum LocalWavenumber {
    Propagating(f64),
    Evanescent(f64),
}

impl LocalWavenumber {
    pub fn magnitude(&self) -> f64 {
        match *self {
            LocalWavenumber::Propagating(k) | LocalWavenumber::Evanescent(k) => k,
        }
    }
}

/// WKB wavenumber √(2m(E − V))/ħ, or the evanescent κ = √(2m(V − E))/ħ.
pub fn wkb_wavenumber(energy: f64, v: f64, units: QuantumUnits) -> LocalWavenumber {
    let diff = energy - v;
    let k = (2.0 * units.mass * diff.abs()).sqrt() / units.hbar;
    if diff >= 0.0 {
        LocalWavenumber::Propagating(k)
    } else {
        LocalWavenumber::Evanescent(k)
    }
}

/// Classical group velocity √(2(E − V)/m).
pub fn group_velocity(energy: f64, v: f64, units: QuantumUnits) -> Result<f64> {
    if energy < v {
        return Err(Error::domain(format!("group velocity undefined below the potential: E={energy} < V={v}")));
    }
    Ok((2.0 * (energy - v) / units.mass).sqrt())
}

/// Normalised probability density |ψ|²/∫|ψ|² on the grid.
pub fn born_density(grid: &Grid1D, psi: &[Complex64]) -> Result<Vec<f64>> {
    if psi.len() != grid.n {
        return Err(Error::config(format!("field has {} samples but grid has {}", psi.len(), grid.n)));
    }
    let density: Vec<f64> = psi.iter().map(|p| p.norm_sqr()).collect();
    let norm = grid.integrate(&density);
    if !(norm > 0.0) || !norm.is_finite() {
        return Err(Error::domain("Born density of a field with zero norm"));
    }
    Ok(density.into_iter().map(|d| d / norm).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn wavenumber_examples() {
        let u = QuantumUnits::default();
        assert_eq!(wkb_wavenumber(1.0, 1.0, u), LocalWavenumber::Propagating(0.0));
        assert_eq!(wkb_wavenumber(0.5, 0.0, u), LocalWavenumber::Propagating(1.0));
        match wkb_wavenumber(1.0, 2.0, u) {
            LocalWavenumber::Evanescent(k) => assert!((k - 2f64.sqrt()).abs() < 1e-15),
            other => panic!("expected evanescent, got {other:?}"),
        }
    }

    #[test]
    fn group_velocity_examples() {
        let u = QuantumUnits::default();
        assert_eq!(group_velocity(1.0, 1.0, u).unwrap(), 0.0);
        assert_eq!(group_velocity(2.0, 0.0, u).unwrap(), 2.0);
        assert!(group_velocity(0.0, 1.0, u).is_err());
    }

    proptest! {
        #[test]
        fn group_velocity_is_hbar_k_over_m(e in -5.0f64..5.0, dv in 0.0f64..5.0, m in 0.2f64..4.0, hbar in 0.2f64..3.0) {
            let u = QuantumUnits { hbar, mass: m };
            let v = e - dv;
            let k = wkb_wavenumber(e, v, u).magnitude();
            let vg = group_velocity(e, v, u).unwrap();
            prop_assert!((hbar * k / m - vg).abs() <= 1e-12 * vg.max(1.0));
        }

        #[test]
        fn born_density_ignores_scale_and_phase(re in -3.0f64..3.0, im in -3.0f64..3.0, alpha in 0.0f64..6.3) {
            prop_assume!(re.hypot(im) > 1e-3);
            let g = Grid1D::new(-10.0, 10.0, 256).unwrap();
            let psi: Vec<Complex64> = g.coords().iter().map(|&z| Complex64::new((-z * z).exp(), 0.3 * z * (-z * z).exp())).collect();
            let c = Complex64::new(re, im) * Complex64::from_polar(1.0, alpha);
            let scaled: Vec<Complex64> = psi.iter().map(|p| p * c).collect();
            let a = born_density(&g, &psi).unwrap();
            let b = born_density(&g, &scaled).unwrap();
            for (x, y) in a.iter().zip(&b) {
                prop_assert!((x - y).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn born_density_examples() {
        let g = Grid1D::new(0.0, 4.0, 64).unwrap();
        let d = born_density(&g, &vec![Complex64::new(0.7, 0.0); 64]).unwrap();
        assert!(d.iter().all(|&x| (x - 0.25).abs() < 1e-14));
        assert!((g.integrate(&d) - 1.0).abs() < 1e-10);

        let g = Grid1D::new(-30.0, 30.0, 4096).unwrap();
        let psi: Vec<Complex64> = g.coords().iter().map(|&z| Complex64::new(1.0 / z.cosh(), 0.0)).collect();
        let d = born_density(&g, &psi).unwrap();
        for (z, p) in g.coords().iter().zip(&d) {
            assert!((p - 0.5 / z.cosh().powi(2)).abs() < 1e-12);
        }

        assert!(matches!(born_density(&g, &vec![Complex64::new(0.0, 0.0); 4096]), Err(Error::Domain(_))));
    }
}
