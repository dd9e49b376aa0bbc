//! Bound states from the three-point discretization of
//! `−(ħ²/2m)ψ'' + Vψ = Eψ` with ψ = 0 at both ends of the domain.
//!
//! Eigenvalues come from Sturm-sequence bisection, eigenvectors from inverse
//! iteration. By default the problem is also solved on a grid with twice the
//! resolution and the two results are Richardson-combined, which removes the
//! O(dz²) error of the stencil.

use serde::{Deserialize, Serialize};

use super::potential::PotentialSpec;
use crate::constants::QuantumUnits;
use crate::error::{Error, Result};
use crate::grid::Grid1D;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    /// Domain ends are physical hard walls; every eigenpair is a bound state.
    HardWalls,
    /// Walls are only a numerical cut-off; states at or above the potential
    /// at the domain edge are box artifacts and are not reported.
    Confining,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundOptions {
    pub units: QuantumUnits,
    pub boundary: Boundary,
    pub extrapolate: bool,
}

impl Default for BoundOptions {
    fn default() -> Self {
        BoundOptions { units: QuantumUnits::default(), boundary: Boundary::Confining, extrapolate: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundState {
    pub index: usize,
    /// Best energy estimate (extrapolated when enabled).
    pub energy: f64,
    /// Normalised eigenfunction on the grid nodes, zero at `z_min`.
    pub psi: Vec<f64>,
    /// Eigenvalue of the discretization on the requested grid.
    pub raw_energy: f64,
    /// Eigenvector of the discretization on the requested grid.
    pub raw_psi: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundStates {
    pub grid: Grid1D,
    pub states: Vec<BoundState>,
    pub requested: usize,
    /// False when fewer than `requested` states were found.
    pub complete: bool,
}

struct Tridiagonal {
    diag: Vec<f64>,
    off: f64,
}

impl Tridiagonal {
    fn new(potential: &PotentialSpec, grid: &Grid1D, units: QuantumUnits) -> Self {
        let dz = grid.dz();
        let t = units.kinetic() / (dz * dz);
        let diag = (1..grid.n).map(|i| 2.0 * t + potential.eval(grid.z(i))).collect();
        Tridiagonal { diag, off: -t }
    }

    fn len(&self) -> usize {
        self.diag.len()
    }

    /// Number of eigenvalues strictly below `x`.
    fn count_below(&self, x: f64) -> usize {
        let e2 = self.off * self.off;
        let mut count = 0;
        let mut q = 1.0;
        for (i, &d) in self.diag.iter().enumerate() {
            q = if i == 0 { d - x } else { d - x - e2 / q };
            if q == 0.0 {
                q = -f64::EPSILON * (d.abs() + x.abs() + 1.0);
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn gershgorin(&self) -> (f64, f64) {
        let r = 2.0 * self.off.abs();
        let lo = self.diag.iter().fold(f64::INFINITY, |a, &d| a.min(d)) - r;
        let hi = self.diag.iter().fold(f64::NEG_INFINITY, |a, &d| a.max(d)) + r;
        (lo, hi)
    }

    /// The `j`-th smallest eigenvalue (0-based) by bisection.
    fn eigenvalue(&self, j: usize) -> f64 {
        let (mut lo, mut hi) = self.gershgorin();
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > j {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Solves (T − λ)x = b by elimination without pivoting.
    fn shifted_solve(&self, lambda: f64, b: &[f64]) -> Vec<f64> {
        let n = self.len();
        let e = self.off;
        let tiny = f64::EPSILON * (lambda.abs() + e.abs());
        let mut c = vec![0.0; n];
        let mut y = vec![0.0; n];
        let mut piv = self.diag[0] - lambda;
        if piv.abs() < tiny {
            piv = tiny;
        }
        y[0] = b[0] / piv;
        for i in 1..n {
            c[i - 1] = e / piv;
            piv = self.diag[i] - lambda - e * c[i - 1];
            if piv.abs() < tiny {
                piv = tiny;
            }
            y[i] = (b[i] - e * y[i - 1]) / piv;
        }
        for i in (0..n - 1).rev() {
            y[i] -= c[i] * y[i + 1];
        }
        y
    }

    fn eigenvector(&self, lambda: f64, previous: &[Vec<f64>]) -> Vec<f64> {
        let n = self.len();
        // deterministic, non-symmetric start vector
        let mut x: Vec<f64> = (0..n).map(|i| 1.0 + 0.1 * ((i as f64) * 0.618).sin()).collect();
        for _ in 0..4 {
            x = self.shifted_solve(lambda, &x);
            for p in previous {
                let d: f64 = x.iter().zip(p).map(|(a, b)| a * b).sum();
                x.iter_mut().zip(p).for_each(|(a, b)| *a -= d * b);
            }
            let norm = x.iter().map(|a| a * a).sum::<f64>().sqrt();
            x.iter_mut().for_each(|a| *a /= norm);
        }
        x
    }
}

/// Lowest eigenpairs on one grid; vectors are unit-norm in the Euclidean sense.
fn solve_on(potential: &PotentialSpec, grid: &Grid1D, units: QuantumUnits, count: usize) -> Vec<(f64, Vec<f64>)> {
    let tri = Tridiagonal::new(potential, grid, units);
    let count = count.min(tri.len());
    let mut out: Vec<(f64, Vec<f64>)> = Vec::with_capacity(count);
    let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(count);
    for j in 0..count {
        let lambda = tri.eigenvalue(j);
        let v = tri.eigenvector(lambda, &vectors);
        vectors.push(v.clone());
        out.push((lambda, v));
    }
    out
}

/// Interior vector → full-grid samples normalised so that ∫ψ² dz = 1.
fn to_grid(grid: &Grid1D, interior: &[f64]) -> Vec<f64> {
    let mut psi = Vec::with_capacity(grid.n);
    psi.push(0.0);
    psi.extend_from_slice(interior);
    normalize(grid, &mut psi);
    psi
}

fn normalize(grid: &Grid1D, psi: &mut [f64]) {
    let norm = grid.integrate(&psi.iter().map(|x| x * x).collect::<Vec<_>>()).sqrt();
    psi.iter_mut().for_each(|x| *x /= norm);
}

/// Fixes the sign so the first lobe that rises above 1% of the peak is positive.
fn orient(psi: &mut [f64]) {
    let peak = psi.iter().fold(0.0f64, |a, &x| a.max(x.abs()));
    if let Some(&first) = psi.iter().find(|x| x.abs() > 0.01 * peak) {
        if first < 0.0 {
            psi.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

/// Lowest `n_states` bound states of `potential` with Dirichlet walls at
/// `grid.z_min` and `grid.z_max`.
pub fn solve_bound_states(
    potential: &PotentialSpec,
    grid: &Grid1D,
    n_states: usize,
    options: BoundOptions,
) -> Result<BoundStates> {
    potential.validate()?;
    grid.validate()?;
    if grid.n < 3 {
        return Err(Error::config("bound-state grid needs at least two interior nodes"));
    }
    let coarse = solve_on(potential, grid, options.units, n_states);
    let fine_grid = grid.refined(2);
    let fine = if options.extrapolate { Some(solve_on(potential, &fine_grid, options.units, n_states)) } else { None };
    let edge = potential.eval(grid.z_min).min(potential.eval(grid.z_max));

    let mut states = Vec::new();
    for (j, (raw_energy, raw_vec)) in coarse.iter().enumerate() {
        let mut raw_psi = to_grid(grid, raw_vec);
        orient(&mut raw_psi);
        let (energy, psi) = match &fine {
            Some(fine) if j < fine.len() => {
                let (fine_energy, fine_vec) = &fine[j];
                let mut fine_psi = to_grid(&fine_grid, fine_vec);
                let overlap: f64 = raw_psi.iter().enumerate().map(|(i, x)| x * fine_psi[2 * i]).sum();
                if overlap < 0.0 {
                    fine_psi.iter_mut().for_each(|x| *x = -*x);
                }
                let mut psi: Vec<f64> = (0..grid.n).map(|i| (4.0 * fine_psi[2 * i] - raw_psi[i]) / 3.0).collect();
                normalize(grid, &mut psi);
                ((4.0 * fine_energy - raw_energy) / 3.0, psi)
            }
            _ => (*raw_energy, raw_psi.clone()),
        };
        if options.boundary == Boundary::Confining && energy >= edge {
            break;
        }
        states.push(BoundState { index: j, energy, psi, raw_energy: *raw_energy, raw_psi });
    }
    // Gram-Schmidt on the extrapolated functions; the raw ones are already orthogonal
    for j in 0..states.len() {
        let (done, rest) = states.split_at_mut(j);
        let psi = &mut rest[0].psi;
        for prev in done.iter() {
            let d = grid.integrate(&psi.iter().zip(&prev.psi).map(|(a, b)| a * b).collect::<Vec<_>>());
            psi.iter_mut().zip(&prev.psi).for_each(|(a, b)| *a -= d * b);
        }
        normalize(grid, psi);
    }
    Ok(BoundStates { grid: *grid, complete: states.len() >= n_states, requested: n_states, states })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stationary::Segment;
    use std::f64::consts::PI;

    fn square_well(l: f64) -> PotentialSpec {
        PotentialSpec::Piecewise { segments: vec![Segment { z_start: 0.0, z_end: l, v: 0.0 }] }
    }

    fn hard() -> BoundOptions {
        BoundOptions { boundary: Boundary::HardWalls, ..Default::default() }
    }

    #[test]
    fn infinite_square_well_spectrum() {
        let l = 2.0;
        let g = Grid1D::new(0.0, l, 2048).unwrap();
        let res = solve_bound_states(&square_well(l), &g, 4, hard()).unwrap();
        assert!(res.complete);
        for (i, s) in res.states.iter().enumerate() {
            let n = (i + 1) as f64;
            let exact = n * n * PI * PI / (2.0 * l * l);
            assert!(((s.energy - exact) / exact).abs() < 1e-6, "n={n}: {} vs {exact}", s.energy);
        }
    }

    #[test]
    fn harmonic_spectrum() {
        let g = Grid1D::new(-10.0, 10.0, 2048).unwrap();
        let p = PotentialSpec::Harmonic { stiffness: 1.0, center: 0.0 };
        let res = solve_bound_states(&p, &g, 4, BoundOptions::default()).unwrap();
        for (n, s) in res.states.iter().enumerate() {
            assert!((s.energy - (n as f64 + 0.5)).abs() < 1e-6, "n={n}: {}", s.energy);
        }
    }

    #[test]
    fn raw_energies_converge_at_second_order() {
        let p = PotentialSpec::Harmonic { stiffness: 1.0, center: 0.0 };
        let opts = BoundOptions { extrapolate: false, ..Default::default() };
        let err = |n: usize| {
            let g = Grid1D::new(-10.0, 10.0, n).unwrap();
            let s = solve_bound_states(&p, &g, 3, opts).unwrap();
            (s.states[2].energy - 2.5).abs()
        };
        let ratio = err(256) / err(512);
        assert!((ratio - 4.0).abs() < 0.1, "ratio {ratio}");
    }

    #[test]
    fn eigenfunctions_are_orthonormal_with_alternating_parity() {
        let g = Grid1D::new(-8.0, 8.0, 1024).unwrap();
        let p = PotentialSpec::Harmonic { stiffness: 1.0, center: 0.0 };
        let res = solve_bound_states(&p, &g, 4, BoundOptions::default()).unwrap();
        for a in &res.states {
            for b in &res.states {
                for (x, y) in [(&a.psi, &b.psi), (&a.raw_psi, &b.raw_psi)] {
                    let ip = g.integrate(&x.iter().zip(y.iter()).map(|(u, v)| u * v).collect::<Vec<_>>());
                    let want = if a.index == b.index { 1.0 } else { 0.0 };
                    assert!((ip - want).abs() < 1e-8, "<{}|{}> = {ip}", a.index, b.index);
                }
            }
            // node i and node n−i are mirror images about z = 0
            let parity = if a.index % 2 == 0 { 1.0 } else { -1.0 };
            for i in 1..g.n / 2 {
                assert!((a.psi[i] - parity * a.psi[g.n - i]).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn too_few_confined_states_are_flagged() {
        // shallow finite well inside a box: only the ground state lies below the rim
        let p = PotentialSpec::Piecewise {
            segments: vec![
                Segment { z_start: -10.0, z_end: -0.5, v: 0.0 },
                Segment { z_start: -0.5, z_end: 0.5, v: -0.5 },
                Segment { z_start: 0.5, z_end: 10.0, v: 0.0 },
            ],
        };
        let g = Grid1D::new(-10.0, 10.0, 1024).unwrap();
        let res = solve_bound_states(&p, &g, 3, BoundOptions::default()).unwrap();
        assert!(!res.complete);
        assert_eq!(res.states.len(), 1);
        assert!(res.states[0].energy < 0.0);
    }
}
