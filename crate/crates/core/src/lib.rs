//! Numerical laboratory for the waveguide-analogy electron model.
//!
//! The crate is organised by physical subsystem:
//!
//! * [`constants`]: CODATA values, Compton cutoff, waveguide width, Planck scale, unit modes
//! * [`dispersion`]: closed-form relativistic waveguide kinematics
//! * [`kg`]: leapfrog Klein-Gordon evolver and evanescent decay
//! * [`stationary`]: transfer matrices, bound states and the Born density
//! * [`bohm`]: polar decomposition, quantum potential and residual checks
//! * [`nonlinear`]: NLS, Gross-Pitaevskii and quantum-potential-cancelling evolvers
//! * [`zigzag`]: hidden-phase barrier scattering Monte Carlo
//! * [`ambiguity`]: moment widths, uncertainty products and ambiguity surfaces
//! * [`bohr`]: Bohr orbits, phase accordance and the extra-arc quantization
//! * [`runner`]: command-line runner, configs, manifests and figure data
//!
//! Solvers work in natural units (ħ = m = c = 1) unless a function takes the
//! constants explicitly.

// `!(x > 0.0)` is the NaN-rejecting form used throughout the validation code
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// index loops read closer to the stencil formulas
#![allow(clippy::needless_range_loop)]

pub mod ambiguity;
pub mod bohm;
pub mod bohr;
pub mod constants;
pub mod dispersion;
pub mod error;
pub mod grid;
pub mod kg;
pub mod nonlinear;
pub mod runner;
pub mod spectral;
pub mod stationary;
pub mod zigzag;

pub use error::{Error, Result};
pub use grid::Grid1D;
