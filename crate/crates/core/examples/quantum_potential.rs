//! Quantum potential of a sech envelope on a grid against the closed form,
//! and the check that the Q-cancelling nonlinearity removes it.

use waveguide_lab::bohm::{cancellation_check, quantum_potential, sech_quantum_potential, EnvelopeProfile, Stencil};
use waveguide_lab::constants::QuantumUnits;
use waveguide_lab::stationary::PotentialSpec;
use waveguide_lab::Grid1D;

fn main() -> waveguide_lab::Result<()> {
    let units = QuantumUnits::default();
    let a = 1.0;
    let grid = Grid1D::new(-25.0, 25.0, 5000)?;
    let r: Vec<f64> = grid.coords().iter().map(|z| 1.0 / (a * z).cosh()).collect();
    let q = quantum_potential(&grid, &r, units, Stencil::Central)?;
    println!("max |Q_grid - Q_closed| = {:.3e}", q.max_abs_error(|z| sech_quantum_potential(a, z, units)));
    for z in [-3.0, -1.0, 0.0, 1.0, 3.0] {
        println!("  Q({z:>4}) = {:.6}", sech_quantum_potential(a, z, units));
    }

    let rep = cancellation_check(&grid, EnvelopeProfile::Gaussian, a, 0.0, &PotentialSpec::Free {}, units)?;
    println!("gaussian cancellation: max deviation {:.3e}", rep.max_deviation);
    Ok(())
}
