//! Lowest oscillator eigenstates from the finite-difference eigensolver.

use waveguide_lab::stationary::{solve_bound_states, BoundOptions, PotentialSpec};
use waveguide_lab::Grid1D;

fn main() -> waveguide_lab::Result<()> {
    let well = PotentialSpec::Harmonic { stiffness: 1.0, center: 0.0 };
    let grid = Grid1D::new(-10.0, 10.0, 2048)?;
    let states = solve_bound_states(&well, &grid, 5, BoundOptions::default())?;
    for s in &states.states {
        let exact = s.index as f64 + 0.5;
        println!("n={} E={:.9} raw={:.9} exact={exact}", s.index, s.energy, s.raw_energy);
    }
    Ok(())
}
