//! Transfer-matrix scattering off a rectangular barrier, compared with the
//! closed-form transmission.

use waveguide_lab::constants::QuantumUnits;
use waveguide_lab::stationary::{rectangular_barrier, solve_scattering, PotentialSpec};

fn main() -> waveguide_lab::Result<()> {
    let units = QuantumUnits::default();
    let barrier = PotentialSpec::rectangular_barrier(1.0, 1.0);
    for e in [0.25, 0.5, 0.9, 1.0, 1.5, 3.0] {
        let s = solve_scattering(&barrier, e, units)?;
        println!(
            "E={e:<5} R={:.6} T={:.6} closed form T={:.6} R+T-1={:.1e}",
            s.r_prob,
            s.t_prob,
            rectangular_barrier(1.0, 1.0, e, units),
            s.r_prob + s.t_prob - 1.0
        );
    }
    Ok(())
}
