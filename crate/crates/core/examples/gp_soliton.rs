//! Gross-Pitaevskii bright soliton, with and without the rest-energy term,
//! and a packet released in a harmonic trap.

use waveguide_lab::constants::QuantumUnits;
use waveguide_lab::nonlinear::{evolve_gp, gp_breather, ComplexField1D, GpParams};
use waveguide_lab::stationary::PotentialSpec;
use waveguide_lab::Grid1D;

fn main() -> waveguide_lab::Result<()> {
    let grid = Grid1D::new(-32.0, 32.0, 1024)?;
    let units = QuantumUnits::default();
    let (g, t_end, dt) = (-1.0, 1.0, 1e-3);
    let steps = (t_end / dt) as usize;
    let phi0 = ComplexField1D::from_fn(grid, |z| gp_breather(1.0, 0.5, 0.0, g, units, z, 0.0).unwrap())?;
    let exact: Vec<_> =
        grid.coords().iter().map(|&z| gp_breather(1.0, 0.5, 0.0, g, units, z, t_end).unwrap()).collect();

    let plain = evolve_gp(phi0.clone(), &GpParams::free(g), dt, steps)?;
    println!("free GP soliton: max error vs exact {:.3e}", plain.max_distance(&exact));

    // the rest energy only rotates the global phase, so |φ| is unchanged
    let rest = evolve_gp(phi0.clone(), &GpParams { include_rest: true, ..GpParams::free(g) }, dt, steps)?;
    let dmod = rest.modulus().iter().zip(plain.modulus()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    println!("with m c^2 phi: max |Δ|φ|| {dmod:.3e}");

    let trap = GpParams { potential: PotentialSpec::Harmonic { stiffness: 1.0, center: 0.0 }, ..GpParams::free(g) };
    let shifted = ComplexField1D::from_fn(grid, |z| gp_breather(1.0, 0.0, 2.0, g, units, z, 0.0).unwrap())?;
    let quarter = (std::f64::consts::FRAC_PI_2 / dt).round() as usize;
    let out = evolve_gp(shifted, &trap, dt, quarter)?;
    println!("trapped packet: centroid 2.0 -> {:.4} after a quarter period", out.moments().centroid);
    Ok(())
}
