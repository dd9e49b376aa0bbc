//! Moving NLS soliton against the exact breather, with both splittings.

use waveguide_lab::constants::QuantumUnits;
use waveguide_lab::nonlinear::{breather_exact, conserved_set, evolve_nls, ComplexField1D, Equation, Splitting};
use waveguide_lab::Grid1D;

fn main() -> waveguide_lab::Result<()> {
    let grid = Grid1D::new(-32.0, 32.0, 1024)?;
    let (a, v, t_end, dt) = (1.0, 1.0, 2.0, 1e-3);
    let steps = (t_end / dt) as usize;
    for splitting in [Splitting::Strang, Splitting::Yoshida4] {
        let u0 = ComplexField1D::from_fn(grid, |z| breather_exact(a, v, 0.0, z, 0.0))?;
        let c0 = conserved_set(&u0, Equation::Nls, QuantumUnits::default());
        let u = evolve_nls(u0, dt, steps, splitting)?;
        let exact: Vec<_> = grid.coords().iter().map(|&z| breather_exact(a, v, 0.0, z, t_end)).collect();
        let c = conserved_set(&u, Equation::Nls, QuantumUnits::default());
        println!(
            "{splitting:?}: max error {:.3e}  norm drift {:.1e}  energy drift {:.1e}  centroid {:.5} (expected {})",
            u.max_distance(&exact),
            (c.norm - c0.norm).abs() / c0.norm,
            (c.energy - c0.energy).abs() / c0.energy.abs(),
            u.moments().centroid,
            v * t_end
        );
    }
    Ok(())
}
