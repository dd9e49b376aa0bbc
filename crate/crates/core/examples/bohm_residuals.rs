//! Evolves a moving NLS soliton and checks the Hamilton-Jacobi and
//! continuity equations on the recorded (R, S) history.

use waveguide_lab::bohm::{
    continuity_residual, decompose, hamilton_jacobi_residual, Dynamics, ResidualOptions, Snapshot,
};
use waveguide_lab::constants::QuantumUnits;
use waveguide_lab::nonlinear::{breather_exact, evolve_nls_observed, ComplexField1D, Splitting};
use waveguide_lab::stationary::PotentialSpec;
use waveguide_lab::Grid1D;

fn main() -> waveguide_lab::Result<()> {
    let grid = Grid1D::new(-16.0, 16.0, 2048)?;
    let u0 = ComplexField1D::from_fn(grid, |z| breather_exact(1.0, 0.5, 0.0, z, 0.0))?;
    let mut levels = Vec::new();
    evolve_nls_observed(u0, 1e-4, 50, Splitting::Yoshida4, 10, &mut |f| levels.push(f.clone()))?;
    let history: Vec<Snapshot> = levels
        .iter()
        .map(|f| decompose(&grid, &f.u, 1.0).map(|field| Snapshot { t: f.t, field }))
        .collect::<waveguide_lab::Result<_>>()?;

    // i u_t + u_zz + 2|u|²u = 0 is GP with ħ = 1, m = 1/2 and g = −2
    let opts = ResidualOptions {
        units: QuantumUnits { hbar: 1.0, mass: 0.5 },
        dynamics: Dynamics::GrossPitaevskii { g: -2.0 },
        ..Default::default()
    };
    let hj = hamilton_jacobi_residual(&history, &PotentialSpec::Free {}, opts)?;
    let cont = continuity_residual(&history, opts)?;
    println!("{} snapshots", history.len());
    println!("max |HJ residual|         = {:.3e}", hj.max_abs);
    println!("max |continuity residual| = {:.3e}", cont.max_abs);
    Ok(())
}
