//! The Q-cancelling equation moves a packet as a classical particle: free
//! drift at constant speed and uniform acceleration under a linear potential.
//! Strong forces or long runs push the packet into the modulus floor and abort.

use num_complex::Complex64;
use waveguide_lab::nonlinear::{evolve_nlq_observed, quadratic_fit, ComplexField1D, NlqParams};
use waveguide_lab::stationary::PotentialSpec;
use waveguide_lab::Grid1D;

fn run(potential: PotentialSpec, v: f64) -> waveguide_lab::Result<()> {
    let grid = Grid1D::new(-32.0, 32.0, 1024)?;
    let psi0 = ComplexField1D::from_fn(grid, |z| Complex64::from_polar(1.0 / z.cosh(), v * z))?;
    let params = NlqParams { potential: potential.clone(), ..Default::default() };
    let (mut t, mut c) = (Vec::new(), Vec::new());
    let dt = 1e-3;
    evolve_nlq_observed(psi0, &params, dt, 2000, 100, &mut |f| {
        t.push(f.t);
        c.push(f.moments().centroid);
    })?;
    let fit = quadratic_fit(&t, &c).expect("enough samples");
    println!("{potential:?}: centroid ≈ {:.4} + {:.4} t + {:.4} t^2", fit[0], fit[1], fit[2]);
    Ok(())
}

fn main() -> waveguide_lab::Result<()> {
    // 2π·5/64 keeps e^{ivz} periodic on the 64-wide box
    run(PotentialSpec::Free {}, 2.0 * std::f64::consts::PI * 5.0 / 64.0)?;
    // V = −F z, so the acceleration is F/m and the t² coefficient is F/2
    run(PotentialSpec::Linear { force: 0.5, origin: 0.0 }, 0.0)
}
