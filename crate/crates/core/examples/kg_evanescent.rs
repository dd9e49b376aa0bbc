//! Driving below cutoff: the steady field decays as exp(-kappa z) with
//! kappa = 2 pi sqrt(f_o^2 - f^2).

use waveguide_lab::kg::{driven_decay, DrivenConfig};

fn main() -> waveguide_lab::Result<()> {
    let res = driven_decay(&DrivenConfig::new(0.5, 1.0))?;
    println!("closed-form kappa {:.6}", res.closed_form_rate);
    println!("fitted kappa      {:.6}  (rel. err {:.2e})", res.fitted_rate, res.relative_error);
    for (z, a) in res.profile.iter().step_by(60) {
        println!("  z={z:.3}  |u|={a:.4e}");
    }
    Ok(())
}
