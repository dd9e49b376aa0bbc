//! Leapfrog Klein-Gordon run of a standing wave; the measured frequency
//! matches the discrete dispersion relation.

use waveguide_lab::kg::plane_wave_run;

fn main() -> waveguide_lab::Result<()> {
    for k in [0.5, 1.0, 2.0] {
        let run = plane_wave_run(k, 1.0, 256, 0.5, 20.0)?;
        println!(
            "k={k}: measured {:.8}  continuum {:.8}  discrete {:.8}  rel.err {:.2e}  energy drift {:.2e} ({} steps)",
            run.measured_frequency,
            run.continuum_frequency,
            run.discrete_frequency,
            run.relative_error,
            run.energy_drift,
            run.steps
        );
    }
    Ok(())
}
