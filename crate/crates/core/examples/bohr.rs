//! Bohr orbits, phase accordance of the clock and the wave along an orbit,
//! and the orbit index recovered from the extra-arc time.

use waveguide_lab::bohr::{orbit_from_n, orbit_table, phase_accordance};

fn main() -> waveguide_lab::Result<()> {
    println!("{:>3} {:>12} {:>10} {:>10} {:>8} {:>10}", "n", "r (m)", "v/c", "E (eV)", "M/hbar", "N");
    for row in orbit_table(1, 6)? {
        println!(
            "{:>3} {:>12.5e} {:>10.6} {:>10.5} {:>8.3} {:>10.6}",
            row.n, row.r, row.v_over_c, row.energy_ev, row.m_over_hbar, row.n_quantization
        );
    }

    let ground = orbit_from_n(1)?;
    let z: Vec<f64> = (1..=4).map(|i| i as f64 * 0.25).collect();
    for p in phase_accordance(ground.beta(), 1.0, &z)? {
        println!(
            "z={:.2}: clock {:.6}  wave {:.6}  rel. dev {:.1e}",
            p.z,
            p.phi_clock,
            p.phi_wave,
            p.relative_deviation()
        );
    }
    Ok(())
}
