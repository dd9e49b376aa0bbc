//! Klein-Gordon, Schrodinger and clock branches of the dispersion relation,
//! plus the kinematics of a zigzagging corpuscle.

use waveguide_lab::dispersion::{dispersion_table, zigzag_state};

fn main() -> waveguide_lab::Result<()> {
    let curve = dispersion_table(0.0, 3.0, 7, 1.0)?;
    println!("{:>6} {:>10} {:>10} {:>10}", "k", "f_kg", "f_schrod", "f_clock");
    for i in 0..curve.k_samples.len() {
        println!(
            "{:>6.2} {:>10.5} {:>10.5} {:>10.5}",
            curve.k_samples[i], curve.f_kg[i], curve.f_schrod[i], curve.f_clock_branch[i]
        );
    }

    // f_clock·f_wave = f_o² at every speed
    for v in [0.1, 0.5, 0.9] {
        let s = zigzag_state(v)?;
        println!(
            "v={v}: gamma={:.4} phi={:.4} rad  f_clock={:.4} f_wave={:.4} product={:.12}",
            s.gamma,
            s.phi,
            s.f_clock,
            s.f_wave,
            s.f_clock * s.f_wave
        );
    }
    Ok(())
}
