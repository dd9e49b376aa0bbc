//! Electron cutoff, waveguide width and Planck-scale quantities in SI units.

use waveguide_lab::constants::{self, CODATA_2018};

fn main() -> waveguide_lab::Result<()> {
    let m = CODATA_2018.m_e;
    println!("cutoff frequency f_o = mc^2/h = {:.6e} Hz", constants::compton_cutoff(m)?);
    println!("waveguide width  d   = h/(2mc) = {:.6e} m", constants::waveguide_width(m)?);
    println!("Planck length        = {:.6e} m", constants::planck_length());
    println!("Planck mass          = {:.6e} kg", constants::planck_mass());
    Ok(())
}
