//! Time-frequency widths of standard pulses and the ambiguity surface of a
//! chirped Gaussian.

use waveguide_lab::ambiguity::{
    ambiguity_surface, chirped_gaussian_product, hermite_corpus, moment_widths, PulseProfile, SECH_PRODUCT,
};
use waveguide_lab::Grid1D;

fn main() -> waveguide_lab::Result<()> {
    let grid = Grid1D::new(-40.0, 40.0, 4096)?;
    let g = moment_widths(&PulseProfile::gaussian(grid))?;
    println!("gaussian   dx·dk = {:.6} (bound 0.5)", g.product());
    let s = moment_widths(&PulseProfile::sech(grid))?;
    println!("sech       dx·dk = {:.6} (exact {:.6})", s.product(), SECH_PRODUCT);
    let c = moment_widths(&PulseProfile::chirped_gaussian(grid, 0.5))?;
    println!("chirped    dx·dk = {:.6} (exact {:.6})", c.product(), chirped_gaussian_product(0.5));
    let r = moment_widths(&PulseProfile::rectangular(grid, 4.0)?)?;
    println!("rectangle  dx·dk = {:.3} divergent={}", r.product(), r.divergent);

    let worst = hermite_corpus(grid, 200, 1)
        .iter()
        .map(|p| moment_widths(p).map(|w| w.product()))
        .collect::<waveguide_lab::Result<Vec<_>>>()?
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    println!("smallest product over 200 random pulses: {worst:.4}");

    let small = Grid1D::new(-16.0, 16.0, 256)?;
    let surf = ambiguity_surface(&PulseProfile::chirped_gaussian(small, 0.3), 63, 64)?;
    let origin = |axis: &[f64]| axis.iter().position(|x| x.abs() < 1e-12).expect("axis contains zero");
    let centre = surf.magnitude[origin(&surf.delay_axis)][origin(&surf.doppler_axis)];
    println!("ambiguity: |chi(0,0)| = {centre:.6}, volume = {:.6}", surf.volume);
    Ok(())
}
