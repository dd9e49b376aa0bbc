fn main() {
    std::process::exit(waveguide_lab::runner::run(std::env::args_os()));
}
