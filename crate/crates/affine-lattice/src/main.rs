fn main() {
    std::process::exit(affine_lattice::cli::run(std::env::args_os()));
}
