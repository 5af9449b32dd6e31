//! The floating-point side of the story: for a smooth compactly supported
//! bump `f`, the lattice sum `S(m)` tracks `m^n * integral(f)` with an error
//! that decays faster than any power of `1/m`.
//!
//! Run with: `cargo run --example poisson_decay`

use affine_lattice::poisson::{decay_report, BumpFunction};

fn main() -> Result<(), affine_lattice::Error> {
    let bump = BumpFunction::standard(1);
    println!(
        "1-D bump, center 0, radius {}, amplitude {}:",
        bump.radius(),
        bump.amplitude()
    );
    print!("{}", decay_report(&bump, &[4, 8, 16, 32])?);

    let bump2 = BumpFunction::standard(2);
    println!("\n2-D bump:");
    print!("{}", decay_report(&bump2, &[4, 8, 16])?);
    Ok(())
}
