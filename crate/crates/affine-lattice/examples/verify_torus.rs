//! Verifying `L_M(m) = vol(M) * m^n` on glued complexes: tori of several
//! sizes and the Klein bottle. The `m = 1` row of each report is the
//! statement that the number of integral points equals the volume.
//!
//! Run with: `cargo run --example verify_torus`

use affine_lattice::complex::builtins;

fn main() -> Result<(), affine_lattice::Error> {
    for (name, complex) in [
        ("torus 1x1", builtins::torus(&[1, 1])?),
        ("torus 3x2", builtins::torus(&[3, 2])?),
        ("torus 2x1x1", builtins::torus(&[2, 1, 1])?),
        ("klein bottle", builtins::klein_bottle()?),
    ] {
        let report = complex.verify(12)?;
        println!("== {name} ==");
        println!("{report}\n");
    }
    Ok(())
}
