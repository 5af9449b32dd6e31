//! Lattice counts and volumes are invariant under the integral affine
//! group: maps `x -> Ax + b` with `A` unimodular and `b` integral carry
//! `(1/m)Z^n` onto itself and preserve Lebesgue measure.
//!
//! Run with: `cargo run --example affine_invariance`

use affine_lattice::arith::{format_rational, qvec, qvec_int, AffZMap};
use affine_lattice::count;
use affine_lattice::polytope::RationalPolytope;

fn main() -> Result<(), affine_lattice::Error> {
    let triangle = RationalPolytope::from_points(&[
        qvec_int(&[0, 0]),
        qvec_int(&[2, 0]),
        qvec(&[(1, 2), (3, 2)]),
    ])?;

    // A shear composed with a flip and a translation.
    let f = AffZMap::from_i64(&[&[1, 3], &[0, -1]], &[-2, 5])?;
    let image = triangle.affine_image(&f)?;

    println!(
        "volume: {} -> {}",
        format_rational(&triangle.volume()),
        format_rational(&image.volume())
    );
    println!("{:>4} {:>10} {:>10}", "m", "original", "image");
    for m in 1..=6 {
        println!("{:>4} {:>10} {:>10}", m, count(&triangle, m)?, count(&image, m)?);
    }

    // The inverse map carries the image back exactly.
    let back = image.affine_image(&f.invert())?;
    println!("round trip restores the polytope: {}", back == triangle);
    Ok(())
}
