//! Counting the points of `(1/m)Z^n` in a rational polytope.
//!
//! Run with: `cargo run --example count_polytope`

use affine_lattice::arith::{format_rational, qvec, qvec_int};
use affine_lattice::polytope::RationalPolytope;
use affine_lattice::{count, enumerate_points};

fn main() -> Result<(), affine_lattice::Error> {
    // A triangle with a non-integer vertex: conv{(0,0), (2,0), (0,3/2)}.
    let triangle = RationalPolytope::from_points(&[
        qvec_int(&[0, 0]),
        qvec_int(&[2, 0]),
        qvec(&[(0, 1), (3, 2)]),
    ])?;

    println!("triangle volume: {}", format_rational(&triangle.volume()));
    for m in 1..=4 {
        println!("L({m}) = {}", count(&triangle, m)?);
    }

    // The points themselves, in lexicographic order.
    println!("\npoints of (1/2)Z^2 in the triangle:");
    for point in enumerate_points(&triangle, 2)? {
        println!(
            "  ({})",
            point.iter().map(format_rational).collect::<Vec<_>>().join(", ")
        );
    }
    Ok(())
}
