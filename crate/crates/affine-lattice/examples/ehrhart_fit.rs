//! Fitting the quasi-polynomial `m -> L_P(m)` of a rational polytope. The
//! period of the coefficients divides the lcm of the vertex denominators,
//! and the leading coefficient is always the volume.
//!
//! Run with: `cargo run --example ehrhart_fit`

use affine_lattice::arith::{format_rational, qvec, qvec_int};
use affine_lattice::polytope::RationalPolytope;
use affine_lattice::ehrhart_report;

fn main() -> Result<(), affine_lattice::Error> {
    // Integer vertices: a plain polynomial.
    let square = RationalPolytope::unit_cube(2);
    let report = ehrhart_report(&square, None)?;
    println!("unit square : {}", report.fitted);
    println!("              validated against direct counts up to m = {}", report.validated_up_to);

    // Half-integer vertex: period 2 shows up in the coefficients.
    let half = RationalPolytope::from_points(&[qvec_int(&[0]), qvec(&[(1, 2)])])?;
    let report = ehrhart_report(&half, None)?;
    println!("[0, 1/2]    : {}", report.fitted);

    // The leading coefficient equals the volume on every residue class.
    let triangle = RationalPolytope::from_points(&[
        qvec_int(&[0, 0]),
        qvec(&[(5, 2), (0, 1)]),
        qvec(&[(0, 1), (4, 3)]),
    ])?;
    let report = ehrhart_report(&triangle, None)?;
    println!("triangle    : {}", report.fitted);
    let fitted = &report.fitted;
    for r in 0..fitted.period() {
        println!(
            "  leading coefficient on residue {r}: {} (volume {})",
            format_rational(fitted.coefficient(2, r)),
            format_rational(&triangle.volume())
        );
    }
    Ok(())
}
