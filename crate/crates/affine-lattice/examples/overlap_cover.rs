//! Counting on an overlap cover two ways: union-find over identified
//! lattice points, and inclusion-exclusion over the chart cover. The
//! running example is a circle of circumference 1 covered by two arcs whose
//! overlap has two connected components, so inclusion-exclusion must
//! subtract both.
//!
//! Run with: `cargo run --example overlap_cover`

use affine_lattice::arith::format_rational;
use affine_lattice::complex::builtins;

fn main() -> Result<(), affine_lattice::Error> {
    let circle = builtins::circle_two_arcs()?;
    println!("charts:");
    for (i, chart) in circle.charts().iter().enumerate() {
        let ends: Vec<String> = chart
            .vertices()
            .iter()
            .map(|v| format_rational(&v[0]))
            .collect();
        println!("  chart {i}: [{}]", ends.join(", "));
    }

    // The audit trail of the inclusion-exclusion expansion.
    let ie = circle.inclusion_exclusion()?;
    println!("\ninclusion-exclusion terms:");
    for term in &ie.terms {
        println!(
            "  charts {:?}, sign {:+}, {} piece(s), total volume {}",
            term.charts,
            term.sign,
            term.pieces.len(),
            format_rational(&term.pieces.iter().map(|p| p.volume()).sum())
        );
    }

    println!("\n{:>4} {:>16} {:>16}", "m", "union-find", "incl-excl");
    for m in 1..=12 {
        println!(
            "{:>4} {:>16} {:>16}",
            m,
            circle.count_union_find(m)?,
            ie.count(m)?
        );
    }
    println!("\nvolume: {}", format_rational(&circle.volume()?));
    Ok(())
}
