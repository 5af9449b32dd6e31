//! Ready-made complexes: tori of any size, the Klein bottle, a circle
//! written as an overlap cover by two arcs, and the wrapper that turns a
//! single polytope into a one-chart complex. Each can be requested by name
//! (e.g. `torus:2,1`) from the command line or from code.

use num::Zero;

use crate::arith::{qvec, qvec_int, rat_int, AffZMap, QVector, Rational, ZMatrix};
use crate::polytope::RationalPolytope;
use crate::Error;

use super::{AffineComplex, ComplexMode, Gluing};

/// The n-torus `ℝⁿ / (ℓ_1ℤ × … × ℓ_nℤ)`: one box chart `Π [0, ℓ_j]` with
/// each pair of opposite facets identified by translation. Its volume is
/// `Π ℓ_j`.
pub fn torus(lengths: &[u64]) -> Result<AffineComplex, Error> {
    let n = lengths.len();
    if n == 0 || lengths.iter().any(|&l| l == 0) {
        return Err(Error::InvalidInput(
            "torus needs at least one positive side length".into(),
        ));
    }
    let bounds: Vec<(Rational, Rational)> = lengths
        .iter()
        .map(|&l| (Rational::zero(), rat_int(l as i64)))
        .collect();
    let chart = RationalPolytope::cuboid(&bounds)?;
    let mut gluings = Vec::with_capacity(n);
    for j in 0..n {
        // The facet {x_j = 0}, as the hull of the box corners with x_j = 0.
        let mut corners = Vec::new();
        for mask in 0..(1u32 << n) {
            if mask & (1 << j) != 0 {
                continue;
            }
            let corner: QVector = (0..n)
                .map(|i| {
                    if mask & (1 << i) != 0 {
                        rat_int(lengths[i] as i64)
                    } else {
                        Rational::zero()
                    }
                })
                .collect();
            corners.push(corner);
        }
        let region = RationalPolytope::from_points(&corners)?;
        let mut shift = vec![0i64; n];
        shift[j] = lengths[j] as i64;
        gluings.push(Gluing {
            source_chart: 0,
            source_region: region,
            target_chart: 0,
            map: AffZMap::translation_by(&shift),
        });
    }
    AffineComplex::new(n, vec![chart], gluings, ComplexMode::FacetGlued)
}

/// The Klein bottle: the unit square with `(0, y) ~ (1, y)` and
/// `(x, 0) ~ (1 - x, 1)`. Volume 1.
pub fn klein_bottle() -> Result<AffineComplex, Error> {
    let chart = RationalPolytope::unit_cube(2);
    let left = RationalPolytope::from_points(&[qvec_int(&[0, 0]), qvec_int(&[0, 1])])?;
    let bottom = RationalPolytope::from_points(&[qvec_int(&[0, 0]), qvec_int(&[1, 0])])?;
    let gluings = vec![
        Gluing {
            source_chart: 0,
            source_region: left,
            target_chart: 0,
            map: AffZMap::translation_by(&[1, 0]),
        },
        Gluing {
            source_chart: 0,
            source_region: bottom,
            target_chart: 0,
            map: AffZMap::new(
                ZMatrix::from_i64(&[&[-1, 0], &[0, 1]]),
                vec![1.into(), 1.into()],
            )?,
        },
    ];
    AffineComplex::new(2, vec![chart], gluings, ComplexMode::FacetGlued)
}

/// A circle of circumference 1 covered by two overlapping arcs, in
/// overlap-cover mode: charts `[0, 5/8]` and `[1/2, 9/8]`, glued by the
/// identity on `[1/2, 5/8]` and by `x ↦ x + 1` on `[0, 1/8]`. The overlap
/// has two connected components, so inclusion-exclusion must subtract both.
pub fn circle_two_arcs() -> Result<AffineComplex, Error> {
    let arc0 = RationalPolytope::from_points(&[qvec_int(&[0]), qvec(&[(5, 8)])])?;
    let arc1 = RationalPolytope::from_points(&[qvec(&[(1, 2)]), qvec(&[(9, 8)])])?;
    let mid = RationalPolytope::from_points(&[qvec(&[(1, 2)]), qvec(&[(5, 8)])])?;
    let wrap = RationalPolytope::from_points(&[qvec_int(&[0]), qvec(&[(1, 8)])])?;
    let gluings = vec![
        Gluing {
            source_chart: 0,
            source_region: mid,
            target_chart: 1,
            map: AffZMap::identity(1),
        },
        Gluing {
            source_chart: 0,
            source_region: wrap,
            target_chart: 1,
            map: AffZMap::translation_by(&[1]),
        },
    ];
    AffineComplex::new(1, vec![arc0, arc1], gluings, ComplexMode::OverlapCover)
}

/// A single polytope as a one-chart complex with no gluings, in
/// overlap-cover mode so both counting routes apply.
pub fn single_polytope(p: RationalPolytope) -> Result<AffineComplex, Error> {
    let n = p.ambient_dim();
    AffineComplex::new(n, vec![p], Vec::new(), ComplexMode::OverlapCover)
}

/// Names and one-line descriptions of the builtin complexes, for `builtin
/// list`.
pub fn list() -> Vec<(&'static str, &'static str)> {
    vec![
        (
            "torus:L1,...,Ln",
            "n-torus with integer side lengths, e.g. torus:2,1 (facet-glued)",
        ),
        ("klein_bottle", "unit square with an orientation-reversing gluing (facet-glued)"),
        (
            "circle_two_arcs",
            "circle of circumference 1 covered by two arcs (overlap-cover)",
        ),
        (
            "unit_square",
            "the unit square as a one-chart complex (overlap-cover)",
        ),
    ]
}

/// Resolves a builtin by name, e.g. `torus:3,2,1` or `klein_bottle`.
pub fn by_name(name: &str) -> Result<AffineComplex, Error> {
    if let Some(spec) = name.strip_prefix("torus:") {
        let lengths: Vec<u64> = spec
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<u64>()
                    .map_err(|e| Error::InvalidInput(format!("torus side length {s:?}: {e}")))
            })
            .collect::<Result<_, _>>()?;
        return torus(&lengths);
    }
    match name {
        "klein_bottle" => klein_bottle(),
        "circle_two_arcs" => circle_two_arcs(),
        "unit_square" => single_polytope(RationalPolytope::unit_cube(2)),
        other => Err(Error::UnknownBuiltin(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn by_name_resolves_all_listed_shapes() {
        assert!(by_name("torus:2,1").is_ok());
        assert!(by_name("klein_bottle").is_ok());
        assert!(by_name("circle_two_arcs").is_ok());
        assert!(by_name("unit_square").is_ok());
        assert!(matches!(by_name("moebius"), Err(Error::UnknownBuiltin(_))));
        assert!(matches!(by_name("torus:0"), Err(Error::InvalidInput(_))));
        assert!(matches!(by_name("torus:x"), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn torus_3d() {
        let t = torus(&[2, 1, 1]).unwrap();
        assert!(t.validate().is_valid());
        assert_eq!(t.volume().unwrap(), rat_int(2));
        assert_eq!(t.count_union_find(1).unwrap(), 2);
        assert_eq!(t.count_union_find(2).unwrap(), 16);
    }

    #[test]
    fn torus_1d_is_a_circle() {
        let t = torus(&[1]).unwrap();
        for m in 1..=8 {
            assert_eq!(t.count_union_find(m).unwrap(), m);
        }
    }
}
