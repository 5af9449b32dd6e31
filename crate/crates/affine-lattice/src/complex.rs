//! Compact glued-polytope complexes: a finite list of chart polytopes plus
//! gluings by integral affine maps, modeling a compact space with an atlas
//! whose transition maps are of the form `x ↦ Ax + b`, `A ∈ GL_n(ℤ)`,
//! `b ∈ ℤⁿ`.
//!
//! Two input modes are supported. In facet-glued mode the charts have
//! disjoint interiors and identifications happen along boundary pieces (the
//! way a torus is usually written down: one box with opposite facets
//! identified). In overlap-cover mode the charts overlap in full-dimensional
//! regions carrying transition maps, one gluing per connected overlap
//! component; this is the shape that supports counting by
//! inclusion-exclusion.
//!
//! Both modes support exact counting of the `m⁻¹ℤⁿ` points of the quotient,
//! and the two counting routes (union-find over identified points, and
//! inclusion-exclusion over the cover) cross-check each other.

use std::collections::BTreeMap;

use num::{BigInt, Integer, Zero};
use rayon::prelude::*;

use crate::arith::{format_rational, in_scaled_lattice, AffZMap, QVector, Rational};
use crate::lattice::{self, fit_quasipolynomial};
use crate::polytope::RationalPolytope;
use crate::quasipoly::QuasiPolynomial;
use crate::Error;

pub mod builtins;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComplexMode {
    /// Boundary identifications only; chart interiors are disjoint.
    FacetGlued,
    /// Full-dimensional overlaps with one gluing per connected component.
    OverlapCover,
}

impl ComplexMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            ComplexMode::FacetGlued => "facet-glued",
            ComplexMode::OverlapCover => "overlap-cover",
        }
    }

    pub fn parse(s: &str) -> Result<Self, Error> {
        match s {
            "facet-glued" => Ok(ComplexMode::FacetGlued),
            "overlap-cover" => Ok(ComplexMode::OverlapCover),
            other => Err(Error::InvalidInput(format!(
                "unknown mode {other:?}; expected \"facet-glued\" or \"overlap-cover\""
            ))),
        }
    }
}

/// Identification of a region of one chart with its image in another:
/// every point `x` of `source_region` is the same point of the quotient as
/// `map(x)` in chart `target_chart`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gluing {
    pub source_chart: usize,
    pub source_region: RationalPolytope,
    pub target_chart: usize,
    pub map: AffZMap,
}

impl Gluing {
    /// The same identification read in the other direction.
    pub fn reversed(&self) -> Result<Gluing, Error> {
        Ok(Gluing {
            source_chart: self.target_chart,
            source_region: self.source_region.affine_image(&self.map)?,
            target_chart: self.source_chart,
            map: self.map.invert(),
        })
    }
}

/// A point of the quotient, named by a chart and coordinates in that chart.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ManifoldPoint {
    pub chart: usize,
    pub coords: QVector,
}

#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub issues: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.issues.is_empty() {
            write!(f, "valid")
        } else {
            for issue in &self.issues {
                writeln!(f, "- {issue}")?;
            }
            Ok(())
        }
    }
}

/// One signed term of the inclusion-exclusion expansion: the pieces of the
/// intersection of the named charts, expressed in the lowest-index chart.
#[derive(Clone, Debug)]
pub struct CoverTerm {
    pub charts: Vec<usize>,
    pub sign: i64,
    pub pieces: Vec<RationalPolytope>,
}

/// The inclusion-exclusion expansion of a complex in overlap-cover mode,
/// reusable across values of `m`, with the audit trail of all pieces used.
#[derive(Clone, Debug)]
pub struct InclusionExclusion {
    pub terms: Vec<CoverTerm>,
}

impl InclusionExclusion {
    pub fn count(&self, m: u64) -> Result<u64, Error> {
        let mut total: i64 = 0;
        for term in &self.terms {
            for piece in &term.pieces {
                total += term.sign * lattice::count(piece, m)? as i64;
            }
        }
        debug_assert!(total >= 0);
        Ok(total as u64)
    }
}

/// Per-dilation row of a verification report.
#[derive(Clone, Debug)]
pub struct VerificationRow {
    pub m: u64,
    pub count: u64,
    pub expected: Rational,
    pub pass: bool,
}

/// Outcome of checking `L_M(m) = vol(M)·mⁿ` on a complex: the fitted
/// quasi-polynomial, whether its difference from `vol·mⁿ` vanishes
/// identically, and the direct per-m comparisons up to `m_max`.
#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub dim: usize,
    pub volume: Rational,
    pub fitted: QuasiPolynomial,
    pub residual_is_zero: bool,
    pub rows: Vec<VerificationRow>,
    pub passed: bool,
}

impl std::fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "dim        : {}", self.dim)?;
        writeln!(f, "volume     : {}", format_rational(&self.volume))?;
        writeln!(f, "fitted     : {}", self.fitted)?;
        writeln!(
            f,
            "residual   : {}",
            if self.residual_is_zero {
                "fitted minus vol*m^n is identically zero"
            } else {
                "fitted minus vol*m^n is NOT zero"
            }
        )?;
        writeln!(f, "{:>6} {:>12} {:>12}  {}", "m", "count", "vol*m^n", "status")?;
        for row in &self.rows {
            writeln!(
                f,
                "{:>6} {:>12} {:>12}  {}",
                row.m,
                row.count,
                format_rational(&row.expected),
                if row.pass { "PASS" } else { "FAIL" }
            )?;
        }
        write!(f, "overall    : {}", if self.passed { "PASS" } else { "FAIL" })?;
        Ok(())
    }
}

/// A finite complex of rational polytope charts glued by integral affine
/// maps. This is the computational model of a compact space with an
/// integral affine atlas.
#[derive(Clone, Debug)]
pub struct AffineComplex {
    ambient_dim: usize,
    charts: Vec<RationalPolytope>,
    gluings: Vec<Gluing>,
    mode: ComplexMode,
}

impl AffineComplex {
    /// Builds a complex. In overlap-cover mode, missing reverse gluings are
    /// added so the gluing relation is stored symmetrically. In facet-glued
    /// mode the gluing list is kept as authored (identifications are applied
    /// symmetrically during counting regardless).
    pub fn new(
        ambient_dim: usize,
        charts: Vec<RationalPolytope>,
        mut gluings: Vec<Gluing>,
        mode: ComplexMode,
    ) -> Result<Self, Error> {
        if charts.is_empty() {
            return Err(Error::InvalidInput("complex needs at least one chart".into()));
        }
        for (i, c) in charts.iter().enumerate() {
            if c.ambient_dim() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    expected: ambient_dim,
                    got: c.ambient_dim(),
                }
                .in_field(format!("charts[{i}]")));
            }
        }
        for (i, g) in gluings.iter().enumerate() {
            if g.source_chart >= charts.len() || g.target_chart >= charts.len() {
                return Err(Error::InvalidInput(format!(
                    "gluings[{i}]: chart index out of range"
                )));
            }
            if g.source_region.ambient_dim() != ambient_dim || g.map.dim() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    expected: ambient_dim,
                    got: g.source_region.ambient_dim(),
                }
                .in_field(format!("gluings[{i}]")));
            }
        }
        if mode == ComplexMode::OverlapCover {
            let mut extra = Vec::new();
            for g in &gluings {
                let rev = g.reversed()?;
                if !gluings.contains(&rev) && !extra.contains(&rev) {
                    extra.push(rev);
                }
            }
            gluings.extend(extra);
        }
        Ok(AffineComplex {
            ambient_dim,
            charts,
            gluings,
            mode,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn charts(&self) -> &[RationalPolytope] {
        &self.charts
    }

    pub fn gluings(&self) -> &[Gluing] {
        &self.gluings
    }

    pub fn mode(&self) -> ComplexMode {
        self.mode
    }

    /// A copy with one gluing removed; used for negative controls.
    pub fn without_gluing(&self, index: usize) -> AffineComplex {
        let mut c = self.clone();
        c.gluings.remove(index);
        c
    }

    /// Replaces chart `i` by its image under `f`, conjugating every incident
    /// gluing so the quotient is unchanged.
    pub fn recoordinatize(&self, chart: usize, f: &AffZMap) -> Result<AffineComplex, Error> {
        let f_inv = f.invert();
        let mut charts = self.charts.clone();
        charts[chart] = charts[chart].affine_image(f)?;
        let mut gluings = Vec::with_capacity(self.gluings.len());
        for g in &self.gluings {
            let mut g = g.clone();
            if g.source_chart == chart {
                g.source_region = g.source_region.affine_image(f)?;
                g.map = g.map.compose(&f_inv)?;
            }
            if g.target_chart == chart {
                g.map = f.compose(&g.map)?;
            }
            gluings.push(g);
        }
        Ok(AffineComplex {
            ambient_dim: self.ambient_dim,
            charts,
            gluings,
            mode: self.mode,
        })
    }

    /// Checks the structural invariants and, in overlap-cover mode, cocycle
    /// consistency on all pairs of composable gluings. Every violation is
    /// reported with the offending indices; nothing is reported for a valid
    /// complex.
    pub fn validate(&self) -> ValidationReport {
        let mut issues = Vec::new();
        let n = self.ambient_dim;

        for (i, g) in self.gluings.iter().enumerate() {
            let chart = &self.charts[g.source_chart];
            for v in g.source_region.vertices() {
                if !chart.contains(v).unwrap_or(false) {
                    issues.push(format!(
                        "gluing {i}: source region vertex outside chart {}",
                        g.source_chart
                    ));
                    break;
                }
            }
            match g.source_region.affine_image(&g.map) {
                Ok(image) => {
                    let target = &self.charts[g.target_chart];
                    for v in image.vertices() {
                        if !target.contains(v).unwrap_or(false) {
                            issues.push(format!(
                                "gluing {i}: image vertex outside chart {}",
                                g.target_chart
                            ));
                            break;
                        }
                    }
                }
                Err(e) => issues.push(format!("gluing {i}: cannot map region: {e}")),
            }
            if self.mode == ComplexMode::FacetGlued && g.source_region.affine_dim() >= n {
                issues.push(format!(
                    "gluing {i}: full-dimensional source region in facet-glued mode"
                ));
            }
        }

        if self.mode == ComplexMode::OverlapCover {
            self.validate_overlap_cover(&mut issues);
        }

        ValidationReport { issues }
    }

    fn validate_overlap_cover(&self, issues: &mut Vec<String>) {
        let n = self.ambient_dim;
        // Reverse of every gluing must be present (normalization adds them,
        // but hand-edited inputs may disagree with their own reverses).
        for (i, g) in self.gluings.iter().enumerate() {
            match g.reversed() {
                Ok(rev) => {
                    if !self.gluings.contains(&rev) {
                        issues.push(format!("gluing {i}: reverse gluing missing or inconsistent"));
                    }
                }
                Err(e) => issues.push(format!("gluing {i}: not reversible: {e}")),
            }
        }
        // Distinct overlap components in the same direction must not share
        // interior volume.
        for (i, a) in self.gluings.iter().enumerate() {
            for (j, b) in self.gluings.iter().enumerate().skip(i + 1) {
                if a.source_chart != b.source_chart || a.target_chart != b.target_chart {
                    continue;
                }
                if let Ok(Some(r)) = a.source_region.intersect(&b.source_region) {
                    if r.affine_dim() == n {
                        issues.push(format!(
                            "gluings {i} and {j}: overlap components for the same chart pair intersect in dimension {n}"
                        ));
                    }
                }
            }
        }
        // Cocycle consistency: wherever g2 ∘ g1 is defined, a direct gluing
        // must exist and agree.
        for (i, g1) in self.gluings.iter().enumerate() {
            for (j, g2) in self.gluings.iter().enumerate() {
                if g1.target_chart != g2.source_chart {
                    continue;
                }
                let pulled = match g2.source_region.affine_image(&g1.map.invert()) {
                    Ok(p) => p,
                    Err(e) => {
                        issues.push(format!("gluings {i},{j}: cannot pull back region: {e}"));
                        continue;
                    }
                };
                let Ok(Some(region)) = g1.source_region.intersect(&pulled) else {
                    continue;
                };
                let composed = match g2.map.compose(&g1.map) {
                    Ok(c) => c,
                    Err(e) => {
                        issues.push(format!("gluings {i},{j}: cannot compose maps: {e}"));
                        continue;
                    }
                };
                if g1.source_chart == g2.target_chart {
                    let fixes_all = region.vertices().iter().all(|v| {
                        composed.apply(v).map(|w| &w == v).unwrap_or(false)
                    });
                    if !fixes_all {
                        issues.push(format!(
                            "gluings {i},{j}: round trip through chart {} is not the identity on the overlap",
                            g1.target_chart
                        ));
                    }
                } else {
                    let witnessed = self.gluings.iter().any(|g3| {
                        g3.source_chart == g1.source_chart
                            && g3.target_chart == g2.target_chart
                            && region
                                .vertices()
                                .iter()
                                .all(|v| g3.source_region.contains(v).unwrap_or(false))
                            && region.vertices().iter().all(|v| {
                                match (composed.apply(v), g3.map.apply(v)) {
                                    (Ok(a), Ok(b)) => a == b,
                                    _ => false,
                                }
                            })
                    });
                    if !witnessed {
                        issues.push(format!(
                            "gluings {i},{j}: no direct gluing {} -> {} agrees with their composition on the triple overlap",
                            g1.source_chart, g2.target_chart
                        ));
                    }
                }
            }
        }
    }

    fn require_valid(&self) -> Result<(), Error> {
        let report = self.validate();
        if report.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidComplex(report.to_string()))
        }
    }

    /// Exact total volume of the quotient.
    pub fn volume(&self) -> Result<Rational, Error> {
        match self.mode {
            // Gluing regions have measure zero, so chart volumes just add up.
            ComplexMode::FacetGlued => {
                Ok(self.charts.iter().map(RationalPolytope::volume).sum())
            }
            ComplexMode::OverlapCover => {
                let ie = self.inclusion_exclusion()?;
                let mut total = Rational::zero();
                for term in &ie.terms {
                    let sign = Rational::from_integer(BigInt::from(term.sign));
                    for piece in &term.pieces {
                        total += &sign * piece.volume();
                    }
                }
                Ok(total)
            }
        }
    }

    /// The inclusion-exclusion expansion over the chart cover. For a chart
    /// subset `I`, the intersection is computed in the lowest-index member
    /// chart by intersecting the overlap components glued from it; distinct
    /// component choices yield disjoint pieces and are summed separately.
    pub fn inclusion_exclusion(&self) -> Result<InclusionExclusion, Error> {
        if self.mode != ComplexMode::OverlapCover {
            return Err(Error::InvalidInput(
                "inclusion-exclusion counting requires overlap-cover mode".into(),
            ));
        }
        let k = self.charts.len();
        assert!(k < 20, "inclusion-exclusion over 2^k chart subsets");
        let mut terms = Vec::new();
        for mask in 1u32..(1 << k) {
            let members: Vec<usize> = (0..k).filter(|i| mask & (1 << i) != 0).collect();
            let base = members[0];
            let mut pieces = vec![self.charts[base].clone()];
            for &j in &members[1..] {
                let components: Vec<&RationalPolytope> = self
                    .gluings
                    .iter()
                    .filter(|g| g.source_chart == base && g.target_chart == j)
                    .map(|g| &g.source_region)
                    .collect();
                let mut next = Vec::new();
                for piece in &pieces {
                    for comp in &components {
                        if let Some(cut) = piece.intersect(comp)? {
                            next.push(cut);
                        }
                    }
                }
                pieces = next;
                if pieces.is_empty() {
                    break;
                }
            }
            if pieces.is_empty() {
                continue;
            }
            let sign = if members.len() % 2 == 1 { 1 } else { -1 };
            terms.push(CoverTerm {
                charts: members,
                sign,
                pieces,
            });
        }
        Ok(InclusionExclusion { terms })
    }

    /// All `m⁻¹ℤⁿ` points of the quotient as equivalence classes of chart
    /// points, closed under the gluings by union-find. Classes are sorted by
    /// their canonical representative, the lexicographically smallest
    /// `(chart, coords)` member.
    pub fn integral_points(&self, m: u64) -> Result<Vec<Vec<ManifoldPoint>>, Error> {
        self.require_valid()?;
        let mut points: Vec<ManifoldPoint> = Vec::new();
        let mut offsets = Vec::with_capacity(self.charts.len());
        for (ci, chart) in self.charts.iter().enumerate() {
            offsets.push(points.len());
            for coords in lattice::enumerate_points(chart, m)? {
                points.push(ManifoldPoint { chart: ci, coords });
            }
        }
        let index: std::collections::HashMap<&ManifoldPoint, usize> =
            points.iter().enumerate().map(|(i, p)| (p, i)).collect();

        let mut parent: Vec<usize> = (0..points.len()).collect();
        fn find(parent: &mut Vec<usize>, mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }

        for (gi, g) in self.gluings.iter().enumerate() {
            let chart_points = {
                let start = offsets[g.source_chart];
                let end = if g.source_chart + 1 < offsets.len() {
                    offsets[g.source_chart + 1]
                } else {
                    points.len()
                };
                start..end
            };
            for i in chart_points {
                let p = &points[i];
                if !g.source_region.contains(&p.coords)? {
                    continue;
                }
                let image = g.map.apply(&p.coords)?;
                if !in_scaled_lattice(&image, m) {
                    return Err(Error::NonLatticeImage {
                        gluing: gi,
                        point: format!(
                            "({}, [{}])",
                            p.chart,
                            p.coords
                                .iter()
                                .map(format_rational)
                                .collect::<Vec<_>>()
                                .join(", ")
                        ),
                    });
                }
                let target = ManifoldPoint {
                    chart: g.target_chart,
                    coords: image,
                };
                let Some(&j) = index.get(&target) else {
                    return Err(Error::InvalidComplex(format!(
                        "gluing {gi} maps a lattice point outside the enumerated points of chart {}",
                        g.target_chart
                    )));
                };
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }

        let mut classes: BTreeMap<usize, Vec<ManifoldPoint>> = BTreeMap::new();
        for i in 0..points.len() {
            let root = find(&mut parent, i);
            classes.entry(root).or_default().push(points[i].clone());
        }
        let mut out: Vec<Vec<ManifoldPoint>> = classes
            .into_values()
            .map(|mut members| {
                members.sort();
                members
            })
            .collect();
        out.sort_by(|a, b| a[0].cmp(&b[0]));
        Ok(out)
    }

    /// `L_M(m)`: the number of `m⁻¹ℤⁿ` points of the quotient.
    pub fn count_union_find(&self, m: u64) -> Result<u64, Error> {
        Ok(self.integral_points(m)?.len() as u64)
    }

    /// Fits a quasi-polynomial to `m ↦ L_M(m)` with period the lcm of all
    /// chart vertex denominators, validated on extra samples.
    pub fn ehrhart(&self) -> Result<QuasiPolynomial, Error> {
        self.require_valid()?;
        let period = self
            .charts
            .iter()
            .map(RationalPolytope::vertex_denominator_lcm)
            .fold(1u64, |a, b| a.lcm(&b));
        fit_quasipolynomial(
            |m| Ok(Rational::from_integer(BigInt::from(self.count_union_find(m)?))),
            self.ambient_dim,
            period,
        )
    }

    /// Checks the identity `L_M(m) = vol(M)·mⁿ` two ways: the fitted
    /// quasi-polynomial minus `vol·mⁿ` must vanish identically, and the
    /// direct counts must match for every `m ≤ m_max`. The `m = 1` row
    /// states that the number of integral points equals the volume.
    pub fn verify(&self, m_max: u64) -> Result<VerificationReport, Error> {
        self.require_valid()?;
        let n = self.ambient_dim;
        let period = self
            .charts
            .iter()
            .map(RationalPolytope::vertex_denominator_lcm)
            .fold(1u64, |a, b| a.lcm(&b));
        let needed = (n as u64 + 2) * period;
        if m_max < needed {
            return Err(Error::InvalidInput(format!(
                "m_max = {m_max} is too small to pin the quasi-polynomial; need at least (n + 2) * period = {needed}"
            )));
        }
        let volume = self.volume()?;
        let expected_poly = QuasiPolynomial::monomial(volume.clone(), n);
        let (fitted, residual_is_zero) = match self.ehrhart() {
            Ok(fitted) => {
                let zero = fitted.sub(&expected_poly).is_zero();
                (fitted, zero)
            }
            // A fit-validation failure means the counts are not
            // quasi-polynomial on the sampling window at the default
            // period, which already falsifies the identity; report the
            // expected polynomial as a placeholder and fail.
            Err(Error::FitValidation { .. }) => (expected_poly, false),
            Err(e) => return Err(e),
        };
        let rows: Vec<VerificationRow> = (1..=m_max)
            .into_par_iter()
            .map(|m| -> Result<VerificationRow, Error> {
                let count = self.count_union_find(m)?;
                let mut expected = volume.clone();
                for _ in 0..n {
                    expected *= Rational::from_integer(BigInt::from(m));
                }
                let pass = Rational::from_integer(BigInt::from(count)) == expected;
                Ok(VerificationRow {
                    m,
                    count,
                    expected,
                    pass,
                })
            })
            .collect::<Result<_, _>>()?;
        let passed = residual_is_zero && rows.iter().all(|r| r.pass);
        Ok(VerificationReport {
            dim: n,
            volume,
            fitted,
            residual_is_zero,
            rows,
            passed,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::builtins;
    use super::*;
    use crate::arith::{qvec, qvec_int, rat, rat_int};

    #[test]
    fn torus_counts_and_volume() {
        let t = builtins::torus(&[1, 1]).unwrap();
        assert!(t.validate().is_valid());
        assert_eq!(t.volume().unwrap(), rat_int(1));
        assert_eq!(t.count_union_find(1).unwrap(), 1);
        assert_eq!(t.count_union_find(2).unwrap(), 4);
        assert_eq!(t.count_union_find(3).unwrap(), 9);

        let wide = builtins::torus(&[2, 1]).unwrap();
        assert_eq!(wide.volume().unwrap(), rat_int(2));
        assert_eq!(wide.count_union_find(1).unwrap(), 2);
    }

    #[test]
    fn torus_m2_classes() {
        let t = builtins::torus(&[1, 1]).unwrap();
        let classes = t.integral_points(2).unwrap();
        assert_eq!(classes.len(), 4);
        let reps: Vec<QVector> = classes.iter().map(|c| c[0].coords.clone()).collect();
        assert_eq!(
            reps,
            vec![
                qvec_int(&[0, 0]),
                qvec(&[(0, 1), (1, 2)]),
                qvec(&[(1, 2), (0, 1)]),
                qvec(&[(1, 2), (1, 2)]),
            ]
        );
        // All four corners land in one class.
        assert_eq!(classes[0].len(), 4);
    }

    #[test]
    fn klein_bottle_counts() {
        let k = builtins::klein_bottle().unwrap();
        assert!(k.validate().is_valid());
        assert_eq!(k.volume().unwrap(), rat_int(1));
        assert_eq!(k.count_union_find(1).unwrap(), 1);
        assert_eq!(k.count_union_find(2).unwrap(), 4);
        let classes = k.integral_points(1).unwrap();
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0].len(), 4);
    }

    #[test]
    fn circle_two_arcs_modes_agree() {
        let c = builtins::circle_two_arcs().unwrap();
        assert!(c.validate().is_valid());
        assert_eq!(c.volume().unwrap(), rat_int(1));
        let ie = c.inclusion_exclusion().unwrap();
        assert_eq!(ie.count(1).unwrap(), 1);
        assert_eq!(ie.count(8).unwrap(), 8);
        for m in 1..=12 {
            assert_eq!(ie.count(m).unwrap(), c.count_union_find(m).unwrap());
        }
    }

    #[test]
    fn single_chart_matches_polytope_count() {
        let p = RationalPolytope::unit_cube(2);
        let c = builtins::single_polytope(p.clone()).unwrap();
        let ie = c.inclusion_exclusion().unwrap();
        for m in 1..=6 {
            assert_eq!(ie.count(m).unwrap(), lattice::count(&p, m).unwrap());
            assert_eq!(c.count_union_find(m).unwrap(), lattice::count(&p, m).unwrap());
        }
    }

    #[test]
    fn manifold_ehrhart_examples() {
        let t = builtins::torus(&[1, 1]).unwrap();
        let q = t.ehrhart().unwrap();
        assert_eq!(q.to_string(), "L(m) = m^2");

        let k = builtins::klein_bottle().unwrap();
        assert_eq!(k.ehrhart().unwrap().to_string(), "L(m) = m^2");

        let wide = builtins::torus(&[2, 1]).unwrap();
        assert_eq!(wide.ehrhart().unwrap().to_string(), "L(m) = 2m^2");
    }

    #[test]
    fn verify_passes_on_builtins() {
        for (c, m_max) in [
            (builtins::torus(&[1, 1]).unwrap(), 10),
            (builtins::klein_bottle().unwrap(), 10),
            // The arc charts have denominator 8, so the fit needs a longer window.
            (builtins::circle_two_arcs().unwrap(), 24),
        ] {
            let report = c.verify(m_max).unwrap();
            assert!(report.passed, "report:\n{report}");
            assert!(report.rows[0].pass);
        }
    }

    #[test]
    fn broken_torus_fails_verification() {
        let t = builtins::torus(&[1, 1]).unwrap();
        let broken = t.without_gluing(0);
        assert_eq!(broken.count_union_find(1).unwrap(), 2);
        let report = broken.verify(10).unwrap();
        assert!(!report.passed);
        assert!(!report.rows[0].pass);
    }

    #[test]
    fn invalid_gluings_are_reported() {
        // Non-integer translation is rejected at the AffZMap level.
        assert!(matches!(
            AffZMap::new(
                crate::arith::ZMatrix::from_i64(&[&[2, 0], &[0, 1]]),
                vec![num::BigInt::from(0), num::BigInt::from(0)],
            ),
            Err(Error::NotUnimodular)
        ));

        // Full-dimensional source region in facet-glued mode.
        let square = RationalPolytope::unit_cube(2);
        let g = Gluing {
            source_chart: 0,
            source_region: square.clone(),
            target_chart: 0,
            map: AffZMap::identity(2),
        };
        let c = AffineComplex::new(2, vec![square], vec![g], ComplexMode::FacetGlued).unwrap();
        let report = c.validate();
        assert!(!report.is_valid());
        assert!(report.issues[0].contains("full-dimensional"));
    }

    #[test]
    fn cocycle_violation_detected() {
        // Two arcs glued with inconsistent round trip: the reverse of the
        // shifted component is replaced by a wrong translation.
        let arc0 = RationalPolytope::from_points(&[qvec_int(&[0]), qvec(&[(5, 8)])]).unwrap();
        let arc1 =
            RationalPolytope::from_points(&[qvec(&[(1, 2)]), qvec(&[(9, 8)])]).unwrap();
        let overlap_lo = RationalPolytope::from_points(&[qvec_int(&[0]), qvec(&[(1, 8)])]).unwrap();
        let bad = vec![
            Gluing {
                source_chart: 0,
                source_region: overlap_lo.clone(),
                target_chart: 1,
                map: AffZMap::translation_by(&[1]),
            },
            Gluing {
                source_chart: 1,
                source_region: overlap_lo.affine_image(&AffZMap::translation_by(&[1])).unwrap(),
                target_chart: 0,
                map: AffZMap::translation_by(&[-2]),
            },
        ];
        let c = AffineComplex::new(1, vec![arc0, arc1], bad, ComplexMode::OverlapCover).unwrap();
        assert!(!c.validate().is_valid());
    }

    #[test]
    fn recoordinatization_preserves_counts() {
        let t = builtins::torus(&[2, 1]).unwrap();
        let f = AffZMap::from_i64(&[&[1, 1], &[0, 1]], &[3, -2]).unwrap();
        let t2 = t.recoordinatize(0, &f).unwrap();
        assert!(t2.validate().is_valid());
        for m in 1..=6 {
            assert_eq!(
                t.count_union_find(m).unwrap(),
                t2.count_union_find(m).unwrap()
            );
        }
        assert_eq!(t2.volume().unwrap(), rat_int(2));
    }

    #[test]
    fn gluing_order_does_not_change_representatives() {
        let k = builtins::klein_bottle().unwrap();
        let mut reversed = k.clone();
        reversed.gluings.reverse();
        for m in 1..=4 {
            assert_eq!(
                k.integral_points(m).unwrap(),
                reversed.integral_points(m).unwrap()
            );
        }
    }

    #[test]
    fn class_representatives_are_lattice_points_of_their_chart() {
        let c = builtins::circle_two_arcs().unwrap();
        for m in 1..=8 {
            for class in c.integral_points(m).unwrap() {
                for p in class {
                    assert!(c.charts()[p.chart].contains(&p.coords).unwrap());
                    assert!(in_scaled_lattice(&p.coords, m));
                }
            }
        }
    }

    #[test]
    fn verify_rejects_small_m_max() {
        let t = builtins::torus(&[1, 1]).unwrap();
        assert!(matches!(t.verify(2), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn circle_volume_by_inclusion_exclusion() {
        let c = builtins::circle_two_arcs().unwrap();
        let ie = c.inclusion_exclusion().unwrap();
        // Two single-chart terms and one pair term with two pieces.
        let pair_term = ie.terms.iter().find(|t| t.charts.len() == 2).unwrap();
        assert_eq!(pair_term.pieces.len(), 2);
        let vols: Vec<Rational> = pair_term.pieces.iter().map(|p| p.volume()).collect();
        assert_eq!(vols, vec![rat(1, 8), rat(1, 8)]);
    }
}
