//! Enumeration and counting of the points of `m⁻¹ℤⁿ` in a rational polytope,
//! and interpolation of the count function `L_P(m)` by a quasi-polynomial.
//!
//! Counting works in the dilated integer picture: `x ∈ m⁻¹ℤⁿ ∩ P` iff
//! `y = mx ∈ ℤⁿ ∩ mP`. The facet system of `mP` is projected coordinate by
//! coordinate with Fourier-Motzkin elimination, and the recursion then slices
//! one coordinate at a time, reading exact integer bounds off the projected
//! constraints. The innermost level is counted in closed form.
//!
//! The hot loop runs in `i128` when a conservative bound check shows no
//! overflow is possible, and falls back to arbitrary precision otherwise.

use std::collections::BTreeMap;

use num::{BigInt, Integer, One, Signed, ToPrimitive, Zero};

use crate::arith::{solve_linear, QVector, Rational};
use crate::polytope::{ConstraintKind, RationalPolytope};
use crate::quasipoly::QuasiPolynomial;
use crate::Error;

/// `⟨coeffs, y⟩ ≤ rhs` over integer vectors `y`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Row<T> {
    coeffs: Vec<T>,
    rhs: T,
}

impl Row<BigInt> {
    /// Divides by the gcd of the coefficients, tightening the bound over ℤ.
    /// Returns `None` for a constant row (handled by the caller).
    fn normalized(mut self) -> Option<Row<BigInt>> {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
        }
        if g.is_zero() {
            return None;
        }
        if !g.is_one() {
            for c in self.coeffs.iter_mut() {
                *c = &*c / &g;
            }
            self.rhs = self.rhs.div_floor(&g);
        }
        Some(self)
    }
}

/// Per-coordinate constraint levels: `levels[k]` holds rows over
/// `y_0..y_k` whose coefficient on `y_k` is nonzero.
struct Levels {
    levels: Vec<Vec<Row<BigInt>>>,
}

/// Fourier-Motzkin projection of the constraint system. `None` means the
/// system is infeasible (empty polytope slice).
fn project(rows: Vec<Row<BigInt>>, n: usize) -> Option<Levels> {
    let mut levels: Vec<Vec<Row<BigInt>>> = (0..n).map(|_| Vec::new()).collect();
    let mut pool = rows;
    for k in (0..n).rev() {
        let mut here: Vec<Row<BigInt>> = Vec::new();
        let mut down: BTreeMap<Vec<BigInt>, BigInt> = BTreeMap::new();
        let mut push_down = |row: Row<BigInt>| -> bool {
            match row.normalized() {
                None => true, // constant handled below via pool scan
                Some(r) => {
                    down.entry(r.coeffs)
                        .and_modify(|rhs| {
                            if r.rhs < *rhs {
                                *rhs = r.rhs.clone();
                            }
                        })
                        .or_insert(r.rhs);
                    true
                }
            }
        };
        let mut constants: Vec<BigInt> = Vec::new();
        for mut row in pool {
            if row.coeffs[k].is_zero() {
                row.coeffs.truncate(k);
                if row.coeffs.iter().all(|c| c.is_zero()) {
                    constants.push(row.rhs);
                } else {
                    push_down(row);
                }
            } else {
                here.push(row);
            }
        }
        for c in &constants {
            if c.is_negative() {
                return None;
            }
        }
        // Combine each upper-bound row with each lower-bound row to
        // eliminate y_k.
        let (upper, lower): (Vec<_>, Vec<_>) =
            here.iter().partition(|r| r.coeffs[k].is_positive());
        for u in &upper {
            for l in &lower {
                let alpha = &u.coeffs[k];
                let beta = -&l.coeffs[k];
                let coeffs: Vec<BigInt> = (0..k)
                    .map(|j| &beta * &u.coeffs[j] + alpha * &l.coeffs[j])
                    .collect();
                let rhs = &beta * &u.rhs + alpha * &l.rhs;
                if coeffs.iter().all(|c| c.is_zero()) {
                    if rhs.is_negative() {
                        return None;
                    }
                } else {
                    push_down(Row { coeffs, rhs });
                }
            }
        }
        let mut here: Vec<Row<BigInt>> = here
            .into_iter()
            .filter_map(Row::normalized)
            .collect();
        here.sort();
        here.dedup();
        levels[k] = here;
        pool = down
            .into_iter()
            .map(|(coeffs, rhs)| Row { coeffs, rhs })
            .collect();
    }
    debug_assert!(pool.is_empty());
    Some(Levels { levels })
}

/// Integer type usable in the enumeration kernel.
trait KernelInt: Integer + Signed + Clone {
    fn from_bigint(b: &BigInt) -> Self;
    fn to_u64_count(&self) -> u64;
    fn into_bigint(self) -> BigInt;
}

impl KernelInt for i128 {
    fn from_bigint(b: &BigInt) -> Self {
        b.to_i128().expect("kernel bound check admitted this value")
    }
    fn to_u64_count(&self) -> u64 {
        (*self).try_into().expect("count fits u64")
    }
    fn into_bigint(self) -> BigInt {
        BigInt::from(self)
    }
}

impl KernelInt for BigInt {
    fn from_bigint(b: &BigInt) -> Self {
        b.clone()
    }
    fn to_u64_count(&self) -> u64 {
        self.to_u64().expect("count fits u64")
    }
    fn into_bigint(self) -> BigInt {
        self
    }
}

/// Exact integer range of `y_k` over the current prefix; `None` when empty.
fn bounds<T: KernelInt>(rows: &[Row<T>], k: usize, prefix: &[T]) -> Option<(T, T)> {
    let mut lo: Option<T> = None;
    let mut hi: Option<T> = None;
    for row in rows {
        let mut s = row.rhs.clone();
        for j in 0..k {
            s = s - row.coeffs[j].clone() * prefix[j].clone();
        }
        let a = &row.coeffs[k];
        if a.is_positive() {
            let b = s.div_floor(a);
            hi = Some(match hi {
                Some(h) if h <= b => h,
                _ => b,
            });
        } else {
            let b = s.div_ceil(a);
            lo = Some(match lo {
                Some(l) if l >= b => l,
                _ => b,
            });
        }
    }
    let lo = lo.expect("polytope is bounded below in every coordinate");
    let hi = hi.expect("polytope is bounded above in every coordinate");
    if lo <= hi {
        Some((lo, hi))
    } else {
        None
    }
}

fn count_rec<T: KernelInt>(levels: &[Vec<Row<T>>], k: usize, prefix: &mut Vec<T>) -> u64 {
    let Some((lo, hi)) = bounds(&levels[k], k, prefix) else {
        return 0;
    };
    if k + 1 == levels.len() {
        return (hi - lo + T::one()).to_u64_count();
    }
    let mut total = 0u64;
    let mut t = lo;
    while t <= hi {
        prefix.push(t.clone());
        total += count_rec(levels, k + 1, prefix);
        prefix.pop();
        t = t + T::one();
    }
    total
}

fn enum_rec<T: KernelInt>(
    levels: &[Vec<Row<T>>],
    k: usize,
    prefix: &mut Vec<T>,
    out: &mut Vec<Vec<BigInt>>,
) {
    let Some((lo, hi)) = bounds(&levels[k], k, prefix) else {
        return;
    };
    let mut t = lo;
    while t <= hi {
        prefix.push(t.clone());
        if k + 1 == levels.len() {
            out.push(prefix.iter().cloned().map(KernelInt::into_bigint).collect());
        } else {
            enum_rec(levels, k + 1, prefix, out);
        }
        prefix.pop();
        t = t + T::one();
    }
}

/// The facet system of `mP` over integer points `y = mx`.
fn dilated_rows(p: &RationalPolytope, m: u64) -> Vec<Row<BigInt>> {
    let m = BigInt::from(m);
    let mut rows = Vec::new();
    for h in p.facets() {
        let rhs = &h.offset * &m;
        rows.push(Row {
            coeffs: h.normal.clone(),
            rhs: rhs.clone(),
        });
        if h.kind == ConstraintKind::Equality {
            rows.push(Row {
                coeffs: h.normal.iter().map(|c| -c).collect(),
                rhs: -rhs,
            });
        }
    }
    rows
}

/// Conservative check that the whole recursion stays far from i128 overflow.
fn fits_i128(levels: &Levels, p: &RationalPolytope, m: u64) -> bool {
    let limit = BigInt::from(i128::MAX) >> 2;
    let mut coord_bound = BigInt::one();
    for (lo, hi) in p.bounding_box() {
        for b in [lo, hi] {
            let scaled = (b * Rational::from_integer(BigInt::from(m))).ceil().to_integer().abs();
            if scaled > coord_bound {
                coord_bound = scaled;
            }
        }
    }
    coord_bound += BigInt::one();
    levels.levels.iter().flatten().all(|row| {
        let mut acc = row.rhs.abs();
        for c in &row.coeffs {
            acc += c.abs() * &coord_bound;
        }
        acc < limit
    })
}

fn convert_levels<T: KernelInt>(levels: &Levels) -> Vec<Vec<Row<T>>> {
    levels
        .levels
        .iter()
        .map(|rows| {
            rows.iter()
                .map(|r| Row {
                    coeffs: r.coeffs.iter().map(T::from_bigint).collect(),
                    rhs: T::from_bigint(&r.rhs),
                })
                .collect()
        })
        .collect()
}

fn prepared(p: &RationalPolytope, m: u64) -> Result<Option<Levels>, Error> {
    if m == 0 {
        return Err(Error::InvalidInput("m must be at least 1".into()));
    }
    Ok(project(dilated_rows(p, m), p.ambient_dim()))
}

/// The number of points of `m⁻¹ℤⁿ` in `P`, exactly.
pub fn count(p: &RationalPolytope, m: u64) -> Result<u64, Error> {
    let Some(levels) = prepared(p, m)? else {
        return Ok(0);
    };
    let mut prefix = Vec::with_capacity(p.ambient_dim());
    if fits_i128(&levels, p, m) {
        Ok(count_rec(&convert_levels::<i128>(&levels), 0, &mut prefix))
    } else {
        let mut prefix: Vec<BigInt> = Vec::with_capacity(p.ambient_dim());
        Ok(count_rec(&convert_levels::<BigInt>(&levels), 0, &mut prefix))
    }
}

/// The points of `m⁻¹ℤⁿ ∩ P`, each once, in lexicographic order.
pub fn enumerate_points(p: &RationalPolytope, m: u64) -> Result<Vec<QVector>, Error> {
    let Some(levels) = prepared(p, m)? else {
        return Ok(Vec::new());
    };
    let mut out: Vec<Vec<BigInt>> = Vec::new();
    if fits_i128(&levels, p, m) {
        let mut prefix: Vec<i128> = Vec::new();
        enum_rec(&convert_levels::<i128>(&levels), 0, &mut prefix, &mut out);
    } else {
        let mut prefix: Vec<BigInt> = Vec::new();
        enum_rec(&convert_levels::<BigInt>(&levels), 0, &mut prefix, &mut out);
    }
    let m = BigInt::from(m);
    Ok(out
        .into_iter()
        .map(|y| {
            y.into_iter()
                .map(|yi| Rational::new(yi, m.clone()))
                .collect()
        })
        .collect())
}

/// Fits a quasi-polynomial of the given degree bound and period to exact
/// sample values, then validates the fit on `degree + 2` further samples per
/// residue class.
pub fn fit_quasipolynomial(
    mut values: impl FnMut(u64) -> Result<Rational, Error>,
    degree: usize,
    period: u64,
) -> Result<QuasiPolynomial, Error> {
    assert!(period >= 1);
    let mut coeffs = vec![vec![Rational::zero(); period as usize]; degree + 1];
    for r in 0..period {
        // The m ≥ 1 congruent to r mod period, smallest first.
        let samples = |j: u64| if r == 0 { (j + 1) * period } else { r + j * period };
        let fit_count = (degree + 1) as u64;
        let mut matrix: Vec<QVector> = Vec::new();
        let mut rhs: QVector = Vec::new();
        for j in 0..fit_count {
            let m = samples(j);
            let m_rat = Rational::from_integer(BigInt::from(m));
            let mut row = Vec::with_capacity(degree + 1);
            let mut pow = Rational::one();
            for _ in 0..=degree {
                row.push(pow.clone());
                pow *= &m_rat;
            }
            matrix.push(row);
            rhs.push(values(m)?);
        }
        let solution = solve_linear(&matrix, &rhs)?
            .expect("Vandermonde system at distinct sample points is nonsingular");
        for (k, a) in solution.into_iter().enumerate() {
            coeffs[k][r as usize] = a;
        }
        // Out-of-window validation.
        for j in fit_count..fit_count + (degree as u64 + 2) {
            let m = samples(j);
            let predicted: Rational = {
                let m_rat = Rational::from_integer(BigInt::from(m));
                let mut acc = Rational::zero();
                for k in (0..=degree).rev() {
                    acc = acc * &m_rat + &coeffs[k][r as usize];
                }
                acc
            };
            let counted = values(m)?;
            if predicted != counted {
                return Err(Error::FitValidation {
                    m,
                    predicted: crate::arith::format_rational(&predicted),
                    counted: crate::arith::format_rational(&counted),
                });
            }
        }
    }
    Ok(QuasiPolynomial::new(degree, period, coeffs))
}

/// The Ehrhart quasi-polynomial of `P`: the unique quasi-polynomial equal to
/// `count(P, m)` for all `m`. The default period is the lcm of the vertex
/// coordinate denominators, which is always a valid period.
pub fn ehrhart_fit(
    p: &RationalPolytope,
    period_hint: Option<u64>,
) -> Result<QuasiPolynomial, Error> {
    let period = match period_hint {
        Some(s) if s >= 1 => s,
        Some(_) => return Err(Error::InvalidInput("period hint must be at least 1".into())),
        None => p.vertex_denominator_lcm(),
    };
    fit_quasipolynomial(
        |m| Ok(Rational::from_integer(BigInt::from(count(p, m)?))),
        p.ambient_dim(),
        period,
    )
}

/// Sampled counts, the fitted quasi-polynomial, and the largest validated `m`.
#[derive(Clone, Debug)]
pub struct LatticeCountReport {
    pub counts: Vec<(u64, u64)>,
    pub fitted: QuasiPolynomial,
    pub validated_up_to: u64,
}

pub fn ehrhart_report(
    p: &RationalPolytope,
    period_hint: Option<u64>,
) -> Result<LatticeCountReport, Error> {
    let period = match period_hint {
        Some(s) => s,
        None => p.vertex_denominator_lcm(),
    };
    let mut samples: BTreeMap<u64, u64> = BTreeMap::new();
    let fitted = fit_quasipolynomial(
        |m| {
            let c = count(p, m)?;
            samples.insert(m, c);
            Ok(Rational::from_integer(BigInt::from(c)))
        },
        p.ambient_dim(),
        period,
    )?;
    let validated_up_to = samples.keys().next_back().copied().unwrap_or(0);
    Ok(LatticeCountReport {
        counts: samples.into_iter().collect(),
        fitted,
        validated_up_to,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{qvec, qvec_int, rat, rat_int};
    use crate::polytope::RationalPolytope;
    use proptest::prelude::*;

    /// Independent oracle: scan the integer bounding box of mP and test
    /// membership of y/m pointwise.
    fn box_scan_count(p: &RationalPolytope, m: u64) -> u64 {
        let m_rat = Rational::from_integer(BigInt::from(m));
        let ranges: Vec<(i64, i64)> = p
            .bounding_box()
            .iter()
            .map(|(lo, hi)| {
                let lo = (lo * &m_rat).ceil().to_integer().to_i64().unwrap();
                let hi = (hi * &m_rat).floor().to_integer().to_i64().unwrap();
                (lo, hi)
            })
            .collect();
        let mut total = 0u64;
        let mut y = vec![0i64; ranges.len()];
        fn rec(
            p: &RationalPolytope,
            m: u64,
            ranges: &[(i64, i64)],
            y: &mut Vec<i64>,
            k: usize,
            total: &mut u64,
        ) {
            if k == ranges.len() {
                let x: QVector = y.iter().map(|&v| rat(v, m as i64)).collect();
                if p.contains(&x).unwrap() {
                    *total += 1;
                }
                return;
            }
            for t in ranges[k].0..=ranges[k].1 {
                y[k] = t;
                rec(p, m, ranges, y, k + 1, total);
            }
        }
        rec(p, m, &ranges, &mut y, 0, &mut total);
        total
    }

    #[test]
    fn enumerate_unit_square() {
        let sq = RationalPolytope::unit_cube(2);
        let pts = enumerate_points(&sq, 1).unwrap();
        assert_eq!(
            pts,
            vec![
                qvec_int(&[0, 0]),
                qvec_int(&[0, 1]),
                qvec_int(&[1, 0]),
                qvec_int(&[1, 1])
            ]
        );
        assert_eq!(count(&sq, 2).unwrap(), 9);
    }

    #[test]
    fn enumerate_short_segment() {
        let seg =
            RationalPolytope::from_points(&[qvec_int(&[0]), qvec(&[(1, 2)])]).unwrap();
        let pts = enumerate_points(&seg, 3).unwrap();
        assert_eq!(pts, vec![qvec_int(&[0]), qvec(&[(1, 3)])]);
    }

    #[test]
    fn count_simplex_and_point() {
        let simplex = RationalPolytope::from_points(&[
            qvec_int(&[0, 0]),
            qvec_int(&[1, 0]),
            qvec_int(&[0, 1]),
        ])
        .unwrap();
        assert_eq!(count(&simplex, 1).unwrap(), 3);
        assert_eq!(count(&simplex, 2).unwrap(), 6);

        let half = RationalPolytope::from_points(&[qvec(&[(1, 2)])]).unwrap();
        assert_eq!(count(&half, 1).unwrap(), 0);
        assert_eq!(count(&half, 2).unwrap(), 1);
    }

    #[test]
    fn ehrhart_fit_examples() {
        let seg = RationalPolytope::from_points(&[qvec_int(&[0]), qvec_int(&[1])]).unwrap();
        let q = ehrhart_fit(&seg, None).unwrap();
        assert_eq!(q.period(), 1);
        assert_eq!(q.to_string(), "L(m) = m + 1");

        let half = RationalPolytope::from_points(&[qvec_int(&[0]), qvec(&[(1, 2)])]).unwrap();
        let q = ehrhart_fit(&half, None).unwrap();
        assert_eq!(q.period(), 2);
        assert_eq!(q.coefficient(1, 0), &rat(1, 2));
        assert_eq!(q.coefficient(1, 1), &rat(1, 2));
        assert_eq!(q.coefficient(0, 0), &rat_int(1));
        assert_eq!(q.coefficient(0, 1), &rat(1, 2));

        let sq = RationalPolytope::unit_cube(2);
        let q = ehrhart_fit(&sq, None).unwrap();
        assert_eq!(q.to_string(), "L(m) = m^2 + 2m + 1");
    }

    #[test]
    fn fit_matches_known_closed_form() {
        let seg = RationalPolytope::from_points(&[qvec_int(&[0]), qvec_int(&[1])]).unwrap();
        let q = ehrhart_fit(&seg, None).unwrap();
        let closed = QuasiPolynomial::polynomial(&[rat_int(1), rat_int(1)]);
        assert!(q.sub(&closed).is_zero());
    }

    #[test]
    fn wrong_period_hint_fails_validation() {
        let half = RationalPolytope::from_points(&[qvec_int(&[0]), qvec(&[(1, 2)])]).unwrap();
        assert!(matches!(
            ehrhart_fit(&half, Some(1)),
            Err(Error::FitValidation { .. })
        ));
    }

    #[test]
    fn report_validates_and_evaluates_beyond_window() {
        let sq = RationalPolytope::unit_cube(2);
        let report = ehrhart_report(&sq, None).unwrap();
        for m in report.validated_up_to + 1..report.validated_up_to + 21 {
            assert_eq!(
                report.fitted.eval(m),
                rat_int(count(&sq, m).unwrap() as i64)
            );
        }
    }

    fn small_point(n: usize) -> impl Strategy<Value = QVector> {
        proptest::collection::vec((-8i64..=8, 1i64..=4).prop_map(|(a, b)| rat(a, b)), n)
    }

    fn small_polytope(n: usize) -> impl Strategy<Value = RationalPolytope> {
        proptest::collection::vec(small_point(n), 1..=5)
            .prop_map(|pts| RationalPolytope::from_points(&pts).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn count_matches_box_scan(p in small_polytope(2), m in 1u64..=8) {
            prop_assert_eq!(count(&p, m).unwrap(), box_scan_count(&p, m));
        }

        #[test]
        fn count_matches_box_scan_3d(p in small_polytope(3), m in 1u64..=4) {
            prop_assert_eq!(count(&p, m).unwrap(), box_scan_count(&p, m));
        }

        #[test]
        fn enumerate_is_sorted_and_in_lattice(p in small_polytope(2), m in 1u64..=6) {
            let pts = enumerate_points(&p, m).unwrap();
            prop_assert_eq!(pts.len() as u64, count(&p, m).unwrap());
            for w in pts.windows(2) {
                prop_assert!(w[0] < w[1]);
            }
            for x in &pts {
                prop_assert!(crate::arith::in_scaled_lattice(x, m));
                prop_assert!(p.contains(x).unwrap());
            }
        }

        #[test]
        fn union_counts_by_inclusion_exclusion(
            a in -4i64..=2, b in -4i64..=2, m in 1u64..=5,
        ) {
            // Two overlapping axis boxes; union counted by brute force.
            let p = RationalPolytope::cuboid(&[
                (rat_int(a), rat_int(a + 3)),
                (rat_int(0), rat_int(2)),
            ]).unwrap();
            let q = RationalPolytope::cuboid(&[
                (rat_int(b), rat_int(b + 3)),
                (rat_int(1), rat_int(3)),
            ]).unwrap();
            let both = match p.intersect(&q).unwrap() {
                Some(r) => count(&r, m).unwrap(),
                None => 0,
            };
            let lhs = count(&p, m).unwrap() + count(&q, m).unwrap() - both;
            // Brute-force union count over the joint bounding box.
            let mut union = 0u64;
            let lo = a.min(b).min(0) * m as i64 - 1;
            let hi = (a.max(b) + 3).max(3) * m as i64 + 1;
            for y0 in lo..=hi {
                for y1 in lo..=hi {
                    let x = vec![rat(y0, m as i64), rat(y1, m as i64)];
                    if p.contains(&x).unwrap() || q.contains(&x).unwrap() {
                        union += 1;
                    }
                }
            }
            prop_assert_eq!(lhs, union);
        }

        #[test]
        fn leading_coefficient_is_volume(p in small_polytope(2)) {
            let q = ehrhart_fit(&p, None).unwrap();
            let vol = p.volume();
            for r in 0..q.period() {
                prop_assert_eq!(q.coefficient(p.ambient_dim(), r), &vol);
            }
        }
    }
}
