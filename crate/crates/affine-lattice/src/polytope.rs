//! Exact rational polytopes: convex hulls of rational points with cached
//! facet (half-space) descriptions, membership, intersection, images under
//! integral affine maps, and exact volume.
//!
//! Facet enumeration is brute force over vertex subsets and vertex
//! enumeration is brute force over constraint subsets. Both are exponential
//! in the dimension, which is why hull construction enforces a dimension cap
//! (default [`crate::DEFAULT_DIM_CAP`]).

use num::{BigInt, Integer, One, Signed, Zero};

use crate::arith::{
    self, denominator_lcm, det_rational, dot_int, nullspace, rank, rref, solve_linear, vec_sub,
    AffZMap, QVector, Rational,
};
use crate::{Error, DEFAULT_DIM_CAP};

/// Whether a half-space is `⟨normal, x⟩ ≤ offset` or `⟨normal, x⟩ = offset`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConstraintKind {
    Equality,
    Inequality,
}

/// A canonical half-space: primitive integer data, inequalities oriented as
/// `≤`, equalities with the first nonzero normal entry positive.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfSpace {
    pub kind: ConstraintKind,
    pub normal: Vec<BigInt>,
    pub offset: BigInt,
}

impl HalfSpace {
    /// Builds the canonical form of `⟨normal, x⟩ ≤/= offset` from rational data.
    pub fn canonical(normal: &[Rational], offset: &Rational, kind: ConstraintKind) -> HalfSpace {
        assert!(normal.iter().any(|x| !x.is_zero()), "zero normal");
        let mut lcm = offset.denom().clone();
        for x in normal {
            lcm = lcm.lcm(x.denom());
        }
        let mut n: Vec<BigInt> = normal.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
        let mut c = offset.numer() * (&lcm / offset.denom());
        let mut g = c.abs();
        for x in &n {
            g = g.gcd(x);
        }
        if !g.is_zero() && !g.is_one() {
            for x in n.iter_mut() {
                *x = &*x / &g;
            }
            c = &c / &g;
        }
        if kind == ConstraintKind::Equality {
            let first = n.iter().find(|x| !x.is_zero()).expect("zero normal");
            if first.is_negative() {
                for x in n.iter_mut() {
                    *x = -x.clone();
                }
                c = -c;
            }
        }
        HalfSpace {
            kind,
            normal: n,
            offset: c,
        }
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        dot_int(&self.normal, x)
    }

    pub fn satisfied(&self, x: &[Rational]) -> bool {
        let v = self.eval(x);
        let c = Rational::from_integer(self.offset.clone());
        match self.kind {
            ConstraintKind::Equality => v == c,
            ConstraintKind::Inequality => v <= c,
        }
    }

    pub fn tight(&self, x: &[Rational]) -> bool {
        self.eval(x) == Rational::from_integer(self.offset.clone())
    }

    fn normal_rational(&self) -> QVector {
        self.normal
            .iter()
            .map(|x| Rational::from_integer(x.clone()))
            .collect()
    }
}

/// All `k`-element subsets of `0..n`, in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        // Advance to the next combination.
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Convex hull of finitely many rational points, with its facet description.
///
/// The empty set is never a `RationalPolytope`; operations that can produce
/// it return `Option`. Lower-dimensional polytopes are first-class: the
/// affine span is carried as equality constraints among the facets.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalPolytope {
    ambient_dim: usize,
    affine_dim: usize,
    vertices: Vec<QVector>,
    facets: Vec<HalfSpace>,
}

impl RationalPolytope {
    /// Hull of the given points with redundant points removed, under the
    /// default dimension cap.
    pub fn from_points(points: &[QVector]) -> Result<Self, Error> {
        Self::from_points_capped(points, DEFAULT_DIM_CAP)
    }

    pub fn from_points_capped(points: &[QVector], dim_cap: usize) -> Result<Self, Error> {
        if points.is_empty() {
            return Err(Error::EmptyPointSet);
        }
        let n = points[0].len();
        if let Some(p) = points.iter().find(|p| p.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: p.len(),
            });
        }
        if n > dim_cap {
            return Err(Error::DimCapExceeded { dim: n, cap: dim_cap });
        }

        let mut pts = points.to_vec();
        pts.sort();
        pts.dedup();

        let origin = pts[0].clone();
        let directions: Vec<QVector> = pts[1..].iter().map(|p| vec_sub(p, &origin)).collect();
        let affine_dim = rank(&directions);

        let mut facets: Vec<HalfSpace> = Vec::new();

        // Equalities cutting out the affine span.
        for a in nullspace(&directions, n) {
            let c = arith::dot(&a, &origin);
            facets.push(HalfSpace::canonical(&a, &c, ConstraintKind::Equality));
        }

        // A rational basis of the direction span.
        let span_basis: Vec<QVector> = {
            let mut m = directions.clone();
            let pivots = rref(&mut m);
            m.truncate(pivots.len());
            m
        };

        // Brute-force facet enumeration: every facet of the hull is spanned
        // by affine_dim of the input points, so hyperplane candidates through
        // each such subset cover all facets.
        if affine_dim >= 1 {
            for subset in combinations(pts.len(), affine_dim) {
                let base = &pts[subset[0]];
                let sub_dirs: Vec<QVector> = subset[1..]
                    .iter()
                    .map(|&i| vec_sub(&pts[i], base))
                    .collect();
                // Solve for a normal inside the span, orthogonal to the
                // subset's directions; skip unless the kernel is a line.
                let d = affine_dim;
                let eqs: Vec<QVector> = sub_dirs
                    .iter()
                    .map(|u| span_basis.iter().map(|b| arith::dot(b, u)).collect())
                    .collect();
                let kernel = nullspace(&eqs, d);
                if kernel.len() != 1 {
                    continue;
                }
                let mut a = vec![Rational::zero(); n];
                for (t, b) in kernel[0].iter().zip(&span_basis) {
                    for (ai, bi) in a.iter_mut().zip(b) {
                        *ai += t * bi;
                    }
                }
                let c = arith::dot(&a, base);
                let mut below = false;
                let mut above = false;
                for p in &pts {
                    match arith::dot(&a, p).cmp(&c) {
                        std::cmp::Ordering::Less => below = true,
                        std::cmp::Ordering::Greater => above = true,
                        std::cmp::Ordering::Equal => {}
                    }
                }
                if below && above {
                    continue;
                }
                let (a, c) = if above {
                    (a.iter().map(|x| -x).collect::<QVector>(), -c)
                } else {
                    (a, c)
                };
                facets.push(HalfSpace::canonical(&a, &c, ConstraintKind::Inequality));
            }
        }
        facets.sort();
        facets.dedup();

        // A point is extreme iff the constraints tight at it pin it down:
        // their normals must have full rank n.
        let vertices: Vec<QVector> = pts
            .into_iter()
            .filter(|p| {
                let tight: Vec<QVector> = facets
                    .iter()
                    .filter(|h| h.tight(p))
                    .map(|h| h.normal_rational())
                    .collect();
                rank(&tight) == n
            })
            .collect();
        debug_assert!(!vertices.is_empty());

        Ok(RationalPolytope {
            ambient_dim: n,
            affine_dim,
            vertices,
            facets,
        })
    }

    /// Axis-aligned box with the given per-axis bounds.
    pub fn cuboid(bounds: &[(Rational, Rational)]) -> Result<Self, Error> {
        let n = bounds.len();
        let mut corners = vec![Vec::with_capacity(n)];
        for (lo, hi) in bounds {
            let mut next = Vec::with_capacity(corners.len() * 2);
            for c in corners {
                let mut a = c.clone();
                a.push(lo.clone());
                next.push(a);
                if hi != lo {
                    let mut b = c;
                    b.push(hi.clone());
                    next.push(b);
                }
            }
            corners = next;
        }
        Self::from_points_capped(&corners, n.max(DEFAULT_DIM_CAP))
    }

    pub fn unit_cube(n: usize) -> Self {
        let bounds: Vec<_> = (0..n).map(|_| (Rational::zero(), Rational::one())).collect();
        Self::cuboid(&bounds).expect("unit cube is valid")
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn affine_dim(&self) -> usize {
        self.affine_dim
    }

    /// The extreme points, sorted lexicographically.
    pub fn vertices(&self) -> &[QVector] {
        &self.vertices
    }

    /// Canonical facet system (equalities of the affine span first).
    pub fn facets(&self) -> &[HalfSpace] {
        &self.facets
    }

    /// Exact membership: every facet constraint holds (equalities pin the
    /// affine span, so this includes the span test).
    pub fn contains(&self, x: &[Rational]) -> Result<bool, Error> {
        if x.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                got: x.len(),
            });
        }
        Ok(self.facets.iter().all(|h| h.satisfied(x)))
    }

    /// The hull of the images of the vertices under `f`.
    pub fn affine_image(&self, f: &AffZMap) -> Result<RationalPolytope, Error> {
        if f.dim() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                got: f.dim(),
            });
        }
        let images: Vec<QVector> = self
            .vertices
            .iter()
            .map(|v| f.apply(v))
            .collect::<Result<_, _>>()?;
        let img = Self::from_points_capped(&images, self.ambient_dim)?;
        debug_assert_eq!(img.vertices.len(), self.vertices.len());
        Ok(img)
    }

    /// Intersection via the union of both facet systems; `None` when empty.
    pub fn intersect(&self, other: &RationalPolytope) -> Result<Option<RationalPolytope>, Error> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                got: other.ambient_dim,
            });
        }
        let n = self.ambient_dim;
        let mut constraints: Vec<HalfSpace> = self.facets.clone();
        constraints.extend(other.facets.iter().cloned());
        constraints.sort();
        constraints.dedup();

        // Vertex enumeration: each vertex of the intersection is the unique
        // solution of n constraints taken with equality.
        let mut candidates: Vec<QVector> = Vec::new();
        for subset in combinations(constraints.len(), n) {
            let mat: Vec<QVector> = subset
                .iter()
                .map(|&i| constraints[i].normal_rational())
                .collect();
            let rhs: QVector = subset
                .iter()
                .map(|&i| Rational::from_integer(constraints[i].offset.clone()))
                .collect();
            let Some(x) = solve_linear(&mat, &rhs)? else {
                continue;
            };
            if constraints.iter().all(|h| h.satisfied(&x)) {
                candidates.push(x);
            }
        }
        candidates.sort();
        candidates.dedup();
        if candidates.is_empty() {
            return Ok(None);
        }
        Ok(Some(Self::from_points_capped(&candidates, n.max(DEFAULT_DIM_CAP))?))
    }

    /// Coordinate-wise exact (min, max) over the vertices.
    pub fn bounding_box(&self) -> Vec<(Rational, Rational)> {
        (0..self.ambient_dim)
            .map(|j| {
                let mut lo = self.vertices[0][j].clone();
                let mut hi = lo.clone();
                for v in &self.vertices[1..] {
                    if v[j] < lo {
                        lo = v[j].clone();
                    }
                    if v[j] > hi {
                        hi = v[j].clone();
                    }
                }
                (lo, hi)
            })
            .collect()
    }

    /// Least common multiple of the denominators of all vertex coordinates.
    pub fn vertex_denominator_lcm(&self) -> u64 {
        denominator_lcm(&self.vertices)
    }

    /// Triangulation by fanning from the lexicographically smallest vertex,
    /// recursing into facets. Each simplex is a list of `affine_dim + 1`
    /// affinely independent vertices.
    pub fn simplices(&self) -> Vec<Vec<QVector>> {
        if self.vertices.len() == self.affine_dim + 1 {
            return vec![self.vertices.clone()];
        }
        let apex = &self.vertices[0];
        let mut out = Vec::new();
        for facet in &self.facets {
            if facet.kind != ConstraintKind::Inequality || facet.tight(apex) {
                continue;
            }
            let face_vertices: Vec<QVector> = self
                .vertices
                .iter()
                .filter(|v| facet.tight(v))
                .cloned()
                .collect();
            let face = Self::from_points_capped(&face_vertices, self.ambient_dim)
                .expect("facet vertices are nonempty");
            for mut s in face.simplices() {
                s.insert(0, apex.clone());
                out.push(s);
            }
        }
        out
    }

    /// Exact n-dimensional volume; 0 when `affine_dim < ambient_dim`.
    pub fn volume(&self) -> Rational {
        let n = self.ambient_dim;
        if self.affine_dim < n {
            return Rational::zero();
        }
        let mut nfact = BigInt::one();
        for k in 2..=n {
            nfact *= BigInt::from(k);
        }
        let mut total = Rational::zero();
        for simplex in self.simplices() {
            let edges: Vec<QVector> = simplex[1..]
                .iter()
                .map(|v| vec_sub(v, &simplex[0]))
                .collect();
            total += det_rational(&edges).abs();
        }
        total / Rational::from_integer(nfact)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{qvec, qvec_int, rat, rat_int};
    use proptest::prelude::*;

    fn unit_square() -> RationalPolytope {
        RationalPolytope::unit_cube(2)
    }

    fn standard_simplex2() -> RationalPolytope {
        RationalPolytope::from_points(&[qvec_int(&[0, 0]), qvec_int(&[1, 0]), qvec_int(&[0, 1])])
            .unwrap()
    }

    #[test]
    fn from_points_drops_interior_points() {
        let p = RationalPolytope::from_points(&[
            qvec_int(&[0, 0]),
            qvec_int(&[1, 0]),
            qvec_int(&[0, 1]),
            qvec(&[(1, 2), (1, 4)]),
        ])
        .unwrap();
        assert_eq!(p.vertices().len(), 3);
        assert_eq!(p.affine_dim(), 2);
        assert!(!p.vertices().contains(&qvec(&[(1, 2), (1, 4)])));
    }

    #[test]
    fn single_point() {
        let p = RationalPolytope::from_points(&[qvec(&[(1, 3)])]).unwrap();
        assert_eq!(p.affine_dim(), 0);
        assert_eq!(p.vertices().len(), 1);
        assert_eq!(p.bounding_box(), vec![(rat(1, 3), rat(1, 3))]);
        assert_eq!(p.volume(), rat_int(0));
    }

    #[test]
    fn square_has_four_facets() {
        let p = unit_square();
        assert_eq!(p.vertices().len(), 4);
        let ineqs = p
            .facets()
            .iter()
            .filter(|h| h.kind == ConstraintKind::Inequality)
            .count();
        assert_eq!(ineqs, 4);
        assert_eq!(p.volume(), rat_int(1));
    }

    #[test]
    fn contains_examples() {
        let sq = unit_square();
        assert!(sq.contains(&qvec(&[(1, 2), (1, 2)])).unwrap());
        assert!(!sq.contains(&qvec(&[(1, 1), (3, 2)])).unwrap());

        let seg = RationalPolytope::from_points(&[qvec_int(&[0, 0]), qvec_int(&[1, 1])]).unwrap();
        assert_eq!(seg.affine_dim(), 1);
        assert!(seg.contains(&qvec(&[(1, 2), (1, 2)])).unwrap());
        assert!(!seg.contains(&qvec(&[(1, 2), (1, 4)])).unwrap());
        assert_eq!(seg.volume(), rat_int(0));
    }

    #[test]
    fn affine_image_examples() {
        let sq = unit_square();
        assert_eq!(sq.affine_image(&AffZMap::identity(2)).unwrap(), sq);

        let shift = AffZMap::translation_by(&[1, 0]);
        let img = sq.affine_image(&shift).unwrap();
        assert_eq!(
            img.vertices(),
            &[
                qvec_int(&[1, 0]),
                qvec_int(&[1, 1]),
                qvec_int(&[2, 0]),
                qvec_int(&[2, 1])
            ]
        );

        // x ↦ 1 - x fixes [0, 1] setwise.
        let seg = RationalPolytope::from_points(&[qvec_int(&[0]), qvec_int(&[1])]).unwrap();
        let refl = AffZMap::from_i64(&[&[-1]], &[1]).unwrap();
        assert_eq!(seg.affine_image(&refl).unwrap(), seg);
    }

    #[test]
    fn intersect_examples() {
        let sq = unit_square();
        assert_eq!(sq.intersect(&sq).unwrap().unwrap(), sq);

        let other = RationalPolytope::cuboid(&[
            (rat(1, 2), rat(3, 2)),
            (rat_int(0), rat_int(1)),
        ])
        .unwrap();
        let expected = RationalPolytope::cuboid(&[
            (rat(1, 2), rat_int(1)),
            (rat_int(0), rat_int(1)),
        ])
        .unwrap();
        assert_eq!(sq.intersect(&other).unwrap().unwrap(), expected);

        let a = RationalPolytope::from_points(&[qvec_int(&[0]), qvec_int(&[1])]).unwrap();
        let b = RationalPolytope::from_points(&[qvec_int(&[2]), qvec_int(&[3])]).unwrap();
        assert!(a.intersect(&b).unwrap().is_none());
    }

    #[test]
    fn volume_examples() {
        assert_eq!(RationalPolytope::unit_cube(3).volume(), rat_int(1));
        assert_eq!(standard_simplex2().volume(), rat(1, 2));
    }

    #[test]
    fn bounding_box_example() {
        let p =
            RationalPolytope::from_points(&[qvec(&[(1, 2), (0, 1)]), qvec(&[(3, 2), (1, 1)])])
                .unwrap();
        assert_eq!(
            p.bounding_box(),
            vec![(rat(1, 2), rat(3, 2)), (rat_int(0), rat_int(1))]
        );
    }

    #[test]
    fn volume_additive_on_cube_split() {
        let left =
            RationalPolytope::cuboid(&[(rat_int(0), rat(1, 2)), (rat_int(0), rat_int(1))]).unwrap();
        let right =
            RationalPolytope::cuboid(&[(rat(1, 2), rat_int(1)), (rat_int(0), rat_int(1))]).unwrap();
        assert_eq!(left.volume() + right.volume(), rat_int(1));
    }

    fn small_point(n: usize) -> impl Strategy<Value = QVector> {
        proptest::collection::vec((-6i64..=6, 1i64..=3).prop_map(|(a, b)| rat(a, b)), n)
    }

    fn small_polytope(n: usize) -> impl Strategy<Value = RationalPolytope> {
        proptest::collection::vec(small_point(n), 1..=5)
            .prop_map(|pts| RationalPolytope::from_points(&pts).unwrap())
    }

    fn shear_map() -> impl Strategy<Value = AffZMap> {
        (-2i64..=2, -3i64..=3, -3i64..=3, proptest::bool::ANY).prop_map(|(s, b0, b1, flip)| {
            let a0 = if flip { -1 } else { 1 };
            AffZMap::from_i64(&[&[a0, s], &[0, 1]], &[b0, b1]).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn round_trip_from_vertices(p in small_polytope(2)) {
            let again = RationalPolytope::from_points(p.vertices()).unwrap();
            prop_assert_eq!(again, p);
        }

        #[test]
        fn volume_preserved_by_affz(p in small_polytope(2), f in shear_map()) {
            let img = p.affine_image(&f).unwrap();
            prop_assert_eq!(img.volume(), p.volume());
        }

        #[test]
        fn contains_equivariant(p in small_polytope(2), f in shear_map(), x in small_point(2)) {
            let img = p.affine_image(&f).unwrap();
            let fx = f.apply(&x).unwrap();
            prop_assert_eq!(p.contains(&x).unwrap(), img.contains(&fx).unwrap());
        }

        #[test]
        fn intersect_commutes_and_shrinks(p in small_polytope(2), q in small_polytope(2)) {
            let pq = p.intersect(&q).unwrap();
            let qp = q.intersect(&p).unwrap();
            prop_assert_eq!(&pq, &qp);
            if let Some(r) = pq {
                for v in r.vertices() {
                    prop_assert!(p.contains(v).unwrap());
                    prop_assert!(q.contains(v).unwrap());
                }
            }
            prop_assert!(p.volume() >= rat_int(0));
        }
    }
}
