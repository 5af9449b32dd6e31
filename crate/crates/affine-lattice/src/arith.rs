//! Exact rational scalars and vectors, integer matrices, and the group of
//! integral affine maps `x ↦ Ax + b` with `A ∈ GL_n(ℤ)` and `b ∈ ℤⁿ`.
//!
//! Everything here is arbitrary precision. Rationals are kept in lowest terms
//! with a positive denominator (the `num` representation guarantees both).

use num::{BigInt, BigRational, Integer, One, Signed, Zero};

use crate::Error;

/// Exact rational scalar, always stored in lowest terms with denominator > 0.
pub type Rational = BigRational;

/// A point or direction with exact rational entries.
pub type QVector = Vec<Rational>;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(num: i64) -> Rational {
    Rational::from_integer(BigInt::from(num))
}

pub fn qvec(entries: &[(i64, i64)]) -> QVector {
    entries.iter().map(|&(n, d)| rat(n, d)).collect()
}

pub fn qvec_int(entries: &[i64]) -> QVector {
    entries.iter().map(|&n| rat_int(n)).collect()
}

/// Parses "p/q" or "p", with an optional leading '-'.
pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    let s = s.trim();
    let bad = |msg: &str| Error::ParseRational {
        input: s.to_string(),
        message: msg.to_string(),
    };
    let (num_str, den_str) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let num: BigInt = num_str
        .trim()
        .parse()
        .map_err(|_| bad("numerator is not an integer"))?;
    let den: BigInt = match den_str {
        Some(d) => d
            .trim()
            .parse()
            .map_err(|_| bad("denominator is not an integer"))?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(bad("denominator is zero"));
    }
    Ok(Rational::new(num, den))
}

/// Renders as "p/q", or "p" when the denominator is 1.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_int(a: &[BigInt], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| Rational::from_integer(x.clone()) * y)
        .sum()
}

pub fn vec_sub(a: &[Rational], b: &[Rational]) -> QVector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Least common multiple of the denominators of the entries.
pub fn denominator_lcm(points: &[QVector]) -> u64 {
    let mut acc = BigInt::one();
    for p in points {
        for x in p {
            acc = acc.lcm(x.denom());
        }
    }
    use num::ToPrimitive;
    acc.to_u64().expect("denominator lcm exceeds u64")
}

/// True iff every entry of `x` lies in `m⁻¹ℤ`.
pub fn in_scaled_lattice(x: &[Rational], m: u64) -> bool {
    let m = BigInt::from(m);
    x.iter().all(|c| (c * Rational::from_integer(m.clone())).is_integer())
}

/// Square integer matrix with arbitrary-precision entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ZMatrix {
    n: usize,
    rows: Vec<Vec<BigInt>>,
}

impl ZMatrix {
    pub fn new(rows: Vec<Vec<BigInt>>) -> Result<Self, Error> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: rows.iter().map(|r| r.len()).max().unwrap_or(0),
            });
        }
        Ok(ZMatrix { n, rows })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        ZMatrix::new(rows).expect("square literal")
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                    .collect()
            })
            .collect();
        ZMatrix { n, rows }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigInt {
        &self.rows[i][j]
    }

    /// Determinant by fraction-free (Bareiss) elimination; stays in ℤ.
    pub fn det(&self) -> BigInt {
        let n = self.n;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.rows.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                    Some(i) => {
                        m.swap(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = &m[k][k] * &m[i][j] - &m[i][k] * &m[k][j];
                    m[i][j] = &t / &prev;
                }
                m[i][k] = BigInt::zero();
            }
            prev = m[k][k].clone();
        }
        sign * m[n - 1][n - 1].clone()
    }

    /// True iff det ∈ {+1, −1}, i.e. the matrix lies in GL_n(ℤ).
    pub fn is_unimodular(&self) -> bool {
        self.det().abs().is_one()
    }

    pub fn mul(&self, other: &ZMatrix) -> Result<ZMatrix, Error> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        let n = self.n;
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|k| &self.rows[i][k] * &other.rows[k][j]).sum())
                    .collect()
            })
            .collect();
        Ok(ZMatrix { n, rows })
    }

    pub fn mul_vec_int(&self, v: &[BigInt]) -> Vec<BigInt> {
        debug_assert_eq!(v.len(), self.n);
        self.rows
            .iter()
            .map(|row| row.iter().zip(v).map(|(a, x)| a * x).sum())
            .collect()
    }

    pub fn mul_vec(&self, v: &[Rational]) -> QVector {
        debug_assert_eq!(v.len(), self.n);
        self.rows.iter().map(|row| dot_int(row, v)).collect()
    }

    /// Inverse of a unimodular matrix; integral since det = ±1.
    pub fn inverse_unimodular(&self) -> Result<ZMatrix, Error> {
        if !self.is_unimodular() {
            return Err(Error::NotUnimodular);
        }
        let n = self.n;
        let rat_rows: Vec<QVector> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|x| Rational::from_integer(x.clone())).collect())
            .collect();
        let mut cols: Vec<Vec<BigInt>> = Vec::with_capacity(n);
        for j in 0..n {
            let mut rhs = vec![Rational::zero(); n];
            rhs[j] = Rational::one();
            let col = solve_linear(&rat_rows, &rhs)?.expect("unimodular is invertible");
            cols.push(
                col.into_iter()
                    .map(|x| {
                        debug_assert!(x.is_integer());
                        x.to_integer()
                    })
                    .collect(),
            );
        }
        let rows = (0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect();
        Ok(ZMatrix { n, rows })
    }
}

/// An integral affine map `x ↦ Ax + b` with `A ∈ GL_n(ℤ)` and `b ∈ ℤⁿ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffZMap {
    linear: ZMatrix,
    translation: Vec<BigInt>,
}

impl AffZMap {
    pub fn new(linear: ZMatrix, translation: Vec<BigInt>) -> Result<Self, Error> {
        if translation.len() != linear.dim() {
            return Err(Error::DimensionMismatch {
                expected: linear.dim(),
                got: translation.len(),
            });
        }
        if !linear.is_unimodular() {
            return Err(Error::NotUnimodular);
        }
        Ok(AffZMap { linear, translation })
    }

    pub fn identity(n: usize) -> Self {
        AffZMap {
            linear: ZMatrix::identity(n),
            translation: vec![BigInt::zero(); n],
        }
    }

    pub fn translation_by(b: &[i64]) -> Self {
        AffZMap {
            linear: ZMatrix::identity(b.len()),
            translation: b.iter().map(|&x| BigInt::from(x)).collect(),
        }
    }

    pub fn from_i64(linear: &[&[i64]], translation: &[i64]) -> Result<Self, Error> {
        AffZMap::new(
            ZMatrix::from_i64(linear),
            translation.iter().map(|&x| BigInt::from(x)).collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.linear.dim()
    }

    pub fn linear(&self) -> &ZMatrix {
        &self.linear
    }

    pub fn translation(&self) -> &[BigInt] {
        &self.translation
    }

    /// Computes `b + Ax` exactly.
    pub fn apply(&self, x: &[Rational]) -> Result<QVector, Error> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        let mut y = self.linear.mul_vec(x);
        for (yi, bi) in y.iter_mut().zip(&self.translation) {
            *yi += Rational::from_integer(bi.clone());
        }
        Ok(y)
    }

    /// The map `x ↦ self(other(x))`.
    pub fn compose(&self, other: &AffZMap) -> Result<AffZMap, Error> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        let linear = self.linear.mul(&other.linear)?;
        let mut translation = self.linear.mul_vec_int(&other.translation);
        for (t, b) in translation.iter_mut().zip(&self.translation) {
            *t += b;
        }
        Ok(AffZMap { linear, translation })
    }

    pub fn invert(&self) -> AffZMap {
        let inv = self
            .linear
            .inverse_unimodular()
            .expect("AffZMap invariant guarantees unimodularity");
        let translation = inv
            .mul_vec_int(&self.translation)
            .into_iter()
            .map(|x| -x)
            .collect();
        AffZMap {
            linear: inv,
            translation,
        }
    }

    pub fn is_identity(&self) -> bool {
        self == &AffZMap::identity(self.dim())
    }
}

/// Exact solve of a square rational system by fraction-free elimination.
///
/// Returns `Ok(None)` when the matrix is singular.
pub fn solve_linear(matrix: &[QVector], rhs: &[Rational]) -> Result<Option<QVector>, Error> {
    let n = matrix.len();
    if rhs.len() != n || matrix.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: rhs.len(),
        });
    }
    if n == 0 {
        return Ok(Some(vec![]));
    }
    // Clear denominators row by row to get an integer augmented matrix.
    let mut aug: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for (row, b) in matrix.iter().zip(rhs) {
        let mut lcm = b.denom().clone();
        for x in row {
            lcm = lcm.lcm(x.denom());
        }
        let mut int_row: Vec<BigInt> = row
            .iter()
            .map(|x| x.numer() * (&lcm / x.denom()))
            .collect();
        int_row.push(b.numer() * (&lcm / b.denom()));
        aug.push(int_row);
    }
    // Fraction-free forward elimination.
    let mut prev = BigInt::one();
    for k in 0..n {
        if aug[k][k].is_zero() {
            match (k + 1..n).find(|&i| !aug[i][k].is_zero()) {
                Some(i) => aug.swap(k, i),
                None => return Ok(None),
            }
        }
        for i in k + 1..n {
            for j in k + 1..=n {
                let t = &aug[k][k] * &aug[i][j] - &aug[i][k] * &aug[k][j];
                aug[i][j] = &t / &prev;
            }
            aug[i][k] = BigInt::zero();
        }
        prev = aug[k][k].clone();
    }
    // Rational back substitution.
    let mut x = vec![Rational::zero(); n];
    for k in (0..n).rev() {
        let mut acc = Rational::from_integer(aug[k][n].clone());
        for j in k + 1..n {
            acc -= Rational::from_integer(aug[k][j].clone()) * &x[j];
        }
        x[k] = acc / Rational::from_integer(aug[k][k].clone());
    }
    Ok(Some(x))
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(rows: &mut Vec<QVector>) -> Vec<usize> {
    let nrows = rows.len();
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..nrows {
            if i != r && !rows[i][c].is_zero() {
                let factor = rows[i][c].clone();
                for j in 0..ncols {
                    let t = &rows[r][j] * &factor;
                    rows[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[QVector]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// Basis of `{x : Rx = 0}` for the matrix with the given rows.
pub fn nullspace(rows: &[QVector], ncols: usize) -> Vec<QVector> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::with_capacity(free.len());
    for &f in &free {
        let mut v = vec![Rational::zero(); ncols];
        v[f] = Rational::one();
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = -m[r][f].clone();
        }
        basis.push(v);
    }
    basis
}

/// Determinant of a square rational matrix (Gaussian elimination; exact).
pub fn det_rational(matrix: &[QVector]) -> Rational {
    let n = matrix.len();
    let mut m = matrix.to_vec();
    let mut det = Rational::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
            return Rational::zero();
        };
        if p != k {
            m.swap(k, p);
            det = -det;
        }
        det *= &m[k][k];
        let inv = m[k][k].recip();
        for i in k + 1..n {
            if m[i][k].is_zero() {
                continue;
            }
            let factor = &m[i][k] * &inv;
            for j in k..n {
                let t = &m[k][j] * &factor;
                m[i][j] -= t;
            }
        }
    }
    det
}
