//! Quasi-polynomials `m ↦ Σ_k a_k(m) m^k` with periodic rational
//! coefficients, stored per residue class and normalized to minimal period.

use num::{BigInt, Integer, One, Zero};

use crate::arith::{format_rational, Rational};

/// A quasi-polynomial of bounded degree whose coefficient functions are
/// periodic with the stored (minimal) period.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiPolynomial {
    degree: usize,
    period: u64,
    /// `coeffs[k][r]` is the coefficient of `m^k` for `m ≡ r (mod period)`.
    coeffs: Vec<Vec<Rational>>,
}

impl QuasiPolynomial {
    /// Builds a quasi-polynomial, reducing the period to its minimum.
    ///
    /// `coeffs[k][r]` must have `degree + 1` rows of length `period`.
    pub fn new(degree: usize, period: u64, coeffs: Vec<Vec<Rational>>) -> Self {
        assert!(period >= 1, "period must be at least 1");
        assert_eq!(coeffs.len(), degree + 1);
        for row in &coeffs {
            assert_eq!(row.len(), period as usize);
        }
        let mut q = QuasiPolynomial {
            degree,
            period,
            coeffs,
        };
        q.minimize_period();
        q
    }

    pub fn zero(degree: usize) -> Self {
        QuasiPolynomial {
            degree,
            period: 1,
            coeffs: vec![vec![Rational::zero()]; degree + 1],
        }
    }

    /// A period-1 polynomial from its coefficients `c[k]` of `m^k`.
    pub fn polynomial(coeffs: &[Rational]) -> Self {
        assert!(!coeffs.is_empty());
        QuasiPolynomial {
            degree: coeffs.len() - 1,
            period: 1,
            coeffs: coeffs.iter().map(|c| vec![c.clone()]).collect(),
        }
    }

    /// `vol · m^n` for a given leading coefficient.
    pub fn monomial(leading: Rational, degree: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); degree + 1];
        coeffs[degree] = leading;
        Self::polynomial(&coeffs)
    }

    pub fn degree_bound(&self) -> usize {
        self.degree
    }

    pub fn period(&self) -> u64 {
        self.period
    }

    /// Coefficient of `m^k` on the residue class `r` (taken mod the period).
    pub fn coefficient(&self, k: usize, r: u64) -> &Rational {
        &self.coeffs[k][(r % self.period) as usize]
    }

    /// Exact evaluation at `m ≥ 1`.
    pub fn eval(&self, m: u64) -> Rational {
        let r = (m % self.period) as usize;
        let m_rat = Rational::from_integer(BigInt::from(m));
        let mut acc = Rational::zero();
        for k in (0..=self.degree).rev() {
            acc = acc * &m_rat + &self.coeffs[k][r];
        }
        acc
    }

    /// True iff every stored coefficient is zero.
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().flatten().all(|c| c.is_zero())
    }

    /// Difference, with period lcm of the two periods and degree the maximum
    /// of the two degrees, then re-normalized.
    pub fn sub(&self, other: &QuasiPolynomial) -> QuasiPolynomial {
        let period = self.period.lcm(&other.period);
        let degree = self.degree.max(other.degree);
        let mut coeffs = vec![vec![Rational::zero(); period as usize]; degree + 1];
        for k in 0..=degree {
            for r in 0..period {
                let a = if k <= self.degree {
                    self.coefficient(k, r).clone()
                } else {
                    Rational::zero()
                };
                let b = if k <= other.degree {
                    other.coefficient(k, r).clone()
                } else {
                    Rational::zero()
                };
                coeffs[k][r as usize] = a - b;
            }
        }
        QuasiPolynomial::new(degree, period, coeffs)
    }

    fn minimize_period(&mut self) {
        let s = self.period;
        for d in 1..s {
            if s % d != 0 {
                continue;
            }
            let periodic = self.coeffs.iter().all(|row| {
                (0..s as usize).all(|r| row[r] == row[r % d as usize])
            });
            if periodic {
                for row in self.coeffs.iter_mut() {
                    row.truncate(d as usize);
                }
                self.period = d;
                return;
            }
        }
    }

    /// Renders the residue-`r` polynomial, e.g. `m^2 + 2m + 1`.
    pub fn render_residue(&self, r: u64) -> String {
        let mut terms: Vec<String> = Vec::new();
        for k in (0..=self.degree).rev() {
            let c = self.coefficient(k, r);
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let var = match k {
                0 => String::new(),
                1 => "m".to_string(),
                _ => format!("m^{k}"),
            };
            let body = if k > 0 && mag.is_one() {
                var
            } else if k > 0 && mag.is_integer() {
                format!("{}{}", format_rational(&mag), var)
            } else if k > 0 {
                format!("{} {}", format_rational(&mag), var)
            } else {
                format_rational(&mag)
            };
            if terms.is_empty() {
                terms.push(if c.is_negative() { format!("-{body}") } else { body });
            } else {
                terms.push(format!("{} {}", if c.is_negative() { "-" } else { "+" }, body));
            }
        }
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" ")
        }
    }
}

use num::Signed;

impl std::fmt::Display for QuasiPolynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.period == 1 {
            write!(f, "L(m) = {}", self.render_residue(0))
        } else {
            writeln!(f, "period {}:", self.period)?;
            for r in 0..self.period {
                writeln!(
                    f,
                    "  m ≡ {} (mod {}): L(m) = {}",
                    r,
                    self.period,
                    self.render_residue(r)
                )?;
            }
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rat_int};

    fn square_poly() -> QuasiPolynomial {
        // m^2 + 2m + 1
        QuasiPolynomial::polynomial(&[rat_int(1), rat_int(2), rat_int(1)])
    }

    fn half_segment() -> QuasiPolynomial {
        // L(m) = floor(m/2) + 1: a1 ≡ 1/2, a0(0) = 1, a0(1) = 1/2.
        QuasiPolynomial::new(
            1,
            2,
            vec![vec![rat_int(1), rat(1, 2)], vec![rat(1, 2), rat(1, 2)]],
        )
    }

    #[test]
    fn eval_examples() {
        assert_eq!(QuasiPolynomial::zero(3).eval(7), rat_int(0));
        assert_eq!(square_poly().eval(3), rat_int(16));
        assert_eq!(half_segment().eval(5), rat_int(3));
        assert_eq!(half_segment().eval(4), rat_int(3));
    }

    #[test]
    fn sub_examples() {
        let q = square_poly();
        assert!(q.sub(&q).is_zero());

        let m_plus_1 = QuasiPolynomial::polynomial(&[rat_int(1), rat_int(1)]);
        let m = QuasiPolynomial::polynomial(&[rat_int(0), rat_int(1)]);
        let diff = m_plus_1.sub(&m);
        assert_eq!(diff.period(), 1);
        assert_eq!(diff.eval(9), rat_int(1));

        let half_m = QuasiPolynomial::polynomial(&[rat_int(0), rat(1, 2)]);
        let diff = half_segment().sub(&half_m);
        assert_eq!(diff.period(), 2);
        assert_eq!(diff.coefficient(0, 0), &rat_int(1));
        assert_eq!(diff.coefficient(0, 1), &rat(1, 2));
        assert!(diff.coefficient(1, 0).is_zero());
    }

    #[test]
    fn is_zero_examples() {
        assert!(QuasiPolynomial::zero(2).is_zero());
        assert!(!QuasiPolynomial::polynomial(&[rat_int(1)]).is_zero());
    }

    #[test]
    fn period_is_minimized() {
        // Constant coefficients presented with period 4 collapse to period 1.
        let q = QuasiPolynomial::new(
            0,
            4,
            vec![vec![rat_int(5), rat_int(5), rat_int(5), rat_int(5)]],
        );
        assert_eq!(q.period(), 1);

        // A genuinely 2-periodic table presented with period 4 collapses to 2.
        let q = QuasiPolynomial::new(
            0,
            4,
            vec![vec![rat_int(1), rat_int(2), rat_int(1), rat_int(2)]],
        );
        assert_eq!(q.period(), 2);
    }

    #[test]
    fn rendering() {
        assert_eq!(square_poly().to_string(), "L(m) = m^2 + 2m + 1");
        let q = QuasiPolynomial::polynomial(&[rat(-1, 2), rat_int(0), rat(3, 4)]);
        assert_eq!(q.to_string(), "L(m) = 3/4 m^2 - 1/2");
        assert_eq!(QuasiPolynomial::zero(1).to_string(), "L(m) = 0");
        let table = half_segment().to_string();
        assert!(table.contains("m ≡ 0 (mod 2): L(m) = 1/2 m + 1"));
        assert!(table.contains("m ≡ 1 (mod 2): L(m) = 1/2 m + 1/2"));
    }
}
