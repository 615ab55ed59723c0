//! Dense univariate polynomials in `q` with arbitrary-precision integer
//! coefficients, constant term first.

use std::fmt;
use std::ops::{Add, Mul};

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Canonical form: no trailing zero coefficients; the zero polynomial is the
/// empty vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct QPolynomial {
    coeffs: Vec<BigInt>,
}

impl QPolynomial {
    pub fn zero() -> Self {
        QPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        QPolynomial {
            coeffs: vec![BigInt::one()],
        }
    }

    pub fn from_coeffs<T: Into<BigInt>>(coeffs: impl IntoIterator<Item = T>) -> Self {
        let mut p = QPolynomial {
            coeffs: coeffs.into_iter().map(Into::into).collect(),
        };
        p.trim();
        p
    }

    /// `q^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = BigInt::one();
        QPolynomial { coeffs }
    }

    /// `n_q = 1 + q + ... + q^(n-1)`.
    pub fn q_integer(n: i64) -> Result<Self> {
        if n <= 0 {
            return Err(Error::Domain(format!("q-integer needs n >= 1, got {n}")));
        }
        Ok(QPolynomial {
            coeffs: vec![BigInt::one(); n as usize],
        })
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn eval_at_one(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    pub fn is_palindromic(&self) -> bool {
        self.coeffs.iter().eq(self.coeffs.iter().rev())
    }

    /// Coefficients as nonnegative integers, failing on any negative entry.
    pub fn to_biguints(&self) -> Result<Vec<BigUint>> {
        self.coeffs
            .iter()
            .map(|c| {
                c.to_biguint()
                    .ok_or_else(|| Error::Domain(format!("negative coefficient {c}")))
            })
            .collect()
    }

    /// Product with `n_q`, as a sliding-window sum over `n` coefficients.
    /// Same result as `self * &q_integer(n)` in `O(degree)` additions.
    pub fn mul_q_integer(&self, n: usize) -> QPolynomial {
        if n == 0 || self.is_zero() {
            return QPolynomial::zero();
        }
        let len = self.coeffs.len() + n - 1;
        let mut out = Vec::with_capacity(len);
        let mut window = BigInt::zero();
        for k in 0..len {
            if let Some(x) = self.coeffs.get(k) {
                window += x;
            }
            if k >= n {
                window -= &self.coeffs[k - n];
            }
            out.push(window.clone());
        }
        let mut p = QPolynomial { coeffs: out };
        p.trim();
        p
    }

    /// Long division by a divisor with leading coefficient `+-1`.
    pub fn div_rem(&self, divisor: &QPolynomial) -> Result<(QPolynomial, QPolynomial)> {
        let dd = divisor
            .degree()
            .ok_or_else(|| Error::Domain("division by zero polynomial".into()))?;
        let lead = &divisor.coeffs[dd];
        if !lead.abs().is_one() {
            return Err(Error::Domain(format!(
                "divisor leading coefficient must be +-1, got {lead}"
            )));
        }
        let negate = lead.sign() == Sign::Minus;
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree().filter(|&n| n >= dd) else {
            return Ok((QPolynomial::zero(), self.clone()));
        };
        let mut quot = vec![BigInt::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let mut t = std::mem::take(&mut rem[k + dd]);
            if t.is_zero() {
                continue;
            }
            if negate {
                t = -t;
            }
            for (m, dc) in divisor.coeffs[..dd].iter().enumerate() {
                if !dc.is_zero() {
                    rem[k + m] -= &t * dc;
                }
            }
            quot[k] = t;
        }
        let mut q = QPolynomial { coeffs: quot };
        q.trim();
        let mut r = QPolynomial { coeffs: rem };
        r.trim();
        Ok((q, r))
    }

    /// Division that must be exact.
    pub fn div_exact(&self, divisor: &QPolynomial) -> Result<QPolynomial> {
        let (q, r) = self.div_rem(divisor)?;
        if !r.is_zero() {
            return Err(Error::NonzeroRemainder {
                divisor: divisor.to_string(),
            });
        }
        Ok(q)
    }
}

impl<'a> Add<&'a QPolynomial> for &'a QPolynomial {
    type Output = QPolynomial;

    fn add(self, rhs: &QPolynomial) -> QPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            let mut v = self.coeffs.get(k).cloned().unwrap_or_default();
            if let Some(x) = rhs.coeffs.get(k) {
                v += x;
            }
            coeffs.push(v);
        }
        let mut p = QPolynomial { coeffs };
        p.trim();
        p
    }
}

impl<'a> Mul<&'a QPolynomial> for &'a QPolynomial {
    type Output = QPolynomial;

    /// Schoolbook product.
    fn mul(self, rhs: &QPolynomial) -> QPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return QPolynomial::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in rhs.coeffs.iter().enumerate() {
                if y.is_one() {
                    coeffs[i + j] += x;
                } else if !y.is_zero() {
                    coeffs[i + j] += x * y;
                }
            }
        }
        let mut p = QPolynomial { coeffs };
        p.trim();
        p
    }
}

impl fmt::Display for QPolynomial {
    /// `1 + q + 2q^2 - q^5`; the zero polynomial prints `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            match k {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}")?;
                    }
                    f.write_str("q")?;
                    if k > 1 {
                        write!(f, "^{k}")?;
                    }
                }
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> QPolynomial {
        QPolynomial::from_coeffs(c.iter().copied())
    }

    #[test]
    fn q_integers() {
        assert_eq!(QPolynomial::q_integer(1).unwrap(), p(&[1]));
        assert_eq!(QPolynomial::q_integer(2).unwrap(), p(&[1, 1]));
        assert_eq!(QPolynomial::q_integer(4).unwrap(), p(&[1, 1, 1, 1]));
        assert!(matches!(QPolynomial::q_integer(0), Err(Error::Domain(_))));
        assert!(QPolynomial::q_integer(-3).is_err());
    }

    #[test]
    fn canonical_form_drops_trailing_zeros() {
        assert_eq!(p(&[1, 2, 0, 0]).degree(), Some(1));
        assert!(p(&[0, 0]).is_zero());
        assert_eq!(p(&[0]).degree(), None);
    }

    #[test]
    fn multiply_and_divide() {
        let a = p(&[1, 1, 1]);
        let b = p(&[1, 0, 1]);
        let prod = &a * &b;
        assert_eq!(prod, p(&[1, 1, 2, 1, 1]));
        assert_eq!(prod.div_exact(&a).unwrap(), b);
        assert_eq!(prod.div_exact(&b).unwrap(), a);

        let (q, r) = p(&[1, 0, 0, 1]).div_rem(&p(&[1, 1])).unwrap();
        assert_eq!(q, p(&[1, -1, 1]));
        assert!(r.is_zero());

        let (q, r) = p(&[5, 0, 1]).div_rem(&p(&[1, 1])).unwrap();
        assert_eq!(q, p(&[-1, 1]));
        assert_eq!(r, p(&[6]));
        assert!(matches!(
            p(&[5, 0, 1]).div_exact(&p(&[1, 1])),
            Err(Error::NonzeroRemainder { .. })
        ));

        // leading coefficient -1
        let (q, r) = p(&[1, 0, -1]).div_rem(&p(&[1, -1])).unwrap();
        assert_eq!(q, p(&[1, 1]));
        assert!(r.is_zero());

        assert!(p(&[1, 2]).div_rem(&p(&[1, 2])).is_err());
        assert!(p(&[1, 2]).div_rem(&QPolynomial::zero()).is_err());
    }

    #[test]
    fn q_integer_product_matches_schoolbook() {
        let base = p(&[3, -1, 0, 7, 2]);
        for n in 1..7 {
            let slow = &base * &QPolynomial::q_integer(n as i64).unwrap();
            assert_eq!(base.mul_q_integer(n), slow);
        }
    }

    #[test]
    fn display() {
        assert_eq!(p(&[1, 1, 1]).to_string(), "1 + q + q^2");
        assert_eq!(p(&[1, 1, 2, 1, 1]).to_string(), "1 + q + 2q^2 + q^3 + q^4");
        assert_eq!(p(&[0, -1, 0, 3]).to_string(), "-q + 3q^3");
        assert_eq!(QPolynomial::zero().to_string(), "0");
    }

    #[test]
    fn palindrome_and_value() {
        assert!(p(&[1, 2, 1]).is_palindromic());
        assert!(!p(&[1, 2]).is_palindromic());
        assert_eq!(p(&[1, 2, 1]).eval_at_one(), BigInt::from(4));
        assert!(p(&[1, -2]).to_biguints().is_err());
    }
}
