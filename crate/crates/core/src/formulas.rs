//! Closed-form means and covariances of the diagonal sums, evaluated exactly.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::partition::BoxDims;

/// Canonical `num/den` rational with arbitrary-precision parts.
pub type ExactRational = BigRational;

pub fn rat(num: i64, den: i64) -> ExactRational {
    BigRational::new(num.into(), den.into())
}

pub fn int(v: impl Into<BigInt>) -> ExactRational {
    BigRational::from_integer(v.into())
}

/// Always `num/den`, including integers (`4/1`).
pub fn rational_string(x: &ExactRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn parse_rational(s: &str) -> Result<ExactRational> {
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let n: BigInt = n
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
    let d: BigInt = d
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(BigRational::new(n, d))
}

/// `E[S_i]`: `(a+i)bc/(a+b)` for `i <= 0`, `(b-i)ac/(a+b)` for `i >= 0`.
pub fn mean_diagonal_sum(dims: BoxDims, i: i64) -> Result<ExactRational> {
    dims.check_index(i)?;
    let (a, b, c) = (dims.a as i64, dims.b as i64, i64::from(dims.c));
    let num = if i <= 0 {
        BigInt::from(a + i) * b * c
    } else {
        BigInt::from(b - i) * a * c
    };
    Ok(BigRational::new(num, BigInt::from(a + b)))
}

/// `abc(a+b+c) / ((a+b)^2 ((a+b)^2 - 1))`, the common factor of every covariance.
pub fn covariance_scale(dims: BoxDims) -> ExactRational {
    let (a, b, c) = (
        BigInt::from(dims.a),
        BigInt::from(dims.b),
        BigInt::from(dims.c),
    );
    let n = &a + &b;
    let n2 = &n * &n;
    let num = &a * &b * &c * (&n + &c);
    BigRational::new(num, &n2 * (&n2 - 1))
}

/// `Cov(S_i, S_j) = (a+i)(b-j) * abc(a+b+c)/((a+b)^2((a+b)^2-1))` with `i <= j`.
pub fn covariance_diagonal_sums(dims: BoxDims, i: i64, j: i64) -> Result<ExactRational> {
    dims.check_index(i)?;
    dims.check_index(j)?;
    let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
    let weight = BigInt::from(dims.a as i64 + lo) * BigInt::from(dims.b as i64 - hi);
    Ok(covariance_scale(dims) * int(weight))
}

/// `Var[S] = abc(a+b+c)/12` for the total sum.
pub fn total_sum_variance(dims: BoxDims) -> ExactRational {
    let (a, b, c) = (dims.a as u64, dims.b as u64, u64::from(dims.c));
    let num = BigInt::from(a) * b * c * (a + b + c);
    BigRational::new(num, 12.into())
}

/// Number of `a x b x c` boxed plane partitions.
///
/// The product over `k` telescopes, leaving `prod_{i,j} (i+j+c-1)/(i+j-1)`;
/// numerator and denominator are accumulated separately and the quotient
/// must be exact.
pub fn macmahon_count(dims: BoxDims) -> Result<BigUint> {
    let c = dims.c as u64;
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 1..=dims.a as u64 {
        for j in 1..=dims.b as u64 {
            num *= i + j + c - 1;
            den *= i + j - 1;
        }
    }
    let (q, r) = num.div_rem(&den);
    if !r.is_zero() {
        return Err(Error::Internal(format!(
            "MacMahon product for {dims} did not reduce to an integer"
        )));
    }
    Ok(q)
}

/// Both sides of
/// `2 sum_{-a<i<j<b} (a+i)(b-j) + sum_{-a<i<b} (a+i)(b-i) = (a+b)^2((a+b)^2-1)/12`.
/// The left side is a direct double sum.
pub fn quadratic_sum_identity(a: u64, b: u64) -> (BigInt, ExactRational) {
    let (a, b) = (a as i64, b as i64);
    let mut lhs = BigInt::zero();
    for i in (-a + 1)..b {
        lhs += BigInt::from(a + i) * (b - i);
        for j in (i + 1)..b {
            lhs += BigInt::from(2) * (a + i) * (b - j);
        }
    }
    let n2 = BigInt::from((a + b) * (a + b));
    let rhs = BigRational::new(&n2 * (&n2 - 1), 12.into());
    (lhs, rhs)
}

/// `(a+i)(b-j)/(a+b-1) * Var[S_{-a+1}]`; indices are swapped if `i > j`.
pub fn covariance_ratio_form(dims: BoxDims, i: i64, j: i64) -> Result<ExactRational> {
    dims.check_index(i)?;
    dims.check_index(j)?;
    let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
    let corner = dims.min_index() + 1;
    let var_corner = covariance_diagonal_sums(dims, corner, corner)?;
    let weight = BigRational::new(
        BigInt::from(dims.a as i64 + lo) * BigInt::from(dims.b as i64 - hi),
        BigInt::from(dims.a + dims.b - 1),
    );
    Ok(weight * var_corner)
}

/// Closed-form mean vector over every slot `[-a, b]`.
pub fn mean_vector(dims: BoxDims) -> Vec<ExactRational> {
    dims.diagonals()
        .map(|i| mean_diagonal_sum(dims, i).expect("in range"))
        .collect()
}

/// Closed-form covariance matrix over every slot pair.
pub fn covariance_matrix(dims: BoxDims) -> Vec<Vec<ExactRational>> {
    dims.diagonals()
        .map(|i| {
            dims.diagonals()
                .map(|j| covariance_diagonal_sums(dims, i, j).expect("in range"))
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(a: usize, b: usize, c: u32) -> BoxDims {
        BoxDims::new(a, b, c).unwrap()
    }

    #[test]
    fn mean_examples() {
        assert_eq!(mean_diagonal_sum(d(1, 1, 5), 0).unwrap(), rat(5, 2));
        assert_eq!(mean_diagonal_sum(d(2, 1, 1), -1).unwrap(), rat(1, 3));
        assert_eq!(mean_diagonal_sum(d(4, 5, 6), 0).unwrap(), rat(40, 3));
        assert_eq!(mean_diagonal_sum(d(4, 5, 6), -4).unwrap(), rat(0, 1));
        assert_eq!(mean_diagonal_sum(d(4, 5, 6), 5).unwrap(), rat(0, 1));
    }

    #[test]
    fn out_of_range_index_is_error() {
        assert!(matches!(
            mean_diagonal_sum(d(2, 3, 1), -3),
            Err(Error::IndexOutOfRange {
                index: -3,
                lo: -2,
                hi: 3
            })
        ));
        assert!(covariance_diagonal_sums(d(2, 3, 1), 0, 4).is_err());
        assert!(covariance_ratio_form(d(2, 3, 1), 7, 0).is_err());
    }

    #[test]
    fn covariance_examples() {
        for c in 0..8 {
            let c64 = c as i64;
            assert_eq!(
                covariance_diagonal_sums(d(1, 1, c), 0, 0).unwrap(),
                rat(c64 * (c64 + 2), 12)
            );
        }
        assert_eq!(
            covariance_diagonal_sums(d(2, 1, 1), -1, 0).unwrap(),
            rat(1, 9)
        );
        assert_eq!(
            covariance_diagonal_sums(d(2, 2, 2), 0, 0).unwrap(),
            rat(4, 5)
        );
        assert_eq!(
            covariance_diagonal_sums(d(4, 5, 6), 0, 1).unwrap(),
            rat(40, 9)
        );
    }

    #[test]
    fn total_variance_examples() {
        assert_eq!(total_sum_variance(d(1, 1, 1)), rat(1, 4));
        assert_eq!(total_sum_variance(d(2, 2, 2)), rat(4, 1));
        assert_eq!(total_sum_variance(d(4, 5, 6)), rat(150, 1));
    }

    #[test]
    fn macmahon_examples() {
        for c in 0..10u32 {
            assert_eq!(macmahon_count(d(1, 1, c)).unwrap(), BigUint::from(c + 1));
        }
        assert_eq!(macmahon_count(d(2, 2, 1)).unwrap(), BigUint::from(6u32));
        assert_eq!(macmahon_count(d(2, 2, 2)).unwrap(), BigUint::from(20u32));
        assert_eq!(macmahon_count(d(3, 3, 0)).unwrap(), BigUint::from(1u32));
    }

    #[test]
    fn quadratic_identity_examples() {
        assert_eq!(quadratic_sum_identity(1, 1), (1.into(), rat(1, 1)));
        assert_eq!(quadratic_sum_identity(2, 1), (6.into(), rat(6, 1)));
        assert_eq!(quadratic_sum_identity(2, 2), (20.into(), rat(20, 1)));
    }

    #[test]
    fn ratio_form_examples() {
        assert_eq!(
            covariance_ratio_form(d(2, 2, 2), -1, -1).unwrap(),
            rat(3, 5)
        );
        assert_eq!(covariance_ratio_form(d(2, 2, 2), -1, 1).unwrap(), rat(1, 5));
        assert_eq!(covariance_ratio_form(d(2, 1, 1), -1, 0).unwrap(), rat(1, 9));
    }

    #[test]
    fn rational_strings() {
        assert_eq!(rational_string(&rat(8, 10)), "4/5");
        assert_eq!(rational_string(&rat(4, 1)), "4/1");
        assert_eq!(parse_rational("4/5").unwrap(), rat(4, 5));
        assert_eq!(parse_rational("-3").unwrap(), rat(-3, 1));
        assert!(parse_rational("1/0").is_err());
    }
}
