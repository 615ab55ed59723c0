//! Generating functions: the q-MacMahon product for the total sum and the
//! multivariate `a x b x infinity` product over diagonal variables.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::enumerate::{self, DEFAULT_ENUM_CAP};
use crate::error::{Error, Result};
use crate::formulas::ExactRational;
use crate::partition::BoxDims;
use crate::qpoly::QPolynomial;

pub const DEFAULT_DEGREE_CAP: u64 = 20_000;
pub const DEFAULT_STANLEY_BUDGET: u64 = 1_000_000;

pub fn q_integer(n: i64) -> Result<QPolynomial> {
    QPolynomial::q_integer(n)
}

/// `prod_{i,j,k} (i+j+k-1)_q / (i+j+k-2)_q`, the generating function of the
/// total sum. Requires `abc <= DEFAULT_DEGREE_CAP`.
pub fn q_macmahon(dims: BoxDims) -> Result<QPolynomial> {
    q_macmahon_with_cap(dims, DEFAULT_DEGREE_CAP)
}

pub fn q_macmahon_with_cap(dims: BoxDims, degree_cap: u64) -> Result<QPolynomial> {
    let degree = dims.a as u64 * dims.b as u64 * u64::from(dims.c);
    if degree > degree_cap {
        return Err(Error::CapExceeded {
            predicted: degree.into(),
            cap: degree_cap,
        });
    }
    let mut numer = Vec::with_capacity(degree as usize);
    let mut denom = Vec::with_capacity(degree as usize);
    for i in 1..=dims.a as i64 {
        for j in 1..=dims.b as i64 {
            for k in 1..=i64::from(dims.c) {
                numer.push(i + j + k - 1);
                denom.push(i + j + k - 2);
            }
        }
    }
    let mut poly = QPolynomial::one();
    for &n in &numer {
        poly = poly.mul_q_integer(n as usize);
    }
    // Largest divisors first keeps the intermediate degree falling fastest.
    denom.sort_unstable_by(|x, y| y.cmp(x));
    for &n in &denom {
        if n > 1 {
            poly = poly.div_exact(&QPolynomial::q_integer(n)?)?;
        }
    }
    debug_assert_eq!(poly.degree(), Some(degree as usize));
    Ok(poly)
}

/// Histogram moments of a polynomial read as `coefficient of q^k = weight of k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMoments {
    pub count: BigUint,
    pub mean: ExactRational,
    pub variance: ExactRational,
}

pub fn moments_from_qpoly(poly: &QPolynomial) -> Result<QMoments> {
    if poly.is_zero() {
        return Err(Error::Domain("zero polynomial has no moments".into()));
    }
    let weights = poly.to_biguints()?;
    let mut count = BigUint::zero();
    let mut first = BigUint::zero();
    let mut second = BigUint::zero();
    for (k, w) in weights.iter().enumerate() {
        let k = BigUint::from(k);
        count += w;
        first += &k * w;
        second += &k * &k * w;
    }
    let n = BigInt::from(count.clone());
    let mean = BigRational::new(first.into(), n.clone());
    let variance = BigRational::new(second.into(), n) - &mean * &mean;
    Ok(QMoments {
        count,
        mean,
        variance,
    })
}

/// Truncated coefficients of `prod_{-a<i<=0<=j<b} 1/(1 - x_i ... x_j)`.
///
/// Keys are exponent vectors over the interior diagonals `-a+1 ..= b-1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiMonomialTable {
    pub a: usize,
    pub b: usize,
    pub max_degree: u32,
    pub coeffs: BTreeMap<Vec<u32>, BigUint>,
}

#[derive(Serialize)]
struct MonomialEntry<'a> {
    exponents: &'a [u32],
    count: String,
}

impl MultiMonomialTable {
    /// Coefficient of the monomial with the given exponent vector (zero if absent).
    pub fn coefficient(&self, exponents: &[u32]) -> BigUint {
        self.coeffs.get(exponents).cloned().unwrap_or_default()
    }

    /// JSON list of `{"exponents":[..],"count":".."}`, keys in lexicographic order.
    pub fn to_json(&self) -> String {
        let entries: Vec<MonomialEntry> = self
            .coeffs
            .iter()
            .map(|(k, v)| MonomialEntry {
                exponents: k,
                count: v.to_string(),
            })
            .collect();
        serde_json::to_string(&entries).expect("serializable")
    }
}

pub fn stanley_coefficients(a: usize, b: usize, max_degree: u32) -> Result<MultiMonomialTable> {
    stanley_coefficients_with_budget(a, b, max_degree, DEFAULT_STANLEY_BUDGET)
}

pub fn stanley_coefficients_with_budget(
    a: usize,
    b: usize,
    max_degree: u32,
    budget: u64,
) -> Result<MultiMonomialTable> {
    BoxDims::new(a, b, 0)?;
    let needed = a as u128 * b as u128 * u128::from(max_degree);
    if needed > u128::from(budget) {
        return Err(Error::BudgetExceeded {
            what: "a*b*max_degree",
            needed,
            budget: budget.into(),
        });
    }
    let width = a + b - 1;
    let max = max_degree as usize;
    let mut table: BTreeMap<Vec<u32>, BigUint> = BTreeMap::new();
    table.insert(vec![0; width], BigUint::one());
    // Factor (i, j) is the run of positions i+a-1 ..= j+a-1.
    for i in (1 - a as i64)..=0 {
        for j in 0..b as i64 {
            let lo = (i + a as i64 - 1) as usize;
            let hi = (j + a as i64 - 1) as usize;
            let step = hi - lo + 1;
            let mut next: BTreeMap<Vec<u32>, BigUint> = BTreeMap::new();
            for (key, coeff) in &table {
                let mut deg: usize = key.iter().map(|&e| e as usize).sum();
                let mut k = key.clone();
                loop {
                    *next.entry(k.clone()).or_default() += coeff;
                    deg += step;
                    if deg > max {
                        break;
                    }
                    for e in &mut k[lo..=hi] {
                        *e += 1;
                    }
                }
                if next.len() as u128 > u128::from(budget) {
                    return Err(Error::BudgetExceeded {
                        what: "monomial table size",
                        needed: next.len() as u128,
                        budget: budget.into(),
                    });
                }
            }
            table = next;
        }
    }
    Ok(MultiMonomialTable {
        a,
        b,
        max_degree,
        coeffs: table,
    })
}

/// Compares the truncated product expansion against a census of `a x b`
/// partitions with entries `<= max_degree`, grouped by diagonal-sum vector,
/// restricted to total `<= max_degree`.
pub fn stanley_check(a: usize, b: usize, max_degree: u32) -> Result<bool> {
    let table = stanley_coefficients(a, b, max_degree)?;
    let dims = BoxDims::new(a, b, max_degree)?;
    let mut census: BTreeMap<Vec<u32>, BigUint> = BTreeMap::new();
    for p in enumerate::enumerate_bpps(dims, DEFAULT_ENUM_CAP)? {
        let s = p.diagonal_sums();
        if s.total() <= u64::from(max_degree) {
            let key = s.interior().iter().map(|&v| v as u32).collect();
            *census.entry(key).or_default() += 1u32;
        }
    }
    Ok(census == table.coeffs)
}
