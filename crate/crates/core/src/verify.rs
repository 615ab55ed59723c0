//! Exact cross-check suite over a grid of box sizes.

use std::time::Instant;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::enumerate::{
    conditional_mean_check, enumerate_bpps, exact_moments_bruteforce, exact_moments_dp,
    sum_distribution, ExactMoments, DEFAULT_DP_BUDGET, DEFAULT_ENUM_CAP,
};
use crate::error::Result;
use crate::formulas;
use crate::genfunc::{moments_from_qpoly, q_macmahon, stanley_check};
use crate::partition::BoxDims;

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub cases: usize,
    pub failures: Vec<String>,
    pub seconds: f64,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn run_check(
    name: &'static str,
    cases: impl IntoIterator<Item = (String, Box<dyn Fn() -> Result<bool>>)>,
) -> CheckOutcome {
    let start = Instant::now();
    let mut n = 0;
    let mut failures = Vec::new();
    for (label, case) in cases {
        n += 1;
        match case() {
            Ok(true) => {}
            Ok(false) => failures.push(label),
            Err(e) => failures.push(format!("{label}: {e}")),
        }
    }
    CheckOutcome {
        name,
        cases: n,
        failures,
        seconds: start.elapsed().as_secs_f64(),
    }
}

/// Every box `a <= amax, b <= bmax, c <= cmax` with `a, b >= 1`, `c >= 0`.
pub fn grid(amax: usize, bmax: usize, cmax: u32) -> Vec<BoxDims> {
    let mut out = Vec::new();
    for a in 1..=amax {
        for b in 1..=bmax {
            for c in 0..=cmax {
                out.push(BoxDims { a, b, c });
            }
        }
    }
    out
}

fn matches_formulas(m: &ExactMoments) -> Result<bool> {
    Ok(*m == ExactMoments::from_formulas(m.dims)?)
}

/// Runs the exact suite on `dims_list`, plus the quadratic identity for
/// every `a, b` appearing in it.
pub fn run_suite(dims_list: &[BoxDims]) -> Vec<CheckOutcome> {
    type Case = (String, Box<dyn Fn() -> Result<bool>>);
    let per_dims = |f: fn(BoxDims) -> Result<bool>| -> Vec<Case> {
        dims_list
            .iter()
            .map(|&d| {
                (
                    d.to_string(),
                    Box::new(move || f(d)) as Box<dyn Fn() -> Result<bool>>,
                )
            })
            .collect()
    };

    let mut out =
        vec![
            run_check(
                "count = MacMahon",
                per_dims(|d| {
                    let n = enumerate_bpps(d, DEFAULT_ENUM_CAP)?.count();
                    Ok(BigInt::from(n) == formulas::macmahon_count(d)?.into())
                }),
            ),
            run_check(
                "brute-force moments = closed form",
                per_dims(|d| matches_formulas(&exact_moments_bruteforce(d, DEFAULT_ENUM_CAP)?)),
            ),
            run_check(
                "DP moments = closed form",
                per_dims(|d| matches_formulas(&exact_moments_dp(d, DEFAULT_DP_BUDGET)?)),
            ),
            run_check(
                "harmonicity of centered sums",
                per_dims(|d| {
                    for i in d.interior() {
                        if !conditional_mean_check(d, i, DEFAULT_ENUM_CAP)?.is_zero() {
                            return Ok(false);
                        }
                    }
                    Ok(true)
                }),
            ),
            run_check(
                "q-MacMahon = DP histogram",
                per_dims(|d| Ok(q_macmahon(d)? == sum_distribution(d, DEFAULT_DP_BUDGET)?)),
            ),
            run_check(
                "Var[S] = abc(a+b+c)/12",
                per_dims(|d| {
                    Ok(moments_from_qpoly(&q_macmahon(d)?)?.variance
                        == formulas::total_sum_variance(d))
                }),
            ),
            run_check(
                "ratio form = covariance",
                per_dims(|d| {
                    for i in d.diagonals() {
                        for j in d.diagonals() {
                            if formulas::covariance_ratio_form(d, i, j)?
                                != formulas::covariance_diagonal_sums(d, i, j)?
                            {
                                return Ok(false);
                            }
                        }
                    }
                    Ok(true)
                }),
            ),
        ];

    let mut ab: Vec<(usize, usize)> = dims_list.iter().map(|d| (d.a, d.b)).collect();
    ab.sort_unstable();
    ab.dedup();
    out.push(run_check(
        "quadratic sum identity",
        ab.iter()
            .map(|&(a, b)| {
                let case: Box<dyn Fn() -> Result<bool>> = Box::new(move || {
                    let (lhs, rhs) = formulas::quadratic_sum_identity(a as u64, b as u64);
                    Ok(formulas::int(lhs) == rhs)
                });
                (format!("a={a} b={b}"), case)
            })
            .collect::<Vec<_>>(),
    ));
    let mut stanley: Vec<(usize, usize, u32)> = dims_list.iter().map(|d| (d.a, d.b, d.c)).collect();
    stanley.sort_unstable();
    stanley.dedup();
    out.push(run_check(
        "diagonal generating function",
        stanley
            .iter()
            .map(|&(a, b, c)| {
                let case: Box<dyn Fn() -> Result<bool>> = Box::new(move || stanley_check(a, b, c));
                (format!("a={a} b={b} D={c}"), case)
            })
            .collect::<Vec<_>>(),
    ));
    out
}
