//! Monte Carlo estimates of diagonal-sum moments and their comparison with
//! the closed forms.
//!
//! Sample `k` always uses `derive_seed(seed, k)`, and samples are reduced in
//! index order, so results do not depend on how many workers drew them.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::enumerate::enumerate_bpps;
use crate::error::{Error, Result};
use crate::formulas::{self, rational_string, ExactRational};
use crate::partition::{BoxDims, PlanePartition};
use crate::sample::{cftp_sample, derive_seed, mcmc_chain, ChainStart};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamplerKind {
    Cftp,
    /// Heat-bath chain from the bottom state.
    Mcmc {
        sweeps: u64,
    },
}

impl SamplerKind {
    pub fn name(&self) -> &'static str {
        match self {
            SamplerKind::Cftp => "cftp",
            SamplerKind::Mcmc { .. } => "mcmc",
        }
    }

    pub fn draw(&self, dims: BoxDims, seed: u64) -> Result<PlanePartition> {
        match *self {
            SamplerKind::Cftp => cftp_sample(dims, seed),
            SamplerKind::Mcmc { sweeps } => mcmc_chain(dims, seed, sweeps, ChainStart::Bottom),
        }
    }
}

/// Sample moments over interior diagonals `-a+1 ..= b-1`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentEstimate {
    pub dims: BoxDims,
    pub n: u64,
    pub seed: u64,
    pub sampler: SamplerKind,
    pub mean: Vec<f64>,
    pub mean_se: Vec<f64>,
    /// Unbiased (`n - 1`) sample covariance.
    pub cov: Vec<Vec<f64>>,
    /// Delta-method standard error of each covariance entry.
    pub cov_se: Vec<Vec<f64>>,
}

impl MomentEstimate {
    /// Diagonal index of position `k` in the vectors.
    pub fn index(&self, k: usize) -> i64 {
        self.dims.min_index() + 1 + k as i64
    }

    /// Moment estimates from already-drawn interior diagonal-sum vectors.
    pub fn from_samples(
        dims: BoxDims,
        seed: u64,
        sampler: SamplerKind,
        samples: &[Vec<u64>],
    ) -> Result<Self> {
        let n = samples.len();
        if n < 2 {
            return Err(Error::Domain(format!("need at least 2 samples, got {n}")));
        }
        let width = dims.a + dims.b - 1;
        let nf = n as f64;
        let mut mean = vec![0.0; width];
        for s in samples {
            for (m, &v) in mean.iter_mut().zip(s) {
                *m += v as f64;
            }
        }
        mean.iter_mut().for_each(|m| *m /= nf);

        let centered: Vec<Vec<f64>> = samples
            .iter()
            .map(|s| s.iter().zip(&mean).map(|(&v, m)| v as f64 - m).collect())
            .collect();
        let mut m11 = vec![vec![0.0; width]; width];
        let mut m22 = vec![vec![0.0; width]; width];
        for x in &centered {
            for k in 0..width {
                for l in k..width {
                    let p = x[k] * x[l];
                    m11[k][l] += p;
                    m22[k][l] += p * p;
                }
            }
        }
        let mut cov = vec![vec![0.0; width]; width];
        let mut cov_se = vec![vec![0.0; width]; width];
        for k in 0..width {
            for l in k..width {
                let biased = m11[k][l] / nf;
                let var_of_product = (m22[k][l] / nf - biased * biased).max(0.0);
                let c = m11[k][l] / (nf - 1.0);
                let se = (var_of_product / nf).sqrt();
                cov[k][l] = c;
                cov[l][k] = c;
                cov_se[k][l] = se;
                cov_se[l][k] = se;
            }
        }
        let mean_se = (0..width).map(|k| (cov[k][k] / nf).sqrt()).collect();
        Ok(MomentEstimate {
            dims,
            n: n as u64,
            seed,
            sampler,
            mean,
            mean_se,
            cov,
            cov_se,
        })
    }
}

fn draw_sums(dims: BoxDims, n: u64, seed: u64, sampler: SamplerKind) -> Result<Vec<Vec<u64>>> {
    (0..n)
        .into_par_iter()
        .map(|k| {
            let p = sampler.draw(dims, derive_seed(seed, k))?;
            Ok(p.diagonal_sums().interior().to_vec())
        })
        .collect()
}

pub fn monte_carlo_moments(
    dims: BoxDims,
    n: u64,
    seed: u64,
    sampler: SamplerKind,
) -> Result<MomentEstimate> {
    if n < 2 {
        return Err(Error::Domain(format!("need at least 2 samples, got {n}")));
    }
    let samples = draw_sums(dims, n, seed, sampler)?;
    MomentEstimate::from_samples(dims, seed, sampler, &samples)
}

#[derive(Debug, Clone, Serialize)]
pub struct MeanEntry {
    pub i: i64,
    pub est: f64,
    pub se: f64,
    pub formula: String,
    pub z: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CovEntry {
    pub i: i64,
    pub j: i64,
    pub est: f64,
    pub se: f64,
    pub formula: String,
    pub z: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DimsJson {
    pub a: usize,
    pub b: usize,
    pub c: u32,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComparisonReport {
    pub dims: DimsJson,
    pub n: u64,
    pub seed: u64,
    pub sampler: &'static str,
    pub threshold: f64,
    pub means: Vec<MeanEntry>,
    pub cov: Vec<CovEntry>,
    pub pass: bool,
}

impl ComparisonReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    /// Human-readable names of every entry with `|z|` above the threshold.
    pub fn flagged(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .means
            .iter()
            .filter(|e| e.z.is_nan() || e.z.abs() > self.threshold)
            .map(|e| format!("mean[{}] z={:.3}", e.i, e.z))
            .collect();
        out.extend(
            self.cov
                .iter()
                .filter(|e| e.z.is_nan() || e.z.abs() > self.threshold)
                .map(|e| format!("cov[{}][{}] z={:.3}", e.i, e.j, e.z)),
        );
        out
    }

    pub fn max_abs_z(&self) -> f64 {
        self.means
            .iter()
            .map(|e| e.z.abs())
            .chain(self.cov.iter().map(|e| e.z.abs()))
            .fold(0.0, f64::max)
    }
}

pub const DEFAULT_Z_THRESHOLD: f64 = 4.0;

fn to_f64(x: &ExactRational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

fn z_score(est: f64, se: f64, target: f64) -> f64 {
    let diff = est - target;
    if se > 0.0 {
        diff / se
    } else if diff == 0.0 {
        0.0
    } else {
        diff.signum() * f64::INFINITY
    }
}

/// z-scores of every mean and upper-triangle covariance entry against the
/// closed forms; passes iff every `|z| <= threshold`.
pub fn compare_to_formula(est: &MomentEstimate, threshold: f64) -> ComparisonReport {
    let dims = est.dims;
    let width = est.mean.len();
    let means = (0..width)
        .map(|k| {
            let i = est.index(k);
            let f = formulas::mean_diagonal_sum(dims, i).expect("interior index");
            MeanEntry {
                i,
                est: est.mean[k],
                se: est.mean_se[k],
                formula: rational_string(&f),
                z: z_score(est.mean[k], est.mean_se[k], to_f64(&f)),
            }
        })
        .collect();
    let mut cov = Vec::new();
    for k in 0..width {
        for l in k..width {
            let (i, j) = (est.index(k), est.index(l));
            let f = formulas::covariance_diagonal_sums(dims, i, j).expect("interior index");
            cov.push(CovEntry {
                i,
                j,
                est: est.cov[k][l],
                se: est.cov_se[k][l],
                formula: rational_string(&f),
                z: z_score(est.cov[k][l], est.cov_se[k][l], to_f64(&f)),
            });
        }
    }
    let mut report = ComparisonReport {
        dims: DimsJson {
            a: dims.a,
            b: dims.b,
            c: dims.c,
        },
        n: est.n,
        seed: est.seed,
        sampler: est.sampler.name(),
        threshold,
        means,
        cov,
        pass: false,
    };
    report.pass = report.flagged().is_empty();
    report
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChiSquareResult {
    pub statistic: f64,
    pub dof: u64,
    /// Critical value at significance 0.001.
    pub critical: f64,
    pub pass: bool,
}

pub const CHI_SQUARE_STATE_CAP: u64 = 10_000;
pub const CHI_SQUARE_ALPHA: f64 = 0.001;

/// Pearson goodness of fit of `n` CFTP samples against the uniform law.
pub fn chi_square_uniformity(dims: BoxDims, n: u64, seed: u64) -> Result<ChiSquareResult> {
    chi_square_uniformity_with(dims, n, seed, SamplerKind::Cftp)
}

pub fn chi_square_uniformity_with(
    dims: BoxDims,
    n: u64,
    seed: u64,
    sampler: SamplerKind,
) -> Result<ChiSquareResult> {
    let states: HashMap<Vec<u32>, usize> = enumerate_bpps(dims, CHI_SQUARE_STATE_CAP)?
        .enumerate()
        .map(|(k, p)| (p.as_slice().to_vec(), k))
        .collect();
    let draws: Vec<usize> = (0..n)
        .into_par_iter()
        .map(|k| {
            let p = sampler.draw(dims, derive_seed(seed, k))?;
            states
                .get(p.as_slice())
                .copied()
                .ok_or_else(|| Error::Internal("sampler produced an unknown state".into()))
        })
        .collect::<Result<_>>()?;
    let mut counts = vec![0u64; states.len()];
    for k in draws {
        counts[k] += 1;
    }
    Ok(pearson_uniform(&counts))
}

/// Pearson statistic of `counts` against equal cell probabilities.
pub fn pearson_uniform(counts: &[u64]) -> ChiSquareResult {
    let total: u64 = counts.iter().sum();
    let dof = counts.len().saturating_sub(1) as u64;
    if dof == 0 || total == 0 {
        return ChiSquareResult {
            statistic: 0.0,
            dof,
            critical: 0.0,
            pass: true,
        };
    }
    let expected = total as f64 / counts.len() as f64;
    let statistic = counts
        .iter()
        .map(|&o| {
            let d = o as f64 - expected;
            d * d / expected
        })
        .sum();
    let critical = chi_square_critical(dof, CHI_SQUARE_ALPHA);
    ChiSquareResult {
        statistic,
        dof,
        critical,
        pass: statistic < critical,
    }
}

/// Upper-tail critical value of the chi-square distribution.
pub fn chi_square_critical(dof: u64, alpha: f64) -> f64 {
    ChiSquared::new(dof as f64)
        .expect("positive dof")
        .inverse_cdf(1.0 - alpha)
}
