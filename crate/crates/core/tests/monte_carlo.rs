use bpp::formulas::{covariance_diagonal_sums, mean_diagonal_sum};
use bpp::sample::{cftp_sample, derive_seed};
use bpp::stats::{monte_carlo_moments, MomentEstimate, SamplerKind};
use bpp::BoxDims;
use num_traits::ToPrimitive;

fn max_error(est: &MomentEstimate) -> f64 {
    let d = est.dims;
    let mut worst = 0.0f64;
    for k in 0..est.mean.len() {
        let i = est.index(k);
        let mu = mean_diagonal_sum(d, i).unwrap().to_f64().unwrap();
        worst = worst.max((est.mean[k] - mu).abs());
        for l in 0..est.mean.len() {
            let c = covariance_diagonal_sums(d, i, est.index(l))
                .unwrap()
                .to_f64()
                .unwrap();
            worst = worst.max((est.cov[k][l] - c).abs());
        }
    }
    worst
}

#[test]
fn estimates_tighten_with_more_samples() {
    let d = BoxDims::new(3, 3, 3).unwrap();
    let small = monte_carlo_moments(d, 1_000, 5, SamplerKind::Cftp).unwrap();
    let large = monte_carlo_moments(d, 100_000, 5, SamplerKind::Cftp).unwrap();
    // errors scale like n^{-1/2}: a factor of 10 in expectation
    assert!(max_error(&large) < max_error(&small) / 3.0);
    for k in 0..small.mean.len() {
        let ratio = small.mean_se[k] / large.mean_se[k];
        assert!((7.0..14.0).contains(&ratio), "mean se ratio {ratio}");
        for l in 0..small.mean.len() {
            let ratio = small.cov_se[k][l] / large.cov_se[k][l];
            assert!((6.0..16.0).contains(&ratio), "cov se ratio {ratio}");
        }
    }
}

#[test]
fn single_cell_is_uniform() {
    let d = BoxDims::new(1, 1, 9).unwrap();
    let n = 100_000u64;
    let mut counts = [0u64; 10];
    for k in 0..n {
        counts[cftp_sample(d, derive_seed(3, k)).unwrap().get(1, 1) as usize] += 1;
    }
    let p = 0.1;
    let sd = (n as f64 * p * (1.0 - p)).sqrt();
    for (v, &c) in counts.iter().enumerate() {
        let z = (c as f64 - n as f64 * p) / sd;
        assert!(z.abs() < 5.0, "value {v}: count {c}, z {z:.2}");
    }
}
