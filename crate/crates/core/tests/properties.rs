use bpp::enumerate::{enumerate_bpps, DEFAULT_ENUM_CAP};
use bpp::formulas::{
    covariance_diagonal_sums, int, mean_diagonal_sum, rat, total_sum_variance, ExactRational,
};
use bpp::sample::heat_bath_step;
use bpp::{BoxDims, PlanePartition};
use nalgebra::DMatrix;
use num_traits::{ToPrimitive, Zero};
use proptest::prelude::*;

fn dims(a: usize, b: usize, c: u32) -> BoxDims {
    BoxDims::new(a, b, c).unwrap()
}

/// Any matrix pushed through running minima along rows and columns is a
/// valid partition, and every valid partition is reachable this way.
fn arb_partition(max_a: usize, max_b: usize, max_c: u32) -> impl Strategy<Value = PlanePartition> {
    (1..=max_a, 1..=max_b, 0..=max_c).prop_flat_map(|(a, b, c)| arb_in(dims(a, b, c)))
}

fn arb_in(d: BoxDims) -> impl Strategy<Value = PlanePartition> {
    let (a, b) = (d.a, d.b);
    prop::collection::vec(0..=i64::from(d.c), a * b).prop_map(move |raw| {
        let mut rows = vec![vec![0i64; b]; a];
        for r in 0..a {
            for j in 0..b {
                let mut v = raw[r * b + j];
                if r > 0 {
                    v = v.min(rows[r - 1][j]);
                }
                if j > 0 {
                    v = v.min(rows[r][j - 1]);
                }
                rows[r][j] = v;
            }
        }
        PlanePartition::validate(&rows, d).unwrap()
    })
}

fn meet_join(x: &PlanePartition, y: &PlanePartition) -> (PlanePartition, PlanePartition) {
    let d = x.dims();
    let lo: Vec<Vec<i64>> = x
        .to_rows()
        .iter()
        .zip(y.to_rows())
        .map(|(p, q)| p.iter().zip(q).map(|(&u, v)| u.min(v)).collect())
        .collect();
    let hi: Vec<Vec<i64>> = x
        .to_rows()
        .iter()
        .zip(y.to_rows())
        .map(|(p, q)| p.iter().zip(q).map(|(&u, v)| u.max(v)).collect())
        .collect();
    (
        PlanePartition::validate(&lo, d).unwrap(),
        PlanePartition::validate(&hi, d).unwrap(),
    )
}

proptest! {
    #[test]
    fn diagonal_sums_add_up(p in arb_partition(6, 6, 8)) {
        let s = p.diagonal_sums();
        prop_assert_eq!(s.total(), p.total());
        let d = p.dims();
        prop_assert_eq!(s.get(d.min_index()), 0);
        prop_assert_eq!(s.get(d.max_index()), 0);
        for i in d.diagonals() {
            prop_assert!(s.get(i) <= u64::from(d.c) * d.diag_len(i) as u64);
        }
    }

    #[test]
    fn contours_decompose_sums(p in arb_partition(6, 6, 8)) {
        let h = p.contour_heights();
        let s = p.diagonal_sums();
        let d = p.dims();
        prop_assert!(h.is_noncrossing());
        for i in d.diagonals() {
            let total: usize = (1..=d.c as usize).map(|k| h.get(k, i)).sum();
            prop_assert_eq!(total as u64, s.get(i));
            for k in 1..=d.c as usize {
                prop_assert!(h.get(k, i) <= d.diag_len(i));
            }
        }
    }

    #[test]
    fn centered_sums_complete_the_mean(p in arb_partition(5, 5, 6)) {
        let d = p.dims();
        let s = p.diagonal_sums();
        let y = s.centered();
        prop_assert!(y.get(d.min_index()).is_zero());
        prop_assert!(y.get(d.max_index()).is_zero());
        for i in d.diagonals() {
            prop_assert_eq!(
                y.get(i) + int(s.get(i)),
                mean_diagonal_sum(d, i).unwrap()
            );
        }
    }

    #[test]
    fn symmetries_are_involutions(p in arb_partition(6, 6, 8)) {
        let t = p.transpose();
        let k = p.complement();
        prop_assert!(t.is_valid() && k.is_valid());
        prop_assert_eq!(t.transpose(), p.clone());
        prop_assert_eq!(k.complement(), p);
    }

    #[test]
    fn heat_bath_keeps_validity(
        p in arb_partition(5, 5, 6),
        site in (0usize..25, 0usize..25),
        u in 0.0f64..1.0,
    ) {
        let d = p.dims();
        let site = (site.0 % d.a + 1, site.1 % d.b + 1);
        let q = heat_bath_step(&p, site, u);
        prop_assert!(q.is_valid());
        for r in 1..=d.a {
            for j in 1..=d.b {
                if (r, j) != site {
                    prop_assert_eq!(p.get(r, j), q.get(r, j));
                }
            }
        }
    }

    #[test]
    fn heat_bath_is_monotone(
        x in arb_in(dims(3, 3, 3)),
        y in arb_in(dims(3, 3, 3)),
        u in 0.0f64..1.0,
    ) {
        let (lo, hi) = meet_join(&x, &y);
        for r in 1..=3 {
            for j in 1..=3 {
                for step in (0..100).map(|k| k as f64 / 100.0).chain([u]) {
                    let a = heat_bath_step(&lo, (r, j), step);
                    let b = heat_bath_step(&hi, (r, j), step);
                    prop_assert!(a.dominated_by(&b).unwrap());
                }
            }
        }
    }

    #[test]
    fn text_and_json_round_trip(p in arb_partition(5, 5, 9)) {
        let text = bpp::io::to_text(&p);
        let json = bpp::io::to_json(&p);
        prop_assert_eq!(bpp::io::from_text(&text).unwrap(), p.clone());
        prop_assert_eq!(bpp::io::from_json(&json).unwrap(), p);
    }
}

#[test]
fn symmetry_laws_on_enumerated_boxes() {
    for a in 1..=3 {
        for b in 1..=3 {
            for c in 0..=3 {
                let d = dims(a, b, c);
                for p in enumerate_bpps(d, DEFAULT_ENUM_CAP).unwrap() {
                    let s = p.diagonal_sums();
                    let t = p.transpose();
                    assert_eq!(t.transpose(), p);
                    let st = t.diagonal_sums();
                    for i in d.diagonals() {
                        assert_eq!(st.get(-i), s.get(i));
                    }
                    let k = p.complement();
                    assert_eq!(k.complement(), p);
                    let sk = k.diagonal_sums();
                    let shift = b as i64 - a as i64;
                    for i in d.diagonals() {
                        let full = u64::from(c) * d.diag_len(i) as u64;
                        assert_eq!(sk.get(shift - i), full - s.get(i), "{d} i={i}");
                    }
                }
            }
        }
    }
}

#[test]
fn covariance_is_symmetric_and_vanishes_at_ends() {
    for a in 1..=6 {
        for b in 1..=6 {
            for c in 0..=6 {
                let d = dims(a, b, c);
                for i in d.diagonals() {
                    assert_eq!(
                        mean_diagonal_sum(d, i).unwrap(),
                        mean_diagonal_sum(d.transposed(), -i).unwrap()
                    );
                    for j in d.diagonals() {
                        let cij = covariance_diagonal_sums(d, i, j).unwrap();
                        assert_eq!(cij, covariance_diagonal_sums(d, j, i).unwrap());
                        assert_eq!(
                            cij,
                            covariance_diagonal_sums(d.transposed(), -j, -i).unwrap()
                        );
                    }
                    assert!(covariance_diagonal_sums(d, d.min_index(), i)
                        .unwrap()
                        .is_zero());
                    assert!(covariance_diagonal_sums(d, i, d.max_index())
                        .unwrap()
                        .is_zero());
                }
                assert!(mean_diagonal_sum(d, d.min_index()).unwrap().is_zero());
                assert!(mean_diagonal_sum(d, d.max_index()).unwrap().is_zero());
            }
        }
    }
}

#[test]
fn mean_vector_sums_to_half_the_box() {
    for a in 1..=10 {
        for b in 1..=10 {
            for c in 0..=10u32 {
                let d = dims(a, b, c);
                let total: ExactRational = d
                    .diagonals()
                    .map(|i| mean_diagonal_sum(d, i).unwrap())
                    .sum();
                assert_eq!(total, rat((a * b) as i64 * i64::from(c), 2), "{d}");
            }
        }
    }
}

#[test]
fn covariances_sum_to_total_variance() {
    for a in 1..=8 {
        for b in 1..=8 {
            for c in 0..=8 {
                let d = dims(a, b, c);
                let mut total = ExactRational::zero();
                for i in d.diagonals() {
                    for j in d.diagonals() {
                        total += covariance_diagonal_sums(d, i, j).unwrap();
                    }
                }
                assert_eq!(total, total_sum_variance(d), "{d}");
            }
        }
    }
}

#[test]
fn covariance_matrix_is_positive_semidefinite() {
    for a in 1..=8 {
        for b in 1..=8 {
            for c in 1..=8 {
                let d = dims(a, b, c);
                let idx: Vec<i64> = d.interior().collect();
                let n = idx.len();
                let cov = |i, j| covariance_diagonal_sums(d, i, j).unwrap().to_f64().unwrap();
                let m = DMatrix::from_fn(n, n, |k, l| {
                    cov(idx[k], idx[l]) / (cov(idx[k], idx[k]) * cov(idx[l], idx[l])).sqrt()
                });
                let min_eig = m.symmetric_eigenvalues().min();
                assert!(min_eig >= -1e-9, "{d}: {min_eig}");
            }
        }
    }
}
