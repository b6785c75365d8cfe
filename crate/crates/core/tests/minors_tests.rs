mod common;

use hmpid::hankel::{hankel_block, numerical_rank};
use hmpid::hmp_model::{random_stochastic, vandermonde_example};
use hmpid::minors::{max_abs_minor, minor_membership};
use hmpid::ToleranceConfig;
use nalgebra::DMatrix;

#[test]
fn elimination_minors_match_cofactor_oracle() {
    let dist = random_stochastic(3, 17).full_distribution(4).unwrap();
    let block = hankel_block(&dist, 2, 1).unwrap().data;
    for k in 1..=3 {
        let mut best = 0.0f64;
        let rows = block.nrows();
        for mask in 0u32..(1 << rows) {
            if mask.count_ones() as usize != k {
                continue;
            }
            let picked: Vec<usize> = (0..rows).filter(|r| mask & (1 << r) != 0).collect();
            for cmask in 0u32..(1 << block.ncols()) {
                if cmask.count_ones() as usize != k {
                    continue;
                }
                let cols: Vec<usize> = (0..block.ncols()).filter(|c| cmask & (1 << c) != 0).collect();
                let sub = DMatrix::from_fn(k, k, |i, j| block[(picked[i], cols[j])]);
                best = best.max(common::det_cofactor(&sub).abs());
            }
        }
        assert!((max_abs_minor(&block, k) - best).abs() <= 1e-15 * best.max(1.0));
    }
}

#[test]
fn fair_coin_is_a_rank_one_member() {
    let r = minor_membership(&common::fair_coin(3), 1, 1e-9).unwrap();
    assert_eq!(r.big_counts, [63, 63]);
    assert!(r.max_big_minor <= 1e-12);
    assert!((r.max_small_minor - 1.0).abs() < 1e-15);
    assert!(r.is_member());
}

#[test]
fn vandermonde_is_a_rank_two_member() {
    let dist = vandermonde_example(&[0.25, 0.75]).unwrap().full_distribution(3).unwrap();
    let r = minor_membership(&dist, 2, 1e-9).unwrap();
    assert_eq!(r.big_counts, [35, 35]);
    assert_eq!(r.small_count, 9);
    assert!(r.all_big_minors_vanish && r.some_small_minor_nonzero && r.confident);
    assert!(r.max_big_minor <= 1e-15);
    let r1 = minor_membership(&dist, 1, 1e-9).unwrap();
    assert!(!r1.all_big_minors_vanish);
}

#[test]
fn perturbed_table_has_nonvanishing_big_minors() {
    let r = minor_membership(&common::perturbed_rank3(), 2, 1e-9).unwrap();
    assert!(!r.all_big_minors_vanish);
    assert!(r.max_big_minor > 1e-6);
}

#[test]
fn minor_magnitudes_ignore_state_labels() {
    let p = random_stochastic(2, 8);
    let q = p.permute_states(&[1, 0]).unwrap();
    let a = minor_membership(&p.full_distribution(3).unwrap(), 1, 1e-9).unwrap();
    let b = minor_membership(&q.full_distribution(3).unwrap(), 1, 1e-9).unwrap();
    assert!((a.max_big_minor - b.max_big_minor).abs() < 1e-14);
    assert!((a.max_small_minor - b.max_small_minor).abs() < 1e-14);
}

#[test]
fn minors_agree_with_svd_rank_pattern() {
    let tol = ToleranceConfig::default();
    for seed in 0..20u64 {
        for d in 1..=2 {
            let dist = random_stochastic(d, seed).full_distribution(3).unwrap();
            let scan = minor_membership(&dist, d, 1e-9).unwrap();
            let small = numerical_rank(&hankel_block(&dist, d - 1, d - 1).unwrap().data, &tol);
            let b1 = numerical_rank(&hankel_block(&dist, 1, 2).unwrap().data, &tol);
            let b2 = numerical_rank(&hankel_block(&dist, 2, 1).unwrap().data, &tol);
            if scan.confident && small.confident && b1.confident && b2.confident {
                let svd = small.rank == d && b1.rank == d && b2.rank == d;
                assert_eq!(scan.is_member(), svd, "seed {seed} d {d}");
            }
        }
    }
}
