mod common;

use hmpid::hmp_model::{
    all_permutations, free_parameter_count, random_stochastic, vandermonde_example, HmpParams,
};
use hmpid::linalg::singular_values;
use hmpid::Word;
use nalgebra::DMatrix;
use proptest::prelude::*;

proptest! {
    #[test]
    fn forward_matches_path_enumeration(d in 1usize..=3, seed in any::<u64>(), len in 0usize..=5, code in any::<u64>()) {
        let p = random_stochastic(d, seed);
        let w = Word::new(len, if len == 0 { 0 } else { code % (1 << len) });
        let oracle = common::path_sum_probability(&p, &w.to_key());
        prop_assert!((p.probability(&w) - oracle).abs() <= 1e-14);
    }

    #[test]
    fn prefix_marginalization_and_evaluation_order(d in 1usize..=5, seed in any::<u64>(), len in 0usize..=8, code in any::<u64>()) {
        let p = random_stochastic(d, seed);
        let v = Word::new(len, if len == 0 { 0 } else { code % (1 << len) });
        let split = p.probability(&v.concat(&Word::symbol(0))) + p.probability(&v.concat(&Word::symbol(1)));
        prop_assert!((p.probability(&v) - split).abs() <= 1e-14);
        prop_assert!((p.probability(&v) - p.probability_backward(&v)).abs() <= 1e-12);
    }

    #[test]
    fn relabeling_leaves_tables_unchanged(seed in any::<u64>(), n in 1usize..=8) {
        let p = random_stochastic(3, seed);
        let base = p.full_distribution(n).unwrap();
        for sigma in all_permutations(3) {
            let q = p.permute_states(&sigma).unwrap().full_distribution(n).unwrap();
            for (a, b) in base.probs().iter().zip(q.probs()) {
                prop_assert!((a - b).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn free_coordinates_count_and_round_trip(d in 1usize..=6, seed in any::<u64>()) {
        let p = random_stochastic(d, seed);
        let coords = p.free_coordinates();
        prop_assert_eq!(coords.len(), free_parameter_count(d));
        prop_assert_eq!(coords.len(), d * d + d - 1);
        let back = HmpParams::from_free_coordinates(d, &coords, 1e-12).unwrap();
        prop_assert!(back.max_abs_diff(&p) <= 1e-15);
    }
}

#[test]
fn vandermonde_probabilities_match_path_sums() {
    let p = vandermonde_example(&[0.25, 0.75]).unwrap();
    let dist = p.full_distribution(3).unwrap();
    // Expected values are (λ1^k + λ2^k) / 2 for 0^k; the path oracle checks the code path.
    assert!((common::path_sum_probability(&p, "00") - 0.3125).abs() < 1e-15);
    assert!((common::path_sum_probability(&p, "000") - 0.21875).abs() < 1e-15);
    assert!((dist.probs()[0] - 0.21875).abs() < 1e-15);
    assert!((p.string_probability("00").unwrap() - 0.3125).abs() < 1e-15);
}

/// `[p(0^{i-1} 0^{j-1})]_{i,j}` against `(1/d) S(λ) S(λ)'` with `S = [λ_j^{i-1}]`.
fn vandermonde_gram_error(lambdas: &[f64]) -> (f64, f64) {
    let d = lambdas.len();
    let p = vandermonde_example(lambdas).unwrap();
    let moments = DMatrix::from_fn(d, d, |i, j| p.probability(&Word::zeros(i + j)));
    let s = DMatrix::from_fn(d, d, |i, j| lambdas[j].powi(i as i32));
    let gram = &s * s.transpose() / d as f64;
    let sv = singular_values(&moments);
    ((moments - gram).amax(), *sv.last().unwrap())
}

#[test]
fn vandermonde_moment_matrix_has_full_rank() {
    let (err, smin) = vandermonde_gram_error(&[0.2, 0.5, 0.8]);
    assert!(err < 1e-12);
    assert!(smin > 1e-6, "smallest singular value {smin}");
    let (err, smin) = vandermonde_gram_error(&[0.25, 0.75]);
    assert!(err < 1e-12 && smin > 1e-3);
}

#[test]
fn cycle_relabeling_example() {
    let p = random_stochastic(3, 42);
    // The cycle (2,3,1) in one-based notation.
    let q = p.permute_states(&[1, 2, 0]).unwrap();
    let a = p.full_distribution(5).unwrap();
    let b = q.full_distribution(5).unwrap();
    for (x, y) in a.probs().iter().zip(b.probs()) {
        assert!((x - y).abs() <= 1e-12);
    }
    assert_eq!(q.transition[(0, 1)], p.transition[(1, 2)]);
    assert_eq!(q.initial[2], p.initial[0]);
}
