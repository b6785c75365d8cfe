//! Fixtures and independent oracles shared by the integration tests.
#![allow(dead_code)]

use hmpid::hmp_model::HmpParams;
use hmpid::{FinitaryParams, StringDistribution, ToleranceConfig, Word};
use nalgebra::{DMatrix, DVector};

pub fn fair_coin_params() -> HmpParams {
    HmpParams::from_rows(&[vec![1.0]], &[vec![0.5, 0.5]], &[1.0], 0.0).unwrap()
}

pub fn fair_coin(n: usize) -> StringDistribution {
    fair_coin_params().full_distribution(n).unwrap()
}

pub fn uniform(n: usize) -> StringDistribution {
    let size = 1usize << n;
    StringDistribution::from_raw(n, vec![1.0 / size as f64; size]).unwrap()
}

fn key_index(key: &str) -> usize {
    key.parse::<Word>().unwrap().index()
}

/// `p(v) = 1/8 + δ(v)` over `Σ^3` with
/// `δ(000) = +0.02, δ(111) = -0.02, δ(010) = +0.01, δ(101) = -0.01`.
/// The deltas sum to zero, so the table is already normalized.
pub fn perturbed_rank3() -> StringDistribution {
    let mut probs = vec![0.125; 8];
    probs[key_index("000")] += 0.02;
    probs[key_index("111")] -= 0.02;
    probs[key_index("010")] += 0.01;
    probs[key_index("101")] -= 0.01;
    let total: f64 = probs.iter().sum();
    let probs = probs.into_iter().map(|p| p / total).collect();
    StringDistribution::from_table(3, probs, &ToleranceConfig::default()).unwrap()
}

/// Nonnegative two-dimensional operator model whose `T0 (T0+T1)^{-1}` is upper
/// triangular with eigenvalues `0.6` and `0.6 + gap`. For tiny gaps the
/// eigenvalues are numerically coincident while the Hankel rank stays 2.
pub fn near_degenerate_finitary(gap: f64) -> FinitaryParams {
    let (alpha, beta, delta, eps) = (0.3, 0.4, 0.2, 0.1);
    let gamma = alpha / (alpha + delta) + gap;
    FinitaryParams {
        t0: DMatrix::from_row_slice(2, 2, &[alpha, beta, 0.0, gamma]),
        t1: DMatrix::from_row_slice(2, 2, &[delta, eps, 0.0, 1.0 - gamma]),
        x: DVector::from_vec(vec![0.5, 0.5]),
    }
}

pub fn near_degenerate(gap: f64, n: usize) -> StringDistribution {
    let table = near_degenerate_finitary(gap).table(n).unwrap();
    StringDistribution::from_table(n, table.probs().to_vec(), &ToleranceConfig::default()).unwrap()
}

/// Sum over all hidden-state paths: `Σ_{s_1..s_n} π(s_1) Π_t E(s_t, a_t) M(s_t, s_{t+1})`,
/// with the final transition marginalized out (rows of `M` sum to one but the
/// oracle keeps the factor to stay faithful to `π' T_v 1`).
pub fn path_sum_probability(p: &HmpParams, v: &str) -> f64 {
    let symbols: Vec<usize> = v.chars().map(|c| if c == '0' { 0 } else { 1 }).collect();
    let d = p.d();
    let n = symbols.len();
    if n == 0 {
        return p.initial.sum();
    }
    let total_paths = d.pow(n as u32 + 1);
    let mut total = 0.0;
    for code in 0..total_paths {
        let mut states = Vec::with_capacity(n + 1);
        let mut c = code;
        for _ in 0..=n {
            states.push(c % d);
            c /= d;
        }
        let mut w = p.initial[states[0]];
        for t in 0..n {
            w *= p.emission[(states[t], symbols[t])] * p.transition[(states[t], states[t + 1])];
        }
        total += w;
    }
    total
}

/// Determinant by cofactor expansion; exponential, only for tiny matrices.
pub fn det_cofactor(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    match n {
        0 => 1.0,
        1 => m[(0, 0)],
        _ => (0..n)
            .map(|j| {
                let minor = m.clone().remove_row(0).remove_column(j);
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                sign * m[(0, j)] * det_cofactor(&minor)
            })
            .sum(),
    }
}

/// Strings in canonical order as text keys (`""` for the empty word).
pub fn strings_up_to(len: usize) -> Vec<String> {
    Word::all_up_to(len).map(|w| w.to_key()).collect()
}

/// `p(u)` for any `|u| ≤ n` by brute-force summation over completions.
pub fn brute_marginal(dist: &StringDistribution, u: &str) -> f64 {
    dist.iter().filter(|(w, _)| w.to_key().starts_with(u)).map(|(_, p)| p).sum()
}
