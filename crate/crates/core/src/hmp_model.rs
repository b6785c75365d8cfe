//! Stochastic hidden Markov process parametrizations `(M, E, π)` over the binary
//! alphabet.
//!
//! A string `a_1 … a_n` has probability `π' T_{a_1} ⋯ T_{a_n} 1` where
//! `T_a = diag(E[:, a]) · M` are the observable operators.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::distribution::StringDistribution;
use crate::error::{Error, Result};
use crate::word::Word;

/// Default cap on the length of materialized distributions.
pub const DEFAULT_LENGTH_CAP: usize = 24;

/// Largest state count accepted by [`equivalent_up_to_permutation`].
pub const MAX_PERMUTATION_STATES: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct HmpParams {
    /// `d × d`, row `s` holds the transition probabilities out of state `s`.
    pub transition: DMatrix<f64>,
    /// `d × 2`, column `a` holds the probability of emitting symbol `a`.
    pub emission: DMatrix<f64>,
    pub initial: DVector<f64>,
}

/// The pair `(T0, T1)` with `T_a = O_a · M`.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservableSplit {
    pub t0: DMatrix<f64>,
    pub t1: DMatrix<f64>,
}

impl ObservableSplit {
    pub fn get(&self, a: u8) -> &DMatrix<f64> {
        if a == 0 {
            &self.t0
        } else {
            &self.t1
        }
    }
}

impl HmpParams {
    /// Builds and validates parameters with slack `tol` on entries and row sums.
    pub fn new(
        transition: DMatrix<f64>,
        emission: DMatrix<f64>,
        initial: DVector<f64>,
        tol: f64,
    ) -> Result<Self> {
        let params = Self { transition, emission, initial };
        params.validate(tol)?;
        Ok(params)
    }

    pub fn from_rows(
        transition: &[Vec<f64>],
        emission: &[Vec<f64>],
        initial: &[f64],
        tol: f64,
    ) -> Result<Self> {
        let d = initial.len();
        let to_matrix = |rows: &[Vec<f64>], cols: usize, what: &str| -> Result<DMatrix<f64>> {
            if rows.len() != d || rows.iter().any(|r| r.len() != cols) {
                return Err(Error::InvalidParams(format!("{what} must be {d}x{cols}")));
            }
            Ok(DMatrix::from_fn(d, cols, |i, j| rows[i][j]))
        };
        let transition = to_matrix(transition, d, "transition")?;
        let emission = to_matrix(emission, 2, "emission")?;
        Self::new(transition, emission, DVector::from_column_slice(initial), tol)
    }

    pub fn d(&self) -> usize {
        self.initial.len()
    }

    pub fn validate(&self, tol: f64) -> Result<()> {
        let d = self.d();
        if d == 0 {
            return Err(Error::InvalidParams("at least one hidden state is required".into()));
        }
        if self.transition.shape() != (d, d) {
            return Err(Error::InvalidParams(format!(
                "transition is {:?}, expected ({d}, {d})",
                self.transition.shape()
            )));
        }
        if self.emission.shape() != (d, 2) {
            return Err(Error::InvalidParams(format!(
                "emission is {:?}, expected ({d}, 2)",
                self.emission.shape()
            )));
        }
        let in_range = |x: f64| x.is_finite() && x >= -tol && x <= 1.0 + tol;
        for (name, m) in [("transition", &self.transition), ("emission", &self.emission)] {
            for (i, row) in m.row_iter().enumerate() {
                if let Some(x) = row.iter().find(|x| !in_range(**x)) {
                    return Err(Error::InvalidParams(format!("{name} row {i} has entry {x}")));
                }
                let sum = row.sum();
                if (sum - 1.0).abs() > tol {
                    return Err(Error::InvalidParams(format!("{name} row {i} sums to {sum}")));
                }
            }
        }
        if let Some(x) = self.initial.iter().find(|x| !in_range(**x)) {
            return Err(Error::InvalidParams(format!("initial vector has entry {x}")));
        }
        let sum = self.initial.sum();
        if (sum - 1.0).abs() > tol {
            return Err(Error::InvalidParams(format!("initial vector sums to {sum}")));
        }
        Ok(())
    }

    /// `O_a = diag(E[:, a])`.
    pub fn emission_diag(&self, a: u8) -> DMatrix<f64> {
        DMatrix::from_diagonal(&self.emission.column(a as usize).into_owned())
    }

    pub fn split(&self) -> ObservableSplit {
        ObservableSplit {
            t0: self.emission_diag(0) * &self.transition,
            t1: self.emission_diag(1) * &self.transition,
        }
    }

    /// Forward evaluation `((π' T_{a_1}) T_{a_2} ⋯) · 1`.
    pub fn probability(&self, v: &Word) -> f64 {
        let split = self.split();
        let mut alpha = self.initial.transpose();
        for a in v.symbols() {
            alpha *= split.get(a);
        }
        alpha.sum()
    }

    /// Backward evaluation `π' · (T_{a_1} ⋯ (T_{a_n} · 1))`.
    pub fn probability_backward(&self, v: &Word) -> f64 {
        let split = self.split();
        let mut beta = DVector::from_element(self.d(), 1.0);
        let symbols: Vec<u8> = v.symbols().collect();
        for &a in symbols.iter().rev() {
            beta = split.get(a) * beta;
        }
        self.initial.dot(&beta)
    }

    /// Probability of a textual string; rejects symbols other than `'0'`, `'1'`.
    pub fn string_probability(&self, v: &str) -> Result<f64> {
        Ok(self.probability(&v.parse()?))
    }

    pub fn full_distribution(&self, n: usize) -> Result<StringDistribution> {
        self.full_distribution_capped(n, DEFAULT_LENGTH_CAP)
    }

    /// Table of all `2^n` string probabilities, by depth-first forward recursion.
    pub fn full_distribution_capped(&self, n: usize, cap: usize) -> Result<StringDistribution> {
        if n == 0 {
            return Err(Error::Length("string length must be at least 1".into()));
        }
        if n > cap {
            return Err(Error::CapExceeded { n, cap });
        }
        let split = self.split();
        let ops = [split.t0.transpose(), split.t1.transpose()];
        let mut probs = vec![0.0; 1usize << n];
        fill(&ops, &self.initial, 0, n, &mut probs);
        StringDistribution::from_raw(n, probs)
    }

    /// Applies the relabeling "new state `i` is old state `sigma[i]`", i.e.
    /// `M' = P M P'`, `E' = P E`, `π' = P π` with `P[i, sigma[i]] = 1`.
    pub fn permute_states(&self, sigma: &[usize]) -> Result<HmpParams> {
        check_permutation(sigma, self.d())?;
        let d = self.d();
        Ok(HmpParams {
            transition: DMatrix::from_fn(d, d, |i, j| self.transition[(sigma[i], sigma[j])]),
            emission: DMatrix::from_fn(d, 2, |i, a| self.emission[(sigma[i], a)]),
            initial: DVector::from_fn(d, |i, _| self.initial[sigma[i]]),
        })
    }

    /// Largest absolute entrywise difference over `(M, E, π)`.
    pub fn max_abs_diff(&self, other: &HmpParams) -> f64 {
        let m = (&self.transition - &other.transition).amax();
        let e = (&self.emission - &other.emission).amax();
        let p = (&self.initial - &other.initial).amax();
        m.max(e).max(p)
    }

    /// Free coordinates after removing row-sum redundancy: the first `d-1`
    /// entries of each transition row, `E[s, 0]` for each state, and the first
    /// `d-1` entries of `π`. There are `d² + d - 1` of them.
    pub fn free_coordinates(&self) -> Vec<f64> {
        let d = self.d();
        let mut out = Vec::with_capacity(d * d + d - 1);
        for i in 0..d {
            out.extend((0..d - 1).map(|j| self.transition[(i, j)]));
        }
        out.extend((0..d).map(|i| self.emission[(i, 0)]));
        out.extend((0..d - 1).map(|i| self.initial[i]));
        out
    }

    pub fn from_free_coordinates(d: usize, coords: &[f64], tol: f64) -> Result<HmpParams> {
        if d == 0 || coords.len() != free_parameter_count(d) {
            return Err(Error::InvalidParams(format!(
                "expected {} free coordinates for d = {d}, got {}",
                free_parameter_count(d.max(1)),
                coords.len()
            )));
        }
        let (trans, rest) = coords.split_at(d * (d - 1));
        let (emit, init) = rest.split_at(d);
        let complete = |head: &[f64]| -> Vec<f64> {
            let mut row = head.to_vec();
            row.push(1.0 - head.iter().sum::<f64>());
            row
        };
        let transition: Vec<Vec<f64>> = (0..d).map(|i| complete(&trans[i * (d - 1)..(i + 1) * (d - 1)])).collect();
        let emission: Vec<Vec<f64>> = emit.iter().map(|&e| vec![e, 1.0 - e]).collect();
        HmpParams::from_rows(&transition, &emission, &complete(init), tol)
    }
}

fn fill(ops: &[DMatrix<f64>; 2], alpha: &DVector<f64>, code: usize, remaining: usize, out: &mut [f64]) {
    if remaining == 0 {
        out[code] = alpha.sum();
        return;
    }
    for (a, op) in ops.iter().enumerate() {
        fill(ops, &(op * alpha), (code << 1) | a, remaining - 1, out);
    }
}

/// `d² + d - 1` free parameters for a binary alphabet.
pub fn free_parameter_count(d: usize) -> usize {
    d * d + d - 1
}

fn check_permutation(sigma: &[usize], d: usize) -> Result<()> {
    if sigma.len() != d {
        return Err(Error::InvalidPermutation(sigma.to_vec()));
    }
    let mut seen = vec![false; d];
    for &s in sigma {
        if s >= d || seen[s] {
            return Err(Error::InvalidPermutation(sigma.to_vec()));
        }
        seen[s] = true;
    }
    Ok(())
}

/// `M = I`, `π = 1/d`, `E[:, 0] = λ`, `E[:, 1] = 1 - λ`. Pairwise distinct `λ`
/// give a process of rank exactly `d`.
pub fn vandermonde_example(lambdas: &[f64]) -> Result<HmpParams> {
    let d = lambdas.len();
    if d == 0 {
        return Err(Error::InvalidParams("at least one eigenvalue is required".into()));
    }
    if let Some(l) = lambdas.iter().find(|l| !(**l > 0.0 && **l < 1.0)) {
        return Err(Error::InvalidParams(format!("eigenvalue {l} is outside (0, 1)")));
    }
    for i in 0..d {
        for j in i + 1..d {
            if (lambdas[i] - lambdas[j]).abs() < 1e-12 {
                return Err(Error::DuplicateEigenvalue(lambdas[i], lambdas[j]));
            }
        }
    }
    Ok(HmpParams {
        transition: DMatrix::identity(d, d),
        emission: DMatrix::from_fn(d, 2, |i, a| if a == 0 { lambdas[i] } else { 1.0 - lambdas[i] }),
        initial: DVector::from_element(d, 1.0 / d as f64),
    })
}

/// Draws `M`, `E` and `π` row by row (in that order) from ChaCha8 seeded with
/// `seed`; each row is `k` uniform(0, 1) draws divided by their sum.
pub fn random_stochastic(d: usize, seed: u64) -> HmpParams {
    assert!(d >= 1, "at least one hidden state is required");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut row = |k: usize| -> Vec<f64> {
        let draws: Vec<f64> = (0..k).map(|_| rng.gen_range(f64::MIN_POSITIVE..1.0)).collect();
        let sum: f64 = draws.iter().sum();
        draws.into_iter().map(|x| x / sum).collect()
    };
    let transition: Vec<Vec<f64>> = (0..d).map(|_| row(d)).collect();
    let emission: Vec<Vec<f64>> = (0..d).map(|_| row(2)).collect();
    let initial = row(d);
    HmpParams {
        transition: DMatrix::from_fn(d, d, |i, j| transition[i][j]),
        emission: DMatrix::from_fn(d, 2, |i, a| emission[i][a]),
        initial: DVector::from_vec(initial),
    }
}

/// Lexicographically smallest `σ` with `permute_states(p1, σ) ≈ p2` in max norm.
pub fn equivalent_up_to_permutation(p1: &HmpParams, p2: &HmpParams, tol: f64) -> Result<Option<Vec<usize>>> {
    let d = p1.d();
    if p2.d() != d {
        return Err(Error::DimensionMismatch(d, p2.d()));
    }
    if d > MAX_PERMUTATION_STATES {
        return Err(Error::StateCountTooLarge(d));
    }
    let mut sigma: Vec<usize> = (0..d).collect();
    loop {
        if p1.permute_states(&sigma)?.max_abs_diff(p2) <= tol {
            return Ok(Some(sigma));
        }
        if !next_permutation(&mut sigma) {
            return Ok(None);
        }
    }
}

/// Advances to the next permutation in lexicographic order; false after the last.
pub fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = p.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = p.iter().rposition(|&x| x > p[i]).expect("pivot has a successor");
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}

/// All permutations of `0..d` in lexicographic order.
pub fn all_permutations(d: usize) -> Vec<Vec<usize>> {
    let mut p: Vec<usize> = (0..d).collect();
    let mut out = vec![p.clone()];
    while next_permutation(&mut p) {
        out.push(p.clone());
    }
    out
}
