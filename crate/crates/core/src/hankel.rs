//! Finite Hankel blocks `P_{m,k}[v, w] = p(vw)` with `|v| ≤ m`, `|w| ≤ k`, and
//! thresholded rank estimation.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::distribution::{Marginals, StringDistribution};
use crate::error::{Error, Result};
use crate::linalg::{complete_pivot_indices, singular_values};
use crate::tolerance::ToleranceConfig;
use crate::word::Word;

#[derive(Debug, Clone, PartialEq)]
pub struct HankelBlock {
    pub m: usize,
    pub k: usize,
    /// All strings of length `≤ m`, canonical order.
    pub row_strings: Vec<Word>,
    /// All strings of length `≤ k`, canonical order.
    pub col_strings: Vec<Word>,
    pub data: DMatrix<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankReport {
    pub rank: usize,
    pub singular_values: Vec<f64>,
    pub confident: bool,
}

pub fn hankel_block(dist: &StringDistribution, m: usize, k: usize) -> Result<HankelBlock> {
    if m + k > dist.n() {
        return Err(Error::Length(format!(
            "block ({m}, {k}) needs strings of length {} but n = {}",
            m + k,
            dist.n()
        )));
    }
    Ok(hankel_block_from(&dist.marginals(), m, k))
}

/// Same as [`hankel_block`] from precomputed marginals; requires `m + k ≤ max_len`.
pub fn hankel_block_from(marginals: &Marginals, m: usize, k: usize) -> HankelBlock {
    assert!(m + k <= marginals.max_len());
    let row_strings: Vec<Word> = Word::all_up_to(m).collect();
    let col_strings: Vec<Word> = Word::all_up_to(k).collect();
    let data = DMatrix::from_fn(row_strings.len(), col_strings.len(), |i, j| {
        marginals.prob(&row_strings[i].concat(&col_strings[j]))
    });
    HankelBlock { m, k, row_strings, col_strings, data }
}

/// Rank as the count of singular values above `τ = rel_rank_tol · σ_max`; not
/// confident when any singular value lies in `[τ / gap_ratio, τ · gap_ratio]`.
pub fn numerical_rank(block: &DMatrix<f64>, tol: &ToleranceConfig) -> RankReport {
    let sv = singular_values(block);
    let sigma_max = sv.first().copied().unwrap_or(0.0);
    if sigma_max == 0.0 {
        return RankReport { rank: 0, singular_values: sv, confident: true };
    }
    let tau = tol.rel_rank_tol * sigma_max;
    let rank = sv.iter().filter(|&&s| s > tau).count();
    let (lo, hi) = (tau / tol.gap_ratio, tau * tol.gap_ratio);
    let confident = !sv.iter().any(|&s| s >= lo && s <= hi);
    RankReport { rank, singular_values: sv, confident }
}

/// Prefix strings `v_i`, suffix strings `w_j` and `V = [p(v_i w_j)]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Basis {
    pub rows: Vec<Word>,
    pub cols: Vec<Word>,
    pub v: DMatrix<f64>,
}

/// Chooses an invertible `e × e` submatrix of `P_{e-1,e-1}` by complete pivoting.
/// The selected strings are returned in canonical order.
pub fn select_basis(dist: &StringDistribution, e: usize, tol: &ToleranceConfig) -> Result<Basis> {
    if e == 0 {
        return Err(Error::Length("basis size must be positive".into()));
    }
    if 2 * (e - 1) > dist.n() {
        return Err(Error::Length(format!("basis of size {e} needs n >= {}", 2 * (e - 1))));
    }
    select_basis_from(&dist.marginals(), e, tol)
}

pub fn select_basis_from(marginals: &Marginals, e: usize, tol: &ToleranceConfig) -> Result<Basis> {
    let block = hankel_block_from(marginals, e - 1, e - 1);
    let threshold = tol.rel_rank_tol * block.data.amax();
    let (mut ri, mut ci) = complete_pivot_indices(&block.data, e, threshold).ok_or(Error::RankDeficient(e))?;
    ri.sort_unstable();
    ci.sort_unstable();
    let rows: Vec<Word> = ri.iter().map(|&i| block.row_strings[i]).collect();
    let cols: Vec<Word> = ci.iter().map(|&j| block.col_strings[j]).collect();
    let v = DMatrix::from_fn(e, e, |i, j| block.data[(ri[i], ci[j])]);
    Ok(Basis { rows, cols, v })
}
