//! Brute-force determinantal membership test.
//!
//! A table lies in the image of rank-`d` finitary parametrizations but not of
//! rank `d-1` ones exactly when every `(d+1)`-minor of both big Hankel blocks
//! vanishes and some `d`-minor of `P_{d-1,d-1}` does not. This is the
//! set-theoretic statement only; no ideal-theoretic computation (radicals,
//! quotients, Gröbner bases) is attempted.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::distribution::StringDistribution;
use crate::error::{Error, Result};
use crate::hankel::hankel_block_from;
use crate::linalg::det_partial_pivot;

pub const MAX_MINORS: u128 = 10_000_000;

/// Minors within this factor of the threshold make the scan non-confident.
pub const CONFIDENCE_BAND: f64 = 10.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinorScanResult {
    pub d: usize,
    pub all_big_minors_vanish: bool,
    pub some_small_minor_nonzero: bool,
    pub max_big_minor: f64,
    pub max_small_minor: f64,
    /// `(d+1)`-minors of `P_{⌊n/2⌋,⌈n/2⌉}` and of `P_{⌈n/2⌉,⌊n/2⌋}`.
    pub big_counts: [u128; 2],
    /// `d`-minors of `P_{d-1,d-1}`.
    pub small_count: u128,
    pub big_threshold: f64,
    pub small_threshold: f64,
    pub confident: bool,
}

impl MinorScanResult {
    /// Membership in the rank-exactly-`d` set.
    pub fn is_member(&self) -> bool {
        self.all_big_minors_vanish && self.some_small_minor_nonzero
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// `C(rows, k) · C(cols, k)`.
pub fn minor_count(rows: usize, cols: usize, k: usize) -> u128 {
    binomial(rows, k) * binomial(cols, k)
}

/// Advances `c` to the next `k`-subset of `0..n` in lexicographic order.
fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let Some(i) = (0..k).rev().find(|&i| c[i] < n - k + i) else {
        return false;
    };
    c[i] += 1;
    for j in i + 1..k {
        c[j] = c[j - 1] + 1;
    }
    true
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k > n {
        return Vec::new();
    }
    let mut c: Vec<usize> = (0..k).collect();
    let mut out = vec![c.clone()];
    while next_combination(&mut c, n) {
        out.push(c.clone());
    }
    out
}

/// Largest `|det|` over all `k × k` submatrices.
pub fn max_abs_minor(m: &DMatrix<f64>, k: usize) -> f64 {
    let (nr, nc) = m.shape();
    if k == 0 {
        return 1.0;
    }
    let col_sets = combinations(nc, k);
    let mut best = 0.0f64;
    let mut sub = DMatrix::zeros(k, k);
    for rows in combinations(nr, k) {
        for cols in &col_sets {
            for (i, &r) in rows.iter().enumerate() {
                for (j, &c) in cols.iter().enumerate() {
                    sub[(i, j)] = m[(r, c)];
                }
            }
            best = best.max(det_partial_pivot(&sub).abs());
        }
    }
    best
}

fn in_band(value: f64, threshold: f64) -> bool {
    value >= threshold / CONFIDENCE_BAND && value <= threshold * CONFIDENCE_BAND
}

/// Scans all minors of the relevant blocks. Thresholds are `tol · s^k` with `s`
/// the largest entry magnitude of the block and `k` the minor size.
pub fn minor_membership(dist: &StringDistribution, d: usize, tol: f64) -> Result<MinorScanResult> {
    let n = dist.n();
    if d == 0 || n + 1 < 2 * d {
        return Err(Error::Length(format!("minor scan at d = {d} needs n >= {}", 2 * d.max(1) - 1)));
    }
    let marginals = dist.marginals();
    let (lo, hi) = (n / 2, n - n / 2);
    let big = [hankel_block_from(&marginals, lo, hi), hankel_block_from(&marginals, hi, lo)];
    let small = hankel_block_from(&marginals, d - 1, d - 1);

    let big_counts = [
        minor_count(big[0].data.nrows(), big[0].data.ncols(), d + 1),
        minor_count(big[1].data.nrows(), big[1].data.ncols(), d + 1),
    ];
    let small_count = minor_count(small.data.nrows(), small.data.ncols(), d);
    let total = big_counts[0] + big_counts[1] + small_count;
    if total > MAX_MINORS {
        return Err(Error::TooManyMinors { count: total, limit: MAX_MINORS });
    }

    let mut max_big_minor = 0.0f64;
    let mut big_threshold = 0.0f64;
    let mut big_band = false;
    let mut all_vanish = true;
    for block in &big {
        let m = max_abs_minor(&block.data, d + 1);
        let thr = tol * block.data.amax().powi(d as i32 + 1);
        all_vanish &= m <= thr;
        big_band |= in_band(m, thr);
        max_big_minor = max_big_minor.max(m);
        big_threshold = big_threshold.max(thr);
    }
    let max_small_minor = max_abs_minor(&small.data, d);
    let small_threshold = tol * small.data.amax().powi(d as i32);
    let some_nonzero = max_small_minor > small_threshold;

    Ok(MinorScanResult {
        d,
        all_big_minors_vanish: all_vanish,
        some_small_minor_nonzero: some_nonzero,
        max_big_minor,
        max_small_minor,
        big_counts,
        small_count,
        big_threshold,
        small_threshold,
        confident: !big_band && !in_band(max_small_minor, small_threshold),
    })
}
