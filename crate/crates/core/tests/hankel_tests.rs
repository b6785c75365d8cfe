mod common;

use hmpid::hankel::{hankel_block, numerical_rank, select_basis};
use hmpid::hmp_model::{random_stochastic, vandermonde_example};
use hmpid::{Error, ToleranceConfig, Word};
use nalgebra::DMatrix;
use proptest::prelude::*;

#[test]
fn block_layout_matches_the_worked_example() {
    let dist = random_stochastic(2, 3).full_distribution(3).unwrap();
    let b = hankel_block(&dist, 2, 1).unwrap();
    let rows: Vec<String> = b.row_strings.iter().map(|w| w.to_key()).collect();
    let cols: Vec<String> = b.col_strings.iter().map(|w| w.to_key()).collect();
    assert_eq!(rows, ["", "0", "1", "00", "01", "10", "11"]);
    assert_eq!(cols, ["", "0", "1"]);
    for (i, v) in rows.iter().enumerate() {
        for (j, w) in cols.iter().enumerate() {
            let oracle = common::brute_marginal(&dist, &format!("{v}{w}"));
            assert!((b.data[(i, j)] - oracle).abs() < 1e-15);
        }
    }
    let t = hankel_block(&dist, 1, 2).unwrap();
    assert_eq!(t.data.shape(), (3, 7));
}

#[test]
fn fair_coin_small_block_is_rank_one() {
    let b = hankel_block(&common::fair_coin(3), 1, 1).unwrap();
    // Rank one: every 2x2 minor vanishes, so the top-left entry generates the block.
    let outer = b.data.column(0) * b.data.row(0);
    assert!((&b.data - outer).amax() < 1e-15);
    let r = numerical_rank(&b.data, &ToleranceConfig::default());
    assert_eq!((r.rank, r.confident), (1, true));
}

#[test]
fn vandermonde_basis_is_well_conditioned() {
    let dist = vandermonde_example(&[0.25, 0.75]).unwrap().full_distribution(3).unwrap();
    let basis = select_basis(&dist, 2, &ToleranceConfig::default()).unwrap();
    let det = basis.v.determinant().abs();
    assert!(det >= 1e-4, "det {det}");
    for (i, v) in basis.rows.iter().enumerate() {
        for (j, w) in basis.cols.iter().enumerate() {
            assert_eq!(basis.v[(i, j)], hankel_block(&dist, 1, 1).unwrap().data[(v.index_in_block(), w.index_in_block())]);
        }
    }
    // Rows {ε, 0} and columns {ε, 0}: p(00) - p(0)^2.
    let block = hankel_block(&dist, 1, 1).unwrap().data;
    let sub = DMatrix::from_row_slice(2, 2, &[block[(0, 0)], block[(0, 1)], block[(1, 0)], block[(1, 1)]]);
    assert!((common::det_cofactor(&sub) - 0.0625).abs() < 1e-15);
    // Complete pivoting never does worse than every 2x2 minor by more than the
    // pivot growth; here it must reach at least a quarter of the best minor.
    let mut best = 0.0f64;
    for r in [(0, 1), (0, 2), (1, 2)] {
        for c in [(0, 1), (0, 2), (1, 2)] {
            let m = DMatrix::from_row_slice(2, 2, &[block[(r.0, c.0)], block[(r.0, c.1)], block[(r.1, c.0)], block[(r.1, c.1)]]);
            best = best.max(common::det_cofactor(&m).abs());
        }
    }
    assert!(det >= best / 4.0, "det {det}, best minor {best}");
}

#[test]
fn uniform_has_no_rank_two_basis() {
    assert_eq!(select_basis(&common::uniform(3), 2, &ToleranceConfig::default()), Err(Error::RankDeficient(2)));
}

trait BlockIndex {
    fn index_in_block(&self) -> usize;
}

impl BlockIndex for Word {
    /// Position in the canonical enumeration of all strings up to some length.
    fn index_in_block(&self) -> usize {
        (1usize << self.len()) - 1 + self.index()
    }
}

proptest! {
    #[test]
    fn hmp_block_ranks_are_bounded_and_monotone(d in 1usize..=3, seed in any::<u64>(), n in 1usize..=6) {
        let tol = ToleranceConfig::default();
        let dist = random_stochastic(d, seed).full_distribution(n).unwrap();
        let mut ranks = vec![vec![None; n + 1]; n + 1];
        for m in 0..=n {
            for k in 0..=(n - m) {
                let r = numerical_rank(&hankel_block(&dist, m, k).unwrap().data, &tol);
                prop_assert!(r.rank <= d);
                ranks[m][k] = Some(r);
            }
        }
        for m in 0..=n {
            for k in 0..=(n - m) {
                let here = ranks[m][k].as_ref().unwrap();
                for (m2, k2) in [(m + 1, k), (m, k + 1)] {
                    if m2 + k2 <= n {
                        let there = ranks[m2][k2].as_ref().unwrap();
                        let slack = usize::from(!(here.confident && there.confident));
                        prop_assert!(here.rank <= there.rank + slack);
                    }
                }
            }
        }
    }
}
