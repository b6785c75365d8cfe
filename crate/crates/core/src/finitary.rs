//! Observable-operator (finitary) parametrizations `(T0, T1, x)` with
//! `p(a_1 … a_n) = x' T_{a_1} ⋯ T_{a_n} 1`, and their inference from a table.

use nalgebra::{DMatrix, DVector};

use crate::distribution::{Marginals, StringDistribution};
use crate::error::{Error, Result};
use crate::hankel::{select_basis_from, Basis};
use crate::tolerance::ToleranceConfig;
use crate::word::Word;

/// Normalized parametrization: `(T0 + T1) · 1 = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct FinitaryParams {
    pub t0: DMatrix<f64>,
    pub t1: DMatrix<f64>,
    pub x: DVector<f64>,
}

impl FinitaryParams {
    pub fn e(&self) -> usize {
        self.x.len()
    }

    pub fn op(&self, a: u8) -> &DMatrix<f64> {
        if a == 0 {
            &self.t0
        } else {
            &self.t1
        }
    }

    pub fn probability(&self, v: &Word) -> f64 {
        let mut row = self.x.transpose();
        for a in v.symbols() {
            row *= self.op(a);
        }
        row.sum()
    }

    pub fn finitary_probability(&self, v: &str) -> Result<f64> {
        Ok(self.probability(&v.parse()?))
    }

    /// Table of `x' T_v 1` over `Σ^n`. Values are not checked for being
    /// probabilities.
    pub fn table(&self, n: usize) -> Result<StringDistribution> {
        let probs = Word::all_of_length(n).map(|w| self.probability(&w)).collect();
        StringDistribution::from_raw(n, probs)
    }

    /// `‖(T0 + T1) · 1 - 1‖_∞`.
    pub fn process_constraint_residual(&self) -> f64 {
        let ones = DVector::from_element(self.e(), 1.0);
        ((&self.t0 + &self.t1) * &ones - ones).amax()
    }
}

/// Pre-normalization parameters: `p(v) = x' T_v y`.
#[derive(Debug, Clone, PartialEq)]
pub struct RawFinitary {
    pub t0: DMatrix<f64>,
    pub t1: DMatrix<f64>,
    pub x: DVector<f64>,
    pub y: DVector<f64>,
}

impl RawFinitary {
    pub fn op(&self, a: u8) -> &DMatrix<f64> {
        if a == 0 {
            &self.t0
        } else {
            &self.t1
        }
    }

    /// Row vector `x' T_v`.
    pub fn state_after(&self, v: &Word) -> DVector<f64> {
        let mut row = self.x.transpose();
        for a in v.symbols() {
            row *= self.op(a);
        }
        row.transpose()
    }

    pub fn probability(&self, v: &Word) -> f64 {
        self.state_after(v).dot(&self.y)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FinitaryInference {
    pub params: FinitaryParams,
    pub raw: RawFinitary,
    pub basis: Basis,
    /// `S` with `S · 1 = y`; `T_a = S^{-1} T_a^{raw} S`, `x = S' x^{raw}`.
    pub normalizer: DMatrix<f64>,
}

pub fn infer_finitary(dist: &StringDistribution, e: usize, tol: &ToleranceConfig) -> Result<FinitaryInference> {
    if e == 0 {
        return Err(Error::Length("dimension must be positive".into()));
    }
    if dist.n() + 1 < 2 * e {
        return Err(Error::Length(format!(
            "dimension {e} needs strings of length {} but n = {}",
            2 * e - 1,
            dist.n()
        )));
    }
    infer_finitary_from(&dist.marginals(), e, tol)
}

/// [`infer_finitary`] from precomputed marginals; requires `max_len ≥ 2e - 1`.
pub fn infer_finitary_from(marginals: &Marginals, e: usize, tol: &ToleranceConfig) -> Result<FinitaryInference> {
    assert!(marginals.max_len() + 1 >= 2 * e);
    let basis = select_basis_from(marginals, e, tol)?;
    let lu = basis.v.clone().lu();
    let solve = |rhs: &DMatrix<f64>| lu.solve(rhs).ok_or(Error::RankDeficient(e));

    let x = DVector::from_fn(e, |j, _| marginals.prob(&basis.cols[j]));
    let prefix_probs = DMatrix::from_fn(e, 1, |i, _| marginals.prob(&basis.rows[i]));
    let y: DVector<f64> = solve(&prefix_probs)?.column(0).into_owned();
    let w = |a: u8| {
        DMatrix::from_fn(e, e, |i, j| {
            marginals.prob(&basis.rows[i].concat(&Word::symbol(a)).concat(&basis.cols[j]))
        })
    };
    let t0 = solve(&w(0))?;
    let t1 = solve(&w(1))?;
    let raw = RawFinitary { t0, t1, x, y };

    let s = normalizer(&raw.y)?;
    let s_inv = s.clone().try_inverse().ok_or(Error::DegenerateY(raw.y.amax()))?;
    let params = FinitaryParams {
        t0: &s_inv * &raw.t0 * &s,
        t1: &s_inv * &raw.t1 * &s,
        x: s.transpose() * &raw.x,
    };
    Ok(FinitaryInference { params, raw, basis, normalizer: s })
}

/// `S = I + (y - 1) e_j'` with `j = argmax |y_i|`, so `S · 1 = y` and `det S = y_j`.
pub fn normalizer(y: &DVector<f64>) -> Result<DMatrix<f64>> {
    let e = y.len();
    let j = y.iamax();
    if y[j].abs() < 1e-12 {
        return Err(Error::DegenerateY(y[j].abs()));
    }
    let mut s = DMatrix::identity(e, e);
    for i in 0..e {
        s[(i, j)] += y[i] - 1.0;
    }
    Ok(s)
}
