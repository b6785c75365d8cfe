//! Conversion of a finitary parametrization into a stochastic `(M, E, π)`.
//!
//! With `M_f = T0 + T1` invertible, `Q = T0 M_f^{-1}` is similar to the emission
//! diagonal `O_0`. Diagonalizing `Q` with an eigenvector basis `S` rescaled so
//! that `S · 1 = 1` yields `M = S^{-1} M_f S`, `O_0 = Λ`, `O_1 = I - Λ` and
//! `π = S' x`.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::finitary::FinitaryParams;
use crate::hmp_model::HmpParams;
use crate::linalg::{complex_eigen, min_pairwise_gap, singular_values, to_complex, C64};
use crate::tolerance::ToleranceConfig;

/// `|det M| < DET_REL_TOL · (max |M_ij|)^d` counts as singular.
pub const DET_REL_TOL: f64 = 1e-10;
const RESCALE_TOL: f64 = 1e-12;
const EIGVEC_COND_LIMIT: f64 = 1e12;

pub const REASON_SINGULAR: &str = "M not invertible";
pub const REASON_EIGEN_GAP: &str = "eigenvalues not pairwise different";
pub const REASON_DEFECTIVE: &str = "eigenvectors defective";
pub const REASON_RESCALE: &str = "eigenvector rescaling singular";
pub const REASON_EIGEN_FAILED: &str = "eigendecomposition failed";

#[derive(Debug, Clone, PartialEq)]
pub enum RecoveryKind {
    Recovered(HmpParams),
    NotGeneric(String),
    NotStochastic(String),
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct RecoveryDiagnostics {
    /// `(re, im)` pairs in the order used to build `S`.
    pub eigenvalues: Vec<(f64, f64)>,
    pub min_eigen_gap: Option<f64>,
    pub det_transition: f64,
    pub max_imaginary: Option<f64>,
    pub max_stochastic_violation: Option<f64>,
    /// `‖S^{-1} T1 S M^{-1} - (I - Λ)‖_∞`.
    pub o1_residual: Option<f64>,
    /// `‖S · 1 - 1‖_∞`.
    pub rescale_residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryOutcome {
    pub kind: RecoveryKind,
    pub diagnostics: RecoveryDiagnostics,
}

impl RecoveryOutcome {
    pub fn params(&self) -> Option<&HmpParams> {
        match &self.kind {
            RecoveryKind::Recovered(p) => Some(p),
            _ => None,
        }
    }
}

/// Eigenvalues sorted by `(re, im)` ascending.
pub fn recover_hmm(fp: &FinitaryParams, tol: &ToleranceConfig) -> RecoveryOutcome {
    recover(fp, tol, None)
}

/// As [`recover_hmm`], but hidden state `i` takes the eigenvalue at position
/// `order[i]` of the sorted list. Different orders give state-permuted results.
pub fn recover_hmm_with_order(fp: &FinitaryParams, tol: &ToleranceConfig, order: &[usize]) -> RecoveryOutcome {
    recover(fp, tol, Some(order))
}

fn recover(fp: &FinitaryParams, tol: &ToleranceConfig, order: Option<&[usize]>) -> RecoveryOutcome {
    let e = fp.e();
    let mut diag = RecoveryDiagnostics::default();
    let not_generic = |reason: &str, diag: RecoveryDiagnostics| RecoveryOutcome {
        kind: RecoveryKind::NotGeneric(reason.to_string()),
        diagnostics: diag,
    };

    let mf = &fp.t0 + &fp.t1;
    let det = mf.determinant();
    diag.det_transition = det;
    let scale = mf.amax();
    if !(det.is_finite() && det.abs() >= DET_REL_TOL * scale.powi(e as i32)) || scale == 0.0 {
        return not_generic(REASON_SINGULAR, diag);
    }
    let Some(mf_inv) = mf.clone().try_inverse() else {
        return not_generic(REASON_SINGULAR, diag);
    };
    let q = &fp.t0 * &mf_inv;

    let Some(eig) = complex_eigen(&q) else {
        return not_generic(REASON_EIGEN_FAILED, diag);
    };
    let gap = min_pairwise_gap(&eig.values);
    diag.min_eigen_gap = gap.is_finite().then_some(gap);
    let sorted: Vec<usize> = (0..e).collect();
    let order = match order {
        Some(o) => {
            let mut check = o.to_vec();
            check.sort_unstable();
            assert_eq!(check, sorted, "order must be a permutation of 0..{e}");
            o.to_vec()
        }
        None => sorted,
    };
    let values: Vec<C64> = order.iter().map(|&i| eig.values[i]).collect();
    diag.eigenvalues = values.iter().map(|z| (z.re, z.im)).collect();
    if gap < tol.eig_gap_tol {
        return not_generic(REASON_EIGEN_GAP, diag);
    }
    let u = DMatrix::<C64>::from_fn(e, e, |i, j| eig.vectors[(i, order[j])]);

    let usv = singular_values_complex(&u);
    let (smax, smin) = (usv[0], usv[e - 1]);
    if !(smin > 0.0) || smax / smin > EIGVEC_COND_LIMIT {
        return not_generic(REASON_DEFECTIVE, diag);
    }
    let ones = DVector::<C64>::from_element(e, C64::new(1.0, 0.0));
    let Some(c) = u.clone().lu().solve(&ones) else {
        return not_generic(REASON_DEFECTIVE, diag);
    };
    if c.iter().any(|z| z.norm() < RESCALE_TOL) {
        return not_generic(REASON_RESCALE, diag);
    }
    let s = &u * DMatrix::from_diagonal(&c);
    let Some(s_inv) = s.clone().try_inverse() else {
        return not_generic(REASON_RESCALE, diag);
    };
    diag.rescale_residual = Some((&s * &ones - &ones).map(|z| z.norm()).max());

    let m = &s_inv * to_complex(&mf) * &s;
    let pi = s.transpose() * fp.x.map(|v| C64::new(v, 0.0));
    let lambda = DMatrix::from_diagonal(&DVector::from_vec(values.clone()));
    if let Some(m_inv) = m.clone().try_inverse() {
        let o1 = &s_inv * to_complex(&fp.t1) * &s * m_inv;
        let expected = DMatrix::<C64>::identity(e, e) - &lambda;
        diag.o1_residual = Some((o1 - expected).map(|z| z.norm()).max());
    }

    let max_imag = m
        .iter()
        .chain(pi.iter())
        .chain(values.iter())
        .map(|z| z.im.abs())
        .fold(0.0, f64::max);
    diag.max_imaginary = Some(max_imag);
    if max_imag > tol.tol_stochastic {
        return RecoveryOutcome {
            kind: RecoveryKind::NotStochastic(format!("complex parameters (max imaginary part {max_imag:e})")),
            diagnostics: diag,
        };
    }

    let m_re = m.map(|z| z.re);
    let pi_re: DVector<f64> = pi.map(|z| z.re);
    let emission = DMatrix::from_fn(e, 2, |i, a| if a == 0 { values[i].re } else { 1.0 - values[i].re });

    let mut worst = (0.0, String::new());
    let mut consider = |violation: f64, what: String| {
        if violation > worst.0 {
            worst = (violation, what);
        }
    };
    let entry_violation = |x: f64| (-x).max(x - 1.0).max(0.0);
    for i in 0..e {
        for j in 0..e {
            consider(entry_violation(m_re[(i, j)]), format!("transition[{i}][{j}] = {:e}", m_re[(i, j)]));
        }
        let row_sum = m_re.row(i).sum();
        consider((row_sum - 1.0).abs(), format!("transition row {i} sums to {row_sum}"));
        for a in 0..2 {
            consider(entry_violation(emission[(i, a)]), format!("emission[{i}][{a}] = {:e}", emission[(i, a)]));
        }
        consider(entry_violation(pi_re[i]), format!("initial[{i}] = {:e}", pi_re[i]));
    }
    let pi_sum = pi_re.sum();
    consider((pi_sum - 1.0).abs(), format!("initial vector sums to {pi_sum}"));
    diag.max_stochastic_violation = Some(worst.0);
    if worst.0 > tol.tol_stochastic {
        return RecoveryOutcome { kind: RecoveryKind::NotStochastic(worst.1), diagnostics: diag };
    }

    let clamp = |x: f64| x.clamp(0.0, 1.0);
    let mut transition = m_re.map(clamp);
    for mut row in transition.row_iter_mut() {
        let sum = row.sum();
        row /= sum;
    }
    let emission = DMatrix::from_fn(e, 2, |i, a| {
        let l = clamp(values[i].re);
        if a == 0 {
            l
        } else {
            1.0 - l
        }
    });
    let mut initial = pi_re.map(clamp);
    let sum = initial.sum();
    initial /= sum;
    RecoveryOutcome {
        kind: RecoveryKind::Recovered(HmpParams { transition, emission, initial }),
        diagnostics: diag,
    }
}

fn singular_values_complex(m: &DMatrix<C64>) -> Vec<f64> {
    let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GenericityReport {
    pub generic: bool,
    pub det_transition: f64,
    /// Smallest pairwise gap between the entries of `E[:, 0]`.
    pub min_emission_gap: Option<f64>,
}

/// Checks the parameter-space part of the exceptional set: singular `M` or
/// coincident emission probabilities. Rank deficiency is not tested here.
pub fn genericity_report(params: &HmpParams, tol: &ToleranceConfig) -> GenericityReport {
    let d = params.d();
    let det = params.transition.determinant();
    let scale = params.transition.amax();
    let det_ok = scale > 0.0 && det.abs() >= DET_REL_TOL * scale.powi(d as i32);
    let col: Vec<f64> = params.emission.column(0).iter().copied().collect();
    let mut gap = f64::INFINITY;
    for i in 0..d {
        for j in i + 1..d {
            gap = gap.min((col[i] - col[j]).abs());
        }
    }
    GenericityReport {
        generic: det_ok && gap > tol.eig_gap_tol,
        det_transition: det,
        min_emission_gap: gap.is_finite().then_some(gap),
    }
}

/// Condition number of the real matrix; infinite when singular.
pub fn condition_number(m: &DMatrix<f64>) -> f64 {
    let sv = singular_values(m);
    match (sv.first(), sv.last()) {
        (Some(&a), Some(&b)) if b > 0.0 => a / b,
        _ => f64::INFINITY,
    }
}
