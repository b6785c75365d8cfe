//! Small dense linear-algebra helpers on top of nalgebra.

use nalgebra::{Complex, DMatrix, DVector};

pub type C64 = Complex<f64>;

/// Singular values in descending order.
pub fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Gaussian elimination with complete pivoting, stopped after `k` pivots.
///
/// Returns the original row and column indices of the pivots, or `None` if a
/// pivot falls to `threshold` or below before `k` are found.
pub fn complete_pivot_indices(m: &DMatrix<f64>, k: usize, threshold: f64) -> Option<(Vec<usize>, Vec<usize>)> {
    let (nr, nc) = m.shape();
    if k > nr.min(nc) {
        return None;
    }
    let mut a = m.clone();
    let mut rows: Vec<usize> = (0..nr).collect();
    let mut cols: Vec<usize> = (0..nc).collect();
    for step in 0..k {
        let (mut pi, mut pj, mut best) = (step, step, -1.0);
        for i in step..nr {
            for j in step..nc {
                let v = a[(i, j)].abs();
                if v > best {
                    best = v;
                    pi = i;
                    pj = j;
                }
            }
        }
        if !(best > threshold) {
            return None;
        }
        a.swap_rows(step, pi);
        a.swap_columns(step, pj);
        rows.swap(step, pi);
        cols.swap(step, pj);
        let pivot = a[(step, step)];
        for i in step + 1..nr {
            let f = a[(i, step)] / pivot;
            if f != 0.0 {
                for j in step..nc {
                    let delta = f * a[(step, j)];
                    a[(i, j)] -= delta;
                }
            }
        }
    }
    rows.truncate(k);
    cols.truncate(k);
    Some((rows, cols))
}

/// Determinant by LU with partial pivoting.
pub fn det_partial_pivot(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "determinant of a non-square matrix");
    let mut a = m.clone();
    let mut det = 1.0;
    for col in 0..n {
        let (p, best) = (col..n)
            .map(|i| (i, a[(i, col)].abs()))
            .fold((col, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best == 0.0 {
            return 0.0;
        }
        if p != col {
            a.swap_rows(p, col);
            det = -det;
        }
        let pivot = a[(col, col)];
        det *= pivot;
        for i in col + 1..n {
            let f = a[(i, col)] / pivot;
            for j in col + 1..n {
                let delta = f * a[(col, j)];
                a[(i, j)] -= delta;
            }
        }
    }
    det
}

pub fn to_complex(m: &DMatrix<f64>) -> DMatrix<C64> {
    m.map(|x| C64::new(x, 0.0))
}

/// Eigenpairs of a general real matrix.
#[derive(Debug, Clone)]
pub struct ComplexEigen {
    /// Sorted by real part, then imaginary part.
    pub values: Vec<C64>,
    /// Column `i` is a unit eigenvector for `values[i]`.
    pub vectors: DMatrix<C64>,
}

/// Eigenvalues from the real Schur form; each eigenvector is the right
/// singular vector of `A - λI` belonging to its smallest singular value.
pub fn complex_eigen(a: &DMatrix<f64>) -> Option<ComplexEigen> {
    let n = a.nrows();
    let mut values: Vec<C64> = a.clone().complex_eigenvalues().iter().copied().collect();
    if values.len() != n || values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return None;
    }
    values.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
    let ac = to_complex(a);
    let mut vectors = DMatrix::<C64>::zeros(n, n);
    for (k, &lambda) in values.iter().enumerate() {
        let shifted = &ac - DMatrix::<C64>::identity(n, n) * lambda;
        let svd = shifted.svd(false, true);
        let v_t = svd.v_t?;
        let (idx, _) = svd
            .singular_values
            .iter()
            .enumerate()
            .fold((0, f64::INFINITY), |acc, (i, &s)| if s < acc.1 { (i, s) } else { acc });
        let v: DVector<C64> = v_t.row(idx).transpose().map(|z| z.conj());
        vectors.set_column(k, &v);
    }
    Some(ComplexEigen { values, vectors })
}

/// Smallest pairwise distance between eigenvalues; infinite for fewer than two.
pub fn min_pairwise_gap(values: &[C64]) -> f64 {
    let mut gap = f64::INFINITY;
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            gap = gap.min((values[i] - values[j]).norm());
        }
    }
    gap
}
