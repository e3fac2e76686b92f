//! Small dense symmetric-matrix helpers shared by the cone and solver code.

use nalgebra::{DMatrix, DVector};

/// Eigendecomposition of a symmetric matrix: (eigenvectors, eigenvalues).
pub(crate) fn sym_eig(m: &DMatrix<f64>) -> (DMatrix<f64>, DVector<f64>) {
    let se = m.clone().symmetric_eigen();
    (se.eigenvectors, se.eigenvalues)
}

pub(crate) fn min_eigval(m: &DMatrix<f64>) -> f64 {
    if m.nrows() == 1 {
        return m[(0, 0)];
    }
    let (_, vals) = sym_eig(m);
    vals.min()
}

/// Smallest eigenvalue together with a unit eigenvector.
pub(crate) fn min_eigpair(m: &DMatrix<f64>) -> (f64, DVector<f64>) {
    let (q, vals) = sym_eig(m);
    let mut idx = 0;
    for i in 1..vals.len() {
        if vals[i] < vals[idx] {
            idx = i;
        }
    }
    (vals[idx], q.column(idx).into_owned())
}

/// Largest eigenvalue together with a unit eigenvector.
pub(crate) fn max_eigpair(m: &DMatrix<f64>) -> (f64, DVector<f64>) {
    let (q, vals) = sym_eig(m);
    let mut idx = 0;
    for i in 1..vals.len() {
        if vals[i] > vals[idx] {
            idx = i;
        }
    }
    (vals[idx], q.column(idx).into_owned())
}

/// Applies a scalar function to the spectrum: returns Q f(L) Q^T.
pub(crate) fn sym_apply(m: &DMatrix<f64>, f: impl Fn(f64) -> f64) -> DMatrix<f64> {
    let (q, vals) = sym_eig(m);
    let d = DMatrix::from_diagonal(&vals.map(f));
    &q * d * q.transpose()
}

/// Symmetrizes in place; used after products that are symmetric in exact
/// arithmetic but drift in floating point.
pub(crate) fn symmetrize(m: &mut DMatrix<f64>) {
    let n = m.nrows();
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = avg;
            m[(j, i)] = avg;
        }
    }
}
