//! Dense linear operators between cone coordinate spaces.
//!
//! An operator maps player-side coordinates to the opposing side. The
//! adjoint is the exact transpose of the same stored matrix, so the pairing
//! `dot(y, A x) == dot(adjoint(A) y, x)` holds to rounding.

use nalgebra::DMatrix;

use crate::cones::Point;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct LinOp {
    matrix: DMatrix<f64>,
}

impl LinOp {
    pub fn new(matrix: DMatrix<f64>) -> Self {
        LinOp { matrix }
    }

    pub fn identity(n: usize) -> Self {
        LinOp::new(DMatrix::identity(n, n))
    }

    pub fn from_columns(rows: usize, cols: &[Point]) -> Result<Self> {
        let mut m = DMatrix::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            if c.len() != rows {
                return Err(Error::dims("operator column", rows, c.len()));
            }
            m.set_column(j, c);
        }
        Ok(LinOp::new(m))
    }

    pub fn rows(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// Forward application `A x`.
    pub fn apply(&self, x: &Point) -> Result<Point> {
        if x.len() != self.cols() {
            return Err(Error::dims("operator input", self.cols(), x.len()));
        }
        Ok(&self.matrix * x)
    }

    /// Adjoint application `A^T y`, computed from the same stored matrix.
    pub fn adjoint_apply(&self, y: &Point) -> Result<Point> {
        if y.len() != self.rows() {
            return Err(Error::dims("adjoint input", self.rows(), y.len()));
        }
        Ok(self.matrix.tr_mul(y))
    }

    /// The adjoint as an operator; transposing twice restores the data.
    pub fn transposed(&self) -> LinOp {
        LinOp::new(self.matrix.transpose())
    }
}

/// Rank-one level operator `E x = beta * dot(alpha, x)`. Combined with a
/// payoff operator it shifts a game's value without moving its equilibria.
pub fn make_e(alpha: &Point, beta: &Point) -> LinOp {
    LinOp::new(beta * alpha.transpose())
}

/// Affine combination `lambda * A + kappa * E` of two operators with
/// matching shapes.
pub fn combine(lambda: f64, a: &LinOp, kappa: f64, e: &LinOp) -> Result<LinOp> {
    if a.rows() != e.rows() {
        return Err(Error::dims("combine rows", a.rows(), e.rows()));
    }
    if a.cols() != e.cols() {
        return Err(Error::dims("combine cols", a.cols(), e.cols()));
    }
    Ok(LinOp::new(a.matrix() * lambda + e.matrix() * kappa))
}
