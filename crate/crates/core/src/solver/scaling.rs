//! Nesterov-Todd scaling for orthant and semidefinite blocks.
//!
//! Given a primal slack `s` and dual multiplier `z`, both interior to the
//! same cone product, the scaling is the unique symmetric cone automorphism
//! `W` with `W z = W^{-1} s`. The common image is the scaled point `lambda`.
//! Search directions are computed in the scaled geometry, where the
//! complementarity condition becomes `lambda o lambda = mu e` for the
//! block-wise Jordan product `o` and identity `e`.

use std::ops::Range;

use nalgebra::{DMatrix, DVector};

use crate::cones::{smat, svec, ConeBlock, ConeProduct, Point};
use crate::error::{Error, Result};
use crate::linalg::{sym_eig, symmetrize};

fn err_left_cone() -> Error {
    Error::SolverFailure {
        context: "scaling".into(),
        status: "iterate left the cone interior".into(),
    }
}

/// Symmetric square root and its inverse via eigendecomposition.
/// Fails on eigenvalues at or below zero.
fn sqrt_pair(m: &DMatrix<f64>) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let (q, l) = sym_eig(m);
    if l.iter().any(|&e| e <= 0.0) {
        return Err(err_left_cone());
    }
    let roots = l.map(f64::sqrt);
    let root = &q * DMatrix::from_diagonal(&roots) * q.transpose();
    let inv = &q * DMatrix::from_diagonal(&roots.map(|r| 1.0 / r)) * q.transpose();
    Ok((root, inv))
}

enum BlockScaling {
    Orthant {
        w: DVector<f64>,
        lambda: DVector<f64>,
    },
    Psd {
        w_half: DMatrix<f64>,
        w_half_inv: DMatrix<f64>,
        /// Scaled point as a matrix together with its eigenbasis.
        lambda_mat: DMatrix<f64>,
        lambda_q: DMatrix<f64>,
        lambda_ell: DVector<f64>,
    },
}

impl BlockScaling {
    fn compute(block: &ConeBlock, s: &DVector<f64>, z: &DVector<f64>) -> Result<Self> {
        match block {
            ConeBlock::Orthant(_) => {
                if s.iter().any(|&v| v <= 0.0) || z.iter().any(|&v| v <= 0.0) {
                    return Err(err_left_cone());
                }
                let w = DVector::from_fn(s.len(), |i, _| (s[i] / z[i]).sqrt());
                let lambda = DVector::from_fn(s.len(), |i, _| (s[i] * z[i]).sqrt());
                Ok(BlockScaling::Orthant { w, lambda })
            }
            ConeBlock::Psd(_) => {
                let s_mat = smat(s)?;
                let z_mat = smat(z)?;
                let (z_half, z_half_inv) = sqrt_pair(&z_mat)?;
                let mut inner = &z_half * &s_mat * &z_half;
                symmetrize(&mut inner);
                let (inner_half, _) = sqrt_pair(&inner)?;
                let mut w_mat = &z_half_inv * inner_half * &z_half_inv;
                symmetrize(&mut w_mat);
                let (w_half, w_half_inv) = sqrt_pair(&w_mat)?;
                let mut lambda_mat = &w_half * z_mat * &w_half;
                symmetrize(&mut lambda_mat);
                let (lambda_q, lambda_ell) = sym_eig(&lambda_mat);
                if lambda_ell.iter().any(|&e| e <= 0.0) {
                    return Err(err_left_cone());
                }
                Ok(BlockScaling::Psd {
                    w_half,
                    w_half_inv,
                    lambda_mat,
                    lambda_q,
                    lambda_ell,
                })
            }
        }
    }

    fn lambda(&self, out: &mut [f64]) {
        match self {
            BlockScaling::Orthant { lambda, .. } => {
                out.copy_from_slice(lambda.as_slice());
            }
            BlockScaling::Psd { lambda_mat, .. } => {
                let v = svec(lambda_mat).expect("scaled point is symmetric");
                out.copy_from_slice(v.as_slice());
            }
        }
    }

    /// Two-sided congruence by `w_half` (forward) or its inverse.
    fn apply_w_dir(&self, u: &DVector<f64>, forward: bool) -> Result<DVector<f64>> {
        match self {
            BlockScaling::Orthant { w, .. } => Ok(DVector::from_fn(u.len(), |i, _| {
                if forward {
                    w[i] * u[i]
                } else {
                    u[i] / w[i]
                }
            })),
            BlockScaling::Psd {
                w_half, w_half_inv, ..
            } => {
                let half = if forward { w_half } else { w_half_inv };
                let mut m = half * smat(u)? * half;
                symmetrize(&mut m);
                svec(&m)
            }
        }
    }

    fn jordan(&self, a: &DVector<f64>, b: &DVector<f64>) -> Result<DVector<f64>> {
        match self {
            BlockScaling::Orthant { .. } => {
                Ok(DVector::from_fn(a.len(), |i, _| a[i] * b[i]))
            }
            BlockScaling::Psd { .. } => {
                let am = smat(a)?;
                let bm = smat(b)?;
                let mut m = (&am * &bm + bm * am) * 0.5;
                symmetrize(&mut m);
                svec(&m)
            }
        }
    }

    /// Solves `lambda o x = d` in the block's Jordan algebra.
    fn lambda_solve(&self, d: &DVector<f64>) -> Result<DVector<f64>> {
        match self {
            BlockScaling::Orthant { lambda, .. } => {
                Ok(DVector::from_fn(d.len(), |i, _| d[i] / lambda[i]))
            }
            BlockScaling::Psd {
                lambda_q,
                lambda_ell,
                ..
            } => {
                let d_basis = lambda_q.transpose() * smat(d)? * lambda_q;
                let k = lambda_ell.len();
                let x_basis = DMatrix::from_fn(k, k, |i, j| {
                    2.0 * d_basis[(i, j)] / (lambda_ell[i] + lambda_ell[j])
                });
                let mut x = lambda_q * x_basis * lambda_q.transpose();
                symmetrize(&mut x);
                svec(&x)
            }
        }
    }

    /// Largest `alpha` with `lambda + alpha q` still in the cone.
    fn max_step(&self, q: &DVector<f64>) -> Result<f64> {
        match self {
            BlockScaling::Orthant { lambda, .. } => {
                let mut bound = f64::INFINITY;
                for i in 0..q.len() {
                    if q[i] < 0.0 {
                        bound = bound.min(-lambda[i] / q[i]);
                    }
                }
                Ok(bound)
            }
            BlockScaling::Psd {
                lambda_q,
                lambda_ell,
                ..
            } => {
                // lambda + alpha Q ell^{1/2} M ell^{1/2} Q' >= 0 with
                // M = ell^{-1/2} Q' smat(q) Q ell^{-1/2}.
                let basis = lambda_q.transpose() * smat(q)? * lambda_q;
                let k = lambda_ell.len();
                let scaled = DMatrix::from_fn(k, k, |i, j| {
                    basis[(i, j)] / (lambda_ell[i] * lambda_ell[j]).sqrt()
                });
                let (_, eigs) = sym_eig(&scaled);
                let worst = eigs.iter().cloned().fold(f64::INFINITY, f64::min);
                if worst >= 0.0 {
                    Ok(f64::INFINITY)
                } else {
                    Ok(-1.0 / worst)
                }
            }
        }
    }

    /// Dense matrix of `u -> W(W u)` on the block.
    fn h_block(&self) -> DMatrix<f64> {
        match self {
            BlockScaling::Orthant { w, .. } => {
                DMatrix::from_diagonal(&w.map(|v| v * v))
            }
            BlockScaling::Psd { w_half, .. } => {
                let w_mat = w_half * w_half;
                let dim = w_half.nrows() * (w_half.nrows() + 1) / 2;
                let mut out = DMatrix::zeros(dim, dim);
                let mut unit = DVector::zeros(dim);
                for j in 0..dim {
                    unit[j] = 1.0;
                    let basis = smat(&unit).expect("unit coordinate");
                    unit[j] = 0.0;
                    let mut m = &w_mat * basis * &w_mat;
                    symmetrize(&mut m);
                    let col = svec(&m).expect("congruence keeps symmetry");
                    out.column_mut(j).copy_from(&col);
                }
                out
            }
        }
    }
}

pub(crate) struct Scaling {
    blocks: Vec<(Range<usize>, BlockScaling)>,
    dim: usize,
}

impl Scaling {
    pub fn compute(cone: &ConeProduct, s: &Point, z: &Point) -> Result<Scaling> {
        let mut blocks = Vec::new();
        for (block, range) in cone.block_ranges() {
            let sb = DVector::from_column_slice(&s.as_slice()[range.clone()]);
            let zb = DVector::from_column_slice(&z.as_slice()[range.clone()]);
            blocks.push((range, BlockScaling::compute(&block, &sb, &zb)?));
        }
        Ok(Scaling {
            blocks,
            dim: cone.total_dim(),
        })
    }

    pub fn lambda(&self) -> Point {
        let mut out = Point::zeros(self.dim);
        for (range, block) in &self.blocks {
            block.lambda(&mut out.as_mut_slice()[range.clone()]);
        }
        out
    }

    fn map_blocks(
        &self,
        u: &Point,
        f: impl Fn(&BlockScaling, &DVector<f64>) -> Result<DVector<f64>>,
    ) -> Result<Point> {
        let mut out = Point::zeros(self.dim);
        for (range, block) in &self.blocks {
            let ub = DVector::from_column_slice(&u.as_slice()[range.clone()]);
            let r = f(block, &ub)?;
            out.rows_mut(range.start, range.len()).copy_from(&r);
        }
        Ok(out)
    }

    pub fn apply_w(&self, u: &Point) -> Result<Point> {
        self.map_blocks(u, |b, v| b.apply_w_dir(v, true))
    }

    pub fn apply_w_inv(&self, u: &Point) -> Result<Point> {
        self.map_blocks(u, |b, v| b.apply_w_dir(v, false))
    }

    pub fn jordan(&self, a: &Point, b: &Point) -> Result<Point> {
        let mut out = Point::zeros(self.dim);
        for (range, block) in &self.blocks {
            let ab = DVector::from_column_slice(&a.as_slice()[range.clone()]);
            let bb = DVector::from_column_slice(&b.as_slice()[range.clone()]);
            let r = block.jordan(&ab, &bb)?;
            out.rows_mut(range.start, range.len()).copy_from(&r);
        }
        Ok(out)
    }

    pub fn lambda_solve(&self, d: &Point) -> Result<Point> {
        self.map_blocks(d, |b, v| b.lambda_solve(v))
    }

    /// Largest step keeping `lambda + alpha q` in the cone, over all blocks.
    pub fn max_step(&self, q: &Point) -> Result<f64> {
        let mut bound = f64::INFINITY;
        for (range, block) in &self.blocks {
            let qb = DVector::from_column_slice(&q.as_slice()[range.clone()]);
            bound = bound.min(block.max_step(&qb)?);
        }
        Ok(bound)
    }

    /// Dense matrix of the quadratic scaling `u -> W(W u)`.
    pub fn h_matrix(&self) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(self.dim, self.dim);
        for (range, block) in &self.blocks {
            let hb = block.h_block();
            out.view_mut((range.start, range.start), (hb.nrows(), hb.ncols()))
                .copy_from(&hb);
        }
        out
    }
}
