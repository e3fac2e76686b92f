//! Seeded random generators and small fixtures shared by unit tests.

use nalgebra::DMatrix;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::cones::{svec, ConeBlock, ConeProduct, Point};
use crate::game::ConicGame;
use crate::operators::LinOp;
use crate::programs::ConicPair;

pub(crate) fn pt(xs: &[f64]) -> Point {
    Point::from_column_slice(xs)
}

pub(crate) fn random_interior(c: &ConeProduct, rng: &mut ChaCha8Rng) -> Point {
    let mut v = Point::zeros(c.total_dim());
    for (b, r) in c.block_ranges() {
        match b {
            ConeBlock::Orthant(_) => {
                for i in r {
                    v[i] = rng.random_range(0.2..2.0);
                }
            }
            ConeBlock::Psd(n) => {
                let g = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
                let m = &g * g.transpose() + DMatrix::identity(n, n) * 0.3;
                v.rows_mut(r.start, r.len()).copy_from(&svec(&m).unwrap());
            }
        }
    }
    v
}

pub(crate) fn random_member(c: &ConeProduct, rng: &mut ChaCha8Rng) -> Point {
    let mut v = Point::zeros(c.total_dim());
    for (b, r) in c.block_ranges() {
        match b {
            ConeBlock::Orthant(_) => {
                for i in r {
                    v[i] = rng.random_range(0.0..1.0);
                }
            }
            ConeBlock::Psd(n) => {
                let g = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
                let m = &g * g.transpose();
                v.rows_mut(r.start, r.len()).copy_from(&svec(&m).unwrap());
            }
        }
    }
    v
}

pub(crate) fn random_cone(rng: &mut ChaCha8Rng, max_blocks: usize, max_size: usize) -> ConeProduct {
    let nblocks = rng.random_range(1..=max_blocks);
    let blocks = (0..nblocks)
        .map(|_| {
            let size = rng.random_range(1..=max_size);
            if rng.random_bool(0.5) {
                ConeBlock::Orthant(size)
            } else {
                ConeBlock::Psd(size)
            }
        })
        .collect();
    ConeProduct::new(blocks).unwrap()
}

pub(crate) fn random_op(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> LinOp {
    LinOp::new(DMatrix::from_fn(rows, cols, |_, _| {
        rng.random_range(-1.5..1.5)
    }))
}

/// Operator of the running mixed example: a two-dimensional orthant side
/// mapped into 3x3 symmetric matrices, x -> x1*M1 + x2*M2 with
/// M1 = [[0,1,0],[1,0,0],[0,0,-1]] and M2 = diag(0,1,0).
pub(crate) fn mixed_op() -> LinOp {
    let m1 = DMatrix::from_row_slice(3, 3, &[0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, -1.0]);
    let m2 = DMatrix::from_row_slice(3, 3, &[0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
    LinOp::from_columns(6, &[svec(&m1).unwrap(), svec(&m2).unwrap()]).unwrap()
}

/// Simplex-vs-simplex game with payoff x^T r y (player I maximizing).
pub(crate) fn simplex_game(r: &DMatrix<f64>) -> ConicGame {
    let (m, n) = r.shape();
    ConicGame::new(
        ConeProduct::single(ConeBlock::Orthant(m)).unwrap(),
        ConeProduct::single(ConeBlock::Orthant(n)).unwrap(),
        Point::repeat(m, 1.0),
        Point::repeat(n, 1.0),
        LinOp::new(r.transpose()),
    )
    .unwrap()
}

/// The mixed pair with objective c and right-hand side B = diag(0,-1,-1).
pub(crate) fn mixed_pair(c: [f64; 2]) -> ConicPair {
    let cone_c = ConeProduct::single(ConeBlock::Orthant(2)).unwrap();
    let cone_k = ConeProduct::single(ConeBlock::Psd(3)).unwrap();
    let b_mat = DMatrix::from_diagonal(&pt(&[0.0, -1.0, -1.0]));
    ConicPair::new(
        cone_c,
        cone_k,
        mixed_op(),
        svec(&b_mat).unwrap(),
        pt(&c),
    )
    .unwrap()
}

/// Feasible-by-construction pair: b = A x0 - s0 and c = A^T y0 + w0 for
/// cone members x0, s0, y0, w0. Returns the pair with the two certificates.
pub(crate) fn feasible_pair(
    rng: &mut ChaCha8Rng,
    strict: bool,
) -> (ConicPair, Point, Point) {
    let cone_c = random_cone(rng, 2, 3);
    let cone_k = random_cone(rng, 2, 3);
    let a = random_op(rng, cone_k.total_dim(), cone_c.total_dim());
    let x0 = if strict {
        random_interior(&cone_c, rng)
    } else {
        random_member(&cone_c, rng)
    };
    let s0 = if strict {
        random_interior(&cone_k, rng)
    } else {
        random_member(&cone_k, rng)
    };
    let y0 = if strict {
        random_interior(&cone_k, rng)
    } else {
        random_member(&cone_k, rng)
    };
    let w0 = if strict {
        random_interior(&cone_c, rng)
    } else {
        random_member(&cone_c, rng)
    };
    let b = a.apply(&x0).unwrap() - s0;
    let c = a.adjoint_apply(&y0).unwrap() + w0;
    let pair = ConicPair::new(cone_c, cone_k, a, b, c).unwrap();
    (pair, x0, y0)
}
