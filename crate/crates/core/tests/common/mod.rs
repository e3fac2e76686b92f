//! Shared generators for the integration suites, built on the public API
//! only. Interior points stay interior by bounded-noise construction, so
//! feasibility of the generated instances is guaranteed, not sampled.

// Each test binary compiles this module separately, so helpers used by
// only one suite would trip the lint in the others.
#![allow(dead_code)]

use conic_games::cones::{ConeBlock, ConeProduct, Point};
use conic_games::game::ConicGame;
use conic_games::operators::LinOp;
use conic_games::programs::ConicPair;
use nalgebra::{DMatrix, DVector};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn pt(xs: &[f64]) -> Point {
    DVector::from_column_slice(xs)
}

/// One or two blocks mixing small orthants and semidefinite cones.
pub fn random_cone(rng: &mut ChaCha8Rng) -> ConeProduct {
    let count = rng.random_range(1..=2usize);
    let blocks = (0..count)
        .map(|_| {
            if rng.random_bool(0.5) {
                ConeBlock::Orthant(rng.random_range(1..=3))
            } else {
                ConeBlock::Psd(rng.random_range(2..=3))
            }
        })
        .collect();
    ConeProduct::new(blocks).unwrap()
}

/// Canonical interior point plus noise small enough that interiority is
/// guaranteed by diagonal dominance for the block sizes in use.
pub fn random_interior(rng: &mut ChaCha8Rng, cone: &ConeProduct) -> Point {
    let mut v = cone.canonical_interior();
    for i in 0..v.len() {
        v[i] += rng.random_range(-0.08..0.08);
    }
    assert!(cone.in_interior(&v, 1e-9).unwrap());
    v
}

pub fn random_op(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> LinOp {
    LinOp::new(DMatrix::from_fn(rows, cols, |_, _| {
        rng.random_range(-1.0..1.0)
    }))
}

/// Consistent pair that is strictly feasible on both sides, returned with
/// one interior-slack primal point and one interior-slack dual point.
pub fn consistent_pair(rng: &mut ChaCha8Rng) -> (ConicPair, Point, Point) {
    let cone_c = random_cone(rng);
    let cone_k = random_cone(rng);
    let op = random_op(rng, cone_k.total_dim(), cone_c.total_dim());
    let x0 = random_interior(rng, &cone_c);
    let s0 = random_interior(rng, &cone_k);
    let b = op.apply(&x0).unwrap() - s0;
    let y0 = random_interior(rng, &cone_k);
    let w0 = random_interior(rng, &cone_c);
    let c = op.adjoint_apply(&y0).unwrap() + w0;
    let pair = ConicPair::new(cone_c, cone_k, op, b, c).unwrap();
    (pair, x0, y0)
}

/// Consistent pair whose primal slack cone starts with a one-dimensional
/// orthant block pinned to zero by a vanishing operator row, so the primal
/// is feasible with margin exactly zero and never strictly feasible.
pub fn flat_row_pair(rng: &mut ChaCha8Rng) -> ConicPair {
    let cone_c = random_cone(rng);
    let mut blocks = vec![ConeBlock::Orthant(1)];
    blocks.extend_from_slice(random_cone(rng).blocks());
    let cone_k = ConeProduct::new(blocks).unwrap();
    let mut a = DMatrix::from_fn(cone_k.total_dim(), cone_c.total_dim(), |_, _| {
        rng.random_range(-1.0..1.0)
    });
    a.row_mut(0).fill(0.0);
    let op = LinOp::new(a);
    let x0 = random_interior(rng, &cone_c);
    let mut s0 = random_interior(rng, &cone_k);
    s0[0] = 0.0;
    let mut b = op.apply(&x0).unwrap() - s0;
    b[0] = 0.0;
    let y0 = random_interior(rng, &cone_k);
    let w0 = random_interior(rng, &cone_c);
    let c = op.adjoint_apply(&y0).unwrap() + w0;
    ConicPair::new(cone_c, cone_k, op, b, c).unwrap()
}

/// Random game over random cone products with canonical base functionals.
pub fn random_game(rng: &mut ChaCha8Rng) -> ConicGame {
    let cone_c = random_cone(rng);
    let cone_k = random_cone(rng);
    let alpha = cone_c.canonical_interior();
    let beta = cone_k.canonical_interior();
    let op = random_op(rng, cone_k.total_dim(), cone_c.total_dim());
    ConicGame::new(cone_c, cone_k, alpha, beta, op).unwrap()
}

/// Shifts the payoff operator by `delta` times the rank-one base pairing,
/// which moves the game value by exactly `delta`.
pub fn shift_game(game: &ConicGame, delta: f64) -> ConicGame {
    let shifted = game.op().matrix() + delta * game.beta() * game.alpha().transpose();
    ConicGame::new(
        game.cone_c().clone(),
        game.cone_k().clone(),
        game.alpha().clone(),
        game.beta().clone(),
        LinOp::new(shifted),
    )
    .unwrap()
}
