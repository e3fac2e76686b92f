//! Two-player zero-sum games whose strategy sets are bases of cones.
//!
//! Player I picks `x` in the base `S = {x in C : <alpha, x> = 1}` and
//! maximizes; player II picks `y` in `T = {y in K : <y, beta> = 1}` and
//! minimizes; the payoff is the bilinear form `<y, op x>`. The weights
//! `alpha` and `beta` must be interior to their cones so both bases are
//! compact, which makes the value and an equilibrium exist.

use nalgebra::DVector;

use crate::cones::{smat, svec, ConeBlock, ConeProduct, Point};
use crate::error::{Error, Result};
use crate::linalg::{max_eigpair, min_eigpair, sym_apply, symmetrize};
use crate::operators::LinOp;

/// Relative tolerance for strategy membership pre-conditions.
const STRATEGY_TOL: f64 = 1e-7;

/// Eigenvalue floor when inverting base weights inside a block.
const WEIGHT_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct ConicGame {
    cone_c: ConeProduct,
    cone_k: ConeProduct,
    alpha: Point,
    beta: Point,
    op: LinOp,
}

impl ConicGame {
    /// Validates shapes and requires both base weights to be interior to
    /// their cones (checked at relative tolerance 1e-9).
    pub fn new(
        cone_c: ConeProduct,
        cone_k: ConeProduct,
        alpha: Point,
        beta: Point,
        op: LinOp,
    ) -> Result<Self> {
        if op.cols() != cone_c.total_dim() {
            return Err(Error::dims("payoff operator columns", cone_c.total_dim(), op.cols()));
        }
        if op.rows() != cone_k.total_dim() {
            return Err(Error::dims("payoff operator rows", cone_k.total_dim(), op.rows()));
        }
        if alpha.len() != cone_c.total_dim() {
            return Err(Error::dims("alpha length", cone_c.total_dim(), alpha.len()));
        }
        if beta.len() != cone_k.total_dim() {
            return Err(Error::dims("beta length", cone_k.total_dim(), beta.len()));
        }
        if !cone_c.in_interior(&alpha, 1e-9)? {
            return Err(Error::param("alpha", "must be interior to the first cone"));
        }
        if !cone_k.in_interior(&beta, 1e-9)? {
            return Err(Error::param("beta", "must be interior to the second cone"));
        }
        Ok(ConicGame {
            cone_c,
            cone_k,
            alpha,
            beta,
            op,
        })
    }

    pub fn cone_c(&self) -> &ConeProduct {
        &self.cone_c
    }

    pub fn cone_k(&self) -> &ConeProduct {
        &self.cone_k
    }

    pub fn alpha(&self) -> &Point {
        &self.alpha
    }

    pub fn beta(&self) -> &Point {
        &self.beta
    }

    pub fn op(&self) -> &LinOp {
        &self.op
    }

    /// The same game from player II's seat: roles, cones and weights swap
    /// and the payoff operator is negated and transposed. The value flips
    /// sign and equilibria carry over with the components exchanged.
    pub fn swapped(&self) -> ConicGame {
        ConicGame {
            cone_c: self.cone_k.clone(),
            cone_k: self.cone_c.clone(),
            alpha: self.beta.clone(),
            beta: self.alpha.clone(),
            op: LinOp::new(-self.op.matrix().transpose()),
        }
    }

    fn require_strategy(
        &self,
        v: &Point,
        cone: &ConeProduct,
        weight: &Point,
        side: &'static str,
    ) -> Result<()> {
        if v.len() != cone.total_dim() {
            return Err(Error::dims("strategy length", cone.total_dim(), v.len()));
        }
        let worst_margin = cone
            .margins(v)?
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        let cone_violation = (-worst_margin).max(0.0);
        let base_violation = (weight.dot(v) - 1.0).abs();
        let scale = 1.0 + v.amax();
        let residual = cone_violation.max(base_violation);
        if residual > STRATEGY_TOL * scale {
            return Err(Error::NotAStrategy { side, residual });
        }
        Ok(())
    }

    /// Checks that `x` is a strategy for player I.
    pub fn check_strategy_i(&self, x: &Point) -> Result<()> {
        self.require_strategy(x, &self.cone_c, &self.alpha, "player I")
    }

    /// Checks that `y` is a strategy for player II.
    pub fn check_strategy_ii(&self, y: &Point) -> Result<()> {
        self.require_strategy(y, &self.cone_k, &self.beta, "player II")
    }

    /// Bilinear payoff `<y, op x>`; both points must be strategies.
    pub fn payoff(&self, x: &Point, y: &Point) -> Result<f64> {
        self.check_strategy_i(x)?;
        self.check_strategy_ii(y)?;
        Ok(y.dot(&self.op.apply(x)?))
    }
}

/// Extremal payoff against a fixed opponent strategy, with a strategy
/// attaining it.
#[derive(Debug, Clone)]
pub struct BestResponse {
    pub value: f64,
    pub strategy: Point,
}

/// Extremizes `<lin, v>` over the base `{v in cone : <weight, v> = 1}`.
/// The optimum is attained on an extreme ray of a single block: coordinate
/// directions for orthant blocks, weighted eigenvectors for semidefinite
/// blocks. Ties resolve to the earliest block and lowest coordinate.
fn extremal_on_base(
    cone: &ConeProduct,
    weight: &Point,
    lin: &Point,
    maximize: bool,
) -> Result<BestResponse> {
    let mut best_val = if maximize {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    };
    let mut best: Option<(std::ops::Range<usize>, DVector<f64>)> = None;
    for (block, range) in cone.block_ranges() {
        let w = DVector::from_column_slice(&weight.as_slice()[range.clone()]);
        let l = DVector::from_column_slice(&lin.as_slice()[range.clone()]);
        let (val, vec) = match block {
            ConeBlock::Orthant(n) => {
                let mut idx = 0;
                for i in 1..n {
                    let better = if maximize {
                        l[i] / w[i] > l[idx] / w[idx]
                    } else {
                        l[i] / w[i] < l[idx] / w[idx]
                    };
                    if better {
                        idx = i;
                    }
                }
                let mut v = DVector::zeros(n);
                v[idx] = 1.0 / w[idx];
                (l[idx] / w[idx], v)
            }
            ConeBlock::Psd(_) => {
                let w_mat = smat(&w)?;
                let l_mat = smat(&l)?;
                let w_inv_half = sym_apply(&w_mat, |e| 1.0 / e.max(WEIGHT_FLOOR).sqrt());
                let mut m = &w_inv_half * l_mat * &w_inv_half;
                symmetrize(&mut m);
                let (val, u) = if maximize {
                    max_eigpair(&m)
                } else {
                    min_eigpair(&m)
                };
                let dir = &w_inv_half * u;
                let mut outer = &dir * dir.transpose();
                symmetrize(&mut outer);
                let mut v = svec(&outer)?;
                // Pin the base constraint exactly despite the floor.
                let mass = v.dot(&w);
                if mass <= 0.0 {
                    return Err(Error::param("weight", "base weight is numerically singular"));
                }
                v /= mass;
                (val, v)
            }
        };
        let better = if maximize {
            val > best_val
        } else {
            val < best_val
        };
        if better {
            best_val = val;
            best = Some((range, vec));
        }
    }
    let (range, vec) = best.expect("cone products are nonempty");
    let mut strategy = Point::zeros(cone.total_dim());
    strategy.rows_mut(range.start, range.len()).copy_from(&vec);
    Ok(BestResponse {
        value: best_val,
        strategy,
    })
}

/// Player I's best payoff against a fixed `y`, with a maximizing strategy.
pub fn best_response_i(game: &ConicGame, y: &Point) -> Result<BestResponse> {
    game.check_strategy_ii(y)?;
    let lin = game.op.adjoint_apply(y)?;
    extremal_on_base(&game.cone_c, &game.alpha, &lin, true)
}

/// Player II's best (smallest) payoff against a fixed `x`, with a
/// minimizing strategy.
pub fn best_response_ii(game: &ConicGame, x: &Point) -> Result<BestResponse> {
    game.check_strategy_i(x)?;
    let lin = game.op.apply(x)?;
    extremal_on_base(&game.cone_k, &game.beta, &lin, false)
}

/// Certified bounds `lb <= value <= ub` from best responses at the
/// canonical interior strategies.
pub fn value_bounds(game: &ConicGame) -> Result<(f64, f64)> {
    let mut x0 = game.cone_c.canonical_interior();
    x0 /= game.alpha.dot(&x0);
    let mut y0 = game.cone_k.canonical_interior();
    y0 /= game.beta.dot(&y0);
    let lb = best_response_ii(game, &x0)?.value;
    let ub = best_response_i(game, &y0)?.value;
    Ok((lb, ub))
}

/// Outcome of an equilibrium check. `value` is the payoff at the candidate
/// pair; the residuals measure how much either player could still gain.
#[derive(Debug, Clone)]
pub struct EquilibriumReport {
    pub value: f64,
    pub residual_i: f64,
    pub residual_ii: f64,
    pub ok: bool,
}

/// Verifies an equilibrium candidate by comparing the payoff at `(x, y)`
/// with both best-response values. Residuals are accepted up to
/// `tol * (1 + |value|)`.
pub fn verify_equilibrium(
    game: &ConicGame,
    x: &Point,
    y: &Point,
    tol: f64,
) -> Result<EquilibriumReport> {
    let value = game.payoff(x, y)?;
    let residual_i = best_response_i(game, y)?.value - value;
    let residual_ii = value - best_response_ii(game, x)?.value;
    let scale = 1.0 + value.abs();
    let ok = residual_i <= tol * scale && residual_ii <= tol * scale;
    Ok(EquilibriumReport {
        value,
        residual_i,
        residual_ii,
        ok,
    })
}

/// Mass interval `p <= <weight, v> <= q` for a leveled strategy set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeveledSpec {
    pub p: f64,
    pub q: f64,
}

impl LeveledSpec {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        if !(p > 0.0 && p.is_finite() && q.is_finite() && p <= q) {
            return Err(Error::param("leveled spec", "requires 0 < p <= q"));
        }
        Ok(LeveledSpec { p, q })
    }
}

/// Rescales a game so that leveled strategy sets become ordinary bases:
/// player I's weight is divided by their upper mass `q` and player II's by
/// their lower mass `p`. When the game value is positive (shift first
/// otherwise), the maximizer spends the largest allowed mass and the
/// minimizer the smallest, so the rescaled game has the leveled value.
pub fn normalize_leveled(
    game: &ConicGame,
    spec_i: &LeveledSpec,
    spec_ii: &LeveledSpec,
) -> Result<ConicGame> {
    ConicGame::new(
        game.cone_c.clone(),
        game.cone_k.clone(),
        &game.alpha / spec_i.q,
        &game.beta / spec_ii.p,
        game.op.clone(),
    )
}
