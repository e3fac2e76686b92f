//! Reduction of cone-base games to primal-dual conic pairs.
//!
//! A game with weights `alpha`, `beta` and operator `A` induces the pair
//!
//! ```text
//! (P)  min <alpha, x>   s.t.  A x - beta in K,  x in C
//! (D)  max <y, beta>    s.t.  alpha - A* y in C,  y in K
//! ```
//!
//! When the game value `v` is positive, both programs have optimal value
//! `1/v`, and rescaling optimal points by `v` yields optimal strategies.
//! An arbitrary game is brought into that regime by replacing `A` with
//! `lambda A + kappa beta alpha*`: the value transforms to
//! `lambda v + kappa` while the equilibria are untouched, so choosing
//! `lambda` small enough and `kappa > 1/2` makes the shifted value positive
//! and both programs strictly feasible.

use crate::error::{Error, Result};
use crate::game::{value_bounds, verify_equilibrium, ConicGame, EquilibriumReport};
use crate::operators::{combine, make_e};
use crate::programs::ConicPair;
use crate::solver::{solve_pair, PairSolution, SolveOptions, Status};
use crate::Point;

/// Scale and shift applied to the payoff operator before building the pair.
/// `lambda > 0` compresses payoffs, `kappa > 1/2` shifts the value into the
/// strictly positive, strictly feasible regime.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReductionParams {
    pub lambda: f64,
    pub kappa: f64,
}

impl ReductionParams {
    pub fn new(lambda: f64, kappa: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::param("lambda", "must be positive and finite"));
        }
        if !(kappa > 0.5 && kappa.is_finite()) {
            return Err(Error::param("kappa", "must exceed 1/2"));
        }
        Ok(ReductionParams { lambda, kappa })
    }
}

/// Pair induced by the game as-is: `b = beta`, `c = alpha`.
pub fn build_pair(game: &ConicGame) -> ConicPair {
    ConicPair::new(
        game.cone_c().clone(),
        game.cone_k().clone(),
        game.op().clone(),
        game.beta().clone(),
        game.alpha().clone(),
    )
    .expect("game dimensions are validated at construction")
}

/// Pair of the shifted game with operator `lambda A + kappa beta alpha*`.
/// The fields of `params` are not revalidated here, so degenerate values
/// (such as `kappa = 0` for structural comparisons) are accepted.
pub fn build_shifted_pair(game: &ConicGame, params: &ReductionParams) -> ConicPair {
    let e = make_e(game.alpha(), game.beta());
    let op = combine(params.lambda, game.op(), params.kappa, &e)
        .expect("rank-one shift matches the operator shape");
    ConicPair::new(
        game.cone_c().clone(),
        game.cone_k().clone(),
        op,
        game.beta().clone(),
        game.alpha().clone(),
    )
    .expect("game dimensions are validated at construction")
}

/// Scales optimal pair points to strategies: divides by the optimal value,
/// which equals the reciprocal of the (shifted) game value.
pub fn normalize_solution(
    x_hat: &Point,
    y_hat: &Point,
    pair_value: f64,
) -> Result<(Point, Point)> {
    if !(pair_value > 0.0 && pair_value.is_finite()) {
        return Err(Error::param(
            "pair_value",
            "optimal value must be positive to recover strategies",
        ));
    }
    Ok((x_hat / pair_value, y_hat / pair_value))
}

/// Inverse of [`normalize_solution`]: scales strategies back to optimal
/// points of the pair.
pub fn denormalize_solution(
    x_star: &Point,
    y_star: &Point,
    pair_value: f64,
) -> Result<(Point, Point)> {
    if !(pair_value > 0.0 && pair_value.is_finite()) {
        return Err(Error::param("pair_value", "optimal value must be positive"));
    }
    Ok((x_star * pair_value, y_star * pair_value))
}

/// Initial shift; doubled on failure up to [`MAX_KAPPA`].
pub(crate) const INITIAL_KAPPA: f64 = 0.75;
pub(crate) const MAX_KAPPA: f64 = (1 << 20) as f64;

fn escalate(
    game: &ConicGame,
    opts: &SolveOptions,
) -> Result<(ReductionParams, ConicPair, PairSolution)> {
    let (lb, ub) = value_bounds(game)?;
    let lambda = 1.0 / (2.0 * lb.abs().max(ub.abs()).max(1.0));
    let mut kappa = INITIAL_KAPPA;
    while kappa <= MAX_KAPPA {
        let params = ReductionParams { lambda, kappa };
        let pair = build_shifted_pair(game, &params);
        let sol = solve_pair(&pair, opts)?;
        if sol.status == Status::Optimal {
            return Ok((params, pair, sol));
        }
        kappa *= 2.0;
    }
    Err(Error::EscalationExhausted {
        context: format!(
            "no shift up to kappa = {MAX_KAPPA} produced a solvable pair (lambda = {lambda})"
        ),
    })
}

/// Finds reduction parameters for which the induced pair solves cleanly.
/// `lambda` is fixed from best-response value bounds; `kappa` starts at 3/4
/// and doubles until the solver converges.
pub fn choose_params(game: &ConicGame, opts: &SolveOptions) -> Result<ReductionParams> {
    escalate(game, opts).map(|(params, _, _)| params)
}

/// Value and verified equilibrium of a game, via the conic pair reduction.
#[derive(Debug, Clone)]
pub struct GameSolution {
    pub value: f64,
    pub x_star: Point,
    pub y_star: Point,
    /// Shift parameters actually used.
    pub params: ReductionParams,
    /// Optimal values of the shifted primal and dual programs.
    pub pair_values: (f64, f64),
    /// Best-response certificate for the returned equilibrium.
    pub report: EquilibriumReport,
}

/// Solves the game: shifts, solves the induced pair, rescales the optimal
/// points to strategies and certifies them against exact best responses at
/// tolerance 1e-6. A candidate that fails certification is an error, never
/// a silent return.
pub fn solve_game(game: &ConicGame, opts: &SolveOptions) -> Result<GameSolution> {
    let (params, _pair, sol) = escalate(game, opts)?;
    let val_p = sol.primal_obj;
    if !(val_p > 1e-12) {
        return Err(Error::SolverFailure {
            context: format!("shifted pair returned nonpositive value {val_p:.3e}"),
            status: "optimal".into(),
        });
    }
    let shifted_value = 1.0 / val_p;
    let value = (shifted_value - params.kappa) / params.lambda;
    let (mut x_star, mut y_star) = normalize_solution(&sol.x, &sol.y, val_p)?;
    // Pin the base constraints exactly; the factors are 1 + O(solver gap).
    x_star /= game.alpha().dot(&x_star);
    y_star /= game.beta().dot(&y_star);
    let report = verify_equilibrium(game, &x_star, &y_star, 1e-6)?;
    if !report.ok {
        return Err(Error::EquilibriumCheck {
            res_i: report.residual_i,
            res_ii: report.residual_ii,
            tol: 1e-6,
        });
    }
    Ok(GameSolution {
        value,
        x_star,
        y_star,
        params,
        pair_values: (val_p, sol.dual_obj),
        report,
    })
}
