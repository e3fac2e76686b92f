//! Feasibility and duality-gap diagnosis of a conic pair through the game
//! built on its cones.
//!
//! The pair's operator together with interior weights on the two cones
//! defines a zero-sum game over the cone bases. The sign of the game value
//! settles which side of the pair is strictly feasible: a positive value
//! yields a strictly feasible primal point, a negative value a strictly
//! feasible dual point. When the value is zero the verdict depends on where
//! the optimal-strategy sets sit relative to the objective null spaces: if
//! either set misses its null space the opposite side is strictly feasible
//! and strong duality holds, while if both sets meet them neither program is
//! strictly feasible and an objective gap may open. In that last case a
//! rescue search still looks for optimal strategies that happen to be
//! feasible for the programs with vanishing pairings; finding such a pair
//! certifies that both optimal values are zero after all.
//!
//! The module also classifies the two alternative-ray systems attached to a
//! game: exactly one of "a ray of C maps into the interior of K" and "a ray
//! of K pulls back into C under the negated adjoint" holds, and likewise for
//! the variant with the interior on the other side.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::cones::{ConeProduct, Point};
use crate::error::{Error, Result};
use crate::game::ConicGame;
use crate::programs::{check_primal, complementary_slackness, ConicPair};
use crate::reduction;
use crate::solver::{solve, SolveOptions, SolveResult, StandardProgram, Status};

/// Game values inside this band count as zero for the classification.
const ZERO_TOL: f64 = 1e-7;

/// Three-valued verdict for one side's strict feasibility.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TriState {
    Yes,
    No,
    Untested,
}

/// Outcome classes for a diagnosed pair, keyed by the game value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GapCase {
    /// Nonzero value: the side named by its sign is strictly feasible and
    /// strong duality holds for the pair.
    NonzeroValue,
    /// Zero value but at least one optimal-strategy set misses its
    /// objective null space, which still forces strict feasibility of the
    /// opposite side.
    ZeroValueResolved,
    /// Zero value and both optimal-strategy sets meet the null spaces:
    /// neither program is strictly feasible and a duality gap is possible.
    ZeroValuePathology,
}

/// Outcome of a strict-feasibility probe for one side of a pair.
#[derive(Clone, Debug)]
pub struct StrictFeasReport {
    pub strictly_feasible: bool,
    /// Largest multiple of the canonical interior direction that can be
    /// buried inside the slack cone; negative when even plain feasibility
    /// needs help, infinite when the slack can be pushed arbitrarily deep.
    pub margin: f64,
    /// Point realizing a strictly feasible slack, when one was recovered.
    pub witness: Option<Point>,
}

/// Location of an optimal-strategy set relative to a linear functional's
/// null space.
#[derive(Clone, Debug)]
pub struct NullspaceMeet {
    /// True when zero lies in the closed range below.
    pub meets: bool,
    /// Extremes of the functional over the optimal-strategy set.
    pub objective_range: (f64, f64),
}

/// Full report of [`classify`].
///
/// The strict fields only assert what the run actually established:
/// `Untested` marks a side the protocol had no need to settle or a probe
/// that failed numerically, never a guess. `optimal_x`/`optimal_y` are
/// filled only when the pathological rescue found a jointly optimal pair,
/// in which case both programs attain zero and `zero_gap_certified` is set.
#[derive(Clone, Debug)]
pub struct Diagnosis {
    pub game_value: f64,
    pub case: GapCase,
    pub strict_p: TriState,
    pub strict_d: TriState,
    /// Whether the first player's optimal set meets the null space of c.
    pub bi_meets_cperp: Option<bool>,
    /// Whether the second player's optimal set meets the null space of b.
    pub bii_meets_bperp: Option<bool>,
    pub strict_witness_p: Option<Point>,
    pub strict_witness_d: Option<Point>,
    pub optimal_x: Option<Point>,
    pub optimal_y: Option<Point>,
    pub zero_gap_certified: bool,
}

/// Winner of the first alternative pair: either a ray of K certifying the
/// game value is at most zero, or a ray of C certifying it is positive.
#[derive(Clone, Debug)]
pub enum UpperCertificate {
    /// y in K, nonzero, with -A^T y in C.
    ValueAtMostZero(Point),
    /// x in C, nonzero, with A x interior in K.
    ValuePositive(Point),
}

/// Winner of the second alternative pair: either a ray of K certifying the
/// value is negative, or a ray of C certifying it is at least zero.
#[derive(Clone, Debug)]
pub enum LowerCertificate {
    /// y in K, nonzero, with -A^T y interior in C.
    ValueNegative(Point),
    /// x in C, nonzero, with A x in K.
    ValueAtLeastZero(Point),
}

/// Verdict for the two pairs of alternative ray systems of a game. Exactly
/// one member of each pair holds; the variants carry verified witnesses.
#[derive(Clone, Debug)]
pub struct AlternativeVerdict {
    pub upper: UpperCertificate,
    pub lower: LowerCertificate,
}

fn require_optimal(res: &SolveResult, context: &str) -> Result<()> {
    if res.status != Status::Optimal {
        return Err(Error::SolverFailure {
            context: context.to_string(),
            status: format!("{:?}", res.status),
        });
    }
    Ok(())
}

fn stacked(first: &ConeProduct, rest: &[&ConeProduct]) -> ConeProduct {
    let mut blocks = first.blocks().to_vec();
    for c in rest {
        blocks.extend(c.blocks().iter().cloned());
    }
    // Invariant: inputs are valid products, so the concatenation is too.
    ConeProduct::new(blocks).expect("stacking valid cone products")
}

/// Probes strict feasibility of (P): minimize the multiple of the canonical
/// interior direction that must be added to the slack to reach the cone.
/// A negative optimum means the slack fits strictly inside on its own; the
/// probe is unbounded exactly when the slack can be pushed arbitrarily deep,
/// in which case the margin is reported as infinite.
pub fn strict_feasibility_p(pair: &ConicPair, opts: &SolveOptions) -> Result<StrictFeasReport> {
    let n = pair.cone_c().total_dim();
    let m = pair.cone_k().total_dim();
    let a = pair.op().matrix();
    let e_k = pair.cone_k().canonical_interior();

    // Variables (x, kappa); slacks (x, A x + kappa e_K - b) in C x K.
    let mut g = DMatrix::zeros(n + m, n + 1);
    g.view_mut((0, 0), (n, n)).copy_from(&(-DMatrix::identity(n, n)));
    g.view_mut((n, 0), (m, n)).copy_from(&(-a));
    g.view_mut((n, n), (m, 1)).copy_from(&(-&e_k));
    let mut h = DVector::zeros(n + m);
    h.rows_mut(n, m).copy_from(&(-pair.b()));
    let mut objective = DVector::zeros(n + 1);
    objective[n] = 1.0;
    let cone = stacked(pair.cone_c(), &[pair.cone_k()]);
    let prog = StandardProgram::new(objective, crate::operators::LinOp::new(g), h, cone)?;

    let res = solve(&prog, opts)?;
    match res.status {
        Status::Optimal => {
            let kappa = res.x[n];
            let thr = 10.0 * opts.feas_tol * (1.0 + pair.b().amax());
            let strictly_feasible = kappa < -thr;
            let witness = strictly_feasible.then(|| res.x.rows(0, n).into_owned());
            Ok(StrictFeasReport {
                strictly_feasible,
                margin: -kappa,
                witness,
            })
        }
        // Unbounded probe: any depth is reachable. Recover a witness from a
        // plain feasibility solve one unit inside the cone.
        Status::DualInfeasible => {
            let witness = interior_witness(pair, opts);
            Ok(StrictFeasReport {
                strictly_feasible: true,
                margin: f64::INFINITY,
                witness,
            })
        }
        status => Err(Error::SolverFailure {
            context: "strict feasibility probe".to_string(),
            status: format!("{:?}", status),
        }),
    }
}

/// Mirror of [`strict_feasibility_p`] for the dual side, obtained by
/// probing the swapped pair.
pub fn strict_feasibility_d(pair: &ConicPair, opts: &SolveOptions) -> Result<StrictFeasReport> {
    strict_feasibility_p(&pair.swapped(), opts)
}

/// Feasibility solve of A x - (b + e_K) in K, x in C; a solution has its
/// original slack at least one canonical unit inside the cone.
fn interior_witness(pair: &ConicPair, opts: &SolveOptions) -> Option<Point> {
    let shifted_b = pair.b() + pair.cone_k().canonical_interior();
    let deep = ConicPair::new(
        pair.cone_c().clone(),
        pair.cone_k().clone(),
        pair.op().clone(),
        shifted_b,
        DVector::zeros(pair.cone_c().total_dim()),
    )
    .expect("same shapes as the input pair");
    feasible_point(&deep, opts).ok().flatten()
}

/// Zero-objective solve over one side's feasible region. `Ok(None)` means
/// the solver could not settle the question; an infeasibility certificate
/// is an error because callers require a consistent pair.
fn feasible_point(pair: &ConicPair, opts: &SolveOptions) -> Result<Option<Point>> {
    let n = pair.cone_c().total_dim();
    let m = pair.cone_k().total_dim();
    let mut g = DMatrix::zeros(n + m, n);
    g.view_mut((0, 0), (n, n)).copy_from(&(-DMatrix::identity(n, n)));
    g.view_mut((n, 0), (m, n)).copy_from(&(-pair.op().matrix()));
    let mut h = DVector::zeros(n + m);
    h.rows_mut(n, m).copy_from(&(-pair.b()));
    let cone = stacked(pair.cone_c(), &[pair.cone_k()]);
    let prog = StandardProgram::new(DVector::zeros(n), crate::operators::LinOp::new(g), h, cone)?;
    let res = solve(&prog, opts)?;
    match res.status {
        Status::Optimal => Ok(Some(res.x)),
        Status::PrimalInfeasible => Err(Error::param(
            "pair",
            "one side is infeasible; diagnosis requires a consistent pair",
        )),
        _ => Ok(None),
    }
}

/// Largest guarantee level of the first player: the best t such that some
/// strategy x keeps A x - t beta inside K. Equals the game value.
pub fn minimax_margin_i(game: &ConicGame, opts: &SolveOptions) -> Result<f64> {
    let n = game.cone_c().total_dim();
    let m = game.cone_k().total_dim();
    let a = game.op().matrix();

    // Variables (x, t); maximize t; slacks (x, A x - t beta) in C x K.
    let mut objective = DVector::zeros(n + 1);
    objective[n] = -1.0;
    let mut eq = DMatrix::zeros(1, n + 1);
    eq.view_mut((0, 0), (1, n)).copy_from(&game.alpha().transpose());
    let mut g = DMatrix::zeros(n + m, n + 1);
    g.view_mut((0, 0), (n, n)).copy_from(&(-DMatrix::identity(n, n)));
    g.view_mut((n, 0), (m, n)).copy_from(&(-a));
    g.view_mut((n, n), (m, 1)).copy_from(game.beta());
    let cone = stacked(game.cone_c(), &[game.cone_k()]);
    let prog = StandardProgram::with_equalities(
        objective,
        crate::operators::LinOp::new(eq),
        DVector::from_element(1, 1.0),
        crate::operators::LinOp::new(g),
        DVector::zeros(n + m),
        cone,
    )?;
    let res = solve(&prog, opts)?;
    require_optimal(&res, "guarantee-level program, player I")?;
    Ok(res.x[n])
}

/// Smallest exposure level of the second player: the best t such that some
/// strategy y keeps t alpha - A^T y inside C. Equals the game value.
pub fn minimax_margin_ii(game: &ConicGame, opts: &SolveOptions) -> Result<f64> {
    minimax_margin_i(&game.swapped(), opts).map(|t| -t)
}

/// Range of `functional` over the first player's optimal-strategy set
/// {x in C : dot(alpha, x) = 1, A x - v beta in K}, and whether zero lies in
/// it. The level v is relaxed by a hair so that the numerically solved value
/// never renders the set empty.
pub fn optimal_set_meets_nullspace_i(
    game: &ConicGame,
    value: f64,
    functional: &Point,
    opts: &SolveOptions,
) -> Result<NullspaceMeet> {
    let n = game.cone_c().total_dim();
    let m = game.cone_k().total_dim();
    if functional.len() != n {
        return Err(Error::dims("functional length", n, functional.len()));
    }
    let a = game.op().matrix();
    let delta = 1e-7 * (1.0 + value.abs());

    let mut eq = DMatrix::zeros(1, n);
    eq.view_mut((0, 0), (1, n)).copy_from(&game.alpha().transpose());
    let mut g = DMatrix::zeros(n + m, n);
    g.view_mut((0, 0), (n, n)).copy_from(&(-DMatrix::identity(n, n)));
    g.view_mut((n, 0), (m, n)).copy_from(&(-a));
    let mut h = DVector::zeros(n + m);
    h.rows_mut(n, m).copy_from(&(game.beta() * -(value - delta)));
    let cone = stacked(game.cone_c(), &[game.cone_k()]);

    let mut extremes = [0.0; 2];
    for (slot, sign) in extremes.iter_mut().zip([1.0, -1.0]) {
        let prog = StandardProgram::with_equalities(
            functional * sign,
            crate::operators::LinOp::new(eq.clone()),
            DVector::from_element(1, 1.0),
            crate::operators::LinOp::new(g.clone()),
            h.clone(),
            cone.clone(),
        )?;
        let res = solve(&prog, opts)?;
        require_optimal(&res, "optimal-set extremum")?;
        *slot = sign * res.primal_obj;
    }
    let (lo, hi) = (extremes[0], extremes[1]);
    let tol = 1e-6 * (1.0 + functional.amax());
    Ok(NullspaceMeet {
        meets: lo <= tol && hi >= -tol,
        objective_range: (lo, hi),
    })
}

/// Mirror of [`optimal_set_meets_nullspace_i`] for the second player's set
/// {y in K : dot(beta, y) = 1, v alpha - A^T y in C}, via the swapped game.
pub fn optimal_set_meets_nullspace_ii(
    game: &ConicGame,
    value: f64,
    functional: &Point,
    opts: &SolveOptions,
) -> Result<NullspaceMeet> {
    optimal_set_meets_nullspace_i(&game.swapped(), -value, functional, opts)
}

/// Searches the first player's optimal-strategy set for a point that is
/// also feasible for (P) and orthogonal to c. Any such point is optimal for
/// (P) with objective zero.
fn rescue_candidate(
    pair: &ConicPair,
    alpha: &Point,
    beta: &Point,
    value: f64,
    opts: &SolveOptions,
) -> Option<Point> {
    let n = pair.cone_c().total_dim();
    let m = pair.cone_k().total_dim();
    let a = pair.op().matrix();
    let delta = 1e-7 * (1.0 + value.abs());

    // The orthogonality row is scaled for conditioning and dropped entirely
    // when the objective vanishes, where it would be vacuous and make the
    // equality block rank deficient.
    let c_scale = pair.c().amax();
    let rows = if c_scale > 0.0 { 2 } else { 1 };
    let mut eq = DMatrix::zeros(rows, n);
    eq.view_mut((0, 0), (1, n)).copy_from(&alpha.transpose());
    if c_scale > 0.0 {
        eq.view_mut((1, 0), (1, n))
            .copy_from(&(pair.c().transpose() / c_scale));
    }
    let mut eq_rhs = DVector::zeros(rows);
    eq_rhs[0] = 1.0;
    // Slacks (x, A x - (v - delta) beta, A x - b) in C x K x K.
    let mut g = DMatrix::zeros(n + 2 * m, n);
    g.view_mut((0, 0), (n, n)).copy_from(&(-DMatrix::identity(n, n)));
    g.view_mut((n, 0), (m, n)).copy_from(&(-a));
    g.view_mut((n + m, 0), (m, n)).copy_from(&(-a));
    let mut h = DVector::zeros(n + 2 * m);
    h.rows_mut(n, m).copy_from(&(beta * -(value - delta)));
    h.rows_mut(n + m, m).copy_from(&(-pair.b()));
    let cone = stacked(pair.cone_c(), &[pair.cone_k(), pair.cone_k()]);

    let prog = StandardProgram::with_equalities(
        DVector::zeros(n),
        crate::operators::LinOp::new(eq),
        eq_rhs,
        crate::operators::LinOp::new(g),
        h,
        cone,
    )
    .ok()?;
    let res = solve(&prog, opts).ok()?;
    (res.status == Status::Optimal).then_some(res.x)
}

/// Scales the optimal strategy up until adding it to a feasible anchor
/// pushes the slack strictly inside the cone. Returns the first verified
/// point, or None if the escalation never verifies.
fn escalate_strict_witness(
    pair: &ConicPair,
    anchor: Option<&Point>,
    strategy: &Point,
) -> Option<Point> {
    let n = pair.cone_c().total_dim();
    let base = anchor.cloned().unwrap_or_else(|| DVector::zeros(n));
    let mut t = 1.0;
    for _ in 0..=40 {
        let candidate = &base + strategy * t;
        if check_primal(pair, &candidate, 1e-9)
            .map(|c| c.strictly_feasible)
            .unwrap_or(false)
        {
            return Some(candidate);
        }
        t *= 2.0;
    }
    None
}

/// Classifies the pair using canonical interior base weights. The verdict
/// itself does not depend on the weights; see [`classify_with_base`] to
/// diagnose through a different game.
pub fn classify(pair: &ConicPair, opts: &SolveOptions) -> Result<Diagnosis> {
    let alpha = pair.cone_c().canonical_interior();
    let beta = pair.cone_k().canonical_interior();
    classify_with_base(pair, &alpha, &beta, opts)
}

/// Diagnoses strict feasibility and duality-gap risk of a consistent pair
/// from the value and optimal strategies of the game the weights induce.
///
/// A nonzero value settles one side directly and the report carries a
/// verified strictly feasible witness for it. A zero value triggers the
/// null-space location tests, whose outcomes decide between the resolved
/// and pathological cases; in the pathological case a rescue search may
/// still certify that both programs attain zero.
pub fn classify_with_base(
    pair: &ConicPair,
    alpha: &Point,
    beta: &Point,
    opts: &SolveOptions,
) -> Result<Diagnosis> {
    let game = ConicGame::new(
        pair.cone_c().clone(),
        pair.cone_k().clone(),
        alpha.clone(),
        beta.clone(),
        pair.op().clone(),
    )?;
    let swapped_pair = pair.swapped();
    // Consistency probes double as feasible anchors for witness building.
    let anchor_p = feasible_point(pair, opts)?;
    let anchor_d = feasible_point(&swapped_pair, opts)?;

    let mut sol = reduction::solve_game(&game, opts)?;
    // The trichotomy is discontinuous in the value, so values suspiciously
    // close to the cut get one re-solve at tighter tolerances.
    if sol.value.abs() > 1e-9 && sol.value.abs() < 1e-5 {
        let tight = SolveOptions {
            feas_tol: 1e-10,
            gap_tol: 1e-10,
            max_iter: opts.max_iter.max(300),
            verbose: opts.verbose,
        };
        if let Ok(better) = reduction::solve_game(&game, &tight) {
            sol = better;
        }
    }
    let v = sol.value;

    if v > ZERO_TOL {
        let witness = escalate_strict_witness(pair, anchor_p.as_ref(), &sol.x_star);
        let strict_p = if witness.is_some() {
            TriState::Yes
        } else {
            TriState::Untested
        };
        return Ok(Diagnosis {
            game_value: v,
            case: GapCase::NonzeroValue,
            strict_p,
            strict_d: TriState::Untested,
            bi_meets_cperp: None,
            bii_meets_bperp: None,
            strict_witness_p: witness,
            strict_witness_d: None,
            optimal_x: None,
            optimal_y: None,
            zero_gap_certified: false,
        });
    }
    if v < -ZERO_TOL {
        let witness = escalate_strict_witness(&swapped_pair, anchor_d.as_ref(), &sol.y_star);
        let strict_d = if witness.is_some() {
            TriState::Yes
        } else {
            TriState::Untested
        };
        return Ok(Diagnosis {
            game_value: v,
            case: GapCase::NonzeroValue,
            strict_p: TriState::Untested,
            strict_d,
            bi_meets_cperp: None,
            bii_meets_bperp: None,
            strict_witness_p: None,
            strict_witness_d: witness,
            optimal_x: None,
            optimal_y: None,
            zero_gap_certified: false,
        });
    }

    // Zero value: locate the optimal sets relative to the null spaces. The
    // first player's set decides the dual side and vice versa.
    let meet_i = optimal_set_meets_nullspace_i(&game, v, pair.c(), opts)
        .ok()
        .map(|r| r.meets);
    let meet_ii = optimal_set_meets_nullspace_ii(&game, v, pair.b(), opts)
        .ok()
        .map(|r| r.meets);

    let (strict_d, strict_witness_d) = match meet_i {
        Some(true) => (TriState::No, None),
        Some(false) => {
            let w = strict_feasibility_d(pair, opts)
                .ok()
                .filter(|r| r.strictly_feasible)
                .and_then(|r| r.witness);
            (TriState::Yes, w)
        }
        None => (TriState::Untested, None),
    };
    let (strict_p, strict_witness_p) = match meet_ii {
        Some(true) => (TriState::No, None),
        Some(false) => {
            let w = strict_feasibility_p(pair, opts)
                .ok()
                .filter(|r| r.strictly_feasible)
                .and_then(|r| r.witness);
            (TriState::Yes, w)
        }
        None => (TriState::Untested, None),
    };

    if meet_i == Some(true) && meet_ii == Some(true) {
        let rescue_x = rescue_candidate(pair, alpha, beta, v, opts);
        let rescue_y = rescue_candidate(&swapped_pair, beta, alpha, -v, opts);
        let mut certified = false;
        let (mut optimal_x, mut optimal_y) = (None, None);
        if let (Some(x0), Some(y0)) = (rescue_x, rescue_y) {
            if complementary_slackness(pair, &x0, &y0, 1e-6).unwrap_or(false) {
                certified = true;
                optimal_x = Some(x0);
                optimal_y = Some(y0);
            }
        }
        return Ok(Diagnosis {
            game_value: v,
            case: GapCase::ZeroValuePathology,
            strict_p,
            strict_d,
            bi_meets_cperp: meet_i,
            bii_meets_bperp: meet_ii,
            strict_witness_p,
            strict_witness_d,
            optimal_x,
            optimal_y,
            zero_gap_certified: certified,
        });
    }
    if meet_i == Some(false) || meet_ii == Some(false) {
        return Ok(Diagnosis {
            game_value: v,
            case: GapCase::ZeroValueResolved,
            strict_p,
            strict_d,
            bi_meets_cperp: meet_i,
            bii_meets_bperp: meet_ii,
            strict_witness_p,
            strict_witness_d,
            optimal_x: None,
            optimal_y: None,
            zero_gap_certified: false,
        });
    }
    // No test reported a miss and at least one failed: the resolved and
    // pathological cases cannot be told apart honestly.
    Err(Error::SolverFailure {
        context: "pair classification".to_string(),
        status: "zero value with unresolved null-space probes".to_string(),
    })
}

/// Decides both alternative ray systems from the game value and verifies
/// the returned witnesses by cone-membership checks. Fails with
/// [`Error::ValueNearZero`] when a witness does not verify, which signals
/// that the value is numerically too close to the sign cut.
pub fn alternatives(game: &ConicGame, opts: &SolveOptions) -> Result<AlternativeVerdict> {
    let sol = reduction::solve_game(game, opts)?;
    let v = sol.value;
    let near_zero = || Error::ValueNearZero { value: v };

    if v > ZERO_TOL {
        let image = game.op().apply(&sol.x_star)?;
        let interior = game.cone_k().in_interior(&image, 1e-9)?;
        let member = game.cone_c().in_cone(&sol.x_star, 1e-7)?;
        if !(interior && member) {
            return Err(near_zero());
        }
        return Ok(AlternativeVerdict {
            upper: UpperCertificate::ValuePositive(sol.x_star.clone()),
            lower: LowerCertificate::ValueAtLeastZero(sol.x_star),
        });
    }
    if v < -ZERO_TOL {
        let pullback = -game.op().adjoint_apply(&sol.y_star)?;
        let interior = game.cone_c().in_interior(&pullback, 1e-9)?;
        let member = game.cone_k().in_cone(&sol.y_star, 1e-7)?;
        if !(interior && member) {
            return Err(near_zero());
        }
        return Ok(AlternativeVerdict {
            upper: UpperCertificate::ValueAtMostZero(sol.y_star.clone()),
            lower: LowerCertificate::ValueNegative(sol.y_star),
        });
    }
    // Zero value: both weak systems hold, witnessed by the equilibrium.
    let image = game.op().apply(&sol.x_star)?;
    let pullback = -game.op().adjoint_apply(&sol.y_star)?;
    let x_ok = game.cone_k().in_cone(&image, 1e-6)?;
    let y_ok = game.cone_c().in_cone(&pullback, 1e-6)?;
    if !(x_ok && y_ok) {
        return Err(near_zero());
    }
    Ok(AlternativeVerdict {
        upper: UpperCertificate::ValueAtMostZero(sol.y_star),
        lower: LowerCertificate::ValueAtLeastZero(sol.x_star),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cones::{svec, ConeBlock, ConeProduct};
    use crate::operators::{make_e, LinOp};
    use crate::testutil::{mixed_op, mixed_pair, pt, simplex_game};
    use nalgebra::DMatrix;

    fn opts() -> SolveOptions {
        SolveOptions::default()
    }

    fn orthant_pair(a: &[f64], rows: usize, cols: usize, b: &[f64], c: &[f64]) -> ConicPair {
        ConicPair::new(
            ConeProduct::single(ConeBlock::Orthant(cols)).unwrap(),
            ConeProduct::single(ConeBlock::Orthant(rows)).unwrap(),
            LinOp::new(DMatrix::from_row_slice(rows, cols, a)),
            pt(b),
            pt(c),
        )
        .unwrap()
    }

    fn example_game() -> ConicGame {
        ConicGame::new(
            ConeProduct::single(ConeBlock::Orthant(2)).unwrap(),
            ConeProduct::single(ConeBlock::Psd(3)).unwrap(),
            pt(&[1.0, 1.0]),
            ConeProduct::single(ConeBlock::Psd(3)).unwrap().canonical_interior(),
            mixed_op(),
        )
        .unwrap()
    }

    fn rps() -> DMatrix<f64> {
        DMatrix::from_row_slice(
            3,
            3,
            &[0.0, -1.0, 1.0, 1.0, 0.0, -1.0, -1.0, 1.0, 0.0],
        )
    }

    #[test]
    fn strict_probe_reports_the_interior_margin() {
        // x in [0, 1] via two one-sided rows; deepest slack is (1,1) at x=0.
        let pair = orthant_pair(&[1.0, -1.0], 2, 1, &[-1.0, -1.0], &[0.0]);
        let rep = strict_feasibility_p(&pair, &opts()).unwrap();
        assert!(rep.strictly_feasible);
        assert!((rep.margin - 1.0).abs() < 1e-6);
        let w = rep.witness.expect("witness for a strict side");
        assert!(check_primal(&pair, &w, 1e-7).unwrap().strictly_feasible);
    }

    #[test]
    fn strict_probe_flags_boundary_only_feasibility() {
        // Slack (x, -x) >= 0 pins x = 0: feasible but never interior.
        let pair = orthant_pair(&[1.0, -1.0], 2, 1, &[0.0, 0.0], &[0.0]);
        let rep = strict_feasibility_p(&pair, &opts()).unwrap();
        assert!(!rep.strictly_feasible);
        assert!(rep.margin.abs() < 1e-6);
        assert!(rep.witness.is_none());
    }

    #[test]
    fn strict_probe_measures_infeasibility_depth() {
        // x >= 1 and x <= 0 clash; the best split leaves margin -1/2.
        let pair = orthant_pair(&[1.0, -1.0], 2, 1, &[1.0, 0.0], &[0.0]);
        let rep = strict_feasibility_p(&pair, &opts()).unwrap();
        assert!(!rep.strictly_feasible);
        assert!((rep.margin + 0.5).abs() < 1e-6);
    }

    #[test]
    fn strict_probe_reports_unbounded_depth_as_infinite() {
        // x - 1 >= 0 alone: the slack grows without bound in x.
        let pair = orthant_pair(&[1.0], 1, 1, &[1.0], &[0.0]);
        let rep = strict_feasibility_p(&pair, &opts()).unwrap();
        assert!(rep.strictly_feasible);
        assert!(rep.margin.is_infinite());
        let w = rep.witness.expect("witness from the feasibility fallback");
        assert!(check_primal(&pair, &w, 1e-7).unwrap().strictly_feasible);
    }

    #[test]
    fn dual_probe_matches_the_swapped_primal() {
        // min 2x s.t. x >= 1: dual max y s.t. y <= 2 is strict at depth 2.
        let pair = orthant_pair(&[1.0], 1, 1, &[1.0], &[2.0]);
        let rep = strict_feasibility_d(&pair, &opts()).unwrap();
        assert!(rep.strictly_feasible);
        assert!((rep.margin - 2.0).abs() < 1e-6);
        let mirrored = strict_feasibility_p(&pair.swapped(), &opts()).unwrap();
        assert_eq!(rep.strictly_feasible, mirrored.strictly_feasible);
        assert!((rep.margin - mirrored.margin).abs() < 1e-9);
    }

    #[test]
    fn both_guarantee_levels_equal_the_game_value() {
        let game = simplex_game(&DMatrix::from_row_slice(2, 2, &[3.0, 0.0, 1.0, 2.0]));
        let v1 = minimax_margin_i(&game, &opts()).unwrap();
        let v2 = minimax_margin_ii(&game, &opts()).unwrap();
        assert!((v1 - 1.5).abs() < 1e-6);
        assert!((v2 - 1.5).abs() < 1e-6);

        let cyclic = simplex_game(&rps());
        assert!(minimax_margin_i(&cyclic, &opts()).unwrap().abs() < 1e-6);
        assert!(minimax_margin_ii(&cyclic, &opts()).unwrap().abs() < 1e-6);
    }

    #[test]
    fn nullspace_meet_detects_the_shared_zero() {
        // Optimal set of player I is the single point (0,1).
        let game = example_game();
        let hit = optimal_set_meets_nullspace_i(&game, 0.0, &pt(&[-1.0, 0.0]), &opts()).unwrap();
        assert!(hit.meets);
        assert!(hit.objective_range.0.abs() < 1e-6);
        assert!(hit.objective_range.1.abs() < 1e-6);

        // The base weight itself is pinned to one on the whole set.
        let miss = optimal_set_meets_nullspace_i(&game, 0.0, &pt(&[1.0, 1.0]), &opts()).unwrap();
        assert!(!miss.meets);
        assert!((miss.objective_range.0 - 1.0).abs() < 1e-6);
        assert!((miss.objective_range.1 - 1.0).abs() < 1e-6);
    }

    #[test]
    fn nullspace_meet_handles_both_players() {
        // Unique optimal strategy (1/4, 3/4) keeps the functional at 1/4.
        let game = simplex_game(&DMatrix::from_row_slice(2, 2, &[3.0, 0.0, 1.0, 2.0]));
        let miss = optimal_set_meets_nullspace_i(&game, 1.5, &pt(&[1.0, 0.0]), &opts()).unwrap();
        assert!(!miss.meets);
        assert!((miss.objective_range.0 - 0.25).abs() < 1e-5);
        assert!((miss.objective_range.1 - 0.25).abs() < 1e-5);

        // The cyclic game's unique uniform optimum zeroes this functional.
        let cyclic = simplex_game(&rps());
        let hit =
            optimal_set_meets_nullspace_ii(&cyclic, 0.0, &pt(&[1.0, -1.0, 0.0]), &opts()).unwrap();
        assert!(hit.meets);
        assert!(hit.objective_range.0.abs() < 1e-5);
        assert!(hit.objective_range.1.abs() < 1e-5);
    }

    #[test]
    fn classifies_nonzero_value_pairs_by_sign() {
        let r = DMatrix::from_row_slice(2, 2, &[3.0, 0.0, 1.0, 2.0]);
        let pair = orthant_pair(
            r.transpose().as_slice(),
            2,
            2,
            &[1.0, 1.0],
            &[1.0, 1.0],
        );
        let diag = classify(&pair, &opts()).unwrap();
        assert_eq!(diag.case, GapCase::NonzeroValue);
        assert!((diag.game_value - 1.5).abs() < 1e-6);
        assert_eq!(diag.strict_p, TriState::Yes);
        assert_eq!(diag.strict_d, TriState::Untested);
        assert!(diag.bi_meets_cperp.is_none());
        let w = diag.strict_witness_p.expect("positive value witness");
        assert!(check_primal(&pair, &w, 1e-9).unwrap().strictly_feasible);

        // The swapped pair sees the mirrored game and settles the dual side.
        let sw = pair.swapped();
        let diag_sw = classify(&sw, &opts()).unwrap();
        assert_eq!(diag_sw.case, GapCase::NonzeroValue);
        assert!((diag_sw.game_value + 1.5).abs() < 1e-6);
        assert_eq!(diag_sw.strict_d, TriState::Yes);
        assert_eq!(diag_sw.strict_p, TriState::Untested);
        assert!(diag_sw.strict_witness_d.is_some());
    }

    #[test]
    fn classifies_the_pathological_pair() {
        let pair = mixed_pair([-1.0, 0.0]);
        let diag = classify(&pair, &opts()).unwrap();
        assert!(diag.game_value.abs() < 1e-6);
        assert_eq!(diag.case, GapCase::ZeroValuePathology);
        assert_eq!(diag.strict_p, TriState::No);
        assert_eq!(diag.strict_d, TriState::No);
        assert_eq!(diag.bi_meets_cperp, Some(true));
        assert_eq!(diag.bii_meets_bperp, Some(true));
        // The one candidate for the dual rescue is infeasible for the dual,
        // so the gap cannot be closed.
        assert!(!diag.zero_gap_certified);
        assert!(diag.optimal_x.is_none());
        assert!(diag.optimal_y.is_none());
    }

    #[test]
    fn certifies_the_rescued_zero_gap_family() {
        for rho in [0.0, 0.5, 2.0] {
            let pair = mixed_pair([rho, 0.0]);
            let diag = classify(&pair, &opts()).unwrap();
            assert_eq!(diag.case, GapCase::ZeroValuePathology, "rho = {rho}");
            assert!(diag.zero_gap_certified, "rho = {rho}");
            let x0 = diag.optimal_x.expect("rescued primal point");
            let y0 = diag.optimal_y.expect("rescued dual point");
            // Both rescued points are unique: x = (0,1) and y = e1 e1^T. The
            // dual point sits on the PSD boundary, where an off-diagonal
            // entry of size eps costs only eps^2 in eigenvalue feasibility,
            // so its recovery is looser than the solver tolerance.
            assert!((x0[0]).abs() < 1e-5 && (x0[1] - 1.0).abs() < 1e-5);
            let e11 = svec(&DMatrix::from_diagonal(&pt(&[1.0, 0.0, 0.0]))).unwrap();
            assert!((&y0 - &e11).amax() < 1e-3);
            assert!(complementary_slackness(&pair, &x0, &y0, 1e-6).unwrap());
        }
    }

    #[test]
    fn resolves_zero_value_with_interior_slack_on_both_sides() {
        // Zero operator: the game value is 0 but both programs have slack
        // bounded away from the boundary, which the null-space tests see.
        let pair = orthant_pair(&[0.0], 1, 1, &[-1.0], &[1.0]);
        let diag = classify(&pair, &opts()).unwrap();
        assert!(diag.game_value.abs() < 1e-7);
        assert_eq!(diag.case, GapCase::ZeroValueResolved);
        assert_eq!(diag.bi_meets_cperp, Some(false));
        assert_eq!(diag.bii_meets_bperp, Some(false));
        assert_eq!(diag.strict_p, TriState::Yes);
        assert_eq!(diag.strict_d, TriState::Yes);
        assert!(diag.strict_witness_p.is_some());
        assert!(diag.strict_witness_d.is_some());
    }

    #[test]
    fn classify_rejects_an_inconsistent_pair() {
        // -x >= 1 with x >= 0 is empty.
        let pair = orthant_pair(&[-1.0], 1, 1, &[1.0], &[1.0]);
        let err = classify(&pair, &opts()).unwrap_err();
        assert!(matches!(err, Error::InvalidParam { .. }));
    }

    #[test]
    fn alternatives_follow_the_value_sign() {
        let ones2 = pt(&[1.0, 1.0]);
        let orth2 = ConeProduct::single(ConeBlock::Orthant(2)).unwrap();

        let all_pay = ConicGame::new(
            orth2.clone(),
            orth2.clone(),
            ones2.clone(),
            ones2.clone(),
            make_e(&ones2, &ones2),
        )
        .unwrap();
        let verdict = alternatives(&all_pay, &opts()).unwrap();
        match (&verdict.upper, &verdict.lower) {
            (UpperCertificate::ValuePositive(x), LowerCertificate::ValueAtLeastZero(_)) => {
                let image = all_pay.op().apply(x).unwrap();
                assert!(all_pay.cone_k().in_interior(&image, 1e-9).unwrap());
            }
            other => panic!("wrong verdict for a positive game: {other:?}"),
        }

        let all_lose = ConicGame::new(
            orth2.clone(),
            orth2.clone(),
            ones2.clone(),
            ones2.clone(),
            LinOp::new(-make_e(&ones2, &ones2).matrix().clone()),
        )
        .unwrap();
        let verdict = alternatives(&all_lose, &opts()).unwrap();
        match (&verdict.upper, &verdict.lower) {
            (UpperCertificate::ValueAtMostZero(y), LowerCertificate::ValueNegative(_)) => {
                let pullback = -all_lose.op().adjoint_apply(y).unwrap();
                assert!(all_lose.cone_c().in_interior(&pullback, 1e-9).unwrap());
            }
            other => panic!("wrong verdict for a negative game: {other:?}"),
        }

        let cyclic = simplex_game(&rps());
        let verdict = alternatives(&cyclic, &opts()).unwrap();
        match (&verdict.upper, &verdict.lower) {
            (UpperCertificate::ValueAtMostZero(y), LowerCertificate::ValueAtLeastZero(x)) => {
                let image = cyclic.op().apply(x).unwrap();
                let pullback = -cyclic.op().adjoint_apply(y).unwrap();
                assert!(cyclic.cone_k().in_cone(&image, 1e-6).unwrap());
                assert!(cyclic.cone_c().in_cone(&pullback, 1e-6).unwrap());
            }
            other => panic!("wrong verdict for a zero-value game: {other:?}"),
        }
    }
}
