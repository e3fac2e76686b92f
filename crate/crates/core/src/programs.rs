//! Primal-dual conic pair data and certificate checks.
//!
//! A pair couples the programs
//!
//! ```text
//! (P)  minimize dot(c, x)   subject to  A x - b in K,  x in C
//! (D)  maximize dot(y, b)   subject to  c - A^T y in C,  y in K
//! ```
//!
//! over self-dual cone products C and K, so dual-cone membership tests run
//! on the same coordinates as the cones themselves. For feasible points the
//! primal objective never falls below the dual one, and a feasible pair
//! whose two pairings `dot(y, Ax - b)` and `dot(c - A^T y, x)` both vanish
//! certifies that the two points are jointly optimal.

use crate::cones::{ConeProduct, Point};
use crate::error::{Error, Result};
use crate::operators::LinOp;

#[derive(Clone, Debug)]
pub struct ConicPair {
    cone_c: ConeProduct,
    cone_k: ConeProduct,
    op: LinOp,
    b: Point,
    c: Point,
}

impl ConicPair {
    pub fn new(
        cone_c: ConeProduct,
        cone_k: ConeProduct,
        op: LinOp,
        b: Point,
        c: Point,
    ) -> Result<Self> {
        if op.rows() != cone_k.total_dim() {
            return Err(Error::dims("operator rows", cone_k.total_dim(), op.rows()));
        }
        if op.cols() != cone_c.total_dim() {
            return Err(Error::dims("operator cols", cone_c.total_dim(), op.cols()));
        }
        if b.len() != cone_k.total_dim() {
            return Err(Error::dims("b", cone_k.total_dim(), b.len()));
        }
        if c.len() != cone_c.total_dim() {
            return Err(Error::dims("c", cone_c.total_dim(), c.len()));
        }
        Ok(ConicPair {
            cone_c,
            cone_k,
            op,
            b,
            c,
        })
    }

    pub fn cone_c(&self) -> &ConeProduct {
        &self.cone_c
    }

    pub fn cone_k(&self) -> &ConeProduct {
        &self.cone_k
    }

    pub fn op(&self) -> &LinOp {
        &self.op
    }

    pub fn b(&self) -> &Point {
        &self.b
    }

    pub fn c(&self) -> &Point {
        &self.c
    }

    /// Primal slack `A x - b`.
    pub fn primal_slack(&self, x: &Point) -> Result<Point> {
        Ok(self.op.apply(x)? - &self.b)
    }

    /// Dual slack `c - A^T y`.
    pub fn dual_slack(&self, y: &Point) -> Result<Point> {
        Ok(&self.c - self.op.adjoint_apply(y)?)
    }

    /// The dual program recast as a primal over the exchanged cones:
    /// operator `-A^T`, offsets `b' = -c` and `c' = -b`. A point is
    /// dual-feasible for this pair exactly when it is primal-feasible for
    /// the swapped one (strictness included), and objective values negate.
    /// Swapping twice restores the original pair.
    pub fn swapped(&self) -> ConicPair {
        ConicPair {
            cone_c: self.cone_k.clone(),
            cone_k: self.cone_c.clone(),
            op: LinOp::new(-self.op.matrix().transpose()),
            b: -&self.c,
            c: -&self.b,
        }
    }
}

/// Outcome of a feasibility check for one side of the pair.
#[derive(Clone, Debug)]
pub struct CertCheck {
    pub feasible: bool,
    /// Feasible with the slack in the interior of its cone.
    pub strictly_feasible: bool,
    pub objective: f64,
    /// Per-block minimal eigenvalues: first the point's own blocks, then
    /// the slack's blocks.
    pub residuals: Vec<f64>,
}

/// Checks `x` against (P): membership in C and the slack `A x - b` in K.
/// Strict feasibility asks for the slack to be interior.
pub fn check_primal(pair: &ConicPair, x: &Point, tol: f64) -> Result<CertCheck> {
    let slack = pair.primal_slack(x)?;
    let feasible =
        pair.cone_c.in_cone(x, tol)? && pair.cone_k.in_cone(&slack, tol)?;
    let strictly_feasible = feasible && pair.cone_k.in_interior(&slack, tol)?;
    let mut residuals = pair.cone_c.margins(x)?;
    residuals.extend(pair.cone_k.margins(&slack)?);
    Ok(CertCheck {
        feasible,
        strictly_feasible,
        objective: pair.c.dot(x),
        residuals,
    })
}

/// Checks `y` against (D): membership in K and the slack `c - A^T y` in C.
pub fn check_dual(pair: &ConicPair, y: &Point, tol: f64) -> Result<CertCheck> {
    let slack = pair.dual_slack(y)?;
    let feasible =
        pair.cone_k.in_cone(y, tol)? && pair.cone_c.in_cone(&slack, tol)?;
    let strictly_feasible = feasible && pair.cone_c.in_interior(&slack, tol)?;
    let mut residuals = pair.cone_k.margins(y)?;
    residuals.extend(pair.cone_c.margins(&slack)?);
    Ok(CertCheck {
        feasible,
        strictly_feasible,
        objective: pair.b.dot(y),
        residuals,
    })
}

fn require_feasible(
    check: &CertCheck,
    side: &'static str,
) -> Result<()> {
    if !check.feasible {
        let worst = check
            .residuals
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        return Err(Error::InfeasiblePoint {
            side,
            residual: worst,
        });
    }
    Ok(())
}

/// Objective gap `dot(c, x) - dot(y, b)` for a feasible pair of points.
/// Nonnegative up to `tol` times the participating scales.
pub fn duality_gap(pair: &ConicPair, x: &Point, y: &Point, tol: f64) -> Result<f64> {
    let cp = check_primal(pair, x, tol)?;
    require_feasible(&cp, "primal")?;
    let cd = check_dual(pair, y, tol)?;
    require_feasible(&cd, "dual")?;
    Ok(cp.objective - cd.objective)
}

/// Tests the two optimality pairings of a feasible pair of points:
/// `dot(y, Ax - b) == 0` and `dot(c - A^T y, x) == 0`, both relative to
/// `1 +` the largest participating norm. A true result certifies that both
/// points are optimal and the pair has no objective gap at them.
pub fn complementary_slackness(
    pair: &ConicPair,
    x: &Point,
    y: &Point,
    tol: f64,
) -> Result<bool> {
    let cp = check_primal(pair, x, tol)?;
    require_feasible(&cp, "primal")?;
    let cd = check_dual(pair, y, tol)?;
    require_feasible(&cd, "dual")?;
    let pslack = pair.primal_slack(x)?;
    let dslack = pair.dual_slack(y)?;
    let scale = 1.0
        + x.norm()
            .max(y.norm())
            .max(pslack.norm())
            .max(dslack.norm());
    let g1 = y.dot(&pslack).abs();
    let g2 = dslack.dot(x).abs();
    Ok(g1 <= tol * scale && g2 <= tol * scale)
}
