//! Constructors for the bundled game families: matrix games on simplices,
//! semidefinite games on spectraplexes, polynomial games on the square
//! through truncated moment vectors, and a curated orthant-vs-semidefinite
//! family whose induced pair exhibits a duality gap.

use nalgebra::{DMatrix, DVector};

use crate::cones::{smat, svec, ConeBlock, ConeProduct, Point};
use crate::error::{Error, Result};
use crate::game::ConicGame;
use crate::linalg;
use crate::operators::LinOp;
use crate::programs::ConicPair;
use crate::reduction::{INITIAL_KAPPA, MAX_KAPPA};
use crate::solver::{solve, SolveOptions, SolveResult, StandardProgram, Status};

/// Matrix game on the standard simplices. The orientation is fixed as
/// player I maximizing `x^T r y`, so the game operator is the transpose of
/// the payoff matrix.
pub fn matrix_game(r: &DMatrix<f64>) -> Result<ConicGame> {
    let (m, n) = r.shape();
    if m == 0 || n == 0 {
        return Err(Error::param("payoff matrix", "must be non-empty"));
    }
    if !r.iter().all(|v| v.is_finite()) {
        return Err(Error::param("payoff matrix", "entries must be finite"));
    }
    ConicGame::new(
        ConeProduct::single(ConeBlock::Orthant(m))?,
        ConeProduct::single(ConeBlock::Orthant(n))?,
        DVector::repeat(m, 1.0),
        DVector::repeat(n, 1.0),
        LinOp::new(r.transpose()),
    )
}

/// Semidefinite game on spectraplexes built from a four-index payoff
/// tensor, flattened as `t[((i*m + j)*n + k)*n + l]`. Player I picks a unit
/// trace matrix X of order m, player II one of order n, and the payoff is
/// `sum_ijkl X_ij t_ijkl Y_kl`. The tensor must be symmetric in (i, j) and
/// in (k, l), otherwise the payoff would see non-symmetric ghosts that the
/// strategies cannot express.
pub fn sdp_game(tensor: &[f64], m: usize, n: usize) -> Result<ConicGame> {
    if m == 0 || n == 0 {
        return Err(Error::param("payoff tensor", "orders must be positive"));
    }
    let expected = m * m * n * n;
    if tensor.len() != expected {
        return Err(Error::dims("payoff tensor length", expected, tensor.len()));
    }
    if !tensor.iter().all(|v| v.is_finite()) {
        return Err(Error::param("payoff tensor", "entries must be finite"));
    }
    let amax = tensor.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    let tol = 1e-12 * (1.0 + amax);
    let at = |i: usize, j: usize, k: usize, l: usize| tensor[((i * m + j) * n + k) * n + l];
    for i in 0..m {
        for j in 0..m {
            for k in 0..n {
                for l in 0..n {
                    if (at(i, j, k, l) - at(j, i, k, l)).abs() > tol
                        || (at(i, j, k, l) - at(i, j, l, k)).abs() > tol
                    {
                        return Err(Error::param(
                            "payoff tensor",
                            format!("not symmetric at ({i},{j},{k},{l})"),
                        ));
                    }
                }
            }
        }
    }

    // Materialize the operator on svec coordinates column by column; the
    // isometry makes the matrix transpose the adjoint for free.
    let dm = m * (m + 1) / 2;
    let dn = n * (n + 1) / 2;
    let mut cols = Vec::with_capacity(dm);
    for r in 0..dm {
        let mut unit = DVector::zeros(dm);
        unit[r] = 1.0;
        let x = smat(&unit)?;
        let mut image = DMatrix::zeros(n, n);
        for k in 0..n {
            for l in 0..n {
                let mut acc = 0.0;
                for i in 0..m {
                    for j in 0..m {
                        acc += x[(i, j)] * at(i, j, k, l);
                    }
                }
                image[(k, l)] = acc;
            }
        }
        linalg::symmetrize(&mut image);
        cols.push(svec(&image)?);
    }
    let op = LinOp::from_columns(dn, &cols)?;
    ConicGame::new(
        ConeProduct::single(ConeBlock::Psd(m))?,
        ConeProduct::single(ConeBlock::Psd(n))?,
        svec(&DMatrix::identity(m, m))?,
        svec(&DMatrix::identity(n, n))?,
        op,
    )
}

/// Hankel matrix of a sequence of odd length 2k-1: entry (i, j) is a[i+j].
pub fn hankel(a: &Point) -> Result<DMatrix<f64>> {
    let len = a.len();
    if len == 0 || len % 2 == 0 {
        return Err(Error::param("sequence", "length must be odd"));
    }
    let k = (len + 1) / 2;
    Ok(DMatrix::from_fn(k, k, |i, j| a[i + j]))
}

/// Adjoint of [`hankel`]: sums along each antidiagonal, so off-diagonal
/// entries count twice. Satisfies dot(a, hankel_adjoint(B)) = hankel(a) . B
/// in the Frobenius pairing.
pub fn hankel_adjoint(b: &DMatrix<f64>) -> Result<Point> {
    let k = b.nrows();
    if k == 0 || b.ncols() != k {
        return Err(Error::dims("matrix columns", k.max(1), b.ncols()));
    }
    let mut out = DVector::zeros(2 * k - 1);
    for i in 0..k {
        for j in 0..k {
            out[i + j] += b[(i, j)];
        }
    }
    Ok(out)
}

/// Difference Hankel block whose positivity expresses nonnegativity of the
/// (1 - x^2)-weighted sequence: entry (i, j) is a[i+j] - a[i+j+2]. Together
/// with [`hankel`] it cuts out the moment vectors of measures on [-1, 1].
pub fn localizing(a: &Point) -> Result<DMatrix<f64>> {
    let len = a.len();
    if len < 3 || len % 2 == 0 {
        return Err(Error::param("sequence", "length must be odd, at least three"));
    }
    let k = (len - 1) / 2;
    Ok(DMatrix::from_fn(k, k, |i, j| a[i + j] - a[i + j + 2]))
}

/// svec-coordinate matrix of [`hankel`] on sequences of the given length.
fn hankel_map(len: usize) -> DMatrix<f64> {
    let k = (len + 1) / 2;
    let mut m = DMatrix::zeros(k * (k + 1) / 2, len);
    for t in 0..len {
        let mut unit = DVector::zeros(len);
        unit[t] = 1.0;
        let col = svec(&hankel(&unit).expect("odd length")).expect("symmetric by shape");
        m.set_column(t, &col);
    }
    m
}

/// svec-coordinate matrix of [`localizing`] on sequences of the given length.
fn localizing_map(len: usize) -> DMatrix<f64> {
    let k = (len - 1) / 2;
    let mut m = DMatrix::zeros(k * (k + 1) / 2, len);
    for t in 0..len {
        let mut unit = DVector::zeros(len);
        unit[t] = 1.0;
        let col = svec(&localizing(&unit).expect("odd length")).expect("symmetric by shape");
        m.set_column(t, &col);
    }
    m
}

/// Polynomial game on [-1, 1] squared in mixed strategies: player I
/// maximizes the expectation of `P(x, y) = sum p_ij x^i y^j` over
/// probability measures on the interval. Strategies enter only through
/// their truncated moment vectors, and each player's moment set is cut out
/// by two linked semidefinite blocks, which puts the game outside the plain
/// cone product shape and earns it this dedicated type.
#[derive(Clone, Debug)]
pub struct PolyGame {
    coeffs: DMatrix<f64>,
}

/// Solved polynomial game: the value and optimal truncated moment vectors
/// (1, E[x], E[x^2], ...) for both players, plus the shift parameters the
/// reduction used. Measures realizing the moments are not reconstructed.
#[derive(Clone, Debug)]
pub struct PolySolution {
    pub value: f64,
    pub moments_x: Point,
    pub moments_y: Point,
    pub lambda: f64,
    pub kappa: f64,
}

impl PolyGame {
    /// Coefficient matrix is (m+1) x (n+1) for degrees m in x and n in y;
    /// both degrees must be even and at least two.
    pub fn new(coeffs: DMatrix<f64>) -> Result<Self> {
        let (rows, cols) = coeffs.shape();
        if rows < 3 || rows % 2 == 0 || cols < 3 || cols % 2 == 0 {
            return Err(Error::param(
                "coefficient matrix",
                "degrees must be even and at least two in each variable",
            ));
        }
        if !coeffs.iter().all(|v| v.is_finite()) {
            return Err(Error::param("coefficient matrix", "entries must be finite"));
        }
        Ok(PolyGame { coeffs })
    }

    /// Degrees (m, n) in x and y.
    pub fn degrees(&self) -> (usize, usize) {
        (self.coeffs.nrows() - 1, self.coeffs.ncols() - 1)
    }

    pub fn coefficients(&self) -> &DMatrix<f64> {
        &self.coeffs
    }

    /// Evaluates the polynomial at a pure strategy pair.
    pub fn payoff(&self, x: f64, y: f64) -> f64 {
        let (m, n) = self.degrees();
        let mut total = 0.0;
        let mut xi = 1.0;
        for i in 0..=m {
            let mut yj = 1.0;
            for j in 0..=n {
                total += self.coeffs[(i, j)] * xi * yj;
                yj *= y;
            }
            xi *= x;
        }
        total
    }

    /// Expected payoff of a pair of moment vectors.
    pub fn moment_payoff(&self, mu: &Point, nu: &Point) -> Result<f64> {
        let (m, n) = self.degrees();
        if mu.len() != m + 1 {
            return Err(Error::dims("moment vector length", m + 1, mu.len()));
        }
        if nu.len() != n + 1 {
            return Err(Error::dims("moment vector length", n + 1, nu.len()));
        }
        Ok((mu.transpose() * &self.coeffs * nu)[(0, 0)])
    }

    /// Shifted reduction in equality form: variables are the first player's
    /// moments plus the second player's two certificate blocks, tied by the
    /// coefficient identity; all four cone blocks are semidefinite.
    fn shifted_program(&self, lambda: f64, kappa: f64) -> Result<StandardProgram> {
        let (m, n) = self.degrees();
        let h_y = hankel_map(n + 1);
        let loc_y = localizing_map(n + 1);
        let h_x = hankel_map(m + 1);
        let loc_x = localizing_map(m + 1);
        let (dky, dly) = (h_y.nrows(), loc_y.nrows());
        let (dkx, dlx) = (h_x.nrows(), loc_x.nrows());
        let nv = (m + 1) + dky + dly;

        let mut eq = DMatrix::zeros(n + 1, nv);
        eq.view_mut((0, 0), (n + 1, m + 1))
            .copy_from(&(self.coeffs.transpose() * lambda));
        eq[(0, 0)] += kappa;
        eq.view_mut((0, m + 1), (n + 1, dky))
            .copy_from(&(-h_y.transpose()));
        eq.view_mut((0, m + 1 + dky), (n + 1, dly))
            .copy_from(&(-loc_y.transpose()));
        let mut eq_rhs = DVector::zeros(n + 1);
        eq_rhs[0] = 1.0;

        let rows = dkx + dlx + dky + dly;
        let mut g = DMatrix::zeros(rows, nv);
        g.view_mut((0, 0), (dkx, m + 1)).copy_from(&(-&h_x));
        g.view_mut((dkx, 0), (dlx, m + 1)).copy_from(&(-&loc_x));
        g.view_mut((dkx + dlx, m + 1), (dky, dky))
            .copy_from(&(-DMatrix::identity(dky, dky)));
        g.view_mut((dkx + dlx + dky, m + 1 + dky), (dly, dly))
            .copy_from(&(-DMatrix::identity(dly, dly)));
        let cone = ConeProduct::new(vec![
            ConeBlock::Psd(m / 2 + 1),
            ConeBlock::Psd(m / 2),
            ConeBlock::Psd(n / 2 + 1),
            ConeBlock::Psd(n / 2),
        ])?;
        let mut objective = DVector::zeros(nv);
        objective[0] = 1.0;
        StandardProgram::with_equalities(
            objective,
            LinOp::new(eq),
            eq_rhs,
            LinOp::new(g),
            DVector::zeros(rows),
            cone,
        )
    }

    /// Solves the game by the shifted reduction and reports the value with
    /// optimal moment vectors for both players. The second player's moments
    /// come out of the equality multipliers, and both vectors are replayed
    /// through the payoff and the moment cones before being returned.
    pub fn solve(&self, opts: &SolveOptions) -> Result<PolySolution> {
        let bound: f64 = self.coeffs.iter().map(|v| v.abs()).sum();
        let lambda = 1.0 / (2.0 * bound.max(1.0));
        let mut kappa = INITIAL_KAPPA;
        while kappa <= MAX_KAPPA {
            let prog = self.shifted_program(lambda, kappa)?;
            let res = solve(&prog, opts)?;
            if res.status == Status::Optimal && res.primal_obj > 1e-12 {
                return self.extract(&res, lambda, kappa);
            }
            kappa *= 2.0;
        }
        Err(Error::EscalationExhausted {
            context: "polynomial game solve".to_string(),
        })
    }

    fn extract(&self, res: &SolveResult, lambda: f64, kappa: f64) -> Result<PolySolution> {
        let (m, _) = self.degrees();
        let optimum = res.primal_obj;
        let value = (1.0 / optimum - kappa) / lambda;
        let mut mu = res.x.rows(0, m + 1).into_owned() / optimum;
        let mut nu = -&res.y_eq / optimum;
        if mu[0] <= 0.0 || nu[0] <= 0.0 {
            return Err(Error::SolverFailure {
                context: "polynomial moment recovery".to_string(),
                status: "nonpositive leading moment".to_string(),
            });
        }
        mu /= mu[0];
        nu /= nu[0];
        for moments in [&mu, &nu] {
            for block in [hankel(moments)?, localizing(moments)?] {
                if linalg::min_eigval(&block) < -1e-6 * (1.0 + block.amax()) {
                    return Err(Error::SolverFailure {
                        context: "polynomial moment recovery".to_string(),
                        status: "moments left the cone".to_string(),
                    });
                }
            }
        }
        let replay = self.moment_payoff(&mu, &nu)?;
        if (replay - value).abs() > 1e-5 * (1.0 + value.abs()) {
            return Err(Error::SolverFailure {
                context: "polynomial moment recovery".to_string(),
                status: format!("moments replay the value as {replay} instead of {value}"),
            });
        }
        Ok(PolySolution {
            value,
            moments_x: mu,
            moments_y: nu,
            lambda,
            kappa,
        })
    }

    /// Compiles the unshifted reduction pair onto native orthant and
    /// semidefinite cones: the first player's moments are split into
    /// positive and negative parts, and the coefficient identity linking
    /// the players becomes paired one-sided rows. The compiled primal
    /// optimum is the reciprocal of the game value, so for games with
    /// nonpositive value the compiled primal is infeasible by construction.
    pub fn compiled_pair(&self) -> Result<ConicPair> {
        let (m, n) = self.degrees();
        let h_y = hankel_map(n + 1);
        let loc_y = localizing_map(n + 1);
        let h_x = hankel_map(m + 1);
        let loc_x = localizing_map(m + 1);
        let (dky, dly) = (h_y.nrows(), loc_y.nrows());
        let (dkx, dlx) = (h_x.nrows(), loc_x.nrows());
        let nv = 2 * (m + 1) + dky + dly;
        let rows = 2 * (n + 1) + dkx + dlx;

        let cone_c = ConeProduct::new(vec![
            ConeBlock::Orthant(m + 1),
            ConeBlock::Orthant(m + 1),
            ConeBlock::Psd(n / 2 + 1),
            ConeBlock::Psd(n / 2),
        ])?;
        let cone_k = ConeProduct::new(vec![
            ConeBlock::Orthant(n + 1),
            ConeBlock::Orthant(n + 1),
            ConeBlock::Psd(m / 2 + 1),
            ConeBlock::Psd(m / 2),
        ])?;

        let mut a = DMatrix::zeros(rows, nv);
        let pt = self.coeffs.transpose();
        a.view_mut((0, 0), (n + 1, m + 1)).copy_from(&pt);
        a.view_mut((0, m + 1), (n + 1, m + 1)).copy_from(&(-&pt));
        a.view_mut((0, 2 * (m + 1)), (n + 1, dky))
            .copy_from(&(-h_y.transpose()));
        a.view_mut((0, 2 * (m + 1) + dky), (n + 1, dly))
            .copy_from(&(-loc_y.transpose()));
        let top = a.rows(0, n + 1).into_owned();
        a.view_mut((n + 1, 0), (n + 1, nv)).copy_from(&(-top));
        a.view_mut((2 * (n + 1), 0), (dkx, m + 1)).copy_from(&h_x);
        a.view_mut((2 * (n + 1), m + 1), (dkx, m + 1))
            .copy_from(&(-&h_x));
        a.view_mut((2 * (n + 1) + dkx, 0), (dlx, m + 1))
            .copy_from(&loc_x);
        a.view_mut((2 * (n + 1) + dkx, m + 1), (dlx, m + 1))
            .copy_from(&(-&loc_x));

        let mut b = DVector::zeros(rows);
        b[0] = 1.0;
        b[n + 1] = -1.0;
        let mut c = DVector::zeros(nv);
        c[0] = 1.0;
        c[m + 1] = -1.0;
        ConicPair::new(cone_c, cone_k, LinOp::new(a), b, c)
    }
}

/// Variants of the curated duality-gap family.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GapVariant {
    /// Objective (-1, 0): both programs feasible with values 0 and -1, so
    /// the pair carries a gap of one.
    Standard,
    /// Objective (rho, 0) with rho >= 0: both values are zero and jointly
    /// optimal points exist, closing the gap.
    ScaledObjective(f64),
    /// Right-hand side with off-diagonal coupling sigma in [1/2, 1]: values
    /// -sigma and -1, so the gap shrinks linearly and closes at sigma = 1.
    CoupledRhs(f64),
}

/// Curated family on a two-dimensional orthant against the 3x3 semidefinite
/// cone. The game value is zero in every variant (the game sees only the
/// operator and the base weights), while the induced pair's feasibility
/// structure swings from a unit duality gap to none as the variant moves.
pub fn gap_instance(variant: GapVariant) -> Result<(ConicGame, ConicPair)> {
    let cone_c = ConeProduct::single(ConeBlock::Orthant(2))?;
    let cone_k = ConeProduct::single(ConeBlock::Psd(3))?;
    let m1 = DMatrix::from_row_slice(
        3,
        3,
        &[0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, -1.0],
    );
    let m2 = DMatrix::from_diagonal(&DVector::from_column_slice(&[0.0, 1.0, 0.0]));
    let op = LinOp::from_columns(6, &[svec(&m1)?, svec(&m2)?])?;
    let alpha = DVector::repeat(2, 1.0);
    let beta = cone_k.canonical_interior();
    let game = ConicGame::new(cone_c.clone(), cone_k.clone(), alpha, beta, op.clone())?;

    let base_rhs = DMatrix::from_diagonal(&DVector::from_column_slice(&[0.0, -1.0, -1.0]));
    let (rhs, obj) = match variant {
        GapVariant::Standard => (base_rhs, DVector::from_column_slice(&[-1.0, 0.0])),
        GapVariant::ScaledObjective(rho) => {
            if !rho.is_finite() || rho < 0.0 {
                return Err(Error::param("rho", "must be finite and non-negative"));
            }
            (base_rhs, DVector::from_column_slice(&[rho, 0.0]))
        }
        GapVariant::CoupledRhs(sigma) => {
            if !sigma.is_finite() || !(0.5..=1.0).contains(&sigma) {
                return Err(Error::param("sigma", "must lie in [1/2, 1]"));
            }
            let rhs = DMatrix::from_row_slice(
                3,
                3,
                &[0.0, sigma, 0.0, sigma, -1.0, 0.0, 0.0, 0.0, -1.0],
            );
            (rhs, DVector::from_column_slice(&[-1.0, 0.0]))
        }
    };
    let pair = ConicPair::new(cone_c, cone_k, op, svec(&rhs)?, obj)?;
    Ok((game, pair))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnosis::{classify, GapCase};
    use crate::reduction::solve_game;
    use crate::solver::solve_pair;
    use crate::testutil::pt;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn opts() -> SolveOptions {
        SolveOptions::default()
    }

    #[test]
    fn matrix_game_orientation_and_values() {
        let r = DMatrix::from_row_slice(2, 2, &[3.0, 0.0, 1.0, 2.0]);
        let game = matrix_game(&r).unwrap();
        // Pure strategies read the matrix entry directly: row i vs column j.
        let paid = game.payoff(&pt(&[1.0, 0.0]), &pt(&[0.0, 1.0])).unwrap();
        assert_eq!(paid, r[(0, 1)]);
        assert!((solve_game(&game, &opts()).unwrap().value - 1.5).abs() < 1e-6);

        let sym = matrix_game(&DMatrix::from_row_slice(2, 2, &[1.0, -1.0, -1.0, 1.0])).unwrap();
        assert!(solve_game(&sym, &opts()).unwrap().value.abs() < 1e-7);

        assert!(matrix_game(&DMatrix::zeros(0, 2)).is_err());
    }

    #[test]
    fn sdp_game_embeds_matrix_games_on_the_diagonal() {
        // t_ijkl = delta_ij delta_kl r_ik: diagonal strategies reproduce the
        // simplex game, and off-diagonal entries never enter the payoff.
        let r = DMatrix::from_row_slice(2, 2, &[3.0, 0.0, 1.0, 2.0]);
        let (m, n) = (2, 2);
        let mut tensor = vec![0.0; m * m * n * n];
        for i in 0..m {
            for k in 0..n {
                tensor[((i * m + i) * n + k) * n + k] = r[(i, k)];
            }
        }
        let game = sdp_game(&tensor, m, n).unwrap();
        let sol = solve_game(&game, &opts()).unwrap();
        assert!((sol.value - 1.5).abs() < 1e-6);

        let mut bad = tensor.clone();
        bad[((0 * m + 1) * n + 0) * n + 0] = 1.0;
        assert!(sdp_game(&bad, m, n).is_err());
    }

    #[test]
    fn hankel_and_adjoint_form_a_pairing() {
        let h = hankel(&pt(&[1.0, 2.0, 3.0])).unwrap();
        assert_eq!(h, DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 3.0]));
        let back = hankel_adjoint(&DMatrix::identity(2, 2)).unwrap();
        assert_eq!(back, pt(&[1.0, 0.0, 1.0]));
        assert!(hankel(&pt(&[1.0, 2.0])).is_err());

        let loc = localizing(&pt(&[1.0, 0.5, 0.8, 0.4, 0.7])).unwrap();
        let expect = DMatrix::from_row_slice(2, 2, &[0.2, 0.1, 0.1, 0.1]);
        assert!((loc - expect).amax() < 1e-15);

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let a = DVector::from_fn(5, |_, _| rng.random_range(-2.0..2.0));
            let mut b = DMatrix::from_fn(3, 3, |_, _| rng.random_range(-2.0..2.0));
            linalg::symmetrize(&mut b);
            let lhs = a.dot(&hankel_adjoint(&b).unwrap());
            let rhs = (hankel(&a).unwrap() * &b).trace();
            assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()));
        }
    }

    #[test]
    fn constant_polynomial_solves_to_the_constant() {
        let mut coeffs = DMatrix::zeros(3, 3);
        coeffs[(0, 0)] = 5.0;
        let game = PolyGame::new(coeffs).unwrap();
        let sol = game.solve(&opts()).unwrap();
        assert!((sol.value - 5.0).abs() < 1e-6);
        assert!((sol.moments_x[0] - 1.0).abs() < 1e-12);
        assert!((sol.moments_y[0] - 1.0).abs() < 1e-12);
        assert_eq!(game.payoff(0.3, -0.7), 5.0);

        // The compiled pair of a positive-value game solves to 1/value.
        let pair = game.compiled_pair().unwrap();
        let res = solve_pair(&pair, &opts()).unwrap();
        assert_eq!(res.status, Status::Optimal);
        assert!((res.primal_obj - 0.2).abs() < 1e-6);
        assert!((res.dual_obj - 0.2).abs() < 1e-6);
    }

    #[test]
    fn product_polynomials_have_zero_value() {
        // P(x, y) = x y: either player can zero out the product.
        let mut xy = DMatrix::zeros(3, 3);
        xy[(1, 1)] = 1.0;
        let sol = PolyGame::new(xy).unwrap().solve(&opts()).unwrap();
        assert!(sol.value.abs() < 1e-5);

        // P(x, y) = x^2 - y^2: both players push to the endpoints.
        let mut sq = DMatrix::zeros(3, 3);
        sq[(2, 0)] = 1.0;
        sq[(0, 2)] = -1.0;
        let game = PolyGame::new(sq).unwrap();
        let sol = game.solve(&opts()).unwrap();
        assert!(sol.value.abs() < 1e-5);
        // Second moments pin to one: mass concentrates on |x| = |y| = 1.
        assert!((sol.moments_x[2] - 1.0).abs() < 1e-3);
        assert!((sol.moments_y[2] - 1.0).abs() < 1e-3);
    }

    #[test]
    fn polynomial_game_rejects_bad_degrees() {
        assert!(PolyGame::new(DMatrix::zeros(4, 3)).is_err());
        assert!(PolyGame::new(DMatrix::zeros(3, 2)).is_err());
        assert!(PolyGame::new(DMatrix::zeros(1, 1)).is_err());
    }

    #[test]
    fn gap_family_matches_its_documented_shape() {
        let (game, pair) = gap_instance(GapVariant::Standard).unwrap();
        assert!(solve_game(&game, &opts()).unwrap().value.abs() < 1e-7);
        let diag = classify(&pair, &opts()).unwrap();
        assert_eq!(diag.case, GapCase::ZeroValuePathology);
        assert!(!diag.zero_gap_certified);

        let (_, pair) = gap_instance(GapVariant::ScaledObjective(0.5)).unwrap();
        let diag = classify(&pair, &opts()).unwrap();
        assert!(diag.zero_gap_certified);

        assert!(gap_instance(GapVariant::ScaledObjective(-0.1)).is_err());
        assert!(gap_instance(GapVariant::CoupledRhs(0.4)).is_err());
        assert!(gap_instance(GapVariant::CoupledRhs(1.2)).is_err());

        // sigma = 1 couples the rhs tightly enough that x1 is pinned to 1.
        let (_, pair) = gap_instance(GapVariant::CoupledRhs(1.0)).unwrap();
        let x = pt(&[1.0, 0.0]);
        let check = crate::programs::check_primal(&pair, &x, 1e-9).unwrap();
        assert!(check.feasible);
        assert!((check.objective + 1.0).abs() < 1e-12);
    }
}
