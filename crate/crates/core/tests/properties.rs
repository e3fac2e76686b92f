//! Randomized invariants of the solver, the reduction, and the diagnosis
//! layer, beyond the fixed instances in the acceptance suite.

mod common;

use common::{consistent_pair, random_game, rng};
use conic_games::diagnosis::{alternatives, classify, GapCase, LowerCertificate, UpperCertificate};
use conic_games::game::{verify_equilibrium, ConicGame};
use conic_games::instances::matrix_game;
use conic_games::programs::{check_dual, check_primal};
use conic_games::reduction::{build_shifted_pair, solve_game, ReductionParams};
use conic_games::solver::{solve_pair, SolveOptions, Status};
use nalgebra::DMatrix;
use proptest::prelude::*;

fn opts() -> SolveOptions {
    SolveOptions::default()
}

#[test]
fn random_consistent_pairs_solve_to_certified_optima() {
    let mut rng = rng(7001);
    for _ in 0..100 {
        let (pair, _, _) = consistent_pair(&mut rng);
        let res = solve_pair(&pair, &opts()).unwrap();
        assert_eq!(res.status, Status::Optimal);
        let cp = check_primal(&pair, &res.x, 1e-6).unwrap();
        let cd = check_dual(&pair, &res.y, 1e-6).unwrap();
        assert!(cp.feasible && cd.feasible);
        let scale = 1.0 + cp.objective.abs().max(cd.objective.abs());
        assert!((cp.objective - cd.objective).abs() <= 1e-6 * scale);
    }
}

#[test]
fn random_games_reach_verified_equilibria() {
    let mut rng = rng(7002);
    for _ in 0..50 {
        let game = random_game(&mut rng);
        let sol = solve_game(&game, &opts()).unwrap();
        let report = verify_equilibrium(&game, &sol.x_star, &sol.y_star, 1e-6).unwrap();
        assert!(report.ok, "residuals {:?}", (report.residual_i, report.residual_ii));
    }
}

#[test]
fn classification_and_alternatives_agree_on_value_sign() {
    let mut rng = rng(7003);
    let mut tested = 0;
    let mut attempts = 0;
    while tested < 10 && attempts < 200 {
        attempts += 1;
        let (pair, _, _) = consistent_pair(&mut rng);
        let game = ConicGame::new(
            pair.cone_c().clone(),
            pair.cone_k().clone(),
            pair.cone_c().canonical_interior(),
            pair.cone_k().canonical_interior(),
            pair.op().clone(),
        )
        .unwrap();
        let v = solve_game(&game, &opts()).unwrap().value;
        // The sign agreement is only well posed away from the zero cut.
        if v.abs() < 1e-4 {
            continue;
        }
        tested += 1;
        let diag = classify(&pair, &opts()).unwrap();
        assert_eq!(diag.case, GapCase::NonzeroValue);
        let verdict = alternatives(&game, &opts()).unwrap();
        let positive = matches!(verdict.upper, UpperCertificate::ValuePositive(_));
        let negative = matches!(verdict.lower, LowerCertificate::ValueNegative(_));
        assert!(positive ^ negative);
        assert_eq!(v > 0.0, positive);
    }
    assert_eq!(tested, 10);
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, .. ProptestConfig::default() })]

    #[test]
    fn player_swap_negates_the_value(
        rows in 2usize..=4,
        cols in 2usize..=4,
        entries in proptest::collection::vec(-2.0f64..2.0, 16),
    ) {
        let r = DMatrix::from_fn(rows, cols, |i, j| entries[i * 4 + j]);
        let v = solve_game(&matrix_game(&r).unwrap(), &opts()).unwrap().value;
        let w = solve_game(&matrix_game(&(-r.transpose())).unwrap(), &opts())
            .unwrap()
            .value;
        prop_assert!((v + w).abs() <= 1e-6 * (1.0 + v.abs()));
    }

    #[test]
    fn shifted_pair_value_is_the_reciprocal_of_the_shifted_game(
        entries in proptest::collection::vec(-2.0f64..2.0, 9),
        lambda in 0.2f64..1.5,
        kappa_pad in 0.0f64..1.0,
    ) {
        let r = DMatrix::from_fn(3, 3, |i, j| entries[i * 3 + j]);
        let game = matrix_game(&r).unwrap();
        let v = solve_game(&game, &opts()).unwrap().value;
        // Entries are bounded by 2, so this keeps the shifted value above
        // the validity floor regardless of the draw.
        let kappa = 0.75 + kappa_pad + 2.0 * lambda;
        let params = ReductionParams::new(lambda, kappa).unwrap();
        let pair = build_shifted_pair(&game, &params);
        let res = solve_pair(&pair, &opts()).unwrap();
        prop_assert_eq!(res.status, Status::Optimal);
        let shifted = lambda * v + kappa;
        prop_assert!((1.0 / res.primal_obj - shifted).abs() <= 1e-6 * (1.0 + shifted));
    }
}
