mod common;

use common::*;
use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rsgame::discounted::{
    evaluate_discounted_profile, grid_residuals, solve_discounted_hjb, solve_risk_neutral_discounted, GridSpec,
};
use rsgame::nash_discounted::{best_response_discounted, nash_gap_discounted, solve_nash_discounted, IterSpec};
use rsgame::{Error, GameModel, MixedAction, Player, RiskParams, StationaryProfile, Strategy};

fn grid() -> GridSpec {
    GridSpec::default()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / (1.0 + b.abs())
}

#[test]
fn single_state_closed_form() {
    for (c, alpha, theta) in [(0.7, 1.0, 0.5), (1.0, 0.5, 1.0), (0.0, 2.0, 3.0)] {
        let m = GameModel::from_fn(1, 1, 1, |_, _, _, _| 0.0, |_, _, _, _| c).unwrap();
        let s = Strategy::stationary(vec![MixedAction::pure(1, 0)]);
        let curve = evaluate_discounted_profile(&m, &s, &s, alpha, theta, Player::One, &grid()).unwrap();
        for (k, &t) in curve.theta.iter().enumerate() {
            assert!(rel(curve.psi[k][0], (t * c / alpha).exp()) < 1e-9, "theta {t}");
        }
        assert!((curve.phi0[0] - c / alpha).abs() < 1e-12);
    }
}

#[test]
fn risk_neutral_matches_pure_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..15 {
        let m = random_sized(&mut rng, 1, 4, 3, false);
        let alpha = [0.25, 0.5, 1.0][rng.gen_range(0..3)];
        for player in Player::BOTH {
            let opp: Vec<MixedAction> = (0..m.n_states()).map(|_| random_mixed(&mut rng, m.n_actions(player.other()))).collect();
            let sol = solve_risk_neutral_discounted(&m, player, &opp, alpha).unwrap();
            let mut best = DVector::from_element(m.n_states(), f64::INFINITY);
            for own in pure_columns(m.n_states(), m.n_actions(player)) {
                let (q, r) = pure_against(&m, player, &own, &opp);
                best = best.zip_map(&linear_discounted(&q, &r, alpha), f64::min);
            }
            for i in 0..m.n_states() {
                assert!(rel(sol.phi[i], best[i]) < 1e-10, "{} vs {}", sol.phi[i], best[i]);
            }
        }
    }
}

#[test]
fn stationary_profile_evaluation_matches_series() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..12 {
        let m = random_sized(&mut rng, 2, 5, 3, false);
        let p = random_profile(&mut rng, &m);
        let q = generator(&m, &p);
        let (alpha, theta) = ([0.5, 1.0][rng.gen_range(0..2)], rng.gen_range(0.1..1.0));
        let (s1, s2) = (Strategy::stationary(p.p1.clone()), Strategy::stationary(p.p2.clone()));
        for player in Player::BOTH {
            let r = cost_vector(&m, &p, player);
            let curve = evaluate_discounted_profile(&m, &s1, &s2, alpha, theta, player, &grid()).unwrap();
            for k in [1, 17, 128, 256] {
                let oracle = series_discounted(&q, &r, alpha, curve.theta[k]);
                for i in 0..m.n_states() {
                    assert!(rel(curve.psi[k][i], oracle[i]) < 1e-8, "node {k}: {} vs {}", curve.psi[k][i], oracle[i]);
                }
            }
            let phi0 = linear_discounted(&q, &r, alpha);
            for i in 0..m.n_states() {
                assert!(rel(curve.phi0[i], phi0[i]) < 1e-10);
            }
        }
    }
}

#[test]
fn uncontrolled_two_state_chain() {
    // costs only in state 0, chain flips at rates 1 and 2
    let m = uncontrolled(&[vec![-1.0, 1.0], vec![2.0, -2.0]], &[1.0, 0.0]);
    let s = Strategy::stationary(vec![MixedAction::pure(1, 0); 2]);
    let v = solve_discounted_hjb(&m, Player::One, &s, 1.0, 0.8, &grid()).unwrap();
    let q = nalgebra::DMatrix::from_row_slice(2, 2, &[-1.0, 1.0, 2.0, -2.0]);
    let oracle = series_discounted(&q, &DVector::from_vec(vec![1.0, 0.0]), 1.0, 0.8);
    assert!(rel(v.top()[0], oracle[0]) < 1e-8 && rel(v.top()[1], oracle[1]) < 1e-8);
    assert!(v.top()[0] > v.top()[1]);
}

/// Opponent-independent models: the HJB value lies below every stationary
/// policy, and the recorded selectors attain it.
#[test]
fn best_response_dominates_and_attains() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..8 {
        let n = rng.gen_range(2..=4);
        let m1 = rng.gen_range(2..=3);
        let m = opponent_independent(&mut rng, n, m1, 2);
        let (alpha, theta) = ([0.5, 1.0][rng.gen_range(0..2)], 0.5);
        let opp_col = uniform_column(&m, Player::Two);
        let opp = Strategy::stationary(opp_col.clone());
        let br = best_response_discounted(&m, Player::One, &opp, alpha, theta, &grid(), true).unwrap();
        let top = br.curve.top();
        for own in pure_columns(n, m.n_actions(Player::One)) {
            let (q, r) = pure_against(&m, Player::One, &own, &opp_col);
            let j = series_discounted(&q, &r, alpha, theta);
            for i in 0..n {
                assert!(top[i] <= j[i] * (1.0 + 1e-9), "policy {own:?} beats the optimum at {i}");
            }
        }
        for _ in 0..20 {
            let p = StationaryProfile::new((0..n).map(|_| random_mixed(&mut rng, m.n_actions(Player::One))).collect(), opp_col.clone());
            let j = series_discounted(&generator(&m, &p), &cost_vector(&m, &p, Player::One), alpha, theta);
            for i in 0..n {
                assert!(top[i] <= j[i] * (1.0 + 1e-9));
            }
        }
        let own = Strategy::indexed(br.policy.clone());
        let eval = evaluate_discounted_profile(&m, &own, &opp, alpha, theta, Player::One, &grid()).unwrap();
        for i in 0..n {
            assert!(rel(eval.top()[i], top[i]) < 1e-6, "{} vs {}", eval.top()[i], top[i]);
        }
        let res = grid_residuals(&m, &br.curve, &opp);
        assert!(res.iter().all(|r| r.is_finite()));
    }
}

#[test]
fn zero_cost_response_is_first_action() {
    let m = GameModel::from_fn(3, 3, 2, |i, j, u1, u2| 0.1 + 0.2 * ((i + 2 * j + u1 + u2) % 4) as f64, |_, _, _, _| 0.0).unwrap();
    let opp = Strategy::stationary(uniform_column(&m, Player::Two));
    let br = best_response_discounted(&m, Player::One, &opp, 1.0, 1.0, &grid(), false).unwrap();
    assert!(br.curve.psi.iter().flatten().all(|&v| (v - 1.0).abs() < 1e-14));
    for cell in br.policy.cells() {
        assert!(cell.iter().all(|a| a.weights()[0] == 1.0));
    }
}

#[test]
fn dominated_action_is_never_selected() {
    // action 1 has the rates of action 0 but costs 0.3 more
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let base = opponent_independent(&mut rng, 3, 1, 1);
    let m = GameModel::from_fn(
        3,
        2,
        1,
        |i, j, _, _| base.rates().get(i, j, 0, 0),
        |p, i, u1, _| if p == Player::One { base.cost(p).get(i, 0, 0) + 0.3 * u1 as f64 } else { 0.0 },
    )
    .unwrap();
    let opp = Strategy::stationary(uniform_column(&m, Player::Two));
    let br = best_response_discounted(&m, Player::One, &opp, 0.5, 1.0, &grid(), true).unwrap();
    for sel in br.curve.selectors.as_ref().unwrap() {
        assert!(sel.iter().all(|&a| a == 0));
    }
}

#[test]
fn gaps_are_nonnegative_and_bound_the_worst_deviation() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..6 {
        let n = rng.gen_range(2..=3);
        let m = opponent_independent(&mut rng, n, 2, 2);
        let params = RiskParams::new(0.5, 0.5, f64::INFINITY, 1.0).unwrap();
        let opp_col = uniform_column(&m, Player::Two);
        let mut values: Vec<(Vec<usize>, DVector<f64>)> = pure_columns(n, 2)
            .into_iter()
            .map(|own| {
                let (q, r) = pure_against(&m, Player::One, &own, &opp_col);
                let j = series_discounted(&q, &r, 1.0, 0.5);
                (own, j)
            })
            .collect();
        values.sort_by(|a, b| a.1.max().total_cmp(&b.1.max()));
        let (worst, best) = (values.last().unwrap(), &values[0]);
        let p1 = Strategy::stationary(pure_column(2, &worst.0));
        let g = nash_gap_discounted(&m, &p1, &Strategy::stationary(opp_col.clone()), &params, &grid()).unwrap();
        assert!(g.gaps[0] >= (worst.1.max() - best.1.max()) - 1e-8 * (1.0 + worst.1.max()));
        assert!(g.gaps[1].abs() < 1e-12, "player 2 has nothing to gain");
        for _ in 0..5 {
            let p = random_profile(&mut rng, &m);
            let g = nash_gap_discounted(&m, &Strategy::stationary(p.p1), &Strategy::stationary(p.p2), &params, &grid()).unwrap();
            assert!(g.gaps.iter().all(|&x| x >= -1e-8), "{:?}", g.gaps);
        }
    }
}

#[test]
fn decoupled_game_reduces_to_two_control_problems() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..3 {
        let m = decoupled(&mut rng, 3, 2, 2);
        let params = RiskParams::new(0.5, 0.3, f64::INFINITY, 1.0).unwrap();
        let sol = solve_nash_discounted(&m, &params, &IterSpec::default()).unwrap();
        assert!(sol.certified, "gaps {:?}", sol.gaps);
        assert!(sol.gaps.iter().all(|&g| (-1e-8..=1e-4).contains(&g)));
        let any = Strategy::stationary(uniform_column(&m, Player::Two));
        let v1 = solve_discounted_hjb(&m, Player::One, &any, 1.0, 0.5, &grid()).unwrap();
        for i in 0..3 {
            assert!(rel(sol.curves[0].top()[i], v1.top()[i]) < 1e-4);
        }
    }
}

#[test]
fn single_state_games_follow_the_bimatrix_equilibrium() {
    // matching pennies: player 1 pays on a mismatch, player 2 on a match
    let pennies = bimatrix_game(&[vec![0.0, 1.0], vec![1.0, 0.0]], &[vec![1.0, 0.0], vec![0.0, 1.0]]);
    let params = RiskParams::new(0.5, 0.5, f64::INFINITY, 1.0).unwrap();
    let spec = IterSpec {
        strict_arat: false,
        ..Default::default()
    };
    let sol = solve_nash_discounted(&pennies, &params, &spec).unwrap();
    assert!(sol.certified);
    for cell in sol.p1.cells().iter().chain(sol.p2.cells()) {
        assert!((cell[0].weights()[0] - 0.5).abs() < 1e-6);
    }
    for k in 0..2 {
        assert!(rel(sol.curves[k].top()[0], 0.25f64.exp()) < 1e-8);
    }

    // prisoners' dilemma in costs: confessing (action 1) is dominant
    let pd = bimatrix_game(&[vec![1.0, 3.0], vec![0.0, 2.0]], &[vec![1.0, 0.0], vec![3.0, 2.0]]);
    let params = RiskParams::new(0.1, 0.1, f64::INFINITY, 1.0).unwrap();
    let sol = solve_nash_discounted(&pd, &params, &spec).unwrap();
    assert!(sol.certified);
    assert!(sol.p1.cells().iter().all(|c| c[0].weights()[1] == 1.0));
    assert!(sol.p2.cells().iter().all(|c| c[0].weights()[1] == 1.0));
}

#[test]
fn strict_mode_rejects_non_additive_models() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let m = random_model(&mut rng, 2, 2, 2, false, 1.0);
    let params = RiskParams::new(0.5, 0.5, f64::INFINITY, 1.0).unwrap();
    let err = solve_nash_discounted(&m, &params, &IterSpec::default()).unwrap_err();
    assert!(matches!(err, Error::Assumption { .. }));
}

#[test]
fn swapping_identical_players_swaps_values() {
    // symmetric game: both players see the same problem with roles exchanged
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let n = 3;
    let a: Vec<f64> = (0..n * n * 2).map(|_| rng.gen_range(0.05..0.5)).collect();
    let c: Vec<f64> = (0..n * 2).map(|_| rng.gen_range(0.0..0.5)).collect();
    let m = GameModel::from_fn(
        n,
        2,
        2,
        |i, j, u1, u2| a[(i * n + j) * 2 + u1] + a[(i * n + j) * 2 + u2],
        |p, i, u1, u2| match p {
            Player::One => c[i * 2 + u1] + 0.5 * c[i * 2 + u2],
            Player::Two => c[i * 2 + u2] + 0.5 * c[i * 2 + u1],
        },
    )
    .unwrap();
    let params = RiskParams::new(0.4, 0.4, f64::INFINITY, 0.5).unwrap();
    let sol = solve_nash_discounted(&m, &params, &IterSpec::default()).unwrap();
    assert!(sol.certified);
    for i in 0..n {
        assert!(rel(sol.curves[0].top()[i], sol.curves[1].top()[i]) < 1e-4);
    }
}
