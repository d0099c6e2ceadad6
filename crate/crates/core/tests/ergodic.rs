mod common;

use common::*;
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rsgame::bimatrix::{support_enumeration, CostMatrix};
use rsgame::discounted::{solve_discounted_hjb, GridSpec};
use rsgame::ergodic::{
    default_alphas, enumerate_ergodic, nash_gap_ergodic, perron_value, solve_ergodic_ctmdp, solve_nash_ergodic,
    truncate_costs, vanishing_discount_probe, ErgodicIterSpec,
};
use rsgame::{GameModel, MixedAction, Player, StationaryProfile, Strategy};

fn oracle_rho(model: &GameModel, p: &StationaryProfile, player: Player, theta: f64) -> f64 {
    dense_perron_root(&generator(model, p), &cost_vector(model, p, player), theta) / theta
}

#[test]
fn golden_ratio_root() {
    let m = uncontrolled(&[vec![-1.0, 1.0], vec![1.0, -1.0]], &[0.0, 1.0]);
    let p = StationaryProfile::uniform(&m);
    let s = perron_value(&m, &p, Player::One, 1.0, 0).unwrap();
    assert!((s.lambda - (5f64.sqrt() - 1.0) / 2.0).abs() < 1e-10);
    assert!(s.residual <= 1e-10);
    // eigenvector of [[-1, 1], [1, 0]] with psi(0) = 1 is (1, 1 + lambda)
    assert!((s.psi[1] - (1.0 + s.lambda)).abs() < 1e-9);
}

#[test]
fn perron_matches_dense_eigensolver() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for _ in 0..40 {
        let m = random_sized(&mut rng, 1, 5, 3, false);
        let p = random_profile(&mut rng, &m);
        let theta = rng.gen_range(0.05..2.0);
        let i0 = rng.gen_range(0..m.n_states());
        for player in Player::BOTH {
            let s = perron_value(&m, &p, player, theta, i0).unwrap();
            assert!(s.residual <= 1e-10);
            assert!((s.lambda - theta * oracle_rho(&m, &p, player, theta)).abs() < 1e-8);
            assert_eq!(s.psi[i0], 1.0);
            assert!(s.psi.iter().all(|&v| v > 0.0));
            // psi solves the multiplicative Poisson equation
            let a = generator(&m, &p) + DMatrix::from_diagonal(&(cost_vector(&m, &p, player) * theta));
            let lhs = a * DVector::from_vec(s.psi.clone());
            for i in 0..m.n_states() {
                assert!((lhs[i] - s.lambda * s.psi[i]).abs() < 1e-9 * (1.0 + s.psi[i]));
            }
        }
    }
}

#[test]
fn ergodic_cost_is_monotone_and_above_the_average() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..15 {
        let m = random_sized(&mut rng, 2, 5, 2, false);
        let p = random_profile(&mut rng, &m);
        let mu = stationary_distribution(&generator(&m, &p));
        let mean = mu.dot(&cost_vector(&m, &p, Player::One));
        let mut last = mean - 1e-12;
        for theta in [0.01, 0.1, 0.5, 1.0] {
            let rho = perron_value(&m, &p, Player::One, theta, 0).unwrap().rho;
            assert!(rho >= last - 1e-10, "rho not monotone at theta {theta}");
            assert!(rho <= m.cost(Player::One).sup_norm() + 1e-10);
            last = rho;
        }
        let small = perron_value(&m, &p, Player::One, 1e-4, 0).unwrap().rho;
        assert!((small - mean).abs() < 1e-3);
    }
}

fn enumeration_oracle(m: &GameModel, player: Player, opp: &[MixedAction], theta: f64) -> f64 {
    pure_columns(m.n_states(), m.n_actions(player))
        .into_iter()
        .map(|own| {
            let (q, r) = pure_against(m, player, &own, opp);
            dense_perron_root(&q, &r, theta) / theta
        })
        .fold(f64::INFINITY, f64::min)
}

#[test]
fn policy_iteration_matches_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..40 {
        let n = rng.gen_range(1..=3);
        let m2 = rng.gen_range(1..=3);
        let m = random_model(&mut rng, n, 2, m2, false, 1.0);
        let theta = rng.gen_range(0.1..1.5);
        let player = if rng.gen_bool(0.5) { Player::One } else { Player::Two };
        let own = m.n_actions(player);
        let opp: Vec<MixedAction> = (0..n).map(|_| random_mixed(&mut rng, m.n_actions(player.other()))).collect();
        let pi = solve_ergodic_ctmdp(&m, player, &opp, theta, 0).unwrap();
        let best = enumeration_oracle(&m, player, &opp, theta);
        assert!((pi.rho - best).abs() < 1e-8, "{} vs {best}", pi.rho);
        assert!(pi.bellman_residual < 1e-8);
        assert!(pi.rho_history.windows(2).all(|w| w[1] <= w[0] + 1e-12), "{:?}", pi.rho_history);
        if own > 1 || n > 1 {
            let en = enumerate_ergodic(&m, player, &opp, theta, 0).unwrap();
            assert!((en.rho - best).abs() < 1e-8);
        }
    }
}

#[test]
fn nash_with_zero_costs_has_zero_value() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let base = random_model(&mut rng, 3, 2, 2, true, 1.0);
    let m = GameModel::from_fn(3, 2, 2, |i, j, a, b| base.rates().get(i, j, a, b), |_, _, _, _| 0.0).unwrap();
    let sol = solve_nash_ergodic(&m, 0.5, 0.5, None, &ErgodicIterSpec::default()).unwrap();
    assert!(sol.certified);
    assert!(sol.rho.iter().all(|r| r.abs() < 1e-12));
    assert!(sol.psi.iter().flatten().all(|v| (v - 1.0).abs() < 1e-9));
}

#[test]
fn decoupled_nash_recovers_player_one_optimum() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    for _ in 0..5 {
        let m = decoupled(&mut rng, 3, 2, 2);
        let sol = solve_nash_ergodic(&m, 0.6, 0.4, None, &ErgodicIterSpec::default()).unwrap();
        assert!(sol.certified, "{:?}", sol.gaps);
        let any = uniform_column(&m, Player::Two);
        assert!((sol.rho[0] - enumeration_oracle(&m, Player::One, &any, 0.6)).abs() < 1e-6);
        // player 2 best-responds to whatever player 1 does
        assert!((sol.rho[1] - enumeration_oracle(&m, Player::Two, &sol.profile.p1, 0.4)).abs() < 1e-6);
    }
}

#[test]
fn single_state_nash_matches_support_enumeration() {
    let games = [
        (vec![vec![0.0, 1.0], vec![1.0, 0.0]], vec![vec![1.0, 0.0], vec![0.0, 1.0]]),
        (vec![vec![1.0, 3.0], vec![0.0, 2.0]], vec![vec![1.0, 0.0], vec![3.0, 2.0]]),
        (vec![vec![0.2, 0.9, 0.4], vec![0.7, 0.1, 0.5]], vec![vec![0.6, 0.3, 0.1], vec![0.2, 0.8, 0.4]]),
    ];
    for (r1, r2) in games {
        let m = bimatrix_game(&r1, &r2);
        let sol = solve_nash_ergodic(&m, 0.7, 0.3, None, &ErgodicIterSpec::default()).unwrap();
        assert!(sol.certified);
        let (a, b) = (
            CostMatrix::from_fn(r1.len(), r1[0].len(), |i, j| r1[i][j]),
            CostMatrix::from_fn(r1.len(), r1[0].len(), |i, j| r2[i][j]),
        );
        let found = support_enumeration(&a, &b)
            .iter()
            .any(|e| (e.cost1 - sol.rho[0]).abs() < 1e-6 && (e.cost2 - sol.rho[1]).abs() < 1e-6);
        assert!(found, "rho {:?} not an equilibrium payoff", sol.rho);
    }
    let pennies = bimatrix_game(&[vec![0.0, 1.0], vec![1.0, 0.0]], &[vec![1.0, 0.0], vec![0.0, 1.0]]);
    let sol = solve_nash_ergodic(&pennies, 1.0, 1.0, None, &ErgodicIterSpec::default()).unwrap();
    assert!((sol.profile.p1[0].weights()[0] - 0.5).abs() < 1e-9);
    assert!((sol.profile.p2[0].weights()[0] - 0.5).abs() < 1e-9);
}

#[test]
fn ergodic_gaps_are_nonnegative() {
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    for _ in 0..10 {
        let m = random_sized(&mut rng, 2, 4, 3, false);
        let p = random_profile(&mut rng, &m);
        let g = nash_gap_ergodic(&m, &p, [0.5, 0.8], 0).unwrap();
        assert!(g.gaps.iter().all(|&x| x >= -1e-10));
        for k in 0..2 {
            let player = Player::BOTH[k];
            let best = enumeration_oracle(&m, player, p.column(player.other()), [0.5, 0.8][k]);
            assert!((g.best_rho[k] - best).abs() < 1e-8);
        }
    }
}

#[test]
fn truncation_bounds_and_exactness() {
    let mut rng = ChaCha8Rng::seed_from_u64(26);
    for _ in 0..3 {
        let (m, cert) = certified_model(&mut rng, 4, 2, 2);
        let theta = 0.4;
        let full = solve_nash_ergodic(&m, theta, theta, Some(&cert), &ErgodicIterSpec::default()).unwrap();
        for n in 1..=4 {
            let t = truncate_costs(&m, n).unwrap();
            let sol = solve_nash_ergodic(&t, theta, theta, Some(&cert), &ErgodicIterSpec::default()).unwrap();
            for k in 0..2 {
                assert!(sol.rho[k] >= -1e-12 && sol.rho[k] <= m.cost(Player::BOTH[k]).sup_norm() + 1e-12);
                assert!(theta * sol.rho[k] <= cert.delta + 1e-12);
            }
            if n == 4 {
                assert_eq!(sol.rho, full.rho);
                assert_eq!(sol.psi, full.psi);
            }
        }
    }
}

#[test]
fn probe_converges_on_uncontrolled_chain() {
    let m = uncontrolled(&[vec![-1.0, 0.6, 0.4], vec![0.5, -0.8, 0.3], vec![0.2, 0.9, -1.1]], &[0.3, 0.9, 0.1]);
    let opp = uniform_column(&m, Player::Two);
    let trace = vanishing_discount_probe(&m, 0.5, Player::One, &opp, &default_alphas(), 256, 0).unwrap();
    let p = StationaryProfile::uniform(&m);
    assert!((trace.theta_rho - 0.5 * oracle_rho(&m, &p, Player::One, 0.5)).abs() < 1e-9);
    let errors: Vec<f64> = trace.rows.iter().map(|r| r.error).collect();
    assert!(errors.windows(2).skip(2).all(|w| w[1] <= w[0]), "{errors:?}");
    assert!(*errors.last().unwrap() <= 1e-3_f64.max(1e-2 * trace.theta_rho));
    assert!(trace.rows.iter().all(|r| r.psi_bar[0] == 1.0));
}

/// `||alpha phi|| + ||alpha theta dphi/dtheta|| <= 3 ||r||` for `alpha < 1`.
#[test]
fn discounted_derivative_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(27);
    for _ in 0..5 {
        let m = random_sized(&mut rng, 2, 4, 2, false);
        let sup = m.cost(Player::One).sup_norm();
        let opp = Strategy::stationary(uniform_column(&m, Player::Two));
        for alpha in [0.5, 0.125, 1.0 / 32.0] {
            let c = solve_discounted_hjb(&m, Player::One, &opp, alpha, 0.5, &GridSpec::default()).unwrap();
            for k in 1..c.n_nodes() - 1 {
                let dt = c.theta[k + 1] - c.theta[k - 1];
                let lhs = (0..m.n_states()).map(|i| (alpha * c.phi(k, i)).abs()).fold(0.0, f64::max)
                    + (0..m.n_states())
                        .map(|i| (alpha * c.theta[k] * (c.phi(k + 1, i) - c.phi(k - 1, i)) / dt).abs())
                        .fold(0.0, f64::max);
                assert!(lhs <= 3.0 * sup + 1e-9, "alpha {alpha} node {k}: {lhs}");
            }
        }
    }
}

/// The normalised eigenvector is dominated by the exponential cost functional
/// up to the first visit of `i0`.
#[test]
fn eigenvector_below_hitting_functional() {
    let mut rng = ChaCha8Rng::seed_from_u64(28);
    let mut checked = 0;
    for _ in 0..6 {
        let (m, cert) = certified_model(&mut rng, 4, 2, 2);
        let theta = 0.4;
        let sol = solve_nash_ergodic(&m, theta, theta, Some(&cert), &ErgodicIterSpec::default()).unwrap();
        let q = generator(&m, &sol.profile);
        for (k, player) in Player::BOTH.into_iter().enumerate() {
            assert!(sol.rho[k] >= 0.0);
            if let Some(h) = hitting_functional(&q, &cost_vector(&m, &sol.profile, player), theta, cert.i0) {
                checked += 1;
                for i in 0..4 {
                    assert!(sol.psi[k][i] <= h[i] * (1.0 + 1e-9), "{:?} vs {h}", sol.psi[k]);
                }
            }
        }
    }
    assert!(checked > 0);
}
