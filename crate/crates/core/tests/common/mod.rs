//! Shared generators and independent oracles for the integration suites.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rsgame::{GameModel, LyapunovCertificate, MixedAction, Player, StationaryProfile};

/// Random model with `n` states and `m1 x m2` actions. Off-diagonal rates in
/// `(0.05, 1)`, so every profile is irreducible; costs in `[0, cost_max]`.
/// Additive models are sums of single-player tables, costs split evenly.
pub fn random_model(rng: &mut impl Rng, n: usize, m1: usize, m2: usize, arat: bool, cost_max: f64) -> GameModel {
    let full: Vec<f64> = (0..n * n * m1 * m2).map(|_| rng.gen_range(0.05..1.0)).collect();
    let a: Vec<f64> = (0..n * n * m1).map(|_| rng.gen_range(0.025..0.5)).collect();
    let b: Vec<f64> = (0..n * n * m2).map(|_| rng.gen_range(0.025..0.5)).collect();
    let cf: Vec<f64> = (0..2 * n * m1 * m2).map(|_| rng.gen_range(0.0..=cost_max)).collect();
    let ca: Vec<f64> = (0..2 * n * m1).map(|_| rng.gen_range(0.0..=cost_max / 2.0)).collect();
    let cb: Vec<f64> = (0..2 * n * m2).map(|_| rng.gen_range(0.0..=cost_max / 2.0)).collect();
    GameModel::from_fn(
        n,
        m1,
        m2,
        |i, j, u1, u2| {
            if arat {
                a[(i * n + j) * m1 + u1] + b[(i * n + j) * m2 + u2]
            } else {
                full[((i * n + j) * m1 + u1) * m2 + u2]
            }
        },
        |p, i, u1, u2| {
            let k = p.index();
            if arat {
                ca[(k * n + i) * m1 + u1] + cb[(k * n + i) * m2 + u2]
            } else {
                cf[((k * n + i) * m1 + u1) * m2 + u2]
            }
        },
    )
    .unwrap()
}

/// Random sizes within `n_max` states and `m_max` actions per player.
pub fn random_sized(rng: &mut impl Rng, n_min: usize, n_max: usize, m_max: usize, arat: bool) -> GameModel {
    let n = rng.gen_range(n_min..=n_max);
    let (m1, m2) = (rng.gen_range(1..=m_max), rng.gen_range(1..=m_max));
    random_model(rng, n, m1, m2, arat, 1.0)
}

/// Uncontrolled chain with generator `q` and costs `r1` (player 2 pays 0).
pub fn uncontrolled(q: &[Vec<f64>], r1: &[f64]) -> GameModel {
    let n = q.len();
    GameModel::from_fn(n, 1, 1, |i, j, _, _| q[i][j], |p, i, _, _| if p == Player::One { r1[i] } else { 0.0 }).unwrap()
}

/// Model whose rates and costs ignore player 2 (player 2 pays nothing).
pub fn opponent_independent(rng: &mut impl Rng, n: usize, m1: usize, m2: usize) -> GameModel {
    let rates: Vec<f64> = (0..n * n * m1).map(|_| rng.gen_range(0.05..1.0)).collect();
    let costs: Vec<f64> = (0..n * m1).map(|_| rng.gen_range(0.0..1.0)).collect();
    GameModel::from_fn(
        n,
        m1,
        m2,
        |i, j, u1, _| rates[(i * n + j) * m1 + u1],
        |p, i, u1, _| if p == Player::One { costs[i * m1 + u1] } else { 0.0 },
    )
    .unwrap()
}

/// Decoupled additive game: rates follow player 1 alone and each player's
/// cost follows its own action, so the two control problems separate.
pub fn decoupled(rng: &mut impl Rng, n: usize, m1: usize, m2: usize) -> GameModel {
    let rates: Vec<f64> = (0..n * n * m1).map(|_| rng.gen_range(0.05..1.0)).collect();
    let c1: Vec<f64> = (0..n * m1).map(|_| rng.gen_range(0.0..1.0)).collect();
    let c2: Vec<f64> = (0..n * m2).map(|_| rng.gen_range(0.0..1.0)).collect();
    GameModel::from_fn(
        n,
        m1,
        m2,
        |i, j, u1, _| rates[(i * n + j) * m1 + u1],
        |p, i, u1, u2| match p {
            Player::One => c1[i * m1 + u1],
            Player::Two => c2[i * m2 + u2],
        },
    )
    .unwrap()
}

/// Single-state game with cost matrices `r1`, `r2` (row = player 1 action).
pub fn bimatrix_game(r1: &[Vec<f64>], r2: &[Vec<f64>]) -> GameModel {
    let (m1, m2) = (r1.len(), r1[0].len());
    GameModel::from_fn(1, m1, m2, |_, _, _, _| 0.0, |p, _, u1, u2| if p == Player::One { r1[u1][u2] } else { r2[u1][u2] }).unwrap()
}

/// Model with a Lyapunov certificate: state `n - 1` carries `W = 11` and
/// drains quickly, the others have `W = 1` and feed it slowly. With
/// `delta = 0.5`, `b = 5`, `C = S` the drift inequality holds for every
/// action pair; `theta ||r|| <= delta` then needs `theta <= 0.5`.
pub fn certified_model(rng: &mut impl Rng, n: usize, m1: usize, m2: usize) -> (GameModel, LyapunovCertificate) {
    let hub = n - 1;
    let out_of_hub: Vec<f64> = (0..n * m1 * m2).map(|_| rng.gen_range(1.0..2.0) / (n - 1) as f64).collect();
    let into_hub: Vec<f64> = (0..n * m1 * m2).map(|_| rng.gen_range(0.01..0.35)).collect();
    let other: Vec<f64> = (0..n * n * m1 * m2).map(|_| rng.gen_range(0.05..1.0)).collect();
    let costs: Vec<f64> = (0..2 * n * m1 * m2).map(|_| rng.gen_range(0.0..1.0)).collect();
    let model = GameModel::from_fn(
        n,
        m1,
        m2,
        |i, j, u1, u2| {
            let a = (i * m1 + u1) * m2 + u2;
            if i == hub {
                out_of_hub[a]
            } else if j == hub {
                into_hub[a]
            } else {
                other[((i * n + j) * m1 + u1) * m2 + u2]
            }
        },
        |p, i, u1, u2| costs[((p.index() * n + i) * m1 + u1) * m2 + u2],
    )
    .unwrap();
    let mut w = vec![1.0; n];
    w[hub] = 11.0;
    let cert = LyapunovCertificate {
        w,
        b: 5.0,
        delta: 0.5,
        c: (0..n).collect(),
        i0: hub,
    };
    (model, cert)
}

/// Generator of a stationary profile, assembled independently of the crate.
pub fn generator(model: &GameModel, profile: &StationaryProfile) -> DMatrix<f64> {
    let n = model.n_states();
    let (m1, m2) = (model.n_actions(Player::One), model.n_actions(Player::Two));
    let mut q = DMatrix::zeros(n, n);
    for i in 0..n {
        let (x, y) = (profile.p1[i].weights(), profile.p2[i].weights());
        for j in 0..n {
            let mut acc = 0.0;
            for u1 in 0..m1 {
                for u2 in 0..m2 {
                    acc += x[u1] * y[u2] * model.rates().get(i, j, u1, u2);
                }
            }
            q[(i, j)] = acc;
        }
    }
    q
}

pub fn cost_vector(model: &GameModel, profile: &StationaryProfile, player: Player) -> DVector<f64> {
    let n = model.n_states();
    let (m1, m2) = (model.n_actions(Player::One), model.n_actions(Player::Two));
    DVector::from_fn(n, |i, _| {
        let (x, y) = (profile.p1[i].weights(), profile.p2[i].weights());
        let mut acc = 0.0;
        for u1 in 0..m1 {
            for u2 in 0..m2 {
                acc += x[u1] * y[u2] * model.cost(player).get(i, u1, u2);
            }
        }
        acc
    })
}

/// Largest real eigenvalue of `Q + theta diag(r)` from a dense Schur
/// decomposition.
pub fn dense_perron_root(q: &DMatrix<f64>, r: &DVector<f64>, theta: f64) -> f64 {
    let a = q + DMatrix::from_diagonal(&(r * theta));
    a.complex_eigenvalues().iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max)
}

/// Stationary distribution `mu Q = 0`, `sum mu = 1`, by a dense solve.
pub fn stationary_distribution(q: &DMatrix<f64>) -> DVector<f64> {
    let n = q.nrows();
    let mut a = q.transpose();
    for j in 0..n {
        a[(n - 1, j)] = 1.0;
    }
    let mut rhs = DVector::zeros(n);
    rhs[n - 1] = 1.0;
    a.lu().solve(&rhs).unwrap()
}

/// `(alpha I - Q)^{-1} r`.
pub fn linear_discounted(q: &DMatrix<f64>, r: &DVector<f64>, alpha: f64) -> DVector<f64> {
    let n = q.nrows();
    (DMatrix::identity(n, n) * alpha - q).lu().solve(r).unwrap()
}

/// All pure stationary columns for a player with `m` actions on `n` states.
pub fn pure_columns(n: usize, m: usize) -> Vec<Vec<usize>> {
    let total = m.pow(n as u32);
    (0..total)
        .map(|mut code| {
            (0..n)
                .map(|_| {
                    let a = code % m;
                    code /= m;
                    a
                })
                .collect()
        })
        .collect()
}

pub fn pure_column(m: usize, actions: &[usize]) -> Vec<MixedAction> {
    actions.iter().map(|&a| MixedAction::pure(m, a)).collect()
}

pub fn random_mixed(rng: &mut impl Rng, m: usize) -> MixedAction {
    let w: Vec<f64> = (0..m).map(|_| rng.gen_range(0.0..1.0f64) + 1e-3).collect();
    let s: f64 = w.iter().sum();
    let mut w: Vec<f64> = w.iter().map(|x| x / s).collect();
    let rest: f64 = w[1..].iter().sum();
    w[0] = 1.0 - rest;
    MixedAction::new(w).unwrap()
}

pub fn random_profile(rng: &mut impl Rng, model: &GameModel) -> StationaryProfile {
    let n = model.n_states();
    let p1 = (0..n).map(|_| random_mixed(rng, model.n_actions(Player::One))).collect();
    let p2 = (0..n).map(|_| random_mixed(rng, model.n_actions(Player::Two))).collect();
    StationaryProfile::new(p1, p2)
}

pub fn uniform_column(model: &GameModel, player: Player) -> Vec<MixedAction> {
    vec![MixedAction::uniform(model.n_actions(player)); model.n_states()]
}

/// `psi(theta)` for a fixed stationary generator `q` and cost `r`, from the
/// power series `psi = sum_k a_k theta^k` with `a_0 = 1` and
/// `(alpha k I - Q) a_k = diag(r) a_{k-1}`.
pub fn series_discounted(q: &DMatrix<f64>, r: &DVector<f64>, alpha: f64, theta: f64) -> DVector<f64> {
    let n = q.nrows();
    let mut a = DVector::from_element(n, 1.0);
    let mut sum = a.clone();
    for k in 1..400 {
        let lhs = DMatrix::identity(n, n) * (alpha * k as f64) - q;
        a = lhs.lu().solve(&r.component_mul(&a)).unwrap() * theta;
        sum += &a;
        if a.amax() < 1e-18 * sum.amax() {
            break;
        }
    }
    sum
}

/// Generator and cost of `player` when the player uses pure actions `own`
/// against the stationary column `opp`.
pub fn pure_against(model: &GameModel, player: Player, own: &[usize], opp: &[MixedAction]) -> (DMatrix<f64>, DVector<f64>) {
    let col = pure_column(model.n_actions(player), own);
    let profile = StationaryProfile::from_columns(player, col, opp.to_vec());
    (generator(model, &profile), cost_vector(model, &profile, player))
}

/// Equilibrium payoffs `(x'Ay, x'By)` of a cost bimatrix game found by
/// enumerating equal-size supports and solving the indifference systems.
/// Nondegenerate games only.
pub fn equilibrium_payoffs(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<(f64, f64)> {
    let (m, n) = (a.len(), a[0].len());
    let subsets = |len: usize| -> Vec<Vec<usize>> { (1..1u32 << len).map(|s| (0..len).filter(|k| s >> k & 1 == 1).collect()).collect() };
    // weights z on `cols` making every row in `rows` of `mat` equal, summing to 1
    let indifferent = |rows: &[usize], cols: &[usize], mat: &dyn Fn(usize, usize) -> f64| -> Option<(Vec<f64>, f64)> {
        let k = rows.len();
        let mut sys = DMatrix::zeros(k + 1, k + 1);
        let mut rhs = DVector::zeros(k + 1);
        for (p, &r) in rows.iter().enumerate() {
            for (q, &c) in cols.iter().enumerate() {
                sys[(p, q)] = mat(r, c);
            }
            sys[(p, k)] = -1.0;
        }
        for q in 0..k {
            sys[(k, q)] = 1.0;
        }
        rhs[k] = 1.0;
        let z = sys.lu().solve(&rhs)?;
        let w: Vec<f64> = (0..k).map(|q| z[q]).collect();
        if w.iter().any(|&v| v < -1e-12) {
            return None;
        }
        Some((w, z[k]))
    };
    let mut out = Vec::new();
    for rows in subsets(m) {
        for cols in subsets(n).into_iter().filter(|c| c.len() == rows.len()) {
            let Some((yw, v)) = indifferent(&rows, &cols, &|r, c| a[r][c]) else { continue };
            let Some((xw, w)) = indifferent(&cols, &rows, &|c, r| b[r][c]) else { continue };
            let mut x = vec![0.0; m];
            let mut y = vec![0.0; n];
            rows.iter().zip(&xw).for_each(|(&r, &p)| x[r] = p);
            cols.iter().zip(&yw).for_each(|(&c, &p)| y[c] = p);
            let row_cost = |r: usize| (0..n).map(|c| a[r][c] * y[c]).sum::<f64>();
            let col_cost = |c: usize| (0..m).map(|r| b[r][c] * x[r]).sum::<f64>();
            if (0..m).all(|r| row_cost(r) >= v - 1e-12) && (0..n).all(|c| col_cost(c) >= w - 1e-12) {
                out.push((v, w));
            }
        }
    }
    out
}

/// `E_i[exp(theta int_0^tau r)]` up to the hitting time `tau` of `i0`, from
/// the killed linear system; `None` when the moment is infinite.
pub fn hitting_functional(q: &DMatrix<f64>, r: &DVector<f64>, theta: f64, i0: usize) -> Option<DVector<f64>> {
    let n = q.nrows();
    let a = q + DMatrix::from_diagonal(&(r * theta));
    let rest: Vec<usize> = (0..n).filter(|&i| i != i0).collect();
    let sub = DMatrix::from_fn(rest.len(), rest.len(), |x, y| a[(rest[x], rest[y])]);
    if dense_perron_root(&sub, &DVector::zeros(rest.len()), 0.0) >= 0.0 {
        return None;
    }
    let rhs = DVector::from_fn(rest.len(), |x, _| -a[(rest[x], i0)]);
    let h = sub.lu().solve(&rhs)?;
    let mut out = DVector::from_element(n, 1.0);
    for (x, &i) in rest.iter().enumerate() {
        out[i] = h[x];
    }
    Some(out)
}
