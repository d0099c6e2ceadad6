//! Risk-sensitive ergodic costs.
//!
//! For a fixed stationary profile the ergodic cost `rho` and relative value
//! `psi` solve the multiplicative Poisson equation
//! `theta rho psi = (Q + theta diag(r)) psi`, i.e. `theta rho` is the Perron
//! root of the Metzler matrix `A = Q + theta diag(r)`. Single-agent optima
//! come from policy iteration on that eigenproblem and Nash points from
//! damped best response plus a stage-game fixed point, certified by gaps in
//! `rho`.

use std::collections::HashSet;

use serde::Serialize;

use crate::bimatrix::{closest_equilibrium, stage_game};
use crate::discounted::{solve_discounted_hjb, GridSpec};
use crate::error::{Error, Result};
use crate::generator::{argmin, cost_vector, hamiltonian_values, rate_matrix_from_columns};
use crate::model::{
    check_column, check_lyapunov, check_small_cost, CostKernel, GameModel, LyapunovCertificate, MixedAction, Player,
    RiskParams, StationaryProfile, Strategy,
};

pub const PERRON_TOL: f64 = 1e-10;
const PERRON_MAX_ITER: usize = 5_000_000;
const ENUMERATION_LIMIT: u128 = 4096;

/// Copy of `model` with both players' costs zeroed at states `>= n`.
pub fn truncate_costs(model: &GameModel, n: usize) -> Result<GameModel> {
    if n == 0 {
        return Err(Error::InvalidArgument("truncation level must be at least 1".into()));
    }
    let (states, m1, m2) = model.dims();
    let costs = Player::BOTH.map(|p| {
        let c = model.cost(p);
        let mut data = Vec::with_capacity(states * m1 * m2);
        for i in 0..states {
            for u1 in 0..m1 {
                for u2 in 0..m2 {
                    data.push(if i < n { c.get(i, u1, u2) } else { 0.0 });
                }
            }
        }
        CostKernel::new(p, states, m1, m2, data).expect("truncation keeps a valid cost table")
    });
    Ok(model.with_costs(costs, Some(n)))
}

#[derive(Clone, Debug, Serialize)]
pub struct PerronSolution {
    /// Ergodic cost, `lambda / theta`.
    pub rho: f64,
    /// Perron root `theta rho` of `Q + theta diag(r)`.
    pub lambda: f64,
    /// Positive eigenvector with `psi(i0) = 1`.
    pub psi: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
}

/// Perron pair of `Q_profile + theta diag(r_player)`.
pub fn perron_value(model: &GameModel, profile: &StationaryProfile, player: Player, theta: f64, i0: usize) -> Result<PerronSolution> {
    profile.check_dims(model)?;
    perron_columns(model, &profile.p1, &profile.p2, player, theta, i0)
}

pub(crate) fn perron_columns(
    model: &GameModel,
    p1: &[MixedAction],
    p2: &[MixedAction],
    player: Player,
    theta: f64,
    i0: usize,
) -> Result<PerronSolution> {
    let n = model.n_states();
    if !(theta > 0.0 && theta.is_finite()) {
        return Err(Error::InvalidArgument(format!("theta must be positive, got {theta}")));
    }
    if i0 >= n {
        return Err(Error::InvalidArgument(format!("reference state {i0} out of range")));
    }
    let q = rate_matrix_from_columns(model, p1, p2);
    q.irreducible().map_err(|(from, to)| Error::Reducible { from, to })?;
    let r = cost_vector(model, player, p1, p2);
    let mut a = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            a[i * n + j] = q.get(i, j) + if i == j { theta * r[i] } else { 0.0 };
        }
    }
    let r_sup = r.iter().fold(0.0f64, |s, v| s.max(v.abs()));
    let exit = (0..n).map(|i| q.exit_rate(i)).fold(0.0f64, f64::max);
    let h = 1.0 / (2.0 * (exit + theta * r_sup + 1.0));
    // B = I + hA is nonnegative with positive diagonal
    let b: Vec<f64> = (0..n * n).map(|k| if k / n == k % n { 1.0 + h * a[k] } else { h * a[k] }).collect();

    let apply = |m: &[f64], x: &[f64], out: &mut [f64]| {
        for i in 0..n {
            out[i] = (0..n).map(|j| m[i * n + j] * x[j]).sum();
        }
    };
    let mut psi = vec![1.0; n];
    let mut next = vec![0.0; n];
    let mut ax = vec![0.0; n];
    let mut residual = f64::INFINITY;
    let mut lambda = 0.0;
    for it in 1..=PERRON_MAX_ITER {
        apply(&b, &psi, &mut next);
        let norm = next[i0];
        next.iter_mut().for_each(|v| *v /= norm);
        std::mem::swap(&mut psi, &mut next);
        if it % 8 == 0 || n == 1 {
            apply(&a, &psi, &mut ax);
            // Rayleigh-type estimate weighted toward the dominant coordinates
            let num: f64 = ax.iter().zip(&psi).map(|(x, p)| x * p).sum();
            let den: f64 = psi.iter().map(|p| p * p).sum();
            lambda = num / den;
            residual = ax.iter().zip(&psi).map(|(x, p)| (x - lambda * p).abs()).fold(0.0, f64::max);
            if residual <= 0.1 * PERRON_TOL {
                return Ok(PerronSolution {
                    rho: lambda / theta,
                    lambda,
                    psi,
                    residual,
                    iterations: it,
                });
            }
        }
    }
    if residual <= PERRON_TOL {
        return Ok(PerronSolution {
            rho: lambda / theta,
            lambda,
            psi,
            residual,
            iterations: PERRON_MAX_ITER,
        });
    }
    Err(Error::NonConvergence {
        what: "Perron power iteration",
        iterations: PERRON_MAX_ITER,
        residual,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ErgodicCtmdp {
    pub rho: f64,
    pub psi: Vec<f64>,
    pub policy: Vec<usize>,
    /// `||theta rho psi - min-Hamiltonian||_inf`.
    pub bellman_residual: f64,
    /// `rho` after each policy evaluation.
    pub rho_history: Vec<f64>,
    /// Set when policy iteration cycled and enumeration took over.
    pub enumerated: bool,
}

fn pure_column(m: usize, policy: &[usize]) -> Vec<MixedAction> {
    policy.iter().map(|&a| MixedAction::pure(m, a)).collect()
}

fn evaluate_pure(model: &GameModel, player: Player, own: &[usize], opp: &[MixedAction], theta: f64, i0: usize) -> Result<PerronSolution> {
    let col = pure_column(model.n_actions(player), own);
    match player {
        Player::One => perron_columns(model, &col, opp, player, theta, i0),
        Player::Two => perron_columns(model, opp, &col, player, theta, i0),
    }
}

fn bellman(model: &GameModel, player: Player, opp: &[MixedAction], theta: f64, psi: &[f64], lambda: f64) -> (Vec<usize>, Vec<Vec<f64>>, f64) {
    let mut policy = Vec::with_capacity(psi.len());
    let mut values = Vec::with_capacity(psi.len());
    let mut residual = 0.0f64;
    for i in 0..psi.len() {
        let v = hamiltonian_values(model, player, i, &opp[i], psi, theta, psi[i]);
        let (best, a) = argmin(&v);
        residual = residual.max((lambda * psi[i] - best).abs());
        policy.push(a);
        values.push(v);
    }
    (policy, values, residual)
}

/// Single-agent ergodic optimum of `player` against a stationary opponent.
///
/// Policy iteration on the Perron root. A state switches action only when
/// the improvement exceeds `1e-12` relative to the magnitude of its values.
pub fn solve_ergodic_ctmdp(model: &GameModel, player: Player, opp: &[MixedAction], theta: f64, i0: usize) -> Result<ErgodicCtmdp> {
    check_column(model, player.other(), opp)?;
    let n = model.n_states();
    let ones = vec![1.0; n];
    let mut policy: Vec<usize> = (0..n)
        .map(|i| argmin(&hamiltonian_values(model, player, i, &opp[i], &ones, theta, 1.0)).1)
        .collect();
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut history = Vec::new();
    loop {
        seen.insert(policy.clone());
        let sol = evaluate_pure(model, player, &policy, opp, theta, i0)?;
        history.push(sol.rho);
        let (greedy, values, residual) = bellman(model, player, opp, theta, &sol.psi, sol.lambda);
        let mut changed = false;
        let mut next = policy.clone();
        for i in 0..n {
            let cur = values[i][policy[i]];
            let best = values[i][greedy[i]];
            let scale = 1.0 + cur.abs().max(best.abs());
            if cur - best > 1e-12 * scale {
                next[i] = greedy[i];
                changed = true;
            }
        }
        if !changed {
            return Ok(ErgodicCtmdp {
                rho: sol.rho,
                psi: sol.psi,
                policy,
                bellman_residual: residual,
                rho_history: history,
                enumerated: false,
            });
        }
        if seen.contains(&next) {
            let mut out = enumerate_ergodic(model, player, opp, theta, i0)?;
            history.push(out.rho);
            out.rho_history = history;
            return Ok(out);
        }
        policy = next;
    }
}

/// Exhaustive search over pure stationary policies, skipping those under
/// which the chain is reducible.
pub fn enumerate_ergodic(model: &GameModel, player: Player, opp: &[MixedAction], theta: f64, i0: usize) -> Result<ErgodicCtmdp> {
    let n = model.n_states();
    let m = model.n_actions(player);
    let size = (m as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if size > ENUMERATION_LIMIT {
        return Err(Error::PolicyCycle { size });
    }
    let mut best: Option<(Vec<usize>, PerronSolution)> = None;
    let mut policy = vec![0usize; n];
    for _ in 0..size {
        match evaluate_pure(model, player, &policy, opp, theta, i0) {
            Ok(sol) => {
                if best.as_ref().is_none_or(|(_, b)| sol.rho < b.rho - 1e-14 * (1.0 + b.rho.abs())) {
                    best = Some((policy.clone(), sol));
                }
            }
            Err(Error::Reducible { .. }) => {}
            Err(e) => return Err(e),
        }
        for d in policy.iter_mut() {
            *d += 1;
            if *d < m {
                break;
            }
            *d = 0;
        }
    }
    let (policy, sol) = best.ok_or(Error::Reducible { from: 0, to: 0 })?;
    let (_, _, residual) = bellman(model, player, opp, theta, &sol.psi, sol.lambda);
    Ok(ErgodicCtmdp {
        rho: sol.rho,
        psi: sol.psi,
        policy,
        bellman_residual: residual,
        rho_history: vec![sol.rho],
        enumerated: true,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ErgodicIterSpec {
    pub max_rounds: usize,
    pub tol_gap: f64,
    pub polish: bool,
    /// Stage-game fixed-point sweeps per polish attempt.
    pub polish_sweeps: usize,
}

impl Default for ErgodicIterSpec {
    fn default() -> Self {
        ErgodicIterSpec {
            max_rounds: 500,
            tol_gap: 1e-6,
            polish: true,
            polish_sweeps: 100,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ErgodicTraceRow {
    pub round: usize,
    pub gap1: f64,
    pub gap2: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub polished_gaps: Option<[f64; 2]>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ErgodicSolution {
    pub rho: [f64; 2],
    pub psi: [Vec<f64>; 2],
    pub profile: StationaryProfile,
    pub gaps: [f64; 2],
    /// Residual of each line of the coupled system.
    pub residuals: [f64; 2],
    pub certified: bool,
    pub i0: usize,
    pub theta: [f64; 2],
    pub rounds: usize,
    pub source: crate::nash_discounted::Source,
    /// `max_i psi_k(i) / W(i)` when a certificate is supplied.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weighted_norms: Option<[f64; 2]>,
    pub trace: Vec<ErgodicTraceRow>,
}

impl ErgodicSolution {
    pub fn trace_csv(&self) -> String {
        use crate::report::fmt_f64;
        let mut out = String::from("round,gap1,gap2,polished_gap1,polished_gap2\n");
        for r in &self.trace {
            let (a, b) = r.polished_gaps.map(|g| (fmt_f64(g[0]), fmt_f64(g[1]))).unwrap_or_default();
            out.push_str(&format!("{},{},{},{},{}\n", r.round, fmt_f64(r.gap1), fmt_f64(r.gap2), a, b));
        }
        out
    }

    /// CSV with columns `player,state,psi,action weights...`.
    pub fn to_csv(&self) -> String {
        use crate::report::fmt_f64;
        let mut out = String::from("player,rho,state,psi,strategy\n");
        for p in Player::BOTH {
            let k = p.index();
            for (i, v) in self.psi[k].iter().enumerate() {
                let w: Vec<String> = self.profile.column(p)[i].weights().iter().map(|x| fmt_f64(*x)).collect();
                out.push_str(&format!("{},{},{},{},{}\n", p, fmt_f64(self.rho[k]), i, fmt_f64(*v), w.join(";")));
            }
        }
        out
    }
}

struct Evaluated {
    perron: [PerronSolution; 2],
    best: [ErgodicCtmdp; 2],
    gaps: [f64; 2],
    residuals: [f64; 2],
}

fn evaluate_profile(model: &GameModel, profile: &StationaryProfile, theta: [f64; 2], i0: usize) -> Result<Evaluated> {
    let per = |p: Player| -> Result<(PerronSolution, ErgodicCtmdp, f64)> {
        let sol = perron_columns(model, &profile.p1, &profile.p2, p, theta[p.index()], i0)?;
        let br = solve_ergodic_ctmdp(model, p, profile.column(p.other()), theta[p.index()], i0)?;
        let (_, _, residual) = bellman(model, p, profile.column(p.other()), theta[p.index()], &sol.psi, sol.lambda);
        Ok((sol, br, residual))
    };
    let (a, b) = rayon::join(|| per(Player::One), || per(Player::Two));
    let ((s1, b1, r1), (s2, b2, r2)) = (a?, b?);
    Ok(Evaluated {
        gaps: [s1.rho - b1.rho, s2.rho - b2.rho],
        residuals: [r1, r2],
        perron: [s1, s2],
        best: [b1, b2],
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ErgodicGapReport {
    pub rho: [f64; 2],
    pub best_rho: [f64; 2],
    /// `rho_k(profile) - min over own stationary responses`.
    pub gaps: [f64; 2],
    pub residuals: [f64; 2],
}

/// Nash gaps of a stationary profile under the ergodic criterion.
pub fn nash_gap_ergodic(model: &GameModel, profile: &StationaryProfile, theta: [f64; 2], i0: usize) -> Result<ErgodicGapReport> {
    profile.check_dims(model)?;
    let ev = evaluate_profile(model, profile, theta, i0)?;
    Ok(ErgodicGapReport {
        rho: [ev.perron[0].rho, ev.perron[1].rho],
        best_rho: [ev.best[0].rho, ev.best[1].rho],
        gaps: ev.gaps,
        residuals: ev.residuals,
    })
}

/// Stage-game fixed point from `start`: recompute both Perron vectors, then
/// put each state's action pair at the nearest equilibrium of its stage game.
fn ergodic_polish(model: &GameModel, start: &StationaryProfile, theta: [f64; 2], i0: usize, sweeps: usize) -> Result<StationaryProfile> {
    let mut cur = start.clone();
    for _ in 0..sweeps {
        let s1 = perron_columns(model, &cur.p1, &cur.p2, Player::One, theta[0], i0)?;
        let s2 = perron_columns(model, &cur.p1, &cur.p2, Player::Two, theta[1], i0)?;
        let mut next = cur.clone();
        for i in 0..model.n_states() {
            let [a, b] = stage_game(model, i, [&s1.psi, &s2.psi], theta);
            if let Some((x, y)) = closest_equilibrium(&a, &b, &cur.p1[i], &cur.p2[i]) {
                next.p1[i] = x;
                next.p2[i] = y;
            }
        }
        let change = next.sup_distance(&cur);
        cur = next;
        if change <= 1e-14 {
            break;
        }
    }
    Ok(cur)
}

/// Certifies a certificate's hypotheses before a Nash solve.
pub fn require_certificate(model: &GameModel, theta: [f64; 2], cert: &LyapunovCertificate) -> Result<()> {
    let report = check_lyapunov(model, cert, 1e-12)?;
    if !report.passed {
        return Err(Error::Assumption {
            assumption: "A3 (Lyapunov drift)",
            detail: format!(
                "{} violations, worst margin {:e} at {:?}{}",
                report.violations,
                report.worst_margin,
                report.worst_index,
                report.certificate_issue.map(|s| format!("; {s}")).unwrap_or_default()
            ),
        });
    }
    let params = RiskParams {
        theta1: theta[0],
        theta2: theta[1],
        theta_bound: theta[0].max(theta[1]),
        alpha: 1.0,
    };
    let small = check_small_cost(model, &params, cert);
    if !small.passed {
        return Err(Error::Assumption {
            assumption: "A4 (small cost)",
            detail: format!("delta - theta_k ||r_k|| = {:?}", small.slack),
        });
    }
    Ok(())
}

/// Ergodic Nash point by damped best response with stage-game repair.
pub fn solve_nash_ergodic(
    model: &GameModel,
    theta1: f64,
    theta2: f64,
    cert: Option<&LyapunovCertificate>,
    spec: &ErgodicIterSpec,
) -> Result<ErgodicSolution> {
    let theta = [theta1, theta2];
    if let Some(c) = cert {
        require_certificate(model, theta, c)?;
    }
    let i0 = cert.map_or(0, |c| c.i0);
    let mut inc = StationaryProfile::uniform(model);
    let mut trace = Vec::new();
    let mut best: Option<(f64, ErgodicSolution)> = None;

    let build = |profile: StationaryProfile, ev: Evaluated, certified: bool, source, rounds: usize, trace: &Vec<ErgodicTraceRow>| {
        let [s1, s2] = ev.perron;
        let weighted_norms = cert.map(|c| {
            [&s1.psi, &s2.psi].map(|psi| psi.iter().zip(&c.w).map(|(p, w)| p / w).fold(0.0, f64::max))
        });
        ErgodicSolution {
            rho: [s1.rho, s2.rho],
            psi: [s1.psi, s2.psi],
            profile,
            gaps: ev.gaps,
            residuals: ev.residuals,
            certified,
            i0,
            theta,
            rounds,
            source,
            weighted_norms,
            trace: trace.clone(),
        }
    };

    for t in 0..spec.max_rounds {
        let ev = evaluate_profile(model, &inc, theta, i0)?;
        let gaps = ev.gaps;
        let worst = gaps[0].max(gaps[1]);
        let mut row = ErgodicTraceRow {
            round: t,
            gap1: gaps[0],
            gap2: gaps[1],
            polished_gaps: None,
        };
        if worst <= spec.tol_gap {
            trace.push(row);
            return Ok(build(inc, ev, true, crate::nash_discounted::Source::BestResponse, t + 1, &trace));
        }
        let lambda = 1.0 / (t as f64 + 1.0);
        let m = [model.n_actions(Player::One), model.n_actions(Player::Two)];
        let br = [pure_column(m[0], &ev.best[0].policy), pure_column(m[1], &ev.best[1].policy)];
        let next = StationaryProfile::new(
            inc.p1.iter().zip(&br[0]).map(|(a, b)| a.mix(b, lambda)).collect(),
            inc.p2.iter().zip(&br[1]).map(|(a, b)| a.mix(b, lambda)).collect(),
        );

        if spec.polish {
            let cand = ergodic_polish(model, &inc, theta, i0, spec.polish_sweeps)?;
            let pev = evaluate_profile(model, &cand, theta, i0)?;
            let pg = pev.gaps;
            row.polished_gaps = Some(pg);
            let pworst = pg[0].max(pg[1]);
            if pworst <= spec.tol_gap {
                trace.push(row);
                return Ok(build(cand, pev, true, crate::nash_discounted::Source::StagePolish, t + 1, &trace));
            }
            if best.as_ref().is_none_or(|(b, _)| pworst < *b) {
                best = Some((pworst, build(cand, pev, false, crate::nash_discounted::Source::StagePolish, t + 1, &trace)));
            }
        }
        if best.as_ref().is_none_or(|(b, _)| worst < *b) {
            best = Some((worst, build(inc.clone(), ev, false, crate::nash_discounted::Source::BestResponse, t + 1, &trace)));
        }
        trace.push(row);
        inc = next;
    }
    let (_, mut out) = best.expect("at least one round runs");
    out.rounds = spec.max_rounds;
    out.trace = trace;
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct DiscountRow {
    pub alpha: f64,
    /// `g_alpha(theta, i0) = theta (alpha phi + theta alpha dphi/dtheta)`.
    pub g: f64,
    /// `max_i g - min_i g` over states.
    pub spread: f64,
    /// `psi_alpha(theta, .) / psi_alpha(theta, i0)`.
    pub psi_bar: Vec<f64>,
    /// `|g - theta rho|`.
    pub error: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DiscountTrace {
    pub theta: f64,
    pub i0: usize,
    /// Ergodic reference `theta rho` of the same single-agent problem.
    pub theta_rho: f64,
    pub rows: Vec<DiscountRow>,
}

impl DiscountTrace {
    pub fn to_csv(&self) -> String {
        use crate::report::fmt_f64;
        let mut out = String::from("alpha,g,theta_rho,error,spread,psi_bar\n");
        for r in &self.rows {
            let bar: Vec<String> = r.psi_bar.iter().map(|v| fmt_f64(*v)).collect();
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                fmt_f64(r.alpha),
                fmt_f64(r.g),
                fmt_f64(self.theta_rho),
                fmt_f64(r.error),
                fmt_f64(r.spread),
                bar.join(";")
            ));
        }
        out
    }
}

/// Geometric schedule `2^0, 2^-1, ..., 2^-10`.
pub fn default_alphas() -> Vec<f64> {
    (0..=10).map(|k| 0.5f64.powi(k)).collect()
}

/// Discounted solves for decreasing `alpha` against a fixed stationary
/// opponent, tracking `g_alpha` toward the ergodic value `theta rho`.
///
/// The curve is solved one interval past `theta` so that `theta` is an
/// interior node and the derivative is a plain central difference.
pub fn vanishing_discount_probe(
    model: &GameModel,
    theta: f64,
    player: Player,
    opp: &[MixedAction],
    alphas: &[f64],
    intervals: usize,
    i0: usize,
) -> Result<DiscountTrace> {
    check_column(model, player.other(), opp)?;
    if alphas.is_empty() || alphas.iter().any(|a| !(*a > 0.0)) || alphas.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::InvalidArgument("alpha list must be positive and strictly decreasing".into()));
    }
    let reference = solve_ergodic_ctmdp(model, player, opp, theta, i0)?;
    let theta_rho = theta * reference.rho;
    let grid = GridSpec::with_intervals(intervals + 1);
    let top = theta * (intervals + 1) as f64 / intervals as f64;
    let strategy = Strategy::stationary(opp.to_vec());
    let n = model.n_states();
    let rows = alphas
        .iter()
        .map(|&alpha| -> Result<DiscountRow> {
            let curve = solve_discounted_hjb(model, player, &strategy, alpha, top, &grid)?;
            let k = intervals;
            let dt = curve.theta[k + 1] - curve.theta[k - 1];
            // theta (alpha phi + theta alpha phi') = alpha theta d(ln psi)/dtheta
            let g_at = |i: usize| alpha * theta * (curve.psi[k + 1][i].ln() - curve.psi[k - 1][i].ln()) / dt;
            let gs: Vec<f64> = (0..n).map(g_at).collect();
            let g = gs[i0];
            let spread = gs.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - gs.iter().cloned().fold(f64::INFINITY, f64::min);
            let psi_bar = curve.psi[k].iter().map(|v| v / curve.psi[k][i0]).collect();
            Ok(DiscountRow {
                alpha,
                g,
                spread,
                psi_bar,
                error: (g - theta_rho).abs(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DiscountTrace {
        theta,
        i0,
        theta_rho,
        rows,
    })
}
