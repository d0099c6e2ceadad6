//! Risk-sensitive discounted values as solutions of an ODE in the risk
//! parameter.
//!
//! For a player facing a fixed opponent strategy the value `psi(theta, i)`
//! solves
//!
//! ```text
//! alpha * theta * dpsi/dtheta (theta, i) = min_u [ Pi_{u, opp} psi(theta, .)(i) + theta r(i, u, opp) psi(theta, i) ]
//! psi(0, i) = 1
//! ```
//!
//! The equation is singular at `theta = 0`. Near zero the solution expands
//! as `psi = 1 + theta phi0 + O(theta^2)` where `phi0` solves the risk-neutral
//! discounted equation, so integration starts from `exp(theta_s phi0)` at a
//! tiny `theta_s` and proceeds in the log variable `sigma = ln theta`, where
//! the equation reads `dpsi/dsigma = H(theta, psi) / alpha` and is regular.
//! Each grid interval is covered by fixed classical RK4 substeps whose count
//! is set a priori from the model's Lipschitz bound.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::generator::{argmin, hamiltonian_mixed, hamiltonian_values, mixed_cost, mixed_rate};
use crate::model::{EventuallyStationaryPolicy, GameModel, MixedAction, Player, Strategy};

pub const DEFAULT_INTERVALS: usize = 256;
pub const MIN_INTERVALS: usize = 16;
const ENVELOPE_TOL: f64 = 1e-6;
const MAX_LOG_STEP: f64 = 0.2;

/// Uniform theta-grid `0 = theta^0 < ... < theta^N = theta_max`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GridSpec {
    pub intervals: usize,
    /// Seed point as a fraction of the first node.
    pub seed_fraction: f64,
    /// Target `step * Lipschitz` per RK4 substep.
    pub step_control: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            intervals: DEFAULT_INTERVALS,
            seed_fraction: 1e-4,
            step_control: 0.05,
        }
    }
}

impl GridSpec {
    pub fn with_intervals(intervals: usize) -> Self {
        GridSpec {
            intervals,
            ..Default::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.intervals < MIN_INTERVALS {
            return Err(Error::InvalidArgument(format!(
                "theta grid needs at least {MIN_INTERVALS} intervals, got {}",
                self.intervals
            )));
        }
        if !(self.seed_fraction > 0.0 && self.seed_fraction < 1.0) || !(self.step_control > 0.0) {
            return Err(Error::InvalidArgument("invalid seed fraction or step control".into()));
        }
        Ok(())
    }

    pub fn nodes(&self, theta_max: f64) -> Vec<f64> {
        (0..=self.intervals)
            .map(|k| theta_max * k as f64 / self.intervals as f64)
            .collect()
    }
}

/// Per-state solution of the discounted equation on a theta-grid.
#[derive(Clone, Debug, Serialize)]
pub struct ValueCurve {
    pub player: Player,
    pub alpha: f64,
    /// Grid nodes including `theta = 0`.
    pub theta: Vec<f64>,
    /// `psi[node][state]`.
    pub psi: Vec<Vec<f64>>,
    /// Minimising pure action per node and state; absent for evaluations of
    /// fixed strategies.
    pub selectors: Option<Vec<Vec<usize>>>,
    /// Risk-neutral seed `phi0`, the limit of `phi` as `theta -> 0`.
    pub phi0: Vec<f64>,
}

impl ValueCurve {
    pub fn n_nodes(&self) -> usize {
        self.theta.len()
    }

    pub fn n_states(&self) -> usize {
        self.phi0.len()
    }

    pub fn theta_max(&self) -> f64 {
        *self.theta.last().unwrap()
    }

    /// Values at the top node.
    pub fn top(&self) -> &[f64] {
        self.psi.last().unwrap()
    }

    /// `phi(theta, i) = ln psi(theta, i) / theta`, with the risk-neutral limit
    /// at `theta = 0`.
    pub fn phi(&self, node: usize, i: usize) -> f64 {
        if node == 0 {
            self.phi0[i]
        } else {
            self.psi[node][i].ln() / self.theta[node]
        }
    }

    pub fn sup_norm(&self) -> f64 {
        self.psi.iter().flatten().fold(0.0f64, |a, b| a.max(b.abs()))
    }

    /// Recorded selectors as a theta-indexed pure policy on nodes
    /// `theta^1..theta^N`.
    pub fn selector_policy(&self, n_actions: usize) -> Option<EventuallyStationaryPolicy> {
        let sel = self.selectors.as_ref()?;
        let cells = sel[1..]
            .iter()
            .map(|row| row.iter().map(|&a| MixedAction::pure(n_actions, a)).collect())
            .collect();
        EventuallyStationaryPolicy::new(self.theta[1..].to_vec(), cells).ok()
    }

    /// CSV with columns `theta,state,psi,phi,argmin`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("theta,state,psi,phi,argmin\n");
        for (k, row) in self.psi.iter().enumerate() {
            for (i, v) in row.iter().enumerate() {
                let sel = self
                    .selectors
                    .as_ref()
                    .map(|s| s[k][i].to_string())
                    .unwrap_or_default();
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    crate::report::fmt_f64(self.theta[k]),
                    i,
                    crate::report::fmt_f64(*v),
                    crate::report::fmt_f64(self.phi(k, i)),
                    sel
                ));
            }
        }
        out
    }
}

/// Result of the risk-neutral discounted problem `alpha phi = min_u [Pi phi + r]`.
#[derive(Clone, Debug, Serialize)]
pub struct RiskNeutralSolution {
    pub phi: Vec<f64>,
    pub policy: Vec<usize>,
    pub iterations: usize,
    pub residual: f64,
}

/// Solves `alpha phi(i) = min_u [Pi_{u, opp(i)} phi(i) + r(i, u, opp(i))]`.
///
/// Policy iteration: each sweep evaluates the incumbent pure policy exactly
/// with a dense solve of `(alpha I - Pi) phi = r` and then improves it
/// greedily, keeping the incumbent action unless another is strictly better.
pub fn solve_risk_neutral_discounted(
    model: &GameModel,
    player: Player,
    opp: &[MixedAction],
    alpha: f64,
) -> Result<RiskNeutralSolution> {
    if !(alpha > 0.0) {
        return Err(Error::InvalidArgument(format!("discount rate must be positive, got {alpha}")));
    }
    crate::model::check_column(model, player.other(), opp)?;
    let n = model.n_states();
    let m = model.n_actions(player);
    let zeros = vec![0.0; n];
    let mut policy: Vec<usize> = (0..n)
        .map(|i| argmin(&hamiltonian_values(model, player, i, &opp[i], &zeros, 1.0, 1.0)).1)
        .collect();
    const MAX_SWEEPS: usize = 1000;
    for sweep in 1..=MAX_SWEEPS {
        let own: Vec<MixedAction> = policy.iter().map(|&a| MixedAction::pure(m, a)).collect();
        let phi = linear_discounted_value(model, player, &own, opp, alpha)?;
        let mut changed = false;
        let mut residual = 0.0f64;
        let mut scale = 1.0f64;
        for i in 0..n {
            let values = hamiltonian_values(model, player, i, &opp[i], &phi, 1.0, 1.0);
            let (best, a) = argmin(&values);
            scale = scale.max(values.iter().fold(0.0f64, |x, v| x.max(v.abs())));
            residual = residual.max((alpha * phi[i] - best).abs());
            if values[policy[i]] - best > 1e-13 * (1.0 + best.abs()) {
                policy[i] = a;
                changed = true;
            }
        }
        if !changed {
            let scale = scale.max(alpha * phi.iter().fold(0.0f64, |x, v| x.max(v.abs())));
            if residual > 1e-12 * scale {
                return Err(Error::NonConvergence {
                    what: "risk-neutral discounted policy iteration",
                    iterations: sweep,
                    residual,
                });
            }
            return Ok(RiskNeutralSolution {
                phi,
                policy,
                iterations: sweep,
                residual,
            });
        }
    }
    Err(Error::NonConvergence {
        what: "risk-neutral discounted policy iteration",
        iterations: MAX_SWEEPS,
        residual: f64::NAN,
    })
}

/// Solves `(alpha I - Pi_{own, opp}) phi = r` for fixed columns.
pub(crate) fn linear_discounted_value(
    model: &GameModel,
    player: Player,
    own: &[MixedAction],
    opp: &[MixedAction],
    alpha: f64,
) -> Result<Vec<f64>> {
    let n = model.n_states();
    let (p1, p2) = order(player, own, opp);
    let mut a = DMatrix::<f64>::zeros(n, n);
    let mut b = DVector::<f64>::zeros(n);
    for i in 0..n {
        let mut exit = 0.0;
        for j in 0..n {
            if j != i {
                let r = mixed_rate(model, i, j, &p1[i], &p2[i]);
                a[(i, j)] = -r;
                exit += r;
            }
        }
        a[(i, i)] = alpha + exit;
        b[i] = mixed_cost(model, player, i, &p1[i], &p2[i]);
    }
    let x = a.lu().solve(&b).ok_or_else(|| Error::NonConvergence {
        what: "discounted linear solve",
        iterations: 0,
        residual: f64::NAN,
    })?;
    Ok(x.iter().copied().collect())
}

fn order<'a, T: ?Sized>(player: Player, own: &'a T, opp: &'a T) -> (&'a T, &'a T) {
    match player {
        Player::One => (own, opp),
        Player::Two => (opp, own),
    }
}

/// Right-hand side `H(theta, psi)` of the theta-ODE for one player.
///
/// Strategies are piecewise constant in theta. `eval` reads them at
/// `cell_theta`, which the integrator holds fixed on each piece between
/// consecutive `breakpoints`, so no RK4 stage ever sees a neighbouring cell.
pub(crate) trait Drift {
    fn eval(&self, theta: f64, cell_theta: f64, psi: &[f64], out: &mut [f64]);
    /// Policy switch points strictly inside `(from, to)`.
    fn breakpoints(&self, from: f64, to: f64) -> Vec<f64>;
    /// Seed `phi0` for the `theta -> 0` limit.
    fn seed(&self, theta_seed: f64) -> Result<Vec<f64>>;
}

/// Optimising drift: `min_u` over the player's own pure actions.
pub(crate) struct MinDrift<'a> {
    pub model: &'a GameModel,
    pub player: Player,
    pub opp: &'a Strategy,
    pub theta_max: f64,
    pub alpha: f64,
}

impl<'a> MinDrift<'a> {
    fn opp_at(&self, theta: f64) -> &'a [MixedAction] {
        self.opp.at_clock(theta / self.theta_max)
    }

    pub fn selectors(&self, theta: f64, psi: &[f64]) -> Vec<usize> {
        let opp = self.opp_at(theta);
        (0..psi.len())
            .map(|i| argmin(&hamiltonian_values(self.model, self.player, i, &opp[i], psi, theta, psi[i])).1)
            .collect()
    }
}

impl Drift for MinDrift<'_> {
    fn eval(&self, theta: f64, cell_theta: f64, psi: &[f64], out: &mut [f64]) {
        let opp = self.opp_at(cell_theta);
        for (i, o) in out.iter_mut().enumerate() {
            *o = argmin(&hamiltonian_values(self.model, self.player, i, &opp[i], psi, theta, psi[i])).0;
        }
    }

    fn breakpoints(&self, from: f64, to: f64) -> Vec<f64> {
        scaled_breakpoints(&[self.opp], self.theta_max, from, to)
    }

    fn seed(&self, theta_seed: f64) -> Result<Vec<f64>> {
        solve_risk_neutral_discounted(self.model, self.player, self.opp_at(theta_seed), self.alpha).map(|s| s.phi)
    }
}

/// Evaluation drift for fixed strategies of both players.
pub(crate) struct FixedDrift<'a> {
    pub model: &'a GameModel,
    pub player: Player,
    pub p1: &'a Strategy,
    pub p2: &'a Strategy,
    pub theta_max: f64,
    pub alpha: f64,
}

impl Drift for FixedDrift<'_> {
    fn eval(&self, theta: f64, cell_theta: f64, psi: &[f64], out: &mut [f64]) {
        let s = cell_theta / self.theta_max;
        let (c1, c2) = (self.p1.at_clock(s), self.p2.at_clock(s));
        for (i, o) in out.iter_mut().enumerate() {
            *o = hamiltonian_mixed(self.model, self.player, i, &c1[i], &c2[i], psi, theta, psi[i]);
        }
    }

    fn breakpoints(&self, from: f64, to: f64) -> Vec<f64> {
        scaled_breakpoints(&[self.p1, self.p2], self.theta_max, from, to)
    }

    fn seed(&self, theta_seed: f64) -> Result<Vec<f64>> {
        let s = theta_seed / self.theta_max;
        let (c1, c2) = (self.p1.at_clock(s), self.p2.at_clock(s));
        let (own, opp) = order(self.player, c1, c2);
        linear_discounted_value(self.model, self.player, own, opp, self.alpha)
    }
}

/// Switch points of the given strategies, mapped from clock fractions to the
/// integration variable `theta = s * theta_max`.
fn scaled_breakpoints(strategies: &[&Strategy], theta_max: f64, from: f64, to: f64) -> Vec<f64> {
    let mut out: Vec<f64> = strategies
        .iter()
        .flat_map(|s| s.breakpoints(from / theta_max, to / theta_max))
        .map(|c| c * theta_max)
        .filter(|&t| t > from * (1.0 + 1e-9) && t < to * (1.0 - 1e-9))
        .collect();
    out.sort_by(f64::total_cmp);
    out.dedup_by(|a, b| (*a - *b).abs() <= 1e-9 * b.abs());
    out
}

/// Fixed-step RK4 in `sigma = ln theta`.
pub(crate) struct Integrator {
    pub alpha: f64,
    /// Lipschitz bound of `H` in `psi` at `theta = 1`, split as `2M + theta ||r||`.
    pub rate_bound: f64,
    pub cost_bound: f64,
    pub step_control: f64,
}

impl Integrator {
    pub fn for_model(model: &GameModel, player: Player, alpha: f64, step_control: f64) -> Self {
        Integrator {
            alpha,
            rate_bound: 2.0 * model.rates().max_exit_rate(),
            cost_bound: model.cost(player).sup_norm(),
            step_control,
        }
    }

    fn substeps(&self, sigma_from: f64, sigma_to: f64) -> usize {
        let lip = (self.rate_bound + sigma_to.exp() * self.cost_bound) / self.alpha;
        let span = sigma_to - sigma_from;
        // theta = exp(sigma) itself varies on unit scale in sigma
        let rate = lip.max(1.0 / MAX_LOG_STEP);
        ((span * rate / self.step_control).ceil() as usize).max(1)
    }

    /// Advances `psi` from `theta_from` to `theta_to`.
    pub fn advance<D: Drift>(&self, drift: &D, psi: &mut [f64], theta_from: f64, theta_to: f64) {
        let mut from = theta_from;
        for to in drift.breakpoints(theta_from, theta_to).into_iter().chain([theta_to]) {
            self.advance_piece(drift, psi, from, to);
            from = to;
        }
    }

    fn advance_piece<D: Drift>(&self, drift: &D, psi: &mut [f64], theta_from: f64, theta_to: f64) {
        let cell = 0.5 * (theta_from + theta_to);
        let (s0, s1) = (theta_from.ln(), theta_to.ln());
        let m = self.substeps(s0, s1);
        let h = (s1 - s0) / m as f64;
        let n = psi.len();
        let (mut k1, mut k2, mut k3, mut k4, mut tmp) = (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
        let inv_alpha = 1.0 / self.alpha;
        for step in 0..m {
            let s = s0 + h * step as f64;
            let s_mid = s + 0.5 * h;
            let s_end = if step + 1 == m { s1 } else { s + h };
            drift.eval(s.exp(), cell, psi, &mut k1);
            for i in 0..n {
                tmp[i] = psi[i] + 0.5 * h * inv_alpha * k1[i];
            }
            drift.eval(s_mid.exp(), cell, &tmp, &mut k2);
            for i in 0..n {
                tmp[i] = psi[i] + 0.5 * h * inv_alpha * k2[i];
            }
            drift.eval(s_mid.exp(), cell, &tmp, &mut k3);
            for i in 0..n {
                tmp[i] = psi[i] + h * inv_alpha * k3[i];
            }
            drift.eval(s_end.exp(), cell, &tmp, &mut k4);
            for i in 0..n {
                psi[i] += h * inv_alpha * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) / 6.0;
            }
        }
    }

    /// `psi` at the first grid node, starting from the risk-neutral seed.
    pub fn seeded<D: Drift>(&self, drift: &D, first_node: f64, seed_fraction: f64) -> Result<(Vec<f64>, Vec<f64>)> {
        let theta_seed = first_node * seed_fraction;
        let phi0 = drift.seed(theta_seed)?;
        let mut psi: Vec<f64> = phi0.iter().map(|p| (theta_seed * p).exp()).collect();
        self.advance(drift, &mut psi, theta_seed, first_node);
        Ok((phi0, psi))
    }
}

fn check_envelope(theta: f64, psi: &[f64], upper_rate: f64, alpha: f64) -> Result<()> {
    let upper = (theta * upper_rate / alpha).exp();
    for (i, &v) in psi.iter().enumerate() {
        if !(v >= 1.0 - ENVELOPE_TOL && v <= upper + ENVELOPE_TOL) {
            return Err(Error::EnvelopeViolation {
                theta,
                state: i,
                value: v,
                upper,
            });
        }
    }
    Ok(())
}

fn validate_common(model: &GameModel, alpha: f64, theta_max: f64, grid: &GridSpec) -> Result<()> {
    grid.validate()?;
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidArgument(format!("discount rate must be positive, got {alpha}")));
    }
    if !(theta_max > 0.0 && theta_max.is_finite()) {
        return Err(Error::InvalidArgument(format!("theta_max must be positive, got {theta_max}")));
    }
    let _ = model;
    Ok(())
}

/// Solves the optimising equation against `opp` on `[0, theta_max]`,
/// recording the minimising pure action at every node.
///
/// A theta-indexed opponent is read on the shared clock: at ODE level
/// `theta` its policy is evaluated at `(theta / theta_max) * opp.theta_max()`.
pub fn solve_discounted_hjb(
    model: &GameModel,
    player: Player,
    opp: &Strategy,
    alpha: f64,
    theta_max: f64,
    grid: &GridSpec,
) -> Result<ValueCurve> {
    validate_common(model, alpha, theta_max, grid)?;
    opp.check_dims(model, player.other())?;
    let drift = MinDrift {
        model,
        player,
        opp,
        theta_max,
        alpha,
    };
    let integrator = Integrator::for_model(model, player, alpha, grid.step_control);
    let nodes = grid.nodes(theta_max);
    let (phi0, mut psi) = integrator.seeded(&drift, nodes[1], grid.seed_fraction)?;

    let n = model.n_states();
    let mut values = Vec::with_capacity(nodes.len());
    let mut selectors = Vec::with_capacity(nodes.len());
    values.push(vec![1.0; n]);
    selectors.push(
        solve_risk_neutral_discounted(model, player, drift.opp_at(0.0), alpha)?.policy,
    );
    let sup = model.cost(player).sup_norm();
    for k in 1..nodes.len() {
        if k > 1 {
            integrator.advance(&drift, &mut psi, nodes[k - 1], nodes[k]);
        }
        check_envelope(nodes[k], &psi, sup, alpha)?;
        selectors.push(drift.selectors(nodes[k], &psi));
        values.push(psi.clone());
    }
    Ok(ValueCurve {
        player,
        alpha,
        theta: nodes,
        psi: values,
        selectors: Some(selectors),
        phi0,
    })
}

/// Value `J_k` of fixed strategies `(p1, p2)` for `player` on `[0, theta]`.
pub fn evaluate_discounted_profile(
    model: &GameModel,
    p1: &Strategy,
    p2: &Strategy,
    alpha: f64,
    theta: f64,
    player: Player,
    grid: &GridSpec,
) -> Result<ValueCurve> {
    validate_common(model, alpha, theta, grid)?;
    p1.check_dims(model, Player::One)?;
    p2.check_dims(model, Player::Two)?;
    let drift = FixedDrift {
        model,
        player,
        p1,
        p2,
        theta_max: theta,
        alpha,
    };
    let integrator = Integrator::for_model(model, player, alpha, grid.step_control);
    let nodes = grid.nodes(theta);
    let (phi0, mut psi) = integrator.seeded(&drift, nodes[1], grid.seed_fraction)?;
    let n = model.n_states();
    let mut values = Vec::with_capacity(nodes.len());
    values.push(vec![1.0; n]);
    let sup = model.cost(player).sup_norm();
    for k in 1..nodes.len() {
        if k > 1 {
            integrator.advance(&drift, &mut psi, nodes[k - 1], nodes[k]);
        }
        check_envelope(nodes[k], &psi, sup, alpha)?;
        values.push(psi.clone());
    }
    Ok(ValueCurve {
        player,
        alpha,
        theta: nodes,
        psi: values,
        selectors: None,
        phi0,
    })
}

/// Central-difference residual of the optimising equation at interior nodes,
/// `|alpha theta (psi(k+1) - psi(k-1)) / (2h) - min-Hamiltonian| / (1 + ||psi||)`,
/// maximised over states. Entry `k - 1` belongs to node `k`.
pub fn grid_residuals(model: &GameModel, curve: &ValueCurve, opp: &Strategy) -> Vec<f64> {
    let drift = MinDrift {
        model,
        player: curve.player,
        opp,
        theta_max: curve.theta_max(),
        alpha: curve.alpha,
    };
    let norm = 1.0 + curve.sup_norm();
    let n = curve.n_states();
    let mut h = vec![0.0; n];
    (1..curve.n_nodes() - 1)
        .map(|k| {
            let theta = curve.theta[k];
            drift.eval(theta, theta, &curve.psi[k], &mut h);
            let dt = curve.theta[k + 1] - curve.theta[k - 1];
            (0..n)
                .map(|i| {
                    let d = (curve.psi[k + 1][i] - curve.psi[k - 1][i]) / dt;
                    (curve.alpha * theta * d - h[i]).abs() / norm
                })
                .fold(0.0, f64::max)
        })
        .collect()
}
