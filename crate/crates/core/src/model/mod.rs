//! Game model data types: the controlled rate kernel, per-player running
//! costs, strategies, risk parameters and Lyapunov certificates.
//!
//! States are `0..n_states`. Rates are events per unit time and costs are
//! cost units per unit time. Every table is dense and indexed by pure action
//! pairs `(u1, u2)`; mixed actions enter through the bilinear extension
//! `sum_{u1,u2} v1(u1) v2(u2) * entry`.

mod checks;
mod file;
mod strategy;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::ModelError;

pub use checks::{
    check_arat, check_lyapunov, check_small_cost, AratReport, LyapunovReport, SmallCostReport,
};
pub use file::{load_model, load_model_with_tol, model_to_json, ModelFile};
pub use strategy::{EventuallyStationaryPolicy, MixedAction, StationaryProfile, Strategy};
pub(crate) use strategy::check_column;

/// Tolerance for exact linear identities (row sums, ARAT reassembly).
pub const IDENTITY_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Player {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "2")]
    Two,
}

impl Player {
    pub const BOTH: [Player; 2] = [Player::One, Player::Two];

    pub fn index(self) -> usize {
        match self {
            Player::One => 0,
            Player::Two => 1,
        }
    }

    pub fn other(self) -> Player {
        match self {
            Player::One => Player::Two,
            Player::Two => Player::One,
        }
    }

    pub fn from_number(k: u8) -> Option<Player> {
        match k {
            1 => Some(Player::One),
            2 => Some(Player::Two),
            _ => None,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index() + 1)
    }
}

/// Controlled rate table `pi(i, j, u1, u2)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RatesKernel {
    n: usize,
    m1: usize,
    m2: usize,
    data: Vec<f64>,
    max_exit_rate: f64,
}

impl RatesKernel {
    /// Builds a kernel from a flat table laid out as `[i][j][u1][u2]`,
    /// checking (A1): nonnegative off-diagonals and conservative rows.
    pub fn new(n: usize, m1: usize, m2: usize, data: Vec<f64>, tol: f64) -> Result<Self, ModelError> {
        if data.len() != n * n * m1 * m2 {
            return Err(ModelError::Shape {
                field: "rates",
                expected: n * n * m1 * m2,
                found: data.len(),
                location: "flat table".into(),
            });
        }
        let kernel = RatesKernel {
            n,
            m1,
            m2,
            data,
            max_exit_rate: 0.0,
        };
        let mut max_exit = 0.0f64;
        for i in 0..n {
            for u1 in 0..m1 {
                for u2 in 0..m2 {
                    let mut sum = 0.0;
                    let mut scale = 0.0f64;
                    for j in 0..n {
                        let v = kernel.get(i, j, u1, u2);
                        if !v.is_finite() {
                            return Err(ModelError::NonFinite {
                                field: "rates",
                                location: format!("(i={i}, j={j}, u1={u1}, u2={u2})"),
                            });
                        }
                        if i != j && v < 0.0 {
                            return Err(ModelError::NegativeRate { i, j, u1, u2, value: v });
                        }
                        sum += v;
                        scale = scale.max(v.abs());
                    }
                    if sum.abs() > tol * scale.max(1.0) {
                        return Err(ModelError::NonConservativeRow { i, u1, u2, sum });
                    }
                    max_exit = max_exit.max(-kernel.get(i, i, u1, u2));
                }
            }
        }
        Ok(RatesKernel {
            max_exit_rate: max_exit,
            ..kernel
        })
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, u1: usize, u2: usize) -> f64 {
        self.data[((i * self.n + j) * self.m1 + u1) * self.m2 + u2]
    }

    pub fn n_states(&self) -> usize {
        self.n
    }

    /// `M = sup_{i,u} -pi(i, i, u)`.
    pub fn max_exit_rate(&self) -> f64 {
        self.max_exit_rate
    }
}

/// Running cost `r(i, u1, u2) >= 0` of one player, with its cached sup-norm.
#[derive(Clone, Debug, PartialEq)]
pub struct CostKernel {
    n: usize,
    m1: usize,
    m2: usize,
    data: Vec<f64>,
    sup: f64,
}

impl CostKernel {
    pub fn new(player: Player, n: usize, m1: usize, m2: usize, data: Vec<f64>) -> Result<Self, ModelError> {
        if data.len() != n * m1 * m2 {
            return Err(ModelError::Shape {
                field: "costs",
                expected: n * m1 * m2,
                found: data.len(),
                location: format!("player {player} flat table"),
            });
        }
        let mut sup = 0.0f64;
        for (idx, &v) in data.iter().enumerate() {
            let (i, u1, u2) = (idx / (m1 * m2), (idx / m2) % m1, idx % m2);
            if !v.is_finite() {
                return Err(ModelError::NonFinite {
                    field: "costs",
                    location: format!("player {player} (i={i}, u1={u1}, u2={u2})"),
                });
            }
            if v < 0.0 {
                return Err(ModelError::NegativeCost { player, i, u1, u2, value: v });
            }
            sup = sup.max(v);
        }
        Ok(CostKernel { n, m1, m2, data, sup })
    }

    #[inline]
    pub fn get(&self, i: usize, u1: usize, u2: usize) -> f64 {
        self.data[(i * self.m1 + u1) * self.m2 + u2]
    }

    /// `||r||_inf`.
    pub fn sup_norm(&self) -> f64 {
        self.sup
    }

    pub fn n_states(&self) -> usize {
        self.n
    }
}

/// Additive decomposition `pi = pi1(u1) + pi2(u2)`, `r_k = r_k1(u1) + r_k2(u2)`.
///
/// `rates1` is `[i][j][u1]`, `rates2` is `[i][j][u2]`; `costs_by_p1[k]` is
/// player k's cost component `[i][u1]` and `costs_by_p2[k]` is `[i][u2]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AratDecomposition {
    pub rates1: Vec<Vec<Vec<f64>>>,
    pub rates2: Vec<Vec<Vec<f64>>>,
    pub costs_by_p1: [Vec<Vec<f64>>; 2],
    pub costs_by_p2: [Vec<Vec<f64>>; 2],
}

impl AratDecomposition {
    /// Largest entrywise mismatch between the reassembled kernels and the model.
    pub fn reassembly_error(&self, rates: &RatesKernel, costs: &[CostKernel; 2]) -> (f64, String) {
        let mut worst = (0.0f64, String::new());
        let (n, m1, m2) = (rates.n, rates.m1, rates.m2);
        let mut note = |err: f64, loc: &dyn Fn() -> String| {
            if err > worst.0 || err.is_nan() {
                worst = (err, loc());
            }
        };
        for i in 0..n {
            for u1 in 0..m1 {
                for u2 in 0..m2 {
                    for j in 0..n {
                        let e = (self.rates1[i][j][u1] + self.rates2[i][j][u2] - rates.get(i, j, u1, u2)).abs();
                        note(e, &|| format!("rates (i={i}, j={j}, u1={u1}, u2={u2})"));
                    }
                    for k in 0..2 {
                        let e = (self.costs_by_p1[k][i][u1] + self.costs_by_p2[k][i][u2] - costs[k].get(i, u1, u2)).abs();
                        note(e, &|| format!("costs p{} (i={i}, u1={u1}, u2={u2})", k + 1));
                    }
                }
            }
        }
        worst
    }

    fn truncated(&self, keep: usize) -> Self {
        let mut out = self.clone();
        for k in 0..2 {
            for i in keep..out.costs_by_p1[k].len() {
                out.costs_by_p1[k][i].iter_mut().for_each(|c| *c = 0.0);
                out.costs_by_p2[k][i].iter_mut().for_each(|c| *c = 0.0);
            }
        }
        out
    }
}

/// A validated two-player game on a finite state space.
#[derive(Clone, Debug, PartialEq)]
pub struct GameModel {
    actions: [Vec<String>; 2],
    rates: RatesKernel,
    costs: [CostKernel; 2],
    arat: Option<AratDecomposition>,
}

impl GameModel {
    pub fn new(
        actions: [Vec<String>; 2],
        rates: RatesKernel,
        costs: [CostKernel; 2],
        arat: Option<AratDecomposition>,
        tol: f64,
    ) -> Result<Self, ModelError> {
        if rates.n == 0 {
            return Err(ModelError::NoStates);
        }
        for p in Player::BOTH {
            if actions[p.index()].is_empty() {
                return Err(ModelError::NoActions { player: p });
            }
        }
        let (n, m1, m2) = (rates.n, actions[0].len(), actions[1].len());
        if rates.m1 != m1 || rates.m2 != m2 {
            return Err(ModelError::Shape {
                field: "rates",
                expected: m1 * m2,
                found: rates.m1 * rates.m2,
                location: "action dimensions".into(),
            });
        }
        for c in &costs {
            if c.n != n || c.m1 != m1 || c.m2 != m2 {
                return Err(ModelError::Shape {
                    field: "costs",
                    expected: n * m1 * m2,
                    found: c.n * c.m1 * c.m2,
                    location: "table dimensions".into(),
                });
            }
        }
        if let Some(a) = &arat {
            let (err, location) = a.reassembly_error(&rates, &costs);
            if !(err <= tol) {
                return Err(ModelError::AratMismatch {
                    field: "arat",
                    location,
                    mismatch: err,
                });
            }
        }
        Ok(GameModel {
            actions,
            rates,
            costs,
            arat,
        })
    }

    /// Convenience constructor from closures, used heavily in tests and
    /// examples. Rates on the diagonal are filled in to make rows conservative.
    pub fn from_fn(
        n: usize,
        m1: usize,
        m2: usize,
        off_diag_rate: impl Fn(usize, usize, usize, usize) -> f64,
        cost: impl Fn(Player, usize, usize, usize) -> f64,
    ) -> Result<Self, ModelError> {
        let mut rates = vec![0.0; n * n * m1 * m2];
        for i in 0..n {
            for u1 in 0..m1 {
                for u2 in 0..m2 {
                    let mut exit = 0.0;
                    for j in 0..n {
                        if j != i {
                            let r = off_diag_rate(i, j, u1, u2);
                            rates[((i * n + j) * m1 + u1) * m2 + u2] = r;
                            exit += r;
                        }
                    }
                    rates[((i * n + i) * m1 + u1) * m2 + u2] = -exit;
                }
            }
        }
        let costs = Player::BOTH.map(|p| {
            let mut c = Vec::with_capacity(n * m1 * m2);
            for i in 0..n {
                for u1 in 0..m1 {
                    for u2 in 0..m2 {
                        c.push(cost(p, i, u1, u2));
                    }
                }
            }
            c
        });
        let [c1, c2] = costs;
        let actions = [
            (0..m1).map(|a| format!("a{a}")).collect(),
            (0..m2).map(|a| format!("b{a}")).collect(),
        ];
        GameModel::new(
            actions,
            RatesKernel::new(n, m1, m2, rates, IDENTITY_TOL)?,
            [
                CostKernel::new(Player::One, n, m1, m2, c1)?,
                CostKernel::new(Player::Two, n, m1, m2, c2)?,
            ],
            None,
            IDENTITY_TOL,
        )
    }

    pub fn n_states(&self) -> usize {
        self.rates.n
    }

    pub fn n_actions(&self, player: Player) -> usize {
        self.actions[player.index()].len()
    }

    pub fn action_labels(&self, player: Player) -> &[String] {
        &self.actions[player.index()]
    }

    pub fn rates(&self) -> &RatesKernel {
        &self.rates
    }

    pub fn cost(&self, player: Player) -> &CostKernel {
        &self.costs[player.index()]
    }

    pub fn arat(&self) -> Option<&AratDecomposition> {
        self.arat.as_ref()
    }

    /// Rate for a pure action pair where `own` belongs to `player`.
    #[inline]
    pub fn rate_for(&self, player: Player, i: usize, j: usize, own: usize, opp: usize) -> f64 {
        match player {
            Player::One => self.rates.get(i, j, own, opp),
            Player::Two => self.rates.get(i, j, opp, own),
        }
    }

    /// Cost of `cost_player` for a pure pair expressed from `player`'s side.
    #[inline]
    pub fn cost_for(&self, cost_player: Player, player: Player, i: usize, own: usize, opp: usize) -> f64 {
        let c = &self.costs[cost_player.index()];
        match player {
            Player::One => c.get(i, own, opp),
            Player::Two => c.get(i, opp, own),
        }
    }

    /// Copy with the player cost tables replaced (rates untouched).
    pub(crate) fn with_costs(&self, costs: [CostKernel; 2], keep_arat_states: Option<usize>) -> Self {
        GameModel {
            actions: self.actions.clone(),
            rates: self.rates.clone(),
            costs,
            arat: match (&self.arat, keep_arat_states) {
                (Some(a), Some(keep)) => Some(a.truncated(keep)),
                _ => None,
            },
        }
    }

    pub fn costs(&self) -> &[CostKernel; 2] {
        &self.costs
    }

    pub(crate) fn dims(&self) -> (usize, usize, usize) {
        (self.rates.n, self.actions[0].len(), self.actions[1].len())
    }
}

/// Risk aversion levels, their upper bound and the discount rate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RiskParams {
    pub theta1: f64,
    pub theta2: f64,
    pub theta_bound: f64,
    pub alpha: f64,
}

impl RiskParams {
    pub fn new(theta1: f64, theta2: f64, theta_bound: f64, alpha: f64) -> Result<Self, crate::Error> {
        let ok = |t: f64| t > 0.0 && t < theta_bound && t.is_finite();
        if !ok(theta1) || !ok(theta2) {
            return Err(crate::Error::InvalidArgument(format!(
                "risk parameters must satisfy 0 < theta < {theta_bound}: got ({theta1}, {theta2})"
            )));
        }
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(crate::Error::InvalidArgument(format!("discount rate must be positive, got {alpha}")));
        }
        Ok(RiskParams {
            theta1,
            theta2,
            theta_bound,
            alpha,
        })
    }

    pub fn theta(&self, player: Player) -> f64 {
        match player {
            Player::One => self.theta1,
            Player::Two => self.theta2,
        }
    }
}

/// Lyapunov certificate `(W, b, delta, C, i0)` for the drift condition
/// `Pi_v W(i) <= -2 delta W(i) + b 1_C(i)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LyapunovCertificate {
    #[serde(rename = "W")]
    pub w: Vec<f64>,
    pub b: f64,
    pub delta: f64,
    #[serde(rename = "C")]
    pub c: Vec<usize>,
    pub i0: usize,
}

impl LyapunovCertificate {
    /// Structural checks: `W >= 1`, `b, delta > 0`, indices in range and the
    /// reference-state condition `W(i0) >= 1 + b/delta`.
    pub fn validate(&self, n_states: usize) -> Result<(), ModelError> {
        if self.w.len() != n_states {
            return Err(ModelError::Shape {
                field: "lyapunov.W",
                expected: n_states,
                found: self.w.len(),
                location: "certificate".into(),
            });
        }
        if let Some((i, w)) = self.w.iter().enumerate().find(|(_, w)| !(**w >= 1.0) || !w.is_finite()) {
            return Err(ModelError::Certificate(format!("W({i}) = {w} must be finite and >= 1")));
        }
        if !(self.b > 0.0 && self.delta > 0.0) {
            return Err(ModelError::Certificate(format!(
                "b and delta must be positive (b={}, delta={})",
                self.b, self.delta
            )));
        }
        if let Some(c) = self.c.iter().find(|&&c| c >= n_states) {
            return Err(ModelError::Certificate(format!("C contains out-of-range state {c}")));
        }
        if self.i0 >= n_states {
            return Err(ModelError::Certificate(format!("reference state {} out of range", self.i0)));
        }
        if self.w[self.i0] < self.reference_level() {
            return Err(ModelError::Certificate(format!(
                "reference state {} has W = {} < 1 + b/delta = {}",
                self.i0,
                self.w[self.i0],
                self.reference_level()
            )));
        }
        Ok(())
    }

    /// `1 + b/delta`.
    pub fn reference_level(&self) -> f64 {
        1.0 + self.b / self.delta
    }

    /// `C0 = {j : W(j) >= 1 + b/delta}`.
    pub fn c0(&self) -> Vec<usize> {
        let level = self.reference_level();
        (0..self.w.len()).filter(|&j| self.w[j] >= level).collect()
    }

    pub fn in_c(&self, i: usize) -> bool {
        self.c.contains(&i)
    }
}
