use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{GameModel, Player};

/// Probability weights over one player's action list.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct MixedAction(Vec<f64>);

const SIMPLEX_TOL: f64 = 1e-12;

impl MixedAction {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidArgument("mixed action needs at least one weight".into()));
        }
        if weights.iter().any(|w| !(*w >= 0.0) || !w.is_finite()) {
            return Err(Error::InvalidArgument(format!("mixed action has a negative or non-finite weight: {weights:?}")));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > SIMPLEX_TOL * weights.len() as f64 {
            return Err(Error::InvalidArgument(format!("mixed action weights sum to {sum}, not 1")));
        }
        Ok(MixedAction(weights))
    }

    /// Dirac mass on `action`.
    pub fn pure(n_actions: usize, action: usize) -> Self {
        let mut w = vec![0.0; n_actions];
        w[action] = 1.0;
        MixedAction(w)
    }

    pub fn uniform(n_actions: usize) -> Self {
        MixedAction(vec![1.0 / n_actions as f64; n_actions])
    }

    pub fn weights(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `(1 - lambda) * self + lambda * other`, renormalised.
    pub fn mix(&self, other: &MixedAction, lambda: f64) -> MixedAction {
        let mut w: Vec<f64> = self
            .0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| ((1.0 - lambda) * a + lambda * b).max(0.0))
            .collect();
        let s: f64 = w.iter().sum();
        w.iter_mut().for_each(|x| *x /= s);
        MixedAction(w)
    }

    /// The pure action carrying the most weight (lowest index on ties).
    pub fn dominant(&self) -> usize {
        let mut best = 0;
        for (a, &w) in self.0.iter().enumerate() {
            if w > self.0[best] {
                best = a;
            }
        }
        best
    }

    pub fn sup_distance(&self, other: &MixedAction) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

impl TryFrom<Vec<f64>> for MixedAction {
    type Error = Error;
    fn try_from(w: Vec<f64>) -> Result<Self> {
        MixedAction::new(w)
    }
}

impl From<MixedAction> for Vec<f64> {
    fn from(m: MixedAction) -> Vec<f64> {
        m.0
    }
}

/// One mixed action per state for each player.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StationaryProfile {
    pub p1: Vec<MixedAction>,
    pub p2: Vec<MixedAction>,
}

impl StationaryProfile {
    pub fn new(p1: Vec<MixedAction>, p2: Vec<MixedAction>) -> Self {
        StationaryProfile { p1, p2 }
    }

    pub fn uniform(model: &GameModel) -> Self {
        let n = model.n_states();
        StationaryProfile {
            p1: vec![MixedAction::uniform(model.n_actions(Player::One)); n],
            p2: vec![MixedAction::uniform(model.n_actions(Player::Two)); n],
        }
    }

    /// Pure profile from per-state action indices.
    pub fn pure(model: &GameModel, a1: &[usize], a2: &[usize]) -> Self {
        let (m1, m2) = (model.n_actions(Player::One), model.n_actions(Player::Two));
        StationaryProfile {
            p1: a1.iter().map(|&a| MixedAction::pure(m1, a)).collect(),
            p2: a2.iter().map(|&a| MixedAction::pure(m2, a)).collect(),
        }
    }

    pub fn from_columns(player: Player, own: Vec<MixedAction>, opp: Vec<MixedAction>) -> Self {
        match player {
            Player::One => StationaryProfile { p1: own, p2: opp },
            Player::Two => StationaryProfile { p1: opp, p2: own },
        }
    }

    pub fn column(&self, player: Player) -> &[MixedAction] {
        match player {
            Player::One => &self.p1,
            Player::Two => &self.p2,
        }
    }

    pub fn column_mut(&mut self, player: Player) -> &mut Vec<MixedAction> {
        match player {
            Player::One => &mut self.p1,
            Player::Two => &mut self.p2,
        }
    }

    pub fn check_dims(&self, model: &GameModel) -> Result<()> {
        for p in Player::BOTH {
            check_column(model, p, self.column(p))?;
        }
        Ok(())
    }

    pub fn sup_distance(&self, other: &StationaryProfile) -> f64 {
        Player::BOTH
            .iter()
            .flat_map(|&p| self.column(p).iter().zip(other.column(p)).map(|(a, b)| a.sup_distance(b)))
            .fold(0.0, f64::max)
    }
}

pub(crate) fn check_column(model: &GameModel, player: Player, col: &[MixedAction]) -> Result<()> {
    if col.len() != model.n_states() {
        return Err(Error::DimensionMismatch {
            what: "strategy column (states)",
            expected: model.n_states(),
            got: col.len(),
        });
    }
    let m = model.n_actions(player);
    if let Some(bad) = col.iter().find(|v| v.len() != m) {
        return Err(Error::DimensionMismatch {
            what: "mixed action (actions)",
            expected: m,
            got: bad.len(),
        });
    }
    Ok(())
}

/// A theta-indexed family of stationary strategies on a grid of nodes in
/// `(0, theta_max]`. Between nodes the cell of the left node applies; below
/// the first node the first cell applies.
///
/// When used as a Markov strategy with risk level `theta` and discount
/// `alpha`, the action at time `t` is read at `theta * exp(-alpha t)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EventuallyStationaryPolicy {
    grid: Vec<f64>,
    cells: Vec<Vec<MixedAction>>,
}

impl EventuallyStationaryPolicy {
    pub fn new(grid: Vec<f64>, cells: Vec<Vec<MixedAction>>) -> Result<Self> {
        if grid.is_empty() || grid.len() != cells.len() {
            return Err(Error::DimensionMismatch {
                what: "policy cells per grid node",
                expected: grid.len(),
                got: cells.len(),
            });
        }
        if !(grid[0] > 0.0) || grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidArgument("policy grid must be strictly increasing in (0, theta_max]".into()));
        }
        let n = cells[0].len();
        if cells.iter().any(|c| c.len() != n) {
            return Err(Error::InvalidArgument("policy cells must all cover the same states".into()));
        }
        Ok(EventuallyStationaryPolicy { grid, cells })
    }

    /// Same column at every node.
    pub fn constant(grid: Vec<f64>, column: Vec<MixedAction>) -> Result<Self> {
        let cells = vec![column; grid.len()];
        Self::new(grid, cells)
    }

    /// Uniform grid `theta_max * k / intervals`, `k = 1..=intervals`.
    pub fn uniform_grid(theta_max: f64, intervals: usize) -> Vec<f64> {
        (1..=intervals).map(|k| theta_max * k as f64 / intervals as f64).collect()
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn cells(&self) -> &[Vec<MixedAction>] {
        &self.cells
    }

    pub fn cells_mut(&mut self) -> &mut [Vec<MixedAction>] {
        &mut self.cells
    }

    pub fn theta_max(&self) -> f64 {
        *self.grid.last().expect("grid is nonempty")
    }

    /// Cell index that applies at risk level `theta` (left-node rule).
    pub fn cell_index(&self, theta: f64) -> usize {
        let probe = theta * (1.0 + 1e-9) + 1e-300;
        match self.grid.partition_point(|&g| g <= probe) {
            0 => 0,
            k => k - 1,
        }
    }

    pub fn at(&self, theta: f64) -> &[MixedAction] {
        &self.cells[self.cell_index(theta)]
    }

    pub fn check_dims(&self, model: &GameModel, player: Player) -> Result<()> {
        self.cells.iter().try_for_each(|c| check_column(model, player, c))
    }

    pub fn sup_distance(&self, other: &EventuallyStationaryPolicy) -> f64 {
        self.cells
            .iter()
            .zip(&other.cells)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| x.sup_distance(y)))
            .fold(0.0, f64::max)
    }

    pub fn mix(&self, other: &EventuallyStationaryPolicy, lambda: f64) -> EventuallyStationaryPolicy {
        EventuallyStationaryPolicy {
            grid: self.grid.clone(),
            cells: self
                .cells
                .iter()
                .zip(&other.cells)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x.mix(y, lambda)).collect())
                .collect(),
        }
    }
}

/// A player's strategy: stationary, or theta-indexed (eventually stationary).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Strategy {
    Stationary { column: Vec<MixedAction> },
    EventuallyStationary { policy: EventuallyStationaryPolicy },
}

impl Strategy {
    pub fn stationary(column: Vec<MixedAction>) -> Self {
        Strategy::Stationary { column }
    }

    pub fn indexed(policy: EventuallyStationaryPolicy) -> Self {
        Strategy::EventuallyStationary { policy }
    }

    /// Column in force at clock fraction `s = exp(-alpha t)` in `(0, 1]`.
    /// Indexed policies are read at `s * theta_max` so that both players'
    /// policies stay synchronised in time whatever their risk levels.
    pub fn at_clock(&self, s: f64) -> &[MixedAction] {
        match self {
            Strategy::Stationary { column } => column,
            Strategy::EventuallyStationary { policy } => policy.at(s * policy.theta_max()),
        }
    }

    pub fn check_dims(&self, model: &GameModel, player: Player) -> Result<()> {
        match self {
            Strategy::Stationary { column } => check_column(model, player, column),
            Strategy::EventuallyStationary { policy } => policy.check_dims(model, player),
        }
    }

    /// Clock fractions in `(s_from, s_to)` where the column in force changes.
    pub fn breakpoints(&self, s_from: f64, s_to: f64) -> Vec<f64> {
        match self {
            Strategy::Stationary { .. } => Vec::new(),
            Strategy::EventuallyStationary { policy } => {
                let top = policy.theta_max();
                policy.grid().iter().map(|g| g / top).filter(|&c| c > s_from && c < s_to).collect()
            }
        }
    }

    pub fn is_stationary(&self) -> bool {
        matches!(self, Strategy::Stationary { .. })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_action_rejects_bad_weights() {
        assert!(MixedAction::new(vec![0.5, 0.6]).is_err());
        assert!(MixedAction::new(vec![-0.1, 1.1]).is_err());
        assert!(MixedAction::new(vec![]).is_err());
        assert!(MixedAction::new(vec![0.25, 0.75]).is_ok());
    }

    #[test]
    fn left_node_rule() {
        let grid = vec![0.25, 0.5, 0.75, 1.0];
        let cells = (0..4).map(|k| vec![MixedAction::pure(4, k)]).collect();
        let p = EventuallyStationaryPolicy::new(grid, cells).unwrap();
        assert_eq!(p.cell_index(0.01), 0);
        assert_eq!(p.cell_index(0.25), 0);
        assert_eq!(p.cell_index(0.49), 0);
        assert_eq!(p.cell_index(0.5), 1);
        // rounding just below a node still lands on it
        assert_eq!(p.cell_index(0.75 * (1.0 - 1e-14)), 2);
        assert_eq!(p.cell_index(1.0), 3);
        assert_eq!(p.cell_index(7.0), 3);
    }

    #[test]
    fn clock_alignment_across_grids() {
        let g1 = EventuallyStationaryPolicy::uniform_grid(0.3, 8);
        let cells: Vec<_> = (0..8).map(|k| vec![MixedAction::pure(8, k)]).collect();
        let p = Strategy::indexed(EventuallyStationaryPolicy::new(g1, cells).unwrap());
        for k in 1..=8 {
            // node k of a grid ending at 0.7 maps to node k of this grid
            let theta_other = 0.7 * k as f64 / 8.0;
            let s = theta_other / 0.7;
            assert_eq!(p.at_clock(s)[0].dominant(), k - 1);
        }
    }

    #[test]
    fn policy_grid_must_increase() {
        let c = vec![vec![MixedAction::pure(1, 0)]; 2];
        assert!(EventuallyStationaryPolicy::new(vec![0.5, 0.5], c.clone()).is_err());
        assert!(EventuallyStationaryPolicy::new(vec![0.0, 0.5], c).is_err());
    }
}
