//! Controlled generator matrices and Hamiltonian minimisation.

use crate::error::{Error, Result};
use crate::model::{GameModel, MixedAction, Player, StationaryProfile};

/// Dense `n x n` rate matrix of the chain under a fixed mixed profile.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorMatrix {
    n: usize,
    data: Vec<f64>,
}

impl GeneratorMatrix {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                what: "generator row",
                expected: n,
                got: r.len(),
            });
        }
        Ok(GeneratorMatrix {
            n,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    /// Total exit rate `-G(i, i)`.
    pub fn exit_rate(&self, i: usize) -> f64 {
        -self.get(i, i)
    }

    pub fn apply(&self, f: &[f64]) -> Result<Vec<f64>> {
        apply_generator(self, f)
    }

    /// Whether every state reaches every other along positive rates.
    pub fn irreducible(&self) -> std::result::Result<(), (usize, usize)> {
        let n = self.n;
        let reach = |forward: bool| -> Vec<bool> {
            let mut seen = vec![false; n];
            let mut stack = vec![0usize];
            seen[0] = true;
            while let Some(i) = stack.pop() {
                for j in 0..n {
                    let rate = if forward { self.get(i, j) } else { self.get(j, i) };
                    if j != i && rate > 0.0 && !seen[j] {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
            seen
        };
        if let Some(j) = reach(true).iter().position(|s| !s) {
            return Err((0, j));
        }
        if let Some(j) = reach(false).iter().position(|s| !s) {
            return Err((j, 0));
        }
        Ok(())
    }
}

/// `Pi_{v1, v2}(i, j)`: the bilinear mixture of the rate table.
#[inline]
pub fn mixed_rate(model: &GameModel, i: usize, j: usize, v1: &MixedAction, v2: &MixedAction) -> f64 {
    let mut acc = 0.0;
    for (u1, &w1) in v1.weights().iter().enumerate() {
        if w1 == 0.0 {
            continue;
        }
        for (u2, &w2) in v2.weights().iter().enumerate() {
            if w2 != 0.0 {
                acc += w1 * w2 * model.rates().get(i, j, u1, u2);
            }
        }
    }
    acc
}

/// `r_k(i, v1, v2)`.
#[inline]
pub fn mixed_cost(model: &GameModel, player: Player, i: usize, v1: &MixedAction, v2: &MixedAction) -> f64 {
    let c = model.cost(player);
    let mut acc = 0.0;
    for (u1, &w1) in v1.weights().iter().enumerate() {
        if w1 == 0.0 {
            continue;
        }
        for (u2, &w2) in v2.weights().iter().enumerate() {
            if w2 != 0.0 {
                acc += w1 * w2 * c.get(i, u1, u2);
            }
        }
    }
    acc
}

pub fn rate_matrix(model: &GameModel, profile: &StationaryProfile) -> Result<GeneratorMatrix> {
    profile.check_dims(model)?;
    Ok(rate_matrix_from_columns(model, &profile.p1, &profile.p2))
}

pub(crate) fn rate_matrix_from_columns(model: &GameModel, p1: &[MixedAction], p2: &[MixedAction]) -> GeneratorMatrix {
    let n = model.n_states();
    let mut data = vec![0.0; n * n];
    for i in 0..n {
        let mut off = 0.0;
        for j in 0..n {
            if j != i {
                let r = mixed_rate(model, i, j, &p1[i], &p2[i]);
                data[i * n + j] = r;
                off += r;
            }
        }
        // conservative by construction
        data[i * n + i] = -off;
    }
    GeneratorMatrix { n, data }
}

/// Per-state running cost of `player` under a pair of columns.
pub(crate) fn cost_vector(model: &GameModel, player: Player, p1: &[MixedAction], p2: &[MixedAction]) -> Vec<f64> {
    (0..model.n_states()).map(|i| mixed_cost(model, player, i, &p1[i], &p2[i])).collect()
}

pub fn apply_generator(g: &GeneratorMatrix, f: &[f64]) -> Result<Vec<f64>> {
    if f.len() != g.n {
        return Err(Error::DimensionMismatch {
            what: "vector length",
            expected: g.n,
            got: f.len(),
        });
    }
    Ok((0..g.n).map(|i| g.row(i).iter().zip(f).map(|(a, b)| a * b).sum()).collect())
}

/// Objective `Pi_{u, opp} f(i) + theta * r_player(i, u, opp) * weight` for
/// every pure action `u` of `player`. The drift is summed as
/// `sum_{j != i} pi_ij (f(j) - f(i))`, exact on constants.
pub fn hamiltonian_values(
    model: &GameModel,
    player: Player,
    i: usize,
    opp: &MixedAction,
    f: &[f64],
    theta: f64,
    weight: f64,
) -> Vec<f64> {
    let n = model.n_states();
    (0..model.n_actions(player))
        .map(|own| {
            let mut acc = 0.0;
            for (o, &w) in opp.weights().iter().enumerate() {
                if w == 0.0 {
                    continue;
                }
                let mut drift = 0.0;
                for (j, fj) in f.iter().enumerate().take(n) {
                    if j != i {
                        drift += model.rate_for(player, i, j, own, o) * (fj - f[i]);
                    }
                }
                acc += w * (drift + theta * model.cost_for(player, player, i, own, o) * weight);
            }
            acc
        })
        .collect()
}

/// Minimum over the player's own mixed actions of the Hamiltonian at state
/// `i`. The objective is linear in the player's mixed action, so the minimum
/// is attained at a vertex; ties go to the lowest action index.
pub fn hamiltonian_min(
    model: &GameModel,
    player: Player,
    i: usize,
    opp: &MixedAction,
    f: &[f64],
    theta: f64,
    weight: f64,
) -> Result<(f64, usize)> {
    let n = model.n_states();
    if f.len() != n {
        return Err(Error::DimensionMismatch {
            what: "hamiltonian vector",
            expected: n,
            got: f.len(),
        });
    }
    if i >= n {
        return Err(Error::DimensionMismatch {
            what: "state index",
            expected: n,
            got: i,
        });
    }
    let m_opp = model.n_actions(player.other());
    if opp.len() != m_opp {
        return Err(Error::DimensionMismatch {
            what: "opponent mixed action",
            expected: m_opp,
            got: opp.len(),
        });
    }
    Ok(argmin(&hamiltonian_values(model, player, i, opp, f, theta, weight)))
}

/// `(min, first index attaining it)`. Values within a few ulps of the
/// minimum count as ties so that rounding noise never overrides the
/// lowest-index rule.
pub(crate) fn argmin(values: &[f64]) -> (f64, usize) {
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let slack = 1e-14 * (1.0 + min.abs());
    let a = values.iter().position(|&v| v <= min + slack).unwrap_or(0);
    (values[a], a)
}

/// Mixed Hamiltonian `Pi_{v1, v2} f(i) + theta r_player(i, v1, v2) weight`.
pub(crate) fn hamiltonian_mixed(
    model: &GameModel,
    player: Player,
    i: usize,
    v1: &MixedAction,
    v2: &MixedAction,
    f: &[f64],
    theta: f64,
    weight: f64,
) -> f64 {
    let drift: f64 = (0..model.n_states())
        .filter(|&j| j != i)
        .map(|j| mixed_rate(model, i, j, v1, v2) * (f[j] - f[i]))
        .sum();
    drift + theta * mixed_cost(model, player, i, v1, v2) * weight
}
