//! Validators for the standing assumptions. They report the worst offending
//! index instead of failing fast so callers can print diagnostics.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{AratDecomposition, GameModel, LyapunovCertificate, Player, RiskParams};

#[derive(Clone, Debug, Serialize)]
pub struct AratReport {
    pub decomposable: bool,
    pub rate_residual: f64,
    pub cost_residual: [f64; 2],
    /// Gauge-fixed decomposition (player-2 component vanishes at action 0).
    /// Present whenever the residuals are within tolerance.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<AratDecomposition>,
}

impl AratReport {
    pub fn max_residual(&self) -> f64 {
        self.rate_residual.max(self.cost_residual[0]).max(self.cost_residual[1])
    }
}

/// Tests whether rates and both costs split additively into single-player
/// terms. A table `T(u1, u2)` is additive iff
/// `T(u1, u2) = T(u1, 0) + T(0, u2) - T(0, 0)` everywhere, which is also the
/// gauge-fixed decomposition `A(u1) = T(u1, 0)`, `B(u2) = T(0, u2) - T(0, 0)`.
pub fn check_arat(model: &GameModel, tol: f64) -> AratReport {
    let (n, m1, m2) = model.dims();
    let rates = model.rates();
    let mut rates1 = vec![vec![vec![0.0; m1]; n]; n];
    let mut rates2 = vec![vec![vec![0.0; m2]; n]; n];
    let mut rate_residual = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let base = rates.get(i, j, 0, 0);
            for u1 in 0..m1 {
                rates1[i][j][u1] = rates.get(i, j, u1, 0);
            }
            for u2 in 0..m2 {
                rates2[i][j][u2] = rates.get(i, j, 0, u2) - base;
            }
            for u1 in 0..m1 {
                for u2 in 0..m2 {
                    let r = (rates.get(i, j, u1, u2) - rates1[i][j][u1] - rates2[i][j][u2]).abs();
                    rate_residual = rate_residual.max(r);
                }
            }
        }
    }

    let mut by_p1 = [vec![vec![0.0; m1]; n], vec![vec![0.0; m1]; n]];
    let mut by_p2 = [vec![vec![0.0; m2]; n], vec![vec![0.0; m2]; n]];
    let mut cost_residual = [0.0f64; 2];
    for p in Player::BOTH {
        let k = p.index();
        let c = model.cost(p);
        for i in 0..n {
            let base = c.get(i, 0, 0);
            for u1 in 0..m1 {
                by_p1[k][i][u1] = c.get(i, u1, 0);
            }
            for u2 in 0..m2 {
                by_p2[k][i][u2] = c.get(i, 0, u2) - base;
            }
            for u1 in 0..m1 {
                for u2 in 0..m2 {
                    let r = (c.get(i, u1, u2) - by_p1[k][i][u1] - by_p2[k][i][u2]).abs();
                    cost_residual[k] = cost_residual[k].max(r);
                }
            }
        }
    }

    let decomposable = rate_residual <= tol && cost_residual[0] <= tol && cost_residual[1] <= tol;
    AratReport {
        decomposable,
        rate_residual,
        cost_residual,
        decomposition: decomposable.then(|| AratDecomposition {
            rates1,
            rates2,
            costs_by_p1: by_p1,
            costs_by_p2: by_p2,
        }),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LyapunovReport {
    pub passed: bool,
    /// Smallest value of `-2 delta W(i) + b 1_C(i) - Pi_u W(i)` over states and
    /// pure pairs; negative means violated.
    pub worst_margin: f64,
    /// `(i, u1, u2)` attaining the worst margin.
    pub worst_index: (usize, usize, usize),
    pub violations: usize,
    /// Structural problem with the certificate itself, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate_issue: Option<String>,
    pub c0: Vec<usize>,
}

/// Checks the drift inequality at every state and pure action pair (enough
/// for every mixed pair, since `v -> Pi_v W(i)` is bilinear).
pub fn check_lyapunov(model: &GameModel, cert: &LyapunovCertificate, tol: f64) -> Result<LyapunovReport> {
    let (n, m1, m2) = model.dims();
    if cert.w.len() != n {
        return Err(Error::DimensionMismatch {
            what: "Lyapunov function W",
            expected: n,
            got: cert.w.len(),
        });
    }
    let certificate_issue = cert.validate(n).err().map(|e| e.to_string());
    let mut worst_margin = f64::INFINITY;
    let mut worst_index = (0, 0, 0);
    let mut violations = 0;
    for i in 0..n {
        let rhs = -2.0 * cert.delta * cert.w[i] + if cert.in_c(i) { cert.b } else { 0.0 };
        for u1 in 0..m1 {
            for u2 in 0..m2 {
                let drift: f64 = (0..n).map(|j| model.rates().get(i, j, u1, u2) * cert.w[j]).sum();
                let margin = rhs - drift;
                if margin < -tol {
                    violations += 1;
                }
                if margin < worst_margin {
                    worst_margin = margin;
                    worst_index = (i, u1, u2);
                }
            }
        }
    }
    Ok(LyapunovReport {
        passed: violations == 0 && certificate_issue.is_none(),
        worst_margin,
        worst_index,
        violations,
        certificate_issue,
        c0: cert.c0(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SmallCostReport {
    pub passed: bool,
    /// `delta - theta_k ||r_k||_inf` per player.
    pub slack: [f64; 2],
}

/// `theta_k ||r_k||_inf <= delta` for both players.
pub fn check_small_cost(model: &GameModel, params: &RiskParams, cert: &LyapunovCertificate) -> SmallCostReport {
    let slack = Player::BOTH.map(|p| cert.delta - params.theta(p) * model.cost(p).sup_norm());
    SmallCostReport {
        passed: slack.iter().all(|s| *s >= 0.0),
        slack,
    }
}
