//! Discounted Nash equilibria in theta-indexed strategies.
//!
//! Each player's policy lives on its own uniform grid over `(0, theta_k]`
//! with the same number of intervals, so node `k` of one grid and node `k`
//! of the other correspond to the same clock value `exp(-alpha t) = k / N`.
//!
//! The search runs damped synchronous best response. Averaging alone
//! converges slowly on games whose equilibria are mixed, so every round also
//! tries a stage-game repair of the incumbent: a forward sweep along the
//! grid that, at each node and state, replaces both players' actions with
//! the nearest Nash equilibrium of the local bimatrix game formed from the
//! current value vectors. Whatever is returned is certified by its Nash gaps,
//! never by the iteration itself.

use serde::Serialize;

use crate::bimatrix::{closest_equilibrium, stage_game};
use crate::discounted::{evaluate_discounted_profile, solve_discounted_hjb, FixedDrift, GridSpec, Integrator, ValueCurve};
use crate::error::{Error, Result};
use crate::model::{check_arat, EventuallyStationaryPolicy, GameModel, MixedAction, Player, RiskParams, Strategy, IDENTITY_TOL};

#[derive(Clone, Debug, Serialize)]
pub struct IterSpec {
    pub max_rounds: usize,
    pub tol_policy: f64,
    pub tol_gap: f64,
    pub strict_arat: bool,
    pub polish: bool,
    pub grid: GridSpec,
}

impl Default for IterSpec {
    fn default() -> Self {
        IterSpec {
            max_rounds: 200,
            tol_policy: 1e-6,
            tol_gap: 1e-4,
            strict_arat: true,
            polish: true,
            grid: GridSpec::default(),
        }
    }
}

pub(crate) fn require_arat(model: &GameModel) -> Result<()> {
    let report = check_arat(model, IDENTITY_TOL);
    if report.decomposable {
        Ok(())
    } else {
        Err(Error::Assumption {
            assumption: "A2 (additive rewards and transitions)",
            detail: format!(
                "rate residual {:e}, cost residuals {:e}, {:e}; rerun with strict ARAT off to proceed anyway",
                report.rate_residual, report.cost_residual[0], report.cost_residual[1]
            ),
        })
    }
}

#[derive(Clone, Debug)]
pub struct BestResponse {
    pub policy: EventuallyStationaryPolicy,
    pub curve: ValueCurve,
}

/// Best theta-indexed pure response of `player` to `opp` at risk level
/// `theta`: the recorded minimising selectors of the optimising equation.
pub fn best_response_discounted(
    model: &GameModel,
    player: Player,
    opp: &Strategy,
    alpha: f64,
    theta: f64,
    grid: &GridSpec,
    strict_arat: bool,
) -> Result<BestResponse> {
    if strict_arat {
        require_arat(model)?;
    }
    let curve = solve_discounted_hjb(model, player, opp, alpha, theta, grid)?;
    let policy = curve
        .selector_policy(model.n_actions(player))
        .expect("optimising solve records selectors");
    Ok(BestResponse { policy, curve })
}

#[derive(Clone, Debug, Serialize)]
pub struct GapReport {
    pub gaps: [f64; 2],
    /// `J_k` of the profile at `theta_k`, per state.
    pub values: [Vec<f64>; 2],
    /// Best-response values at `theta_k`, per state.
    pub best_values: [Vec<f64>; 2],
}

struct GapWork {
    report: GapReport,
    responses: [BestResponse; 2],
    curves: [ValueCurve; 2],
}

fn gap_work(model: &GameModel, p1: &Strategy, p2: &Strategy, params: &RiskParams, grid: &GridSpec) -> Result<GapWork> {
    let alpha = params.alpha;
    let per_player = |p: Player| -> Result<(BestResponse, ValueCurve)> {
        let opp = if p == Player::One { p2 } else { p1 };
        let br = best_response_discounted(model, p, opp, alpha, params.theta(p), grid, false)?;
        let eval = evaluate_discounted_profile(model, p1, p2, alpha, params.theta(p), p, grid)?;
        Ok((br, eval))
    };
    let (a, b) = rayon::join(|| per_player(Player::One), || per_player(Player::Two));
    let ((br1, ev1), (br2, ev2)) = (a?, b?);
    let gap = |ev: &ValueCurve, br: &ValueCurve| {
        ev.top().iter().zip(br.top()).map(|(j, v)| j - v).fold(f64::NEG_INFINITY, f64::max)
    };
    Ok(GapWork {
        report: GapReport {
            gaps: [gap(&ev1, &br1.curve), gap(&ev2, &br2.curve)],
            values: [ev1.top().to_vec(), ev2.top().to_vec()],
            best_values: [br1.curve.top().to_vec(), br2.curve.top().to_vec()],
        },
        responses: [br1, br2],
        curves: [ev1, ev2],
    })
}

/// `gap_k = max_i [J_k(profile)(theta_k, i) - min over responses]`.
pub fn nash_gap_discounted(model: &GameModel, p1: &Strategy, p2: &Strategy, params: &RiskParams, grid: &GridSpec) -> Result<GapReport> {
    p1.check_dims(model, Player::One)?;
    p2.check_dims(model, Player::Two)?;
    Ok(gap_work(model, p1, p2, params, grid)?.report)
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceRow {
    pub round: usize,
    pub policy_change: f64,
    pub gap1: f64,
    pub gap2: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub polished_gaps: Option<[f64; 2]>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    BestResponse,
    StagePolish,
}

#[derive(Clone, Debug, Serialize)]
pub struct NashDiscounted {
    pub p1: EventuallyStationaryPolicy,
    pub p2: EventuallyStationaryPolicy,
    /// Profile values `J_k` on each player's grid.
    pub curves: [ValueCurve; 2],
    pub gaps: [f64; 2],
    pub certified: bool,
    pub source: Source,
    pub rounds: usize,
    pub strict_arat: bool,
    pub trace: Vec<TraceRow>,
}

impl NashDiscounted {
    pub fn trace_csv(&self) -> String {
        use crate::report::fmt_f64;
        let mut out = String::from("round,policy_change,gap1,gap2,polished_gap1,polished_gap2\n");
        for r in &self.trace {
            let (a, b) = r
                .polished_gaps
                .map(|g| (fmt_f64(g[0]), fmt_f64(g[1])))
                .unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.round,
                fmt_f64(r.policy_change),
                fmt_f64(r.gap1),
                fmt_f64(r.gap2),
                a,
                b
            ));
        }
        out
    }
}

fn uniform_policy(model: &GameModel, player: Player, theta: f64, intervals: usize) -> EventuallyStationaryPolicy {
    let col = vec![MixedAction::uniform(model.n_actions(player)); model.n_states()];
    EventuallyStationaryPolicy::constant(EventuallyStationaryPolicy::uniform_grid(theta, intervals), col)
        .expect("uniform grid is valid")
}

fn policy_mut(s: &mut Strategy) -> &mut EventuallyStationaryPolicy {
    match s {
        Strategy::EventuallyStationary { policy } => policy,
        Strategy::Stationary { .. } => unreachable!("repair works on indexed policies"),
    }
}

/// Forward stage-game sweep starting from `(p1, p2)`.
fn stage_polish(
    model: &GameModel,
    params: &RiskParams,
    grid: &GridSpec,
    p1: &EventuallyStationaryPolicy,
    p2: &EventuallyStationaryPolicy,
) -> Result<(EventuallyStationaryPolicy, EventuallyStationaryPolicy)> {
    let alpha = params.alpha;
    let thetas = [params.theta1, params.theta2];
    let nodes = [grid.nodes(thetas[0]), grid.nodes(thetas[1])];
    let integrators = Player::BOTH.map(|p| Integrator::for_model(model, p, alpha, grid.step_control));
    let mut s = [Strategy::indexed(p1.clone()), Strategy::indexed(p2.clone())];
    let reference = [p1, p2];
    let n = model.n_states();

    let repair = |s: &mut [Strategy; 2], psi: &[Vec<f64>; 2], k: usize| -> Result<()> {
        for i in 0..n {
            let [a, b] = stage_game(model, i, [&psi[0], &psi[1]], [nodes[0][k], nodes[1][k]]);
            let (x, y) = closest_equilibrium(&a, &b, &reference[0].cells()[k - 1][i], &reference[1].cells()[k - 1][i])
                .ok_or_else(|| Error::NonConvergence {
                    what: "stage game equilibrium search",
                    iterations: 0,
                    residual: f64::NAN,
                })?;
            policy_mut(&mut s[0]).cells_mut()[k - 1][i] = x;
            policy_mut(&mut s[1]).cells_mut()[k - 1][i] = y;
        }
        Ok(())
    };

    // the first cell also governs [0, theta^1), so settle it by a short fixed point
    let mut psi: [Vec<f64>; 2] = [Vec::new(), Vec::new()];
    for _ in 0..3 {
        for p in Player::BOTH {
            let drift = FixedDrift {
                model,
                player: p,
                p1: &s[0],
                p2: &s[1],
                theta_max: thetas[p.index()],
                alpha,
            };
            psi[p.index()] = integrators[p.index()].seeded(&drift, nodes[p.index()][1], grid.seed_fraction)?.1;
        }
        repair(&mut s, &psi, 1)?;
    }
    for k in 2..=grid.intervals {
        for p in Player::BOTH {
            let drift = FixedDrift {
                model,
                player: p,
                p1: &s[0],
                p2: &s[1],
                theta_max: thetas[p.index()],
                alpha,
            };
            let nd = &nodes[p.index()];
            integrators[p.index()].advance(&drift, &mut psi[p.index()], nd[k - 1], nd[k]);
        }
        repair(&mut s, &psi, k)?;
    }
    let [a, b] = s;
    match (a, b) {
        (Strategy::EventuallyStationary { policy: a }, Strategy::EventuallyStationary { policy: b }) => Ok((a, b)),
        _ => unreachable!(),
    }
}

/// Damped best response with stage-game repair, certified by Nash gaps.
pub fn solve_nash_discounted(model: &GameModel, params: &RiskParams, spec: &IterSpec) -> Result<NashDiscounted> {
    if spec.strict_arat {
        require_arat(model)?;
    }
    let grid = &spec.grid;
    let mut inc = [
        uniform_policy(model, Player::One, params.theta1, grid.intervals),
        uniform_policy(model, Player::Two, params.theta2, grid.intervals),
    ];
    let mut trace = Vec::new();
    let mut best: Option<(f64, NashDiscounted)> = None;

    let finish = |p1: EventuallyStationaryPolicy, p2, work: GapWork, certified, source, rounds, trace: &Vec<TraceRow>| NashDiscounted {
        p1,
        p2,
        curves: work.curves,
        gaps: work.report.gaps,
        certified,
        source,
        rounds,
        strict_arat: spec.strict_arat,
        trace: trace.clone(),
    };

    for t in 0..spec.max_rounds {
        let (s1, s2) = (Strategy::indexed(inc[0].clone()), Strategy::indexed(inc[1].clone()));
        let work = gap_work(model, &s1, &s2, params, grid)?;
        let lambda = 1.0 / (t as f64 + 1.0);
        let change = lambda
            * inc[0]
                .sup_distance(&work.responses[0].policy)
                .max(inc[1].sup_distance(&work.responses[1].policy));
        let gaps = work.report.gaps;
        let mut row = TraceRow {
            round: t,
            policy_change: change,
            gap1: gaps[0],
            gap2: gaps[1],
            polished_gaps: None,
        };
        let worst = gaps[0].max(gaps[1]);
        if t > 0 && change <= spec.tol_policy && worst <= spec.tol_gap {
            trace.push(row);
            return Ok(finish(inc[0].clone(), inc[1].clone(), work, true, Source::BestResponse, t + 1, &trace));
        }

        let next = [inc[0].mix(&work.responses[0].policy, lambda), inc[1].mix(&work.responses[1].policy, lambda)];

        if spec.polish {
            let (q1, q2) = stage_polish(model, params, grid, &inc[0], &inc[1])?;
            let pw = gap_work(model, &Strategy::indexed(q1.clone()), &Strategy::indexed(q2.clone()), params, grid)?;
            let pg = pw.report.gaps;
            row.polished_gaps = Some(pg);
            let pworst = pg[0].max(pg[1]);
            if pworst <= spec.tol_gap {
                trace.push(row);
                return Ok(finish(q1, q2, pw, true, Source::StagePolish, t + 1, &trace));
            }
            if best.as_ref().is_none_or(|(b, _)| pworst < *b) {
                best = Some((pworst, finish(q1, q2, pw, false, Source::StagePolish, t + 1, &trace)));
            }
        }
        if best.as_ref().is_none_or(|(b, _)| worst < *b) {
            best = Some((worst, finish(inc[0].clone(), inc[1].clone(), work, false, Source::BestResponse, t + 1, &trace)));
        }
        trace.push(row);
        inc = next;
    }
    let (_, mut out) = best.expect("at least one round runs");
    out.rounds = spec.max_rounds;
    out.trace = trace;
    Ok(out)
}
