//! Monte Carlo simulation of the controlled chain.
//!
//! Paths are drawn with the jump-chain (Gillespie) sampler under the mixed
//! (relaxed) rates. Theta-indexed strategies are read on the clock
//! `s = exp(-alpha t)`, so a policy with top level `theta` uses its column at
//! `theta exp(-alpha t)`; the sampler stops at every cell boundary and
//! redraws the holding time, which is exact by memorylessness.
//!
//! Path `p` draws from its own ChaCha stream `(seed, p)`, so results do not
//! depend on the thread count. Per-path outputs are collected in path order
//! and reduced sequentially.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::generator::{mixed_cost, mixed_rate};
use crate::model::{GameModel, LyapunovCertificate, MixedAction, Player, StationaryProfile, Strategy};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Trajectory {
    pub start: usize,
    /// `(jump time, new state)`, times strictly increasing in `(0, horizon]`.
    pub jumps: Vec<(f64, usize)>,
    pub horizon: f64,
}

impl Trajectory {
    pub fn state_at(&self, t: f64) -> usize {
        let k = self.jumps.partition_point(|&(s, _)| s <= t);
        if k == 0 {
            self.start
        } else {
            self.jumps[k - 1].1
        }
    }

    pub fn final_state(&self) -> usize {
        self.jumps.last().map_or(self.start, |j| j.1)
    }

    /// CSV with columns `time,state`: the start, every jump and the horizon.
    pub fn to_csv(&self) -> String {
        use crate::report::fmt_f64;
        let mut out = format!("time,state\n{},{}\n", fmt_f64(0.0), self.start);
        for (t, s) in &self.jumps {
            out.push_str(&format!("{},{}\n", fmt_f64(*t), s));
        }
        out.push_str(&format!("{},{}\n", fmt_f64(self.horizon), self.final_state()));
        out
    }
}

/// Strategy pair with the discount rate that drives theta-indexed clocks.
#[derive(Clone, Copy, Debug)]
pub struct SimProfile<'a> {
    pub p1: &'a Strategy,
    pub p2: &'a Strategy,
    pub alpha: f64,
}

impl<'a> SimProfile<'a> {
    pub fn new(p1: &'a Strategy, p2: &'a Strategy, alpha: f64) -> Self {
        SimProfile { p1, p2, alpha }
    }

    /// Times in `(0, inf)` where either column in force changes, ascending.
    fn switch_times(&self) -> Vec<f64> {
        let mut out: Vec<f64> = [self.p1, self.p2]
            .iter()
            .flat_map(|s| s.breakpoints(0.0, 1.0))
            .map(|c| -c.ln() / self.alpha)
            .filter(|t| *t > 0.0 && t.is_finite())
            .collect();
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }

    fn columns_between(&self, a: f64, b: f64) -> (&'a [MixedAction], &'a [MixedAction]) {
        let mid = if b.is_finite() { 0.5 * (a + b) } else { a + 1.0 };
        let s = (-self.alpha * mid).exp();
        (self.p1.at_clock(s), self.p2.at_clock(s))
    }
}

/// Runs one path, calling `visit(t0, t1, state, v1, v2)` for every
/// constant stretch and returning the trajectory.
fn run_path(
    model: &GameModel,
    prof: &SimProfile,
    switches: &[f64],
    start: usize,
    horizon: f64,
    rng: &mut ChaCha8Rng,
    mut visit: impl FnMut(f64, f64, usize, &MixedAction, &MixedAction),
    mut stop: impl FnMut(f64, usize) -> bool,
) -> Trajectory {
    let n = model.n_states();
    let mut t = 0.0;
    let mut state = start;
    let mut jumps = Vec::new();
    let mut seg = 0;
    let mut rates = vec![0.0; n];
    while t < horizon && !stop(t, state) {
        while seg < switches.len() && switches[seg] <= t {
            seg += 1;
        }
        let seg_end = switches.get(seg).copied().unwrap_or(f64::INFINITY);
        let (c1, c2) = prof.columns_between(t, seg_end);
        let (v1, v2) = (&c1[state], &c2[state]);
        let mut q = 0.0;
        for (j, r) in rates.iter_mut().enumerate() {
            *r = if j == state { 0.0 } else { mixed_rate(model, state, j, v1, v2) };
            q += *r;
        }
        let limit = seg_end.min(horizon);
        let hold = if q > 0.0 {
            let u: f64 = 1.0 - rng.gen::<f64>();
            -u.ln() / q
        } else {
            f64::INFINITY
        };
        if t + hold >= limit {
            visit(t, limit, state, v1, v2);
            t = limit;
            continue;
        }
        let next_t = t + hold;
        visit(t, next_t, state, v1, v2);
        let mut pick = rng.gen::<f64>() * q;
        let mut target = state;
        for (j, &r) in rates.iter().enumerate() {
            if r > 0.0 {
                target = j;
                if pick < r {
                    break;
                }
                pick -= r;
            }
        }
        t = next_t;
        state = target;
        jumps.push((t, state));
    }
    Trajectory { start, jumps, horizon }
}

fn path_rng(seed: u64, path: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(path);
    rng
}

fn check_common(model: &GameModel, prof: &SimProfile, start: usize, horizon: f64) -> Result<()> {
    prof.p1.check_dims(model, Player::One)?;
    prof.p2.check_dims(model, Player::Two)?;
    if start >= model.n_states() {
        return Err(Error::InvalidArgument(format!("start state {start} out of range")));
    }
    if !(horizon > 0.0) {
        return Err(Error::InvalidArgument(format!("horizon must be positive, got {horizon}")));
    }
    if !(prof.alpha > 0.0) {
        return Err(Error::InvalidArgument(format!("clock rate alpha must be positive, got {}", prof.alpha)));
    }
    Ok(())
}

/// One path on stream 0 of `seed`.
pub fn sample_path(model: &GameModel, prof: &SimProfile, start: usize, horizon: f64, seed: u64) -> Result<Trajectory> {
    sample_path_stream(model, prof, start, horizon, seed, 0)
}

pub fn sample_path_stream(model: &GameModel, prof: &SimProfile, start: usize, horizon: f64, seed: u64, path: u64) -> Result<Trajectory> {
    check_common(model, prof, start, horizon)?;
    let switches = prof.switch_times();
    Ok(run_path(model, prof, &switches, start, horizon, &mut path_rng(seed, path), |_, _, _, _, _| {}, |_, _| false))
}

#[derive(Clone, Debug, Serialize)]
pub struct EstimatorReport {
    pub estimate: f64,
    pub std_error: f64,
    pub paths: usize,
    pub horizon: f64,
    /// Discounted case: multiplicative truncation bias bound
    /// `exp(theta ||r|| exp(-alpha T) / alpha) - 1`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bias_bound: Option<f64>,
    /// Hitting case: fraction of paths that never reached the target.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub censored_fraction: Option<f64>,
    pub reliable: bool,
}

fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn per_path<T: Send>(paths: usize, f: impl Fn(u64) -> T + Sync + Send) -> Vec<T> {
    (0..paths as u64).into_par_iter().map(f).collect()
}

/// Mean of `exp(theta int_0^T e^{-alpha t} r_player dt)` over `paths` paths.
#[allow(clippy::too_many_arguments)]
pub fn estimate_discounted_cost(
    model: &GameModel,
    prof: &SimProfile,
    theta: f64,
    player: Player,
    start: usize,
    paths: usize,
    horizon: f64,
    seed: u64,
) -> Result<EstimatorReport> {
    check_common(model, prof, start, horizon)?;
    if paths == 0 {
        return Err(Error::InvalidArgument("need at least one path".into()));
    }
    let alpha = prof.alpha;
    let switches = prof.switch_times();
    let values = per_path(paths, |p| {
        let mut acc = 0.0;
        run_path(
            model,
            prof,
            &switches,
            start,
            horizon,
            &mut path_rng(seed, p),
            |a, b, i, v1, v2| {
                let c = mixed_cost(model, player, i, v1, v2);
                if c != 0.0 {
                    acc += c * ((-alpha * a).exp() - (-alpha * b).exp()) / alpha;
                }
            },
            |_, _| false,
        );
        (theta * acc).exp()
    });
    let (estimate, std_error) = mean_se(&values);
    let bias = (theta * model.cost(player).sup_norm() * (-alpha * horizon).exp() / alpha).exp() - 1.0;
    Ok(EstimatorReport {
        estimate,
        std_error,
        paths,
        horizon,
        bias_bound: Some(bias),
        censored_fraction: None,
        reliable: true,
    })
}

/// `(1 / (theta T)) ln mean exp(theta int_0^T r dt)`, with per-path exponents
/// shifted by their maximum before exponentiation and a delta-method
/// standard error. Biased for finite `(paths, T)`; the variance grows
/// quickly with `theta T`.
pub fn estimate_ergodic_cost(
    model: &GameModel,
    profile: &StationaryProfile,
    theta: f64,
    player: Player,
    start: usize,
    paths: usize,
    horizon: f64,
    seed: u64,
) -> Result<EstimatorReport> {
    let (s1, s2) = (Strategy::stationary(profile.p1.clone()), Strategy::stationary(profile.p2.clone()));
    let prof = SimProfile::new(&s1, &s2, 1.0);
    check_common(model, &prof, start, horizon)?;
    if paths == 0 || !(theta > 0.0) {
        return Err(Error::InvalidArgument("need at least one path and positive theta".into()));
    }
    let exponents = per_path(paths, |p| theta * integrated_cost(model, &prof, player, start, horizon, seed, p).0);
    let (estimate, se) = log_mean_exp(&exponents);
    Ok(EstimatorReport {
        estimate: estimate / (theta * horizon),
        std_error: se / (theta * horizon),
        paths,
        horizon,
        bias_bound: None,
        censored_fraction: None,
        reliable: true,
    })
}

/// `int_0^T r dt` along one path and the final state.
fn integrated_cost(model: &GameModel, prof: &SimProfile, player: Player, start: usize, horizon: f64, seed: u64, p: u64) -> (f64, usize) {
    let mut acc = 0.0;
    let traj = run_path(
        model,
        prof,
        &[],
        start,
        horizon,
        &mut path_rng(seed, p),
        |a, b, i, v1, v2| acc += mixed_cost(model, player, i, v1, v2) * (b - a),
        |_, _| false,
    );
    (acc, traj.final_state())
}

/// `ln mean exp(y)` and its delta-method standard error.
fn log_mean_exp(y: &[f64]) -> (f64, f64) {
    let max = y.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let z: Vec<f64> = y.iter().map(|v| (v - max).exp()).collect();
    let (m, se) = mean_se(&z);
    (max + m.ln(), se / m)
}

/// Mean of `exp(delta tau_j)` over paths from `i` that reach `j` before
/// `t_cap`. More than 1% censored paths marks the estimate unreliable.
#[allow(clippy::too_many_arguments)]
pub fn estimate_hitting_exponential(
    model: &GameModel,
    profile: &StationaryProfile,
    i: usize,
    j: usize,
    delta: f64,
    paths: usize,
    t_cap: f64,
    seed: u64,
) -> Result<EstimatorReport> {
    let (s1, s2) = (Strategy::stationary(profile.p1.clone()), Strategy::stationary(profile.p2.clone()));
    let prof = SimProfile::new(&s1, &s2, 1.0);
    check_common(model, &prof, i, t_cap)?;
    if j >= model.n_states() || paths == 0 || delta < 0.0 {
        return Err(Error::InvalidArgument("invalid target state, path count or delta".into()));
    }
    let hits = per_path(paths, |p| {
        let mut hit = None;
        run_path(
            model,
            &prof,
            &[],
            i,
            t_cap,
            &mut path_rng(seed, p),
            |_, _, _, _, _| {},
            |t, s| {
                if s == j {
                    hit = Some(t);
                }
                hit.is_some()
            },
        );
        hit
    });
    let reached: Vec<f64> = hits.iter().flatten().map(|t| (delta * t).exp()).collect();
    let censored = (paths - reached.len()) as f64 / paths as f64;
    let (estimate, std_error) = if reached.is_empty() { (f64::NAN, f64::NAN) } else { mean_se(&reached) };
    Ok(EstimatorReport {
        estimate,
        std_error,
        paths,
        horizon: t_cap,
        bias_bound: None,
        censored_fraction: Some(censored),
        reliable: censored <= 0.01 && !reached.is_empty(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DriftCheck {
    /// `E[Z W(Y_T)] / E[Z]` with `Z = exp(theta int_0^T r)`.
    pub weighted_w: f64,
    /// `W(i) + b T`.
    pub bound: f64,
    /// Mean and standard error of `Z (W(Y_T) - W(i) - b T)`, `Z` max-shifted.
    pub excess_mean: f64,
    pub excess_se: f64,
    pub paths: usize,
    /// `excess_mean <= 3 excess_se`.
    pub passed: bool,
}

/// Statistical check of `E[Z W(Y_T)] <= (W(i) + b T) E[Z]` under a
/// stationary profile.
#[allow(clippy::too_many_arguments)]
pub fn check_weighted_drift(
    model: &GameModel,
    profile: &StationaryProfile,
    cert: &LyapunovCertificate,
    theta: f64,
    player: Player,
    i: usize,
    paths: usize,
    horizon: f64,
    seed: u64,
) -> Result<DriftCheck> {
    let (s1, s2) = (Strategy::stationary(profile.p1.clone()), Strategy::stationary(profile.p2.clone()));
    let prof = SimProfile::new(&s1, &s2, 1.0);
    check_common(model, &prof, i, horizon)?;
    if cert.w.len() != model.n_states() || paths == 0 {
        return Err(Error::InvalidArgument("certificate size or path count mismatch".into()));
    }
    let per = per_path(paths, |p| {
        let (c, end) = integrated_cost(model, &prof, player, i, horizon, seed, p);
        (theta * c, cert.w[end])
    });
    let max = per.iter().map(|x| x.0).fold(f64::NEG_INFINITY, f64::max);
    let bound = cert.w[i] + cert.b * horizon;
    let z: Vec<f64> = per.iter().map(|(y, _)| (y - max).exp()).collect();
    let excess: Vec<f64> = per.iter().zip(&z).map(|((_, w), z)| z * (w - bound)).collect();
    let zw: f64 = per.iter().zip(&z).map(|((_, w), z)| z * w).sum();
    let zs: f64 = z.iter().sum();
    let (excess_mean, excess_se) = mean_se(&excess);
    Ok(DriftCheck {
        weighted_w: zw / zs,
        bound,
        excess_mean,
        excess_se,
        paths,
        passed: excess_mean <= 3.0 * excess_se,
    })
}

/// Mean jump count over `paths` paths, with its standard error.
pub fn mean_jump_count(model: &GameModel, prof: &SimProfile, start: usize, horizon: f64, paths: usize, seed: u64) -> Result<(f64, f64)> {
    check_common(model, prof, start, horizon)?;
    let switches = prof.switch_times();
    let counts = per_path(paths, |p| {
        run_path(model, prof, &switches, start, horizon, &mut path_rng(seed, p), |_, _, _, _, _| {}, |_, _| false)
            .jumps
            .len() as f64
    });
    Ok(mean_se(&counts))
}
