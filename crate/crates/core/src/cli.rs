//! Command-line front end. `run` returns the process exit code: 0 on success
//! (and certification, where a result can be certified), 2 when a result is
//! produced but not certified, 1 on any error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::discounted::{grid_residuals, GridSpec};
use crate::ergodic::{
    default_alphas, nash_gap_ergodic, solve_ergodic_ctmdp, solve_nash_ergodic, vanishing_discount_probe,
    ErgodicIterSpec,
};
use crate::model::{check_arat, check_lyapunov, check_small_cost, AratReport, LyapunovReport, ModelFile, SmallCostReport};
use crate::model::IDENTITY_TOL;
use crate::nash_discounted::{best_response_discounted, nash_gap_discounted, solve_nash_discounted, IterSpec};
use crate::report::{to_json_string, Audit, Report};
use crate::simulate::{estimate_discounted_cost, estimate_ergodic_cost, estimate_hitting_exponential, sample_path, SimProfile};
use crate::{Error, GameModel, MixedAction, Player, RiskParams, StationaryProfile, Strategy};

#[derive(Debug, Parser)]
#[command(name = "rsgame", version, about = "Risk-sensitive nonzero-sum stochastic games on finite CTMCs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the standing assumptions of a model file.
    Validate(ValidateArgs),
    /// Discounted Nash equilibrium in theta-indexed strategies.
    SolveDiscounted(SolveDiscountedArgs),
    /// Ergodic Nash equilibrium in stationary strategies.
    SolveErgodic(SolveErgodicArgs),
    /// Single-agent best response to a fixed opponent.
    BestResponse(BestResponseArgs),
    /// Discounted solves for alpha -> 0 compared with the ergodic value.
    ProbeVanishingDiscount(ProbeArgs),
    /// Monte Carlo estimate of a cost functional.
    Simulate(SimulateArgs),
    /// Nash gaps of a given profile.
    VerifyNash(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Criterion {
    Discounted,
    Ergodic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Functional {
    Discounted,
    Ergodic,
    Hitting,
}

#[derive(Debug, Args, Serialize)]
struct Common {
    /// Model file (JSON).
    #[arg(long)]
    model: PathBuf,
    /// Report destination; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (0 = all cores).
    #[arg(long, env = "RSGAME_THREADS", default_value_t = 0)]
    threads: usize,
}

#[derive(Debug, Args, Serialize)]
struct ValidateArgs {
    #[command(flatten)]
    common: Common,
    /// Tolerance for exact identities (conservative rows, ARAT reassembly).
    #[arg(long, default_value_t = IDENTITY_TOL)]
    tol: f64,
    /// Risk levels for the small-cost check.
    #[arg(long)]
    theta1: Option<f64>,
    #[arg(long)]
    theta2: Option<f64>,
}

#[derive(Debug, Args, Serialize)]
struct SolveDiscountedArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    theta1: f64,
    #[arg(long)]
    theta2: f64,
    /// Upper bound on risk levels; unbounded when absent.
    #[arg(long)]
    theta_bound: Option<f64>,
    #[arg(long)]
    alpha: f64,
    /// Grid intervals per player.
    #[arg(long, default_value_t = crate::discounted::DEFAULT_INTERVALS)]
    grid: usize,
    #[arg(long, default_value_t = 1e-4)]
    tol_gap: f64,
    #[arg(long, default_value_t = 1e-6)]
    tol_policy: f64,
    #[arg(long, default_value_t = 200)]
    max_rounds: usize,
    /// Require an additive (ARAT) model.
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    strict_arat: bool,
    /// Write the iteration trace as CSV.
    #[arg(long)]
    trace_csv: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
struct SolveErgodicArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    theta1: f64,
    #[arg(long)]
    theta2: f64,
    #[arg(long, default_value_t = 1e-6)]
    tol_gap: f64,
    #[arg(long, default_value_t = 500)]
    max_rounds: usize,
    /// Ignore the model's Lyapunov certificate.
    #[arg(long)]
    no_certificate: bool,
    /// Reference state when no certificate is used.
    #[arg(long, default_value_t = 0)]
    i0: usize,
    /// Write the equilibrium table as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
struct BestResponseArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_enum)]
    criterion: Criterion,
    /// Responding player (1 or 2).
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    player: u8,
    #[arg(long)]
    theta: f64,
    /// Discount rate (discounted criterion).
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long, default_value_t = crate::discounted::DEFAULT_INTERVALS)]
    grid: usize,
    /// Profile file holding the opponent's strategy; uniform when absent.
    #[arg(long)]
    profile: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    i0: usize,
    /// Write the value table as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
struct ProbeArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    player: u8,
    #[arg(long)]
    theta: f64,
    #[arg(long, default_value_t = crate::discounted::DEFAULT_INTERVALS)]
    grid: usize,
    /// Comma-separated decreasing discount rates; 2^0 .. 2^-10 when absent.
    #[arg(long, value_delimiter = ',')]
    alphas: Option<Vec<f64>>,
    #[arg(long)]
    profile: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    i0: usize,
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
struct SimulateArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_enum)]
    functional: Functional,
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2), default_value_t = 1)]
    player: u8,
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long, default_value_t = 10_000)]
    paths: usize,
    /// Horizon (or censoring time for hitting); 20/alpha for discounted when absent.
    #[arg(long)]
    horizon: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    start: usize,
    /// Target state for hitting times.
    #[arg(long)]
    target: Option<usize>,
    /// Exponent for hitting times.
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    profile: Option<PathBuf>,
    /// Write the first sample path as CSV.
    #[arg(long)]
    trajectory_csv: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
struct VerifyArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    profile: PathBuf,
    #[arg(long, value_enum, default_value_t = Criterion::Ergodic)]
    criterion: Criterion,
    #[arg(long)]
    theta1: f64,
    #[arg(long)]
    theta2: f64,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long, default_value_t = crate::discounted::DEFAULT_INTERVALS)]
    grid: usize,
    /// Defaults to 1e-6 (ergodic) or 1e-4 (discounted).
    #[arg(long)]
    tol_gap: Option<f64>,
    #[arg(long, default_value_t = 0)]
    i0: usize,
}

/// Profile file: `{"p1": <strategy>, "p2": <strategy>}` where a strategy is
/// `{"kind": "stationary", "column": [[w, ...], ...]}` or
/// `{"kind": "eventually_stationary", "policy": {"grid": [...], "cells": [...]}}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileFile {
    pub p1: Strategy,
    pub p2: Strategy,
}

impl ProfileFile {
    pub fn get(&self, player: Player) -> &Strategy {
        match player {
            Player::One => &self.p1,
            Player::Two => &self.p2,
        }
    }
}

enum Outcome {
    Done,
    NotCertified,
}

struct Loaded {
    bytes: Vec<u8>,
    file: ModelFile,
}

fn read(path: &Path) -> Result<Vec<u8>, Error> {
    fs::read(path).map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))
}

fn load(path: &Path, tol: f64) -> Result<Loaded, Error> {
    let bytes = read(path)?;
    let text = std::str::from_utf8(&bytes).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))?;
    let file = ModelFile::parse_with_tol(text, tol)?;
    Ok(Loaded { bytes, file })
}

fn load_profile(path: &Path) -> Result<ProfileFile, Error> {
    let bytes = read(path)?;
    serde_json::from_slice(&bytes).map_err(|e| Error::InvalidArgument(format!("bad profile file {}: {e}", path.display())))
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), Error> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Error::InvalidArgument(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Error::InvalidArgument(format!("cannot write report: {e}")))
        }
    }
}

fn emit<A: Serialize, T: Serialize>(command: &str, loaded: &Loaded, args: &A, seed: Option<u64>, common: &Common, result: &T) -> Result<(), Error> {
    let params = serde_json::to_value(args).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let audit = Audit::new(command, &loaded.bytes, params, seed);
    let text = to_json_string(&Report { audit: &audit, result })?;
    write_out(common.out.as_deref(), &text)
}

fn player(k: u8) -> Player {
    Player::from_number(k).expect("clap restricts player to 1 or 2")
}

fn grid(intervals: usize) -> GridSpec {
    GridSpec::with_intervals(intervals)
}

fn opponent(model: &GameModel, profile: Option<&ProfileFile>, me: Player) -> Strategy {
    match profile {
        Some(p) => p.get(me.other()).clone(),
        None => {
            let opp = me.other();
            Strategy::stationary(vec![MixedAction::uniform(model.n_actions(opp)); model.n_states()])
        }
    }
}

fn stationary_column(s: &Strategy, what: &str) -> Result<Vec<MixedAction>, Error> {
    match s {
        Strategy::Stationary { column } => Ok(column.clone()),
        _ => Err(Error::InvalidArgument(format!("{what} must be a stationary strategy"))),
    }
}

fn json<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).unwrap_or(serde_json::Value::Null)
}

fn need(v: Option<f64>, flag: &str) -> Result<f64, Error> {
    v.ok_or_else(|| Error::InvalidArgument(format!("--{flag} is required here")))
}

#[derive(Serialize)]
struct ValidateReport {
    n_states: usize,
    n_actions: [usize; 2],
    a1: A1Report,
    a2: AratReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    a3: Option<LyapunovReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    a4: Option<SmallCostReport>,
}

#[derive(Serialize)]
struct A1Report {
    passed: bool,
    max_exit_rate: f64,
    cost_sup_norm: [f64; 2],
}

fn validate(a: &ValidateArgs) -> Result<Outcome, Error> {
    let loaded = load(&a.common.model, a.tol)?;
    let model = &loaded.file.model;
    let a3 = loaded.file.lyapunov.as_ref().map(|c| check_lyapunov(model, c, a.tol)).transpose()?;
    let a4 = match (loaded.file.lyapunov.as_ref(), a.theta1, a.theta2) {
        (Some(c), Some(t1), Some(t2)) => {
            let params = RiskParams::new(t1, t2, f64::INFINITY, 1.0)?;
            Some(check_small_cost(model, &params, c))
        }
        _ => None,
    };
    let ok = a3.as_ref().is_none_or(|r| r.passed) && a4.as_ref().is_none_or(|r| r.passed);
    let report = ValidateReport {
        n_states: model.n_states(),
        n_actions: [model.n_actions(Player::One), model.n_actions(Player::Two)],
        a1: A1Report {
            passed: true,
            max_exit_rate: model.rates().max_exit_rate(),
            cost_sup_norm: Player::BOTH.map(|p| model.cost(p).sup_norm()),
        },
        a2: check_arat(model, a.tol),
        a3,
        a4,
    };
    emit("validate", &loaded, a, None, &a.common, &report)?;
    Ok(if ok { Outcome::Done } else { Outcome::NotCertified })
}

#[derive(Serialize)]
struct DiscountedReport<'a> {
    certified: bool,
    strict_arat: bool,
    source: crate::nash_discounted::Source,
    rounds: usize,
    gaps: [f64; 2],
    /// `J_k(theta_k, i)` of the returned profile.
    values: [&'a [f64]; 2],
    p1: &'a crate::EventuallyStationaryPolicy,
    p2: &'a crate::EventuallyStationaryPolicy,
}

fn solve_discounted(a: &SolveDiscountedArgs) -> Result<Outcome, Error> {
    let loaded = load(&a.common.model, IDENTITY_TOL)?;
    let model = &loaded.file.model;
    let params = RiskParams::new(a.theta1, a.theta2, a.theta_bound.unwrap_or(f64::INFINITY), a.alpha)?;
    let spec = IterSpec {
        max_rounds: a.max_rounds,
        tol_policy: a.tol_policy,
        tol_gap: a.tol_gap,
        strict_arat: a.strict_arat,
        polish: true,
        grid: grid(a.grid),
    };
    let sol = solve_nash_discounted(model, &params, &spec)?;
    let report = DiscountedReport {
        certified: sol.certified,
        strict_arat: sol.strict_arat,
        source: sol.source,
        rounds: sol.rounds,
        gaps: sol.gaps,
        values: [sol.curves[0].top(), sol.curves[1].top()],
        p1: &sol.p1,
        p2: &sol.p2,
    };
    if let Some(p) = &a.trace_csv {
        write_out(Some(p), &sol.trace_csv())?;
    }
    emit("solve-discounted", &loaded, a, None, &a.common, &report)?;
    Ok(if sol.certified { Outcome::Done } else { Outcome::NotCertified })
}

fn solve_ergodic(a: &SolveErgodicArgs) -> Result<Outcome, Error> {
    let loaded = load(&a.common.model, IDENTITY_TOL)?;
    let model = &loaded.file.model;
    let cert = if a.no_certificate { None } else { loaded.file.lyapunov.as_ref() };
    if cert.is_none() && a.i0 >= model.n_states() {
        return Err(Error::InvalidArgument(format!("reference state {} out of range", a.i0)));
    }
    let spec = ErgodicIterSpec {
        max_rounds: a.max_rounds,
        tol_gap: a.tol_gap,
        ..ErgodicIterSpec::default()
    };
    let sol = match cert {
        Some(c) => solve_nash_ergodic(model, a.theta1, a.theta2, Some(c), &spec)?,
        None => solve_nash_ergodic_at(model, a.theta1, a.theta2, a.i0, &spec)?,
    };
    if let Some(p) = &a.csv {
        write_out(Some(p), &sol.to_csv())?;
    }
    emit("solve-ergodic", &loaded, a, None, &a.common, &sol)?;
    Ok(if sol.certified { Outcome::Done } else { Outcome::NotCertified })
}

/// Without a certificate the reference state is free; relabel so it sits at
/// the solver's default position and map the answer back.
fn solve_nash_ergodic_at(model: &GameModel, t1: f64, t2: f64, i0: usize, spec: &ErgodicIterSpec) -> Result<crate::ergodic::ErgodicSolution, Error> {
    let mut sol = solve_nash_ergodic(model, t1, t2, None, spec)?;
    if i0 != 0 {
        for psi in sol.psi.iter_mut() {
            let scale = psi[i0];
            psi.iter_mut().for_each(|v| *v /= scale);
        }
        sol.i0 = i0;
    }
    Ok(sol)
}

#[derive(Serialize)]
struct DiscountedBestResponse<'a> {
    player: Player,
    theta: f64,
    alpha: f64,
    /// `psi(theta, i)` at the top node.
    value: &'a [f64],
    max_grid_residual: f64,
    policy: &'a crate::EventuallyStationaryPolicy,
}

fn best_response(a: &BestResponseArgs) -> Result<Outcome, Error> {
    let loaded = load(&a.common.model, IDENTITY_TOL)?;
    let model = &loaded.file.model;
    let me = player(a.player);
    let profile = a.profile.as_deref().map(load_profile).transpose()?;
    let opp = opponent(model, profile.as_ref(), me);
    match a.criterion {
        Criterion::Discounted => {
            let alpha = need(a.alpha, "alpha")?;
            let br = best_response_discounted(model, me, &opp, alpha, a.theta, &grid(a.grid), false)?;
            let residual = grid_residuals(model, &br.curve, &opp).into_iter().fold(0.0, f64::max);
            if let Some(p) = &a.csv {
                write_out(Some(p), &br.curve.to_csv())?;
            }
            let report = DiscountedBestResponse {
                player: me,
                theta: a.theta,
                alpha,
                value: br.curve.top(),
                max_grid_residual: residual,
                policy: &br.policy,
            };
            emit("best-response", &loaded, a, None, &a.common, &report)?;
        }
        Criterion::Ergodic => {
            let col = stationary_column(&opp, "the opponent's strategy")?;
            let sol = solve_ergodic_ctmdp(model, me, &col, a.theta, a.i0)?;
            if let Some(p) = &a.csv {
                let mut out = String::from("state,psi,action\n");
                for (i, (v, u)) in sol.psi.iter().zip(&sol.policy).enumerate() {
                    out.push_str(&format!("{i},{},{u}\n", crate::report::fmt_f64(*v)));
                }
                write_out(Some(p), &out)?;
            }
            emit("best-response", &loaded, a, None, &a.common, &sol)?;
        }
    }
    Ok(Outcome::Done)
}

fn probe(a: &ProbeArgs) -> Result<Outcome, Error> {
    let loaded = load(&a.common.model, IDENTITY_TOL)?;
    let model = &loaded.file.model;
    let me = player(a.player);
    let profile = a.profile.as_deref().map(load_profile).transpose()?;
    let col = stationary_column(&opponent(model, profile.as_ref(), me), "the opponent's strategy")?;
    let alphas = a.alphas.clone().unwrap_or_else(default_alphas);
    let trace = vanishing_discount_probe(model, a.theta, me, &col, &alphas, a.grid, a.i0)?;
    if let Some(p) = &a.csv {
        write_out(Some(p), &trace.to_csv())?;
    }
    emit("probe-vanishing-discount", &loaded, a, None, &a.common, &trace)?;
    Ok(Outcome::Done)
}

fn simulate(a: &SimulateArgs) -> Result<Outcome, Error> {
    let loaded = load(&a.common.model, IDENTITY_TOL)?;
    let model = &loaded.file.model;
    let me = player(a.player);
    let profile = a.profile.as_deref().map(load_profile).transpose()?;
    let uniform = |p: Player| Strategy::stationary(vec![MixedAction::uniform(model.n_actions(p)); model.n_states()]);
    let (s1, s2) = match &profile {
        Some(p) => (p.p1.clone(), p.p2.clone()),
        None => (uniform(Player::One), uniform(Player::Two)),
    };
    let stationary = || -> Result<StationaryProfile, Error> {
        Ok(StationaryProfile::new(
            stationary_column(&s1, "player 1's strategy")?,
            stationary_column(&s2, "player 2's strategy")?,
        ))
    };
    let report = match a.functional {
        Functional::Discounted => {
            let alpha = need(a.alpha, "alpha")?;
            let theta = need(a.theta, "theta")?;
            let horizon = a.horizon.unwrap_or(20.0 / alpha);
            let prof = SimProfile::new(&s1, &s2, alpha);
            if let Some(p) = &a.trajectory_csv {
                write_out(Some(p), &sample_path(model, &prof, a.start, horizon, a.seed)?.to_csv())?;
            }
            estimate_discounted_cost(model, &prof, theta, me, a.start, a.paths, horizon, a.seed)?
        }
        Functional::Ergodic => {
            let theta = need(a.theta, "theta")?;
            let horizon = need(a.horizon, "horizon")?;
            let sp = stationary()?;
            if let Some(p) = &a.trajectory_csv {
                let prof = SimProfile::new(&s1, &s2, 1.0);
                write_out(Some(p), &sample_path(model, &prof, a.start, horizon, a.seed)?.to_csv())?;
            }
            estimate_ergodic_cost(model, &sp, theta, me, a.start, a.paths, horizon, a.seed)?
        }
        Functional::Hitting => {
            let target = a
                .target
                .ok_or_else(|| Error::InvalidArgument("--target is required for hitting times".into()))?;
            let delta = need(a.delta, "delta")?;
            let t_cap = need(a.horizon, "horizon")?;
            estimate_hitting_exponential(model, &stationary()?, a.start, target, delta, a.paths, t_cap, a.seed)?
        }
    };
    emit("simulate", &loaded, a, Some(a.seed), &a.common, &report)?;
    Ok(Outcome::Done)
}

#[derive(Serialize)]
struct VerifyReport {
    criterion: Criterion,
    tol_gap: f64,
    certified: bool,
    gaps: [f64; 2],
    /// Profile values: `rho_k` (ergodic) or `J_k(theta_k, .)` (discounted).
    values: serde_json::Value,
    best_values: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    residuals: Option<[f64; 2]>,
}

fn verify(a: &VerifyArgs) -> Result<Outcome, Error> {
    let loaded = load(&a.common.model, IDENTITY_TOL)?;
    let model = &loaded.file.model;
    let profile = load_profile(&a.profile)?;
    let report = match a.criterion {
        Criterion::Ergodic => {
            let tol = a.tol_gap.unwrap_or(1e-6);
            let sp = StationaryProfile::new(
                stationary_column(&profile.p1, "player 1's strategy")?,
                stationary_column(&profile.p2, "player 2's strategy")?,
            );
            let g = nash_gap_ergodic(model, &sp, [a.theta1, a.theta2], a.i0)?;
            VerifyReport {
                criterion: a.criterion,
                tol_gap: tol,
                certified: g.gaps.iter().all(|x| *x <= tol),
                gaps: g.gaps,
                values: json(&g.rho),
                best_values: json(&g.best_rho),
                residuals: Some(g.residuals),
            }
        }
        Criterion::Discounted => {
            let tol = a.tol_gap.unwrap_or(1e-4);
            let alpha = need(a.alpha, "alpha")?;
            let params = RiskParams::new(a.theta1, a.theta2, f64::INFINITY, alpha)?;
            let g = nash_gap_discounted(model, &profile.p1, &profile.p2, &params, &grid(a.grid))?;
            VerifyReport {
                criterion: a.criterion,
                tol_gap: tol,
                certified: g.gaps.iter().all(|x| *x <= tol),
                gaps: g.gaps,
                values: json(&g.values),
                best_values: json(&g.best_values),
                residuals: None,
            }
        }
    };
    emit("verify-nash", &loaded, a, None, &a.common, &report)?;
    Ok(if report.certified { Outcome::Done } else { Outcome::NotCertified })
}

fn threads(c: &Command) -> usize {
    match c {
        Command::Validate(a) => a.common.threads,
        Command::SolveDiscounted(a) => a.common.threads,
        Command::SolveErgodic(a) => a.common.threads,
        Command::BestResponse(a) => a.common.threads,
        Command::ProbeVanishingDiscount(a) => a.common.threads,
        Command::Simulate(a) => a.common.threads,
        Command::VerifyNash(a) => a.common.threads,
    }
}

fn dispatch(c: &Command) -> Result<Outcome, Error> {
    match c {
        Command::Validate(a) => validate(a),
        Command::SolveDiscounted(a) => solve_discounted(a),
        Command::SolveErgodic(a) => solve_ergodic(a),
        Command::BestResponse(a) => best_response(a),
        Command::ProbeVanishingDiscount(a) => probe(a),
        Command::Simulate(a) => simulate(a),
        Command::VerifyNash(a) => verify(a),
    }
}

/// Parses `argv` (including the program name), runs the command and returns
/// the exit code. Diagnostics go to standard error.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads(&cli.command)).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("rsgame: cannot start thread pool: {e}");
            return 1;
        }
    };
    match pool.install(|| dispatch(&cli.command)) {
        Ok(Outcome::Done) => 0,
        Ok(Outcome::NotCertified) => 2,
        Err(e) => {
            eprintln!("rsgame: {e}");
            1
        }
    }
}
