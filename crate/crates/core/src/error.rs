use thiserror::Error;

use crate::model::Player;

/// Failures raised while ingesting or validating a model file.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("malformed model text: {0}")]
    Parse(String),
    #[error("model must have at least one state")]
    NoStates,
    #[error("player {player} has an empty action list")]
    NoActions { player: Player },
    #[error("shape mismatch in {field}: expected {expected} entries, found {found} at {location}")]
    Shape {
        field: &'static str,
        expected: usize,
        found: usize,
        location: String,
    },
    #[error("non-finite value in {field} at {location}")]
    NonFinite { field: &'static str, location: String },
    #[error("negative off-diagonal rate {value} at (i={i}, j={j}, u1={u1}, u2={u2})")]
    NegativeRate {
        i: usize,
        j: usize,
        u1: usize,
        u2: usize,
        value: f64,
    },
    #[error("non-conservative row at (i={i}, u1={u1}, u2={u2}): row sum {sum}")]
    NonConservativeRow {
        i: usize,
        u1: usize,
        u2: usize,
        sum: f64,
    },
    #[error("negative cost {value} for player {player} at (i={i}, u1={u1}, u2={u2})")]
    NegativeCost {
        player: Player,
        i: usize,
        u1: usize,
        u2: usize,
        value: f64,
    },
    #[error("ARAT block does not reassemble {field} at {location}: mismatch {mismatch}")]
    AratMismatch {
        field: &'static str,
        location: String,
        mismatch: f64,
    },
    #[error("invalid Lyapunov certificate: {0}")]
    Certificate(String),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("dimension mismatch in {what}: expected {expected}, got {got}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{what} did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence {
        what: &'static str,
        iterations: usize,
        residual: f64,
    },
    #[error(
        "value envelope violated at theta={theta}, state {state}: psi={value} outside [1, {upper}]; step size too coarse"
    )]
    EnvelopeViolation {
        theta: f64,
        state: usize,
        value: f64,
        upper: f64,
    },
    #[error("chain is reducible: state {to} is not reachable from state {from}")]
    Reducible { from: usize, to: usize },
    #[error("policy iteration cycled and the pure policy space ({size}) is too large to enumerate")]
    PolicyCycle { size: u128 },
    #[error("assumption {assumption} does not hold: {detail}")]
    Assumption {
        assumption: &'static str,
        detail: String,
    },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
