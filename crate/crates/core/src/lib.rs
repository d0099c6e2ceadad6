//! Solvers for two-player nonzero-sum risk-sensitive stochastic games on
//! finite continuous-time Markov chains.
//!
//! The crate computes discounted and ergodic risk-sensitive values, searches
//! for Nash equilibria of the coupled HJB systems by damped best response
//! with certification through Nash gaps, and cross-checks results with a
//! Monte Carlo simulator of the controlled chain.

pub mod ergodic;
pub mod error;
pub mod generator;
pub mod bimatrix;
pub mod cli;
pub mod model;
pub mod nash_discounted;
pub mod report;
pub mod simulate;
pub mod discounted;

pub use error::{Error, ModelError, Result};
pub use model::{
    load_model, EventuallyStationaryPolicy, GameModel, LyapunovCertificate, MixedAction, Player, RiskParams,
    StationaryProfile, Strategy,
};
