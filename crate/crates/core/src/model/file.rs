//! JSON model files.
//!
//! ```json
//! {
//!   "n_states": 2,
//!   "actions": { "p1": ["low", "high"], "p2": ["wait"] },
//!   "rates": [[[[-1.0], [-2.0]], [[1.0], [2.0]]], [[[1.0], [1.0]], [[-1.0], [-1.0]]]],
//!   "costs": { "p1": [[[0.2], [0.5]], [[1.0], [1.0]]], "p2": [[[0.0], [0.0]], [[0.3], [0.3]]] },
//!   "arat": { "rates1": [i][j][u1], "rates2": [i][j][u2],
//!             "costs1": { "p1": [i][u1], "p2": [i][u1] },
//!             "costs2": { "p1": [i][u2], "p2": [i][u2] } },
//!   "lyapunov": { "W": [1.0, 4.0], "b": 3.0, "delta": 0.5, "C": [0, 1], "i0": 1 }
//! }
//! ```
//!
//! `rates` is indexed `[i][j][u1][u2]`, cost tables `[i][u1][u2]`.

use serde::{Deserialize, Serialize};

use crate::error::ModelError;
use crate::model::{AratDecomposition, CostKernel, GameModel, LyapunovCertificate, Player, RatesKernel, IDENTITY_TOL};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    n_states: usize,
    actions: PerPlayer<Vec<String>>,
    rates: Vec<Vec<Vec<Vec<f64>>>>,
    costs: PerPlayer<Vec<Vec<Vec<f64>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    arat: Option<RawArat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lyapunov: Option<LyapunovCertificate>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PerPlayer<T> {
    p1: T,
    p2: T,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawArat {
    rates1: Vec<Vec<Vec<f64>>>,
    rates2: Vec<Vec<Vec<f64>>>,
    costs1: PerPlayer<Vec<Vec<f64>>>,
    costs2: PerPlayer<Vec<Vec<f64>>>,
}

/// A parsed model together with the optional Lyapunov certificate the file
/// carries.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelFile {
    pub model: GameModel,
    pub lyapunov: Option<LyapunovCertificate>,
}

impl ModelFile {
    pub fn parse(text: &str) -> Result<Self, ModelError> {
        Self::parse_with_tol(text, IDENTITY_TOL)
    }

    pub fn parse_with_tol(text: &str, tol: f64) -> Result<Self, ModelError> {
        let raw: RawModel = serde_json::from_str(text).map_err(|e| ModelError::Parse(e.to_string()))?;
        let n = raw.n_states;
        if n == 0 {
            return Err(ModelError::NoStates);
        }
        let (m1, m2) = (raw.actions.p1.len(), raw.actions.p2.len());
        if m1 == 0 {
            return Err(ModelError::NoActions { player: Player::One });
        }
        if m2 == 0 {
            return Err(ModelError::NoActions { player: Player::Two });
        }

        let mut rates = Vec::with_capacity(n * n * m1 * m2);
        expect_len("rates", n, raw.rates.len(), "[i]")?;
        for (i, row) in raw.rates.iter().enumerate() {
            expect_len("rates", n, row.len(), &format!("[{i}]"))?;
            for (j, block) in row.iter().enumerate() {
                expect_len("rates", m1, block.len(), &format!("[{i}][{j}]"))?;
                for (u1, line) in block.iter().enumerate() {
                    expect_len("rates", m2, line.len(), &format!("[{i}][{j}][{u1}]"))?;
                    rates.extend_from_slice(line);
                }
            }
        }
        let rates = RatesKernel::new(n, m1, m2, rates, tol)?;

        let flat_costs = |player: Player, table: &Vec<Vec<Vec<f64>>>| -> Result<CostKernel, ModelError> {
            let field = "costs";
            expect_len(field, n, table.len(), &format!("p{player}"))?;
            let mut flat = Vec::with_capacity(n * m1 * m2);
            for (i, block) in table.iter().enumerate() {
                expect_len(field, m1, block.len(), &format!("p{player}[{i}]"))?;
                for (u1, line) in block.iter().enumerate() {
                    expect_len(field, m2, line.len(), &format!("p{player}[{i}][{u1}]"))?;
                    flat.extend_from_slice(line);
                }
            }
            CostKernel::new(player, n, m1, m2, flat)
        };
        let costs = [
            flat_costs(Player::One, &raw.costs.p1)?,
            flat_costs(Player::Two, &raw.costs.p2)?,
        ];

        let arat = match raw.arat {
            None => None,
            Some(a) => {
                check_cube("arat.rates1", &a.rates1, n, n, m1)?;
                check_cube("arat.rates2", &a.rates2, n, n, m2)?;
                for (field, t, m) in [
                    ("arat.costs1.p1", &a.costs1.p1, m1),
                    ("arat.costs1.p2", &a.costs1.p2, m1),
                    ("arat.costs2.p1", &a.costs2.p1, m2),
                    ("arat.costs2.p2", &a.costs2.p2, m2),
                ] {
                    check_matrix(field, t, n, m)?;
                }
                Some(AratDecomposition {
                    rates1: a.rates1,
                    rates2: a.rates2,
                    costs_by_p1: [a.costs1.p1, a.costs1.p2],
                    costs_by_p2: [a.costs2.p1, a.costs2.p2],
                })
            }
        };

        let model = GameModel::new([raw.actions.p1, raw.actions.p2], rates, costs, arat, tol)?;
        if let Some(cert) = &raw.lyapunov {
            cert.validate(n)?;
        }
        Ok(ModelFile {
            model,
            lyapunov: raw.lyapunov,
        })
    }
}

/// Parses and validates a model file.
pub fn load_model(text: &str) -> Result<GameModel, ModelError> {
    ModelFile::parse(text).map(|f| f.model)
}

pub fn load_model_with_tol(text: &str, tol: f64) -> Result<GameModel, ModelError> {
    ModelFile::parse_with_tol(text, tol).map(|f| f.model)
}

/// Serialises a model back into the file schema.
pub fn model_to_json(model: &GameModel, lyapunov: Option<&LyapunovCertificate>) -> String {
    let (n, m1, m2) = model.dims();
    let rates = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..m1).map(|u1| (0..m2).map(|u2| model.rates().get(i, j, u1, u2)).collect()).collect())
                .collect()
        })
        .collect();
    let cost_table = |p: Player| -> Vec<Vec<Vec<f64>>> {
        (0..n)
            .map(|i| (0..m1).map(|u1| (0..m2).map(|u2| model.cost(p).get(i, u1, u2)).collect()).collect())
            .collect()
    };
    let raw = RawModel {
        n_states: n,
        actions: PerPlayer {
            p1: model.action_labels(Player::One).to_vec(),
            p2: model.action_labels(Player::Two).to_vec(),
        },
        rates,
        costs: PerPlayer {
            p1: cost_table(Player::One),
            p2: cost_table(Player::Two),
        },
        arat: model.arat().map(|a| RawArat {
            rates1: a.rates1.clone(),
            rates2: a.rates2.clone(),
            costs1: PerPlayer {
                p1: a.costs_by_p1[0].clone(),
                p2: a.costs_by_p1[1].clone(),
            },
            costs2: PerPlayer {
                p1: a.costs_by_p2[0].clone(),
                p2: a.costs_by_p2[1].clone(),
            },
        }),
        lyapunov: lyapunov.cloned(),
    };
    serde_json::to_string_pretty(&raw).expect("model serialisation cannot fail")
}

fn expect_len(field: &'static str, expected: usize, found: usize, location: &str) -> Result<(), ModelError> {
    if expected != found {
        return Err(ModelError::Shape {
            field,
            expected,
            found,
            location: location.to_string(),
        });
    }
    Ok(())
}

fn check_matrix(field: &'static str, t: &[Vec<f64>], rows: usize, cols: usize) -> Result<(), ModelError> {
    expect_len(field, rows, t.len(), "outer")?;
    for (i, r) in t.iter().enumerate() {
        expect_len(field, cols, r.len(), &format!("[{i}]"))?;
    }
    Ok(())
}

fn check_cube(field: &'static str, t: &[Vec<Vec<f64>>], a: usize, b: usize, c: usize) -> Result<(), ModelError> {
    expect_len(field, a, t.len(), "outer")?;
    for (i, m) in t.iter().enumerate() {
        expect_len(field, b, m.len(), &format!("[{i}]"))?;
        for (j, r) in m.iter().enumerate() {
            expect_len(field, c, r.len(), &format!("[{i}][{j}]"))?;
        }
    }
    Ok(())
}
