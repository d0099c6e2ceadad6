//! Nash equilibria of finite two-player cost games by support enumeration.
//!
//! Both players minimise: player 1 picks a row distribution `x` to minimise
//! `x' A y`, player 2 a column distribution `y` to minimise `x' B y`.

use nalgebra::{DMatrix, DVector};

use crate::model::{GameModel, MixedAction, Player};

const TOL: f64 = 1e-10;

/// Dense cost matrix, `rows x cols`, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CostMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl CostMatrix {
    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let data = (0..rows).flat_map(|r| (0..cols).map(move |c| (r, c))).map(|(r, c)| f(r, c)).collect();
        CostMatrix { rows, cols, data }
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    pub fn transpose(&self) -> CostMatrix {
        CostMatrix::from_fn(self.cols, self.rows, |r, c| self.get(c, r))
    }

    /// `x' M y`.
    pub fn bilinear(&self, x: &[f64], y: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (r, &xr) in x.iter().enumerate() {
            if xr != 0.0 {
                acc += xr * (0..self.cols).map(|c| self.get(r, c) * y[c]).sum::<f64>();
            }
        }
        acc
    }

    fn row_values(&self, y: &[f64]) -> Vec<f64> {
        (0..self.rows).map(|r| (0..self.cols).map(|c| self.get(r, c) * y[c]).sum()).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Equilibrium {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub cost1: f64,
    pub cost2: f64,
}

/// Largest gain either player can obtain by a unilateral pure deviation.
pub fn bimatrix_gap(a: &CostMatrix, b: &CostMatrix, x: &[f64], y: &[f64]) -> f64 {
    let g1 = a.bilinear(x, y) - a.row_values(y).into_iter().fold(f64::INFINITY, f64::min);
    let bt = b.transpose();
    let g2 = b.bilinear(x, y) - bt.row_values(x).into_iter().fold(f64::INFINITY, f64::min);
    g1.max(g2)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Distribution on `support` (length `cols`) that makes every row in `rows`
/// of `m` equally costly. Returns the distribution and the common value.
fn indifference(m: &CostMatrix, rows: &[usize], support: &[usize]) -> Option<(Vec<f64>, f64)> {
    let k = support.len();
    // unknowns: weights on support, value v
    let mut lhs = DMatrix::<f64>::zeros(k + 1, k + 1);
    let mut rhs = DVector::<f64>::zeros(k + 1);
    for (e, &r) in rows.iter().enumerate() {
        for (s, &c) in support.iter().enumerate() {
            lhs[(e, s)] = m.get(r, c);
        }
        lhs[(e, k)] = -1.0;
    }
    for s in 0..k {
        lhs[(k, s)] = 1.0;
    }
    rhs[k] = 1.0;
    let sol = lhs.lu().solve(&rhs)?;
    if sol.iter().any(|v| !v.is_finite()) {
        return None;
    }
    let mut y = vec![0.0; m.cols];
    for (s, &c) in support.iter().enumerate() {
        if sol[s] < -TOL {
            return None;
        }
        y[c] = sol[s].max(0.0);
    }
    let total: f64 = y.iter().sum();
    y.iter_mut().for_each(|v| *v /= total);
    Some((y, sol[k]))
}

fn best_rows_contain(values: &[f64], support: &[usize]) -> bool {
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let slack = TOL * (1.0 + min.abs());
    support.iter().all(|&r| values[r] <= min + slack)
}

/// All equilibria found by enumerating equal-size support pairs. Every
/// nondegenerate game's equilibria are found; degenerate games always yield
/// at least one equilibrium through [`solve_bimatrix`].
pub fn support_enumeration(a: &CostMatrix, b: &CostMatrix) -> Vec<Equilibrium> {
    assert_eq!((a.rows, a.cols), (b.rows, b.cols), "cost matrices must share a shape");
    let bt = b.transpose();
    let mut out: Vec<Equilibrium> = Vec::new();
    for k in 1..=a.rows.min(a.cols) {
        for rows in subsets(a.rows, k) {
            for cols in subsets(a.cols, k) {
                // y makes player 1 indifferent over `rows`; x makes player 2 indifferent over `cols`
                let Some((y, _)) = indifference(a, &rows, &cols) else { continue };
                let Some((x, _)) = indifference(&bt, &cols, &rows) else { continue };
                if !best_rows_contain(&a.row_values(&y), &rows) || !best_rows_contain(&bt.row_values(&x), &cols) {
                    continue;
                }
                let dup = out.iter().any(|e| {
                    e.x.iter().zip(&x).all(|(p, q)| (p - q).abs() < 1e-9) && e.y.iter().zip(&y).all(|(p, q)| (p - q).abs() < 1e-9)
                });
                if !dup {
                    out.push(Equilibrium {
                        cost1: a.bilinear(&x, &y),
                        cost2: b.bilinear(&x, &y),
                        x,
                        y,
                    });
                }
            }
        }
    }
    out
}

/// Equilibria of `(a, b)`. Degenerate games whose equilibria all escape
/// equal-size supports are retried with a tiny deterministic perturbation;
/// the result is then verified against the original matrices.
pub fn solve_bimatrix(a: &CostMatrix, b: &CostMatrix) -> Vec<Equilibrium> {
    let found = support_enumeration(a, b);
    if !found.is_empty() {
        return found;
    }
    let scale = a.data.iter().chain(&b.data).fold(1.0f64, |s, v| s.max(v.abs()));
    for level in [1e-11, 1e-9, 1e-7] {
        let eps = level * scale;
        let pa = CostMatrix::from_fn(a.rows, a.cols, |r, c| a.get(r, c) + eps * ((r * 7 + c * 3) % 11) as f64 / 11.0);
        let pb = CostMatrix::from_fn(b.rows, b.cols, |r, c| b.get(r, c) + eps * ((r * 5 + c * 9) % 13) as f64 / 13.0);
        let eqs: Vec<Equilibrium> = support_enumeration(&pa, &pb)
            .into_iter()
            .map(|e| Equilibrium {
                cost1: a.bilinear(&e.x, &e.y),
                cost2: b.bilinear(&e.x, &e.y),
                ..e
            })
            .collect();
        if !eqs.is_empty() {
            return eqs;
        }
    }
    Vec::new()
}

/// Stage game at state `i` of the coupled equations: entry `(u1, u2)` of
/// player k's matrix is `Pi_{u1,u2} psi_k(i) + theta_k r_k(i, u1, u2) psi_k(i)`.
pub(crate) fn stage_game(model: &GameModel, i: usize, psi: [&[f64]; 2], theta: [f64; 2]) -> [CostMatrix; 2] {
    let (n, m1, m2) = model.dims();
    Player::BOTH.map(|p| {
        let f = psi[p.index()];
        let c = model.cost(p);
        CostMatrix::from_fn(m1, m2, |u1, u2| {
            let drift: f64 = (0..n).filter(|&j| j != i).map(|j| model.rates().get(i, j, u1, u2) * (f[j] - f[i])).sum();
            drift + theta[p.index()] * c.get(i, u1, u2) * f[i]
        })
    })
}

/// Stage equilibrium closest (sup distance) to a reference pair; the first
/// found wins ties.
pub(crate) fn closest_equilibrium(a: &CostMatrix, b: &CostMatrix, x_ref: &MixedAction, y_ref: &MixedAction) -> Option<(MixedAction, MixedAction)> {
    let eqs = solve_bimatrix(a, b);
    let dist = |e: &Equilibrium| {
        e.x.iter()
            .zip(x_ref.weights())
            .chain(e.y.iter().zip(y_ref.weights()))
            .map(|(p, q)| (p - q).abs())
            .fold(0.0, f64::max)
    };
    let best = eqs.iter().fold(None::<(&Equilibrium, f64)>, |acc, e| {
        let d = dist(e);
        match acc {
            Some((_, bd)) if bd <= d => acc,
            _ => Some((e, d)),
        }
    })?;
    Some((MixedAction::new(best.0.x.clone()).ok()?, MixedAction::new(best.0.y.clone()).ok()?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: usize, cols: usize, v: &[f64]) -> CostMatrix {
        CostMatrix {
            rows,
            cols,
            data: v.to_vec(),
        }
    }

    #[test]
    fn matching_pennies_has_unique_mixed_equilibrium() {
        // player 1 pays when actions match, player 2 when they differ
        let a = m(2, 2, &[1.0, 0.0, 0.0, 1.0]);
        let b = m(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let eqs = solve_bimatrix(&a, &b);
        assert_eq!(eqs.len(), 1);
        let e = &eqs[0];
        for p in e.x.iter().chain(&e.y) {
            assert!((p - 0.5).abs() < 1e-12);
        }
        assert!((e.cost1 - 0.5).abs() < 1e-12 && (e.cost2 - 0.5).abs() < 1e-12);
        assert!(bimatrix_gap(&a, &b, &e.x, &e.y) < 1e-12);
    }

    #[test]
    fn coordination_game_has_three_equilibria() {
        let a = m(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let eqs = solve_bimatrix(&a, &a);
        assert_eq!(eqs.len(), 3);
        assert!(eqs.iter().all(|e| bimatrix_gap(&a, &a, &e.x, &e.y) < 1e-12));
    }

    #[test]
    fn prisoners_dilemma_in_costs() {
        // action 1 (defect) dominates for both
        let a = m(2, 2, &[1.0, 3.0, 0.0, 2.0]);
        let eqs = solve_bimatrix(&a, &a.transpose());
        assert_eq!(eqs.len(), 1);
        assert_eq!(eqs[0].x, vec![0.0, 1.0]);
        assert_eq!(eqs[0].y, vec![0.0, 1.0]);
    }

    #[test]
    fn degenerate_constant_game_yields_something() {
        let z = m(2, 3, &[0.0; 6]);
        let eqs = solve_bimatrix(&z, &z);
        assert!(!eqs.is_empty());
        assert!(eqs.iter().all(|e| bimatrix_gap(&z, &z, &e.x, &e.y) < 1e-12));
    }

    #[test]
    fn rectangular_game() {
        // player 2 has a strictly dominated third column
        let a = m(2, 3, &[1.0, 0.0, 0.5, 0.0, 1.0, 0.5]);
        let b = m(2, 3, &[0.0, 1.0, 5.0, 1.0, 0.0, 5.0]);
        let eqs = solve_bimatrix(&a, &b);
        assert!(!eqs.is_empty());
        for e in &eqs {
            assert!(e.y[2] < 1e-12);
            assert!(bimatrix_gap(&a, &b, &e.x, &e.y) < 1e-10);
        }
    }
}
