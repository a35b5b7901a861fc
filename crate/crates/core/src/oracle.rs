//! Linear-optimization oracles for the plug-in problem `min_{z in Z} t'z`.
//!
//! Every oracle returns the minimizer together with its value and breaks ties
//! deterministically, so that identical inputs give bit-identical decisions.
//! Negative costs are valid everywhere: the perturbed arguments `t - h*y`
//! built by the surrogate losses routinely leave the positive orthant.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{dot, norm};

/// Feasible-region descriptor.
///
/// Grid arcs are numbered with right-going arcs first (row-major), then
/// down-going arcs (column-major). For the 5x5 grid that is arcs `0..20`
/// for right moves and `20..40` for down moves.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum OracleSpec {
    /// `{0, 1}^dim`.
    Binary { dim: usize },
    /// `[-1, 1]`.
    Interval,
    /// Monotone (right/down) paths from the top-left to the bottom-right
    /// node of a `side x side` grid.
    GridPath { side: usize },
    /// `{z : 0 <= z_j <= cap, sum z_j = 1}`.
    CappedSimplex { dim: usize, cap: f64 },
    /// An explicit list of extreme points.
    Enumerated { points: Vec<Vec<f64>> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleSolution {
    pub decision: Vec<f64>,
    pub value: f64,
}

impl OracleSolution {
    fn from_decision(t: &[f64], decision: Vec<f64>) -> Self {
        let value = dot(t, &decision);
        OracleSolution { decision, value }
    }
}

impl OracleSpec {
    pub fn binary() -> Self {
        OracleSpec::Binary { dim: 1 }
    }

    /// The 5x5 grid used by the shortest-path experiments (40 arcs).
    pub fn grid5() -> Self {
        OracleSpec::GridPath { side: 5 }
    }

    pub fn capped_simplex(dim: usize, cap: f64) -> Result<Self> {
        let spec = OracleSpec::CappedSimplex { dim, cap };
        spec.validate()?;
        Ok(spec)
    }

    pub fn enumerated(points: Vec<Vec<f64>>) -> Result<Self> {
        let spec = OracleSpec::Enumerated { points };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            OracleSpec::Binary { dim } if *dim == 0 => {
                Err(Error::InvalidParameter("binary oracle needs dim >= 1".into()))
            }
            OracleSpec::GridPath { side } if *side < 2 => {
                Err(Error::InvalidParameter(format!("grid side must be >= 2, got {side}")))
            }
            OracleSpec::CappedSimplex { dim, cap } => {
                if !(*cap > 0.0 && *cap <= 1.0) {
                    return Err(Error::InvalidParameter(format!(
                        "simplex cap must lie in (0, 1], got {cap}"
                    )));
                }
                if (*dim as f64) * cap < 1.0 {
                    return Err(Error::Infeasible(format!(
                        "capped simplex with dim {dim} and cap {cap} has no feasible point"
                    )));
                }
                Ok(())
            }
            OracleSpec::Enumerated { points } => {
                let first = points.first().ok_or(Error::EmptyPointList)?;
                if first.is_empty() {
                    return Err(Error::InvalidParameter("zero-dimensional point".into()));
                }
                for p in points {
                    if p.len() != first.len() {
                        return Err(Error::DimensionMismatch {
                            expected: first.len(),
                            got: p.len(),
                        });
                    }
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Dimension of the decision (and cost) vectors.
    pub fn dim(&self) -> usize {
        match self {
            OracleSpec::Binary { dim } => *dim,
            OracleSpec::Interval => 1,
            OracleSpec::GridPath { side } => grid_arc_count(*side),
            OracleSpec::CappedSimplex { dim, .. } => *dim,
            OracleSpec::Enumerated { points } => points.first().map_or(0, Vec::len),
        }
    }

    pub fn solve(&self, t: &[f64]) -> Result<OracleSolution> {
        check_cost(t, self.dim())?;
        let decision = match self {
            OracleSpec::Binary { .. } => binary_decision(t),
            OracleSpec::Interval => vec![interval_decision(t[0])],
            OracleSpec::GridPath { side } => grid_path_decision(*side, t),
            OracleSpec::CappedSimplex { cap, .. } => capped_simplex_decision(t, *cap)?,
            OracleSpec::Enumerated { points } => enumerated_decision(points, t)?,
        };
        Ok(OracleSolution::from_decision(t, decision))
    }

    /// Plug-in value `V(t)`.
    pub fn value(&self, t: &[f64]) -> Result<f64> {
        self.solve(t).map(|s| s.value)
    }

    /// `B = max_{z in Z} ||z||`.
    pub fn diameter_bound(&self) -> f64 {
        match self {
            OracleSpec::Binary { dim } => (*dim as f64).sqrt(),
            OracleSpec::Interval => 1.0,
            OracleSpec::GridPath { side } => ((2 * (side - 1)) as f64).sqrt(),
            OracleSpec::CappedSimplex { dim, cap } => {
                let (full, rest) = simplex_fill_pattern(*dim, *cap);
                (full as f64 * cap * cap + rest * rest).sqrt()
            }
            OracleSpec::Enumerated { points } => points.iter().map(|p| norm(p)).fold(0.0, f64::max),
        }
    }

    /// Feasibility of `z`: exact for combinatorial regions, 1e-9 otherwise.
    pub fn is_feasible(&self, z: &[f64]) -> bool {
        if z.len() != self.dim() {
            return false;
        }
        match self {
            OracleSpec::Binary { .. } => z.iter().all(|&v| v == 0.0 || v == 1.0),
            OracleSpec::Interval => (-1.0 - 1e-9..=1.0 + 1e-9).contains(&z[0]),
            OracleSpec::GridPath { side } => is_monotone_path(*side, z),
            OracleSpec::CappedSimplex { cap, .. } => {
                let sum: f64 = z.iter().sum();
                (sum - 1.0).abs() <= 1e-9 && z.iter().all(|&v| v >= -1e-9 && v <= cap + 1e-9)
            }
            OracleSpec::Enumerated { points } => points.iter().any(|p| p.as_slice() == z),
        }
    }
}

fn check_cost(t: &[f64], dim: usize) -> Result<()> {
    if t.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: t.len(),
        });
    }
    if let Some((index, &value)) = t.iter().enumerate().find(|(_, v)| !v.is_finite()) {
        return Err(Error::NonFinite { index, value });
    }
    Ok(())
}

/// `Z = {0,1}^d`; a zero cost keeps the coordinate at 0.
pub fn solve_binary(t: &[f64]) -> Result<OracleSolution> {
    OracleSpec::Binary { dim: t.len().max(1) }.solve(t)
}

/// `Z = [-1, 1]`: `z = -sign(t)`, with `z = -1` at `t = 0`.
pub fn solve_interval(t: &[f64]) -> Result<OracleSolution> {
    OracleSpec::Interval.solve(t)
}

/// Shortest monotone path on the 5x5 grid.
pub fn solve_grid_path(t: &[f64]) -> Result<OracleSolution> {
    OracleSpec::grid5().solve(t)
}

pub fn solve_capped_simplex(t: &[f64], cap: f64) -> Result<OracleSolution> {
    OracleSpec::capped_simplex(t.len(), cap)?.solve(t)
}

pub fn solve_enumerated(points: &[Vec<f64>], t: &[f64]) -> Result<OracleSolution> {
    let dim = points.first().ok_or(Error::EmptyPointList)?.len();
    check_cost(t, dim)?;
    let decision = enumerated_decision(points, t)?;
    Ok(OracleSolution::from_decision(t, decision))
}

fn binary_decision(t: &[f64]) -> Vec<f64> {
    t.iter().map(|&c| if c < 0.0 { 1.0 } else { 0.0 }).collect()
}

fn interval_decision(t: f64) -> f64 {
    if t < 0.0 {
        1.0
    } else {
        -1.0
    }
}

fn enumerated_decision(points: &[Vec<f64>], t: &[f64]) -> Result<Vec<f64>> {
    let mut best: Option<(&Vec<f64>, f64)> = None;
    for p in points {
        if p.len() != t.len() {
            return Err(Error::DimensionMismatch {
                expected: t.len(),
                got: p.len(),
            });
        }
        let v = dot(t, p);
        // strict comparison: the first index wins ties
        if best.is_none_or(|(_, bv)| v < bv) {
            best = Some((p, v));
        }
    }
    best.map(|(p, _)| p.clone()).ok_or(Error::EmptyPointList)
}

// ---- grid paths ----

pub fn grid_arc_count(side: usize) -> usize {
    2 * side * (side - 1)
}

/// Index of the arc `(row, col) -> (row, col + 1)`.
pub fn right_arc(side: usize, row: usize, col: usize) -> usize {
    debug_assert!(row < side && col + 1 < side);
    row * (side - 1) + col
}

/// Index of the arc `(row, col) -> (row + 1, col)`.
pub fn down_arc(side: usize, row: usize, col: usize) -> usize {
    debug_assert!(row + 1 < side && col < side);
    side * (side - 1) + col * (side - 1) + row
}

/// Backward dynamic program over the grid DAG. At equal cost-to-go the
/// right arc is preferred.
fn grid_path_decision(side: usize, t: &[f64]) -> Vec<f64> {
    let last = side - 1;
    let mut cost_to_go = vec![0.0f64; side * side];
    let mut go_right = vec![false; side * side];
    for row in (0..side).rev() {
        for col in (0..side).rev() {
            let node = row * side + col;
            if row == last && col == last {
                continue;
            }
            let via_right = (col < last).then(|| t[right_arc(side, row, col)] + cost_to_go[node + 1]);
            let via_down = (row < last).then(|| t[down_arc(side, row, col)] + cost_to_go[node + side]);
            let (cost, right) = match (via_right, via_down) {
                (Some(r), Some(d)) => {
                    if r <= d {
                        (r, true)
                    } else {
                        (d, false)
                    }
                }
                (Some(r), None) => (r, true),
                (None, Some(d)) => (d, false),
                (None, None) => unreachable!(),
            };
            cost_to_go[node] = cost;
            go_right[node] = right;
        }
    }

    let mut z = vec![0.0; grid_arc_count(side)];
    let (mut row, mut col) = (0, 0);
    while row != last || col != last {
        if go_right[row * side + col] {
            z[right_arc(side, row, col)] = 1.0;
            col += 1;
        } else {
            z[down_arc(side, row, col)] = 1.0;
            row += 1;
        }
    }
    z
}

fn is_monotone_path(side: usize, z: &[f64]) -> bool {
    if !z.iter().all(|&v| v == 0.0 || v == 1.0) {
        return false;
    }
    let last = side - 1;
    let (mut row, mut col) = (0, 0);
    let mut used = 0;
    while row != last || col != last {
        let right = col < last && z[right_arc(side, row, col)] == 1.0;
        let down = row < last && z[down_arc(side, row, col)] == 1.0;
        match (right, down) {
            (true, false) => col += 1,
            (false, true) => row += 1,
            _ => return false,
        }
        used += 1;
    }
    let active = z.iter().filter(|&&v| v == 1.0).count();
    active == used
}

/// Incidence vectors of all monotone paths, in lexicographic order of their
/// move sequences (right before down).
pub fn monotone_paths(side: usize) -> Vec<Vec<f64>> {
    fn walk(side: usize, row: usize, col: usize, z: &mut Vec<f64>, out: &mut Vec<Vec<f64>>) {
        let last = side - 1;
        if row == last && col == last {
            out.push(z.clone());
            return;
        }
        if col < last {
            let a = right_arc(side, row, col);
            z[a] = 1.0;
            walk(side, row, col + 1, z, out);
            z[a] = 0.0;
        }
        if row < last {
            let a = down_arc(side, row, col);
            z[a] = 1.0;
            walk(side, row + 1, col, z, out);
            z[a] = 0.0;
        }
    }
    let mut out = Vec::new();
    walk(side, 0, 0, &mut vec![0.0; grid_arc_count(side)], &mut out);
    out
}

// ---- capped simplex ----

/// Number of coordinates at the cap and the leftover mass of a vertex.
fn simplex_fill_pattern(dim: usize, cap: f64) -> (usize, f64) {
    let full = (((1.0 + 1e-12) / cap).floor() as usize).min(dim);
    let rest = (1.0 - full as f64 * cap).max(0.0);
    (full, if rest < 1e-12 { 0.0 } else { rest })
}

/// Greedy fill in order of increasing `(cost, index)`.
fn capped_simplex_decision(t: &[f64], cap: f64) -> Result<Vec<f64>> {
    if !(cap > 0.0 && cap <= 1.0) || (t.len() as f64) * cap < 1.0 {
        return Err(Error::Infeasible(format!(
            "capped simplex with dim {} and cap {cap}",
            t.len()
        )));
    }
    let mut order: Vec<usize> = (0..t.len()).collect();
    order.sort_by(|&a, &b| t[a].total_cmp(&t[b]).then(a.cmp(&b)));
    let (full, rest) = simplex_fill_pattern(t.len(), cap);
    let mut z = vec![0.0; t.len()];
    for &i in &order[..full] {
        z[i] = cap;
    }
    if rest > 0.0 {
        z[order[full]] = rest;
    }
    Ok(z)
}
