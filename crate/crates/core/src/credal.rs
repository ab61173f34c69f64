//! Finitely generated credal sets over a finite state space: probability
//! vectors constrained by expectation bounds, together with an explicit list
//! of extreme points. Dominance checks only ever consume the extreme points;
//! closed-form families attach them directly and exact vertex enumeration
//! covers small constraint-form sets.

use crate::error::{Error, Result};
use crate::lp::EPS_FEAS;

/// Tolerance for merging duplicate vertices produced by degenerate bases.
const VERTEX_MERGE_EPS: f64 = 1e-7;

/// A finite, indexed state space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateSpace {
    names: Vec<String>,
}

impl StateSpace {
    pub fn new(names: Vec<String>) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::InvalidInput("state space is empty".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for n in &names {
            if !seen.insert(n.as_str()) {
                return Err(Error::InvalidInput(format!("duplicate state name {n:?}")));
            }
        }
        Ok(StateSpace { names })
    }

    /// A state space `s1, ..., sm`.
    pub fn of_size(m: usize) -> Result<Self> {
        StateSpace::new((1..=m).map(|i| format!("s{i}")).collect())
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}

/// One generating constraint `lo <= E_pi(f) <= hi` with `f` given pointwise.
#[derive(Debug, Clone)]
pub struct ExpectationBound {
    pub coeffs: Vec<f64>,
    pub lo: f64,
    pub hi: f64,
}

/// Size guard for exact vertex enumeration.
#[derive(Debug, Clone, Copy)]
pub struct EnumerationGuard {
    pub max_states: usize,
    pub max_constraints: usize,
}

impl Default for EnumerationGuard {
    fn default() -> Self {
        EnumerationGuard {
            max_states: 8,
            max_constraints: 24,
        }
    }
}

/// A credal set in expectation-constraint form plus extreme points.
#[derive(Debug, Clone)]
pub struct CredalSet {
    space: StateSpace,
    constraints: Vec<ExpectationBound>,
    extreme_points: Vec<Vec<f64>>,
}

impl CredalSet {
    /// The family of probability vectors with ordered components
    /// `pi_1 >= pi_2 >= ... >= pi_m`, with its m closed-form extreme points
    /// attached: the k-th point is uniform on the first k states.
    pub fn ordered_family(space: StateSpace) -> CredalSet {
        let m = space.len();
        let mut constraints = Vec::with_capacity(m.saturating_sub(1));
        for j in 0..m.saturating_sub(1) {
            let mut coeffs = vec![0.0; m];
            coeffs[j] = 1.0;
            coeffs[j + 1] = -1.0;
            constraints.push(ExpectationBound {
                coeffs,
                lo: 0.0,
                hi: 1.0,
            });
        }
        let extreme_points = (1..=m)
            .map(|k| {
                (0..m)
                    .map(|j| if j < k { 1.0 / k as f64 } else { 0.0 })
                    .collect()
            })
            .collect();
        CredalSet {
            space,
            constraints,
            extreme_points,
        }
    }

    /// The set of all probability measures: no constraints, Dirac extreme
    /// points.
    pub fn full_simplex(space: StateSpace) -> CredalSet {
        let m = space.len();
        let extreme_points = (0..m)
            .map(|k| (0..m).map(|j| if j == k { 1.0 } else { 0.0 }).collect())
            .collect();
        CredalSet {
            space,
            constraints: Vec::new(),
            extreme_points,
        }
    }

    /// Constraint-form credal set without extreme points attached; call
    /// [`CredalSet::with_enumerated_points`] to compute them.
    pub fn from_constraints(
        space: StateSpace,
        constraints: Vec<ExpectationBound>,
    ) -> Result<CredalSet> {
        let m = space.len();
        for (l, b) in constraints.iter().enumerate() {
            if b.coeffs.len() != m {
                return Err(Error::InvalidInput(format!(
                    "constraint {l} has {} coefficients, expected {m}",
                    b.coeffs.len()
                )));
            }
            if !b.lo.is_finite() || !b.hi.is_finite() || b.coeffs.iter().any(|c| !c.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "constraint {l} contains non-finite values"
                )));
            }
            if b.lo > b.hi {
                return Err(Error::InvalidInput(format!(
                    "constraint {l} has lo {} > hi {}",
                    b.lo, b.hi
                )));
            }
        }
        Ok(CredalSet {
            space,
            constraints,
            extreme_points: Vec::new(),
        })
    }

    /// Credal set given directly by its extreme points (the usual route when
    /// a closed form is known). Points are validated as probability vectors;
    /// any constraints provided are checked against every point.
    pub fn from_extreme_points(
        space: StateSpace,
        constraints: Vec<ExpectationBound>,
        points: Vec<Vec<f64>>,
    ) -> Result<CredalSet> {
        let cs = CredalSet::from_constraints(space, constraints)?;
        let cs = CredalSet {
            extreme_points: points,
            ..cs
        };
        cs.validate_points()?;
        Ok(cs)
    }

    fn validate_points(&self) -> Result<()> {
        if self.extreme_points.is_empty() {
            return Err(Error::NoExtremePoints);
        }
        let m = self.space.len();
        for (k, p) in self.extreme_points.iter().enumerate() {
            if p.len() != m {
                return Err(Error::InvalidInput(format!(
                    "extreme point {k} has length {}, expected {m}",
                    p.len()
                )));
            }
            if p.iter().any(|&x| !x.is_finite() || x < -EPS_FEAS) {
                return Err(Error::InvalidInput(format!(
                    "extreme point {k} has a negative or non-finite component"
                )));
            }
            let sum: f64 = p.iter().sum();
            if (sum - 1.0).abs() > EPS_FEAS {
                return Err(Error::InvalidInput(format!(
                    "extreme point {k} sums to {sum}, expected 1"
                )));
            }
            for (l, b) in self.constraints.iter().enumerate() {
                let e: f64 = b.coeffs.iter().zip(p).map(|(c, x)| c * x).sum();
                if e < b.lo - EPS_FEAS || e > b.hi + EPS_FEAS {
                    return Err(Error::InvalidInput(format!(
                        "extreme point {k} violates constraint {l}: E = {e}, bounds [{}, {}]",
                        b.lo, b.hi
                    )));
                }
            }
        }
        Ok(())
    }

    /// Attach exactly enumerated extreme points to a constraint-form set.
    pub fn with_enumerated_points(self, guard: &EnumerationGuard) -> Result<CredalSet> {
        let points = enumerate_extreme_points(&self, guard)?;
        Ok(CredalSet {
            extreme_points: points,
            ..self
        })
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn constraints(&self) -> &[ExpectationBound] {
        &self.constraints
    }

    pub fn extreme_points(&self) -> &[Vec<f64>] {
        &self.extreme_points
    }

    /// True when every extreme point puts strictly positive mass on every
    /// state. Reported because the sharper undominated-versus-Pareto
    /// inclusion is only guaranteed under this hypothesis.
    pub fn strictly_positive(&self) -> bool {
        !self.extreme_points.is_empty()
            && self
                .extreme_points
                .iter()
                .all(|p| p.iter().all(|&x| x > 0.0))
    }
}

/// Exact vertex set of `{pi >= 0, sum pi = 1, lo <= f.pi <= hi}` by
/// enumerating basic feasible solutions: every choice of `m - 1` active
/// facets from the pool (component zeros plus saturated bounds) yields a
/// square linear system; feasible, distinct solutions are the vertices.
pub fn enumerate_extreme_points(
    cs: &CredalSet,
    guard: &EnumerationGuard,
) -> Result<Vec<Vec<f64>>> {
    let m = cs.space.len();
    if m > guard.max_states || cs.constraints.len() > guard.max_constraints {
        return Err(Error::TooLargeForEnumeration {
            states: m,
            constraints: cs.constraints.len(),
            max_states: guard.max_states,
            max_constraints: guard.max_constraints,
        });
    }

    // Facet rows as (coeffs, rhs), active means coeffs . pi = rhs.
    // Equality-pinned constraints (lo == hi) are always active.
    let mut mandatory: Vec<(Vec<f64>, f64)> = Vec::new();
    let mut pool: Vec<(Vec<f64>, f64)> = Vec::new();
    for i in 0..m {
        let mut row = vec![0.0; m];
        row[i] = 1.0;
        pool.push((row, 0.0));
    }
    for b in &cs.constraints {
        if b.lo == b.hi {
            mandatory.push((b.coeffs.clone(), b.lo));
        } else {
            pool.push((b.coeffs.clone(), b.lo));
            pool.push((b.coeffs.clone(), b.hi));
        }
    }

    if mandatory.len() >= m {
        // Over-determined equality block; fall through with zero free picks.
        mandatory.truncate(m - 1);
    }
    let picks = m - 1 - mandatory.len();

    let mut points: Vec<Vec<f64>> = Vec::new();
    let mut combo: Vec<usize> = (0..picks).collect();
    loop {
        // Assemble the square system: sum row, mandatory rows, chosen facets.
        let mut a: Vec<Vec<f64>> = Vec::with_capacity(m);
        let mut b: Vec<f64> = Vec::with_capacity(m);
        a.push(vec![1.0; m]);
        b.push(1.0);
        for (row, rhs) in &mandatory {
            a.push(row.clone());
            b.push(*rhs);
        }
        for &idx in &combo {
            a.push(pool[idx].0.clone());
            b.push(pool[idx].1);
        }
        if let Some(x) = solve_square(&mut a, &mut b) {
            if is_feasible(cs, &x)
                && !points
                    .iter()
                    .any(|p| inf_norm_diff(p, &x) < VERTEX_MERGE_EPS)
            {
                points.push(x);
            }
        }
        if !next_combination(&mut combo, pool.len()) {
            break;
        }
    }

    if points.is_empty() {
        return Err(Error::InfeasibleCredal);
    }
    points.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(points)
}

/// Advance `combo` to the next k-subset of `0..pool` in lexicographic order.
fn next_combination(combo: &mut [usize], pool: usize) -> bool {
    let k = combo.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if combo[i] < pool - k + i {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn inf_norm_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn is_feasible(cs: &CredalSet, x: &[f64]) -> bool {
    if x.iter().any(|&v| v < -EPS_FEAS) {
        return false;
    }
    let sum: f64 = x.iter().sum();
    if (sum - 1.0).abs() > EPS_FEAS {
        return false;
    }
    cs.constraints.iter().all(|b| {
        let e: f64 = b.coeffs.iter().zip(x).map(|(c, v)| c * v).sum();
        e >= b.lo - EPS_FEAS && e <= b.hi + EPS_FEAS
    })
}

/// Gaussian elimination with partial pivoting; `None` on singular systems.
fn solve_square(a: &mut [Vec<f64>], b: &mut [f64]) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| {
            a[i][col]
                .abs()
                .partial_cmp(&a[j][col].abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if a[pivot][col].abs() < 1e-11 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        let pivot_row = a[col].clone();
        let pivot_rhs = b[col];
        for row in col + 1..n {
            let factor = a[row][col] / pivot_row[col];
            if factor != 0.0 {
                for (cell, &pv) in a[row].iter_mut().zip(&pivot_row).skip(col) {
                    *cell -= factor * pv;
                }
                b[row] -= factor * pivot_rhs;
            }
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for k in row + 1..n {
            acc -= a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
    }
    Some(x)
}

/// Minimum over the extreme points of the expectation of `g`.
pub fn lower_expectation(cs: &CredalSet, g: &[f64]) -> Result<f64> {
    if g.len() != cs.space.len() {
        return Err(Error::InvalidInput(format!(
            "gamble has length {}, expected {}",
            g.len(),
            cs.space.len()
        )));
    }
    if cs.extreme_points.is_empty() {
        return Err(Error::NoExtremePoints);
    }
    Ok(cs
        .extreme_points
        .iter()
        .map(|p| g.iter().zip(p).map(|(gi, pi)| gi * pi).sum::<f64>())
        .fold(f64::INFINITY, f64::min))
}
