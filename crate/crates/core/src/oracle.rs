//! Independent sampling verifier for the LP dominance verdicts: draw utility
//! vectors from the margin-delta polytope by hit-and-run, draw probabilities
//! as convex combinations of the credal extreme points, and hunt for
//! expectation counterexamples. One-sided by nature: a found counterexample
//! refutes dominance outright, while absence of one only corroborates it.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::credal::CredalSet;
use crate::dominance::Act;
use crate::error::{Error, Result};
use crate::lp::{self, LpProblem, LpStatus, EPS_OPT};
use crate::preference::{NablaConstraints, PreferenceSystem, UtilityVector};

/// Default number of walk steps between emitted samples.
pub const DEFAULT_BURN_IN: usize = 100;

/// A feasible utility vector with its minimum constraint slack.
#[derive(Debug, Clone)]
pub struct SampledUtility {
    pub values: UtilityVector,
    pub margin: f64,
}

/// A batch of samples. `degenerate` flags a polytope without interior: the
/// same point is returned for every sample.
#[derive(Debug, Clone)]
pub struct SampleBatch {
    pub samples: Vec<SampledUtility>,
    pub degenerate: bool,
}

/// A witness against a dominance claim: a feasible utility and probability
/// whose expectation gap is negative.
#[derive(Debug, Clone)]
pub struct Counterexample {
    pub utility: Vec<f64>,
    pub probability: Vec<f64>,
    pub gap: f64,
}

/// Hit-and-run walker over the margin-delta polytope of a preference system.
pub struct UtilitySampler {
    nabla: NablaConstraints,
    delta: f64,
    position: Vec<f64>,
    row_values: Vec<f64>,
    basis: Vec<Vec<f64>>,
    burn_in: usize,
    degenerate: bool,
    steps_since_sync: usize,
    rng: ChaCha8Rng,
}

impl UtilitySampler {
    /// Prepare a walker: find an interior starting point by maximizing the
    /// minimum slack (an analytic-center stand-in) and a basis of the
    /// equality null space for directions.
    pub fn new(ps: &PreferenceSystem, delta: f64, seed: u64) -> Result<Self> {
        if !(0.0..1.0).contains(&delta) {
            return Err(Error::DeltaOutOfRange(delta));
        }
        let nabla = ps.nabla_constraints()?;
        let (start, min_slack) = interior_point(&nabla, delta)?;
        let basis = equality_null_space(&nabla);
        let degenerate = basis.is_empty() || min_slack <= 1e-12;
        let row_values = nabla
            .strict_rows()
            .iter()
            .map(|row| row.iter().map(|&(i, c)| c * start[i]).sum())
            .collect();
        Ok(UtilitySampler {
            nabla,
            delta,
            position: start,
            row_values,
            basis,
            burn_in: DEFAULT_BURN_IN,
            degenerate,
            steps_since_sync: 0,
            rng: ChaCha8Rng::seed_from_u64(seed),
        })
    }

    /// Override the number of walk steps between samples.
    pub fn with_burn_in(mut self, burn_in: usize) -> Self {
        self.burn_in = burn_in.max(1);
        self
    }

    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    fn gaussian(&mut self) -> f64 {
        let u1: f64 = self.rng.gen::<f64>().max(1e-300);
        let u2: f64 = self.rng.gen();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    fn step(&mut self) {
        let n = self.nabla.num_vars;
        let mut dir = vec![0.0; n];
        for b in 0..self.basis.len() {
            let z = self.gaussian();
            for (d, &bv) in dir.iter_mut().zip(&self.basis[b]) {
                *d += z * bv;
            }
        }
        let norm: f64 = dir.iter().map(|d| d * d).sum::<f64>().sqrt();
        if norm < 1e-12 {
            return;
        }
        for d in &mut dir {
            *d /= norm;
        }

        let mut lo = f64::NEG_INFINITY;
        let mut hi = f64::INFINITY;
        let row_derivs: Vec<f64> = self
            .nabla
            .strict_rows()
            .iter()
            .map(|row| row.iter().map(|&(i, c)| c * dir[i]).sum())
            .collect();
        for (r, &deriv) in row_derivs.iter().enumerate() {
            let slack = self.row_values[r] - self.delta;
            if deriv < -1e-14 {
                hi = hi.min(slack / -deriv);
            } else if deriv > 1e-14 {
                lo = lo.max(-slack / deriv);
            }
        }
        for (&d, &x) in dir.iter().zip(&self.position) {
            if d > 1e-14 {
                hi = hi.min((1.0 - x) / d);
                lo = lo.max(-x / d);
            } else if d < -1e-14 {
                hi = hi.min(-x / d);
                lo = lo.max((1.0 - x) / d);
            }
        }
        if !(lo.is_finite() && hi.is_finite()) || hi <= lo {
            return;
        }
        // Stay fractionally inside the chord to keep slacks nonnegative
        // under accumulated rounding.
        let shrink = 1e-9 * (hi - lo);
        let (lo, hi) = (lo + shrink, hi - shrink);
        if hi <= lo {
            return;
        }
        let lambda = lo + (hi - lo) * self.rng.gen::<f64>();
        for (x, &d) in self.position.iter_mut().zip(&dir) {
            *x = (*x + lambda * d).clamp(0.0, 1.0);
        }
        self.steps_since_sync += 1;
        if self.steps_since_sync >= 512 {
            self.resync();
        } else {
            for (r, &deriv) in row_derivs.iter().enumerate() {
                self.row_values[r] += lambda * deriv;
            }
        }
    }

    fn resync(&mut self) {
        self.steps_since_sync = 0;
        for (r, row) in self.nabla.strict_rows().iter().enumerate() {
            self.row_values[r] = row.iter().map(|&(i, c)| c * self.position[i]).sum();
        }
    }

    /// Draw `count` samples, walking `burn_in` steps before each one.
    pub fn sample(&mut self, count: usize) -> SampleBatch {
        let mut samples = Vec::with_capacity(count);
        for _ in 0..count {
            if !self.degenerate {
                for _ in 0..self.burn_in {
                    self.step();
                }
                self.resync();
            }
            let margin = self.nabla.slack(&self.position, self.delta).max(0.0);
            samples.push(SampledUtility {
                values: UtilityVector(self.position.clone()),
                margin,
            });
        }
        SampleBatch {
            samples,
            degenerate: self.degenerate,
        }
    }
}

/// Maximize the minimum slack over the strict rows and the box (equality
/// pins excluded); returns the witness and the achieved slack.
fn interior_point(nabla: &NablaConstraints, delta: f64) -> Result<(Vec<f64>, f64)> {
    let n = nabla.num_vars;
    let tvar = n;
    let mut p = LpProblem::boxed(n + 1);
    p.var_bounds[tvar] = (0.0, 0.5);
    p.objective[tvar] = -1.0;
    let mut top_row = vec![0.0; n + 1];
    top_row[nabla.top] = 1.0;
    p.eq_constraints.push((top_row, 1.0));
    let mut bot_row = vec![0.0; n + 1];
    bot_row[nabla.bottom] = 1.0;
    p.eq_constraints.push((bot_row, 0.0));
    for row in nabla.eq_rows() {
        let mut dense = vec![0.0; n + 1];
        for &(i, c) in row {
            dense[i] = c;
        }
        p.eq_constraints.push((dense, 0.0));
    }
    for row in nabla.strict_rows() {
        let mut dense = vec![0.0; n + 1];
        for &(i, c) in row {
            dense[i] = c;
        }
        dense[tvar] = -1.0;
        p.ineq_constraints.push((dense, delta));
    }
    for i in 0..n {
        if i == nabla.top || i == nabla.bottom {
            continue;
        }
        let mut low = vec![0.0; n + 1];
        low[i] = 1.0;
        low[tvar] = -1.0;
        p.ineq_constraints.push((low, 0.0));
        let mut high = vec![0.0; n + 1];
        high[i] = -1.0;
        high[tvar] = -1.0;
        p.ineq_constraints.push((high, -1.0));
    }
    let out = lp::solve(&p)?;
    match out.status {
        LpStatus::Optimal => {
            let slack = -out.value();
            let mut w = out.witness.unwrap();
            w.truncate(n);
            Ok((w, slack))
        }
        LpStatus::Infeasible => Err(Error::DeltaInconsistent(delta)),
        LpStatus::Unbounded => Err(Error::Internal(
            "box-bounded interior-point LP reported unbounded".into(),
        )),
    }
}

/// Dense basis of the null space of the equality block (pins plus equality
/// rows), via reduced row echelon form.
fn equality_null_space(nabla: &NablaConstraints) -> Vec<Vec<f64>> {
    let n = nabla.num_vars;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut pin = vec![0.0; n];
    pin[nabla.top] = 1.0;
    rows.push(pin);
    let mut pin = vec![0.0; n];
    pin[nabla.bottom] = 1.0;
    rows.push(pin);
    for row in nabla.eq_rows() {
        let mut dense = vec![0.0; n];
        for &(i, c) in row {
            dense[i] = c;
        }
        rows.push(dense);
    }

    // Reduced row echelon form.
    let mut pivot_cols = Vec::new();
    let mut rank = 0;
    for col in 0..n {
        let pivot = (rank..rows.len()).max_by(|&a, &b| {
            rows[a][col]
                .abs()
                .partial_cmp(&rows[b][col].abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let Some(pivot) = pivot else { break };
        if rows[pivot][col].abs() < 1e-11 {
            continue;
        }
        rows.swap(rank, pivot);
        let scale = rows[rank][col];
        for v in rows[rank].iter_mut() {
            *v /= scale;
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[col].abs() > 0.0 {
                let factor = row[col];
                for (cell, &pv) in row.iter_mut().zip(&pivot_row) {
                    *cell -= factor * pv;
                }
            }
        }
        pivot_cols.push(col);
        rank += 1;
    }

    let pivot_set: std::collections::HashSet<usize> = pivot_cols.iter().copied().collect();
    let mut basis = Vec::new();
    for free in 0..n {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![0.0; n];
        v[free] = 1.0;
        for (r, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = -rows[r][free];
        }
        basis.push(v);
    }
    basis
}

/// Sample `count` feasible utility vectors from the margin-delta polytope.
pub fn sample_utilities(
    ps: &PreferenceSystem,
    delta: f64,
    count: usize,
    seed: u64,
) -> Result<SampleBatch> {
    Ok(UtilitySampler::new(ps, delta, seed)?.sample(count))
}

/// Search sampled utility/probability pairs for an expectation
/// counterexample to "xi dominates xj". Probabilities are random convex
/// combinations of the extreme points, one per utility sample.
pub fn refute_dominance_with(
    samples: &[SampledUtility],
    cs: &CredalSet,
    xi: &Act,
    xj: &Act,
    seed: u64,
    eps: f64,
) -> Option<Counterexample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = cs.extreme_points();
    let m = cs.space().len();
    for sample in samples {
        let mut weights: Vec<f64> = (0..points.len())
            .map(|_| -rng.gen::<f64>().max(1e-300).ln())
            .collect();
        let total: f64 = weights.iter().sum();
        for w in &mut weights {
            *w /= total;
        }
        let mut pi = vec![0.0; m];
        for (t, point) in points.iter().enumerate() {
            for s in 0..m {
                pi[s] += weights[t] * point[s];
            }
        }
        let u = &sample.values.0;
        let gap: f64 = (0..m)
            .map(|s| pi[s] * (u[xi.outcomes[s]] - u[xj.outcomes[s]]))
            .sum();
        if gap < -eps {
            return Some(Counterexample {
                utility: u.clone(),
                probability: pi,
                gap,
            });
        }
    }
    None
}

/// Convenience wrapper: sample fresh utilities and search for a
/// counterexample to "xi dominates xj" at margin `delta`.
pub fn refute_dominance(
    ps: &PreferenceSystem,
    cs: &CredalSet,
    delta: f64,
    xi: &Act,
    xj: &Act,
    count: usize,
    seed: u64,
) -> Result<Option<Counterexample>> {
    let batch = sample_utilities(ps, delta, count, seed)?;
    Ok(refute_dominance_with(
        &batch.samples,
        cs,
        xi,
        xj,
        seed ^ 0x9e3779b97f4a7c15,
        EPS_OPT,
    ))
}
