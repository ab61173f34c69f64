//! Solver-agnostic linear-program contract.
//!
//! Every dominance and consistency check in this crate is phrased as a
//! minimization [`LpProblem`] and handed to [`solve`]. The current backend is
//! the `minilp` simplex implementation; nothing outside this module depends
//! on that choice.

use crate::error::{Error, Result};

/// Feasibility tolerance: a witness may violate constraints by at most this.
pub const EPS_FEAS: f64 = 1e-9;

/// Optimality-sign tolerance: "opt >= 0" tests are run as "opt >= -EPS_OPT"
/// because floating-point solvers return values near zero on tight instances.
pub const EPS_OPT: f64 = 1e-8;

/// Tolerance bundle threaded through dominance checks.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    pub feas: f64,
    pub opt: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            feas: EPS_FEAS,
            opt: EPS_OPT,
        }
    }
}

impl Tolerances {
    pub fn with_opt(opt: f64) -> Self {
        Tolerances {
            opt,
            ..Tolerances::default()
        }
    }
}

/// A linear program in minimization form.
///
/// Maximization callers negate their objective. Inequality rows read
/// `coeffs . v >= rhs`; equality rows read `coeffs . v = rhs`.
#[derive(Debug, Clone)]
pub struct LpProblem {
    pub num_vars: usize,
    pub objective: Vec<f64>,
    pub eq_constraints: Vec<(Vec<f64>, f64)>,
    pub ineq_constraints: Vec<(Vec<f64>, f64)>,
    pub var_bounds: Vec<(f64, f64)>,
}

impl LpProblem {
    /// A problem with the given variable count, zero objective and unit box
    /// bounds; callers fill in rows.
    pub fn boxed(num_vars: usize) -> Self {
        LpProblem {
            num_vars,
            objective: vec![0.0; num_vars],
            eq_constraints: Vec::new(),
            ineq_constraints: Vec::new(),
            var_bounds: vec![(0.0, 1.0); num_vars],
        }
    }

    fn validate(&self) -> Result<()> {
        if self.num_vars == 0 {
            return Err(Error::InvalidInput("LP has zero variables".into()));
        }
        if self.objective.len() != self.num_vars {
            return Err(Error::InvalidInput(format!(
                "objective has length {}, expected {}",
                self.objective.len(),
                self.num_vars
            )));
        }
        if self.var_bounds.len() != self.num_vars {
            return Err(Error::InvalidInput(format!(
                "bounds have length {}, expected {}",
                self.var_bounds.len(),
                self.num_vars
            )));
        }
        for (i, &(lo, hi)) in self.var_bounds.iter().enumerate() {
            if lo.is_nan() || hi.is_nan() || lo > hi {
                return Err(Error::InvalidInput(format!(
                    "bounds for variable {i} are [{lo}, {hi}]"
                )));
            }
        }
        for (row, rhs) in self.eq_constraints.iter().chain(&self.ineq_constraints) {
            if row.len() != self.num_vars {
                return Err(Error::InvalidInput(format!(
                    "constraint row has length {}, expected {}",
                    row.len(),
                    self.num_vars
                )));
            }
            if rhs.is_nan() || row.iter().any(|c| !c.is_finite()) {
                return Err(Error::InvalidInput(
                    "constraint contains a non-finite coefficient".into(),
                ));
            }
        }
        if self.objective.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidInput(
                "objective contains a non-finite coefficient".into(),
            ));
        }
        Ok(())
    }

    /// Largest constraint violation of `point`, counting bounds. Zero means
    /// feasible; used to re-check solver witnesses by direct substitution.
    pub fn max_violation(&self, point: &[f64]) -> f64 {
        assert_eq!(point.len(), self.num_vars);
        let mut worst: f64 = 0.0;
        for (row, rhs) in &self.eq_constraints {
            let v: f64 = row.iter().zip(point).map(|(c, x)| c * x).sum();
            worst = worst.max((v - rhs).abs());
        }
        for (row, rhs) in &self.ineq_constraints {
            let v: f64 = row.iter().zip(point).map(|(c, x)| c * x).sum();
            worst = worst.max(rhs - v);
        }
        for (i, &(lo, hi)) in self.var_bounds.iter().enumerate() {
            worst = worst.max(lo - point[i]).max(point[i] - hi);
        }
        worst
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Solver verdict. `optimal_value` and `witness` are present iff `Optimal`.
#[derive(Debug, Clone)]
pub struct LpOutcome {
    pub status: LpStatus,
    pub optimal_value: Option<f64>,
    pub witness: Option<Vec<f64>>,
}

impl LpOutcome {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }

    /// Optimal value, panicking on non-optimal outcomes. Callers use this
    /// where infeasibility has already been mapped to a domain error.
    pub fn value(&self) -> f64 {
        self.optimal_value.expect("LP outcome is not optimal")
    }
}

/// Unboundedness probe for problems with open bounds: the objective is
/// unbounded below iff some recession direction improves it. The backend
/// misses this case when constraints are present, so it is checked
/// explicitly on the (bounded) recession cone.
fn recession_improves(p: &LpProblem) -> Result<bool> {
    let mut cone = p.clone();
    for (i, b) in cone.var_bounds.iter_mut().enumerate() {
        let (lo, hi) = p.var_bounds[i];
        *b = (
            if lo.is_finite() { 0.0 } else { -1.0 },
            if hi.is_finite() { 0.0 } else { 1.0 },
        );
    }
    for (_, rhs) in cone
        .eq_constraints
        .iter_mut()
        .chain(cone.ineq_constraints.iter_mut())
    {
        *rhs = 0.0;
    }
    let out = solve_bounded(&cone)?;
    Ok(match out.status {
        LpStatus::Optimal => out.value() < -EPS_FEAS,
        // The origin is always feasible and the cone is boxed.
        _ => false,
    })
}

/// Solve a minimization LP.
///
/// Malformed problems are input errors, distinct from `Infeasible`.
pub fn solve(p: &LpProblem) -> Result<LpOutcome> {
    p.validate()?;
    let out = solve_bounded(p)?;
    if out.status == LpStatus::Optimal
        && p.var_bounds
            .iter()
            .any(|&(lo, hi)| !lo.is_finite() || !hi.is_finite())
        && recession_improves(p)?
    {
        return Ok(LpOutcome {
            status: LpStatus::Unbounded,
            optimal_value: None,
            witness: None,
        });
    }
    Ok(out)
}

fn solve_bounded(p: &LpProblem) -> Result<LpOutcome> {
    let mut problem = minilp::Problem::new(minilp::OptimizationDirection::Minimize);
    let vars: Vec<minilp::Variable> = (0..p.num_vars)
        .map(|i| problem.add_var(p.objective[i], p.var_bounds[i]))
        .collect();

    let mut expr: Vec<(minilp::Variable, f64)> = Vec::new();
    for (kind, (row, rhs)) in p
        .eq_constraints
        .iter()
        .map(|c| (minilp::ComparisonOp::Eq, c))
        .chain(
            p.ineq_constraints
                .iter()
                .map(|c| (minilp::ComparisonOp::Ge, c)),
        )
    {
        expr.clear();
        for (i, &c) in row.iter().enumerate() {
            if c != 0.0 {
                expr.push((vars[i], c));
            }
        }
        if expr.is_empty() {
            // All-zero row: decide by the right-hand side alone.
            let ok = match kind {
                minilp::ComparisonOp::Eq => rhs.abs() <= EPS_FEAS,
                minilp::ComparisonOp::Ge => *rhs <= EPS_FEAS,
                minilp::ComparisonOp::Le => *rhs >= -EPS_FEAS,
            };
            if !ok {
                return Ok(LpOutcome {
                    status: LpStatus::Infeasible,
                    optimal_value: None,
                    witness: None,
                });
            }
            continue;
        }
        problem.add_constraint(&expr[..], kind, *rhs);
    }

    match problem.solve() {
        Ok(solution) => {
            let witness: Vec<f64> = vars.iter().map(|v| *solution.var_value(*v)).collect();
            Ok(LpOutcome {
                status: LpStatus::Optimal,
                optimal_value: Some(solution.objective()),
                witness: Some(witness),
            })
        }
        Err(minilp::Error::Infeasible) => Ok(LpOutcome {
            status: LpStatus::Infeasible,
            optimal_value: None,
            witness: None,
        }),
        Err(minilp::Error::Unbounded) => Ok(LpOutcome {
            status: LpStatus::Unbounded,
            optimal_value: None,
            witness: None,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_attaining_minimum() {
        let p = LpProblem {
            num_vars: 1,
            objective: vec![1.0],
            eq_constraints: vec![],
            ineq_constraints: vec![],
            var_bounds: vec![(0.0, 1.0)],
        };
        let out = solve(&p).unwrap();
        assert_eq!(out.status, LpStatus::Optimal);
        assert!(out.value().abs() < EPS_FEAS);
        assert!((out.witness.unwrap()[0]).abs() < EPS_FEAS);
    }

    #[test]
    fn unbounded_above() {
        let p = LpProblem {
            num_vars: 1,
            objective: vec![-1.0],
            eq_constraints: vec![],
            ineq_constraints: vec![(vec![1.0], 0.0)],
            var_bounds: vec![(0.0, f64::INFINITY)],
        };
        let out = solve(&p).unwrap();
        assert_eq!(out.status, LpStatus::Unbounded);
        assert!(out.optimal_value.is_none());
        assert!(out.witness.is_none());
    }

    #[test]
    fn contradictory_rows_are_infeasible() {
        let p = LpProblem {
            num_vars: 1,
            objective: vec![0.0],
            eq_constraints: vec![],
            ineq_constraints: vec![(vec![1.0], 1.0), (vec![-1.0], 0.0)],
            var_bounds: vec![(f64::NEG_INFINITY, f64::INFINITY)],
        };
        let out = solve(&p).unwrap();
        assert_eq!(out.status, LpStatus::Infeasible);
    }

    #[test]
    fn zero_variables_rejected_as_input_error() {
        let p = LpProblem {
            num_vars: 0,
            objective: vec![],
            eq_constraints: vec![],
            ineq_constraints: vec![],
            var_bounds: vec![],
        };
        assert!(matches!(solve(&p), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let p = LpProblem {
            num_vars: 2,
            objective: vec![1.0, 0.0],
            eq_constraints: vec![(vec![1.0], 0.5)],
            ineq_constraints: vec![],
            var_bounds: vec![(0.0, 1.0), (0.0, 1.0)],
        };
        assert!(matches!(solve(&p), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn witness_is_feasible_and_matches_value() {
        let p = LpProblem {
            num_vars: 3,
            objective: vec![1.0, 2.0, -1.0],
            eq_constraints: vec![(vec![1.0, 1.0, 1.0], 1.0)],
            ineq_constraints: vec![(vec![1.0, -1.0, 0.0], -0.25)],
            var_bounds: vec![(0.0, 1.0); 3],
        };
        let out = solve(&p).unwrap();
        assert_eq!(out.status, LpStatus::Optimal);
        let w = out.witness.as_ref().unwrap();
        assert!(p.max_violation(w) <= EPS_FEAS);
        let recomputed: f64 = p.objective.iter().zip(w).map(|(c, x)| c * x).sum();
        assert!((recomputed - out.value()).abs() <= EPS_FEAS);
    }

    #[test]
    fn solve_is_deterministic() {
        let p = LpProblem {
            num_vars: 4,
            objective: vec![0.3, -0.7, 0.1, 0.0],
            eq_constraints: vec![(vec![1.0, 1.0, 1.0, 1.0], 1.0)],
            ineq_constraints: vec![(vec![1.0, 0.0, -1.0, 0.0], -0.5)],
            var_bounds: vec![(0.0, 1.0); 4],
        };
        let a = solve(&p).unwrap();
        let b = solve(&p).unwrap();
        assert_eq!(a.status, b.status);
        assert_eq!(a.optimal_value, b.optimal_value);
        assert_eq!(a.witness, b.witness);
    }

    #[test]
    fn all_zero_row_with_positive_rhs_is_infeasible() {
        let p = LpProblem {
            num_vars: 1,
            objective: vec![0.0],
            eq_constraints: vec![],
            ineq_constraints: vec![(vec![0.0], 0.5)],
            var_bounds: vec![(0.0, 1.0)],
        };
        let out = solve(&p).unwrap();
        assert_eq!(out.status, LpStatus::Infeasible);
    }
}
