//! Preference systems: a consequence set with a preorder `R1` on elements and
//! a preorder `R2` on `R1`-pairs expressing comparisons of utility
//! differences. The module derives strict/indifference parts, builds the
//! linear constraint system for normalized utility representations with
//! margin `delta`, and decides delta-consistency including the maximal
//! consistent delta.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::hash::Hash;

use crate::error::{Error, Result};
use crate::lp::{self, LpProblem, LpStatus};

/// An ordered pair of element indices; `(i, j)` reads "i is at least as good
/// as j".
pub type ElemPair = (usize, usize);

/// An ordered pair of `R1` members; `((k, l), (p, q))` reads "exchanging l
/// for k improves at least as much as exchanging q for p".
pub type PairPair = (ElemPair, ElemPair);

/// Strict and indifference parts of a preorder.
///
/// `(x, y)` is strict iff `(x, y)` is in the relation and `(y, x)` is not;
/// it is indifferent iff both directions are present. Reflexive pairs are
/// treated as implicitly present, so they are never strict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationParts<T> {
    pub strict: Vec<(T, T)>,
    pub indiff: Vec<(T, T)>,
}

/// Partition a preorder into its strict and indifference parts.
///
/// Reflexivity is implicit: `(x, x)` counts as a member whether or not it is
/// listed. Transitivity of the listed pairs is validated; non-preorders are
/// input errors.
pub fn relation_parts<T>(rel: &[(T, T)]) -> Result<RelationParts<T>>
where
    T: Copy + Eq + Hash + Ord + std::fmt::Debug,
{
    validate_transitive(rel)?;
    Ok(partition(rel))
}

fn partition<T>(rel: &[(T, T)]) -> RelationParts<T>
where
    T: Copy + Eq + Hash + Ord,
{
    let members: HashSet<(T, T)> = rel.iter().copied().collect();
    let mut strict = Vec::new();
    let mut indiff = Vec::new();
    for &(x, y) in rel {
        if x == y || members.contains(&(y, x)) {
            indiff.push((x, y));
        } else {
            strict.push((x, y));
        }
    }
    strict.sort_unstable();
    strict.dedup();
    indiff.sort_unstable();
    indiff.dedup();
    RelationParts { strict, indiff }
}

fn validate_transitive<T>(rel: &[(T, T)]) -> Result<()>
where
    T: Copy + Eq + Hash + Ord + std::fmt::Debug,
{
    let members: HashSet<(T, T)> = rel.iter().copied().collect();
    let mut succ: HashMap<T, Vec<T>> = HashMap::new();
    for &(x, y) in rel {
        if x != y {
            succ.entry(x).or_default().push(y);
        }
    }
    for &(x, y) in rel {
        if let Some(nexts) = succ.get(&y) {
            for &z in nexts {
                if x != z && !members.contains(&(x, z)) {
                    return Err(Error::NotPreorder(format!(
                        "contains {:?} and {:?} but not {:?}",
                        (x, y),
                        (y, z),
                        (x, z)
                    )));
                }
            }
        }
    }
    Ok(())
}

fn transitive_closure<T>(rel: &[(T, T)]) -> Vec<(T, T)>
where
    T: Copy + Eq + Hash + Ord,
{
    let mut members: HashSet<(T, T)> = rel.iter().copied().collect();
    let mut queue: Vec<(T, T)> = members.iter().copied().collect();
    while let Some((x, y)) = queue.pop() {
        let nexts: Vec<T> = members
            .iter()
            .filter(|&&(a, _)| a == y)
            .map(|&(_, b)| b)
            .collect();
        for z in nexts {
            if x != z && members.insert((x, z)) {
                queue.push((x, z));
            }
        }
    }
    let mut out: Vec<(T, T)> = members.into_iter().collect();
    out.sort_unstable();
    out
}

/// A preference system `[A, R1, R2]` over `num_elements` indexed consequences.
///
/// `top`/`bottom`, when set, designate elements that are `R1`-above
/// respectively `R1`-below every element; they anchor the normalization
/// `u(top) = 1`, `u(bottom) = 0`.
#[derive(Debug, Clone)]
pub struct PreferenceSystem {
    num_elements: usize,
    r1: Vec<ElemPair>,
    r2: Vec<PairPair>,
    top: Option<usize>,
    bottom: Option<usize>,
}

impl PreferenceSystem {
    /// Build and validate a preference system. Relations are validated as
    /// preorders exactly as given (reflexive pairs implicit); use
    /// [`PreferenceSystem::new_with_closure`] to close them transitively
    /// first.
    pub fn new(
        num_elements: usize,
        r1: Vec<ElemPair>,
        r2: Vec<PairPair>,
        top: Option<usize>,
        bottom: Option<usize>,
    ) -> Result<Self> {
        Self::build(num_elements, r1, r2, top, bottom, false)
    }

    /// Like [`PreferenceSystem::new`] but applies transitive closure to both
    /// relations before validation.
    pub fn new_with_closure(
        num_elements: usize,
        r1: Vec<ElemPair>,
        r2: Vec<PairPair>,
        top: Option<usize>,
        bottom: Option<usize>,
    ) -> Result<Self> {
        Self::build(num_elements, r1, r2, top, bottom, true)
    }

    fn build(
        num_elements: usize,
        mut r1: Vec<ElemPair>,
        mut r2: Vec<PairPair>,
        top: Option<usize>,
        bottom: Option<usize>,
        close: bool,
    ) -> Result<Self> {
        if num_elements == 0 {
            return Err(Error::InvalidInput(
                "preference system has no elements".into(),
            ));
        }
        for &(i, j) in &r1 {
            if i >= num_elements || j >= num_elements {
                return Err(Error::InvalidInput(format!(
                    "R1 pair ({i}, {j}) references an element out of range 0..{num_elements}"
                )));
            }
        }
        for &(p, q) in &r2 {
            for (i, j) in [p, q] {
                if i >= num_elements || j >= num_elements {
                    return Err(Error::InvalidInput(format!(
                        "R2 references element pair ({i}, {j}) out of range 0..{num_elements}"
                    )));
                }
            }
        }
        if close {
            r1 = transitive_closure(&r1);
            r2 = transitive_closure(&r2);
        } else {
            r1.sort_unstable();
            r1.dedup();
            r2.sort_unstable();
            r2.dedup();
        }
        validate_transitive(&r1).map_err(|e| match e {
            Error::NotPreorder(msg) => Error::NotPreorder(format!("R1 {msg}")),
            other => other,
        })?;
        validate_transitive(&r2).map_err(|e| match e {
            Error::NotPreorder(msg) => Error::NotPreorder(format!("R2 {msg}")),
            other => other,
        })?;

        // Every pair referenced by R2 must be an R1 member (reflexive pairs
        // are implicit members of any preorder).
        let r1_set: HashSet<ElemPair> = r1.iter().copied().collect();
        for &(p, q) in &r2 {
            for (i, j) in [p, q] {
                if i != j && !r1_set.contains(&(i, j)) {
                    return Err(Error::InvalidInput(format!(
                        "R2 references pair ({i}, {j}) which is not a member of R1"
                    )));
                }
            }
        }

        if let Some(t) = top {
            if t >= num_elements {
                return Err(Error::InvalidInput(format!("top index {t} out of range")));
            }
            for i in 0..num_elements {
                if i != t && !r1_set.contains(&(t, i)) {
                    return Err(Error::InvalidInput(format!(
                        "top element {t} does not R1-dominate element {i}"
                    )));
                }
            }
        }
        if let Some(b) = bottom {
            if b >= num_elements {
                return Err(Error::InvalidInput(format!(
                    "bottom index {b} out of range"
                )));
            }
            for i in 0..num_elements {
                if i != b && !r1_set.contains(&(i, b)) {
                    return Err(Error::InvalidInput(format!(
                        "element {i} does not R1-dominate bottom element {b}"
                    )));
                }
            }
        }

        Ok(PreferenceSystem {
            num_elements,
            r1,
            r2,
            top,
            bottom,
        })
    }

    pub fn num_elements(&self) -> usize {
        self.num_elements
    }

    pub fn r1(&self) -> &[ElemPair] {
        &self.r1
    }

    pub fn r2(&self) -> &[PairPair] {
        &self.r2
    }

    pub fn top(&self) -> Option<usize> {
        self.top
    }

    pub fn bottom(&self) -> Option<usize> {
        self.bottom
    }

    pub fn r1_parts(&self) -> RelationParts<usize> {
        partition(&self.r1)
    }

    pub fn r2_parts(&self) -> RelationParts<ElemPair> {
        partition(&self.r2)
    }

    /// Build the linear constraint block for normalized representations:
    /// `v[top] = 1`, `v[bottom] = 0`, equalities for indifferent pairs,
    /// margin-delta inequalities for strict pairs, and unit box bounds.
    /// Delta enters only as the right-hand side of the strict rows, so the
    /// block itself is delta-free.
    pub fn nabla_constraints(&self) -> Result<NablaConstraints> {
        let top = self.top.ok_or(Error::MissingExtremum("top"))?;
        let bottom = self.bottom.ok_or(Error::MissingExtremum("bottom"))?;

        let r1_parts = partition(&self.r1);
        let r2_parts = partition(&self.r2);

        // Canonical integer signatures dedupe rows that encode the same
        // inequality (R2 pairs against reflexive members repeat R1 rows).
        let mut strict_sigs: HashSet<Vec<(usize, i32)>> = HashSet::new();
        let mut eq_sigs: HashSet<Vec<(usize, i32)>> = HashSet::new();
        let mut has_zero_strict = false;

        let sig_of = |terms: &[(usize, i32)]| -> Vec<(usize, i32)> {
            let mut acc: BTreeMap<usize, i32> = BTreeMap::new();
            for &(i, c) in terms {
                let e = acc.entry(i).or_insert(0);
                *e += c;
            }
            acc.into_iter().filter(|&(_, c)| c != 0).collect()
        };

        for &(i, j) in &r1_parts.strict {
            strict_sigs.insert(sig_of(&[(i, 1), (j, -1)]));
        }
        for &(i, j) in &r1_parts.indiff {
            let sig = sig_of(&[(i, 1), (j, -1)]);
            if !sig.is_empty() {
                eq_sigs.insert(sig);
            }
        }
        for &((k, l), (p, q)) in &r2_parts.strict {
            let sig = sig_of(&[(k, 1), (l, -1), (p, -1), (q, 1)]);
            if sig.is_empty() {
                // Degenerate strict comparison, e.g. ((a,a),(b,b)): it reads
                // 0 >= delta and rules out every positive delta.
                has_zero_strict = true;
            } else {
                strict_sigs.insert(sig);
            }
        }
        for &((k, l), (p, q)) in &r2_parts.indiff {
            let sig = sig_of(&[(k, 1), (l, -1), (p, -1), (q, 1)]);
            if !sig.is_empty() {
                eq_sigs.insert(sig);
            }
        }

        let to_rows = |sigs: HashSet<Vec<(usize, i32)>>| -> Vec<SparseRow> {
            let mut rows: Vec<Vec<(usize, i32)>> = sigs.into_iter().collect();
            rows.sort_unstable();
            rows.into_iter()
                .map(|r| r.into_iter().map(|(i, c)| (i, c as f64)).collect())
                .collect()
        };

        let mut strict_rows = to_rows(strict_sigs);
        if has_zero_strict {
            strict_rows.push(Vec::new());
        }

        Ok(NablaConstraints {
            num_vars: self.num_elements,
            top,
            bottom,
            strict_rows,
            eq_rows: to_rows(eq_sigs),
        })
    }

    /// Decide delta-consistency: is the margin-delta constraint system
    /// feasible? Uses the closed feasible set, so at `delta = 0` the verdict
    /// refers to the closure of the set of normalized representations.
    pub fn is_delta_consistent(&self, delta: f64) -> Result<bool> {
        if !(0.0..1.0).contains(&delta) {
            return Err(Error::DeltaOutOfRange(delta));
        }
        let nabla = self.nabla_constraints()?;
        let outcome = lp::solve(&nabla.feasibility_lp(delta))?;
        match outcome.status {
            LpStatus::Optimal => Ok(true),
            LpStatus::Infeasible => Ok(false),
            LpStatus::Unbounded => Err(Error::Internal(
                "box-bounded feasibility LP reported unbounded".into(),
            )),
        }
    }

    /// Largest delta for which the system stays delta-consistent, found by a
    /// single LP with delta as an extra variable (all constraints are jointly
    /// linear in the utilities and delta).
    ///
    /// Delta lives in `[0, 1)`; if the supremum reaches 1 the result carries
    /// `at_boundary = true` and reports 1.0.
    pub fn max_delta(&self) -> Result<MaxDelta> {
        let nabla = self.nabla_constraints()?;
        let outcome = lp::solve(&nabla.max_delta_lp())?;
        match outcome.status {
            LpStatus::Optimal => {
                let raw = -outcome.value();
                let value = raw.clamp(0.0, 1.0);
                Ok(MaxDelta {
                    value,
                    at_boundary: raw >= 1.0 - 1e-12,
                })
            }
            LpStatus::Infeasible => Err(Error::ZeroInconsistent),
            LpStatus::Unbounded => Err(Error::Internal(
                "box-bounded max-delta LP reported unbounded".into(),
            )),
        }
    }
}

/// Maximal consistent delta. `at_boundary` flags a supremum at the top of the
/// admissible domain `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaxDelta {
    pub value: f64,
    pub at_boundary: bool,
}

/// A normalized utility vector over the element indices.
#[derive(Debug, Clone, PartialEq)]
pub struct UtilityVector(pub Vec<f64>);

type SparseRow = Vec<(usize, f64)>;

/// The delta-parametric constraint block of a preference system:
/// `strict_rows . v >= delta`, `eq_rows . v = 0`, `v[top] = 1`,
/// `v[bottom] = 0`, `v` in the unit box.
#[derive(Debug, Clone)]
pub struct NablaConstraints {
    pub num_vars: usize,
    pub top: usize,
    pub bottom: usize,
    strict_rows: Vec<SparseRow>,
    eq_rows: Vec<SparseRow>,
}

impl NablaConstraints {
    pub fn strict_rows(&self) -> &[SparseRow] {
        &self.strict_rows
    }

    pub fn eq_rows(&self) -> &[SparseRow] {
        &self.eq_rows
    }

    fn densify(&self, row: &SparseRow) -> Vec<f64> {
        let mut dense = vec![0.0; self.num_vars];
        for &(i, c) in row {
            dense[i] = c;
        }
        dense
    }

    /// LP with the given objective over the constraint block at margin
    /// `delta`.
    pub fn lp_with_objective(&self, delta: f64, objective: Vec<f64>) -> LpProblem {
        let mut p = LpProblem::boxed(self.num_vars);
        p.objective = objective;
        let mut top_row = vec![0.0; self.num_vars];
        top_row[self.top] = 1.0;
        p.eq_constraints.push((top_row, 1.0));
        let mut bot_row = vec![0.0; self.num_vars];
        bot_row[self.bottom] = 1.0;
        p.eq_constraints.push((bot_row, 0.0));
        for row in &self.eq_rows {
            p.eq_constraints.push((self.densify(row), 0.0));
        }
        for row in &self.strict_rows {
            p.ineq_constraints.push((self.densify(row), delta));
        }
        p
    }

    /// Zero-objective feasibility probe at margin `delta`.
    pub fn feasibility_lp(&self, delta: f64) -> LpProblem {
        self.lp_with_objective(delta, vec![0.0; self.num_vars])
    }

    /// Maximize delta subject to the block, with delta as variable
    /// `num_vars` bounded to `[0, 1]`. Minimization form, so the optimal
    /// value is the negated maximal delta.
    pub fn max_delta_lp(&self) -> LpProblem {
        let n = self.num_vars + 1;
        let dvar = self.num_vars;
        let mut p = LpProblem::boxed(n);
        p.objective[dvar] = -1.0;
        let mut top_row = vec![0.0; n];
        top_row[self.top] = 1.0;
        p.eq_constraints.push((top_row, 1.0));
        let mut bot_row = vec![0.0; n];
        bot_row[self.bottom] = 1.0;
        p.eq_constraints.push((bot_row, 0.0));
        for row in &self.eq_rows {
            let mut dense = vec![0.0; n];
            for &(i, c) in row {
                dense[i] = c;
            }
            p.eq_constraints.push((dense, 0.0));
        }
        for row in &self.strict_rows {
            let mut dense = vec![0.0; n];
            for &(i, c) in row {
                dense[i] = c;
            }
            dense[dvar] = -1.0;
            p.ineq_constraints.push((dense, 0.0));
        }
        p
    }

    /// Minimum constraint slack of `v` at margin `delta`: strict-row slack,
    /// negated equality residuals, pin residuals and box slack. Nonnegative
    /// means feasible.
    pub fn slack(&self, v: &[f64], delta: f64) -> f64 {
        assert_eq!(v.len(), self.num_vars);
        let dot = |row: &SparseRow| -> f64 { row.iter().map(|&(i, c)| c * v[i]).sum() };
        let mut worst = f64::INFINITY;
        for row in &self.strict_rows {
            worst = worst.min(dot(row) - delta);
        }
        for row in &self.eq_rows {
            worst = worst.min(-dot(row).abs());
        }
        worst = worst.min(-(v[self.top] - 1.0).abs());
        worst = worst.min(-v[self.bottom].abs());
        for &x in v {
            worst = worst.min(x).min(1.0 - x);
        }
        worst
    }
}
