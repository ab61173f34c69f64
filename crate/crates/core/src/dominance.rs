//! Pairwise dominance between acts via one linear program per credal-set
//! extreme point: act `X` dominates act `Y` at margin `delta` iff the
//! minimal expected-utility gap over all normalized representations and all
//! extreme points is nonnegative. The full relation, the two choice sets and
//! the Hasse reduction of the strict part are derived from those verdicts.

use crate::credal::CredalSet;
use crate::error::{Error, Result};
use crate::lp::{self, LpProblem, LpStatus, Tolerances};
use crate::preference::{NablaConstraints, PreferenceSystem};

/// An act: one outcome (an element index of the preference system) per state.
#[derive(Debug, Clone)]
pub struct Act {
    pub name: String,
    pub outcomes: Vec<usize>,
}

/// Verdict of a single dominance check.
#[derive(Debug, Clone)]
pub struct PairVerdict {
    /// True iff the minimal optimal value over the extreme points clears
    /// `-eps_opt`.
    pub dominates: bool,
    /// The minimal optimal value `min_t opt(t)`.
    pub min_opt: f64,
    /// Extreme-point index attaining the minimum.
    pub argmin_t: usize,
    /// Utility vector attaining the minimum; an exact counterexample to
    /// dominance whenever `min_opt < 0`.
    pub witness: Vec<f64>,
    /// True when the verdict sits inside the tolerance band
    /// `[-eps_opt, 0)`: reported dominated although the sign is negative.
    pub marginal: bool,
}

/// The utility vector attaining a pair's minimal LP value, kept for
/// diagnostics: whenever the value is negative it is an exact
/// counterexample to the dominance claim.
#[derive(Debug, Clone)]
pub struct PairWitness {
    pub extreme_point: usize,
    pub utility: Vec<f64>,
}

/// The complete dominance relation over a list of acts at a fixed delta.
#[derive(Debug, Clone)]
pub struct DominanceRelation {
    pub act_names: Vec<String>,
    pub delta: f64,
    /// `dominates[i][j]` means act i dominates act j.
    pub dominates: Vec<Vec<bool>>,
    /// `opt_values[i][j]` keeps the minimal LP value behind each verdict.
    pub opt_values: Vec<Vec<f64>>,
    /// Minimizing witnesses per ordered pair; `None` on the diagonal.
    pub witnesses: Vec<Vec<Option<PairWitness>>>,
    /// Ordered pairs whose verdict was within the tolerance band.
    pub marginal: Vec<(usize, usize)>,
}

fn validate_acts(nabla: &NablaConstraints, cs: &CredalSet, acts: &[&Act]) -> Result<()> {
    let m = cs.space().len();
    if cs.extreme_points().is_empty() {
        return Err(Error::NoExtremePoints);
    }
    for act in acts {
        if act.outcomes.len() != m {
            return Err(Error::InvalidInput(format!(
                "act {:?} has {} outcomes, expected one per state ({m})",
                act.name,
                act.outcomes.len()
            )));
        }
        for &o in &act.outcomes {
            if o >= nabla.num_vars {
                return Err(Error::InvalidInput(format!(
                    "act {:?} references element {o}, out of range 0..{}",
                    act.name, nabla.num_vars
                )));
            }
        }
    }
    Ok(())
}

fn objective_for(
    nabla: &NablaConstraints,
    extreme_point: &[f64],
    xi: &Act,
    xj: &Act,
) -> Vec<f64> {
    let mut obj = vec![0.0; nabla.num_vars];
    for (s, &p) in extreme_point.iter().enumerate() {
        obj[xi.outcomes[s]] += p;
        obj[xj.outcomes[s]] -= p;
    }
    obj
}

/// The dominance LP for one act pair at one extreme point: minimize the
/// expected-utility gap of `xi` over `xj` subject to the normalized
/// representation constraints at margin `delta`.
pub fn dominance_lp(
    nabla: &NablaConstraints,
    cs: &CredalSet,
    delta: f64,
    xi: &Act,
    xj: &Act,
    t: usize,
) -> Result<LpProblem> {
    validate_acts(nabla, cs, &[xi, xj])?;
    let points = cs.extreme_points();
    if t >= points.len() {
        return Err(Error::InvalidInput(format!(
            "extreme-point index {t} out of range 0..{}",
            points.len()
        )));
    }
    Ok(nabla.lp_with_objective(delta, objective_for(nabla, &points[t], xi, xj)))
}

/// Check whether the margin-delta constraint system is feasible, mapping
/// infeasibility to a delta-inconsistency error.
pub fn ensure_consistent(nabla: &NablaConstraints, delta: f64) -> Result<()> {
    match lp::solve(&nabla.feasibility_lp(delta))?.status {
        LpStatus::Optimal => Ok(()),
        LpStatus::Infeasible => Err(Error::DeltaInconsistent(delta)),
        LpStatus::Unbounded => Err(Error::Internal(
            "box-bounded feasibility LP reported unbounded".into(),
        )),
    }
}

fn solve_pair(
    template: &mut LpProblem,
    nabla: &NablaConstraints,
    cs: &CredalSet,
    delta: f64,
    xi: &Act,
    xj: &Act,
    tol: &Tolerances,
) -> Result<PairVerdict> {
    let mut min_opt = f64::INFINITY;
    let mut argmin_t = 0;
    let mut witness = Vec::new();
    for (t, point) in cs.extreme_points().iter().enumerate() {
        template.objective = objective_for(nabla, point, xi, xj);
        let out = lp::solve(template)?;
        match out.status {
            LpStatus::Optimal => {
                let v = out.value();
                if v < min_opt {
                    min_opt = v;
                    argmin_t = t;
                    witness = out.witness.unwrap();
                }
            }
            LpStatus::Infeasible => return Err(Error::DeltaInconsistent(delta)),
            LpStatus::Unbounded => {
                return Err(Error::Internal(
                    "box-bounded dominance LP reported unbounded".into(),
                ))
            }
        }
    }
    let dominates = min_opt >= -tol.opt;
    Ok(PairVerdict {
        dominates,
        min_opt,
        argmin_t,
        witness,
        marginal: dominates && min_opt < 0.0,
    })
}

/// Decide one ordered dominance pair. Builds the constraint block afresh;
/// use [`full_relation`] to amortize it over many pairs.
pub fn dominates(
    ps: &PreferenceSystem,
    cs: &CredalSet,
    delta: f64,
    xi: &Act,
    xj: &Act,
    tol: &Tolerances,
) -> Result<PairVerdict> {
    if !(0.0..1.0).contains(&delta) {
        return Err(Error::DeltaOutOfRange(delta));
    }
    let nabla = ps.nabla_constraints()?;
    validate_acts(&nabla, cs, &[xi, xj])?;
    ensure_consistent(&nabla, delta)?;
    let mut template = nabla.lp_with_objective(delta, vec![0.0; nabla.num_vars]);
    solve_pair(&mut template, &nabla, cs, delta, xi, xj, tol)
}

/// Build the full dominance matrix over `acts`, fanning the independent act
/// pairs out across threads. The constraint block is built once and shared;
/// the diagonal is reflexive by definition.
pub fn full_relation(
    ps: &PreferenceSystem,
    cs: &CredalSet,
    delta: f64,
    acts: &[Act],
    tol: &Tolerances,
) -> Result<DominanceRelation> {
    if !(0.0..1.0).contains(&delta) {
        return Err(Error::DeltaOutOfRange(delta));
    }
    let nabla = ps.nabla_constraints()?;
    let act_refs: Vec<&Act> = acts.iter().collect();
    validate_acts(&nabla, cs, &act_refs)?;
    ensure_consistent(&nabla, delta)?;

    let n = acts.len();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();

    let workers = std::thread::available_parallelism()
        .map(|p| p.get())
        .unwrap_or(1)
        .min(pairs.len().max(1));
    let chunk = pairs.len().div_ceil(workers.max(1)).max(1);

    let mut results: Vec<(usize, usize, PairVerdict)> = Vec::with_capacity(pairs.len());
    let chunks: Vec<&[(usize, usize)]> = pairs.chunks(chunk).collect();
    let outcome: Result<Vec<Vec<(usize, usize, PairVerdict)>>> = std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for chunk_pairs in chunks {
            let nabla_ref = &nabla;
            handles.push(scope.spawn(move || {
                let mut template =
                    nabla_ref.lp_with_objective(delta, vec![0.0; nabla_ref.num_vars]);
                let mut out = Vec::with_capacity(chunk_pairs.len());
                for &(i, j) in chunk_pairs {
                    let verdict =
                        solve_pair(&mut template, nabla_ref, cs, delta, &acts[i], &acts[j], tol)?;
                    out.push((i, j, verdict));
                }
                Ok(out)
            }));
        }
        handles
            .into_iter()
            .map(|h| h.join().expect("dominance worker panicked"))
            .collect()
    });
    for batch in outcome? {
        results.extend(batch);
    }

    let mut dominates = vec![vec![false; n]; n];
    let mut opt_values = vec![vec![0.0; n]; n];
    let mut witnesses: Vec<Vec<Option<PairWitness>>> = vec![(0..n).map(|_| None).collect(); n];
    let mut marginal = Vec::new();
    for (i, row) in dominates.iter_mut().enumerate() {
        row[i] = true;
    }
    for (i, j, v) in results {
        dominates[i][j] = v.dominates;
        opt_values[i][j] = v.min_opt;
        witnesses[i][j] = Some(PairWitness {
            extreme_point: v.argmin_t,
            utility: v.witness,
        });
        if v.marginal {
            marginal.push((i, j));
        }
    }
    marginal.sort_unstable();

    Ok(DominanceRelation {
        act_names: acts.iter().map(|a| a.name.clone()).collect(),
        delta,
        dominates,
        opt_values,
        witnesses,
        marginal,
    })
}

impl DominanceRelation {
    pub fn len(&self) -> usize {
        self.act_names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.act_names.is_empty()
    }

    /// True iff `(i, j)` is in the strict part: i dominates j and not back.
    pub fn strict(&self, i: usize, j: usize) -> bool {
        self.dominates[i][j] && !self.dominates[j][i]
    }

    /// Reflexivity and transitivity violations of the boolean matrix; empty
    /// on every sound relation. A non-empty result indicates a solver
    /// tolerance problem.
    pub fn preorder_violations(&self) -> Vec<String> {
        let n = self.len();
        let mut out = Vec::new();
        for i in 0..n {
            if !self.dominates[i][i] {
                out.push(format!("relation is not reflexive at {}", self.act_names[i]));
            }
        }
        for i in 0..n {
            for j in 0..n {
                if !self.dominates[i][j] {
                    continue;
                }
                for k in 0..n {
                    if self.dominates[j][k] && !self.dominates[i][k] {
                        out.push(format!(
                            "transitivity violated: {} >= {} >= {} but not {} >= {}",
                            self.act_names[i],
                            self.act_names[j],
                            self.act_names[k],
                            self.act_names[i],
                            self.act_names[k]
                        ));
                    }
                }
            }
        }
        out
    }
}

/// Acts that dominate every act: the strong-view choice set.
pub fn maximal_set(rel: &DominanceRelation) -> Vec<usize> {
    (0..rel.len())
        .filter(|&i| (0..rel.len()).all(|j| rel.dominates[i][j]))
        .collect()
}

/// Acts with no strict dominator: the weak-view choice set.
pub fn undominated_set(rel: &DominanceRelation) -> Vec<usize> {
    (0..rel.len())
        .filter(|&i| !(0..rel.len()).any(|j| rel.strict(j, i)))
        .collect()
}

/// Hasse presentation of the relation: indifference classes plus the
/// transitive reduction of the strict order between them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HasseDiagram {
    /// Indifference classes, each a sorted list of act indices, ordered by
    /// smallest member.
    pub classes: Vec<Vec<usize>>,
    /// Reduction edges between class indices, dominator first.
    pub edges: Vec<(usize, usize)>,
}

/// Collapse indifference classes and transitively reduce the strict part.
pub fn hasse_edges(rel: &DominanceRelation) -> HasseDiagram {
    let n = rel.len();
    let mut class_of = vec![usize::MAX; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        if class_of[i] != usize::MAX {
            continue;
        }
        let members: Vec<usize> = (i..n)
            .filter(|&j| rel.dominates[i][j] && rel.dominates[j][i])
            .collect();
        let id = classes.len();
        for &j in &members {
            class_of[j] = id;
        }
        classes.push(members);
    }

    let k = classes.len();
    let mut above = vec![vec![false; k]; k];
    for a in 0..k {
        for b in 0..k {
            if a != b {
                let (ra, rb) = (classes[a][0], classes[b][0]);
                above[a][b] = rel.strict(ra, rb);
            }
        }
    }

    // The strict class order is transitive, so an edge is redundant exactly
    // when a one-step intermediate exists.
    let mut edges = Vec::new();
    for a in 0..k {
        for b in 0..k {
            if above[a][b] && !(0..k).any(|c| above[a][c] && above[c][b]) {
                edges.push((a, b));
            }
        }
    }
    HasseDiagram { classes, edges }
}
