//! Multi-target decision problems: actions scored per state by `r` target
//! evaluations in the unit interval, the first `z` cardinal and the rest
//! ordinal. The induced preference system on evaluation vectors compares
//! vectors componentwise (`R1`) and exchange pairs by cardinal difference
//! dominance plus ordinal interval nesting (`R2`); dominance between actions
//! is then delegated to the generic LP machinery.

use crate::credal::{CredalSet, StateSpace};
use crate::dominance::{self, Act, DominanceRelation};
use crate::error::{Error, Result};
use crate::lp::Tolerances;
use crate::preference::{ElemPair, PairPair, PreferenceSystem};

/// Slack for membership comparisons on evaluation data. The inputs are
/// short decimals whose differences carry float noise; without the slack,
/// ties like `0.86 - 0.82 >= 0.05 - 0.01` would flip on the last bit.
const REL_EPS: f64 = 1e-12;

/// A multi-target decision problem.
#[derive(Debug, Clone)]
pub struct Mtdp {
    space: StateSpace,
    actions: Vec<String>,
    /// `values[action][state][target]`, all in the unit interval.
    values: Vec<Vec<Vec<f64>>>,
    num_cardinal: usize,
    num_targets: usize,
}

impl Mtdp {
    pub fn new(
        space: StateSpace,
        actions: Vec<String>,
        values: Vec<Vec<Vec<f64>>>,
        num_cardinal: usize,
    ) -> Result<Self> {
        if actions.is_empty() {
            return Err(Error::InvalidInput("no actions given".into()));
        }
        if actions.len() != values.len() {
            return Err(Error::InvalidInput(format!(
                "{} actions but {} value tables",
                actions.len(),
                values.len()
            )));
        }
        let mut seen = std::collections::HashSet::new();
        for a in &actions {
            if a.is_empty() {
                return Err(Error::InvalidInput("empty action name".into()));
            }
            if !seen.insert(a.as_str()) {
                return Err(Error::InvalidInput(format!("duplicate action name {a:?}")));
            }
        }
        let m = space.len();
        let num_targets = values
            .first()
            .and_then(|a| a.first())
            .map(|row| row.len())
            .unwrap_or(0);
        if num_targets == 0 {
            return Err(Error::InvalidInput("no targets given".into()));
        }
        for (a, table) in values.iter().enumerate() {
            if table.len() != m {
                return Err(Error::InvalidInput(format!(
                    "action {:?} has {} state rows, expected {m}",
                    actions[a],
                    table.len()
                )));
            }
            for (s, row) in table.iter().enumerate() {
                if row.len() != num_targets {
                    return Err(Error::InvalidInput(format!(
                        "action {:?}, state {:?}: {} target values, expected {num_targets}",
                        actions[a],
                        space.names()[s],
                        row.len()
                    )));
                }
                for (t, &v) in row.iter().enumerate() {
                    if !(0.0..=1.0).contains(&v) {
                        return Err(Error::Validation(format!(
                            "action {:?}, state {:?}, target {}: value {v} outside [0, 1]",
                            actions[a],
                            space.names()[s],
                            t + 1
                        )));
                    }
                }
            }
        }
        if num_cardinal > num_targets {
            return Err(Error::InvalidInput(format!(
                "num_cardinal {num_cardinal} exceeds the number of targets {num_targets}"
            )));
        }
        Ok(Mtdp {
            space,
            actions,
            values,
            num_cardinal,
            num_targets,
        })
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn actions(&self) -> &[String] {
        &self.actions
    }

    pub fn num_actions(&self) -> usize {
        self.actions.len()
    }

    pub fn num_targets(&self) -> usize {
        self.num_targets
    }

    pub fn num_cardinal(&self) -> usize {
        self.num_cardinal
    }

    pub fn values(&self) -> &[Vec<Vec<f64>>] {
        &self.values
    }

    /// The evaluation vector of one action in one state.
    pub fn outcome(&self, action: usize, state: usize) -> &[f64] {
        &self.values[action][state]
    }
}

/// A deduplicated evaluation vector together with every `(action, state)`
/// cell it came from. Empty origins mark the synthetic all-ones and
/// all-zeros anchors.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalVector {
    pub coords: Vec<f64>,
    pub origins: Vec<(usize, usize)>,
}

impl EvalVector {
    pub fn is_synthetic(&self) -> bool {
        self.origins.is_empty()
    }
}

fn bits_key(coords: &[f64]) -> Vec<u64> {
    coords.iter().map(|v| v.to_bits()).collect()
}

fn collect_vectors(m: &Mtdp) -> (Vec<EvalVector>, Vec<Vec<usize>>) {
    let mut vectors: Vec<EvalVector> = Vec::new();
    let mut index: std::collections::HashMap<Vec<u64>, usize> = std::collections::HashMap::new();
    let mut outcome_index = vec![vec![0usize; m.space.len()]; m.num_actions()];
    for (a, table) in m.values.iter().enumerate() {
        for (s, row) in table.iter().enumerate() {
            let coords = row.clone();
            let key = bits_key(&coords);
            let idx = *index.entry(key).or_insert_with(|| {
                vectors.push(EvalVector {
                    coords,
                    origins: Vec::new(),
                });
                vectors.len() - 1
            });
            vectors[idx].origins.push((a, s));
            outcome_index[a][s] = idx;
        }
    }
    for anchor in [vec![1.0; m.num_targets], vec![0.0; m.num_targets]] {
        let key = bits_key(&anchor);
        index.entry(key).or_insert_with(|| {
            vectors.push(EvalVector {
                coords: anchor,
                origins: Vec::new(),
            });
            vectors.len() - 1
        });
    }
    (vectors, outcome_index)
}

/// All distinct evaluation vectors of the problem plus the all-ones and
/// all-zeros anchors, in first-occurrence order.
pub fn eval_vectors(m: &Mtdp) -> Vec<EvalVector> {
    collect_vectors(m).0
}

/// Componentwise dominance pairs over the evaluation vectors, reflexive
/// pairs included.
pub fn build_r1(vectors: &[EvalVector]) -> Vec<ElemPair> {
    let n = vectors.len();
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let xi = &vectors[i].coords;
            let xj = &vectors[j].coords;
            if xi.iter().zip(xj).all(|(a, b)| *a >= *b - REL_EPS) {
                pairs.push((i, j));
            }
        }
    }
    pairs
}

fn r2_member(x: &[f64], y: &[f64], xp: &[f64], yp: &[f64], z: usize) -> bool {
    let r = x.len();
    for j in 0..z {
        if x[j] - y[j] < xp[j] - yp[j] - REL_EPS {
            return false;
        }
    }
    for j in z..r {
        if !(x[j] >= xp[j] - REL_EPS && xp[j] >= yp[j] - REL_EPS && yp[j] >= y[j] - REL_EPS) {
            return false;
        }
    }
    true
}

/// Exchange-comparison pairs over the `R1` members: the first exchange is at
/// least as much of an improvement as the second iff the cardinal
/// coordinates dominate in differences and the ordinal coordinates nest.
pub fn build_r2(vectors: &[EvalVector], num_cardinal: usize, r1: &[ElemPair]) -> Vec<PairPair> {
    let mut out = Vec::new();
    for &(a, b) in r1 {
        for &(c, d) in r1 {
            if r2_member(
                &vectors[a].coords,
                &vectors[b].coords,
                &vectors[c].coords,
                &vectors[d].coords,
                num_cardinal,
            ) {
                out.push(((a, b), (c, d)));
            }
        }
    }
    out
}

/// The preference system induced by an MTDP on its evaluation vectors,
/// together with the acts mapped into it.
#[derive(Debug, Clone)]
pub struct SubSystem {
    pub vectors: Vec<EvalVector>,
    pub system: PreferenceSystem,
    pub acts: Vec<Act>,
}

fn build_sub_system(m: &Mtdp, include_r2: bool) -> Result<SubSystem> {
    let (vectors, outcome_index) = collect_vectors(m);
    let r1 = build_r1(&vectors);
    let r2 = if include_r2 {
        build_r2(&vectors, m.num_cardinal, &r1)
    } else {
        Vec::new()
    };
    let top = vectors
        .iter()
        .position(|v| v.coords.iter().all(|&c| c == 1.0))
        .expect("all-ones anchor present");
    let bottom = vectors
        .iter()
        .position(|v| v.coords.iter().all(|&c| c == 0.0))
        .expect("all-zeros anchor present");
    let system = PreferenceSystem::new(vectors.len(), r1, r2, Some(top), Some(bottom))?;

    // The coordinate mean is always a normalized representation of the
    // induced system, so the margin-0 block must accept it by direct
    // substitution; anything else is a construction bug.
    let nabla = system.nabla_constraints()?;
    let mean: Vec<f64> = vectors
        .iter()
        .map(|v| v.coords.iter().sum::<f64>() / m.num_targets as f64)
        .collect();
    if nabla.slack(&mean, 0.0) < -1e-9 {
        return Err(Error::Internal(
            "induced preference system rejected its canonical mean representation".into(),
        ));
    }

    let acts = m
        .actions
        .iter()
        .enumerate()
        .map(|(a, name)| Act {
            name: name.clone(),
            outcomes: outcome_index[a].clone(),
        })
        .collect();
    Ok(SubSystem {
        vectors,
        system,
        acts,
    })
}

/// Induced preference system with both relations.
pub fn sub_system(m: &Mtdp) -> Result<SubSystem> {
    build_sub_system(m, true)
}

/// Induced system with the exchange relation dropped, leaving componentwise
/// dominance only. With margin 0 and the full simplex this reduces the LP
/// choice sets to the componentwise ones.
pub fn sub_system_r1_only(m: &Mtdp) -> Result<SubSystem> {
    build_sub_system(m, false)
}

/// The dominance relation over the problem's actions at margin `delta`.
pub fn delta_dominance(
    m: &Mtdp,
    cs: &CredalSet,
    delta: f64,
    tol: &Tolerances,
) -> Result<DominanceRelation> {
    if cs.space().len() != m.space.len() {
        return Err(Error::InvalidInput(format!(
            "credal set has {} states, problem has {}",
            cs.space().len(),
            m.space.len()
        )));
    }
    let sub = sub_system(m)?;
    dominance::full_relation(&sub.system, cs, delta, &sub.acts, tol)
}

/// Actions at least as good as every action in every state and target.
pub fn uniformly_optimal(m: &Mtdp) -> Vec<usize> {
    (0..m.num_actions())
        .filter(|&i| {
            (0..m.num_actions()).all(|k| {
                (0..m.space.len()).all(|s| {
                    (0..m.num_targets).all(|t| m.values[i][s][t] >= m.values[k][s][t])
                })
            })
        })
        .collect()
}

/// Actions not componentwise dominated with a strict improvement somewhere.
pub fn pareto_front(m: &Mtdp) -> Vec<usize> {
    (0..m.num_actions())
        .filter(|&i| {
            !(0..m.num_actions()).any(|k| {
                k != i
                    && (0..m.space.len()).all(|s| {
                        (0..m.num_targets).all(|t| m.values[k][s][t] >= m.values[i][s][t])
                    })
                    && (0..m.space.len()).any(|s| {
                        (0..m.num_targets).any(|t| m.values[k][s][t] > m.values[i][s][t])
                    })
            })
        })
        .collect()
}
