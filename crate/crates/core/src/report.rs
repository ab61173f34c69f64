//! Problem files, the end-to-end pipeline and its machine-readable report.
//!
//! A problem file is a single JSON document naming the states, the credal
//! set, the per-action target evaluations and the requested granularity
//! levels. The pipeline computes the maximal consistent delta, the
//! componentwise choice sets, and per delta the dominance relation, its
//! choice sets and a DOT rendering of the Hasse diagram. Reports serialize
//! byte-deterministically for fixed input and seed.

use serde::{Deserialize, Serialize};

use crate::credal::{CredalSet, EnumerationGuard, ExpectationBound, StateSpace};
use crate::dominance::{self, DominanceRelation};
use crate::error::{Error, Result};
use crate::lp::Tolerances;
use crate::mtdp::{self, Mtdp};
use crate::oracle;

/// Credal-set description in a problem file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CredalSpec {
    /// Ordered probabilities: `pi(s1) >= pi(s2) >= ...`.
    Ordered,
    /// All probability measures.
    Simplex,
    /// Expectation bounds; extreme points are enumerated exactly.
    Constraints { entries: Vec<BoundSpec> },
    /// Extreme points given directly.
    ExtremePoints { points: Vec<Vec<f64>> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundSpec {
    pub coeffs: Vec<f64>,
    pub lo: f64,
    pub hi: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ActionSpec {
    pub name: String,
    /// `values[state][target]`.
    pub values: Vec<Vec<f64>>,
}

/// Requested granularity levels: an explicit list or the token `"auto"`,
/// which expands to `{0, delta_max/2, delta_max}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DeltaSpec {
    Token(String),
    List(Vec<f64>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProblemFile {
    pub states: Vec<String>,
    pub credal: CredalSpec,
    pub actions: Vec<ActionSpec>,
    pub num_cardinal: usize,
    pub deltas: DeltaSpec,
}

impl ProblemFile {
    pub fn from_json(text: &str) -> Result<ProblemFile> {
        let file: ProblemFile = serde_json::from_str(text)?;
        file.validate()?;
        Ok(file)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("problem serialization");
        s.push('\n');
        s
    }

    fn validate(&self) -> Result<()> {
        if let DeltaSpec::Token(tok) = &self.deltas {
            if tok != "auto" {
                return Err(Error::Validation(format!(
                    "deltas must be a list of numbers or the token \"auto\", got {tok:?}"
                )));
            }
        }
        if let DeltaSpec::List(list) = &self.deltas {
            if list.is_empty() {
                return Err(Error::Validation("deltas list is empty".into()));
            }
            for &d in list {
                if !d.is_finite() || !(0.0..1.0).contains(&d) {
                    return Err(Error::Validation(format!("delta {d} is outside [0, 1)")));
                }
            }
        }
        Ok(())
    }

    /// Build the decision problem, validating dimensions and value ranges
    /// with action/state/target context in error messages.
    pub fn to_mtdp(&self) -> Result<Mtdp> {
        let space = StateSpace::new(self.states.clone())?;
        let names: Vec<String> = self.actions.iter().map(|a| a.name.clone()).collect();
        let values: Vec<Vec<Vec<f64>>> = self.actions.iter().map(|a| a.values.clone()).collect();
        Mtdp::new(space, names, values, self.num_cardinal)
    }

    /// Build the credal set, enumerating extreme points when only
    /// constraints were given.
    pub fn to_credal_set(&self) -> Result<CredalSet> {
        let space = StateSpace::new(self.states.clone())?;
        match &self.credal {
            CredalSpec::Ordered => Ok(CredalSet::ordered_family(space)),
            CredalSpec::Simplex => Ok(CredalSet::full_simplex(space)),
            CredalSpec::Constraints { entries } => {
                let bounds = entries
                    .iter()
                    .map(|b| ExpectationBound {
                        coeffs: b.coeffs.clone(),
                        lo: b.lo,
                        hi: b.hi,
                    })
                    .collect();
                CredalSet::from_constraints(space, bounds)?
                    .with_enumerated_points(&EnumerationGuard::default())
            }
            CredalSpec::ExtremePoints { points } => {
                CredalSet::from_extreme_points(space, vec![], points.clone())
            }
        }
    }
}

/// Pipeline options; everything a verdict can depend on is explicit here.
#[derive(Debug, Clone)]
pub struct RunOptions {
    /// Override the problem file's delta request.
    pub deltas: Option<DeltaSpec>,
    pub tolerances: Tolerances,
    /// When set, run the sampling oracle with this many samples per delta
    /// and append agreement statistics.
    pub oracle_samples: Option<usize>,
    /// Walk steps between oracle samples.
    pub oracle_burn_in: usize,
    pub seed: u64,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            deltas: None,
            tolerances: Tolerances::default(),
            oracle_samples: None,
            oracle_burn_in: oracle::DEFAULT_BURN_IN,
            seed: 0,
        }
    }
}

/// Oracle agreement statistics for one delta level.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OracleStats {
    pub samples: usize,
    pub burn_in: usize,
    pub seed: u64,
    pub degenerate: bool,
    pub pairs_checked: usize,
    pub dominated_pairs: usize,
    /// Dominated pairs for which the sampler found a counterexample;
    /// non-empty means LP and oracle disagree.
    pub refuted_dominated: Vec<[String; 2]>,
    pub nondominated_pairs: usize,
    /// Non-dominated pairs whose stored LP witness was re-checked to
    /// violate the expectation inequality.
    pub witness_confirmed: usize,
    /// Non-dominated pairs whose witness failed the re-check; non-empty
    /// means a solver or encoding problem.
    pub witness_failures: Vec<[String; 2]>,
}

/// Per-delta results.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DeltaReport {
    pub delta: f64,
    pub consistent: bool,
    /// Row-major dominance matrix in action order.
    pub dominates: Vec<Vec<bool>>,
    /// Minimal LP values behind the verdicts.
    pub opt_values: Vec<Vec<f64>>,
    /// Strong-view choice set, sorted by name.
    pub max: Vec<String>,
    /// Weak-view choice set, sorted by name.
    pub und: Vec<String>,
    /// Ordered pairs decided inside the tolerance band.
    pub marginal_pairs: Vec<[String; 2]>,
    /// DOT rendering of the Hasse diagram of the strict part.
    pub dot: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleStats>,
}

/// Full pipeline output.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub states: Vec<String>,
    pub actions: Vec<String>,
    pub num_cardinal: usize,
    pub num_targets: usize,
    pub delta_max: f64,
    pub delta_max_at_boundary: bool,
    /// Uniformly optimal actions, sorted by name.
    pub uno: Vec<String>,
    /// Pareto front, sorted by name.
    pub par: Vec<String>,
    /// Whether every credal extreme point is strictly positive (the
    /// hypothesis behind the sharper undominated-set inclusion).
    pub credal_strictly_positive: bool,
    pub per_delta: Vec<DeltaReport>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization");
        s.push('\n');
        s
    }
}

fn sorted_names(names: &[String], indices: &[usize]) -> Vec<String> {
    let mut out: Vec<String> = indices.iter().map(|&i| names[i].clone()).collect();
    out.sort();
    out
}

fn dot_escape(name: &str) -> String {
    name.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Render the Hasse diagram of the relation's strict part as DOT text:
/// one node per indifference class (member names joined with commas, input
/// order), one edge per transitive-reduction edge, two-space indentation,
/// one statement per line.
pub fn emit_dot(rel: &DominanceRelation) -> String {
    let hasse = dominance::hasse_edges(rel);
    let labels: Vec<String> = hasse
        .classes
        .iter()
        .map(|class| {
            class
                .iter()
                .map(|&i| rel.act_names[i].as_str())
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect();
    let mut out = String::from("digraph hasse {\n");
    for label in &labels {
        out.push_str(&format!("  \"{}\";\n", dot_escape(label)));
    }
    for &(a, b) in &hasse.edges {
        out.push_str(&format!(
            "  \"{}\" -> \"{}\";\n",
            dot_escape(&labels[a]),
            dot_escape(&labels[b])
        ));
    }
    out.push_str("}\n");
    out
}

fn resolve_deltas(spec: &DeltaSpec, delta_max: f64, at_boundary: bool) -> Result<Vec<f64>> {
    // The admissible domain is [0, 1); a boundary supremum is run just
    // inside it.
    let run_max = if at_boundary { 1.0 - 1e-9 } else { delta_max };
    let mut deltas = match spec {
        DeltaSpec::Token(_) => vec![0.0, 0.5 * run_max, run_max],
        DeltaSpec::List(list) => {
            for &d in list {
                if d > delta_max + 1e-12 {
                    return Err(Error::DeltaExceedsMax { delta: d, delta_max });
                }
            }
            list.clone()
        }
    };
    deltas.dedup();
    Ok(deltas)
}

fn oracle_stats_for(
    sub: &mtdp::SubSystem,
    cs: &CredalSet,
    rel: &DominanceRelation,
    samples: usize,
    burn_in: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<OracleStats> {
    let mut sampler = oracle::UtilitySampler::new(&sub.system, rel.delta, seed)?;
    sampler = sampler.with_burn_in(burn_in);
    let batch = sampler.sample(samples);

    let n = rel.len();
    let mut stats = OracleStats {
        samples,
        burn_in,
        seed,
        degenerate: batch.degenerate,
        pairs_checked: 0,
        dominated_pairs: 0,
        refuted_dominated: Vec::new(),
        nondominated_pairs: 0,
        witness_confirmed: 0,
        witness_failures: Vec::new(),
    };
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            stats.pairs_checked += 1;
            let names = [rel.act_names[i].clone(), rel.act_names[j].clone()];
            if rel.dominates[i][j] {
                stats.dominated_pairs += 1;
                let pair_seed = seed ^ ((i as u64) << 32 | j as u64).wrapping_mul(0x9e3779b97f4a7c15);
                if oracle::refute_dominance_with(
                    &batch.samples,
                    cs,
                    &sub.acts[i],
                    &sub.acts[j],
                    pair_seed,
                    tol.opt,
                )
                .is_some()
                {
                    stats.refuted_dominated.push(names);
                }
            } else {
                stats.nondominated_pairs += 1;
                // The minimizing utility is itself a counterexample; re-check
                // it by direct substitution.
                let witness = rel.witnesses[i][j]
                    .as_ref()
                    .ok_or_else(|| Error::Internal("missing witness for pair".into()))?;
                let point = &cs.extreme_points()[witness.extreme_point];
                let u = &witness.utility;
                let gap: f64 = point
                    .iter()
                    .enumerate()
                    .map(|(s, &p)| p * (u[sub.acts[i].outcomes[s]] - u[sub.acts[j].outcomes[s]]))
                    .sum();
                if gap < -tol.opt {
                    stats.witness_confirmed += 1;
                } else {
                    stats.witness_failures.push(names);
                }
            }
        }
    }
    Ok(stats)
}

/// Run the full pipeline on a validated problem file.
pub fn run(file: &ProblemFile, opts: &RunOptions) -> Result<Report> {
    file.validate()?;
    let m = file.to_mtdp()?;
    let cs = file.to_credal_set()?;
    if cs.space().len() != m.space().len() {
        return Err(Error::Validation(
            "credal set and problem disagree on the number of states".into(),
        ));
    }

    let sub = mtdp::sub_system(&m)?;
    let max_delta = sub.system.max_delta()?;
    let delta_spec = opts.deltas.as_ref().unwrap_or(&file.deltas);
    let deltas = resolve_deltas(delta_spec, max_delta.value, max_delta.at_boundary)?;

    let uno = sorted_names(m.actions(), &mtdp::uniformly_optimal(&m));
    let par = sorted_names(m.actions(), &mtdp::pareto_front(&m));

    let mut per_delta = Vec::with_capacity(deltas.len());
    for (k, &delta) in deltas.iter().enumerate() {
        let rel = dominance::full_relation(&sub.system, &cs, delta, &sub.acts, &opts.tolerances)?;
        let max = sorted_names(&rel.act_names, &dominance::maximal_set(&rel));
        let und = sorted_names(&rel.act_names, &dominance::undominated_set(&rel));
        let marginal_pairs = rel
            .marginal
            .iter()
            .map(|&(i, j)| [rel.act_names[i].clone(), rel.act_names[j].clone()])
            .collect();
        let dot = emit_dot(&rel);
        let oracle_stats = match opts.oracle_samples {
            Some(samples) if samples > 0 => Some(oracle_stats_for(
                &sub,
                &cs,
                &rel,
                samples,
                opts.oracle_burn_in,
                opts.seed.wrapping_add((k as u64).wrapping_mul(0x9e3779b97f4a7c15)),
                &opts.tolerances,
            )?),
            _ => None,
        };
        per_delta.push(DeltaReport {
            delta,
            consistent: true,
            dominates: rel.dominates.clone(),
            opt_values: rel.opt_values.clone(),
            max,
            und,
            marginal_pairs,
            dot,
            oracle: oracle_stats,
        });
    }

    Ok(Report {
        states: m.space().names().to_vec(),
        actions: m.actions().to_vec(),
        num_cardinal: m.num_cardinal(),
        num_targets: m.num_targets(),
        delta_max: max_delta.value,
        delta_max_at_boundary: max_delta.at_boundary,
        uno,
        par,
        credal_strictly_positive: cs.strictly_positive(),
        per_delta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single_action_json() -> &'static str {
        r#"{
            "states": ["s1", "s2"],
            "credal": {"kind": "simplex"},
            "actions": [
                {"name": "A1", "values": [[0.4, 0.6], [0.5, 0.5]]}
            ],
            "num_cardinal": 1,
            "deltas": [0.0, 0.1]
        }"#
    }

    #[test]
    fn parse_serialize_roundtrip_is_idempotent() {
        let file = ProblemFile::from_json(single_action_json()).unwrap();
        let once = file.to_json();
        let twice = ProblemFile::from_json(&once).unwrap().to_json();
        assert_eq!(once, twice);
    }

    #[test]
    fn single_action_report_has_singleton_choice_sets() {
        let file = ProblemFile::from_json(single_action_json()).unwrap();
        let report = run(&file, &RunOptions::default()).unwrap();
        for dr in &report.per_delta {
            assert_eq!(dr.max, vec!["A1"]);
            assert_eq!(dr.und, vec!["A1"]);
        }
        assert_eq!(report.uno, vec!["A1"]);
        assert_eq!(report.par, vec!["A1"]);
    }

    #[test]
    fn out_of_range_value_is_a_validation_error_with_context() {
        let json = r#"{
            "states": ["s1"],
            "credal": {"kind": "simplex"},
            "actions": [{"name": "A1", "values": [[1.2]]}],
            "num_cardinal": 1,
            "deltas": [0.0]
        }"#;
        let file = ProblemFile::from_json(json).unwrap();
        let err = run(&file, &RunOptions::default()).unwrap_err();
        assert!(matches!(err, Error::Validation(_)));
        let msg = err.to_string();
        assert!(msg.contains("A1") && msg.contains("s1") && msg.contains("1.2"));
        assert_eq!(err.exit_code(), 1);
    }

    #[test]
    fn bad_delta_token_is_rejected() {
        let json = single_action_json().replace("[0.0, 0.1]", "\"sometimes\"");
        assert!(matches!(
            ProblemFile::from_json(&json),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn delta_beyond_max_is_rejected_with_the_computed_max() {
        let json = single_action_json().replace("[0.0, 0.1]", "[0.9]");
        let file = ProblemFile::from_json(&json).unwrap();
        let err = run(&file, &RunOptions::default()).unwrap_err();
        match err {
            Error::DeltaExceedsMax { delta, delta_max } => {
                assert!((delta - 0.9).abs() < 1e-12);
                assert!(delta_max < 0.9);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn auto_deltas_are_zero_half_max() {
        let json = single_action_json().replace("[0.0, 0.1]", "\"auto\"");
        let file = ProblemFile::from_json(&json).unwrap();
        let report = run(&file, &RunOptions::default()).unwrap();
        assert_eq!(report.per_delta.len(), 3);
        let d: Vec<f64> = report.per_delta.iter().map(|p| p.delta).collect();
        assert!(d[0].abs() < 1e-12);
        assert!((d[1] - 0.5 * report.delta_max).abs() < 1e-12);
        assert!((d[2] - report.delta_max).abs() < 1e-12);
    }

    #[test]
    fn dot_for_empty_strict_part_has_isolated_nodes() {
        use crate::dominance::DominanceRelation;
        let rel = DominanceRelation {
            act_names: vec!["a".into(), "b".into()],
            delta: 0.0,
            dominates: vec![vec![true, false], vec![false, true]],
            opt_values: vec![vec![0.0; 2]; 2],
            witnesses: vec![vec![None, None], vec![None, None]],
            marginal: vec![],
        };
        assert_eq!(emit_dot(&rel), "digraph hasse {\n  \"a\";\n  \"b\";\n}\n");
    }

    #[test]
    fn dot_for_chain_has_exactly_the_reduction_edges() {
        use crate::dominance::DominanceRelation;
        let rel = DominanceRelation {
            act_names: vec!["a".into(), "b".into(), "c".into()],
            delta: 0.0,
            dominates: vec![
                vec![true, true, true],
                vec![false, true, true],
                vec![false, false, true],
            ],
            opt_values: vec![vec![0.0; 3]; 3],
            witnesses: vec![vec![None, None, None]; 3],
            marginal: vec![],
        };
        assert_eq!(
            emit_dot(&rel),
            "digraph hasse {\n  \"a\";\n  \"b\";\n  \"c\";\n  \"a\" -> \"b\";\n  \"b\" -> \"c\";\n}\n"
        );
    }

    #[test]
    fn report_is_byte_deterministic() {
        let file = ProblemFile::from_json(single_action_json()).unwrap();
        let opts = RunOptions {
            oracle_samples: Some(50),
            seed: 7,
            ..RunOptions::default()
        };
        let a = run(&file, &opts).unwrap().to_json();
        let b = run(&file, &opts).unwrap().to_json();
        assert_eq!(a, b);
    }
}
