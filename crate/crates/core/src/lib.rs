//! Dominance checks for multi-target decision problems under imprecise
//! probabilistic knowledge.
//!
//! Actions are scored per state by several `[0, 1]`-valued targets, cardinal
//! or ordinal; probabilistic knowledge is a finitely generated credal set.
//! An action dominates another at granularity `delta` when its expected
//! utility is at least as high for every utility representation compatible
//! with the induced preference system (with margin `delta`) and every
//! probability in the credal set. Each pairwise check reduces to one small
//! linear program per credal extreme point; choice sets under the strong
//! (maximal) and weak (undominated) reading, the maximal consistent delta,
//! Pareto and uniform-optimality baselines, and DOT Hasse diagrams are
//! derived on top. A seeded hit-and-run sampler over the utility polytope
//! provides an independent falsification check of the LP verdicts.

pub mod credal;
pub mod dominance;
pub mod error;
pub mod lp;
pub mod mtdp;
pub mod oracle;
pub mod preference;
pub mod report;

pub use credal::{CredalSet, EnumerationGuard, ExpectationBound, StateSpace};
pub use dominance::{Act, DominanceRelation, HasseDiagram};
pub use error::{Error, Result};
pub use lp::{LpOutcome, LpProblem, LpStatus, Tolerances, EPS_FEAS, EPS_OPT};
pub use mtdp::{EvalVector, Mtdp, SubSystem};
pub use preference::{MaxDelta, NablaConstraints, PreferenceSystem, RelationParts, UtilityVector};
pub use report::{ProblemFile, Report, RunOptions};
