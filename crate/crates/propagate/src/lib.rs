//! Small-step propagation of diff boundaries through typed terms.
//!
//! A program containing `down` and `up` boundaries is rewritten one rule
//! application at a time until only a top-level up boundary (if any) is
//! left. [`normalize`] strips that boundary and reports its type diff as
//! the change to the program's type.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

pub mod engine;
pub mod metric;
pub mod monitor;
pub mod neutral;
pub mod step;
pub mod unify;

pub use engine::{normalize, normalize_observed, snapshot_hash, step_once, Engine, EngineError, Normalized};
pub use metric::{metric, metric_decreases, BoundaryMetric, Metric};
pub use monitor::{monitor_invariants, Property, Report, Violation};
pub use neutral::{is_maximal_neutral, is_neutral};
pub use step::{applicable_rule, rewrite_at, Rewrite};
pub use unify::{unify_diff, Unifier};

/// The name of a step rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum RuleId {
    PropagateDown,
    PropagateUp,
    PropagateVarDown1,
    PropagateVarDown2,
    InsertAbsDown,
    DeleteAbsDown,
    DeleteAbsUp,
    InsertAppUp,
    DisplaceAppUp,
    DeleteAppDown,
    LocalToFree,
    FreeToLocal,
    IdentityDown,
    IdentityUp,
    Interchange1,
    Interchange2,
    NeutralErrorDown,
    NeutralErrorUp,
    FallthroughErrorDown,
    FallthroughErrorUp,
}

impl RuleId {
    pub const ALL: [RuleId; 20] = [
        RuleId::PropagateDown,
        RuleId::PropagateUp,
        RuleId::PropagateVarDown1,
        RuleId::PropagateVarDown2,
        RuleId::InsertAbsDown,
        RuleId::DeleteAbsDown,
        RuleId::DeleteAbsUp,
        RuleId::InsertAppUp,
        RuleId::DisplaceAppUp,
        RuleId::DeleteAppDown,
        RuleId::LocalToFree,
        RuleId::FreeToLocal,
        RuleId::IdentityDown,
        RuleId::IdentityUp,
        RuleId::Interchange1,
        RuleId::Interchange2,
        RuleId::NeutralErrorDown,
        RuleId::NeutralErrorUp,
        RuleId::FallthroughErrorDown,
        RuleId::FallthroughErrorUp,
    ];

    /// True for the rules that act on variables and their bindings.
    pub fn is_variable_rule(self) -> bool {
        matches!(
            self,
            RuleId::PropagateVarDown1 | RuleId::PropagateVarDown2 | RuleId::LocalToFree | RuleId::FreeToLocal
        )
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for RuleId {
    type Err = String;

    fn from_str(s: &str) -> Result<RuleId, String> {
        RuleId::ALL
            .into_iter()
            .find(|r| r.to_string() == s)
            .ok_or_else(|| format!("unknown rule '{s}'"))
    }
}

/// The order in which boundaries are chosen for stepping.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchedulerMode {
    /// The first steppable boundary in pre-order.
    LeftmostOutermost,
    /// A uniformly random steppable boundary, from a seeded generator.
    Seeded(u64),
}

pub const DEFAULT_STEP_CAP: usize = 100_000;

/// Scheduler settings for [`normalize`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SchedulerConfig {
    pub mode: SchedulerMode,
    pub step_cap: usize,
}

impl Default for SchedulerConfig {
    fn default() -> SchedulerConfig {
        SchedulerConfig { mode: SchedulerMode::LeftmostOutermost, step_cap: DEFAULT_STEP_CAP }
    }
}

impl SchedulerConfig {
    pub fn seeded(seed: u64) -> SchedulerConfig {
        SchedulerConfig { mode: SchedulerMode::Seeded(seed), ..SchedulerConfig::default() }
    }

    /// The default configuration with the step cap taken from
    /// `PANTO_STEP_CAP` when it holds a positive integer.
    pub fn from_env() -> SchedulerConfig {
        let cap = std::env::var("PANTO_STEP_CAP")
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .filter(|&n| n > 0)
            .unwrap_or(DEFAULT_STEP_CAP);
        SchedulerConfig { step_cap: cap, ..SchedulerConfig::default() }
    }

    pub fn with_mode(self, mode: SchedulerMode) -> SchedulerConfig {
        SchedulerConfig { mode, ..self }
    }
}

/// One step: where it happened, which rule fired, and the hash of the
/// program it produced.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceEntry {
    pub path: Vec<usize>,
    pub rule: RuleId,
    pub hash: String,
}

/// The steps taken by a normalization, in order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct StepTrace {
    pub entries: Vec<TraceEntry>,
}

impl StepTrace {
    pub fn rules(&self) -> Vec<RuleId> {
        self.entries.iter().map(|e| e.rule).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}
