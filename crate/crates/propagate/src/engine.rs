//! Boundary scheduling and normalization.

use panto_diffs::{compose_judgement, Diff, JudgementDiff};
use panto_lang::Term;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::step::{rewrite_at, Rewrite};
use crate::{SchedulerConfig, SchedulerMode, StepTrace, TraceEntry};

/// The hex SHA-256 of the program's canonical text.
pub fn snapshot_hash(program: &Term) -> String {
    hex::encode(Sha256::digest(program.to_string().as_bytes()))
}

/// A normalized program.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Normalized {
    pub program: Term,
    /// The type diff of the top-level up boundary that was removed, if any.
    pub final_type_change: Option<Diff>,
    pub trace: StepTrace,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("step cap of {cap} exceeded; last program: {program}")]
    StepCap { cap: usize, program: Term, trace: StepTrace },
    #[error("no rule applies to the boundaries at {sites:?} in {program}")]
    Stuck { program: Term, sites: Vec<Vec<usize>>, trace: StepTrace },
    #[error("top-level up boundary changes the context: {jd}")]
    TopLevelContextChange { jd: JudgementDiff, trace: StepTrace },
}

/// A scheduler holding the random state of seeded mode.
#[derive(Debug, Clone)]
pub struct Engine {
    cfg: SchedulerConfig,
    rng: Option<ChaCha8Rng>,
}

impl Engine {
    pub fn new(cfg: SchedulerConfig) -> Engine {
        let rng = match cfg.mode {
            SchedulerMode::LeftmostOutermost => None,
            SchedulerMode::Seeded(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        };
        Engine { cfg, rng }
    }

    pub fn config(&self) -> SchedulerConfig {
        self.cfg
    }

    /// The boundary site and rewrite selected for the next step.
    pub fn select(&mut self, program: &Term) -> Option<(Vec<usize>, Rewrite)> {
        let sites = program.boundary_paths();
        match &mut self.rng {
            None => sites.into_iter().find_map(|s| rewrite_at(program, &s).map(|r| (s, r))),
            Some(rng) => {
                let mut options: Vec<(Vec<usize>, Rewrite)> =
                    sites.into_iter().filter_map(|s| rewrite_at(program, &s).map(|r| (s, r))).collect();
                if options.is_empty() {
                    return None;
                }
                let k = rng.gen_range(0..options.len());
                Some(options.swap_remove(k))
            }
        }
    }

    /// Applies one rule, returning the new program and its trace entry.
    pub fn step(&mut self, program: &Term) -> Option<(Term, TraceEntry)> {
        let (site, rw) = self.select(program)?;
        let next = rw.apply(program);
        let entry = TraceEntry { path: site, rule: rw.rule, hash: snapshot_hash(&next) };
        Some((next, entry))
    }
}

/// Applies one rule at the boundary the configured scheduler selects.
pub fn step_once(program: &Term, cfg: &SchedulerConfig) -> Option<(Term, TraceEntry)> {
    Engine::new(*cfg).step(program)
}

/// Steps until no rule applies, then removes a top-level up boundary.
#[allow(clippy::result_large_err)]
pub fn normalize(program: &Term, cfg: &SchedulerConfig) -> Result<Normalized, EngineError> {
    normalize_observed(program, cfg, |_, _, _| {})
}

/// [`normalize`], calling `observe(before, after, entry)` after every step.
#[allow(clippy::result_large_err)]
pub fn normalize_observed(
    program: &Term,
    cfg: &SchedulerConfig,
    mut observe: impl FnMut(&Term, &Term, &TraceEntry),
) -> Result<Normalized, EngineError> {
    let mut engine = Engine::new(*cfg);
    let mut trace = StepTrace::default();
    let mut current = program.clone();
    while let Some((next, entry)) = engine.step(&current) {
        if trace.len() >= cfg.step_cap {
            return Err(EngineError::StepCap { cap: cfg.step_cap, program: current, trace });
        }
        observe(&current, &next, &entry);
        trace.entries.push(entry);
        current = next;
    }
    let mut change: Option<JudgementDiff> = None;
    while let Term::Up(jd, body) = current {
        change = Some(match change {
            None => jd,
            Some(outer) => compose_judgement(&outer, &jd).expect("stacked top-level boundaries compose"),
        });
        current = *body;
    }
    let sites = current.boundary_paths();
    if !sites.is_empty() {
        return Err(EngineError::Stuck { program: current, sites, trace });
    }
    if let Some(jd) = &change {
        if !jd.ctx.is_identity() {
            return Err(EngineError::TopLevelContextChange { jd: jd.clone(), trace });
        }
    }
    Ok(Normalized { program: current, final_type_change: change.map(|jd| jd.ty), trace })
}
