//! Diagram → stack → group → census and diagram → Jones, with shared options.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bracket::{jones_capped, BracketError, JonesPoly, DEFAULT_STATE_CAP};
use crate::diagram::VirtualDiagram;
use crate::grouppres::{abelianization, is_free, tietze_simplify, wirtinger, Abelianization, Presentation, DEFAULT_BUDGET};
use crate::permcensus::{census, CensusError, CensusReport, DEFAULT_MAX_GENERATORS};
use crate::stack::{build_stack, StackError, StackSequence};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineOptions {
    pub degree: usize,
    pub budget: usize,
    pub max_generators: usize,
    pub state_cap: usize,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            degree: 5,
            budget: DEFAULT_BUDGET,
            max_generators: DEFAULT_MAX_GENERATORS,
            state_cap: DEFAULT_STATE_CAP,
        }
    }
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Stack(#[from] StackError),
    #[error(transparent)]
    Census(#[from] CensusError),
    #[error(transparent)]
    Bracket(#[from] BracketError),
}

/// A census outcome as tabulated: a syntactically free group is reported by
/// rank, anything else by its orbit count. Serialized as a bare number or
/// `{"free_rank": r}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CensusValue {
    Orbits(u64),
    Free { free_rank: usize },
}

impl fmt::Display for CensusValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CensusValue::Orbits(n) => write!(f, "{n}"),
            CensusValue::Free { free_rank: 2 } => f.write_str("free"),
            CensusValue::Free { free_rank } => write!(f, "free(rank {free_rank})"),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GroupOutcome {
    pub wirtinger_generators: usize,
    pub presentation: Presentation,
    pub tietze_steps: usize,
    pub partial: bool,
    pub abelianization: Abelianization,
    pub census: CensusReport,
    pub value: CensusValue,
}

/// Wirtinger presentation, Tietze simplification and S_n census.
pub fn group_census(d: &VirtualDiagram, opts: &PipelineOptions) -> Result<GroupOutcome, PipelineError> {
    let w = wirtinger(d);
    let s = tietze_simplify(&w, opts.budget);
    let report = census(&s.presentation, opts.degree, opts.max_generators)?;
    let value = match is_free(&s.presentation) {
        Some(free_rank) => CensusValue::Free { free_rank },
        None => CensusValue::Orbits(report.orbit_count),
    };
    Ok(GroupOutcome {
        wirtinger_generators: w.generator_count,
        abelianization: abelianization(&s.presentation),
        presentation: s.presentation,
        tietze_steps: s.steps,
        partial: s.partial,
        census: report,
        value,
    })
}

pub fn stack_group_census(
    d: &VirtualDiagram,
    seq: &StackSequence,
    opts: &PipelineOptions,
) -> Result<GroupOutcome, PipelineError> {
    group_census(&build_stack(d, seq)?, opts)
}

pub fn stack_jones(d: &VirtualDiagram, seq: &StackSequence, opts: &PipelineOptions) -> Result<JonesPoly, PipelineError> {
    Ok(jones_capped(&build_stack(d, seq)?, opts.state_cap)?)
}
