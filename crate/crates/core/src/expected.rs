//! Published reference values for the Kishino family, embedded from
//! `data/expected_values.json`. Comparisons against these are reported,
//! never adjusted.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::bracket::JonesPoly;
use crate::kishino::KishinoLabel;
use crate::pipeline::CensusValue;

const RAW: &str = include_str!("../data/expected_values.json");

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExpectedValues {
    pub version: u32,
    pub degree: usize,
    pub census: Vec<CensusEntry>,
    pub census_three_layer: Vec<CensusEntry>,
    pub jones_self: Vec<JonesEntry>,
    pub jones_stack: Vec<JonesEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CensusEntry {
    pub label: KishinoLabel,
    pub stack: String,
    pub census: CensusValue,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JonesEntry {
    pub label: KishinoLabel,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stack: Option<String>,
    /// The value as typeset, kept for display.
    pub printed: String,
    /// Expanded form: `(exponent of t^{1/2}, coefficient)`.
    pub q_terms: Vec<(i32, i64)>,
}

impl JonesEntry {
    pub fn poly(&self) -> JonesPoly {
        JonesPoly::from_q_terms(self.q_terms.iter().copied())
    }
}

impl ExpectedValues {
    pub fn census_for(&self, label: KishinoLabel, stack: &str) -> Option<CensusValue> {
        self.census.iter().chain(&self.census_three_layer).find(|e| e.label == label && e.stack == stack).map(|e| e.census)
    }

    pub fn jones_self(&self, label: KishinoLabel) -> Option<&JonesEntry> {
        self.jones_self.iter().find(|e| e.label == label)
    }

    pub fn jones_stack(&self, label: KishinoLabel, stack: &str) -> Option<&JonesEntry> {
        self.jones_stack.iter().find(|e| e.label == label && e.stack.as_deref() == Some(stack))
    }
}

pub fn expected() -> &'static ExpectedValues {
    static CELL: OnceLock<ExpectedValues> = OnceLock::new();
    CELL.get_or_init(|| serde_json::from_str(RAW).expect("embedded expected values parse"))
}
