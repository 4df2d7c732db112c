//! Epimorphisms from finitely presented groups onto symmetric groups,
//! counted up to conjugation in the target.

mod census;
mod perm;

pub use census::{census, CensusError, CensusReport, CensusStats, DEFAULT_MAX_GENERATORS};
pub use perm::{conjugacy_class_reps, evaluate_word, factorial, generates_full, Perm, SymmetricGroup, MAX_DEGREE};
