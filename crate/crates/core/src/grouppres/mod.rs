//! Finitely presented groups: words, Wirtinger presentations of diagrams,
//! Tietze simplification and abelianization.

mod abelian;
mod presentation;
mod tietze;
mod wirtinger;
mod word;

pub use abelian::{abelianization, Abelianization};
pub use presentation::{default_names, parse_presentation, Presentation, PresentationError};
pub use tietze::{is_free, tietze_simplify, Simplified, DEFAULT_BUDGET};
pub use wirtinger::{arcs, wirtinger};
pub use word::{Letter, Word};
