//! Stacks of virtual link diagrams and the invariants used to tell them
//! apart: Wirtinger link groups simplified by Tietze moves, censuses of
//! epimorphisms onto symmetric groups, and Kauffman-bracket Jones
//! polynomials. The Kishino family of virtual knots ships as fixtures.

pub mod diagram;
pub mod poly;
pub mod bracket;
pub mod stack;
pub mod grouppres;
pub mod permcensus;
pub mod pipeline;
pub mod expected;
pub mod kishino;
pub mod report;

pub use diagram::{parse_diagram, parse_pd, Crossing, CrossingKind, Dir, EdgeId, End, VirtualDiagram};
pub use stack::{build_stack, parse_stack_sequence, LayerSign, StackSequence};
pub use kishino::{identify, enumerate_variants, Identification, KishinoLabel};
pub use pipeline::{CensusValue, PipelineOptions};
pub use report::{build_report, Report, ReportOptions};
