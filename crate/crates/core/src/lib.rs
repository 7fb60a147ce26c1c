//! Size-based nonmonotonic reasoning over finite models.
//!
//! * [`prefstruct`]: finite preferential structures and the μ operator.
//! * [`size_algebra`]: the big/medium/small algebra generated by μ, size
//!   relations, coherence conditions and exhaustive fact verifiers.
//! * [`inheritance`]: defeasible inheritance diagrams with specificity
//!   preemption and medium-set splitting.
//! * [`core_revision`]: depth, core and distance-based revision over
//!   propositional models.
//! * [`cli`]: the command-line front end.

pub mod cli;
pub mod core_revision;
pub mod generate;
pub mod inheritance;
pub mod prefstruct;
pub mod size_algebra;
pub mod sweep;

pub use prefstruct::{PreferentialStructure, StructureError, Subset};
pub use size_algebra::{Fact, Hypotheses, SizeAlgebra, SizeClass, SizeError, SizeVerdict, Witness};
