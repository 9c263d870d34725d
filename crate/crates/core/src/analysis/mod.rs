//! Closure oracle, rewriting, basis finding and family analysis.

mod basis;
mod closure;
mod family;
mod rclosed;
mod report;
mod rewrite;

pub use basis::{arity_impossibility, find_basis, reduce_to_single_generator, Reduction};
pub use closure::{closure_bfs, closure_search, ClosureConfig, ClosureEntry, ClosureIndex};
pub use family::{family_mutual_generation, no_basis_evidence, FamilyKind, FamilySpec};
pub use rclosed::{
    check_r_properties, random_r_sample, verify_r_closed, verify_r_closed_with, RCheck, RClosedReport, SampleShape,
};
pub use report::{Flag, FlagKind, GenerationReport, VerdictEntry};
pub use rewrite::{replace_small_applications, Rewrite};
