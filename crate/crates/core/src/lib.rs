//! Closed classes of three-valued functions generated by symmetric functions that are 1
//! on all of {1,2}ⁿ except one layer.
//!
//! The crate is `no_std` and needs only `alloc`. It provides:
//!
//! * compact and tabulated representations of the classes R, S and S₋₁ ([`function`]),
//! * formula terms over named generators with an S-expression syntax ([`formula`], [`sexpr`]),
//! * witness-producing constructions for membership in a closure ([`synthesis`]),
//! * a brute-force closure oracle, basis finding and family analysis ([`analysis`]).
#![no_std]

extern crate alloc;

pub mod analysis;
pub mod error;
pub mod formula;
pub mod function;
pub mod perm;
pub mod sexpr;
pub mod synthesis;
pub mod tuple;

pub use error::{AnalysisError, CoreError, FormulaError, SynthesisError};
pub use formula::{BoundFormula, Formula, Generator, GeneratorSet};
pub use function::{
    congruent, enumerate_s_minus_1, ClassTags, ExcludedLayerFunction, Semantics, SymmetricRFunction,
    TernaryFunction,
};
pub use perm::VariablePermutation;
pub use synthesis::{Construction, Regime, SynthConfig, Synthesizer, Verdict, Witness};
pub use tuple::{layer_of, Layer, TernaryTuple};
