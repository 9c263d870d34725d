//! Witness-producing constructions.
//!
//! Every public constructor returns a [`Witness`] only after the formula has been
//! evaluated against the target: on all of {0,1,2}ⁿ when `n` is within the table cap,
//! otherwise on {1,2}ⁿ plus the zero-propagation argument (every generator is in R and
//! every variable occurs, so the formula is 0 wherever a component is 0).

mod lemmas;
mod nesting;
mod pipelines;
mod search;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::SynthesisError;
use crate::formula::{Formula, GeneratorSet};
use crate::function::{ExcludedLayerFunction, Semantics, DEFAULT_TABLE_ARITY_CAP};

pub use nesting::{layer_transversal, nest_i2};
pub use search::{Refutation, Verdict};
pub(crate) use search::arity_refutation;

/// Canonical S₋₁ member used when a construction only needs "some" generator that
/// yields i₂: the smallest one with `n > 3`, `e > 0`, `d > 0`.
pub fn canonical_i_source() -> ExcludedLayerFunction {
    ExcludedLayerFunction::new(5, 2, 3).expect("valid descriptor")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SynthConfig {
    /// Targets up to this arity are checked on all 3ⁿ points.
    pub witness_table_cap: usize,
    /// Work units (candidate tuples evaluated) the identification search may spend.
    pub search_budget: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig { witness_table_cap: DEFAULT_TABLE_ARITY_CAP, search_budget: 1_000_000 }
    }
}

/// How a witness was checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    /// Every point of {0,1,2}ⁿ compared.
    FullSweep,
    /// Every point of {1,2}ⁿ compared; tuples with a 0 covered by zero propagation.
    BinarySweep,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::FullSweep => "full-sweep",
            Regime::BinarySweep => "binary-sweep+zero-propagation",
        })
    }
}

/// Which construction produced a witness.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Construction {
    Identity,
    IdentificationI2,
    IChain,
    Symmetrization,
    DirectIdentification,
    FixedE,
    FixedD,
    Unbounded,
    IdentificationSearch,
    SFromSMinus1,
    RFromS,
    RFromSMinus1,
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Construction::Identity => "identity",
            Construction::IdentificationI2 => "i2-identification",
            Construction::IChain => "i-chain",
            Construction::Symmetrization => "symmetrization",
            Construction::DirectIdentification => "direct-identification",
            Construction::FixedE => "fixed-e-family",
            Construction::FixedD => "fixed-d-family",
            Construction::Unbounded => "unbounded-family",
            Construction::IdentificationSearch => "identification-search",
            Construction::SFromSMinus1 => "S-from-Sminus1",
            Construction::RFromS => "R-from-S",
            Construction::RFromSMinus1 => "R-from-Sminus1",
        })
    }
}

/// A checked certificate that `target` lies in the closure of `generators`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub target: Semantics,
    pub generators: GeneratorSet,
    pub formula: Formula,
    pub verified: bool,
    pub regime: Regime,
    pub check_points: u64,
    pub construction: Construction,
    /// The single-application function that a symmetrization step was applied to.
    pub intermediate: Option<Formula>,
    /// Deviations from the textbook construction, bounds used, and similar remarks.
    pub notes: Vec<String>,
}

/// Entry point for all constructions; holds the verification limits.
#[derive(Clone, Copy, Debug, Default)]
pub struct Synthesizer {
    pub config: SynthConfig,
}

impl Synthesizer {
    pub fn new(config: SynthConfig) -> Self {
        Synthesizer { config }
    }

    /// Evaluates `formula` against `target` and packages the result.
    pub fn certify(
        &self,
        target: Semantics,
        env: &GeneratorSet,
        formula: Formula,
        construction: Construction,
        intermediate: Option<Formula>,
        notes: Vec<String>,
    ) -> Result<Witness, SynthesisError> {
        let n = target.arity();
        let bound = formula.bind(env, n)?;
        let generators = env.restricted_to(&formula)?;
        let regime = if n <= self.config.witness_table_cap {
            Regime::FullSweep
        } else {
            let mut present = alloc::vec![false; n];
            for phi in formula.subformulas() {
                if let Formula::Var(i) = phi {
                    present[i - 1] = true;
                }
            }
            if !(bound.all_in_r() && target.in_r() && present.iter().all(|&p| p)) {
                return Err(SynthesisError::Unverifiable { arity: n, cap: self.config.witness_table_cap });
            }
            Regime::BinarySweep
        };
        let (check_points, disagreement) =
            bound.first_disagreement(regime == Regime::BinarySweep, |t| target.eval_unchecked(t));
        if let Some((tuple, expected, got)) = disagreement {
            return Err(SynthesisError::Verification { tuple, expected, got });
        }
        Ok(Witness {
            target,
            generators,
            formula,
            verified: true,
            regime,
            check_points,
            construction,
            intermediate,
            notes,
        })
    }
}
