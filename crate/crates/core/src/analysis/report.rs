use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::function::ExcludedLayerFunction;
use crate::synthesis::Verdict;

/// One membership question `target ∈ [{generator}]` and its answer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerdictEntry {
    pub target: ExcludedLayerFunction,
    pub generator: ExcludedLayerFunction,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FlagKind {
    /// Kept in a basis although redundancy against some other member is undecided.
    UnknownIrredundancy,
    /// No generating partner was proven.
    Unproven,
}

impl fmt::Display for FlagKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FlagKind::UnknownIrredundancy => "unknown-irredundancy",
            FlagKind::Unproven => "unproven",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flag {
    pub member: ExcludedLayerFunction,
    pub kind: FlagKind,
    pub reason: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GenerationReport {
    pub verdicts: Vec<VerdictEntry>,
    pub flags: Vec<Flag>,
    /// Bounds and preconditions the constructions relied on, one line each.
    pub bounds: Vec<String>,
    pub truncated: bool,
}

impl GenerationReport {
    pub fn proven(&self) -> impl Iterator<Item = &VerdictEntry> {
        self.verdicts.iter().filter(|v| v.verdict.is_proven())
    }

    pub fn refuted(&self) -> impl Iterator<Item = &VerdictEntry> {
        self.verdicts.iter().filter(|v| v.verdict.is_refuted())
    }

    pub fn unknown(&self) -> impl Iterator<Item = &VerdictEntry> {
        self.verdicts.iter().filter(|v| matches!(v.verdict, Verdict::Unknown(_)))
    }

    pub fn all_witnesses_verified(&self) -> bool {
        self.proven().all(|v| v.verdict.witness().is_some_and(|w| w.verified))
    }

    /// Distinct targets with a proven verdict.
    pub fn generated_targets(&self) -> Vec<ExcludedLayerFunction> {
        let mut out: Vec<_> = self.proven().map(|v| v.target).collect();
        out.sort();
        out.dedup();
        out
    }
}
