//! Single-generator reduction and basis extraction for finite sets of excluded-layer
//! functions.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use super::report::{Flag, FlagKind, GenerationReport, VerdictEntry};
use crate::error::AnalysisError;
use crate::function::ExcludedLayerFunction;
use crate::synthesis::{Synthesizer, Verdict, Witness};

/// True when `f` provably lies outside `[generators]` because every generator has
/// smaller arity (only for `n > 3`). False means this test gives no verdict.
pub fn arity_impossibility(f: ExcludedLayerFunction, generators: &[ExcludedLayerFunction]) -> bool {
    let arities: Vec<usize> = generators.iter().map(|g| g.arity()).collect();
    crate::synthesis::arity_refutation(f.arity(), &arities).is_some()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    /// First generator (by arity, then e) with a proven witness.
    pub found: Option<(ExcludedLayerFunction, Witness)>,
    /// Every verdict computed, in the order tried.
    pub verdicts: Vec<VerdictEntry>,
    /// Set when no member can generate `f` by the arity bound.
    pub definitive_negative: bool,
}

/// Looks for a single member of `set` generating `f`.
pub fn reduce_to_single_generator(
    synth: &Synthesizer,
    f: ExcludedLayerFunction,
    set: &[ExcludedLayerFunction],
) -> Result<Reduction, AnalysisError> {
    if f.arity() <= 3 {
        return Err(AnalysisError::Precondition(format!("single-generator reduction needs arity > 3, got {f}")));
    }
    let mut order = set.to_vec();
    order.sort();
    order.dedup();
    let mut verdicts = Vec::new();
    let mut found = None;
    for g in order {
        let verdict = synth.from_generator(f, g);
        if let Verdict::Proven(w) = &verdict {
            found = Some((g, w.clone()));
        }
        verdicts.push(VerdictEntry { target: f, generator: g, verdict });
        if found.is_some() {
            break;
        }
    }
    Ok(Reduction { found, verdicts, definitive_negative: arity_impossibility(f, set) })
}

struct VerdictCache<'a> {
    synth: &'a Synthesizer,
    known: BTreeMap<(ExcludedLayerFunction, ExcludedLayerFunction), usize>,
    entries: Vec<VerdictEntry>,
}

impl VerdictCache<'_> {
    fn get(&mut self, target: ExcludedLayerFunction, generator: ExcludedLayerFunction) -> &Verdict {
        let i = match self.known.get(&(target, generator)) {
            Some(&i) => i,
            None => {
                let verdict = self.synth.from_generator(target, generator);
                self.entries.push(VerdictEntry { target, generator, verdict });
                self.known.insert((target, generator), self.entries.len() - 1);
                self.entries.len() - 1
            }
        };
        &self.entries[i].verdict
    }
}

/// Removal order: descending arity, then descending e.
fn removal_key(f: &ExcludedLayerFunction) -> (core::cmp::Reverse<usize>, core::cmp::Reverse<usize>) {
    (core::cmp::Reverse(f.arity()), core::cmp::Reverse(f.e()))
}

/// Drops members generated by a single remaining member until nothing changes.
///
/// Returns the remaining members (ascending arity, then e) and every verdict computed.
/// A kept member whose verdict against some other kept member is unknown is flagged.
pub fn find_basis(
    synth: &Synthesizer,
    set: &[ExcludedLayerFunction],
) -> Result<(Vec<ExcludedLayerFunction>, GenerationReport), AnalysisError> {
    for (i, f) in set.iter().enumerate() {
        if let Some(g) = set[i + 1..].iter().find(|g| *g == f) {
            return Err(AnalysisError::CongruentPair(f.to_string(), g.to_string()));
        }
    }
    let mut remaining = set.to_vec();
    remaining.sort_by_key(removal_key);
    let mut cache = VerdictCache { synth, known: BTreeMap::new(), entries: Vec::new() };
    'pass: loop {
        for pos in 0..remaining.len() {
            let candidate = remaining[pos];
            let mut others: Vec<_> = remaining.iter().copied().filter(|g| *g != candidate).collect();
            others.sort();
            for g in others {
                if cache.get(candidate, g).is_proven() {
                    remaining.remove(pos);
                    continue 'pass;
                }
            }
        }
        break;
    }
    let mut report = GenerationReport::default();
    for &b in &remaining {
        let undecided: Vec<_> = remaining
            .iter()
            .copied()
            .filter(|g| *g != b && matches!(cache.get(b, *g), Verdict::Unknown(_)))
            .collect();
        if !undecided.is_empty() {
            let names: Vec<_> = undecided.iter().map(|g| g.to_string()).collect();
            report.flags.push(Flag {
                member: b,
                kind: FlagKind::UnknownIrredundancy,
                reason: format!("generation from {} neither proven nor refuted", names.join(", ")),
            });
        }
    }
    report.verdicts = cache.entries;
    for entry in &report.verdicts {
        if let Some(w) = entry.verdict.witness() {
            for note in &w.notes {
                report.bounds.push(format!("{} from {}: {note}", entry.target, entry.generator));
            }
        }
    }
    remaining.sort();
    Ok((remaining, report))
}
