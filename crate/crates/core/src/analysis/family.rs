//! Infinite families of excluded-layer functions: prefixes, generating partners, and
//! mutual generation.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use super::report::{Flag, FlagKind, GenerationReport, VerdictEntry};
use crate::error::{AnalysisError, SynthesisError};
use crate::function::ExcludedLayerFunction;
use crate::synthesis::{Synthesizer, Verdict, Witness};
use crate::tuple::Layer;

/// How far past the prefix a partner is searched for in the infinite families.
const PARTNER_SEARCH_LIMIT: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    /// All members share `e`; arities run `start, start+step, …`.
    FixedE(usize),
    /// All members share `d`.
    FixedD(usize),
    /// An explicit finite list of excluded layers.
    Unbounded(Vec<Layer>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub start: Option<usize>,
    pub step: usize,
}

impl FamilySpec {
    pub fn fixed_e(e: usize) -> Self {
        FamilySpec { kind: FamilyKind::FixedE(e), start: None, step: 1 }
    }

    pub fn fixed_d(d: usize) -> Self {
        FamilySpec { kind: FamilyKind::FixedD(d), start: None, step: 1 }
    }

    pub fn unbounded(layers: Vec<Layer>) -> Self {
        FamilySpec { kind: FamilyKind::Unbounded(layers), start: None, step: 1 }
    }

    pub fn with_start(mut self, start: usize) -> Self {
        self.start = Some(start);
        self
    }

    pub fn with_step(mut self, step: usize) -> Self {
        self.step = step;
        self
    }

    /// First arity of a fixed family; defaults to `max(4, e+1)` (or `d+1`).
    pub fn first_arity(&self) -> usize {
        match self.kind {
            FamilyKind::FixedE(k) | FamilyKind::FixedD(k) => self.start.unwrap_or(4.max(k + 1)),
            FamilyKind::Unbounded(_) => 0,
        }
    }

    pub fn validate(&self) -> Result<(), AnalysisError> {
        let bad = |msg: String| Err(AnalysisError::Family(msg));
        match &self.kind {
            FamilyKind::FixedE(k) | FamilyKind::FixedD(k) => {
                if self.step == 0 {
                    return bad(String::from("step must be positive"));
                }
                let start = self.first_arity();
                if start == 0 || start < *k {
                    return bad(format!("start arity {start} is below the fixed count {k}"));
                }
            }
            FamilyKind::Unbounded(layers) => {
                if self.start.is_some() || self.step != 1 {
                    return bad(String::from("start and step apply only to fixed_e and fixed_d families"));
                }
                for (i, l) in layers.iter().enumerate() {
                    if l.arity() == 0 {
                        return bad(String::from("member (0,0) has arity 0"));
                    }
                    if layers[..i].contains(l) {
                        return bad(format!("member {l} listed twice; the two are congruent"));
                    }
                }
            }
        }
        Ok(())
    }

    /// Member `i` (0-based), or `None` past the end of a list.
    pub fn member(&self, i: usize) -> Option<ExcludedLayerFunction> {
        match &self.kind {
            FamilyKind::FixedE(e) => {
                let n = self.first_arity().checked_add(i.checked_mul(self.step)?)?;
                ExcludedLayerFunction::new(n, *e, n.checked_sub(*e)?).ok()
            }
            FamilyKind::FixedD(d) => {
                let n = self.first_arity().checked_add(i.checked_mul(self.step)?)?;
                ExcludedLayerFunction::new(n, n.checked_sub(*d)?, *d).ok()
            }
            FamilyKind::Unbounded(layers) => layers.get(i).and_then(|l| ExcludedLayerFunction::new(l.arity(), l.e, l.d).ok()),
        }
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> Option<usize> {
        match &self.kind {
            FamilyKind::Unbounded(layers) => Some(layers.len()),
            _ => None,
        }
    }

    pub fn prefix(&self, count: usize) -> Result<Vec<ExcludedLayerFunction>, AnalysisError> {
        self.validate()?;
        if let Some(len) = self.len() {
            if count > len {
                return Err(AnalysisError::Family(format!("prefix {count} exceeds the {len} listed members")));
            }
        }
        (0..count)
            .map(|i| self.member(i).ok_or_else(|| AnalysisError::Family(format!("member {i} overflows"))))
            .collect()
    }

    fn candidates(&self) -> impl Iterator<Item = ExcludedLayerFunction> + '_ {
        let limit = self.len().unwrap_or(PARTNER_SEARCH_LIMIT);
        (0..limit).map_while(|i| self.member(i))
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            FamilyKind::FixedE(e) => write!(f, "fixed_e={e}")?,
            FamilyKind::FixedD(d) => write!(f, "fixed_d={d}")?,
            FamilyKind::Unbounded(layers) => {
                let items: Vec<String> = layers.iter().map(|l| format!("({},{})", l.e, l.d)).collect();
                return write!(f, "list={}", items.join(";"));
            }
        }
        if let Some(start) = self.start {
            write!(f, " start={start}")?;
        }
        if self.step != 1 {
            write!(f, " step={}", self.step)?;
        }
        Ok(())
    }
}

/// Which lemma links two members of families of the same kind.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Lemma {
    FixedE,
    FixedD,
    Unbounded,
}

fn shared_lemma(a: &FamilyKind, b: &FamilyKind) -> Option<Lemma> {
    match (a, b) {
        (FamilyKind::FixedE(x), FamilyKind::FixedE(y)) if x == y => Some(Lemma::FixedE),
        (FamilyKind::FixedD(x), FamilyKind::FixedD(y)) if x == y => Some(Lemma::FixedD),
        (FamilyKind::Unbounded(_), FamilyKind::Unbounded(_)) => Some(Lemma::Unbounded),
        _ => None,
    }
}

/// Whether the lemma's bound lets `g` generate `f`.
fn bound_holds(lemma: Lemma, f: ExcludedLayerFunction, g: ExcludedLayerFunction) -> bool {
    match lemma {
        Lemma::FixedE if f.e() == 0 => g.e() == 0 && g.arity() > f.arity(),
        Lemma::FixedE => g.e() == f.e() && f.d() > 0 && (f.e() + 1).checked_mul(f.d()).is_some_and(|b| g.d() > b),
        Lemma::FixedD if f.d() == 0 => g.d() == 0 && g.arity() > f.arity(),
        Lemma::FixedD => g.d() == f.d() && f.e() > 0 && (f.d() + 1).checked_mul(f.e()).is_some_and(|b| g.e() > b),
        Lemma::Unbounded => {
            let (Some(p), Some(q)) = (1usize.checked_shl(f.e() as u32), 1usize.checked_shl(f.d() as u32)) else {
                return false;
            };
            f.e() > 0 && f.d() > 0 && g.e() > 0 && g.d() >= 1 && g.e() + 1 >= p && (q - 1).checked_mul(p).is_some_and(|b| g.d() >= b)
        }
    }
}

fn bound_text(lemma: Lemma, f: ExcludedLayerFunction) -> String {
    match lemma {
        Lemma::FixedE if f.e() == 0 => format!("arity(g) > {}", f.arity()),
        Lemma::FixedE => format!("d_g > (e+1)*d_f = {}", (f.e() + 1) * f.d()),
        Lemma::FixedD if f.d() == 0 => format!("arity(g) > {}", f.arity()),
        Lemma::FixedD => format!("e_g > (d+1)*e_f = {}", (f.d() + 1) * f.e()),
        Lemma::Unbounded => {
            let p = 1u128.checked_shl(f.e() as u32).unwrap_or(u128::MAX);
            let q = 1u128.checked_shl(f.d() as u32).unwrap_or(u128::MAX);
            format!("e_g >= 2^e_f - 1 = {}, d_g >= 2^e_f*(2^d_f - 1) = {}", p - 1, p.saturating_mul(q - 1))
        }
    }
}

fn run_lemma(
    synth: &Synthesizer,
    lemma: Lemma,
    f: ExcludedLayerFunction,
    g: ExcludedLayerFunction,
) -> Result<Witness, SynthesisError> {
    match lemma {
        Lemma::FixedE => synth.family_fixed_e(f, g),
        Lemma::FixedD => synth.family_fixed_d(f, g),
        Lemma::Unbounded => synth.family_unbounded(f, g),
    }
}

/// Finds the smallest-arity partner of `f` in `pool` satisfying the lemma bound and
/// records the result in `report`.
fn prove_member(
    synth: &Synthesizer,
    lemma: Option<Lemma>,
    f: ExcludedLayerFunction,
    pool: &FamilySpec,
    report: &mut GenerationReport,
) {
    let Some(lemma) = lemma else {
        report.flags.push(Flag {
            member: f,
            kind: FlagKind::Unproven,
            reason: String::from("families do not satisfy the hypotheses of the same lemma"),
        });
        return;
    };
    let partner = pool
        .candidates()
        .filter(|&g| g != f && bound_holds(lemma, f, g))
        .min_by_key(|g| (g.arity(), g.e()));
    let Some(g) = partner else {
        report.flags.push(Flag {
            member: f,
            kind: FlagKind::Unproven,
            reason: format!("no member of {pool} satisfies {}", bound_text(lemma, f)),
        });
        return;
    };
    report.bounds.push(format!("{f} from {g}: {}", bound_text(lemma, f)));
    let verdict = match run_lemma(synth, lemma, f, g) {
        Ok(w) => Verdict::Proven(w),
        Err(e) => {
            report.flags.push(Flag { member: f, kind: FlagKind::Unproven, reason: e.to_string() });
            Verdict::Unknown(e.to_string())
        }
    };
    report.verdicts.push(VerdictEntry { target: f, generator: g, verdict });
}

fn kind_lemma(kind: &FamilyKind) -> Lemma {
    match kind {
        FamilyKind::FixedE(_) => Lemma::FixedE,
        FamilyKind::FixedD(_) => Lemma::FixedD,
        FamilyKind::Unbounded(_) => Lemma::Unbounded,
    }
}

/// For each of the first `prefix_count` members, a verified witness that some other
/// member of the family generates it.
pub fn no_basis_evidence(
    synth: &Synthesizer,
    family: &FamilySpec,
    prefix_count: usize,
) -> Result<GenerationReport, AnalysisError> {
    if prefix_count < 2 {
        return Err(AnalysisError::Family(format!("prefix must have at least 2 members, got {prefix_count}")));
    }
    let members = family.prefix(prefix_count)?;
    let mut report = GenerationReport::default();
    for f in members {
        prove_member(synth, Some(kind_lemma(&family.kind)), f, family, &mut report);
    }
    Ok(report)
}

/// Every prefix member of each family generated from some member of the other.
pub fn family_mutual_generation(
    synth: &Synthesizer,
    first: &FamilySpec,
    second: &FamilySpec,
    prefix_count: usize,
) -> Result<GenerationReport, AnalysisError> {
    let lemma = shared_lemma(&first.kind, &second.kind);
    let mut report = GenerationReport::default();
    for (source, pool) in [(first, second), (second, first)] {
        for f in source.prefix(prefix_count)? {
            if pool.candidates().any(|g| g == f) {
                report.verdicts.push(VerdictEntry { target: f, generator: f, verdict: synth.from_generator(f, f) });
                continue;
            }
            prove_member(synth, lemma, f, pool, &mut report);
        }
    }
    Ok(report)
}
