//! Report documents shared by the text and JSON renderers.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use tcw_core::analysis::{Flag, GenerationReport, VerdictEntry};
use tcw_core::{Semantics, Verdict, Witness};

use crate::textfmt::format_function;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerdictKind {
    Proven,
    Refuted,
    Unknown,
}

impl VerdictKind {
    pub fn exit_code(self) -> u8 {
        match self {
            VerdictKind::Proven => 0,
            VerdictKind::Refuted => 2,
            VerdictKind::Unknown => 3,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            VerdictKind::Proven => "proven",
            VerdictKind::Refuted => "refuted",
            VerdictKind::Unknown => "unknown",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorRecord {
    pub name: String,
    pub function: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub target: String,
    pub generators: Vec<GeneratorRecord>,
    /// S-expression.
    pub formula: String,
    pub verified: bool,
    pub regime: String,
    pub check_points: u64,
    pub construction: String,
    pub intermediate: Option<String>,
    pub notes: Vec<String>,
}

impl From<&Witness> for WitnessRecord {
    fn from(w: &Witness) -> Self {
        WitnessRecord {
            target: format_function(&w.target),
            generators: w
                .generators
                .iter()
                .map(|g| GeneratorRecord { name: g.name().to_string(), function: format_function(g.semantics()) })
                .collect(),
            formula: w.formula.to_string(),
            verified: w.verified,
            regime: w.regime.to_string(),
            check_points: w.check_points,
            construction: w.construction.to_string(),
            intermediate: w.intermediate.as_ref().map(|f| f.to_string()),
            notes: w.notes.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictRecord {
    pub target: String,
    /// Single generator asked about, or none when the question is about a whole set.
    pub generator: Option<String>,
    pub verdict: VerdictKind,
    pub reason: Option<String>,
    pub witness: Option<WitnessRecord>,
}

impl VerdictRecord {
    pub fn from_verdict(target: String, generator: Option<String>, verdict: &Verdict) -> Self {
        let (kind, reason, witness) = match verdict {
            Verdict::Proven(w) => (VerdictKind::Proven, None, Some(WitnessRecord::from(w))),
            Verdict::Refuted(r) => (VerdictKind::Refuted, Some(r.to_string()), None),
            Verdict::Unknown(why) => (VerdictKind::Unknown, Some(why.clone()), None),
        };
        VerdictRecord { target, generator, verdict: kind, reason, witness }
    }

    pub fn from_entry(entry: &VerdictEntry) -> Self {
        Self::from_verdict(
            format_function(&Semantics::Excluded(entry.target)),
            Some(format_function(&Semantics::Excluded(entry.generator))),
            &entry.verdict,
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlagRecord {
    pub member: String,
    pub kind: String,
    pub reason: String,
}

impl From<&Flag> for FlagRecord {
    fn from(f: &Flag) -> Self {
        FlagRecord {
            member: format_function(&Semantics::Excluded(f.member)),
            kind: f.kind.to_string(),
            reason: f.reason.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRow {
    pub suite: String,
    pub check: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evaluation {
    pub formula: String,
    pub tuple: Vec<u8>,
    pub value: u8,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub proven: usize,
    pub refuted: usize,
    pub unknown: usize,
    pub flags: usize,
    pub checks_passed: usize,
    pub checks_failed: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub functions: Vec<String>,
    #[serde(default)]
    pub verdicts: Vec<VerdictRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<String>>,
    #[serde(default)]
    pub flags: Vec<FlagRecord>,
    #[serde(default)]
    pub bounds: Vec<String>,
    #[serde(default)]
    pub truncated: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<CheckRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evaluation: Option<Evaluation>,
    #[serde(default)]
    pub summary: Summary,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report { command: command.to_string(), ..Report::default() }
    }

    /// Copies verdicts, flags, bounds and truncation from a core report.
    pub fn absorb(&mut self, report: &GenerationReport) {
        self.verdicts.extend(report.verdicts.iter().map(VerdictRecord::from_entry));
        self.flags.extend(report.flags.iter().map(FlagRecord::from));
        self.bounds.extend(report.bounds.iter().cloned());
        self.truncated |= report.truncated;
    }

    /// Recomputes the summary counts; call before rendering.
    pub fn finish(mut self) -> Self {
        let count = |k| self.verdicts.iter().filter(|v| v.verdict == k).count();
        self.summary = Summary {
            proven: count(VerdictKind::Proven),
            refuted: count(VerdictKind::Refuted),
            unknown: count(VerdictKind::Unknown),
            flags: self.flags.len(),
            checks_passed: self.checks.iter().filter(|c| c.passed).count(),
            checks_failed: self.checks.iter().filter(|c| !c.passed).count(),
        };
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for f in &self.functions {
            let _ = writeln!(out, "{f}");
        }
        if let Some(e) = &self.evaluation {
            let tuple: Vec<String> = e.tuple.iter().map(u8::to_string).collect();
            let _ = writeln!(out, "{} at ({}) = {}", e.formula, tuple.join(","), e.value);
        }
        if let Some(basis) = &self.basis {
            let _ = writeln!(out, "basis: {{{}}}", basis.join("; "));
        }
        for v in &self.verdicts {
            match &v.generator {
                Some(g) => {
                    let _ = writeln!(out, "verdict {}: {} from {}", v.verdict.as_str(), v.target, g);
                }
                None => {
                    let _ = writeln!(out, "verdict {}: {}", v.verdict.as_str(), v.target);
                }
            }
            if let Some(reason) = &v.reason {
                let _ = writeln!(out, "  reason: {reason}");
            }
            if let Some(w) = &v.witness {
                let _ = writeln!(out, "  formula: {}", w.formula);
                let names: Vec<&str> = w.generators.iter().map(|g| g.name.as_str()).collect();
                let _ = writeln!(out, "  generators: {}", names.join(", "));
                let _ = writeln!(
                    out,
                    "  construction: {}, regime: {}, checked points: {}, verified: {}",
                    w.construction, w.regime, w.check_points, w.verified
                );
                if let Some(i) = &w.intermediate {
                    let _ = writeln!(out, "  intermediate: {i}");
                }
                for n in &w.notes {
                    let _ = writeln!(out, "  note: {n}");
                }
            }
        }
        for f in &self.flags {
            let _ = writeln!(out, "flag {}: {} ({})", f.kind, f.member, f.reason);
        }
        for b in &self.bounds {
            let _ = writeln!(out, "bound: {b}");
        }
        for c in &self.checks {
            let _ = writeln!(out, "{:<8} {:<4} {}: {}", c.suite, if c.passed { "PASS" } else { "FAIL" }, c.check, c.detail);
        }
        if self.truncated {
            let _ = writeln!(out, "truncated: yes");
        }
        let s = &self.summary;
        if !self.verdicts.is_empty() || !self.flags.is_empty() {
            let _ = writeln!(out, "summary: {} proven, {} refuted, {} unknown, {} flags", s.proven, s.refuted, s.unknown, s.flags);
        }
        if !self.checks.is_empty() {
            let _ = writeln!(out, "summary: {} passed, {} failed", s.checks_passed, s.checks_failed);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use tcw_core::{ExcludedLayerFunction, Synthesizer};

    fn s(n: usize, e: usize, d: usize) -> ExcludedLayerFunction {
        ExcludedLayerFunction::new(n, e, d).unwrap()
    }

    fn sample() -> Report {
        let synth = Synthesizer::default();
        let (basis, gr) = tcw_core::analysis::find_basis(&synth, &[s(4, 1, 3), s(12, 1, 11)]).unwrap();
        let mut r = Report::new("basis");
        r.basis = Some(basis.iter().map(|f| format_function(&Semantics::Excluded(*f))).collect());
        r.absorb(&gr);
        r.finish()
    }

    #[test]
    fn json_roundtrip() {
        let r = sample();
        let back: Report = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert_eq!((r.summary.proven, r.summary.refuted), (1, 1));
    }

    #[test]
    fn text_lists_every_verdict() {
        let r = sample();
        let text = r.to_text();
        let lines: Vec<&str> = text.lines().filter(|l| l.starts_with("verdict ")).collect();
        assert_eq!(lines.len(), r.verdicts.len());
        for (line, v) in lines.iter().zip(&r.verdicts) {
            assert!(line.starts_with(&format!("verdict {}: {}", v.verdict.as_str(), v.target)));
        }
        let w = r.verdicts.iter().find_map(|v| v.witness.as_ref()).unwrap();
        assert!(text.contains(&w.formula));
        assert!(text.contains("regime: full-sweep"));
        assert!(text.contains("basis: {sminus1 n=12 e=1 d=11}"));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(VerdictKind::Proven.exit_code(), 0);
        assert_eq!(VerdictKind::Refuted.exit_code(), 2);
        assert_eq!(VerdictKind::Unknown.exit_code(), 3);
    }
}
