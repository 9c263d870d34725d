//! Built-in verification suites run by `tcw verify`.

use tcw_core::analysis::{closure_search, verify_r_closed};
use tcw_core::{
    enumerate_s_minus_1, ExcludedLayerFunction, GeneratorSet, Synthesizer, SymmetricRFunction, SynthesisError,
    TernaryFunction, Witness,
};

use crate::config::Config;
use crate::report::CheckRow;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    All,
    Props,
    Lemmas,
    Closure,
}

const PROPERTY_SAMPLES: usize = 1000;

fn row(suite: &str, check: &str, result: Result<String, String>) -> CheckRow {
    let (passed, detail) = match result {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    CheckRow { suite: suite.to_string(), check: check.to_string(), passed, detail }
}

pub fn run(suite: Suite, config: &Config) -> Vec<CheckRow> {
    match suite {
        Suite::All => [Suite::Props, Suite::Lemmas, Suite::Closure].into_iter().flat_map(|s| run(s, config)).collect(),
        Suite::Props => props(config),
        Suite::Lemmas => lemmas(config),
        Suite::Closure => closure(config),
    }
}

fn props(config: &Config) -> Vec<CheckRow> {
    let report = match verify_r_closed(PROPERTY_SAMPLES, config.seed) {
        Ok(r) => r,
        Err(e) => return vec![row("props", "random formulas over R", Err(e.to_string()))],
    };
    let tally = |violations: usize| {
        let detail = format!("{violations} violations in {} formulas (seed {})", report.samples, config.seed);
        if violations == 0 {
            Ok(detail)
        } else {
            Err(format!("{detail}; first: {}", report.first_counterexample.as_deref().unwrap_or("-")))
        }
    };
    vec![
        row("props", "in_R classification", tally(report.in_r_violations)),
        row("props", "zero propagation", tally(report.zero_propagation_violations)),
        row("props", "subformula inclusion", tally(report.inclusion_violations)),
        row(
            "props",
            "clean formulas",
            if report.passed() {
                Ok(format!("{}/{} passed", report.passes, report.samples))
            } else {
                Err(format!("{}/{} passed", report.passes, report.samples))
            },
        ),
    ]
}

fn s(n: usize, e: usize, d: usize) -> ExcludedLayerFunction {
    ExcludedLayerFunction::new(n, e, d).expect("valid layer")
}

/// Runs `attempt` over `cases` and reports how many produced verified witnesses.
fn exhaustive<T: std::fmt::Display>(
    cases: Vec<T>,
    range: &str,
    mut attempt: impl FnMut(&T) -> Result<Witness, SynthesisError>,
) -> Result<String, String> {
    for case in &cases {
        match attempt(case) {
            Ok(w) if w.verified => {}
            Ok(w) => return Err(format!("{case}: witness {} not verified", w.formula)),
            Err(e) => return Err(format!("{case}: {e}")),
        }
    }
    Ok(format!("{} instances verified, {range}", cases.len()))
}

fn lemmas(config: &Config) -> Vec<CheckRow> {
    let synth = Synthesizer::new(config.synth());
    let mut rows = Vec::new();

    let sources: Vec<_> = (4..=7).flat_map(|n| (1..n).map(move |e| s(n, e, n - e))).collect();
    rows.push(row("lemmas", "i2 by identification", exhaustive(sources, "4 <= n <= 7, e, d > 0", |f| synth.i2_from(*f))));

    let i2 = synth.i2_from(tcw_core::synthesis::canonical_i_source());
    rows.push(row(
        "lemmas",
        "i_s from i2",
        match &i2 {
            Ok(i2) => exhaustive((2..=8).collect(), "2 <= s <= 8", |&k| synth.is_from(k, i2)),
            Err(e) => Err(e.to_string()),
        },
    ));

    let mut fixed_e = Vec::new();
    let mut fixed_d = Vec::new();
    for n in 4..=5 {
        for e in 1..n {
            let d = n - e;
            let dg = (e + 1) * d + 1;
            fixed_e.push(Pair(s(n, e, d), s(e + dg, e, dg)));
            let eg = (d + 1) * e + 1;
            fixed_d.push(Pair(s(n, e, d), s(eg + d, eg, d)));
        }
    }
    rows.push(row(
        "lemmas",
        "fixed-e family",
        exhaustive(fixed_e, "4 <= n <= 5 with the smallest d_g above the bound", |Pair(f, g)| synth.family_fixed_e(*f, *g)),
    ));
    rows.push(row(
        "lemmas",
        "fixed-d family",
        exhaustive(fixed_d, "4 <= n <= 5 with the smallest e_g above the bound", |Pair(f, g)| synth.family_fixed_d(*f, *g)),
    ));
    rows.push(row(
        "lemmas",
        "unbounded family",
        exhaustive(vec![Pair(s(4, 2, 2), s(15, 3, 12))], "(4,2,2) from (15,3,12)", |Pair(f, g)| {
            synth.family_unbounded(*f, *g)
        }),
    ));

    let symmetric: Vec<_> = (1..=3usize)
        .flat_map(|n| {
            (0u32..1 << (n + 1)).map(move |mask| {
                SymmetricRFunction::new(n, (0..=n).filter(|e| mask >> e & 1 == 1)).expect("valid layers")
            })
        })
        .collect();
    rows.push(row(
        "lemmas",
        "S from excluded-layer functions",
        exhaustive(symmetric, "every symmetric R function of arity <= 3", |f| synth.s_from_sminus1(f)),
    ));

    let r_functions: Vec<_> = (1..=2usize)
        .flat_map(|n| {
            let ones = 1u32 << (1 << n);
            (0..ones).map(move |mask| {
                let mut k = 0;
                TernaryFunction::from_fn(n, 7, |t| {
                    if t.contains(&0) {
                        0
                    } else {
                        k += 1;
                        u8::from(mask >> (k - 1) & 1 == 1)
                    }
                })
                .expect("small arity")
            })
        })
        .map(RDisplay)
        .collect();
    rows.push(row(
        "lemmas",
        "R from excluded-layer functions",
        exhaustive(r_functions, "every R function of arity <= 2", |f| synth.r_from_sminus1(&f.0)),
    ));
    rows
}

struct Pair(ExcludedLayerFunction, ExcludedLayerFunction);

impl std::fmt::Display for Pair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} from {}", self.0, self.1)
    }
}

struct RDisplay(TernaryFunction);

impl std::fmt::Display for RDisplay {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let vals: String = self.0.table().iter().map(|&v| char::from(b'0' + v)).collect();
        write!(f, "table n={} vals={vals}", self.0.arity())
    }
}

fn closure(config: &Config) -> Vec<CheckRow> {
    let mut rows = Vec::new();
    let mut env = GeneratorSet::new();
    for n in 2..=3 {
        for f in enumerate_s_minus_1(n).expect("small arity") {
            env.add_auto(f);
        }
    }
    let targets: Vec<TernaryFunction> = enumerate_s_minus_1(4)
        .expect("small arity")
        .iter()
        .map(|f| f.to_truth_table().expect("small arity"))
        .collect();
    let result = closure_search(&env, config.closure(4), &targets).map_err(|e| e.to_string()).and_then(|index| {
        let detail = format!(
            "{} functions kept, {} evaluations, depth {}, budget {}",
            index.len(),
            index.evaluated(),
            index.depth_reached(),
            config.bfs_node_budget
        );
        if index.truncated() {
            return Err(format!("truncated: {detail}"));
        }
        match index.entries().iter().find(|e| e.table.classify().in_s_minus_1 && e.table.essential_arity() == 4) {
            Some(hit) => Err(format!("{} realizes an arity-4 excluded-layer function", hit.witness)),
            None => Ok(detail),
        }
    });
    rows.push(row("closure", "no arity-4 excluded-layer function from arities 2 and 3", result));

    let synth = Synthesizer::new(config.synth());
    let i2 = TernaryFunction::from_fn(2, 7, |t| u8::from(!t.contains(&0))).expect("arity 2");
    let mut agree = Ok(String::new());
    let mut count = 0;
    for n in 4..=5 {
        for e in 1..n {
            let f = s(n, e, n - e);
            let mut single = GeneratorSet::new();
            single.add_auto(f);
            let found = closure_search(&single, config.closure(2), std::slice::from_ref(&i2))
                .map(|index| index.contains(&i2))
                .unwrap_or(false);
            if synth.i2_from(f).is_ok() != found {
                agree = Err(format!("{f}: synthesis and closure disagree on i2"));
                break;
            }
            count += 1;
        }
    }
    rows.push(row("closure", "closure agrees with i2 synthesis", agree.map(|_| format!("{count} sources, 4 <= n <= 5"))));
    rows
}
