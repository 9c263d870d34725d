//! Reference evaluation written directly from the definitions, independent of the
//! library's tables and bound formulas.
#![allow(dead_code)]

use tcw_core::{Formula, GeneratorSet, Semantics};

pub fn all_tuples(n: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..3u8).map(move |v| {
                    let mut t = t.clone();
                    t.push(v);
                    t
                })
            })
            .collect();
    }
    out
}

pub fn binary_tuples(n: usize) -> Vec<Vec<u8>> {
    all_tuples(n).into_iter().filter(|t| !t.contains(&0)).collect()
}

pub fn ones(t: &[u8]) -> usize {
    t.iter().filter(|&&v| v == 1).count()
}

/// 1 on {1,2}ⁿ off the layer with `e` ones, 0 elsewhere.
pub fn excluded(e: usize, t: &[u8]) -> u8 {
    u8::from(!t.contains(&0) && ones(t) != e)
}

pub fn i_s(t: &[u8]) -> u8 {
    u8::from(!t.contains(&0))
}

fn table_index(t: &[u8]) -> usize {
    t.iter().rev().fold(0, |acc, &v| acc * 3 + v as usize)
}

pub fn eval_semantics(s: &Semantics, t: &[u8]) -> u8 {
    match s {
        Semantics::Excluded(f) => {
            assert_eq!(f.e() + f.d(), t.len());
            excluded(f.e(), t)
        }
        Semantics::Symmetric(f) => u8::from(!t.contains(&0) && f.one_layers().contains(&ones(t))),
        Semantics::Table(f) => f.table()[table_index(t)],
    }
}

pub fn eval(phi: &Formula, env: &GeneratorSet, t: &[u8]) -> u8 {
    match phi {
        Formula::Var(i) => t[i - 1],
        Formula::Apply { symbol, args } => {
            let vals: Vec<u8> = args.iter().map(|a| eval(a, env, t)).collect();
            let g = env.get(symbol).unwrap_or_else(|| panic!("generator {symbol} missing"));
            assert_eq!(g.arity(), vals.len(), "arity of {symbol}");
            eval_semantics(g.semantics(), &vals)
        }
    }
}

/// First tuple of {0,1,2}ⁿ where `phi` and `reference` disagree.
pub fn disagreement(phi: &Formula, env: &GeneratorSet, n: usize, reference: impl Fn(&[u8]) -> u8) -> Option<Vec<u8>> {
    all_tuples(n).into_iter().find(|t| eval(phi, env, t) != reference(t))
}
