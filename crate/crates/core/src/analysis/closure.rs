//! Breadth-first closure of a generator set over a fixed number of variables.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{AnalysisError, CoreError};
use crate::formula::{Formula, GeneratorSet};
use crate::function::{Semantics, TernaryFunction, DEFAULT_CANONICAL_ARITY_CAP};
use crate::tuple::{decode_into, pow3};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClosureConfig {
    /// Number of variables x1..xk the closure is computed over.
    pub arity_cap: usize,
    /// Maximum formula depth explored.
    pub depth_cap: usize,
    /// Candidate applications that may be evaluated before the search is cut off.
    pub node_budget: u64,
    /// Largest `arity_cap` accepted.
    pub table_cap: usize,
}

impl Default for ClosureConfig {
    fn default() -> Self {
        ClosureConfig { arity_cap: 3, depth_cap: 4, node_budget: 1_000_000, table_cap: DEFAULT_CANONICAL_ARITY_CAP }
    }
}

/// A discovered function together with the first (hence shallowest) formula found for it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureEntry {
    pub table: TernaryFunction,
    pub witness: Formula,
    pub depth: usize,
}

#[derive(Clone, Debug)]
pub struct ClosureIndex {
    generators: GeneratorSet,
    config: ClosureConfig,
    entries: Vec<ClosureEntry>,
    by_table: BTreeMap<Vec<u8>, usize>,
    truncated: bool,
    fixpoint: bool,
    depth_reached: usize,
    evaluated: u64,
    pruned: bool,
}

impl ClosureIndex {
    pub fn generators(&self) -> &GeneratorSet {
        &self.generators
    }

    pub fn config(&self) -> ClosureConfig {
        self.config
    }

    /// Entries in discovery order: projections first, then by depth.
    pub fn entries(&self) -> &[ClosureEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// True when the node budget ran out before the depth cap or a fixpoint.
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    /// True when a full round produced nothing new, so the index is the whole closure
    /// over `arity_cap` variables (restricted by the target filter, if one was given).
    pub fn reached_fixpoint(&self) -> bool {
        self.fixpoint
    }

    pub fn depth_reached(&self) -> usize {
        self.depth_reached
    }

    /// Candidate applications evaluated.
    pub fn evaluated(&self) -> u64 {
        self.evaluated
    }

    /// Whether the target filter was applied.
    pub fn pruned(&self) -> bool {
        self.pruned
    }

    /// Looks up `f`, padding it with fictitious variables when its arity is below the cap.
    pub fn get(&self, f: &TernaryFunction) -> Option<&ClosureEntry> {
        if f.arity() > self.config.arity_cap {
            return None;
        }
        let padded = f.extend_arity(self.config.arity_cap).ok()?;
        self.by_table.get(padded.table()).map(|&i| &self.entries[i])
    }

    pub fn contains(&self, f: &TernaryFunction) -> bool {
        self.get(f).is_some()
    }

    /// Shallowest entry per canonical table (minimum over variable permutations).
    pub fn canonical_map(&self) -> Result<BTreeMap<Vec<u8>, &ClosureEntry>, CoreError> {
        let mut out = BTreeMap::new();
        for entry in &self.entries {
            let canon = entry.table.canonical_form(self.config.table_cap)?;
            out.entry(canon.table().to_vec()).or_insert(entry);
        }
        Ok(out)
    }
}

struct Compiled<'a> {
    name: &'a str,
    arity: usize,
    symmetric: bool,
    semantics: &'a Semantics,
    lookup: Option<TernaryFunction>,
}

impl Compiled<'_> {
    fn eval(&self, args: &[u8]) -> u8 {
        match &self.lookup {
            Some(t) => t.table()[args.iter().rev().fold(0usize, |acc, &v| acc * 3 + usize::from(v))],
            None => self.semantics.eval_unchecked(args),
        }
    }
}

/// Visits argument index tuples of length `m` over `0..len` that use at least one index
/// `>= fresh`. With `sorted`, only nondecreasing tuples are produced. Stops when `visit`
/// returns false.
fn for_each_args(m: usize, len: usize, fresh: usize, sorted: bool, visit: &mut dyn FnMut(&[usize]) -> bool) {
    #[allow(clippy::too_many_arguments)]
    fn go(
        pos: usize,
        m: usize,
        len: usize,
        fresh: usize,
        sorted: bool,
        has_fresh: bool,
        acc: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if pos == m {
            return !has_fresh || visit(acc);
        }
        let lo = if sorted { acc.last().copied().unwrap_or(0) } else { 0 };
        // The last slot must supply a fresh index if none was used so far.
        let lo = if pos + 1 == m && !has_fresh { lo.max(fresh) } else { lo };
        for i in lo..len {
            acc.push(i);
            let keep = go(pos + 1, m, len, fresh, sorted, has_fresh || i >= fresh, acc, visit);
            acc.pop();
            if !keep {
                return false;
            }
        }
        true
    }
    // `go` returns true on "no fresh index", which never reaches `visit`.
    let _ = go(0, m, len, fresh, sorted, false, &mut Vec::with_capacity(m), visit);
}

/// Closure over `arity_cap` variables with the default node budget and no target filter.
pub fn closure_bfs(generators: &GeneratorSet, arity_cap: usize, depth_cap: usize) -> Result<ClosureIndex, AnalysisError> {
    closure_search(generators, ClosureConfig { arity_cap, depth_cap, ..ClosureConfig::default() }, &[])
}

/// Breadth-first closure.
///
/// Depth 0 holds the projections x1..xk. Round `d` applies every generator (by name) to
/// every argument tuple of known entries that uses at least one entry from round `d−1`,
/// and keeps tables not seen before. Symmetric generators only see nondecreasing tuples.
///
/// With nonempty `targets` and every generator in R, a non-variable candidate is kept
/// only if it is 1 on every 1-point of some target. Every non-variable subformula of a
/// formula over R is 1 wherever the formula is, so no target loses a witness.
pub fn closure_search(
    generators: &GeneratorSet,
    config: ClosureConfig,
    targets: &[TernaryFunction],
) -> Result<ClosureIndex, AnalysisError> {
    let k = config.arity_cap;
    if k == 0 || k > config.table_cap {
        return Err(AnalysisError::Precondition(format!(
            "closure arity cap must be in 1..={}, got {k}",
            config.table_cap
        )));
    }
    let points = pow3(k).expect("k <= table cap");
    let mut compiled = Vec::new();
    for g in generators.iter() {
        let semantics = g.semantics();
        let lookup = if g.arity() <= config.table_cap { Some(semantics.to_truth_table(config.table_cap)?) } else { None };
        let symmetric = match semantics {
            Semantics::Excluded(_) | Semantics::Symmetric(_) => true,
            Semantics::Table(t) => t.is_symmetric(),
        };
        compiled.push(Compiled { name: g.name(), arity: g.arity(), symmetric, semantics, lookup });
    }

    let mut one_points = Vec::new();
    for t in targets {
        if t.arity() > k {
            return Err(AnalysisError::Precondition(format!("target arity {} exceeds the closure arity cap {k}", t.arity())));
        }
        let padded = t.extend_arity(k)?;
        one_points.push(padded.table().iter().enumerate().filter(|(_, &v)| v == 1).map(|(i, _)| i).collect::<Vec<_>>());
    }
    let pruned = !one_points.is_empty() && generators.all_in_r();

    let mut index = ClosureIndex {
        generators: generators.clone(),
        config,
        entries: Vec::new(),
        by_table: BTreeMap::new(),
        truncated: false,
        fixpoint: false,
        depth_reached: 0,
        evaluated: 0,
        pruned,
    };
    let mut buf = vec![0u8; k];
    for i in 1..=k {
        let mut table = vec![0u8; points];
        for (idx, slot) in table.iter_mut().enumerate() {
            decode_into(idx, &mut buf);
            *slot = buf[i - 1];
        }
        index.by_table.insert(table.clone(), index.entries.len());
        index.entries.push(ClosureEntry { table: TernaryFunction::new(k, table)?, witness: Formula::Var(i), depth: 0 });
    }

    let mut fresh = 0;
    for depth in 1..=config.depth_cap {
        let known = index.entries.len();
        let mut found: Vec<ClosureEntry> = Vec::new();
        let mut out_of_budget = false;
        for g in &compiled {
            let entries = &index.entries;
            let by_table = &mut index.by_table;
            let evaluated = &mut index.evaluated;
            let mut vals = vec![0u8; g.arity];
            for_each_args(g.arity, known, fresh, g.symmetric, &mut |args| {
                if *evaluated >= config.node_budget {
                    out_of_budget = true;
                    return false;
                }
                *evaluated += 1;
                let mut table = vec![0u8; points];
                for (idx, slot) in table.iter_mut().enumerate() {
                    for (v, &a) in vals.iter_mut().zip(args) {
                        *v = entries[a].table.table()[idx];
                    }
                    *slot = g.eval(&vals);
                }
                if pruned && !one_points.iter().any(|ones| ones.iter().all(|&p| table[p] == 1)) {
                    return true;
                }
                if by_table.contains_key(&table) {
                    return true;
                }
                let witness = Formula::apply(g.name, args.iter().map(|&a| entries[a].witness.clone()).collect());
                by_table.insert(table.clone(), known + found.len());
                found.push(ClosureEntry { table: TernaryFunction::new(k, table).expect("valid table"), witness, depth });
                true
            });
            if out_of_budget {
                break;
            }
        }
        let progressed = !found.is_empty();
        index.entries.extend(found);
        if progressed {
            index.depth_reached = depth;
        }
        if out_of_budget {
            index.truncated = true;
            break;
        }
        if !progressed {
            index.fixpoint = true;
            break;
        }
        fresh = known;
    }
    Ok(index)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Generator;
    use crate::function::{enumerate_s_minus_1, ExcludedLayerFunction, SymmetricRFunction};

    fn i(s: usize) -> TernaryFunction {
        SymmetricRFunction::i(s).unwrap().to_truth_table().unwrap()
    }

    #[test]
    fn args_enumeration_counts() {
        let mut all = Vec::new();
        for_each_args(2, 3, 1, false, &mut |a| {
            all.push(a.to_vec());
            true
        });
        // 9 pairs minus (0,0).
        assert_eq!(all.len(), 8);
        let mut sorted = Vec::new();
        for_each_args(2, 3, 2, true, &mut |a| {
            sorted.push(a.to_vec());
            true
        });
        assert_eq!(sorted, vec![vec![0, 2], vec![1, 2], vec![2, 2]]);
    }

    #[test]
    fn i2_generates_i1_i2_i3() {
        let mut env = GeneratorSet::new();
        env.insert(Generator::auto(SymmetricRFunction::i(2).unwrap())).unwrap();
        let index = closure_bfs(&env, 3, 3).unwrap();
        for s in 1..=3 {
            assert!(index.contains(&i(s)), "i{s}");
        }
        assert!(!index.truncated());
    }

    #[test]
    fn identification_reaches_i2() {
        let mut env = GeneratorSet::new();
        env.add_auto(ExcludedLayerFunction::new(4, 2, 2).unwrap());
        let index = closure_bfs(&env, 2, 2).unwrap();
        let entry = index.get(&i(2)).unwrap();
        assert_eq!(entry.depth, 1);
    }

    #[test]
    fn empty_set_gives_projections() {
        let index = closure_bfs(&GeneratorSet::new(), 3, 4).unwrap();
        assert_eq!(index.len(), 3);
        assert!(index.entries().iter().all(|e| e.witness.is_var()));
        assert!(index.reached_fixpoint());
    }

    #[test]
    fn witnesses_reproduce_tables() {
        let mut env = GeneratorSet::new();
        for f in enumerate_s_minus_1(2).unwrap() {
            env.add_auto(f);
        }
        let index = closure_bfs(&env, 2, 2).unwrap();
        for entry in index.entries() {
            assert_eq!(entry.witness.semantic_function(&env, 2, 7).unwrap(), entry.table);
        }
        let canon = index.canonical_map().unwrap();
        assert!(canon.len() <= index.len());
    }

    #[test]
    fn deterministic() {
        let mut env = GeneratorSet::new();
        for f in enumerate_s_minus_1(3).unwrap() {
            env.add_auto(f);
        }
        let a = closure_bfs(&env, 2, 2).unwrap();
        let b = closure_bfs(&env, 2, 2).unwrap();
        assert_eq!(a.entries(), b.entries());
    }

    #[test]
    fn budget_sets_truncation() {
        let mut env = GeneratorSet::new();
        for f in enumerate_s_minus_1(3).unwrap() {
            env.add_auto(f);
        }
        let config = ClosureConfig { arity_cap: 3, depth_cap: 3, node_budget: 50, ..ClosureConfig::default() };
        let index = closure_search(&env, config, &[]).unwrap();
        assert!(index.truncated());
        assert_eq!(index.evaluated(), 50);
    }

    #[test]
    fn target_filter_keeps_reachable_targets() {
        let mut env = GeneratorSet::new();
        env.add_auto(ExcludedLayerFunction::new(4, 1, 3).unwrap());
        let config = ClosureConfig { arity_cap: 3, depth_cap: 2, ..ClosureConfig::default() };
        let targets = [i(3), ExcludedLayerFunction::new(3, 1, 2).unwrap().to_truth_table().unwrap()];
        let filtered = closure_search(&env, config, &targets).unwrap();
        let full = closure_search(&env, config, &[]).unwrap();
        assert!(filtered.pruned());
        for t in &targets {
            assert_eq!(filtered.contains(t), full.contains(t));
        }
        assert!(filtered.len() <= full.len());
    }

    #[test]
    fn rejects_large_arity_cap() {
        assert!(matches!(closure_bfs(&GeneratorSet::new(), 9, 1), Err(AnalysisError::Precondition(_))));
    }
}
