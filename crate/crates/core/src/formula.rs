//! Formula terms over a named generator set.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{CoreError, FormulaError};
use crate::function::{Semantics, TernaryFunction};
use crate::perm::VariablePermutation;
use crate::tuple::{for_each_binary_tuple, for_each_tuple};

/// A named generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    name: String,
    semantics: Semantics,
    in_r: bool,
}

impl Generator {
    pub fn new(name: impl Into<String>, semantics: Semantics) -> Result<Self, FormulaError> {
        let name = name.into();
        if !is_identifier(&name) {
            return Err(FormulaError::BadName(name));
        }
        let in_r = semantics.in_r();
        Ok(Generator { name, semantics, in_r })
    }

    /// A generator named by [`Semantics::auto_name`].
    pub fn auto(semantics: impl Into<Semantics>) -> Self {
        let semantics = semantics.into();
        let name = semantics.auto_name();
        let in_r = semantics.in_r();
        Generator { name, semantics, in_r }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn semantics(&self) -> &Semantics {
        &self.semantics
    }

    pub fn arity(&self) -> usize {
        self.semantics.arity()
    }

    pub fn in_r(&self) -> bool {
        self.in_r
    }
}

/// `[A-Za-z_][A-Za-z0-9_]*`
pub fn is_identifier(name: &str) -> bool {
    let mut bytes = name.bytes();
    matches!(bytes.next(), Some(b) if b.is_ascii_alphabetic() || b == b'_')
        && bytes.all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

/// Generators keyed by name; formulas refer to them by name.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GeneratorSet {
    by_name: BTreeMap<String, Generator>,
    /// When set, unknown names are resolved through [`Semantics::from_auto_name`].
    auto_resolve: bool,
}

impl GeneratorSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// An environment that also understands self-describing names such as `s4_1_3`.
    pub fn auto_resolving() -> Self {
        GeneratorSet { by_name: BTreeMap::new(), auto_resolve: true }
    }

    pub fn insert(&mut self, generator: Generator) -> Result<(), FormulaError> {
        match self.by_name.get(&generator.name) {
            Some(existing) if existing.semantics == generator.semantics => Ok(()),
            Some(_) => Err(FormulaError::DuplicateGenerator(generator.name)),
            None => {
                self.by_name.insert(generator.name.clone(), generator);
                Ok(())
            }
        }
    }

    /// Adds an auto-named generator and returns its name.
    pub fn add_auto(&mut self, semantics: impl Into<Semantics>) -> String {
        let g = Generator::auto(semantics);
        let name = g.name.clone();
        self.by_name.entry(name.clone()).or_insert(g);
        name
    }

    pub fn merge(&mut self, other: &GeneratorSet) -> Result<(), FormulaError> {
        for g in other.by_name.values() {
            self.insert(g.clone())?;
        }
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&Generator> {
        self.by_name.get(name)
    }

    /// Looks up `name`, resolving self-describing names when enabled.
    pub fn resolve(&self, name: &str) -> Option<Generator> {
        if let Some(g) = self.by_name.get(name) {
            return Some(g.clone());
        }
        if self.auto_resolve {
            let sem = Semantics::from_auto_name(name)?;
            return Some(Generator { name: name.to_string(), in_r: sem.in_r(), semantics: sem });
        }
        None
    }

    /// Arity of `name`, resolving self-describing names when enabled.
    pub fn arity_of(&self, name: &str) -> Option<usize> {
        self.by_name
            .get(name)
            .map(Generator::arity)
            .or_else(|| self.resolve(name).map(|g| g.arity()))
    }

    pub fn iter(&self) -> impl Iterator<Item = &Generator> {
        self.by_name.values()
    }

    pub fn len(&self) -> usize {
        self.by_name.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_name.is_empty()
    }

    pub fn all_in_r(&self) -> bool {
        self.by_name.values().all(Generator::in_r)
    }

    /// The generators actually referenced by `phi`, with auto names resolved.
    pub fn restricted_to(&self, phi: &Formula) -> Result<GeneratorSet, FormulaError> {
        let mut out = GeneratorSet::new();
        for name in phi.generator_names() {
            let g = self.resolve(name).ok_or_else(|| FormulaError::UnknownGenerator(name.to_string()))?;
            out.insert(g)?;
        }
        Ok(out)
    }
}

/// A term: a variable `x_i` (1-based) or a generator applied to argument terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Var(usize),
    Apply { symbol: String, args: Vec<Formula> },
}

impl Formula {
    pub fn var(i: usize) -> Formula {
        Formula::Var(i)
    }

    pub fn apply(symbol: impl Into<String>, args: Vec<Formula>) -> Formula {
        Formula::Apply { symbol: symbol.into(), args }
    }

    /// `symbol(x_1, …, x_n)`.
    pub fn apply_to_variables(symbol: impl Into<String>, n: usize) -> Formula {
        Formula::apply(symbol, (1..=n).map(Formula::Var).collect())
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Formula::Var(_))
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Var(_) => 0,
            Formula::Apply { args, .. } => 1 + args.iter().map(Formula::depth).max().unwrap_or(0),
        }
    }

    /// Node count, variables included.
    pub fn size(&self) -> usize {
        match self {
            Formula::Var(_) => 1,
            Formula::Apply { args, .. } => 1 + args.iter().map(Formula::size).sum::<usize>(),
        }
    }

    /// All subterms in pre-order, starting with `self`.
    pub fn subformulas(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(phi) = stack.pop() {
            out.push(phi);
            if let Formula::Apply { args, .. } = phi {
                stack.extend(args.iter().rev());
            }
        }
        out
    }

    pub fn max_variable(&self) -> usize {
        match self {
            Formula::Var(i) => *i,
            Formula::Apply { args, .. } => args.iter().map(Formula::max_variable).max().unwrap_or(0),
        }
    }

    /// Distinct generator names in first-occurrence order.
    pub fn generator_names(&self) -> Vec<&str> {
        let mut names: Vec<&str> = Vec::new();
        for phi in self.subformulas() {
            if let Formula::Apply { symbol, .. } = phi {
                if !names.contains(&symbol.as_str()) {
                    names.push(symbol);
                }
            }
        }
        names
    }

    /// Renames every `x_i` to `x_σ(i)`.
    pub fn apply_permutation(&self, sigma: &VariablePermutation) -> Result<Formula, FormulaError> {
        match self {
            Formula::Var(i) => sigma
                .image(*i)
                .map(Formula::Var)
                .ok_or(FormulaError::PermutationDomain { index: *i, len: sigma.len() }),
            Formula::Apply { symbol, args } => Ok(Formula::Apply {
                symbol: symbol.clone(),
                args: args.iter().map(|a| a.apply_permutation(sigma)).collect::<Result<_, _>>()?,
            }),
        }
    }

    /// Replaces every `x_i` by `replacements[i-1]`.
    pub fn substitute(&self, replacements: &[Formula]) -> Result<Formula, FormulaError> {
        match self {
            Formula::Var(0) => Err(FormulaError::ZeroVariable),
            Formula::Var(i) => replacements
                .get(i - 1)
                .cloned()
                .ok_or(FormulaError::UnboundVariable { index: *i, arity: replacements.len() }),
            Formula::Apply { symbol, args } => Ok(Formula::Apply {
                symbol: symbol.clone(),
                args: args.iter().map(|a| a.substitute(replacements)).collect::<Result<_, _>>()?,
            }),
        }
    }

    /// Resolves names and checks arities and variable bounds against `arity` inputs.
    pub fn bind(&self, env: &GeneratorSet, arity: usize) -> Result<BoundFormula, FormulaError> {
        let mut generators: Vec<Generator> = Vec::new();
        let mut index: BTreeMap<&str, usize> = BTreeMap::new();
        let root = self.bind_node(env, arity, &mut generators, &mut index)?;
        Ok(BoundFormula { root, generators, arity })
    }

    fn bind_node<'a>(
        &'a self,
        env: &GeneratorSet,
        arity: usize,
        generators: &mut Vec<Generator>,
        index: &mut BTreeMap<&'a str, usize>,
    ) -> Result<Node, FormulaError> {
        match self {
            Formula::Var(0) => Err(FormulaError::ZeroVariable),
            Formula::Var(i) if *i > arity => Err(FormulaError::UnboundVariable { index: *i, arity }),
            Formula::Var(i) => Ok(Node::Var(i - 1)),
            Formula::Apply { symbol, args } => {
                let slot = match index.get(symbol.as_str()) {
                    Some(&slot) => slot,
                    None => {
                        let g = env.resolve(symbol).ok_or_else(|| FormulaError::UnknownGenerator(symbol.clone()))?;
                        generators.push(g);
                        index.insert(symbol, generators.len() - 1);
                        generators.len() - 1
                    }
                };
                let expected = generators[slot].arity();
                if expected != args.len() {
                    return Err(FormulaError::ArityMismatch {
                        name: symbol.clone(),
                        expected,
                        got: args.len(),
                    });
                }
                let children = args
                    .iter()
                    .map(|a| a.bind_node(env, arity, generators, index))
                    .collect::<Result<_, _>>()?;
                Ok(Node::Apply { generator: slot, children })
            }
        }
    }

    /// Evaluates on an assignment; the assignment must cover every variable used.
    pub fn eval(&self, env: &GeneratorSet, assignment: &[u8]) -> Result<u8, FormulaError> {
        if let Some((position, &value)) = assignment.iter().enumerate().find(|(_, &v)| v > 2) {
            return Err(CoreError::BadComponent { position, value }.into());
        }
        Ok(self.bind(env, assignment.len())?.eval(assignment))
    }

    /// The function realized on `n` variables, tabulated.
    pub fn semantic_function(&self, env: &GeneratorSet, n: usize, cap: usize) -> Result<TernaryFunction, FormulaError> {
        if n > cap {
            return Err(CoreError::ArityCap { arity: n, cap }.into());
        }
        let bound = self.bind(env, n)?;
        Ok(TernaryFunction::from_fn(n, cap, |t| bound.eval(t))?)
    }
}

/// S-expression form, e.g. `(g x1 (h x2 x3))`.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Var(i) => write!(f, "x{i}"),
            Formula::Apply { symbol, args } => {
                write!(f, "({symbol}")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

#[derive(Clone, Debug)]
enum Node {
    Var(usize),
    Apply { generator: usize, children: Vec<Node> },
}

/// A formula with names resolved; evaluation cannot fail.
#[derive(Clone, Debug)]
pub struct BoundFormula {
    root: Node,
    generators: Vec<Generator>,
    arity: usize,
}

impl BoundFormula {
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn all_in_r(&self) -> bool {
        self.generators.iter().all(Generator::in_r)
    }

    /// `assignment` must have at least [`BoundFormula::arity`] components in {0,1,2}.
    pub fn eval(&self, assignment: &[u8]) -> u8 {
        let mut stack = Vec::new();
        self.eval_node(&self.root, assignment, &mut stack)
    }

    fn eval_node(&self, node: &Node, t: &[u8], stack: &mut Vec<u8>) -> u8 {
        match node {
            Node::Var(k) => t[*k],
            Node::Apply { generator, children } => {
                let g = &self.generators[*generator];
                let mark = stack.len();
                for child in children {
                    let v = self.eval_node(child, t, stack);
                    // A generator in R is 0 as soon as one argument is 0.
                    if v == 0 && g.in_r {
                        stack.truncate(mark);
                        return 0;
                    }
                    stack.push(v);
                }
                let v = g.semantics.eval_unchecked(&stack[mark..]);
                stack.truncate(mark);
                v
            }
        }
    }

    /// First tuple of the sweep where `self` and `reference` disagree, with both values.
    /// `binary_only` restricts the sweep to {1,2}ⁿ.
    pub fn first_disagreement(&self, binary_only: bool, mut reference: impl FnMut(&[u8]) -> u8) -> (u64, Option<(Vec<u8>, u8, u8)>) {
        let mut checked = 0u64;
        let mut found = None;
        let n = self.arity;
        let mut probe = |t: &[u8]| {
            if found.is_some() {
                return;
            }
            checked += 1;
            let got = self.eval(t);
            let expected = reference(t);
            if got != expected {
                found = Some((t.to_vec(), expected, got));
            }
        };
        if binary_only {
            for_each_binary_tuple(n, &mut probe);
        } else {
            for_each_tuple(n, &mut probe);
        }
        (checked, found)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::{ExcludedLayerFunction, SymmetricRFunction, DEFAULT_TABLE_ARITY_CAP};

    fn env() -> GeneratorSet {
        let mut env = GeneratorSet::new();
        env.insert(Generator::new("g", SymmetricRFunction::i(2).unwrap().into()).unwrap()).unwrap();
        env.insert(Generator::new("h", SymmetricRFunction::i(1).unwrap().into()).unwrap()).unwrap();
        env.insert(Generator::new("g3", SymmetricRFunction::new(3, [1]).unwrap().into()).unwrap()).unwrap();
        env.add_auto(SymmetricRFunction::i(2).unwrap());
        env.add_auto(ExcludedLayerFunction::new(4, 2, 2).unwrap());
        env.add_auto(ExcludedLayerFunction::new(5, 2, 3).unwrap());
        env
    }

    fn x(i: usize) -> Formula {
        Formula::Var(i)
    }

    #[test]
    fn eval_examples() {
        let env = env();
        assert_eq!(x(2).eval(&env, &[0, 2]), Ok(2));
        let i2 = Formula::apply("i2", vec![x(1), x(2)]);
        assert_eq!(i2.eval(&env, &[1, 2]), Ok(1));
        let f = Formula::apply("s4_2_2", vec![x(1), x(1), x(1), x(2)]);
        // (1,1,1,2) lies on layer (3,1), which is not excluded.
        let oracle = ExcludedLayerFunction::new(4, 2, 2).unwrap().eval(&[1, 1, 1, 2]).unwrap();
        assert_eq!(f.eval(&env, &[1, 2]), Ok(oracle));
        assert_eq!(oracle, 1);
    }

    #[test]
    fn eval_errors() {
        let env = env();
        assert_eq!(
            x(3).eval(&env, &[1, 2]),
            Err(FormulaError::UnboundVariable { index: 3, arity: 2 })
        );
        let bad = Formula::apply("g", vec![x(1)]);
        assert_eq!(
            bad.eval(&env, &[1]),
            Err(FormulaError::ArityMismatch { name: "g".into(), expected: 2, got: 1 })
        );
        let unknown = Formula::apply("nope", vec![x(1)]);
        assert_eq!(unknown.eval(&env, &[1]), Err(FormulaError::UnknownGenerator("nope".into())));
        assert_eq!(x(0).eval(&env, &[1]), Err(FormulaError::ZeroVariable));
    }

    #[test]
    fn depth_examples() {
        assert_eq!(x(1).depth(), 0);
        assert_eq!(Formula::apply("g", vec![x(1), x(2)]).depth(), 1);
        let nested = Formula::apply("g", vec![x(1), Formula::apply("g", vec![x(1), x(2)])]);
        assert_eq!(nested.depth(), 2);
    }

    #[test]
    fn subformula_examples() {
        assert_eq!(x(1).subformulas(), vec![&x(1)]);
        let g = Formula::apply("g", vec![x(1), x(2)]);
        assert_eq!(g.subformulas(), vec![&g, &x(1), &x(2)]);
        let h = Formula::apply("h", vec![x(2)]);
        let gh = Formula::apply("g", vec![x(1), h.clone()]);
        assert_eq!(gh.subformulas(), vec![&gh, &x(1), &h, &x(2)]);
    }

    #[test]
    fn permutation_examples() {
        let swap = VariablePermutation::transposition(2, 1, 2).unwrap();
        assert_eq!(x(1).apply_permutation(&swap), Ok(x(2)));
        let g = Formula::apply("g", vec![x(1), x(2)]);
        assert_eq!(g.apply_permutation(&VariablePermutation::identity(2)), Ok(g.clone()));
        let g3 = Formula::apply("g3", vec![x(1), x(2), x(3)]);
        assert_eq!(
            g3.apply_permutation(&VariablePermutation::cycle(3)),
            Ok(Formula::apply("g3", vec![x(2), x(3), x(1)]))
        );
        assert_eq!(
            x(3).apply_permutation(&swap),
            Err(FormulaError::PermutationDomain { index: 3, len: 2 })
        );
    }

    #[test]
    fn permutation_orientation_is_exhaustively_consistent() {
        // eval(φσ, t) = eval(φ, σ⁻¹·t) for an asymmetric φ over all 27 tuples and 6 permutations.
        let mut env = env();
        let asym = TernaryFunction::from_fn(3, 7, |t| (t[0] + 2 * t[1] + t[1] * t[2]) % 3).unwrap();
        let name = env.add_auto(asym);
        let phi = Formula::apply(name, vec![x(1), x(2), x(3)]);
        for sigma in VariablePermutation::all(3) {
            let permuted = phi.apply_permutation(&sigma).unwrap();
            let inv = sigma.inverse();
            for_each_tuple(3, |t| {
                let lhs = permuted.eval(&env, t).unwrap();
                let rhs = phi.eval(&env, &inv.act_on_tuple(t)).unwrap();
                assert_eq!(lhs, rhs, "sigma={sigma} t={t:?}");
            });
        }
    }

    #[test]
    fn semantic_function_examples() {
        let env = env();
        let id = x(1).semantic_function(&env, 1, DEFAULT_TABLE_ARITY_CAP).unwrap();
        assert_eq!(id.table(), &[0, 1, 2]);
        let i1 = Formula::apply("i2", vec![x(1), x(1)]).semantic_function(&env, 1, 12).unwrap();
        assert_eq!(i1.table(), &[0, 1, 1]);
        let phi = Formula::apply("s5_2_3", vec![x(1), x(1), x(1), x(1), x(2)]);
        let i2 = SymmetricRFunction::i(2).unwrap().to_truth_table().unwrap();
        assert_eq!(phi.semantic_function(&env, 2, 12).unwrap(), i2);
        assert!(matches!(phi.semantic_function(&env, 13, 12), Err(FormulaError::Core(CoreError::ArityCap { .. }))));
    }

    #[test]
    fn substitution_replaces_variables() {
        let g = Formula::apply("g", vec![x(1), x(2)]);
        let out = g.substitute(&[x(3), Formula::apply("h", vec![x(1)])]).unwrap();
        assert_eq!(out, Formula::apply("g", vec![x(3), Formula::apply("h", vec![x(1)])]));
        assert!(g.substitute(&[x(1)]).is_err());
    }

    #[test]
    fn identifiers() {
        assert!(is_identifier("s4_1_3"));
        assert!(is_identifier("_a"));
        assert!(!is_identifier("4s"));
        assert!(!is_identifier(""));
        assert!(Generator::new("bad name", SymmetricRFunction::i(1).unwrap().into()).is_err());
    }

    #[test]
    fn auto_resolution() {
        let env = GeneratorSet::auto_resolving();
        let phi = Formula::apply("i2", vec![x(1), x(2)]);
        assert_eq!(phi.eval(&env, &[1, 2]), Ok(1));
        assert_eq!(phi.eval(&env, &[0, 2]), Ok(0));
        let used = env.restricted_to(&phi).unwrap();
        assert_eq!(used.len(), 1);
        assert!(GeneratorSet::new().restricted_to(&phi).is_err());
    }
}
