//! The function classes R, S and S₋₁ in compact and tabulated form.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::CoreError;
use crate::perm::{next_permutation, VariablePermutation};
use crate::tuple::{decode_into, encode, find_tuple, for_each_tuple, layer_of, pow3, Layer};

/// Default arity above which truth tables are not materialized.
pub const DEFAULT_TABLE_ARITY_CAP: usize = 12;
/// Default arity cap for permutation-canonical forms of general tables.
pub const DEFAULT_CANONICAL_ARITY_CAP: usize = 7;

/// A full truth table of an n-ary function on {0,1,2}ⁿ.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TernaryFunction {
    arity: usize,
    table: Vec<u8>,
}

impl TernaryFunction {
    pub fn new(arity: usize, table: Vec<u8>) -> Result<Self, CoreError> {
        if arity == 0 {
            return Err(CoreError::ZeroArity);
        }
        let expected = pow3(arity).ok_or(CoreError::ArityCap { arity, cap: usize::BITS as usize })?;
        if table.len() != expected {
            return Err(CoreError::TableLength { expected, got: table.len() });
        }
        if let Some((index, &value)) = table.iter().enumerate().find(|(_, &v)| v > 2) {
            return Err(CoreError::BadTableValue { index, value });
        }
        Ok(TernaryFunction { arity, table })
    }

    /// Tabulates `f` over {0,1,2}ⁿ, refusing arities above `cap`.
    pub fn from_fn(arity: usize, cap: usize, mut f: impl FnMut(&[u8]) -> u8) -> Result<Self, CoreError> {
        if arity == 0 {
            return Err(CoreError::ZeroArity);
        }
        if arity > cap {
            return Err(CoreError::ArityCap { arity, cap });
        }
        let mut table = Vec::with_capacity(pow3(arity).unwrap_or(0));
        for_each_tuple(arity, |t| table.push(f(t)));
        TernaryFunction::new(arity, table)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn table(&self) -> &[u8] {
        &self.table
    }

    pub fn eval(&self, t: &[u8]) -> Result<u8, CoreError> {
        if t.len() != self.arity {
            return Err(CoreError::ArityMismatch { expected: self.arity, got: t.len() });
        }
        Ok(self.table[encode(t)])
    }

    /// Lookup without the length check; components above 2 give garbage.
    pub fn eval_unchecked(&self, t: &[u8]) -> u8 {
        self.table[encode(t)]
    }

    pub fn in_r(&self) -> bool {
        let mut buf = vec![0u8; self.arity];
        self.table.iter().enumerate().all(|(index, &v)| {
            if v > 1 {
                return false;
            }
            decode_into(index, &mut buf);
            v == 0 || !buf.contains(&0)
        })
    }

    /// Invariance under a transposition and an n-cycle, which generate all of Sₙ.
    pub fn is_symmetric(&self) -> bool {
        if self.arity < 2 {
            return true;
        }
        let swap = VariablePermutation::transposition(self.arity, 1, 2).expect("arity >= 2");
        let cycle = VariablePermutation::cycle(self.arity);
        self.permute_variables(&swap) == *self && self.permute_variables(&cycle) == *self
    }

    pub fn classify(&self) -> ClassTags {
        let in_r = self.in_r();
        let in_s = in_r && self.is_symmetric();
        let in_s_minus_1 = in_s && {
            let zero_layers = (0..=self.arity)
                .filter(|&e| self.eval_unchecked(&Layer::new(e, self.arity - e).reference_tuple()) == 0)
                .count();
            zero_layers == 1
        };
        ClassTags { in_r, in_s, in_s_minus_1 }
    }

    /// The function realized by `f(x_σ(1), …, x_σ(n))`.
    pub fn permute_variables(&self, sigma: &VariablePermutation) -> TernaryFunction {
        assert_eq!(sigma.len(), self.arity, "permutation size must match arity");
        let images = sigma.images();
        let mut t = vec![0u8; self.arity];
        let mut u = vec![0u8; self.arity];
        let table = (0..self.table.len())
            .map(|index| {
                decode_into(index, &mut t);
                for (slot, &img) in u.iter_mut().zip(images) {
                    *slot = t[img - 1];
                }
                self.table[encode(&u)]
            })
            .collect();
        TernaryFunction { arity: self.arity, table }
    }

    /// Lexicographically least table over all variable permutations.
    pub fn canonical_form(&self, cap: usize) -> Result<TernaryFunction, CoreError> {
        if self.arity > cap {
            return Err(CoreError::ArityCap { arity: self.arity, cap });
        }
        let mut images: Vec<usize> = (1..=self.arity).collect();
        let mut best = self.clone();
        while next_permutation(&mut images) {
            let sigma = VariablePermutation::new(images.clone()).expect("valid permutation");
            let candidate = self.permute_variables(&sigma);
            if candidate.table < best.table {
                best = candidate;
            }
        }
        Ok(best)
    }

    pub fn is_essential(&self, variable: usize) -> bool {
        if variable == 0 || variable > self.arity {
            return false;
        }
        let stride = pow3(variable - 1).expect("bounded by arity");
        let mut t = vec![0u8; self.arity];
        (0..self.table.len()).any(|index| {
            decode_into(index, &mut t);
            if t[variable - 1] != 0 {
                return false;
            }
            let v = self.table[index];
            v != self.table[index + stride] || v != self.table[index + 2 * stride]
        })
    }

    pub fn essential_arity(&self) -> usize {
        (1..=self.arity).filter(|&i| self.is_essential(i)).count()
    }

    /// The same function viewed as having `arity` variables, the extra ones fictitious.
    pub fn extend_arity(&self, arity: usize) -> Result<TernaryFunction, CoreError> {
        if arity < self.arity {
            return Err(CoreError::ArityMismatch { expected: self.arity, got: arity });
        }
        let block = self.table.len();
        let total = pow3(arity).ok_or(CoreError::ArityCap { arity, cap: 40 })?;
        let table = (0..total).map(|index| self.table[index % block]).collect();
        Ok(TernaryFunction { arity, table })
    }

    /// 1-points of the table as tuples, in index order.
    pub fn one_points(&self) -> Vec<Vec<u8>> {
        let mut out = Vec::new();
        for_each_tuple(self.arity, |t| {
            if self.table[encode(t)] == 1 {
                out.push(t.to_vec());
            }
        });
        out
    }
}

/// Class membership tags computed by [`TernaryFunction::classify`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ClassTags {
    pub in_r: bool,
    pub in_s: bool,
    pub in_s_minus_1: bool,
}

impl fmt::Display for ClassTags {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tags: Vec<&str> = [
            (self.in_r, "in_R"),
            (self.in_s, "in_S"),
            (self.in_s_minus_1, "in_S_minus_1"),
        ]
        .iter()
        .filter(|(on, _)| *on)
        .map(|(_, name)| *name)
        .collect();
        write!(f, "{{{}}}", tags.join(", "))
    }
}

/// A member of S₋₁: 1 on {1,2}ⁿ except the layer `excluded`, 0 elsewhere.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExcludedLayerFunction {
    arity: usize,
    excluded: Layer,
}

impl ExcludedLayerFunction {
    pub fn new(arity: usize, e: usize, d: usize) -> Result<Self, CoreError> {
        if arity == 0 {
            return Err(CoreError::ZeroArity);
        }
        if e + d != arity {
            return Err(CoreError::LayerArity { arity, e, d });
        }
        Ok(ExcludedLayerFunction { arity, excluded: Layer::new(e, d) })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn excluded(&self) -> Layer {
        self.excluded
    }

    pub fn e(&self) -> usize {
        self.excluded.e
    }

    pub fn d(&self) -> usize {
        self.excluded.d
    }

    pub fn eval(&self, t: &[u8]) -> Result<u8, CoreError> {
        if t.len() != self.arity {
            return Err(CoreError::ArityMismatch { expected: self.arity, got: t.len() });
        }
        Ok(self.eval_unchecked(t))
    }

    pub fn eval_unchecked(&self, t: &[u8]) -> u8 {
        match layer_of(t) {
            Some(layer) if layer.e != self.excluded.e => 1,
            _ => 0,
        }
    }

    pub fn to_truth_table(&self) -> Result<TernaryFunction, CoreError> {
        self.to_truth_table_with_cap(DEFAULT_TABLE_ARITY_CAP)
    }

    pub fn to_truth_table_with_cap(&self, cap: usize) -> Result<TernaryFunction, CoreError> {
        TernaryFunction::from_fn(self.arity, cap, |t| self.eval_unchecked(t))
    }
}

impl fmt::Display for ExcludedLayerFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.arity, self.excluded.e, self.excluded.d)
    }
}

/// A member of S: 0 on tuples with a 0, and on {1,2}ⁿ equal to 1 exactly on the layers
/// whose count of ones is listed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymmetricRFunction {
    arity: usize,
    ones: Vec<bool>,
}

impl SymmetricRFunction {
    pub fn new(arity: usize, one_layers: impl IntoIterator<Item = usize>) -> Result<Self, CoreError> {
        if arity == 0 {
            return Err(CoreError::ZeroArity);
        }
        let mut ones = vec![false; arity + 1];
        for e in one_layers {
            if e > arity {
                return Err(CoreError::OneLayerOutOfRange { arity, value: e });
            }
            ones[e] = true;
        }
        Ok(SymmetricRFunction { arity, ones })
    }

    /// `iₛ`, equal to 1 on all of {1,2}ˢ.
    pub fn i(s: usize) -> Result<Self, CoreError> {
        SymmetricRFunction::new(s, 0..=s)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn one_layers(&self) -> BTreeSet<usize> {
        self.ones.iter().enumerate().filter(|(_, &on)| on).map(|(e, _)| e).collect()
    }

    /// e-values of the layers mapped to 0, ascending.
    pub fn zero_layers(&self) -> Vec<usize> {
        self.ones.iter().enumerate().filter(|(_, &on)| !on).map(|(e, _)| e).collect()
    }

    pub fn is_one_on_layer(&self, e: usize) -> bool {
        self.ones.get(e).copied().unwrap_or(false)
    }

    pub fn is_i(&self) -> bool {
        self.ones.iter().all(|&on| on)
    }

    pub fn eval(&self, t: &[u8]) -> Result<u8, CoreError> {
        if t.len() != self.arity {
            return Err(CoreError::ArityMismatch { expected: self.arity, got: t.len() });
        }
        Ok(self.eval_unchecked(t))
    }

    pub fn eval_unchecked(&self, t: &[u8]) -> u8 {
        match layer_of(t) {
            Some(layer) if self.ones[layer.e] => 1,
            _ => 0,
        }
    }

    pub fn to_truth_table(&self) -> Result<TernaryFunction, CoreError> {
        self.to_truth_table_with_cap(DEFAULT_TABLE_ARITY_CAP)
    }

    pub fn to_truth_table_with_cap(&self, cap: usize) -> Result<TernaryFunction, CoreError> {
        TernaryFunction::from_fn(self.arity, cap, |t| self.eval_unchecked(t))
    }
}

impl fmt::Display for SymmetricRFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_i() {
            return write!(f, "i{}", self.arity);
        }
        let ones: Vec<String> = self.one_layers().iter().map(|e| format!("{e}")).collect();
        write!(f, "sym({};{{{}}})", self.arity, ones.join(","))
    }
}

/// Semantics of a generator or a synthesis target.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Semantics {
    Excluded(ExcludedLayerFunction),
    Symmetric(SymmetricRFunction),
    Table(TernaryFunction),
}

impl Semantics {
    pub fn arity(&self) -> usize {
        match self {
            Semantics::Excluded(f) => f.arity(),
            Semantics::Symmetric(f) => f.arity(),
            Semantics::Table(f) => f.arity(),
        }
    }

    pub fn eval(&self, t: &[u8]) -> Result<u8, CoreError> {
        if t.len() != self.arity() {
            return Err(CoreError::ArityMismatch { expected: self.arity(), got: t.len() });
        }
        Ok(self.eval_unchecked(t))
    }

    pub fn eval_unchecked(&self, t: &[u8]) -> u8 {
        match self {
            Semantics::Excluded(f) => f.eval_unchecked(t),
            Semantics::Symmetric(f) => f.eval_unchecked(t),
            Semantics::Table(f) => f.eval_unchecked(t),
        }
    }

    /// Membership in R. Compact variants are in R by construction.
    pub fn in_r(&self) -> bool {
        match self {
            Semantics::Table(f) => f.in_r(),
            _ => true,
        }
    }

    pub fn to_truth_table(&self, cap: usize) -> Result<TernaryFunction, CoreError> {
        match self {
            Semantics::Excluded(f) => f.to_truth_table_with_cap(cap),
            Semantics::Symmetric(f) => f.to_truth_table_with_cap(cap),
            Semantics::Table(f) if f.arity() <= cap => Ok(f.clone()),
            Semantics::Table(f) => Err(CoreError::ArityCap { arity: f.arity(), cap }),
        }
    }

    /// Self-describing generator name: `s4_1_3`, `i3`, `sym3_1_2`, `sym2_none`,
    /// `tab1_011`.
    pub fn auto_name(&self) -> String {
        match self {
            Semantics::Excluded(f) => format!("s{}_{}_{}", f.arity(), f.e(), f.d()),
            Semantics::Symmetric(f) if f.is_i() => format!("i{}", f.arity()),
            Semantics::Symmetric(f) => {
                let layers = f.one_layers();
                if layers.is_empty() {
                    format!("sym{}_none", f.arity())
                } else {
                    let mut name = format!("sym{}", f.arity());
                    for e in layers {
                        name.push_str(&format!("_{e}"));
                    }
                    name
                }
            }
            Semantics::Table(f) => {
                let mut name = format!("tab{}_", f.arity());
                for &v in f.table() {
                    name.push(char::from(b'0' + v));
                }
                name
            }
        }
    }

    /// Inverse of [`Semantics::auto_name`].
    pub fn from_auto_name(name: &str) -> Option<Semantics> {
        fn num(s: &str) -> Option<usize> {
            if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
                return None;
            }
            s.parse().ok()
        }
        if let Some(rest) = name.strip_prefix("sym") {
            let mut parts = rest.split('_');
            let n = num(parts.next()?)?;
            let tail: Vec<&str> = parts.collect();
            if tail.is_empty() {
                return None;
            }
            if tail == ["none"] {
                return SymmetricRFunction::new(n, []).ok().map(Semantics::Symmetric);
            }
            let layers = tail.into_iter().map(num).collect::<Option<Vec<_>>>()?;
            return SymmetricRFunction::new(n, layers).ok().map(Semantics::Symmetric);
        }
        if let Some(rest) = name.strip_prefix("tab") {
            let (n, digits) = rest.split_once('_')?;
            let n = num(n)?;
            let table = digits
                .bytes()
                .map(|b| match b {
                    b'0'..=b'2' => Some(b - b'0'),
                    _ => None,
                })
                .collect::<Option<Vec<u8>>>()?;
            return TernaryFunction::new(n, table).ok().map(Semantics::Table);
        }
        if let Some(rest) = name.strip_prefix('i') {
            return SymmetricRFunction::i(num(rest)?).ok().map(Semantics::Symmetric);
        }
        if let Some(rest) = name.strip_prefix('s') {
            let mut parts = rest.split('_');
            let n = num(parts.next()?)?;
            let e = num(parts.next()?)?;
            let d = num(parts.next()?)?;
            if parts.next().is_some() {
                return None;
            }
            return ExcludedLayerFunction::new(n, e, d).ok().map(Semantics::Excluded);
        }
        None
    }
}

impl From<ExcludedLayerFunction> for Semantics {
    fn from(f: ExcludedLayerFunction) -> Self {
        Semantics::Excluded(f)
    }
}

impl From<SymmetricRFunction> for Semantics {
    fn from(f: SymmetricRFunction) -> Self {
        Semantics::Symmetric(f)
    }
}

impl From<TernaryFunction> for Semantics {
    fn from(f: TernaryFunction) -> Self {
        Semantics::Table(f)
    }
}

impl fmt::Display for Semantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Semantics::Excluded(g) => write!(f, "{g}"),
            Semantics::Symmetric(g) => write!(f, "{g}"),
            Semantics::Table(_) => f.write_str(&self.auto_name()),
        }
    }
}

/// Equality up to a permutation of variables.
pub fn congruent(f: &TernaryFunction, g: &TernaryFunction) -> bool {
    if f.arity() != g.arity() {
        return false;
    }
    if f == g {
        return true;
    }
    if f.is_symmetric() || g.is_symmetric() {
        return false;
    }
    let mut images: Vec<usize> = (1..=f.arity()).collect();
    while next_permutation(&mut images) {
        let sigma = VariablePermutation::new(images.clone()).expect("valid permutation");
        // Compare lazily: stop at the first disagreeing entry.
        let mut u = vec![0u8; f.arity()];
        let differs = find_tuple(f.arity(), false, |t| {
            for (slot, &img) in u.iter_mut().zip(sigma.images()) {
                *slot = t[img - 1];
            }
            (f.eval_unchecked(&u) != g.eval_unchecked(t)).then_some(())
        });
        if differs.is_none() {
            return true;
        }
    }
    false
}

/// All S₋₁ descriptors of arity `n`, excluded layers `(e, n−e)` for `e = 0..=n`.
pub fn enumerate_s_minus_1(n: usize) -> Result<Vec<ExcludedLayerFunction>, CoreError> {
    if n == 0 {
        return Err(CoreError::ZeroArity);
    }
    (0..=n).map(|e| ExcludedLayerFunction::new(n, e, n - e)).collect()
}
