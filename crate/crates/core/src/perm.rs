//! Permutations of variable positions.

use alloc::vec::Vec;
use core::fmt;

use crate::error::FormulaError;

/// A bijection σ on `{1,…,n}`, stored as its image list.
///
/// Applied to a formula it renames `x_i` to `x_σ(i)`. Applied to a tuple it moves the
/// component at position `i` to position `σ(i)`. With these two actions
/// `eval(φσ, t) = eval(φ, σ⁻¹·t)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VariablePermutation {
    images: Vec<usize>,
}

impl VariablePermutation {
    /// Builds σ from 1-based images `σ(1), …, σ(n)`.
    pub fn new(images: Vec<usize>) -> Result<Self, FormulaError> {
        let n = images.len();
        let mut seen = alloc::vec![false; n];
        for &i in &images {
            if i == 0 || i > n || seen[i - 1] {
                return Err(FormulaError::NotBijective(n));
            }
            seen[i - 1] = true;
        }
        Ok(VariablePermutation { images })
    }

    pub fn identity(n: usize) -> Self {
        VariablePermutation {
            images: (1..=n).collect(),
        }
    }

    /// Exchanges positions `i` and `j` (1-based).
    pub fn transposition(n: usize, i: usize, j: usize) -> Result<Self, FormulaError> {
        let mut p = Self::identity(n);
        if i == 0 || j == 0 || i > n || j > n {
            return Err(FormulaError::NotBijective(n));
        }
        p.images.swap(i - 1, j - 1);
        Ok(p)
    }

    /// `1 → 2 → … → n → 1`.
    pub fn cycle(n: usize) -> Self {
        VariablePermutation {
            images: (1..=n).map(|i| i % n + 1).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    /// σ(i) for a 1-based `i`.
    pub fn image(&self, i: usize) -> Option<usize> {
        i.checked_sub(1).and_then(|k| self.images.get(k)).copied()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn inverse(&self) -> Self {
        let mut inv = alloc::vec![0; self.images.len()];
        for (k, &img) in self.images.iter().enumerate() {
            inv[img - 1] = k + 1;
        }
        VariablePermutation { images: inv }
    }

    /// `(σ·t)_{σ(i)} = t_i`.
    pub fn act_on_tuple(&self, t: &[u8]) -> Vec<u8> {
        let mut out = alloc::vec![0u8; t.len()];
        for (k, &img) in self.images.iter().enumerate() {
            out[img - 1] = t[k];
        }
        out
    }

    /// Every permutation of `{1,…,n}` in lexicographic order of image lists; `n!` of them.
    pub fn all(n: usize) -> Vec<VariablePermutation> {
        let mut current: Vec<usize> = (1..=n).collect();
        let mut out = Vec::new();
        loop {
            out.push(VariablePermutation {
                images: current.clone(),
            });
            if !next_permutation(&mut current) {
                return out;
            }
        }
    }

    /// A permutation σ with `σ·from = to`; both tuples must have the same multiset of
    /// components. Ones (and twos, and zeros) are matched in order of position.
    pub fn mapping(from: &[u8], to: &[u8]) -> Option<Self> {
        if from.len() != to.len() {
            return None;
        }
        let mut images = alloc::vec![0usize; from.len()];
        for value in 0..=2u8 {
            let src = from.iter().enumerate().filter(|(_, &c)| c == value).map(|(i, _)| i);
            let mut dst = to.iter().enumerate().filter(|(_, &c)| c == value).map(|(i, _)| i);
            for s in src {
                images[s] = dst.next()? + 1;
            }
            if dst.next().is_some() {
                return None;
            }
        }
        Some(VariablePermutation { images })
    }
}

impl fmt::Display for VariablePermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (k, img) in self.images.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{img}")?;
        }
        f.write_str("]")
    }
}

/// Advances `v` to the next lexicographic permutation; `false` after the last one.
pub fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}
