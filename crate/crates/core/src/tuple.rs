//! Tuples over {0,1,2}, their base-3 indices and the layers of {1,2}ⁿ.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::CoreError;

/// Tuple counts of a layer: `e` ones and `d` twos.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Layer {
    pub e: usize,
    pub d: usize,
}

impl Layer {
    pub const fn new(e: usize, d: usize) -> Self {
        Layer { e, d }
    }

    pub const fn arity(&self) -> usize {
        self.e + self.d
    }

    /// The layer with the roles of 1 and 2 exchanged.
    pub const fn mirrored(&self) -> Self {
        Layer { e: self.d, d: self.e }
    }

    /// `(1^e, 2^d)`, the first tuple of the layer in the usual reading order.
    pub fn reference_tuple(&self) -> Vec<u8> {
        let mut t = vec![1u8; self.e];
        t.resize(self.arity(), 2);
        t
    }
}

impl fmt::Display for Layer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L({},{})", self.e, self.d)
    }
}

/// A non-empty tuple of components in {0,1,2}.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TernaryTuple(Vec<u8>);

impl TernaryTuple {
    pub fn new(components: Vec<u8>) -> Result<Self, CoreError> {
        if components.is_empty() {
            return Err(CoreError::ZeroArity);
        }
        if let Some((position, &value)) = components.iter().enumerate().find(|(_, &v)| v > 2) {
            return Err(CoreError::BadComponent { position, value });
        }
        Ok(TernaryTuple(components))
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<u8> {
        self.0
    }

    pub fn layer(&self) -> Option<Layer> {
        layer_of(&self.0)
    }

    pub fn encode(&self) -> usize {
        encode(&self.0)
    }

    pub fn decode(index: usize, arity: usize) -> Result<Self, CoreError> {
        if arity == 0 {
            return Err(CoreError::ZeroArity);
        }
        let mut buf = vec![0u8; arity];
        decode_into(index, &mut buf);
        Ok(TernaryTuple(buf))
    }
}

impl fmt::Display for TernaryTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

/// Counts of ones and twos, or `None` when the tuple contains a 0.
pub fn layer_of(t: &[u8]) -> Option<Layer> {
    let mut e = 0;
    let mut d = 0;
    for &c in t {
        match c {
            1 => e += 1,
            2 => d += 1,
            _ => return None,
        }
    }
    Some(Layer { e, d })
}

/// Base-3 index with component 1 as the least significant digit.
pub fn encode(t: &[u8]) -> usize {
    t.iter().rev().fold(0usize, |acc, &c| acc * 3 + c as usize)
}

/// Inverse of [`encode`] for a buffer of the desired arity; high digits beyond the
/// buffer are dropped.
pub fn decode_into(mut index: usize, buf: &mut [u8]) {
    for slot in buf.iter_mut() {
        *slot = (index % 3) as u8;
        index /= 3;
    }
}

/// `3^n`, or `None` on overflow.
pub fn pow3(n: usize) -> Option<usize> {
    3usize.checked_pow(u32::try_from(n).ok()?)
}

/// Steps `t` to the next tuple in index order over the digit set `lo..=2`.
/// Returns `false` once the sweep wraps around.
fn step(t: &mut [u8], lo: u8) -> bool {
    for c in t.iter_mut() {
        if *c < 2 {
            *c += 1;
            return true;
        }
        *c = lo;
    }
    false
}

/// Calls `visit` on every tuple of {0,1,2}ⁿ in index order.
pub fn for_each_tuple(n: usize, mut visit: impl FnMut(&[u8])) {
    let mut t = vec![0u8; n];
    loop {
        visit(&t);
        if !step(&mut t, 0) {
            break;
        }
    }
}

/// Calls `visit` on every tuple of {1,2}ⁿ, ordered by the same digit significance.
pub fn for_each_binary_tuple(n: usize, mut visit: impl FnMut(&[u8])) {
    let mut t = vec![1u8; n];
    loop {
        visit(&t);
        if !step(&mut t, 1) {
            break;
        }
    }
}

/// Short-circuiting variant of [`for_each_tuple`]: stops at the first `Some`.
pub fn find_tuple<T>(n: usize, binary_only: bool, mut probe: impl FnMut(&[u8]) -> Option<T>) -> Option<T> {
    let lo = if binary_only { 1 } else { 0 };
    let mut t = vec![lo; n];
    loop {
        if let Some(found) = probe(&t) {
            return Some(found);
        }
        if !step(&mut t, lo) {
            return None;
        }
    }
}
