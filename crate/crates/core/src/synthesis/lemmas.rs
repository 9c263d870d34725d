//! Single-generator constructions: i₂ by identification, iₛ by nesting, symmetrization,
//! and the three family constructions.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::nesting::{layer_transversal, nest_i2};
use super::{Construction, Synthesizer, Witness};
use crate::error::SynthesisError;
use crate::formula::{Formula, GeneratorSet};
use crate::function::{ExcludedLayerFunction, Semantics, SymmetricRFunction};
use crate::perm::VariablePermutation;
use crate::tuple::for_each_binary_tuple;

fn precondition(msg: impl Into<String>) -> SynthesisError {
    SynthesisError::Precondition(msg.into())
}

/// `symbol` applied to `count` copies of each listed argument, in order.
/// The counts must add up to the generator's arity.
fn repeated(symbol: &str, arity: usize, blocks: &[(Formula, usize)]) -> Formula {
    let total: usize = blocks.iter().map(|(_, c)| c).sum();
    assert_eq!(total, arity, "repetition counts must sum to the arity of {symbol}");
    let mut args = Vec::with_capacity(arity);
    for (arg, count) in blocks {
        args.extend(core::iter::repeat_n(arg.clone(), *count));
    }
    Formula::apply(symbol, args)
}

fn pow2(k: usize) -> Option<usize> {
    1usize.checked_shl(u32::try_from(k).ok()?).filter(|&v| v != 0)
}

/// Zero set of `f1` on {1,2}ⁿ must be exactly `{reference}`.
fn check_unique_zero(env: &GeneratorSet, f1: &Formula, reference: &[u8]) -> Result<(), SynthesisError> {
    let bound = f1.bind(env, reference.len())?;
    let mut zeros = Vec::new();
    for_each_binary_tuple(reference.len(), |t| {
        if bound.eval(t) == 0 {
            zeros.push(t.to_vec());
        }
    });
    if zeros.len() == 1 && zeros[0] == reference {
        Ok(())
    } else {
        Err(SynthesisError::Uniqueness(format!("zeros on {{1,2}}^n: {zeros:?}, expected only {reference:?}")))
    }
}

impl Synthesizer {
    /// i₂ from a single S₋₁ member with `n > 3`, `e > 0`, `d > 0`, by identifying
    /// variables so that no assignment of {1,2}² hits the excluded layer.
    pub fn i2_from(&self, f: ExcludedLayerFunction) -> Result<Witness, SynthesisError> {
        let (n, e, d) = (f.arity(), f.e(), f.d());
        if n <= 3 || e == 0 || d == 0 {
            return Err(precondition(format!("i2 construction needs n > 3, e > 0, d > 0; got {f}")));
        }
        let (first, second, case) = if e == 1 {
            (2, d - 1, "e_f = 1: (x1, x1, d_f-1 copies of x2)")
        } else if d == 1 {
            (2, e - 1, "d_f = 1: (x1, x1, e_f-1 copies of x2)")
        } else if e >= d {
            (e + 1, d - 1, "e_f >= d_f > 1: (e_f+1 copies of x1, d_f-1 of x2)")
        } else {
            (d + 1, e - 1, "d_f > e_f > 1: (d_f+1 copies of x1, e_f-1 of x2)")
        };
        let mut env = GeneratorSet::new();
        let name = env.add_auto(f);
        let formula = repeated(&name, n, &[(Formula::Var(1), first), (Formula::Var(2), second)]);
        let mut notes = vec![format!("case {case}")];
        if e == d {
            notes.push(String::from("e_f = d_f is handled by the e_f >= d_f scheme"));
        }
        let target = SymmetricRFunction::i(2).expect("arity 2").into();
        self.certify(target, &env, formula, Construction::IdentificationI2, None, notes)
    }

    /// iₛ by nesting a verified i₂ witness.
    pub fn is_from(&self, s: usize, i2_witness: &Witness) -> Result<Witness, SynthesisError> {
        let pair = self.pair_of(i2_witness)?;
        if s == 0 {
            return Err(precondition("i_s needs s >= 1"));
        }
        let formula = nest_i2(&pair, (1..=s).map(Formula::Var).collect())?;
        let target = SymmetricRFunction::i(s)?.into();
        self.certify(target, &i2_witness.generators, formula, Construction::IChain, None, vec![])
    }

    fn pair_of(&self, i2_witness: &Witness) -> Result<Formula, SynthesisError> {
        let is_i2 = matches!(&i2_witness.target, Semantics::Symmetric(g) if g.arity() == 2 && g.is_i());
        if !i2_witness.verified || !is_i2 {
            return Err(precondition("expected a verified witness for i2"));
        }
        Ok(i2_witness.formula.clone())
    }

    /// `i_p(f1(σ₁x), …, f1(σ_p x))` over all `p = n!` permutations.
    pub fn symmetrize(&self, f1: &Formula, n: usize, i2_witness: &Witness) -> Result<Formula, SynthesisError> {
        self.symmetrize_over(f1, &VariablePermutation::all(n), i2_witness)
    }

    /// `i_p(f1(σ₁x), …, f1(σ_p x))` over the given permutations.
    pub fn symmetrize_over(
        &self,
        f1: &Formula,
        perms: &[VariablePermutation],
        i2_witness: &Witness,
    ) -> Result<Formula, SynthesisError> {
        let pair = self.pair_of(i2_witness)?;
        let leaves = perms.iter().map(|sigma| f1.apply_permutation(sigma)).collect::<Result<Vec<_>, _>>()?;
        Ok(nest_i2(&pair, leaves)?)
    }

    /// Symmetrizes an `f1` whose unique zero on {1,2}ⁿ is `reference` and certifies
    /// the result against `target`.
    fn finish_family(
        &self,
        target: ExcludedLayerFunction,
        g: ExcludedLayerFunction,
        f1: Formula,
        reference: &[u8],
        construction: Construction,
        mut notes: Vec<String>,
    ) -> Result<Witness, SynthesisError> {
        let i2 = self.i2_from(g)?;
        let mut env = GeneratorSet::new();
        env.add_auto(g);
        check_unique_zero(&env, &f1, reference)?;
        let perms = layer_transversal(reference);
        notes.push(format!(
            "symmetrized over {} permutations, one per tuple of {}",
            perms.len(),
            target.excluded()
        ));
        let formula = self.symmetrize_over(&f1, &perms, &i2)?;
        self.certify(target.into(), &env, formula, construction, Some(f1), notes)
    }

    /// `g(x1 repeated m−n+1 times, x2, …, xn)` for `e_f = e_g = 0` or `d_f = d_g = 0`, `m ≥ n`.
    pub fn direct_identification(
        &self,
        f: ExcludedLayerFunction,
        g: ExcludedLayerFunction,
    ) -> Result<Witness, SynthesisError> {
        let (n, m) = (f.arity(), g.arity());
        let all_twos = f.e() == 0 && g.e() == 0;
        let all_ones = f.d() == 0 && g.d() == 0;
        if !(all_twos || all_ones) || m < n {
            return Err(precondition(format!(
                "direct identification needs e_f = e_g = 0 or d_f = d_g = 0 and arity(g) >= arity(f); got f={f}, g={g}"
            )));
        }
        let mut env = GeneratorSet::new();
        let name = env.add_auto(g);
        let mut blocks = vec![(Formula::Var(1), m - n + 1)];
        blocks.extend((2..=n).map(|j| (Formula::Var(j), 1)));
        let formula = repeated(&name, m, &blocks);
        self.certify(f.into(), &env, formula, Construction::DirectIdentification, None, vec![])
    }

    /// Construction for targets and generators with `e_g ≥ 2^{e_f} − 1` and
    /// `d_g ≥ 2^{e_f}(2^{d_f} − 1)`: variable `x_j` is repeated `2^{j−1}` times so that the
    /// count of ones encodes the tuple in binary.
    pub fn family_unbounded(&self, f: ExcludedLayerFunction, g: ExcludedLayerFunction) -> Result<Witness, SynthesisError> {
        let (n, ef, df) = (f.arity(), f.e(), f.d());
        let (eg, dg) = (g.e(), g.d());
        if ef == 0 || df == 0 || eg == 0 || dg == 0 {
            return Err(precondition(format!("needs e, d > 0 for target and generator; got f={f}, g={g}")));
        }
        let two_ef = pow2(ef).ok_or_else(|| precondition("2^e_f overflows"))?;
        let e_bound = two_ef - 1;
        let d_bound = pow2(df).and_then(|p| (p - 1).checked_mul(two_ef)).ok_or_else(|| precondition("2^d_f overflows"))?;
        if eg < e_bound || dg < d_bound {
            return Err(precondition(format!(
                "bounds violated: need e_g >= {e_bound} and d_g >= {d_bound}; got e_g={eg}, d_g={dg}"
            )));
        }
        let half = pow2(n - 1).expect("n - 1 < e_f + d_f");
        // Conservation: padding + (2^{n-1} - 1) + last = e_g + d_g.
        let last = dg + two_ef - half;
        let padding = eg + 1 - two_ef;
        let i2 = self.i2_from(g)?;
        let i1_x1 = nest_i2(&i2.formula, vec![Formula::Var(1)])?;
        let mut blocks = vec![(i1_x1, padding)];
        blocks.extend((1..n).map(|j| (Formula::Var(j), pow2(j - 1).expect("j < n"))));
        blocks.push((Formula::Var(n), last));
        let name = g_name(g);
        let f1 = repeated(&name, g.arity(), &blocks);
        let notes = vec![
            format!("bounds: e_g >= {e_bound}, d_g >= {d_bound}"),
            format!(
                "last repetition count derived from argument conservation: d_g - 2^(n-1) + 2^e_f = {last} \
                 (the form d_g - 2^n + 2^e_f does not sum to the arity of g)"
            ),
        ];
        self.finish_family(f, g, f1, &f.excluded().reference_tuple(), Construction::Unbounded, notes)
    }

    /// Construction for `e_g = e_f = e`: with `e > 0` it needs `d_g > (e+1)·d_f`; with
    /// `e = 0` it is a direct identification and needs `arity(g) > arity(f)`.
    pub fn family_fixed_e(&self, f: ExcludedLayerFunction, g: ExcludedLayerFunction) -> Result<Witness, SynthesisError> {
        let e = f.e();
        if g.e() != e {
            return Err(precondition(format!("fixed-e construction needs e_g = e_f; got f={f}, g={g}")));
        }
        if e == 0 {
            if g.arity() <= f.arity() {
                return Err(precondition(format!("e = 0 needs arity(g) > arity(f); got f={f}, g={g}")));
            }
            let mut w = self.direct_identification(f, g)?;
            w.construction = Construction::FixedE;
            return Ok(w);
        }
        let (n, df, dg) = (f.arity(), f.d(), g.d());
        if df == 0 {
            return Err(precondition(format!("fixed-e construction with e > 0 needs d_f > 0; got f={f}")));
        }
        let bound = (e + 1).checked_mul(df).ok_or_else(|| precondition("bound overflows"))?;
        if dg <= bound {
            return Err(precondition(format!("bound violated: need d_g > (e+1)*d_f = {bound}; got d_g={dg}")));
        }
        let last = dg - (e + 1) * (df - 1);
        let mut blocks: Vec<(Formula, usize)> = (1..=e).map(|j| (Formula::Var(j), 1)).collect();
        blocks.extend((e + 1..n).map(|j| (Formula::Var(j), e + 1)));
        blocks.push((Formula::Var(n), last));
        let f1 = repeated(&g_name(g), g.arity(), &blocks);
        let notes = vec![format!("bound: d_g > (e+1)*d_f = {bound}")];
        self.finish_family(f, g, f1, &f.excluded().reference_tuple(), Construction::FixedE, notes)
    }

    /// Mirror of [`Synthesizer::family_fixed_e`] with the roles of 1 and 2 exchanged:
    /// `d_g = d_f = d`, and for `d > 0` the bound `e_g > (d+1)·e_f`.
    pub fn family_fixed_d(&self, f: ExcludedLayerFunction, g: ExcludedLayerFunction) -> Result<Witness, SynthesisError> {
        let d = f.d();
        if g.d() != d {
            return Err(precondition(format!("fixed-d construction needs d_g = d_f; got f={f}, g={g}")));
        }
        if d == 0 {
            if g.arity() <= f.arity() {
                return Err(precondition(format!("d = 0 needs arity(g) > arity(f); got f={f}, g={g}")));
            }
            let mut w = self.direct_identification(f, g)?;
            w.construction = Construction::FixedD;
            return Ok(w);
        }
        let (n, ef, eg) = (f.arity(), f.e(), g.e());
        if ef == 0 {
            return Err(precondition(format!("fixed-d construction with d > 0 needs e_f > 0; got f={f}")));
        }
        let bound = (d + 1).checked_mul(ef).ok_or_else(|| precondition("bound overflows"))?;
        if eg <= bound {
            return Err(precondition(format!("bound violated: need e_g > (d+1)*e_f = {bound}; got e_g={eg}")));
        }
        let last = eg - (d + 1) * (ef - 1);
        // The fixed-e layout read with variables in reverse order, so the unique zero is
        // again (1^e_f, 2^d).
        let rev = |k: usize| Formula::Var(n + 1 - k);
        let mut blocks: Vec<(Formula, usize)> = (1..=d).map(|k| (rev(k), 1)).collect();
        blocks.extend((d + 1..n).map(|k| (rev(k), d + 1)));
        blocks.push((rev(n), last));
        let f1 = repeated(&g_name(g), g.arity(), &blocks);
        let notes = vec![format!("mirrored bound: e_g > (d+1)*e_f = {bound}")];
        self.finish_family(f, g, f1, &f.excluded().reference_tuple(), Construction::FixedD, notes)
    }
}

fn g_name(g: ExcludedLayerFunction) -> String {
    Semantics::from(g).auto_name()
}
