//! Whole-class constructions: symmetric functions from excluded-layer functions, and
//! every function of R from a symmetric one.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::{canonical_i_source, nest_i2, Construction, Synthesizer, Witness};
use crate::error::SynthesisError;
use crate::formula::{Formula, GeneratorSet};
use crate::function::{ExcludedLayerFunction, SymmetricRFunction, TernaryFunction};

impl Synthesizer {
    /// `f = i_t(f₁(x), …, f_t(x))` where `f₁..f_t` exclude the zero layers of `f`.
    /// With no zero layers `f = iₙ`, built from the canonical i₂ source.
    pub fn s_from_sminus1(&self, f: &SymmetricRFunction) -> Result<Witness, SynthesisError> {
        let n = f.arity();
        let zero_layers = f.zero_layers();
        let mut env = GeneratorSet::new();
        let mut notes = Vec::new();
        let formula = match zero_layers.as_slice() {
            [] => {
                let i2 = self.i2_from(canonical_i_source())?;
                env.merge(&i2.generators)?;
                notes.push(format!("no zero layers: i{n} nested from {}", canonical_i_source()));
                nest_i2(&i2.formula, (1..=n).map(Formula::Var).collect())?
            }
            [e] => {
                let name = env.add_auto(ExcludedLayerFunction::new(n, *e, n - e)?);
                notes.push(format!("single zero layer L({e},{})", n - e));
                Formula::apply_to_variables(name, n)
            }
            layers => {
                let i2 = self.i2_from(canonical_i_source())?;
                env.merge(&i2.generators)?;
                let leaves = layers
                    .iter()
                    .map(|&e| Ok(Formula::apply_to_variables(env.add_auto(ExcludedLayerFunction::new(n, e, n - e)?), n)))
                    .collect::<Result<Vec<_>, SynthesisError>>()?;
                notes.push(format!("i{} over the zero layers {layers:?}", layers.len()));
                nest_i2(&i2.formula, leaves)?
            }
        };
        self.certify(f.clone().into(), &env, formula, Construction::SFromSMinus1, None, notes)
    }

    /// The symmetric generator and repetition pattern that realize `f ∈ R`:
    /// `g(x₁, x₂ ×2, …, xₙ ×2ⁿ⁻¹)` with `g` of arity `2ⁿ − 1` that is 1 exactly on the
    /// layers `Σ_{αⱼ=1} 2^{j−1}` for the 1-points `α` of `f`.
    pub fn r_to_symmetric(&self, f: &TernaryFunction) -> Result<(SymmetricRFunction, Vec<Formula>), SynthesisError> {
        let n = f.arity();
        if !f.in_r() {
            return Err(SynthesisError::Precondition(format!("target of arity {n} is not in R")));
        }
        if n > self.config.witness_table_cap || n >= usize::BITS as usize {
            return Err(SynthesisError::Unverifiable { arity: n, cap: self.config.witness_table_cap });
        }
        let m = (1usize << n) - 1;
        let layers = f.one_points().into_iter().map(|alpha| {
            alpha.iter().enumerate().filter(|(_, &v)| v == 1).map(|(j, _)| 1usize << j).sum::<usize>()
        });
        let g = SymmetricRFunction::new(m, layers)?;
        let mut args = Vec::with_capacity(m);
        for j in 0..n {
            args.extend(core::iter::repeat_n(Formula::Var(j + 1), 1 << j));
        }
        Ok((g, args))
    }

    pub fn r_from_s(&self, f: &TernaryFunction) -> Result<Witness, SynthesisError> {
        let (g, args) = self.r_to_symmetric(f)?;
        let mut env = GeneratorSet::new();
        let name = env.add_auto(g.clone());
        let notes = vec![format!("symmetric generator {g} of arity {}", g.arity())];
        self.certify(f.clone().into(), &env, Formula::apply(name, args), Construction::RFromS, None, notes)
    }

    /// [`Synthesizer::r_from_s`] with its symmetric generator replaced by the formula of
    /// [`Synthesizer::s_from_sminus1`].
    pub fn r_from_sminus1(&self, f: &TernaryFunction) -> Result<Witness, SynthesisError> {
        let (g, args) = self.r_to_symmetric(f)?;
        let inner = self.s_from_sminus1(&g)?;
        let formula = inner.formula.substitute(&args)?;
        let notes = vec![format!(
            "symmetric generator {g} of arity {} realized by {} generator(s)",
            g.arity(),
            inner.generators.len()
        )];
        self.certify(f.clone().into(), &inner.generators, formula, Construction::RFromSMinus1, None, notes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use crate::function::Semantics;
    use crate::tuple::for_each_tuple;
    use alloc::collections::BTreeSet;
    use alloc::string::String;

    fn names(w: &Witness) -> BTreeSet<String> {
        w.generators.iter().map(|g| String::from(g.name())).collect()
    }

    #[test]
    fn s_from_sminus1_examples() {
        let synth = Synthesizer::default();
        let f = SymmetricRFunction::new(4, [0, 4]).unwrap();
        let w = synth.s_from_sminus1(&f).unwrap();
        assert_eq!(w.check_points, 81);
        for name in ["s4_1_3", "s4_2_2", "s4_3_1"] {
            assert!(names(&w).contains(name), "{name}");
        }

        let zero = SymmetricRFunction::new(2, []).unwrap();
        let w = synth.s_from_sminus1(&zero).unwrap();
        assert_eq!(w.check_points, 9);
        for name in ["s2_0_2", "s2_1_1", "s2_2_0"] {
            assert!(names(&w).contains(name), "{name}");
        }

        let i4 = SymmetricRFunction::i(4).unwrap();
        let w = synth.s_from_sminus1(&i4).unwrap();
        assert_eq!(w.check_points, 81);
        assert_eq!(names(&w), BTreeSet::from([String::from("s5_2_3")]));
    }

    #[test]
    fn s_from_sminus1_single_layer_is_direct() {
        let f = SymmetricRFunction::new(3, [0, 2, 3]).unwrap();
        let w = Synthesizer::default().s_from_sminus1(&f).unwrap();
        assert_eq!(w.formula.to_string(), "(s3_1_2 x1 x2 x3)");
    }

    fn table(n: usize, ones: &[&[u8]]) -> TernaryFunction {
        TernaryFunction::from_fn(n, 12, |t| u8::from(ones.contains(&t))).unwrap()
    }

    #[test]
    fn r_from_s_examples() {
        let synth = Synthesizer::default();
        let i2 = SymmetricRFunction::i(2).unwrap().to_truth_table().unwrap();
        let w = synth.r_from_s(&i2).unwrap();
        assert_eq!(w.formula.to_string(), "(i3 x1 x2 x2)");
        assert_eq!(w.check_points, 9);

        let w = synth.r_from_s(&table(2, &[&[1, 2]])).unwrap();
        assert_eq!(w.formula.to_string(), "(sym3_1 x1 x2 x2)");
        // (2,1) maps to (2,1,1): two ones, not a one-layer.
        assert_eq!(w.formula.eval(&w.generators, &[2, 1]).unwrap(), 0);
        assert_eq!(w.formula.eval(&w.generators, &[1, 2]).unwrap(), 1);

        let w = synth.r_from_s(&table(1, &[&[1]])).unwrap();
        assert_eq!(w.formula.to_string(), "(sym1_1 x1)");
        let generator = w.generators.iter().next().unwrap().clone();
        match generator.semantics() {
            Semantics::Symmetric(g) => assert_eq!(g.one_layers(), BTreeSet::from([1])),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn r_from_s_rejects_outside_r() {
        let f = TernaryFunction::from_fn(1, 12, |t| u8::from(t[0] == 0)).unwrap();
        assert!(matches!(Synthesizer::default().r_from_s(&f), Err(SynthesisError::Precondition(_))));
    }

    #[test]
    fn r_from_sminus1_examples() {
        let synth = Synthesizer::default();
        let i2 = SymmetricRFunction::i(2).unwrap().to_truth_table().unwrap();
        let w = synth.r_from_sminus1(&i2).unwrap();
        assert_eq!(w.check_points, 9);
        assert!(w.generators.iter().all(|g| matches!(g.semantics(), Semantics::Excluded(_))));

        let zero = TernaryFunction::from_fn(1, 12, |_| 0).unwrap();
        assert_eq!(synth.r_from_sminus1(&zero).unwrap().check_points, 3);

        let single = table(3, &[&[1, 2, 1]]);
        let w = synth.r_from_sminus1(&single).unwrap();
        assert_eq!(w.check_points, 27);
        assert!(w.generators.iter().any(|g| g.arity() == 7));
        let mut agree = true;
        for_each_tuple(3, |t| agree &= w.formula.eval(&w.generators, t).unwrap() == single.eval_unchecked(t));
        assert!(agree);
    }
}
