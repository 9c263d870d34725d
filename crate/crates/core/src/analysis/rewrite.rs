//! Replacing applications with fewer arguments than the target arity by iₘ.

use alloc::format;
use alloc::vec::Vec;

use crate::error::AnalysisError;
use crate::formula::{Formula, Generator, GeneratorSet};
use crate::function::{Semantics, SymmetricRFunction, DEFAULT_TABLE_ARITY_CAP};
use crate::tuple::find_tuple;

/// A rewritten formula and the generator set it is bound against.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rewrite {
    pub formula: Formula,
    pub generators: GeneratorSet,
    /// Number of applications replaced.
    pub replaced: usize,
}

fn rewrite(phi: &Formula, n: usize, env: &mut GeneratorSet, replaced: &mut usize) -> Result<Formula, AnalysisError> {
    match phi {
        Formula::Var(i) => Ok(Formula::Var(*i)),
        Formula::Apply { symbol, args } => {
            let args = args.iter().map(|a| rewrite(a, n, env, replaced)).collect::<Result<Vec<_>, _>>()?;
            if args.len() < n {
                let g = Generator::auto(SymmetricRFunction::i(args.len())?);
                let name = alloc::string::String::from(g.name());
                env.insert(g)?;
                *replaced += 1;
                Ok(Formula::apply(name, args))
            } else {
                Ok(Formula::apply(symbol.clone(), args))
            }
        }
    }
}

/// Replaces every application `g(B₁,…,Bₘ)` with `m < n` by `iₘ(B₁,…,Bₘ)`.
///
/// `phi` must use only excluded-layer generators and realize an excluded-layer function
/// of arity `n`. The result is compared with the input on all 3ⁿ points; any difference
/// is returned as [`AnalysisError::SemanticChange`].
pub fn replace_small_applications(phi: &Formula, n: usize, env: &GeneratorSet) -> Result<Rewrite, AnalysisError> {
    let mut generators = env.restricted_to(phi)?;
    for g in generators.iter() {
        if !matches!(g.semantics(), Semantics::Excluded(_)) {
            return Err(AnalysisError::Precondition(format!("generator `{}` is not an excluded-layer function", g.name())));
        }
    }
    let before = phi.semantic_function(&generators, n, DEFAULT_TABLE_ARITY_CAP)?;
    if !before.classify().in_s_minus_1 {
        return Err(AnalysisError::Precondition(format!(
            "formula does not realize an excluded-layer function of arity {n}"
        )));
    }
    let mut replaced = 0;
    let formula = rewrite(phi, n, &mut generators, &mut replaced)?;
    let generators = generators.restricted_to(&formula)?;
    let bound = formula.bind(&generators, n)?;
    if let Some(t) = find_tuple(n, false, |t| (bound.eval(t) != before.eval_unchecked(t)).then(|| t.to_vec())) {
        return Err(AnalysisError::SemanticChange(t));
    }
    Ok(Rewrite { formula, generators, replaced })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::ExcludedLayerFunction;
    use alloc::string::ToString;
    use alloc::vec;

    fn x(i: usize) -> Formula {
        Formula::Var(i)
    }

    #[test]
    fn inner_small_application_becomes_i3() {
        // s5_3_2(x1..x4, s3_1_2(x1,x1,x1)): the inner application is 1 off zeros, so the
        // outer sees one extra 1 and excludes L(2,2).
        let env = GeneratorSet::auto_resolving();
        let inner = Formula::apply("s3_1_2", vec![x(1), x(1), x(1)]);
        let phi = Formula::apply("s5_3_2", vec![x(1), x(2), x(3), x(4), inner]);
        let target = ExcludedLayerFunction::new(4, 2, 2).unwrap().to_truth_table().unwrap();
        assert_eq!(phi.semantic_function(&env, 4, 12).unwrap(), target);
        let out = replace_small_applications(&phi, 4, &env).unwrap();
        assert_eq!(out.replaced, 1);
        assert_eq!(out.formula.to_string(), "(s5_3_2 x1 x2 x3 x4 (i3 x1 x1 x1))");
        assert_eq!(out.formula.semantic_function(&out.generators, 4, 12).unwrap(), target);
    }

    #[test]
    fn untouched_without_small_applications() {
        let env = GeneratorSet::auto_resolving();
        let phi = Formula::apply_to_variables("s4_1_3", 4);
        let out = replace_small_applications(&phi, 4, &env).unwrap();
        assert_eq!(out.formula, phi);
        assert_eq!(out.replaced, 0);
        // Nested, but every application has at least 4 arguments.
        let inner = Formula::apply("s4_1_3", vec![x(1), x(1), x(1), x(1)]);
        let phi = Formula::apply("s5_3_2", vec![x(1), x(2), x(3), x(4), inner]);
        assert_eq!(replace_small_applications(&phi, 4, &env).unwrap().formula, phi);
    }

    #[test]
    fn rejects_non_excluded_generators() {
        let env = GeneratorSet::auto_resolving();
        let phi = Formula::apply("i4", vec![x(1), x(2), x(3), x(4)]);
        assert!(matches!(replace_small_applications(&phi, 4, &env), Err(AnalysisError::Precondition(_))));
    }

    #[test]
    fn rejects_targets_outside_s_minus_1() {
        let env = GeneratorSet::auto_resolving();
        let phi = Formula::apply("s4_1_3", vec![x(1), x(1), x(2), x(2)]);
        assert!(matches!(replace_small_applications(&phi, 2, &env), Err(AnalysisError::Precondition(_))));
    }
}
