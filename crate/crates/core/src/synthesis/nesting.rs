use alloc::vec;
use alloc::vec::Vec;

use crate::error::FormulaError;
use crate::formula::Formula;
use crate::perm::VariablePermutation;
use crate::tuple::{for_each_binary_tuple, Layer};

fn occurrences(phi: &Formula, var: usize) -> u128 {
    phi.subformulas().iter().filter(|s| matches!(s, Formula::Var(i) if *i == var)).count() as u128
}

/// Realizes `i_s(leaves)` from a formula `pair(x1, x2)` that realizes i₂.
///
/// `i₁(B) = pair(B, B)`, and for `s ≥ 2` the leaves are split into two blocks combined
/// by `pair`. Because `pair` may repeat each variable several times, the split point is
/// chosen by dynamic programming to minimize the number of leaf copies; when `x2`
/// occurs once this is the chain `pair(B₁, pair(B₂, …))`.
pub fn nest_i2(pair: &Formula, leaves: Vec<Formula>) -> Result<Formula, FormulaError> {
    if pair.max_variable() > 2 {
        return Err(FormulaError::UnboundVariable { index: pair.max_variable(), arity: 2 });
    }
    match leaves.len() {
        0 => Err(FormulaError::UnboundVariable { index: 1, arity: 0 }),
        1 => pair.substitute(&[leaves[0].clone(), leaves[0].clone()]),
        s => {
            let c1 = occurrences(pair, 1);
            let c2 = occurrences(pair, 2);
            // cost[k] = leaf copies in the best tree over k leaves; split[k] = size of the
            // block placed in x1's slot.
            let mut cost = vec![0u128; s + 1];
            let mut split = vec![0usize; s + 1];
            cost[1] = 1;
            for k in 2..=s {
                let (best_a, best_cost) = (1..k)
                    .map(|a| (a, c1.saturating_mul(cost[a]).saturating_add(c2.saturating_mul(cost[k - a]))))
                    .min_by_key(|&(_, c)| c)
                    .expect("k >= 2");
                cost[k] = best_cost;
                split[k] = best_a;
            }
            build(pair, &leaves, &split)
        }
    }
}

fn build(pair: &Formula, leaves: &[Formula], split: &[usize]) -> Result<Formula, FormulaError> {
    if leaves.len() == 1 {
        return Ok(leaves[0].clone());
    }
    let a = split[leaves.len()];
    let left = build(pair, &leaves[..a], split)?;
    let right = build(pair, &leaves[a..], split)?;
    pair.substitute(&[left, right])
}

/// One permutation per tuple β of the layer of `reference`, each sending `reference`
/// to β. Permuting a formula whose only zero on {1,2}ⁿ is `reference` by every one of
/// them yields zeros covering the whole layer.
pub fn layer_transversal(reference: &[u8]) -> Vec<VariablePermutation> {
    let n = reference.len();
    let layer = crate::tuple::layer_of(reference).unwrap_or(Layer::new(0, n));
    let mut out = Vec::new();
    for_each_binary_tuple(n, |beta| {
        if crate::tuple::layer_of(beta) == Some(layer) {
            out.push(VariablePermutation::mapping(reference, beta).expect("same layer"));
        }
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::GeneratorSet;
    use crate::function::{ExcludedLayerFunction, SymmetricRFunction};

    fn x(i: usize) -> Formula {
        Formula::Var(i)
    }

    #[test]
    fn chain_when_second_slot_is_single() {
        let w = Formula::apply("s5_2_3", vec![x(1), x(1), x(1), x(1), x(2)]);
        let i3 = nest_i2(&w, vec![x(1), x(2), x(3)]).unwrap();
        let inner = Formula::apply("s5_2_3", vec![x(2), x(2), x(2), x(2), x(3)]);
        assert_eq!(i3, Formula::apply("s5_2_3", vec![x(1), x(1), x(1), x(1), inner]));
        assert_eq!(nest_i2(&w, vec![x(1), x(2)]).unwrap(), w);
        assert_eq!(
            nest_i2(&w, vec![x(1)]).unwrap(),
            Formula::apply("s5_2_3", vec![x(1), x(1), x(1), x(1), x(1)])
        );
    }

    #[test]
    fn nesting_realizes_i_s_for_balanced_pairs() {
        // (4,1,3) gives i₂ = s(x1,x1,x2,x2); both slots repeat twice.
        let env = GeneratorSet::auto_resolving();
        let w = Formula::apply("s4_1_3", vec![x(1), x(1), x(2), x(2)]);
        for s in 1..=6 {
            let phi = nest_i2(&w, (1..=s).map(x).collect()).unwrap();
            let got = phi.semantic_function(&env, s, 12).unwrap();
            let expected = SymmetricRFunction::i(s).unwrap().to_truth_table().unwrap();
            assert_eq!(got, expected, "s={s}");
        }
    }

    #[test]
    fn nesting_size_stays_polynomial() {
        // (15,3,12): x1 thirteen times, x2 twice. A plain chain would need 2^23 copies.
        let mut args = vec![x(1); 13];
        args.extend([x(2), x(2)]);
        let w = Formula::apply("s15_3_12", args);
        let phi = nest_i2(&w, (1..=24).map(x).collect()).unwrap();
        assert!(phi.size() < 2_000_000, "size {}", phi.size());
    }

    #[test]
    fn transversal_covers_layer() {
        let tau = [1, 1, 2, 2];
        let perms = layer_transversal(&tau);
        assert_eq!(perms.len(), 6);
        let mut images: Vec<Vec<u8>> = perms.iter().map(|p| p.act_on_tuple(&tau)).collect();
        images.sort();
        images.dedup();
        assert_eq!(images.len(), 6);
        let f = ExcludedLayerFunction::new(4, 2, 2).unwrap();
        assert!(images.iter().all(|b| f.eval_unchecked(b) == 0));
    }
}
