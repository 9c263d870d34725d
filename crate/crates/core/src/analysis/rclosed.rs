//! Random check that formulas over R stay in R.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::AnalysisError;
use crate::formula::{Formula, Generator, GeneratorSet};
use crate::function::{TernaryFunction, DEFAULT_CANONICAL_ARITY_CAP};
use crate::tuple::{decode_into, pow3};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SampleShape {
    pub max_arity: usize,
    pub max_depth: usize,
    pub max_generators: usize,
}

impl Default for SampleShape {
    fn default() -> Self {
        SampleShape { max_arity: 5, max_depth: 4, max_generators: 3 }
    }
}

/// Violations found in one formula.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RCheck {
    /// The formula's function is not in R.
    pub not_in_r: bool,
    /// Points where a subformula is 0 but its parent is not.
    pub zero_propagation: usize,
    /// Points where a node is 1 but one of its non-variable arguments is not.
    pub inclusion: usize,
}

impl RCheck {
    pub fn clean(&self) -> bool {
        !self.not_in_r && self.zero_propagation == 0 && self.inclusion == 0
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RClosedReport {
    pub samples: usize,
    pub passes: usize,
    pub in_r_violations: usize,
    pub zero_propagation_violations: usize,
    pub inclusion_violations: usize,
    pub first_counterexample: Option<String>,
}

impl RClosedReport {
    pub fn passed(&self) -> bool {
        self.passes == self.samples
    }
}

/// Tables of every node of `phi` over `n` variables, bottom-up, checking each node
/// against its arguments.
fn check_node(phi: &Formula, env: &GeneratorSet, n: usize, points: usize, out: &mut RCheck) -> Result<Vec<u8>, AnalysisError> {
    match phi {
        Formula::Var(i) => {
            if *i > n {
                return Err(crate::error::FormulaError::UnboundVariable { index: *i, arity: n }.into());
            }
            let mut buf = vec![0u8; n];
            Ok((0..points)
                .map(|idx| {
                    decode_into(idx, &mut buf);
                    buf[i - 1]
                })
                .collect())
        }
        Formula::Apply { symbol, args } => {
            let g = env.get(symbol).ok_or_else(|| crate::error::FormulaError::UnknownGenerator(symbol.clone()))?;
            let children = args.iter().map(|a| check_node(a, env, n, points, out)).collect::<Result<Vec<_>, _>>()?;
            let mut vals = vec![0u8; args.len()];
            let mut table = Vec::with_capacity(points);
            for idx in 0..points {
                for (v, c) in vals.iter_mut().zip(&children) {
                    *v = c[idx];
                }
                table.push(g.semantics().eval_unchecked(&vals));
            }
            for (arg, child) in args.iter().zip(&children) {
                for idx in 0..points {
                    if child[idx] == 0 && table[idx] != 0 {
                        out.zero_propagation += 1;
                    }
                    if !arg.is_var() && table[idx] == 1 && child[idx] != 1 {
                        out.inclusion += 1;
                    }
                }
            }
            Ok(table)
        }
    }
}

/// Checks that `phi` over `n` variables is in R, that zeros propagate from every
/// subformula to its parent, and that every node's 1-points lie inside those of its
/// non-variable arguments.
pub fn check_r_properties(phi: &Formula, env: &GeneratorSet, n: usize) -> Result<RCheck, AnalysisError> {
    if n == 0 || n > DEFAULT_CANONICAL_ARITY_CAP {
        return Err(AnalysisError::Precondition(format!("arity {n} outside 1..={DEFAULT_CANONICAL_ARITY_CAP}")));
    }
    let points = pow3(n).expect("small arity");
    let env = env.restricted_to(phi)?;
    let mut check = RCheck::default();
    let table = check_node(phi, &env, n, points, &mut check)?;
    check.not_in_r = !TernaryFunction::new(n, table)?.in_r();
    Ok(check)
}

fn random_r_function(rng: &mut ChaCha8Rng, arity: usize) -> TernaryFunction {
    let points = pow3(arity).expect("small arity");
    let mut buf = vec![0u8; arity];
    let table = (0..points)
        .map(|idx| {
            decode_into(idx, &mut buf);
            if buf.contains(&0) {
                0
            } else {
                u8::from(rng.gen_bool(0.5))
            }
        })
        .collect();
    TernaryFunction::new(arity, table).expect("valid table")
}

fn random_formula(rng: &mut ChaCha8Rng, names: &[(String, usize)], n: usize, depth: usize, root: bool) -> Formula {
    if depth == 0 || (!root && rng.gen_bool(0.35)) {
        return Formula::Var(rng.gen_range(1..=n));
    }
    let (name, arity) = &names[rng.gen_range(0..names.len())];
    let args = (0..*arity).map(|_| random_formula(rng, names, n, depth - 1, false)).collect();
    Formula::apply(name.clone(), args)
}

/// Renumbers the variables of `phi` to x1..xk in order of first occurrence.
fn compact_variables(phi: &Formula) -> (Formula, usize) {
    let mut order: Vec<usize> = Vec::new();
    for sub in phi.subformulas() {
        if let Formula::Var(i) = sub {
            if !order.contains(i) {
                order.push(*i);
            }
        }
    }
    let max = phi.max_variable();
    let mut replacements: Vec<Formula> = (1..=max).map(Formula::Var).collect();
    for (k, &i) in order.iter().enumerate() {
        replacements[i - 1] = Formula::Var(k + 1);
    }
    (phi.substitute(&replacements).expect("every variable has a replacement"), order.len())
}

/// One random sample: a generator set of R functions, a formula whose root is an
/// application, and its number of variables. Every variable x1..xn occurs in the
/// formula; a variable that does not occur would be fictitious, and no function with
/// a fictitious variable is in R.
pub fn random_r_sample(rng: &mut ChaCha8Rng, shape: SampleShape) -> (GeneratorSet, Formula, usize) {
    let mut env = GeneratorSet::new();
    let mut names = Vec::new();
    for k in 0..rng.gen_range(1..=shape.max_generators.max(1)) {
        let arity = rng.gen_range(1..=shape.max_arity);
        let name = format!("r{k}");
        let g = Generator::new(name.clone(), random_r_function(rng, arity).into()).expect("valid name");
        env.insert(g).expect("fresh name");
        names.push((name, arity));
    }
    let n = rng.gen_range(1..=shape.max_arity);
    let depth = rng.gen_range(1..=shape.max_depth.max(1));
    let (phi, n) = compact_variables(&random_formula(rng, &names, n, depth, true));
    (env, phi, n)
}

/// Evaluates `samples` random formulas over random R generators and tallies violations.
pub fn verify_r_closed(samples: usize, seed: u64) -> Result<RClosedReport, AnalysisError> {
    verify_r_closed_with(samples, seed, SampleShape::default())
}

pub fn verify_r_closed_with(samples: usize, seed: u64, shape: SampleShape) -> Result<RClosedReport, AnalysisError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = RClosedReport { samples, ..RClosedReport::default() };
    for _ in 0..samples {
        let (env, phi, n) = random_r_sample(&mut rng, shape);
        let check = check_r_properties(&phi, &env, n)?;
        report.in_r_violations += usize::from(check.not_in_r);
        report.zero_propagation_violations += check.zero_propagation;
        report.inclusion_violations += check.inclusion;
        if check.clean() {
            report.passes += 1;
        } else if report.first_counterexample.is_none() {
            report.first_counterexample = Some(format!("{phi} over {n} variables"));
        }
    }
    Ok(report)
}
