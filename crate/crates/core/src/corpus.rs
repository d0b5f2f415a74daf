//! Seeded random object generators for the randomized contract suites and
//! the oracle-agreement corpus.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::budget::BRUTE_ATOM_CAP;
use crate::instance::TermSet;
use crate::syntax::{Formula, Signature, Term, Theory};

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random ground term over the signature's functions.
pub fn random_ground_term(rng: &mut impl Rng, sig: &Signature, max_depth: usize) -> Term {
    let constants: Vec<&str> = sig.constants().collect();
    assert!(!constants.is_empty());
    if max_depth == 0 {
        return Term::constant(constants[rng.gen_range(0..constants.len())]);
    }
    let functions: Vec<(String, usize)> = sig.functions().to_vec();
    let (name, arity) = functions[rng.gen_range(0..functions.len())].clone();
    let args = (0..arity).map(|_| random_ground_term(rng, sig, max_depth - 1)).collect();
    Term::App(name, args)
}

fn random_term_with_vars(rng: &mut impl Rng, sig: &Signature, vars: &[String], max_depth: usize) -> Term {
    if !vars.is_empty() && rng.gen_bool(0.4) {
        return Term::Var(vars[rng.gen_range(0..vars.len())].clone());
    }
    if max_depth == 0 {
        let constants: Vec<&str> = sig.constants().collect();
        if constants.is_empty() && !vars.is_empty() {
            return Term::Var(vars[rng.gen_range(0..vars.len())].clone());
        }
        return Term::constant(constants[rng.gen_range(0..constants.len())]);
    }
    let functions: Vec<(String, usize)> = sig.functions().to_vec();
    let (name, arity) = functions[rng.gen_range(0..functions.len())].clone();
    let args = (0..arity).map(|_| random_term_with_vars(rng, sig, vars, max_depth - 1)).collect();
    Term::App(name, args)
}

fn random_atom(rng: &mut impl Rng, sig: &Signature, vars: &[String], depth: usize) -> Formula {
    let mut preds: Vec<(String, usize)> = sig.predicates().to_vec();
    preds.push(("=".into(), 2));
    let (name, arity) = preds[rng.gen_range(0..preds.len())].clone();
    let args = (0..arity).map(|_| random_term_with_vars(rng, sig, vars, depth)).collect();
    Formula::Atom(name, args)
}

/// Random formula; every free variable is drawn from `vars`.
pub fn random_formula(
    rng: &mut impl Rng,
    sig: &Signature,
    vars: &mut Vec<String>,
    depth: usize,
) -> Formula {
    if depth == 0 {
        return random_atom(rng, sig, vars, 1);
    }
    match rng.gen_range(0..8u8) {
        0 => random_atom(rng, sig, vars, 1),
        1 => Formula::not(random_formula(rng, sig, vars, depth - 1)),
        2 => {
            let a = random_formula(rng, sig, vars, depth - 1);
            let b = random_formula(rng, sig, vars, depth - 1);
            Formula::and(a, b)
        }
        3 => {
            let a = random_formula(rng, sig, vars, depth - 1);
            let b = random_formula(rng, sig, vars, depth - 1);
            Formula::or(a, b)
        }
        4 => {
            let a = random_formula(rng, sig, vars, depth - 1);
            let b = random_formula(rng, sig, vars, depth - 1);
            Formula::implies(a, b)
        }
        _ => {
            let name = format!("v{}", rng.gen_range(0..50u8));
            vars.push(name.clone());
            let body = random_formula(rng, sig, vars, depth - 1);
            vars.pop();
            if rng.gen_bool(0.5) {
                Formula::forall(&name, body)
            } else {
                Formula::exists(&name, body)
            }
        }
    }
}

/// Random closed formula: quantifiers are biased so sentences dominate; any
/// remaining free variables are closed universally.
pub fn random_sentence(rng: &mut impl Rng, sig: &Signature, depth: usize) -> Formula {
    let mut f = random_formula(rng, sig, &mut Vec::new(), depth);
    for v in f.free_vars() {
        f = Formula::forall(&v, f);
    }
    f
}

/// A small random theory plus a term set whose atom table stays within the
/// exhaustive-search cap, for oracle-agreement testing.
pub fn random_oracle_pair(rng: &mut impl Rng) -> (Theory, TermSet) {
    // Small signature pool; sizes are chosen so the atom count never
    // exceeds the exhaustive-search cap of 24.
    let with_s = rng.gen_bool(0.4);
    let with_q = rng.gen_bool(0.3);
    let mut preds = vec![("P".to_string(), 1usize)];
    if with_s {
        preds.push(("S".to_string(), 1));
    }
    if with_q {
        preds.push(("Q".to_string(), 2));
    }
    let functions = vec![("a".to_string(), 0usize), ("f".to_string(), 1)];
    let sig = Signature::new(functions, preds).expect("valid corpus signature");

    let n_axioms = rng.gen_range(1..=3usize);
    let axioms = (0..n_axioms)
        .map(|_| {
            let depth = rng.gen_range(1..=3);
            random_sentence(rng, &sig, depth)
        })
        .collect();
    let theory = Theory::new("random", sig.clone(), axioms).expect("sentences by construction");

    let atoms = |l: usize| {
        l * l + l + if with_s { l } else { 0 } + if with_q { l * l } else { 0 }
    };
    let max_size = (1..=3usize).filter(|&l| atoms(l) <= BRUTE_ATOM_CAP).max().unwrap();
    let size = if with_q && max_size == 3 && !rng.gen_bool(0.15) {
        // Tables at the very cap are slow to enumerate; sample them rarely.
        rng.gen_range(1..=2)
    } else {
        rng.gen_range(1..=max_size)
    };
    let mut lambda = TermSet::new([]).unwrap();
    let mut guard = 0;
    while lambda.len() < size && guard < 50 {
        lambda.insert(random_ground_term(rng, &sig, 2)).unwrap();
        guard += 1;
    }
    debug_assert!(atoms(lambda.len()) <= BRUTE_ATOM_CAP);
    (theory, lambda)
}

/// Deterministic sequence of random seeds derived from one master seed.
pub fn seeds(master: u64, count: usize) -> Vec<u64> {
    let mut rng = StdRng::seed_from_u64(master);
    (0..count).map(|_| rng.gen()).collect()
}
