//! Empirical growth bounds: closure-level cardinality against the factorial
//! envelope, closure-level codes against the twice-iterated growth function,
//! and evaluation codes against the once-iterated one. A missing fit is a
//! build-breaking regression.

use herbrand_core::budget::Budget;
use herbrand_core::coding::{exp_iter, omega, p_bound_check, CodingScheme, Tower};
use herbrand_core::corpus;
use herbrand_core::engine::{grow_universe, numeral_terms, CodeThreshold, UniverseLevel};
use herbrand_core::eval::{atoms_over, Evaluation};
use herbrand_core::instance::TermSet;
use herbrand_core::skolem::{skolemize_theory, SkolemRegistry};
use herbrand_core::syntax::{parse_theory_file, Signature, Theory};
use std::sync::Arc;

fn q_theory() -> (Theory, SkolemRegistry) {
    let theory = parse_theory_file("q", include_str!("data/q.thy")).unwrap();
    let mut reg = SkolemRegistry::new();
    let _ = skolemize_theory(&theory, &mut reg);
    (theory, reg)
}

fn levels_for(base_size: u64, theory: &Theory, reg: &SkolemRegistry) -> Vec<UniverseLevel> {
    let budget = Budget::default();
    let scheme = CodingScheme::new(&theory.signature, reg);
    let base = TermSet::new(numeral_terms(base_size - 1, &theory.signature).unwrap()).unwrap();
    let mut level = UniverseLevel::new(base, CodeThreshold::AdmitAll, reg.clone());
    let mut out = Vec::new();
    for _ in 0..2 {
        level = grow_universe(&level, &theory.signature, &scheme, &budget).unwrap();
        out.push(level.clone());
    }
    out
}

#[test]
fn closure_cardinality_fits_the_factorial_envelope() {
    let (theory, reg) = q_theory();
    let mut samples = Vec::new();
    for size in 2..=6u64 {
        let levels = levels_for(size, &theory, &reg);
        for (n, level) in levels.iter().enumerate() {
            let x = Tower::from_u64(level.terms.len() as u64);
            let factorial: u64 = (1..=(n as u64 + 1)).product();
            let y = Tower::from_u64(size).pow(factorial);
            samples.push((x, y));
        }
    }
    assert_eq!(samples.len(), 10);
    // The pinned sample range spans an 18x factor in y, so the spread
    // requirement is relaxed to one decade here.
    let fitted = p_bound_check(&samples, 16, 10.0).unwrap();
    assert!(fitted.is_some(), "no polynomial envelope fits the closure growth");
}

#[test]
fn closure_codes_fit_the_omega2_envelope() {
    let (theory, reg) = q_theory();
    // A generous ceiling: level-2 closures over six numerals code to tens of
    // millions of bits.
    let scheme = CodingScheme::with_ceiling(&theory.signature, &reg, 1 << 27);
    let mut samples = Vec::new();
    for size in 2..=6u64 {
        let base = TermSet::new(numeral_terms(size - 1, &theory.signature).unwrap()).unwrap();
        let base_code = scheme.code_set(&base).unwrap();
        let envelope = omega(2, &base_code.to_tower()).unwrap();
        let levels = levels_for(size, &theory, &reg);
        for level in &levels {
            let code = scheme.code_set(&level.terms).unwrap();
            samples.push((code.to_tower(), envelope.clone()));
        }
    }
    assert_eq!(samples.len(), 10);
    let fitted = p_bound_check(&samples, 8, 100.0).unwrap();
    assert!(fitted.is_some(), "no polynomial envelope fits the closure codes");
}

#[test]
fn evaluation_codes_fit_the_omega1_envelope() {
    let sig = Signature::arithmetic();
    let reg = SkolemRegistry::new();
    let scheme = CodingScheme::new(&sig, &reg);
    let budget = Budget::default();
    let mut samples = Vec::new();
    for size in 1..=3u64 {
        let lambda = TermSet::new(numeral_terms(size - 1, &sig).unwrap()).unwrap();
        let table = Arc::new(atoms_over(&lambda, &sig, &budget).unwrap());
        let code_lambda = scheme.code_set(&lambda).unwrap();
        let envelope = omega(1, &code_lambda.to_tower()).unwrap();
        for seed in 0..3u64 {
            // Discrete partitions with random predicate bits are always
            // evaluations.
            let mut rng = corpus::rng_from_seed(seed);
            let mut bits = vec![false; table.num_atoms()];
            for i in 0..table.num_terms() {
                bits[table.eq_atom(i, i)] = true;
            }
            for (idx, b) in bits.iter_mut().enumerate() {
                let formula = table.atom_as_formula(idx);
                if let herbrand_core::syntax::Formula::Atom(p, _) = &formula {
                    if p != "=" {
                        *b = rand::Rng::gen_bool(&mut rng, 0.5);
                    }
                }
            }
            let p = Evaluation::new(table.clone(), bits).unwrap();
            assert!(herbrand_core::eval::is_evaluation(&p));
            let code_p = scheme.code_evaluation(&p).unwrap();
            samples.push((code_p.to_tower(), envelope.clone()));
        }
    }
    assert_eq!(samples.len(), 9);
    let fitted = p_bound_check(&samples, 8, 100.0).unwrap();
    assert!(fitted.is_some(), "no polynomial envelope fits the evaluation codes");
}

#[test]
fn omega_routes_agree_on_random_representable_inputs() {
    let mut rng = corpus::rng_from_seed(0x0207);
    for _ in 0..1000 {
        let x = Tower::from_u64(rand::Rng::gen_range(&mut rng, 0u64..1 << 24));
        for m in 0..=2u32 {
            // `omega` itself errors if the two defining routes disagree.
            omega(m, &x).unwrap();
        }
    }
}

#[test]
fn omega1_steps_the_triple_exponential() {
    for j in 0..=2u64 {
        let lhs = omega(1, &exp_iter(3, &Tower::from_u64(j))).unwrap();
        let rhs = exp_iter(3, &Tower::from_u64(j + 1));
        assert_eq!(lhs.exact(), rhs.exact());
        assert!(lhs.exact().is_some());
    }
}
