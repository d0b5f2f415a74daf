//! The coding report: randomized checks of the size-bound contract, the
//! iterated-growth identities, and the fitted polynomial exponents.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigUint;
use serde_json::{json, Value};

use herbrand_core::budget::Budget;
use herbrand_core::coding::{exp_iter, omega, p_bound_check, CodingScheme, Tower};
use herbrand_core::corpus;
use herbrand_core::engine::{grow_universe, numeral_terms, CodeThreshold, UniverseLevel};
use herbrand_core::error::Result;
use herbrand_core::eval::atoms_over;
use herbrand_core::instance::TermSet;
use herbrand_core::skolem::{skolemize_theory, SkolemRegistry};
use herbrand_core::syntax::Signature;

fn log2_bits(v: &BigUint) -> f64 {
    v.bits() as f64
}

/// Max over samples of `log2(code) - log2(bound)`: negative means the bound
/// holds with room.
struct RatioTrack {
    checked: usize,
    violations: usize,
    max_log2_ratio: f64,
}

impl RatioTrack {
    fn new() -> Self {
        RatioTrack { checked: 0, violations: 0, max_log2_ratio: f64::NEG_INFINITY }
    }

    fn push(&mut self, code: &BigUint, bound: &BigUint) {
        self.checked += 1;
        if code > bound {
            self.violations += 1;
        }
        self.max_log2_ratio = self.max_log2_ratio.max(log2_bits(code) - log2_bits(bound));
    }

    fn json(&self) -> Value {
        json!({
            "checked": self.checked,
            "violations": self.violations,
            "max_log2_ratio": self.max_log2_ratio,
        })
    }
}

pub fn coding_report(seed: u64, samples: usize, bit_ceiling: u64) -> Result<Value> {
    let sig = Signature::arithmetic();
    let reg = SkolemRegistry::new();
    let scheme = CodingScheme::with_ceiling(&sig, &reg, bit_ceiling);
    let mut rng = corpus::rng_from_seed(seed);
    let budget = Budget::default();

    let mut singleton = RatioTrack::new();
    let mut union = RatioTrack::new();
    let mut cardinality_ok = 0usize;
    let mut codes_seen: BTreeSet<BigUint> = BTreeSet::new();
    let mut objects = 0usize;

    for _ in 0..samples {
        let t = corpus::random_ground_term(&mut rng, &sig, 3);
        let code_t = scheme.code_term(&t)?;
        let single = scheme.code_set(&TermSet::new([t.clone()])?)?;
        let bound = BigUint::from(9u32) * (&code_t.value + BigUint::from(1u32)).pow(2);
        singleton.push(&single.value, &bound);
        objects += 1;
        codes_seen.insert(code_t.value);

        let mut a = TermSet::new([])?;
        let mut b = TermSet::new([])?;
        for _ in 0..3 {
            a.insert(corpus::random_ground_term(&mut rng, &sig, 2))?;
            b.insert(corpus::random_ground_term(&mut rng, &sig, 2))?;
        }
        let ca = scheme.code_set(&a)?;
        let cb = scheme.code_set(&b)?;
        let cu = scheme.code_set(&a.union(&b))?;
        union.push(&cu.value, &(BigUint::from(64u32) * &ca.value * &cb.value));

        let big = a.union(&b);
        let code_big = scheme.code_set(&big)?;
        if BigUint::from(big.len()) <= herbrand_core::coding::ceil_log2(&code_big.value) {
            cardinality_ok += 1;
        }
    }

    // Distinct random sentences must get distinct codes.
    let mut formula_codes = BTreeSet::new();
    let mut formulas = BTreeSet::new();
    for _ in 0..samples {
        let f = corpus::random_sentence(&mut rng, &sig, 3);
        if formulas.insert(f.clone()) {
            formula_codes.insert(scheme.code_formula(&f)?.value);
        }
    }

    // Iterated-growth identities.
    let mut omega_steps = Vec::new();
    for j in 0..=2u64 {
        let lhs = omega(1, &exp_iter(3, &Tower::from_u64(j)))?;
        let rhs = exp_iter(3, &Tower::from_u64(j + 1));
        omega_steps.push(lhs.exact() == rhs.exact() && lhs.exact().is_some());
    }
    let mut omega_agree = 0usize;
    for _ in 0..samples {
        let x = Tower::from_u64(rand::Rng::gen_range(&mut rng, 0u64..1 << 20));
        if omega(1, &x).is_ok() && omega(2, &x).is_ok() {
            omega_agree += 1;
        }
    }

    // Assignment counts: 2 * k^2 atoms over the arithmetic language, so
    // exp(2 k^2) total assignments, counted by enumeration for k <= 3.
    let mut counts = Vec::new();
    for k in 1..=3usize {
        let lambda = TermSet::new(numeral_terms(k as u64 - 1, &sig)?)?;
        let table = Arc::new(atoms_over(&lambda, &sig, &budget)?);
        let atoms = table.num_atoms();
        let mut enumerated: u64 = 0;
        for mask in 0u64..(1u64 << atoms) {
            std::hint::black_box(mask);
            enumerated += 1;
        }
        counts.push(json!({
            "set_size": k,
            "atoms": atoms,
            "enumerated": enumerated,
            "expected": 1u64 << (2 * k * k),
            "matches": atoms == 2 * k * k && enumerated == 1u64 << (2 * k * k),
        }));
    }

    // Fitted polynomial exponents for the closure growth.
    let q = herbrand_core::syntax::parse_theory_file(
        "q",
        &(sig.render()
            + "\nforall x. ~(s(x) = 0)\nforall x. forall y. (s(x) = s(y) -> x = y)\n\
               forall x. (~(x = 0) -> exists y. x = s(y))\n\
               forall x. forall y. ((x <= y -> exists z. x + z = y) & ((exists z. x + z = y) -> x <= y))\n\
               forall x. x + 0 = x\nforall x. forall y. x + s(y) = s(x + y)\n\
               forall x. x * 0 = 0\nforall x. forall y. x * s(y) = x * y + x\n"),
    )?;
    let mut qreg = SkolemRegistry::new();
    let _ = skolemize_theory(&q, &mut qreg);
    let qscheme = CodingScheme::with_ceiling(&q.signature, &qreg, bit_ceiling.max(1 << 27));
    let mut card_samples = Vec::new();
    let mut code_samples = Vec::new();
    for size in 2..=6u64 {
        let base = TermSet::new(numeral_terms(size - 1, &q.signature)?)?;
        let base_code = qscheme.code_set(&base)?;
        let envelope = omega(2, &base_code.to_tower())?;
        let mut level = UniverseLevel::new(base, CodeThreshold::AdmitAll, qreg.clone());
        for n in 1..=2u64 {
            level = grow_universe(&level, &q.signature, &qscheme, &budget)?;
            let factorial: u64 = (1..=n).product();
            card_samples.push((
                Tower::from_u64(level.terms.len() as u64),
                Tower::from_u64(size).pow(factorial),
            ));
            code_samples.push((qscheme.code_set(&level.terms)?.to_tower(), envelope.clone()));
        }
    }
    let card_fit = p_bound_check(&card_samples, 16, 10.0)?;
    let code_fit = p_bound_check(&code_samples, 8, 100.0)?;

    Ok(json!({
        "seed": seed,
        "samples": samples,
        "singleton_bound": singleton.json(),
        "union_bound": union.json(),
        "cardinality_bound": { "checked": samples, "holds": cardinality_ok },
        "injectivity": {
            "distinct_objects": formulas.len() + objects,
            "distinct_codes": formula_codes.len() + codes_seen.len(),
        },
        "omega1_triple_exponential_steps": omega_steps,
        "omega_routes_agree": { "checked": samples, "agreeing": omega_agree },
        "assignment_counts": counts,
        "fitted_exponents": {
            "closure_cardinality_vs_factorial": card_fit,
            "closure_code_vs_omega2": code_fit,
        },
    }))
}

/// Human-readable rendering of the JSON report.
pub fn render_text(v: &Value) -> String {
    serde_json::to_string_pretty(v).unwrap_or_default()
}
