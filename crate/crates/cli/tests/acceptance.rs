//! Acceptance suite: one test per shipped criterion, each printing a
//! pass/fail line and holding the stated time budget. Run with
//! `cargo test -p herbrand-cli --test acceptance -- --nocapture`.


use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::BigUint;

use herbrand_cli::fixtures::{load_manifest, run_all, run_fixture};
use herbrand_cli::session::Session;
use herbrand_core::budget::Budget;
use herbrand_core::coding::{ceil_log2, exp_iter, omega, p_bound_check, CodingScheme, Tower};
use herbrand_core::corpus;
use herbrand_core::engine::{
    build_quotient_model, gamma_set, grow_universe, numeral_terms, sigma_set, CodeThreshold,
    UniverseLevel,
};
use herbrand_core::eval::{
    atoms_over, find_evaluation, force_check, is_evaluation, is_t_evaluation, search_evaluation,
    Evaluation, SearchMode,
};
use herbrand_core::instance::TermSet;
use herbrand_core::skolem::{skolemize_induction, skolemize_theory, SkolemRegistry};
use herbrand_core::syntax::{
    parse_formula, parse_formula_with_free, parse_theory_file, render_formula, Formula, NoExtra,
    Signature, Term,
};

fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn within(start: Instant, limit: Duration, what: &str) {
    let elapsed = start.elapsed();
    assert!(elapsed <= limit, "{what}: took {elapsed:?}, budget {limit:?}");
}

fn report(criterion: &str, start: Instant) {
    println!("acceptance {criterion}: PASS in {:?}", start.elapsed());
}

fn run_named(dir: &Path, name: &str, budget: &Budget) -> herbrand_cli::fixtures::FixtureReport {
    let manifest = load_manifest(dir).unwrap();
    let fixture = manifest.fixtures.iter().find(|f| f.name == name).unwrap();
    run_fixture(dir, fixture, budget)
}

/// Robinson arithmetic extended with probe constants, as inline text.
fn q_text_with_constants(constants: &[&str]) -> String {
    let consts: String = constants.iter().map(|c| format!(" {c}/0")).collect();
    format!(
        "signature: 0/0{consts} s/1 +/2 */2 ; <=/2\n\
         forall x. ~(s(x) = 0)\n\
         forall x. forall y. (s(x) = s(y) -> x = y)\n\
         forall x. (~(x = 0) -> exists y. x = s(y))\n\
         forall x. forall y. ((x <= y -> exists z. x + z = y) & ((exists z. x + z = y) -> x <= y))\n\
         forall x. x + 0 = x\n\
         forall x. forall y. x + s(y) = s(x + y)\n\
         forall x. x * 0 = 0\n\
         forall x. forall y. x * s(y) = x * y + x\n"
    )
}

#[test]
fn criterion_01_witness_evaluation_replay() {
    let start = Instant::now();
    let budget = Budget::default();
    let dir = fixture_dir();

    let accepted = run_named(&dir, "witness-evaluation-accepted", &budget);
    assert!(accepted.passed, "{accepted:?}");
    assert_eq!(accepted.got, "VALID");

    let rejected = run_named(&dir, "extended-evaluation-rejected", &budget);
    assert!(rejected.passed, "{rejected:?}");
    assert_eq!(rejected.got, "INVALID");
    // The violated instance is named exactly.
    assert_eq!(rejected.detail.as_deref(), Some("~P(c, sk0(c)) | ~S(c)"));

    within(start, Duration::from_secs(1), "criterion 1");
    report("1 (evaluation replay)", start);
}

#[test]
fn criterion_02_refutation_replay_with_oracle() {
    let start = Instant::now();
    let budget = Budget::default();
    let dir = fixture_dir();
    let session = Session::load(
        &dir.join("theories/t.thy"),
        Some("forall x. R(x)"),
        budget,
    )
    .unwrap();
    let tsk = session.refutation_task();

    let refuting = session.load_lambda(&dir.join("lambda/refuting.lam")).unwrap();
    let admitting = session.load_lambda(&dir.join("lambda/admitting.lam")).unwrap();
    for (lambda, expect_some) in [(&refuting, false), (&admitting, true)] {
        let table = atoms_over(lambda, &session.theory.signature, &budget).unwrap();
        assert!(table.num_atoms() <= 24);
        for mode in [SearchMode::Sat, SearchMode::Brute] {
            let found =
                find_evaluation(&tsk, lambda, &session.theory.signature, mode, &budget).unwrap();
            assert_eq!(found.is_some(), expect_some, "{mode:?}");
        }
    }
    within(start, Duration::from_secs(5), "criterion 2");
    report("2 (refutation replay, oracle-confirmed)", start);
}

#[test]
fn criterion_03_difference_witness_forcing() {
    let start = Instant::now();
    let budget = Budget::default();
    let dir = fixture_dir();

    let sigma_start = Instant::now();
    let sigma = run_named(&dir, "le-zero-decision-forced-at-zero", &budget);
    assert!(sigma.passed && sigma.got == "FORCED", "{sigma:?}");
    within(sigma_start, Duration::from_secs(30), "criterion 3, first goal");

    let gamma_start = Instant::now();
    let gamma = run_named(&dir, "successor-split-forced-at-zero", &budget);
    assert!(gamma.passed && gamma.got == "FORCED", "{gamma:?}");
    within(gamma_start, Duration::from_secs(30), "criterion 3, second goal");
    report("3 (difference-witness forcing)", start);
}

#[test]
fn criterion_04_squaring_witness_forcing() {
    let start = Instant::now();
    let budget = Budget::default();
    let fixture = run_named(&fixture_dir(), "squaring-witness-forced", &budget);
    assert!(fixture.passed && fixture.got == "FORCED", "{fixture:?}");
    within(start, Duration::from_secs(60), "criterion 4");
    report("4 (squaring-witness forcing)", start);
}

#[test]
fn criterion_05_skolemization_goldens() {
    let start = Instant::now();

    // The tautology with a unary predicate.
    let sig = Signature::new(vec![("c".into(), 0)], vec![("P".into(), 1)]).unwrap();
    let f = parse_formula("(forall x. P(x)) -> forall x. P(x)", &sig).unwrap();
    let mut reg = SkolemRegistry::new();
    let sk = herbrand_core::skolem::skolemize(&f, &mut reg);
    assert_eq!(render_formula(&sk.open), "~P(sk0) | P(x2)");

    // The eight arithmetic axioms, symbol for symbol.
    let q = parse_theory_file("q", &q_text_with_constants(&[])).unwrap();
    let mut reg = SkolemRegistry::new();
    let tsk = skolemize_theory(&q, &mut reg);
    let rendered: Vec<String> = tsk.iter().map(|s| render_formula(&s.open)).collect();
    assert_eq!(
        rendered,
        vec![
            "~(s(x1) = 0)",
            "~(s(x1) = s(x2)) | x1 = x2",
            "x1 = 0 | x1 = s(sk0(x1))",
            "(~(x1 <= x2) | x1 + sk1(x1, x2) = x2) & (~(x1 + x4 = x2) | x1 <= x2)",
            "x1 + 0 = x1",
            "x1 + s(x2) = s(x1 + x2)",
            "x1 * 0 = 0",
            "x1 * s(x2) = x1 * x2 + x1",
        ]
    );
    // Provenance display: the registry names both witnesses with their
    // source formulas.
    assert_eq!(reg.entries().len(), 2);
    assert_eq!(render_formula(&reg.entries()[0].source), "exists x2. x1 = s(x2)");
    assert_eq!(render_formula(&reg.entries()[1].source), "exists x3. x1 + x3 = x2");

    // Induction on the bounded squaring body: the three-disjunct display.
    let sig = Signature::arithmetic();
    let body =
        parse_formula_with_free("exists y. (y <= x * x & y = x * x)", &sig, &NoExtra, &["x"]).unwrap();
    let mut reg = SkolemRegistry::new();
    let ind = skolemize_induction(&body, &sig, &mut reg).unwrap();
    assert_eq!(
        render_formula(&ind.open),
        "~(x1 <= 0 * 0) | ~(x1 = 0 * 0) | \
         sk1(sk0) <= sk0 * sk0 & sk1(sk0) = sk0 * sk0 & \
         (~(x4 <= s(sk0) * s(sk0)) | ~(x4 = s(sk0) * s(sk0))) | \
         sk1(x5) <= x5 * x5 & sk1(x5) = x5 * x5"
    );

    // Induction on an atomic body keeps the plain three-disjunct shape.
    let mut preds = Signature::arithmetic().predicates().to_vec();
    preds.push(("psi".into(), 1));
    let psig = Signature::new(Signature::arithmetic().functions().to_vec(), preds).unwrap();
    let body = parse_formula_with_free("psi(x)", &psig, &NoExtra, &["x"]).unwrap();
    let mut reg = SkolemRegistry::new();
    let ind = skolemize_induction(&body, &psig, &mut reg).unwrap();
    assert_eq!(render_formula(&ind.open), "~psi(0) | psi(sk0) & ~psi(s(sk0)) | psi(x2)");

    report("5 (Skolemization goldens)", start);
}

#[test]
fn criterion_06_coding_contract() {
    let start = Instant::now();
    let sig = Signature::arithmetic();
    let scheme = CodingScheme::new(&sig, &SkolemRegistry::new());
    let mut rng = corpus::rng_from_seed(0xc0de);
    let budget = Budget::default();

    let mut checked = 0usize;
    let mut objects = std::collections::BTreeSet::new();
    let mut codes = std::collections::BTreeSet::new();
    for _ in 0..1000 {
        let t = corpus::random_ground_term(&mut rng, &sig, 3);
        let code_t = scheme.code_term(&t).unwrap().value;
        objects.insert(t.clone());
        codes.insert(code_t.clone());
        let single = scheme.code_set(&TermSet::new([t]).unwrap()).unwrap().value;
        let bound = BigUint::from(9u32) * (&code_t + BigUint::from(1u32)).pow(2);
        assert!(single <= bound, "singleton bound violated");

        let mut a = TermSet::new([]).unwrap();
        let mut b = TermSet::new([]).unwrap();
        for _ in 0..3 {
            a.insert(corpus::random_ground_term(&mut rng, &sig, 2)).unwrap();
            b.insert(corpus::random_ground_term(&mut rng, &sig, 2)).unwrap();
        }
        let ca = scheme.code_set(&a).unwrap().value;
        let cb = scheme.code_set(&b).unwrap().value;
        let u = a.union(&b);
        let cu = scheme.code_set(&u).unwrap().value;
        assert!(cu <= BigUint::from(64u32) * &ca * &cb, "union bound violated");
        assert!(BigUint::from(u.len()) <= ceil_log2(&cu), "cardinality bound violated");
        checked += 1;
    }
    assert!(checked >= 1000);
    // Distinct objects get distinct codes.
    assert_eq!(objects.len(), codes.len());

    // Assignment-count identity: 2k^2 atoms, exp(2k^2) assignments, counted
    // by enumeration.
    for k in 1..=3usize {
        let lambda = TermSet::new(numeral_terms(k as u64 - 1, &sig).unwrap()).unwrap();
        let table = Arc::new(atoms_over(&lambda, &sig, &budget).unwrap());
        assert_eq!(table.num_atoms(), 2 * k * k);
        let mut count: u64 = 0;
        for mask in 0u64..(1u64 << table.num_atoms()) {
            std::hint::black_box(mask);
            count += 1;
        }
        assert_eq!(count, 1u64 << (2 * k * k));
    }
    report("6 (coding contract, 1000 objects)", start);
}

#[test]
fn criterion_07_omega_identities() {
    let start = Instant::now();
    for j in 0..=2u64 {
        let lhs = omega(1, &exp_iter(3, &Tower::from_u64(j))).unwrap();
        let rhs = exp_iter(3, &Tower::from_u64(j + 1));
        assert!(lhs.exact().is_some());
        assert_eq!(lhs.exact(), rhs.exact(), "triple-exponential step at {j}");
    }
    let mut rng = corpus::rng_from_seed(0x03e8);
    for _ in 0..1000 {
        let x = Tower::from_u64(rand::Rng::gen_range(&mut rng, 0u64..1 << 22));
        for m in 0..=2u32 {
            // `omega` errors if its two defining routes disagree.
            omega(m, &x).unwrap();
        }
    }
    report("7 (iterated-growth identities)", start);
}

#[test]
fn criterion_08_growth_bounds() {
    let start = Instant::now();
    let budget = Budget::default();
    let q = parse_theory_file("q", &q_text_with_constants(&[])).unwrap();
    let mut reg = SkolemRegistry::new();
    let _ = skolemize_theory(&q, &mut reg);
    let scheme = CodingScheme::with_ceiling(&q.signature, &reg, 1 << 27);

    let mut card_samples = Vec::new();
    let mut code_samples = Vec::new();
    for size in 2..=6u64 {
        let base = TermSet::new(numeral_terms(size - 1, &q.signature).unwrap()).unwrap();
        let base_code = scheme.code_set(&base).unwrap();
        let envelope = omega(2, &base_code.to_tower()).unwrap();
        let mut level = UniverseLevel::new(base, CodeThreshold::AdmitAll, reg.clone());
        for n in 1..=2u64 {
            level = grow_universe(&level, &q.signature, &scheme, &budget).unwrap();
            let factorial: u64 = (1..=n).product();
            card_samples
                .push((Tower::from_u64(level.terms.len() as u64), Tower::from_u64(size).pow(factorial)));
            code_samples.push((scheme.code_set(&level.terms).unwrap().to_tower(), envelope.clone()));
        }
    }
    // The pinned base sizes span an 18x factor in the cardinality envelope,
    // so that check runs with a one-decade spread floor.
    let card_fit = p_bound_check(&card_samples, 16, 10.0).unwrap();
    assert!(card_fit.is_some(), "cardinality envelope missing: regression");
    let code_fit = p_bound_check(&code_samples, 8, 100.0).unwrap();
    assert!(code_fit.is_some(), "code envelope missing: regression");

    within(start, Duration::from_secs(120), "criterion 8");
    report("8 (growth bounds)", start);
}

#[test]
fn criterion_09_oracle_equivalence() {
    let start = Instant::now();
    let budget = Budget::default();
    let mut disagreements = 0;
    for seed in corpus::seeds(0xacce97, 200) {
        let mut rng = corpus::rng_from_seed(seed);
        let (theory, lambda) = corpus::random_oracle_pair(&mut rng);
        let mut reg = SkolemRegistry::new();
        let tsk = skolemize_theory(&theory, &mut reg);
        let table = Arc::new(atoms_over(&lambda, &theory.signature, &budget).unwrap());
        assert!(table.num_atoms() <= 24);
        let sat = search_evaluation(&tsk, &table, &[], SearchMode::Sat, &budget).unwrap();
        let brute = search_evaluation(&tsk, &table, &[], SearchMode::Brute, &budget).unwrap();
        if sat.found() != brute.found() {
            disagreements += 1;
            continue;
        }
        for outcome in [sat, brute] {
            if let herbrand_core::eval::SearchOutcome::Found(p) = outcome {
                assert!(is_evaluation(&p), "seed {seed}");
                assert!(is_t_evaluation(&p, &tsk, &budget).unwrap(), "seed {seed}");
            }
        }
    }
    assert_eq!(disagreements, 0);
    report("9 (oracle equivalence, 200 pairs)", start);
}

fn numeral(n: u64, sig: &Signature) -> Term {
    numeral_terms(n, sig).unwrap().pop().unwrap()
}

#[test]
fn criterion_10_quotient_transfer_and_numeral_forcing() {
    let start = Instant::now();
    let budget = Budget::default();
    let dir = fixture_dir();

    // Atomic transfer, exhaustively, for the evaluations the fixtures touch.
    let session = Session::load(&dir.join("theories/t.thy"), None, budget).unwrap();
    let lambda = session.load_lambda(&dir.join("lambda/t_cgf.lam")).unwrap();
    let atoms = session.load_true_atoms(&dir.join("evals/witness.eval")).unwrap();
    let table = Arc::new(atoms_over(&lambda, &session.theory.signature, &budget).unwrap());
    let mut evaluations =
        vec![Evaluation::from_true_atoms(table, &atoms).unwrap()];
    let goal_session =
        Session::load(&dir.join("theories/t.thy"), Some("forall x. R(x)"), budget).unwrap();
    let admitting = goal_session.load_lambda(&dir.join("lambda/admitting.lam")).unwrap();
    evaluations.push(
        find_evaluation(
            &goal_session.refutation_task(),
            &admitting,
            &goal_session.theory.signature,
            SearchMode::Sat,
            &budget,
        )
        .unwrap()
        .unwrap(),
    );
    for p in &evaluations {
        let model = build_quotient_model(p).unwrap();
        for idx in 0..p.table.num_atoms() {
            let atom = p.table.atom_as_formula(idx);
            let Formula::Atom(pred, args) = &atom else { unreachable!() };
            let classes: Vec<usize> =
                args.iter().map(|a| model.class_of_term(a).unwrap()).collect();
            let holds = if pred == "=" {
                classes[0] == classes[1]
            } else {
                model.relations.contains(&(pred.clone(), classes))
            };
            assert_eq!(holds, p.bits[idx], "transfer fails on {}", p.table.render_atom(idx));
        }
    }

    // Numeral decision forcing: over the completed sets, any admissible
    // evaluation bounding d by the i-th numeral equates it with one of them.
    let (theory, reg, tsk) = {
        let theory = parse_theory_file("q-d", &q_text_with_constants(&["d"])).unwrap();
        let mut reg = SkolemRegistry::new();
        let tsk = skolemize_theory(&theory, &mut reg);
        (theory, reg, tsk)
    };
    let sig = &theory.signature;
    let d = Term::constant("d");
    for i in 0..=3u64 {
        let mut terms: Vec<Term> = sigma_set(&d, &reg).unwrap().iter().cloned().collect();
        for j in 0..i {
            terms.extend(gamma_set(&d, &numeral(j, sig), &reg).unwrap().iter().cloned());
        }
        terms.extend(numeral_terms(i, sig).unwrap());
        let lambda = TermSet::new(terms).unwrap();
        let mut goal = Formula::not(Formula::Atom("<=".into(), vec![d.clone(), numeral(i, sig)]));
        for j in 0..=i {
            goal = Formula::or(goal, Formula::eq(d.clone(), numeral(j, sig)));
        }
        let outcome = force_check(&tsk, &lambda, sig, &goal, &budget).unwrap();
        assert!(outcome.is_forced(), "numeral decision not forced at {i}");
    }

    // Addition forcing: numeral(i) + numeral(j) = numeral(i + j).
    let plus = |a: &Term, b: &Term| Term::app("+", vec![a.clone(), b.clone()]);
    let times = |a: &Term, b: &Term| Term::app("*", vec![a.clone(), b.clone()]);
    let succ = |a: &Term| Term::app("s", vec![a.clone()]);
    let add_chain = |a: u64, b: u64| -> Vec<Term> {
        let mut out = Vec::new();
        for m in 0..=b {
            out.push(plus(&numeral(a, sig), &numeral(m, sig)));
        }
        for m in 0..b {
            out.push(succ(&plus(&numeral(a, sig), &numeral(m, sig))));
        }
        out
    };
    for i in 0..=3u64 {
        for j in 0..=(3 - i) {
            let mut terms = numeral_terms(3, sig).unwrap();
            terms.extend(add_chain(i, j));
            let lambda = TermSet::new(terms).unwrap();
            let goal =
                Formula::eq(plus(&numeral(i, sig), &numeral(j, sig)), numeral(i + j, sig));
            assert!(
                force_check(&tsk, &lambda, sig, &goal, &budget).unwrap().is_forced(),
                "addition not forced at {i} + {j}"
            );
        }
    }

    // Multiplication forcing: numeral(i) * numeral(j) = numeral(i * j).
    for i in 0..=3u64 {
        for j in 0..=3u64 {
            if i * j > 3 {
                continue;
            }
            let mut terms = numeral_terms(3, sig).unwrap();
            for k in 0..=j {
                terms.push(times(&numeral(i, sig), &numeral(k, sig)));
            }
            for k in 0..j {
                terms.push(plus(&times(&numeral(i, sig), &numeral(k, sig)), &numeral(i, sig)));
                terms.extend(add_chain(i * k, i));
            }
            let lambda = TermSet::new(terms).unwrap();
            let goal =
                Formula::eq(times(&numeral(i, sig), &numeral(j, sig)), numeral(i * j, sig));
            assert!(
                force_check(&tsk, &lambda, sig, &goal, &budget).unwrap().is_forced(),
                "multiplication not forced at {i} * {j}"
            );
        }
    }

    within(start, Duration::from_secs(300), "criterion 10");
    report("10 (quotient transfer and numeral forcing)", start);
}

#[test]
fn fixture_corpus_is_green_and_deterministic() {
    let budget = Budget::default();
    let dir = fixture_dir();
    let manifest = load_manifest(&dir).unwrap();
    let first = run_all(&dir, &manifest, &budget, None);
    assert!(first.iter().all(|r| r.passed), "{first:?}");
    let second = run_all(&dir, &manifest, &budget, None);
    let strip = |rs: &[herbrand_cli::fixtures::FixtureReport]| {
        rs.iter().map(|r| (r.name.clone(), r.got.clone(), r.detail.clone())).collect::<Vec<_>>()
    };
    assert_eq!(strip(&first), strip(&second));
}
