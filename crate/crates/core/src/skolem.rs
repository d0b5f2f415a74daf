//! Canonical Skolemization.
//!
//! `skolem_step` implements the four-clause recursion
//!
//! ```text
//! A^S            = A                      (A atomic or negated-atomic)
//! (φ ∘ ψ)^S      = φ^S ∘ ψ^S              (∘ in {&, |})
//! (forall x φ)^S = forall x φ^S
//! (exists x φ)^S = φ^S[f(ys)/x]           (ys the free variables of exists x φ)
//! ```
//!
//! where `f` is drawn from a registry keyed by the alpha-normalized
//! existential subformula, so the same existential (up to renaming) always
//! yields the same symbol, with the argument order fixed by first occurrence
//! of the free variables. `skolemize` further strips the remaining universal
//! quantifiers, leaving an open formula.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::normalize::{canonical_bound_rename, rnnf, RnnfFormula};
use crate::syntax::{render_formula, ExtraSymbols, Formula, Signature, Term, Theory};

/// One registered Skolem symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkolemEntry {
    /// Generated identifier `sk<N>`.
    pub name: String,
    /// Number of free variables of the source existential formula.
    pub arity: usize,
    /// The existential formula as first encountered (for display).
    pub source: Formula,
    /// Alpha-normalized key: free variables as `#1, #2, ...` in first
    /// occurrence order, bound variables as `b1, b2, ...`.
    pub key: String,
}

/// Deterministic map from existential formulas to Skolem function symbols.
#[derive(Debug, Clone, Default)]
pub struct SkolemRegistry {
    entries: Vec<SkolemEntry>,
    by_key: BTreeMap<String, usize>,
}

impl SkolemRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn entries(&self) -> &[SkolemEntry] {
        &self.entries
    }

    pub fn entry(&self, name: &str) -> Option<&SkolemEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The canonical key of an existential formula.
    pub fn canonical_key(exists: &Formula) -> String {
        debug_assert!(matches!(exists, Formula::Exists(..)));
        let free = exists.free_vars();
        let mut keyed = exists.clone();
        for (i, v) in free.iter().enumerate() {
            keyed = keyed.substitute(v, &Term::Var(format!("#{}", i + 1)));
        }
        render_formula(&canonical_bound_rename(&keyed, "b"))
    }

    /// Returns the symbol for `exists`, registering a fresh one on first use.
    pub fn lookup_or_register(&mut self, exists: &Formula) -> &SkolemEntry {
        let key = Self::canonical_key(exists);
        let idx = match self.by_key.get(&key) {
            Some(&i) => i,
            None => {
                let idx = self.entries.len();
                self.entries.push(SkolemEntry {
                    name: format!("sk{idx}"),
                    arity: exists.free_vars().len(),
                    source: exists.clone(),
                    key: key.clone(),
                });
                self.by_key.insert(key, idx);
                idx
            }
        };
        &self.entries[idx]
    }
}

impl ExtraSymbols for SkolemRegistry {
    fn extra_function_arity(&self, name: &str) -> Option<usize> {
        self.entry(name).map(|e| e.arity)
    }
}

/// An open (quantifier-free) Skolemized formula together with its free
/// variables and the Skolem symbols it mentions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkolemizedFormula {
    pub open: Formula,
    pub free_vars: Vec<String>,
    pub symbols: Vec<String>,
}

impl std::fmt::Display for SkolemizedFormula {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.open.fmt(f)
    }
}

/// The `^S` map: removes existential quantifiers, keeps universal ones.
pub fn skolem_step(f: &RnnfFormula, reg: &mut SkolemRegistry) -> RnnfFormula {
    RnnfFormula(step(f.formula(), reg))
}

fn step(f: &Formula, reg: &mut SkolemRegistry) -> Formula {
    match f {
        Formula::Atom(..) | Formula::Not(_) => f.clone(),
        Formula::And(a, b) => {
            let a2 = step(a, reg);
            let b2 = step(b, reg);
            Formula::and(a2, b2)
        }
        Formula::Or(a, b) => {
            let a2 = step(a, reg);
            let b2 = step(b, reg);
            Formula::or(a2, b2)
        }
        Formula::Forall(v, body) => Formula::forall(v, step(body, reg)),
        Formula::Exists(x, body) => {
            let free = f.free_vars();
            let entry = reg.lookup_or_register(f);
            let witness = Term::App(entry.name.clone(), free.into_iter().map(Term::Var).collect());
            let body2 = step(body, reg);
            // Rectification rules out capture: inner binders are distinct
            // from every variable of the witness term.
            body2.substitute(x, &witness)
        }
        Formula::Implies(..) => unreachable!("RNNF has no implication"),
    }
}

fn strip_universals(f: &Formula) -> Formula {
    match f {
        Formula::Forall(_, body) => strip_universals(body),
        Formula::And(a, b) => Formula::and(strip_universals(a), strip_universals(b)),
        Formula::Or(a, b) => Formula::or(strip_universals(a), strip_universals(b)),
        _ => f.clone(),
    }
}

fn used_skolem_symbols(f: &Formula, reg: &SkolemRegistry) -> Vec<String> {
    fn walk_term(t: &Term, reg: &SkolemRegistry, out: &mut Vec<String>) {
        if let Term::App(name, args) = t {
            if reg.entry(name).is_some() && !out.iter().any(|n| n == name) {
                out.push(name.clone());
            }
            for a in args {
                walk_term(a, reg, out);
            }
        }
    }
    let mut out = Vec::new();
    for atom in f.atoms() {
        if let Formula::Atom(_, args) = atom {
            for t in args {
                walk_term(t, reg, &mut out);
            }
        }
    }
    out
}

/// The Skolemized form `ψ^Sk`: normalize, apply `^S`, strip universals.
pub fn skolemize(f: &Formula, reg: &mut SkolemRegistry) -> SkolemizedFormula {
    let open = strip_universals(skolem_step(&rnnf(f), reg).formula());
    debug_assert!(open.is_quantifier_free());
    let free_vars = open.free_vars();
    let symbols = used_skolem_symbols(&open, reg);
    SkolemizedFormula { open, free_vars, symbols }
}

/// Per-axiom Skolemization sharing one registry, in axiom order.
pub fn skolemize_theory(theory: &Theory, reg: &mut SkolemRegistry) -> Vec<SkolemizedFormula> {
    theory.axioms.iter().map(|ax| skolemize(ax, reg)).collect()
}

/// Builds the induction sentence for a body `ψ(x)` with exactly one free
/// variable and Skolemizes it. With a unary `s` in the signature the
/// successor of `x` is `s(x)`; a signature without `s` must provide the
/// constant `1` and `+`, in which case it is `x + 1`.
pub fn skolemize_induction(
    phi_body: &Formula,
    sig: &Signature,
    reg: &mut SkolemRegistry,
) -> Result<SkolemizedFormula> {
    let free = phi_body.free_vars();
    if free.len() != 1 {
        return Err(Error::BadInductionBody(free.len()));
    }
    let x = &free[0];
    let zero = sig
        .constants()
        .find(|c| *c == "0")
        .map(Term::constant)
        .ok_or_else(|| Error::UnknownSymbol("0".into()))?;
    let succ = |t: Term| -> Result<Term> {
        if sig.function_arity("s") == Some(1) {
            Ok(Term::app("s", vec![t]))
        } else if sig.function_arity("1") == Some(0) && sig.function_arity("+") == Some(2) {
            Ok(Term::app("+", vec![t, Term::constant("1")]))
        } else {
            Err(Error::UnknownSymbol("s".into()))
        }
    };
    let base = phi_body.substitute(x, &zero);
    let ind_step = Formula::forall(
        x,
        Formula::implies(phi_body.clone(), phi_body.substitute(x, &succ(Term::var(x))?)),
    );
    let conclusion = Formula::forall(x, phi_body.clone());
    let ind = Formula::implies(Formula::and(base, ind_step), conclusion);
    Ok(skolemize(&ind, reg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, parse_formula_with_free, parse_theory_file, NoExtra};

    fn example_theory() -> Theory {
        parse_theory_file(
            "t",
            "signature: g/1 c/0 ; P/2 R/1 S/1\n\
             forall x. exists y. P(x, y)\n\
             forall x. (R(x) | S(g(x)))\n\
             forall x. forall y. (~P(x, y) | ~S(x))\n",
        )
        .unwrap()
    }

    fn q_theory() -> Theory {
        parse_theory_file("q", include_str!("../tests/data/q.thy")).unwrap()
    }

    #[test]
    fn tautology_skolemizes_to_fresh_constant() {
        let sig = Signature::new(vec![("c".into(), 0)], vec![("P".into(), 1)]).unwrap();
        let f = parse_formula("(forall x. P(x)) -> forall x. P(x)", &sig).unwrap();
        let mut reg = SkolemRegistry::new();

        let s = skolem_step(&rnnf(&f), &mut reg);
        assert_eq!(render_formula(s.formula()), "~P(sk0) | (forall x2. P(x2))");
        assert_eq!(reg.entries()[0].arity, 0);

        let mut reg = SkolemRegistry::new();
        let sk = skolemize(&f, &mut reg);
        assert_eq!(render_formula(&sk.open), "~P(sk0) | P(x2)");
        assert_eq!(sk.free_vars, vec!["x2".to_string()]);
    }

    #[test]
    fn atomic_formula_is_unchanged() {
        let sig = Signature::new(vec![("c".into(), 0)], vec![("P".into(), 1)]).unwrap();
        let f = parse_formula("P(c)", &sig).unwrap();
        let mut reg = SkolemRegistry::new();
        let s = skolem_step(&rnnf(&f), &mut reg);
        assert_eq!(s.formula(), &f);
        assert!(reg.is_empty());
    }

    #[test]
    fn example_theory_skolem_forms() {
        let t = example_theory();
        let mut reg = SkolemRegistry::new();
        let sk = skolemize_theory(&t, &mut reg);
        let rendered: Vec<String> = sk.iter().map(|s| render_formula(&s.open)).collect();
        assert_eq!(
            rendered,
            vec!["P(x1, sk0(x1))", "R(x1) | S(g(x1))", "~P(x1, x2) | ~S(x1)"]
        );
        assert_eq!(reg.len(), 1);
        assert_eq!(reg.entries()[0].arity, 1);
    }

    #[test]
    fn empty_theory_skolemizes_to_nothing() {
        let sig = Signature::new(vec![("c".into(), 0)], vec![]).unwrap();
        let t = Theory::new("empty", sig, vec![]).unwrap();
        let mut reg = SkolemRegistry::new();
        assert!(skolemize_theory(&t, &mut reg).is_empty());
    }

    #[test]
    fn robinson_arithmetic_skolem_forms() {
        let q = q_theory();
        let mut reg = SkolemRegistry::new();
        let sk = skolemize_theory(&q, &mut reg);
        let rendered: Vec<String> = sk.iter().map(|s| render_formula(&s.open)).collect();
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
        // sk0 is the predecessor witness, sk1 the difference witness.
        assert_eq!(reg.entries()[0].arity, 1);
        assert_eq!(reg.entries()[1].arity, 2);
    }

    #[test]
    fn induction_on_atomic_body() {
        let mut sig_items = Signature::arithmetic().functions().to_vec();
        sig_items.push(("c".into(), 0));
        let mut preds = Signature::arithmetic().predicates().to_vec();
        preds.push(("psi".into(), 1));
        let sig = Signature::new(sig_items, preds).unwrap();

        let body = parse_formula_with_free("psi(x)", &sig, &NoExtra, &["x"]).unwrap();
        let mut reg = SkolemRegistry::new();
        let sk = skolemize_induction(&body, &sig, &mut reg).unwrap();
        assert_eq!(render_formula(&sk.open), "~psi(0) | psi(sk0) & ~psi(s(sk0)) | psi(x2)");
        assert_eq!(reg.len(), 1);
        assert_eq!(reg.entries()[0].arity, 0);
    }

    #[test]
    fn induction_on_existential_body_shares_the_witness_symbol() {
        let sig = Signature::new(
            vec![("0".into(), 0), ("s".into(), 1)],
            vec![("phi".into(), 2)],
        )
        .unwrap();
        let body = parse_formula_with_free("exists y. phi(x, y)", &sig, &NoExtra, &["x"]).unwrap();
        let mut reg = SkolemRegistry::new();
        let sk = skolemize_induction(&body, &sig, &mut reg).unwrap();
        // sk0 is the counterexample constant, sk1 the shared witness function.
        assert_eq!(
            render_formula(&sk.open),
            "~phi(0, x1) | phi(sk0, sk1(sk0)) & ~phi(s(sk0), x4) | phi(x5, sk1(x5))"
        );
        assert_eq!(reg.len(), 2);
        assert_eq!(reg.entries()[0].arity, 0);
        assert_eq!(reg.entries()[1].arity, 1);
    }

    #[test]
    fn induction_rejects_wrong_free_variable_count() {
        let sig = Signature::arithmetic();
        let closed = parse_formula("0 = 0", &sig).unwrap();
        assert!(matches!(
            skolemize_induction(&closed, &sig, &mut SkolemRegistry::new()),
            Err(Error::BadInductionBody(0))
        ));
        let two = parse_formula_with_free("x = y", &sig, &NoExtra, &["x", "y"]).unwrap();
        assert!(matches!(
            skolemize_induction(&two, &sig, &mut SkolemRegistry::new()),
            Err(Error::BadInductionBody(2))
        ));
    }

    #[test]
    fn induction_on_bounded_squaring_body() {
        let sig = Signature::arithmetic();
        let body =
            parse_formula_with_free("exists y. (y <= x * x & y = x * x)", &sig, &NoExtra, &["x"]).unwrap();
        let mut reg = SkolemRegistry::new();
        let sk = skolemize_induction(&body, &sig, &mut reg).unwrap();
        assert_eq!(
            render_formula(&sk.open),
            "~(x1 <= 0 * 0) | ~(x1 = 0 * 0) | \
             sk1(sk0) <= sk0 * sk0 & sk1(sk0) = sk0 * sk0 & \
             (~(x4 <= s(sk0) * s(sk0)) | ~(x4 = s(sk0) * s(sk0))) | \
             sk1(x5) <= x5 * x5 & sk1(x5) = x5 * x5"
        );
        assert_eq!(sk.free_vars, vec!["x1".to_string(), "x4".into(), "x5".into()]);
    }

    #[test]
    fn registry_is_deterministic_and_alpha_stable() {
        let t = example_theory();
        let mut r1 = SkolemRegistry::new();
        let mut r2 = SkolemRegistry::new();
        let s1 = skolemize_theory(&t, &mut r1);
        let s2 = skolemize_theory(&t, &mut r2);
        assert_eq!(s1, s2);
        assert_eq!(r1.entries(), r2.entries());

        // Alpha-variants of the same existential map to one symbol.
        let sig = t.signature.clone();
        let a = parse_formula_with_free("exists y. P(x, y)", &sig, &NoExtra, &["x"]).unwrap();
        let b = parse_formula_with_free("exists w. P(u, w)", &sig, &NoExtra, &["u"]).unwrap();
        assert_eq!(SkolemRegistry::canonical_key(&a), SkolemRegistry::canonical_key(&b));
        let mut reg = SkolemRegistry::new();
        let name_a = reg.lookup_or_register(&a).name.clone();
        let name_b = reg.lookup_or_register(&b).name.clone();
        assert_eq!(name_a, name_b);
        assert_eq!(reg.len(), 1);
    }
}
