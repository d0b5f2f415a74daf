//! The provability driver: term-universe growth with code-filtered Skolem
//! admission, refutation search over candidate term sets with replayable
//! certificates, quotient term models, the numeral/`w`/`z` term families, and
//! the two consistency checks.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;

use crate::budget::Budget;
use crate::coding::{ceil_log2, omega, CodingScheme, Tower};
use crate::error::{Error, Result};
use crate::eval::{
    atoms_over, eq_classes, search_evaluation, AtomTable, EqClasses, Evaluation, SearchMode,
    SearchOutcome,
};
use crate::instance::TermSet;
use crate::sat::{check_proof, ClauseSet, ResolutionStep};
use crate::skolem::{skolemize, skolemize_induction, skolemize_theory, SkolemRegistry, SkolemizedFormula};
use crate::syntax::{
    parse_formula, parse_signature, parse_term, render_formula, Formula, Signature, Term, Theory,
};

/// Which Skolem symbols a closure step admits: those whose source-formula
/// code is at most the current level (the literal definition), at most a
/// fixed value, or all registered symbols (the desk-scale stand-in for a
/// level beyond every code in play).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CodeThreshold {
    Level,
    Value(BigUint),
    AdmitAll,
}

/// A finite stage of the closure of a base term set under signature and
/// admitted Skolem functions.
#[derive(Debug, Clone)]
pub struct UniverseLevel {
    pub base: TermSet,
    pub level: u64,
    pub threshold: CodeThreshold,
    /// The Skolem symbols in play, frozen when the level chain starts.
    pub registry: SkolemRegistry,
    pub terms: TermSet,
}

impl UniverseLevel {
    pub fn new(base: TermSet, threshold: CodeThreshold, registry: SkolemRegistry) -> UniverseLevel {
        UniverseLevel { terms: base.clone(), base, level: 0, threshold, registry }
    }
}

/// One closure step: every signature function applied to tuples of current
/// terms, plus every admitted Skolem function.
pub fn grow_universe(
    u: &UniverseLevel,
    sig: &Signature,
    scheme: &CodingScheme,
    budget: &Budget,
) -> Result<UniverseLevel> {
    let current: Vec<Term> = u.terms.iter().cloned().collect();
    let mut next = u.terms.clone();

    let apply_all = |name: &str, arity: usize, next: &mut TermSet| -> Result<()> {
        let mut idx = vec![0usize; arity];
        if current.is_empty() && arity > 0 {
            return Ok(());
        }
        loop {
            let args: Vec<Term> = idx.iter().map(|&i| current[i].clone()).collect();
            next.insert(Term::App(name.to_string(), args))?;
            budget.check("terms", next.len() as u64)?;
            if arity == 0 {
                break;
            }
            let mut pos = arity;
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < current.len() {
                    break;
                }
                idx[pos] = 0;
            }
            if idx.iter().all(|&i| i == 0) {
                break;
            }
        }
        Ok(())
    };

    for (name, arity) in sig.functions() {
        apply_all(name, *arity, &mut next)?;
    }
    for entry in u.registry.entries() {
        let admitted = match &u.threshold {
            CodeThreshold::AdmitAll => true,
            CodeThreshold::Level => {
                scheme.code_formula(&entry.source)?.value <= BigUint::from(u.level)
            }
            CodeThreshold::Value(v) => scheme.code_formula(&entry.source)?.value <= *v,
        };
        if admitted {
            apply_all(&entry.name, entry.arity, &mut next)?;
        }
    }

    Ok(UniverseLevel {
        base: u.base.clone(),
        level: u.level + 1,
        threshold: u.threshold.clone(),
        registry: u.registry.clone(),
        terms: next,
    })
}

/// How the unsatisfiability of a certificate's clause set is witnessed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Resolution(Vec<ResolutionStep>),
    /// Exhaustive enumeration: the number of assignments checked.
    Exhaustion(u64),
}

/// A self-contained, replayable record that a theory (plus negated goal) has
/// no evaluation on a term set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofCertificate {
    pub theory_name: String,
    pub signature_line: String,
    pub axioms: Vec<String>,
    pub goal: Option<String>,
    pub lambda: Vec<String>,
    pub num_atoms: usize,
    pub clauses: Vec<Vec<i64>>,
    pub witness: Witness,
}

impl ProofCertificate {
    /// Deterministic text form, suitable for diffing and independent replay.
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str("herbrand-certificate v1\n");
        out.push_str(&format!("theory {}\n", self.theory_name));
        out.push_str(&self.signature_line);
        out.push('\n');
        out.push_str(&format!("axioms {}\n", self.axioms.len()));
        for ax in &self.axioms {
            out.push_str(ax);
            out.push('\n');
        }
        match &self.goal {
            Some(g) => out.push_str(&format!("goal {g}\n")),
            None => out.push_str("goal -\n"),
        }
        out.push_str(&format!("lambda {}\n", self.lambda.len()));
        for t in &self.lambda {
            out.push_str(t);
            out.push('\n');
        }
        out.push_str(&format!("atoms {}\n", self.num_atoms));
        out.push_str(&format!("clauses {}\n", self.clauses.len()));
        for clause in &self.clauses {
            let codes: Vec<String> = clause.iter().map(|c| c.to_string()).collect();
            out.push_str(&codes.join(" "));
            out.push('\n');
        }
        match &self.witness {
            Witness::Resolution(steps) => {
                out.push_str(&format!("steps {}\n", steps.len()));
                for s in steps {
                    out.push_str(&format!("{} {} {}\n", s.left, s.right, s.pivot));
                }
            }
            Witness::Exhaustion(checked) => {
                out.push_str(&format!("exhausted {checked}\n"));
            }
        }
        out.push_str("end\n");
        out
    }

    pub fn parse(text: &str) -> Result<ProofCertificate> {
        let bad = |msg: &str| Error::BadCertificate(msg.to_string());
        let lines: Vec<&str> = text.lines().collect();
        let mut pos = 0usize;
        let next = |pos: &mut usize| -> Result<&str> {
            let line = lines.get(*pos).copied().ok_or_else(|| bad("truncated certificate"))?;
            *pos += 1;
            Ok(line)
        };
        let expect = |pos: &mut usize, prefix: &str| -> Result<String> {
            let line = lines.get(*pos).copied().ok_or_else(|| bad("truncated certificate"))?;
            *pos += 1;
            line.strip_prefix(prefix)
                .map(|r| r.trim().to_string())
                .ok_or_else(|| Error::BadCertificate(format!("expected `{prefix}...`, got `{line}`")))
        };
        expect(&mut pos, "herbrand-certificate v1")?;
        let theory_name = expect(&mut pos, "theory ")?;
        let signature_line = {
            let line = next(&mut pos)?;
            if !line.starts_with("signature:") {
                return Err(bad("missing signature line"));
            }
            line.to_string()
        };
        let n_axioms: usize = expect(&mut pos, "axioms ")?.parse().map_err(|_| bad("bad axiom count"))?;
        let mut axioms = Vec::with_capacity(n_axioms);
        for _ in 0..n_axioms {
            axioms.push(next(&mut pos)?.to_string());
        }
        let goal_line = expect(&mut pos, "goal ")?;
        let goal = if goal_line == "-" { None } else { Some(goal_line) };
        let n_lambda: usize = expect(&mut pos, "lambda ")?.parse().map_err(|_| bad("bad lambda count"))?;
        let mut lambda = Vec::with_capacity(n_lambda);
        for _ in 0..n_lambda {
            lambda.push(next(&mut pos)?.to_string());
        }
        let num_atoms: usize = expect(&mut pos, "atoms ")?.parse().map_err(|_| bad("bad atom count"))?;
        let n_clauses: usize =
            expect(&mut pos, "clauses ")?.parse().map_err(|_| bad("bad clause count"))?;
        let mut clauses = Vec::with_capacity(n_clauses);
        for _ in 0..n_clauses {
            let line = next(&mut pos)?;
            let lits: std::result::Result<Vec<i64>, _> =
                line.split_whitespace().map(str::parse).collect();
            clauses.push(lits.map_err(|_| bad("bad clause literal"))?);
        }
        let tail = next(&mut pos)?;
        let witness = if let Some(rest) = tail.strip_prefix("steps ") {
            let n_steps: usize = rest.trim().parse().map_err(|_| bad("bad step count"))?;
            let mut steps = Vec::with_capacity(n_steps);
            for _ in 0..n_steps {
                let line = next(&mut pos)?;
                let parts: Vec<&str> = line.split_whitespace().collect();
                if parts.len() != 3 {
                    return Err(bad("malformed step"));
                }
                steps.push(ResolutionStep {
                    left: parts[0].parse().map_err(|_| bad("bad step field"))?,
                    right: parts[1].parse().map_err(|_| bad("bad step field"))?,
                    pivot: parts[2].parse().map_err(|_| bad("bad step field"))?,
                });
            }
            Witness::Resolution(steps)
        } else if let Some(rest) = tail.strip_prefix("exhausted ") {
            Witness::Exhaustion(rest.trim().parse().map_err(|_| bad("bad exhaustion count"))?)
        } else {
            return Err(bad("unknown witness kind"));
        };
        if next(&mut pos)? != "end" {
            return Err(bad("missing `end`"));
        }
        Ok(ProofCertificate {
            theory_name,
            signature_line,
            axioms,
            goal,
            lambda,
            num_atoms,
            clauses,
            witness,
        })
    }
}

fn clause_codes(cs: &ClauseSet) -> Vec<Vec<i64>> {
    cs.clauses.iter().map(|c| c.iter().map(|l| l.code()).collect()).collect()
}

/// Rebuilds the refutation task of a certificate: theory, negated goal,
/// term set and clause encoding, all from the certificate's own text.
fn rederive(cert: &ProofCertificate, budget: &Budget) -> Result<(ClauseSet, Arc<AtomTable>)> {
    let sig = parse_signature(&cert.signature_line)?;
    let mut axioms = Vec::with_capacity(cert.axioms.len());
    for ax in &cert.axioms {
        axioms.push(parse_formula(ax, &sig)?);
    }
    let theory = Theory::new(&cert.theory_name, sig.clone(), axioms)?;
    let mut reg = SkolemRegistry::new();
    let mut tsk = skolemize_theory(&theory, &mut reg);
    if let Some(goal_text) = &cert.goal {
        let goal = parse_formula(goal_text, &sig)?;
        tsk.push(skolemize(&Formula::not(goal), &mut reg));
    }
    let mut terms = Vec::with_capacity(cert.lambda.len());
    for t in &cert.lambda {
        terms.push(parse_term(t, &sig, &reg)?);
    }
    let lambda = TermSet::new(terms)?;
    let table = Arc::new(atoms_over(&lambda, &sig, budget)?);
    let (cs, _) = crate::eval::encode(&tsk, &table, &[], budget)?;
    Ok((cs, table))
}

/// Re-derives the clause set from the certificate's theory, goal and term
/// set, compares it with the stored clauses, and replays the witness. The
/// witness replay is independent of the search code path.
pub fn check_certificate(cert: &ProofCertificate, budget: &Budget) -> Result<()> {
    let (cs, table) = rederive(cert, budget)?;
    if table.num_atoms() != cert.num_atoms {
        return Err(Error::BadCertificate(format!(
            "atom count mismatch: derived {}, stored {}",
            table.num_atoms(),
            cert.num_atoms
        )));
    }
    let derived = clause_codes(&cs);
    if derived.len() != cert.clauses.len() {
        return Err(Error::BadCertificate(format!(
            "clause count mismatch: derived {}, stored {}",
            derived.len(),
            cert.clauses.len()
        )));
    }
    for (i, (d, s)) in derived.iter().zip(&cert.clauses).enumerate() {
        if d != s {
            return Err(Error::BadCertificate(format!("clause {i} mismatch: derived {d:?}, stored {s:?}")));
        }
    }
    match &cert.witness {
        Witness::Resolution(steps) => {
            let proof = crate::sat::ResolutionProof { steps: steps.clone() };
            check_proof(&cs, &proof).map_err(Error::BadCertificate)
        }
        Witness::Exhaustion(stamp) => {
            // Replay by plain enumeration over the clause variables; this
            // path shares nothing with the search.
            let n = table.num_atoms();
            if n > crate::budget::BRUTE_ATOM_CAP {
                return Err(Error::BruteRefused(n));
            }
            let mut checked: u64 = 0;
            for mask in 0u64..(1u64 << n) {
                checked += 1;
                let satisfied = cs.clauses.iter().all(|clause| {
                    clause.iter().any(|l| {
                        let bit = mask & (1 << l.var()) != 0;
                        if l.is_positive() {
                            bit
                        } else {
                            !bit
                        }
                    })
                });
                if satisfied {
                    return Err(Error::BadCertificate(format!(
                        "exhaustion witness refuted: assignment {mask:#x} satisfies every clause"
                    )));
                }
            }
            if checked != *stamp {
                return Err(Error::BadCertificate(format!(
                    "exhaustion stamp mismatch: checked {checked}, stamped {stamp}"
                )));
            }
            Ok(())
        }
    }
}

/// Search strategy for `prove`: user-supplied candidate term sets are tried
/// first, then closure levels seeded from the negated goal's Skolem
/// constants.
#[derive(Debug, Clone)]
pub struct ProveStrategy {
    pub seeds: Vec<TermSet>,
    pub max_level: u64,
    pub mode: SearchMode,
}

impl Default for ProveStrategy {
    fn default() -> Self {
        ProveStrategy { seeds: Vec::new(), max_level: 0, mode: SearchMode::Sat }
    }
}

#[derive(Debug)]
pub enum ProveOutcome {
    Proved(Box<ProofCertificate>),
    /// Search exhausted its budget; provability is only semi-decidable.
    Unknown(String),
}

impl ProveOutcome {
    pub fn certificate(&self) -> Option<&ProofCertificate> {
        match self {
            ProveOutcome::Proved(c) => Some(c),
            ProveOutcome::Unknown(_) => None,
        }
    }
}

impl fmt::Display for ProveOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProveOutcome::Proved(c) => write!(f, "proved on a set of {} terms", c.lambda.len()),
            ProveOutcome::Unknown(why) => write!(f, "unknown: {why}"),
        }
    }
}

/// Herbrand provability: `theory` proves `goal` when some finite term set
/// admits no evaluation of the theory plus the negated goal.
pub fn prove(
    theory: &Theory,
    goal: &Formula,
    strategy: &ProveStrategy,
    budget: &Budget,
) -> Result<ProveOutcome> {
    if !goal.is_sentence() {
        return Err(Error::OpenAxiom(render_formula(goal), goal.free_vars().join(", ")));
    }
    let mut reg = SkolemRegistry::new();
    let mut tsk = skolemize_theory(theory, &mut reg);
    let neg_goal = skolemize(&Formula::not(goal.clone()), &mut reg);
    let goal_constants: Vec<Term> = neg_goal
        .symbols
        .iter()
        .filter(|s| reg.entry(s).map(|e| e.arity == 0) == Some(true))
        .map(|s| Term::App(s.clone(), vec![]))
        .collect();
    tsk.push(neg_goal);

    let mut candidates: Vec<TermSet> = strategy.seeds.clone();
    let base = if goal_constants.is_empty() {
        TermSet::new(theory.signature.constants().map(Term::constant))?
    } else {
        TermSet::new(goal_constants)?
    };
    let scheme = CodingScheme::new(&theory.signature, &reg);
    let mut level = UniverseLevel::new(base, CodeThreshold::AdmitAll, reg.clone());
    candidates.push(level.terms.clone());
    for _ in 0..strategy.max_level {
        level = match grow_universe(&level, &theory.signature, &scheme, budget) {
            Ok(l) => l,
            Err(Error::BudgetExceeded { .. }) => break,
            Err(e) => return Err(e),
        };
        candidates.push(level.terms.clone());
    }

    for lambda in &candidates {
        let table = match atoms_over(lambda, &theory.signature, budget) {
            Ok(t) => Arc::new(t),
            Err(Error::BudgetExceeded { what, need, limit }) => {
                return Ok(ProveOutcome::Unknown(format!(
                    "budget exceeded on a candidate set: {what} needs {need}, limit {limit}"
                )));
            }
            Err(e) => return Err(e),
        };
        let make_cert = |witness: Witness, clauses: Vec<Vec<i64>>| ProofCertificate {
            theory_name: theory.name.clone(),
            signature_line: theory.signature.render(),
            axioms: theory.axioms.iter().map(render_formula).collect(),
            goal: Some(render_formula(goal)),
            lambda: lambda.iter().map(crate::syntax::render_term).collect(),
            num_atoms: table.num_atoms(),
            clauses,
            witness,
        };
        match search_evaluation(&tsk, &table, &[], strategy.mode, budget)? {
            SearchOutcome::Found(_) => continue,
            SearchOutcome::RefutedBySat { clauses, proof, .. } => {
                let cert = make_cert(Witness::Resolution(proof.steps), clause_codes(&clauses));
                debug_assert!(check_certificate(&cert, budget).is_ok());
                return Ok(ProveOutcome::Proved(Box::new(cert)));
            }
            SearchOutcome::RefutedByEnumeration { .. } => {
                // The stamp records the assignment space the replay covers.
                let (cs, _) = crate::eval::encode(&tsk, &table, &[], budget)?;
                let cert = make_cert(
                    Witness::Exhaustion(1u64 << table.num_atoms()),
                    clause_codes(&cs),
                );
                return Ok(ProveOutcome::Proved(Box::new(cert)));
            }
        }
    }
    Ok(ProveOutcome::Unknown(format!(
        "no refuting term set among {} candidates (up to closure level {})",
        candidates.len(),
        strategy.max_level
    )))
}

/// The quotient structure on `~p` classes: partial function table and
/// relation table read off an evaluation.
#[derive(Debug, Clone)]
pub struct HerbrandModel {
    pub table: Arc<AtomTable>,
    pub classes: EqClasses,
    /// (function, argument class representatives) -> class representative.
    pub functions: BTreeMap<(String, Vec<usize>), usize>,
    /// (predicate, argument class representatives) present when true.
    pub relations: BTreeSet<(String, Vec<usize>)>,
}

/// Three-valued satisfaction over the finite partial structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Truth {
    True,
    False,
    Undefined,
}

pub fn build_quotient_model(p: &Evaluation) -> Result<HerbrandModel> {
    if let Err(v) = crate::eval::validate_evaluation(p) {
        return Err(Error::BadEvaluation(v.to_string()));
    }
    let classes = eq_classes(p);
    let table = p.table.clone();
    let mut functions = BTreeMap::new();
    for (i, term) in table.terms().iter().enumerate() {
        if let Term::App(f, args) = term {
            let arg_ids: Option<Vec<usize>> =
                args.iter().map(|a| table.terms().iter().position(|t| t == a)).collect();
            if let Some(ids) = arg_ids {
                let key = (f.clone(), ids.iter().map(|&a| classes.class_of[a]).collect::<Vec<_>>());
                let value = classes.class_of[i];
                if let Some(&prev) = functions.get(&key) {
                    // Well-definedness is exactly functional congruence.
                    debug_assert_eq!(prev, value);
                } else {
                    functions.insert(key, value);
                }
            }
        }
    }
    let mut relations = BTreeSet::new();
    for idx in 0..table.num_atoms() {
        if !p.bits[idx] {
            continue;
        }
        if let Formula::Atom(pred, args) = table.atom_as_formula(idx) {
            if pred == crate::syntax::EQ {
                continue;
            }
            let ids: Vec<usize> = args
                .iter()
                .map(|a| table.terms().iter().position(|t| t == a).expect("table atom argument"))
                .collect();
            relations.insert((pred, ids.iter().map(|&a| classes.class_of[a]).collect()));
        }
    }
    Ok(HerbrandModel { table, classes, functions, relations })
}

impl HerbrandModel {
    /// Class representative of a member term.
    pub fn class_of_term(&self, t: &Term) -> Option<usize> {
        let idx = self.table.terms().iter().position(|x| x == t)?;
        Some(self.classes.class_of[idx])
    }

    fn eval_term(&self, t: &Term, env: &BTreeMap<String, usize>) -> Option<usize> {
        match t {
            Term::Var(v) => env.get(v).copied(),
            Term::App(f, args) => {
                let vals: Option<Vec<usize>> = args.iter().map(|a| self.eval_term(a, env)).collect();
                self.functions.get(&(f.clone(), vals?)).copied()
            }
        }
    }

    /// All classes `c` with `c <= bound` in the relation table.
    fn below(&self, bound: usize) -> Vec<usize> {
        let mut reps: Vec<usize> = self.classes.class_of.clone();
        reps.sort_unstable();
        reps.dedup();
        reps.into_iter()
            .filter(|&c| self.relations.contains(&("<=".to_string(), vec![c, bound])))
            .collect()
    }
}

/// Evaluates a bounded formula in the partial quotient structure. Bounded
/// quantifiers must have the shapes `forall x. (x <= t -> ...)` and
/// `exists x. (x <= t & ...)` with `x` not free in `t`; `Undefined` reports a
/// missing function-table entry rather than a truth value.
pub fn eval_in_model(
    m: &HerbrandModel,
    phi: &Formula,
    env: &BTreeMap<String, usize>,
) -> Result<Truth> {
    match phi {
        Formula::Atom(pred, args) => {
            let vals: Vec<Option<usize>> = args.iter().map(|a| m.eval_term(a, env)).collect();
            if vals.iter().any(Option::is_none) {
                return Ok(Truth::Undefined);
            }
            let vals: Vec<usize> = vals.into_iter().map(Option::unwrap).collect();
            if pred == crate::syntax::EQ {
                Ok(if vals[0] == vals[1] { Truth::True } else { Truth::False })
            } else {
                Ok(if m.relations.contains(&(pred.clone(), vals)) { Truth::True } else { Truth::False })
            }
        }
        Formula::Not(f) => Ok(match eval_in_model(m, f, env)? {
            Truth::True => Truth::False,
            Truth::False => Truth::True,
            Truth::Undefined => Truth::Undefined,
        }),
        Formula::And(a, b) => {
            let (x, y) = (eval_in_model(m, a, env)?, eval_in_model(m, b, env)?);
            Ok(match (x, y) {
                (Truth::False, _) | (_, Truth::False) => Truth::False,
                (Truth::True, Truth::True) => Truth::True,
                _ => Truth::Undefined,
            })
        }
        Formula::Or(a, b) => {
            let (x, y) = (eval_in_model(m, a, env)?, eval_in_model(m, b, env)?);
            Ok(match (x, y) {
                (Truth::True, _) | (_, Truth::True) => Truth::True,
                (Truth::False, Truth::False) => Truth::False,
                _ => Truth::Undefined,
            })
        }
        Formula::Implies(a, b) => {
            eval_in_model(m, &Formula::or(Formula::not(a.as_ref().clone()), b.as_ref().clone()), env)
        }
        Formula::Forall(v, body) => {
            let (bound_term, inner) = match body.as_ref() {
                Formula::Implies(guard, inner) => match guard.as_ref() {
                    Formula::Atom(p, args)
                        if p == "<=" && args[0] == Term::Var(v.clone()) && !term_mentions(&args[1], v) =>
                    {
                        (args[1].clone(), inner.as_ref().clone())
                    }
                    _ => return Err(Error::NotBounded(render_formula(phi))),
                },
                _ => return Err(Error::NotBounded(render_formula(phi))),
            };
            let Some(bound) = m.eval_term(&bound_term, env) else {
                return Ok(Truth::Undefined);
            };
            let mut result = Truth::True;
            for c in m.below(bound) {
                let mut env2 = env.clone();
                env2.insert(v.clone(), c);
                match eval_in_model(m, &inner, &env2)? {
                    Truth::False => return Ok(Truth::False),
                    Truth::Undefined => result = Truth::Undefined,
                    Truth::True => {}
                }
            }
            Ok(result)
        }
        Formula::Exists(v, body) => {
            let (bound_term, inner) = match body.as_ref() {
                Formula::And(guard, inner) => match guard.as_ref() {
                    Formula::Atom(p, args)
                        if p == "<=" && args[0] == Term::Var(v.clone()) && !term_mentions(&args[1], v) =>
                    {
                        (args[1].clone(), inner.as_ref().clone())
                    }
                    _ => return Err(Error::NotBounded(render_formula(phi))),
                },
                _ => return Err(Error::NotBounded(render_formula(phi))),
            };
            let Some(bound) = m.eval_term(&bound_term, env) else {
                return Ok(Truth::Undefined);
            };
            let mut result = Truth::False;
            for c in m.below(bound) {
                let mut env2 = env.clone();
                env2.insert(v.clone(), c);
                match eval_in_model(m, &inner, &env2)? {
                    Truth::True => return Ok(Truth::True),
                    Truth::Undefined => result = Truth::Undefined,
                    Truth::False => {}
                }
            }
            Ok(result)
        }
    }
}

fn term_mentions(t: &Term, v: &str) -> bool {
    match t {
        Term::Var(x) => x == v,
        Term::App(_, args) => args.iter().any(|a| term_mentions(a, v)),
    }
}

/// `0, s(0), s(s(0)), ...` up to and including `n`; a signature without `s`
/// but with the constant `1` counts with `+ 1` instead.
pub fn numeral_terms(n: u64, sig: &Signature) -> Result<Vec<Term>> {
    let zero = sig
        .constants()
        .find(|c| *c == "0")
        .map(Term::constant)
        .ok_or_else(|| Error::UnknownSymbol("0".into()))?;
    let mut out = vec![zero];
    for _ in 0..n {
        let prev = out.last().unwrap().clone();
        let next = if sig.function_arity("s") == Some(1) {
            Term::app("s", vec![prev])
        } else if sig.function_arity("1") == Some(0) && sig.function_arity("+") == Some(2) {
            Term::app("+", vec![prev, Term::constant("1")])
        } else {
            return Err(Error::UnknownSymbol("s".into()));
        };
        out.push(next);
    }
    Ok(out)
}

pub fn numeral(n: u64, sig: &Signature) -> Result<Term> {
    Ok(numeral_terms(n, sig)?.pop().unwrap())
}

/// The signature of arithmetic extended with a graph symbol for `omega_1`,
/// needed to register the iterated-growth witness function.
pub fn omega1_signature() -> Signature {
    let mut funs = Signature::arithmetic().functions().to_vec();
    funs.push(("omega1".into(), 1));
    Signature::new(funs, Signature::arithmetic().predicates().to_vec()).expect("fixed signature")
}

/// `w_0 = numeral(4)`, `w_{j+1} = w(w_j)` where `w` is the Skolem witness of
/// `exists y. y = omega1(x)`; returns `w_0 ..= w_n`.
pub fn w_terms(n: u64, sig: &Signature, reg: &mut SkolemRegistry) -> Result<Vec<Term>> {
    if sig.function_arity("omega1") != Some(1) {
        return Err(Error::UnknownSymbol("omega1".into()));
    }
    let source = Formula::exists(
        "y",
        Formula::eq(Term::var("y"), Term::app("omega1", vec![Term::var("x")])),
    );
    let w = reg.lookup_or_register(&source).name.clone();
    let mut out = vec![numeral(4, sig)?];
    for _ in 0..n {
        let prev = out.last().unwrap().clone();
        out.push(Term::App(w.clone(), vec![prev]));
    }
    Ok(out)
}

/// `z_0 = numeral(2)`, `z_{j+1} = q(z_j)` where `q` is the squaring witness
/// of `exists y. (y <= x * x & y = x * x)`; returns `z_0 ..= z_n`.
pub fn z_terms(n: u64, sig: &Signature, reg: &mut SkolemRegistry) -> Result<Vec<Term>> {
    let square = Term::app("*", vec![Term::var("x"), Term::var("x")]);
    let source = Formula::exists(
        "y",
        Formula::and(
            Formula::Atom("<=".into(), vec![Term::var("y"), square.clone()]),
            Formula::eq(Term::var("y"), square),
        ),
    );
    let q = reg.lookup_or_register(&source).name.clone();
    let mut out = vec![numeral(2, sig)?];
    for _ in 0..n {
        let prev = out.last().unwrap().clone();
        out.push(Term::App(q.clone(), vec![prev]));
    }
    Ok(out)
}

/// Which witness-chain term set to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LambdaFlavor {
    /// Numerals up to `omega_1(alpha)` plus the `w_j` for `j <= alpha`.
    Omega1,
    /// The induction fixture set, numerals up to `omega_1(alpha)`, and the
    /// `z_j` for `j <= 4 * alpha^4`.
    Delta0,
}

/// The squaring-induction body `exists y. (y <= x * x & y = x * x)`.
pub fn squaring_body() -> Formula {
    let square = Term::app("*", vec![Term::var("x"), Term::var("x")]);
    Formula::exists(
        "y",
        Formula::and(
            Formula::Atom("<=".into(), vec![Term::var("y"), square.clone()]),
            Formula::eq(Term::var("y"), square),
        ),
    )
}

/// The numeral-plus-witness-chain term sets underlying the two logarithmic
/// shrinking constructions. `alpha` must stay tiny (<= 3) so the numeral
/// segment fits the budget.
pub fn witness_family_set(
    alpha: u64,
    flavor: LambdaFlavor,
    sig: &Signature,
    reg: &mut SkolemRegistry,
    budget: &Budget,
) -> Result<TermSet> {
    if alpha > 3 {
        return Err(Error::BudgetExceeded { what: "terms", need: alpha, limit: 3 });
    }
    let omega1_alpha = omega(1, &Tower::from_u64(alpha))?;
    let bound: u64 = omega1_alpha
        .exact()
        .and_then(|v| u64::try_from(v).ok())
        .ok_or_else(|| Error::TowerOverflow("omega_1(alpha) is not exactly representable".into()))?;
    let mut terms = numeral_terms(bound, sig)?;
    match flavor {
        LambdaFlavor::Omega1 => {
            terms.extend(w_terms(alpha, sig, reg)?);
        }
        LambdaFlavor::Delta0 => {
            // The upsilon fixture: register the counterexample constant and
            // the squaring witness exactly as the induction axiom does.
            let ind = skolemize_induction(&squaring_body(), sig, reg)?;
            let c = ind
                .symbols
                .iter()
                .find(|s| reg.entry(s).map(|e| e.arity) == Some(0))
                .ok_or_else(|| Error::UnknownSymbol("induction constant".into()))?
                .clone();
            let c = Term::App(c, vec![]);
            let sq = |t: &Term| Term::app("*", vec![t.clone(), t.clone()]);
            let zero = Term::constant("0");
            let sc = Term::app("s", vec![c.clone()]);
            let q_of_c = {
                let q = reg
                    .entries()
                    .iter()
                    .find(|e| e.arity == 1 && e.key == SkolemRegistry::canonical_key(&squaring_body()))
                    .expect("squaring witness registered by the induction step")
                    .name
                    .clone();
                Term::App(q, vec![c.clone()])
            };
            let upsilon = [
                zero.clone(),
                Term::app("+", vec![zero.clone(), zero.clone()]),
                sq(&zero),
                c.clone(),
                sq(&c),
                Term::app("+", vec![sq(&c), zero.clone()]),
                sc.clone(),
                q_of_c,
                sq(&sc),
                Term::app("+", vec![sq(&sc), zero.clone()]),
            ];
            terms.extend(upsilon);
            terms.extend(z_terms(4 * alpha.pow(4), sig, reg)?);
        }
    }
    budget.check("terms", terms.len() as u64)?;
    TermSet::new(terms)
}

/// Name of the registered Skolem symbol whose source is alpha-equivalent to
/// `source`.
pub fn witness_symbol(reg: &SkolemRegistry, source: &Formula) -> Result<String> {
    let key = SkolemRegistry::canonical_key(source);
    reg.entries()
        .iter()
        .find(|e| e.key == key)
        .map(|e| e.name.clone())
        .ok_or_else(|| Error::UnknownSymbol(render_formula(source)))
}

/// The predecessor witness `f_{exists y. x = s(y)}` of Robinson arithmetic.
pub fn predecessor_witness(reg: &SkolemRegistry) -> Result<String> {
    witness_symbol(
        reg,
        &Formula::exists("y", Formula::eq(Term::var("x"), Term::app("s", vec![Term::var("y")]))),
    )
}

/// The difference witness `f_{exists z. x + z = y}` of Robinson arithmetic.
pub fn difference_witness(reg: &SkolemRegistry) -> Result<String> {
    witness_symbol(
        reg,
        &Formula::exists(
            "z",
            Formula::eq(Term::app("+", vec![Term::var("x"), Term::var("z")]), Term::var("y")),
        ),
    )
}

/// The completed difference-witness set for deciding `t <= 0`: the printed
/// form of this set omits `t + h(t, 0)`, `t + p(h(t, 0))` and
/// `s(t + p(h(t, 0)))`, without which the deciding instances are not
/// available; the completion is the minimal superset that forces.
pub fn sigma_set(t: &Term, reg: &SkolemRegistry) -> Result<TermSet> {
    let p = predecessor_witness(reg)?;
    let h = difference_witness(reg)?;
    let zero = Term::constant("0");
    let s = |x: Term| Term::app("s", vec![x]);
    let plus = |a: Term, b: Term| Term::app("+", vec![a, b]);
    let ht0 = Term::App(h, vec![t.clone(), zero.clone()]);
    let pht0 = Term::App(p, vec![ht0.clone()]);
    let spht0 = s(pht0.clone());
    TermSet::new([
        zero,
        t.clone(),
        plus(t.clone(), Term::constant("0")),
        ht0.clone(),
        pht0.clone(),
        spht0.clone(),
        plus(t.clone(), spht0),
        s(plus(t.clone(), s(pht0.clone()))),
        plus(t.clone(), ht0),
        plus(t.clone(), pht0.clone()),
        s(plus(t.clone(), pht0)),
    ])
}

/// The completed set for deciding `u <= s(v)` into `u = s(v)` or `u <= v`;
/// completed with `u + h(u, s(v))`, `u + 0` and `u + h(u, v)`.
pub fn gamma_set(u: &Term, v: &Term, reg: &SkolemRegistry) -> Result<TermSet> {
    let p = predecessor_witness(reg)?;
    let h = difference_witness(reg)?;
    let zero = Term::constant("0");
    let s = |x: Term| Term::app("s", vec![x]);
    let plus = |a: Term, b: Term| Term::app("+", vec![a, b]);
    let sv = s(v.clone());
    let husv = Term::App(h.clone(), vec![u.clone(), sv.clone()]);
    let phusv = Term::App(p, vec![husv.clone()]);
    TermSet::new([
        zero.clone(),
        u.clone(),
        v.clone(),
        sv,
        husv.clone(),
        phusv.clone(),
        s(phusv.clone()),
        plus(u.clone(), phusv.clone()),
        plus(u.clone(), s(phusv.clone())),
        s(plus(u.clone(), phusv)),
        plus(u.clone(), husv),
        plus(u.clone(), zero),
        plus(u.clone(), Term::App(h, vec![u.clone(), v.clone()])),
    ])
}

/// Does the theory admit an evaluation on this term set?
pub fn hcon_check(
    tsk: &[SkolemizedFormula],
    lambda: &TermSet,
    sig: &Signature,
    budget: &Budget,
) -> Result<bool> {
    Ok(crate::eval::find_evaluation(tsk, lambda, sig, SearchMode::Sat, budget)?.is_some())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HconStarOutcome {
    Sat,
    Unsat,
    /// The side condition fails: `omega_1(code(lambda))` is not representable
    /// under the scheme's bit ceiling.
    NotApplicable,
}

/// The tailored check: only term sets whose code admits `omega_1` count.
pub fn hcon_star_check(
    tsk: &[SkolemizedFormula],
    lambda: &TermSet,
    sig: &Signature,
    scheme: &CodingScheme,
    budget: &Budget,
) -> Result<HconStarOutcome> {
    let code = scheme.code_set(lambda)?;
    // omega_1(x) = exp((log x)^2) needs (log x)^2 + 1 bits.
    let log = ceil_log2(&code.value);
    let applicable = match u64::try_from(&log) {
        Ok(l) => l.checked_mul(l).map(|sq| sq < scheme.bit_ceiling()).unwrap_or(false),
        Err(_) => false,
    };
    if !applicable {
        return Ok(HconStarOutcome::NotApplicable);
    }
    Ok(if hcon_check(tsk, lambda, sig, budget)? {
        HconStarOutcome::Sat
    } else {
        HconStarOutcome::Unsat
    })
}
