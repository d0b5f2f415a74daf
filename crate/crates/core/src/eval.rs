//! Evaluations: total 0/1 assignments on the atomic formulas over a term set,
//! constrained by reflexivity of equality and substitution congruence. A
//! T-evaluation additionally satisfies every available Skolem instance of T.
//!
//! `find_evaluation` searches for one either by SAT over the finitely
//! instantiated equality axioms plus instance clauses, or by exhaustive
//! enumeration (the oracle, capped at 24 atoms).

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::budget::{Budget, BRUTE_ATOM_CAP};
use crate::error::{Error, Result};
use crate::instance::{available_instances, SkolemInstance, TermSet};
use crate::normalize::nnf;
use crate::sat::{check_proof, solve, ClauseSet, Lit, ResolutionProof, SatResult};
use crate::skolem::SkolemizedFormula;
use crate::syntax::{render_formula, Formula, Signature, Term, EQ};

/// The indexed list of all atomic formulas with arguments in a term set:
/// every predicate (equality first) applied to every argument tuple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomTable {
    lambda: TermSet,
    terms: Vec<Term>,
    term_index: BTreeMap<Term, usize>,
    predicates: Vec<(String, usize)>,
    atoms: Vec<(usize, Vec<usize>)>,
    atom_index: BTreeMap<(usize, Vec<usize>), usize>,
    /// First atom index of each predicate's block; atoms are laid out per
    /// predicate in lexicographic argument order, so an atom's index is
    /// `pred_base + mixed-radix(args)`.
    pred_base: Vec<usize>,
    /// Per term: head symbol and argument indices, when every argument is
    /// itself a member of the set.
    apps: Vec<Option<(String, Vec<usize>)>>,
    /// Pairs of member terms with the same head and in-set arguments.
    same_head_pairs: Vec<(usize, usize)>,
    /// eq_atom[i * n + j] = index of the atom `t_i = t_j`.
    eq_atoms: Vec<usize>,
}

/// Builds the atom table over `lambda` for the predicates of `sig`.
pub fn atoms_over(lambda: &TermSet, sig: &Signature, budget: &Budget) -> Result<AtomTable> {
    let terms: Vec<Term> = lambda.iter().cloned().collect();
    let n = terms.len();
    let term_index: BTreeMap<Term, usize> =
        terms.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();

    let mut predicates = vec![(EQ.to_string(), 2)];
    predicates.extend(sig.predicates().iter().cloned());

    let mut need: u64 = 0;
    for (_, arity) in &predicates {
        need = need.saturating_add((n as u64).saturating_pow(*arity as u32));
    }
    budget.check("atoms", need)?;

    let mut atoms = Vec::new();
    let mut atom_index = BTreeMap::new();
    let mut pred_base = Vec::with_capacity(predicates.len());
    for (pi, (_, arity)) in predicates.iter().enumerate() {
        pred_base.push(atoms.len());
        let mut tuple = vec![0usize; *arity];
        if n == 0 && *arity > 0 {
            continue;
        }
        loop {
            let key = (pi, tuple.clone());
            atom_index.insert(key.clone(), atoms.len());
            atoms.push(key);
            if *arity == 0 {
                break;
            }
            let mut pos = *arity;
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                tuple[pos] += 1;
                if tuple[pos] < n {
                    break;
                }
                tuple[pos] = 0;
            }
            if tuple.iter().all(|&i| i == 0) {
                break;
            }
        }
    }

    let apps: Vec<Option<(String, Vec<usize>)>> = terms
        .iter()
        .map(|t| match t {
            Term::App(f, args) => {
                let ids: Option<Vec<usize>> = args.iter().map(|a| term_index.get(a).copied()).collect();
                ids.map(|ids| (f.clone(), ids))
            }
            Term::Var(_) => None,
        })
        .collect();

    let mut same_head_pairs = Vec::new();
    for i in 0..n {
        let Some((f, fargs)) = &apps[i] else { continue };
        for (j, app) in apps.iter().enumerate().skip(i + 1) {
            let Some((g, gargs)) = app else { continue };
            if f == g && fargs.len() == gargs.len() {
                same_head_pairs.push((i, j));
            }
        }
    }

    let mut eq_atoms = vec![0usize; n * n];
    for i in 0..n {
        for j in 0..n {
            eq_atoms[i * n + j] = atom_index[&(0usize, vec![i, j])];
        }
    }

    Ok(AtomTable {
        lambda: lambda.clone(),
        terms,
        term_index,
        predicates,
        atoms,
        atom_index,
        pred_base,
        apps,
        same_head_pairs,
        eq_atoms,
    })
}

impl AtomTable {
    pub fn lambda(&self) -> &TermSet {
        &self.lambda
    }

    pub fn num_atoms(&self) -> usize {
        self.atoms.len()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn eq_atom(&self, i: usize, j: usize) -> usize {
        self.eq_atoms[i * self.terms.len() + j]
    }

    /// Index of a ground atom, if all its arguments are members.
    pub fn index_of_atom(&self, pred: &str, args: &[Term]) -> Option<usize> {
        let pi = self.predicates.iter().position(|(p, _)| p == pred)?;
        let ids: Option<Vec<usize>> = args.iter().map(|t| self.term_index.get(t).copied()).collect();
        self.atom_index.get(&(pi, ids?)).copied()
    }

    pub fn atom_as_formula(&self, idx: usize) -> Formula {
        let (pi, args) = &self.atoms[idx];
        Formula::Atom(
            self.predicates[*pi].0.clone(),
            args.iter().map(|&i| self.terms[i].clone()).collect(),
        )
    }

    pub fn render_atom(&self, idx: usize) -> String {
        render_formula(&self.atom_as_formula(idx))
    }

    /// Atom index of every atomic subformula of an open ground formula.
    fn formula_atoms(&self, f: &Formula) -> Result<Vec<usize>> {
        f.atoms()
            .into_iter()
            .map(|a| match a {
                Formula::Atom(p, args) => self
                    .index_of_atom(p, args)
                    .ok_or_else(|| Error::AtomOutsideTable(render_formula(a))),
                _ => unreachable!(),
            })
            .collect()
    }
}

/// A total 0/1 assignment on an atom table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evaluation {
    pub table: Arc<AtomTable>,
    pub bits: Vec<bool>,
}

impl Evaluation {
    pub fn new(table: Arc<AtomTable>, bits: Vec<bool>) -> Result<Evaluation> {
        if bits.len() != table.num_atoms() {
            return Err(Error::BadEvaluation(format!(
                "expected {} bits, got {}",
                table.num_atoms(),
                bits.len()
            )));
        }
        Ok(Evaluation { table, bits })
    }

    /// Builds an evaluation from the set of true atoms, everything else false.
    pub fn from_true_atoms(table: Arc<AtomTable>, true_atoms: &[Formula]) -> Result<Evaluation> {
        let mut bits = vec![false; table.num_atoms()];
        for atom in true_atoms {
            match atom {
                Formula::Atom(p, args) => {
                    let idx = table
                        .index_of_atom(p, args)
                        .ok_or_else(|| Error::AtomOutsideTable(render_formula(atom)))?;
                    bits[idx] = true;
                }
                other => return Err(Error::NotOpenGround(render_formula(other))),
            }
        }
        Evaluation::new(table, bits)
    }

    /// True atoms in table order, rendered one per line: the bit-exact
    /// serialization format.
    pub fn render_true_atoms(&self) -> String {
        let mut out = String::new();
        for (i, &b) in self.bits.iter().enumerate() {
            if b {
                out.push_str(&self.table.render_atom(i));
                out.push('\n');
            }
        }
        out
    }
}

/// Why a candidate assignment is not an evaluation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EvalViolation {
    Reflexivity { term: String },
    EqualityNotClosed { left: String, right: String },
    FunctionalCongruence { left: String, right: String },
    PredicateCongruence { first: String, second: String },
}

impl fmt::Display for EvalViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalViolation::Reflexivity { term } => write!(f, "reflexivity fails on {term} = {term}"),
            EvalViolation::EqualityNotClosed { left, right } => {
                write!(f, "asserted equalities are not symmetric/transitive on {left}, {right}")
            }
            EvalViolation::FunctionalCongruence { left, right } => {
                write!(f, "functional congruence forces {left} = {right}")
            }
            EvalViolation::PredicateCongruence { first, second } => {
                write!(f, "congruent atoms {first} and {second} disagree")
            }
        }
    }
}

struct Scratch {
    parent: Vec<usize>,
}

impl Scratch {
    fn new(n: usize) -> Scratch {
        Scratch { parent: (0..n).collect() }
    }

    fn reset(&mut self) {
        for (i, p) in self.parent.iter_mut().enumerate() {
            *p = i;
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // Smaller root wins, so representatives are stable.
            if ra < rb {
                self.parent[rb] = ra;
            } else {
                self.parent[ra] = rb;
            }
        }
    }
}

fn violation_with(table: &AtomTable, bits: &[bool], scratch: &mut Scratch) -> Option<EvalViolation> {
    let n = table.num_terms();
    scratch.reset();
    for i in 0..n {
        if !bits[table.eq_atom(i, i)] {
            return Some(EvalViolation::Reflexivity { term: table.terms[i].to_string() });
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if bits[table.eq_atom(i, j)] || bits[table.eq_atom(j, i)] {
                scratch.union(i, j);
            }
        }
    }
    // Both orientations of every same-class pair must be asserted.
    for i in 0..n {
        for j in (i + 1)..n {
            if scratch.find(i) == scratch.find(j)
                && !(bits[table.eq_atom(i, j)] && bits[table.eq_atom(j, i)])
            {
                return Some(EvalViolation::EqualityNotClosed {
                    left: table.terms[i].to_string(),
                    right: table.terms[j].to_string(),
                });
            }
        }
    }
    // Members with congruent applications must already be asserted equal.
    for &(i, j) in &table.same_head_pairs {
        let (_, fargs) = table.apps[i].as_ref().unwrap();
        let (_, gargs) = table.apps[j].as_ref().unwrap();
        if fargs.iter().zip(gargs).all(|(&a, &b)| scratch.find(a) == scratch.find(b))
            && !bits[table.eq_atom(i, j)]
        {
            return Some(EvalViolation::FunctionalCongruence {
                left: table.terms[i].to_string(),
                right: table.terms[j].to_string(),
            });
        }
    }
    // Atoms whose argument tuples are congruent must agree: each atom must
    // match its class-canonical representative, located arithmetically in
    // the predicate's lexicographic block.
    for (idx, (pi, args)) in table.atoms.iter().enumerate() {
        let mut offset = 0;
        for &a in args {
            offset = offset * n + scratch.find(a);
        }
        let canonical = table.pred_base[*pi] + offset;
        if bits[canonical] != bits[idx] {
            return Some(EvalViolation::PredicateCongruence {
                first: table.render_atom(canonical),
                second: table.render_atom(idx),
            });
        }
    }
    None
}

/// Checks reflexivity, substitution congruence and functional congruence.
pub fn validate_evaluation(p: &Evaluation) -> std::result::Result<(), EvalViolation> {
    let mut scratch = Scratch::new(p.table.num_terms());
    match violation_with(&p.table, &p.bits, &mut scratch) {
        None => Ok(()),
        Some(v) => Err(v),
    }
}

pub fn is_evaluation(p: &Evaluation) -> bool {
    validate_evaluation(p).is_ok()
}

/// The partition of the term set into `~p` classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EqClasses {
    /// Representative (smallest member index) per term index.
    pub class_of: Vec<usize>,
}

impl EqClasses {
    pub fn same(&self, i: usize, j: usize) -> bool {
        self.class_of[i] == self.class_of[j]
    }

    pub fn representatives(&self) -> Vec<usize> {
        let mut reps: Vec<usize> = self.class_of.clone();
        reps.sort_unstable();
        reps.dedup();
        reps
    }
}

/// Union-find partition from the true equality atoms. Callers must pass a
/// valid evaluation.
pub fn eq_classes(p: &Evaluation) -> EqClasses {
    let n = p.table.num_terms();
    let mut scratch = Scratch::new(n);
    for i in 0..n {
        for j in (i + 1)..n {
            if p.bits[p.table.eq_atom(i, j)] {
                scratch.union(i, j);
            }
        }
    }
    EqClasses { class_of: (0..n).map(|i| scratch.find(i)).collect() }
}

/// Truth-functional satisfaction of an open ground formula.
pub fn satisfies(p: &Evaluation, g: &Formula) -> Result<bool> {
    match g {
        Formula::Atom(pred, args) => {
            let idx = p
                .table
                .index_of_atom(pred, args)
                .ok_or_else(|| Error::AtomOutsideTable(render_formula(g)))?;
            Ok(p.bits[idx])
        }
        Formula::Not(f) => Ok(!satisfies(p, f)?),
        Formula::And(a, b) => Ok(satisfies(p, a)? && satisfies(p, b)?),
        Formula::Or(a, b) => Ok(satisfies(p, a)? || satisfies(p, b)?),
        Formula::Implies(a, b) => Ok(!satisfies(p, a)? || satisfies(p, b)?),
        Formula::Forall(..) | Formula::Exists(..) => Err(Error::NotOpenGround(render_formula(g))),
    }
}

/// First available instance the evaluation fails to satisfy, if any.
pub fn t_evaluation_violation(
    p: &Evaluation,
    tsk: &[SkolemizedFormula],
    budget: &Budget,
) -> Result<Option<SkolemInstance>> {
    for inst in available_instances(tsk, p.table.lambda(), budget)? {
        if !satisfies(p, &inst.ground)? {
            return Ok(Some(inst));
        }
    }
    Ok(None)
}

pub fn is_t_evaluation(p: &Evaluation, tsk: &[SkolemizedFormula], budget: &Budget) -> Result<bool> {
    Ok(t_evaluation_violation(p, tsk, budget)?.is_none())
}

/// Where a clause in the propositional encoding came from; used for
/// diagnostics and for the redundancy analysis of the explicit equivalence
/// clauses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClauseOrigin {
    Reflexivity,
    Symmetry,
    Transitivity,
    FunctionalCongruence,
    PredicateCongruence,
    Instance { source: usize },
    Constraint,
}

/// The propositional encoding: one variable per atom, reflexivity units,
/// symmetry, transitivity, functional and predicate congruence clauses over
/// the table, the CNF of every available instance, and extra ground
/// constraints (used by `force_check`).
pub fn encode(
    tsk: &[SkolemizedFormula],
    table: &AtomTable,
    extra: &[Formula],
    budget: &Budget,
) -> Result<(ClauseSet, Vec<ClauseOrigin>)> {
    let mut cs = ClauseSet::new(table.num_atoms());
    let mut origins = Vec::new();
    let n = table.num_terms();
    let push = |cs: &mut ClauseSet, origins: &mut Vec<ClauseOrigin>, clause: Vec<Lit>, o: ClauseOrigin| {
        let before = cs.clauses.len();
        cs.push(clause);
        if cs.clauses.len() > before {
            origins.push(o);
        }
    };

    for i in 0..n {
        push(&mut cs, &mut origins, vec![Lit::positive(table.eq_atom(i, i))], ClauseOrigin::Reflexivity);
    }
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            push(
                &mut cs,
                &mut origins,
                vec![Lit::negative(table.eq_atom(i, j)), Lit::positive(table.eq_atom(j, i))],
                ClauseOrigin::Symmetry,
            );
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if i == j || j == k || i == k {
                    continue;
                }
                push(
                    &mut cs,
                    &mut origins,
                    vec![
                        Lit::negative(table.eq_atom(i, j)),
                        Lit::negative(table.eq_atom(j, k)),
                        Lit::positive(table.eq_atom(i, k)),
                    ],
                    ClauseOrigin::Transitivity,
                );
            }
        }
    }
    for i in 0..n {
        let Some((f, fargs)) = &table.apps[i] else { continue };
        for j in 0..n {
            if i == j {
                continue;
            }
            let Some((g, gargs)) = &table.apps[j] else { continue };
            if f != g || fargs.len() != gargs.len() {
                continue;
            }
            let mut clause: Vec<Lit> = fargs
                .iter()
                .zip(gargs)
                .filter(|(a, b)| a != b)
                .map(|(&a, &b)| Lit::negative(table.eq_atom(a, b)))
                .collect();
            clause.push(Lit::positive(table.eq_atom(i, j)));
            push(&mut cs, &mut origins, clause, ClauseOrigin::FunctionalCongruence);
        }
    }
    // Single-position replacement under an asserted equality; multi-position
    // replacement follows by chaining.
    for a in 0..table.atoms.len() {
        let (pi, args) = table.atoms[a].clone();
        for pos in 0..args.len() {
            let t = args[pos];
            for s in 0..n {
                if s == t {
                    continue;
                }
                let mut repl = args.clone();
                repl[pos] = s;
                let b = table.atom_index[&(pi, repl)];
                let e = Lit::negative(table.eq_atom(t, s));
                push(
                    &mut cs,
                    &mut origins,
                    vec![e, Lit::negative(a), Lit::positive(b)],
                    ClauseOrigin::PredicateCongruence,
                );
                push(
                    &mut cs,
                    &mut origins,
                    vec![e, Lit::positive(a), Lit::negative(b)],
                    ClauseOrigin::PredicateCongruence,
                );
            }
        }
    }

    for inst in available_instances(tsk, table.lambda(), budget)? {
        for clause in ground_cnf(&inst.ground, table)? {
            push(&mut cs, &mut origins, clause, ClauseOrigin::Instance { source: inst.source });
        }
    }
    for g in extra {
        for clause in ground_cnf(g, table)? {
            push(&mut cs, &mut origins, clause, ClauseOrigin::Constraint);
        }
    }
    Ok((cs, origins))
}

/// Plain distributive CNF over atom variables; ground instances are tiny, so
/// no definitional variables are introduced.
fn ground_cnf(g: &Formula, table: &AtomTable) -> Result<Vec<Vec<Lit>>> {
    match g {
        Formula::Atom(pred, args) => {
            let idx = table
                .index_of_atom(pred, args)
                .ok_or_else(|| Error::AtomOutsideTable(render_formula(g)))?;
            Ok(vec![vec![Lit::positive(idx)]])
        }
        Formula::Not(inner) => match inner.as_ref() {
            Formula::Atom(pred, args) => {
                let idx = table
                    .index_of_atom(pred, args)
                    .ok_or_else(|| Error::AtomOutsideTable(render_formula(inner)))?;
                Ok(vec![vec![Lit::negative(idx)]])
            }
            _ => Err(Error::NotOpenGround(render_formula(g))),
        },
        Formula::And(a, b) => {
            let mut out = ground_cnf(a, table)?;
            out.extend(ground_cnf(b, table)?);
            Ok(out)
        }
        Formula::Or(a, b) => {
            let left = ground_cnf(a, table)?;
            let right = ground_cnf(b, table)?;
            let mut out = Vec::with_capacity(left.len() * right.len());
            for l in &left {
                for r in &right {
                    let mut clause = l.clone();
                    clause.extend(r.iter().copied());
                    out.push(clause);
                }
            }
            Ok(out)
        }
        _ => Err(Error::NotOpenGround(render_formula(g))),
    }
}

/// Search mode: propositional SAT, or the exhaustive oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    Sat,
    Brute,
}

/// A search outcome that keeps the refutation when there is no evaluation.
#[derive(Debug, Clone)]
pub enum SearchOutcome {
    Found(Evaluation),
    RefutedBySat { clauses: ClauseSet, origins: Vec<ClauseOrigin>, proof: ResolutionProof },
    RefutedByEnumeration { assignments_checked: u64 },
}

impl SearchOutcome {
    pub fn evaluation(self) -> Option<Evaluation> {
        match self {
            SearchOutcome::Found(e) => Some(e),
            _ => None,
        }
    }

    pub fn found(&self) -> bool {
        matches!(self, SearchOutcome::Found(_))
    }
}

/// Searches for a T-evaluation on the table's term set, with optional extra
/// ground constraints.
pub fn search_evaluation(
    tsk: &[SkolemizedFormula],
    table: &Arc<AtomTable>,
    extra: &[Formula],
    mode: SearchMode,
    budget: &Budget,
) -> Result<SearchOutcome> {
    match mode {
        SearchMode::Sat => {
            let (cs, origins) = encode(tsk, table, extra, budget)?;
            match solve(&cs) {
                SatResult::Satisfiable(model) => {
                    let p = Evaluation::new(table.clone(), model)?;
                    debug_assert!(is_evaluation(&p));
                    Ok(SearchOutcome::Found(p))
                }
                SatResult::Unsatisfiable(proof) => {
                    debug_assert!(check_proof(&cs, &proof).is_ok());
                    Ok(SearchOutcome::RefutedBySat { clauses: cs, origins, proof })
                }
            }
        }
        SearchMode::Brute => brute_search(tsk, table, extra, budget),
    }
}

/// The oracle: enumerate assignments, filter by the evaluation conditions and
/// the available instances. Assignments violating reflexivity are rejected
/// wholesale by fixing those bits up front.
fn brute_search(
    tsk: &[SkolemizedFormula],
    table: &Arc<AtomTable>,
    extra: &[Formula],
    budget: &Budget,
) -> Result<SearchOutcome> {
    let num_atoms = table.num_atoms();
    if num_atoms > BRUTE_ATOM_CAP {
        return Err(Error::BruteRefused(num_atoms));
    }
    let mut constraint_clauses: Vec<Vec<Lit>> = Vec::new();
    for inst in available_instances(tsk, table.lambda(), budget)? {
        constraint_clauses.extend(ground_cnf(&inst.ground, table)?);
    }
    for g in extra {
        constraint_clauses.extend(ground_cnf(g, table)?);
    }

    let n = table.num_terms();
    let reflexive: Vec<usize> = (0..n).map(|i| table.eq_atom(i, i)).collect();
    let free: Vec<usize> = (0..num_atoms).filter(|a| !reflexive.contains(a)).collect();
    let mut scratch = Scratch::new(n);
    let mut bits = vec![false; num_atoms];
    let mut checked: u64 = 0;

    for mask in 0u64..(1u64 << free.len()) {
        checked += 1;
        bits.iter_mut().for_each(|b| *b = false);
        for &r in &reflexive {
            bits[r] = true;
        }
        for (k, &a) in free.iter().enumerate() {
            bits[a] = mask & (1 << k) != 0;
        }
        if violation_with(table, &bits, &mut scratch).is_some() {
            continue;
        }
        let ok = constraint_clauses.iter().all(|clause| {
            clause.iter().any(|l| if l.is_positive() { bits[l.var()] } else { !bits[l.var()] })
        });
        if ok {
            let p = Evaluation::new(table.clone(), bits)?;
            return Ok(SearchOutcome::Found(p));
        }
    }
    Ok(SearchOutcome::RefutedByEnumeration { assignments_checked: checked })
}

/// Searches for a T-evaluation on `lambda`; `None` when none exists.
pub fn find_evaluation(
    tsk: &[SkolemizedFormula],
    lambda: &TermSet,
    sig: &Signature,
    mode: SearchMode,
    budget: &Budget,
) -> Result<Option<Evaluation>> {
    let table = Arc::new(atoms_over(lambda, sig, budget)?);
    Ok(search_evaluation(tsk, &table, &[], mode, budget)?.evaluation())
}

/// Outcome of a forcing check.
#[derive(Debug, Clone)]
pub enum ForceOutcome {
    Forced,
    Counterexample(Evaluation),
}

impl ForceOutcome {
    pub fn is_forced(&self) -> bool {
        matches!(self, ForceOutcome::Forced)
    }
}

/// Does every T-evaluation on `lambda` satisfy `goal`? Checked by searching
/// for one that satisfies the negation.
pub fn force_check(
    tsk: &[SkolemizedFormula],
    lambda: &TermSet,
    sig: &Signature,
    goal: &Formula,
    budget: &Budget,
) -> Result<ForceOutcome> {
    if !goal.is_ground() || !goal.is_quantifier_free() {
        return Err(Error::NotOpenGround(render_formula(goal)));
    }
    let table = Arc::new(atoms_over(lambda, sig, budget)?);
    table.formula_atoms(goal)?;
    let negated = nnf(&Formula::not(goal.clone()));
    match search_evaluation(tsk, &table, &[negated], SearchMode::Sat, budget)? {
        SearchOutcome::Found(p) => Ok(ForceOutcome::Counterexample(p)),
        _ => Ok(ForceOutcome::Forced),
    }
}
