//! Abstract syntax for first-order terms, formulas, signatures and theories,
//! together with the concrete text grammar used by theory files and the CLI.

mod parse;
mod print;

pub use parse::{parse_formula, parse_formula_with_free, parse_signature, parse_term, parse_theory_file};

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// Equality is built in and not part of the declared predicate list.
pub const EQ: &str = "=";

/// A first-order signature: function symbols (constants are 0-ary functions)
/// and predicate symbols. `=` is always present.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    functions: Vec<(String, usize)>,
    predicates: Vec<(String, usize)>,
}

impl Signature {
    pub fn new(functions: Vec<(String, usize)>, predicates: Vec<(String, usize)>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for (name, _) in functions.iter().chain(predicates.iter()) {
            if name == EQ {
                return Err(Error::BadSignature("`=` is built in and cannot be declared".into()));
            }
            if is_reserved_skolem_name(name) {
                return Err(Error::BadSignature(format!("`{name}` is reserved for Skolem symbols")));
            }
            if !seen.insert(name.clone()) {
                return Err(Error::BadSignature(format!("duplicate symbol `{name}`")));
            }
        }
        let sig = Signature { functions, predicates };
        if sig.constants().next().is_none() {
            return Err(Error::BadSignature("at least one constant is required".into()));
        }
        Ok(sig)
    }

    pub fn functions(&self) -> &[(String, usize)] {
        &self.functions
    }

    pub fn predicates(&self) -> &[(String, usize)] {
        &self.predicates
    }

    pub fn constants(&self) -> impl Iterator<Item = &str> {
        self.functions.iter().filter(|(_, a)| *a == 0).map(|(n, _)| n.as_str())
    }

    pub fn function_arity(&self, name: &str) -> Option<usize> {
        self.functions.iter().find(|(n, _)| n == name).map(|(_, a)| *a)
    }

    /// Arity of a predicate; `=` is always binary.
    pub fn predicate_arity(&self, name: &str) -> Option<usize> {
        if name == EQ {
            return Some(2);
        }
        self.predicates.iter().find(|(n, _)| n == name).map(|(_, a)| *a)
    }

    pub fn is_predicate(&self, name: &str) -> bool {
        self.predicate_arity(name).is_some()
    }

    /// The declaration line this signature parses back from.
    pub fn render(&self) -> String {
        let mut out = String::from("signature:");
        for (name, arity) in &self.functions {
            out.push_str(&format!(" {name}/{arity}"));
        }
        out.push_str(" ;");
        for (name, arity) in &self.predicates {
            out.push_str(&format!(" {name}/{arity}"));
        }
        out
    }

    /// The signature of arithmetic `0, s, +, *, <=` used throughout the corpus.
    pub fn arithmetic() -> Signature {
        Signature::new(
            vec![
                ("0".into(), 0),
                ("s".into(), 1),
                ("+".into(), 2),
                ("*".into(), 2),
            ],
            vec![("<=".into(), 2)],
        )
        .expect("fixed signature is valid")
    }
}

pub fn is_reserved_skolem_name(name: &str) -> bool {
    name.strip_prefix("sk").is_some_and(|rest| !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()))
}

/// Extra function symbols (the Skolem registry) that a parser may resolve
/// against in addition to a signature.
pub trait ExtraSymbols {
    fn extra_function_arity(&self, name: &str) -> Option<usize>;
}

/// No extra symbols.
pub struct NoExtra;

impl ExtraSymbols for NoExtra {
    fn extra_function_arity(&self, _name: &str) -> Option<usize> {
        None
    }
}

/// A first-order term. Ground terms contain no `Var` node.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.into())
    }

    pub fn constant(name: &str) -> Term {
        Term::App(name.into(), vec![])
    }

    pub fn app(name: &str, args: Vec<Term>) -> Term {
        Term::App(name.into(), args)
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    pub fn first_var(&self) -> Option<&str> {
        match self {
            Term::Var(v) => Some(v),
            Term::App(_, args) => args.iter().find_map(Term::first_var),
        }
    }

    /// The term and all its proper subterms.
    pub fn subterms(&self) -> BTreeSet<Term> {
        let mut out = BTreeSet::new();
        self.collect_subterms(&mut out);
        out
    }

    fn collect_subterms(&self, out: &mut BTreeSet<Term>) {
        out.insert(self.clone());
        if let Term::App(_, args) = self {
            for a in args {
                a.collect_subterms(out);
            }
        }
    }

    /// Replaces every occurrence of the variable `var` by `by`.
    pub fn substitute(&self, var: &str, by: &Term) -> Term {
        match self {
            Term::Var(v) if v == var => by.clone(),
            Term::Var(_) => self.clone(),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| a.substitute(var, by)).collect()),
        }
    }

    pub fn vars_in_order(&self, out: &mut Vec<String>) {
        match self {
            Term::Var(v) => {
                if !out.iter().any(|x| x == v) {
                    out.push(v.clone());
                }
            }
            Term::App(_, args) => {
                for a in args {
                    a.vars_in_order(out);
                }
            }
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print::render_term(self))
    }
}

/// A first-order formula over a signature plus generated Skolem symbols.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(String, Vec<Term>),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
}

impl Formula {
    pub fn atom(pred: &str, args: Vec<Term>) -> Formula {
        Formula::Atom(pred.into(), args)
    }

    pub fn eq(lhs: Term, rhs: Term) -> Formula {
        Formula::Atom(EQ.into(), vec![lhs, rhs])
    }

    // An associated constructor like the others, not an `ops::Not` impl.
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn forall(v: &str, f: Formula) -> Formula {
        Formula::Forall(v.into(), Box::new(f))
    }

    pub fn exists(v: &str, f: Formula) -> Formula {
        Formula::Exists(v.into(), Box::new(f))
    }

    /// Free variables in order of first (leftmost) occurrence, no duplicates.
    pub fn free_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.free_vars_into(&mut Vec::new(), &mut out);
        out
    }

    fn free_vars_into(&self, bound: &mut Vec<String>, out: &mut Vec<String>) {
        match self {
            Formula::Atom(_, args) => {
                let mut vars = Vec::new();
                for a in args {
                    a.vars_in_order(&mut vars);
                }
                for v in vars {
                    if !bound.contains(&v) && !out.contains(&v) {
                        out.push(v);
                    }
                }
            }
            Formula::Not(f) => f.free_vars_into(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.free_vars_into(bound, out);
                b.free_vars_into(bound, out);
            }
            Formula::Forall(v, f) | Formula::Exists(v, f) => {
                bound.push(v.clone());
                f.free_vars_into(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Formula::Atom(_, args) => args.iter().all(Term::is_ground),
            Formula::Not(f) => f.is_ground(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => a.is_ground() && b.is_ground(),
            Formula::Forall(..) | Formula::Exists(..) => false,
        }
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::Atom(..) => true,
            Formula::Not(f) => f.is_quantifier_free(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.is_quantifier_free() && b.is_quantifier_free()
            }
            Formula::Forall(..) | Formula::Exists(..) => false,
        }
    }

    /// No variable occurs both free and bound, and distinct quantifier
    /// occurrences bind distinct variables.
    pub fn is_rectified(&self) -> bool {
        let free: BTreeSet<String> = self.free_vars().into_iter().collect();
        let mut bound_seen = BTreeSet::new();
        self.rectified_walk(&free, &mut bound_seen)
    }

    fn rectified_walk(&self, free: &BTreeSet<String>, bound_seen: &mut BTreeSet<String>) -> bool {
        match self {
            Formula::Atom(..) => true,
            Formula::Not(f) => f.rectified_walk(free, bound_seen),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.rectified_walk(free, bound_seen) && b.rectified_walk(free, bound_seen)
            }
            Formula::Forall(v, f) | Formula::Exists(v, f) => {
                if free.contains(v) || !bound_seen.insert(v.clone()) {
                    return false;
                }
                f.rectified_walk(free, bound_seen)
            }
        }
    }

    /// Capture-free only when substitutes are ground, which is the only use here.
    pub fn substitute(&self, var: &str, by: &Term) -> Formula {
        match self {
            Formula::Atom(p, args) => Formula::Atom(p.clone(), args.iter().map(|t| t.substitute(var, by)).collect()),
            Formula::Not(f) => Formula::not(f.substitute(var, by)),
            Formula::And(a, b) => Formula::and(a.substitute(var, by), b.substitute(var, by)),
            Formula::Or(a, b) => Formula::or(a.substitute(var, by), b.substitute(var, by)),
            Formula::Implies(a, b) => Formula::implies(a.substitute(var, by), b.substitute(var, by)),
            Formula::Forall(v, f) if v != var => Formula::forall(v, f.substitute(var, by)),
            Formula::Exists(v, f) if v != var => Formula::exists(v, f.substitute(var, by)),
            Formula::Forall(..) | Formula::Exists(..) => self.clone(),
        }
    }

    /// Every atomic subformula, left to right.
    pub fn atoms(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        self.atoms_into(&mut out);
        out
    }

    fn atoms_into<'a>(&'a self, out: &mut Vec<&'a Formula>) {
        match self {
            Formula::Atom(..) => out.push(self),
            Formula::Not(f) => f.atoms_into(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.atoms_into(out);
                b.atoms_into(out);
            }
            Formula::Forall(_, f) | Formula::Exists(_, f) => f.atoms_into(out),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
            Formula::Not(f) => 1 + f.size(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => 1 + a.size() + b.size(),
            Formula::Forall(_, f) | Formula::Exists(_, f) => 1 + f.size(),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print::render_formula(self))
    }
}

/// Renders a formula in the concrete grammar; `parse_formula` of the result
/// reproduces the tree.
pub fn render_formula(f: &Formula) -> String {
    print::render_formula(f)
}

pub fn render_term(t: &Term) -> String {
    print::render_term(t)
}

/// A named list of axioms, each a sentence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Theory {
    pub name: String,
    pub signature: Signature,
    pub axioms: Vec<Formula>,
}

impl Theory {
    pub fn new(name: &str, signature: Signature, axioms: Vec<Formula>) -> Result<Self> {
        for ax in &axioms {
            let fv = ax.free_vars();
            if !fv.is_empty() {
                return Err(Error::OpenAxiom(render_formula(ax), fv.join(", ")));
            }
        }
        Ok(Theory { name: name.into(), signature, axioms })
    }
}

/// Checks that all applications match declared arities and that every symbol
/// is known; used after hand-built construction (the parser enforces this on
/// its own).
pub fn check_term(t: &Term, sig: &Signature, extra: &dyn ExtraSymbols) -> Result<()> {
    match t {
        Term::Var(_) => Ok(()),
        Term::App(f, args) => {
            let arity = sig
                .function_arity(f)
                .or_else(|| extra.extra_function_arity(f))
                .ok_or_else(|| Error::UnknownSymbol(f.clone()))?;
            if arity != args.len() {
                return Err(Error::ArityMismatch { name: f.clone(), declared: arity, given: args.len() });
            }
            args.iter().try_for_each(|a| check_term(a, sig, extra))
        }
    }
}
