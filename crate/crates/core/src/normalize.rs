//! Rectified negation normal form.
//!
//! Negation normalization applies the six rewrite rules
//!
//! ```text
//! (A -> B)   ==> (~A | B)        ~~A        ==> A
//! ~(A | B)   ==> (~A & ~B)       ~(A & B)   ==> (~A | ~B)
//! ~forall x A ==> exists x ~A    ~exists x A ==> forall x ~A
//! ```
//!
//! outermost-first to a fixpoint. Rectification then renames bound variables
//! to `x1, x2, ...` in order of quantifier occurrence (leftmost-outermost);
//! free variables are never renamed. The composition is deterministic, so the
//! output is bit-identical across runs.

use crate::syntax::Formula;

/// A formula in rectified negation normal form: no `Implies`, negation only
/// directly on atoms, no variable both free and bound, distinct quantifier
/// occurrences binding distinct variables.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct RnnfFormula(pub(crate) Formula);

impl RnnfFormula {
    pub fn formula(&self) -> &Formula {
        &self.0
    }

    pub fn into_formula(self) -> Formula {
        self.0
    }
}

impl std::fmt::Display for RnnfFormula {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

pub fn is_nnf(f: &Formula) -> bool {
    match f {
        Formula::Atom(..) => true,
        Formula::Not(inner) => matches!(inner.as_ref(), Formula::Atom(..)),
        Formula::And(a, b) | Formula::Or(a, b) => is_nnf(a) && is_nnf(b),
        Formula::Implies(..) => false,
        Formula::Forall(_, body) | Formula::Exists(_, body) => is_nnf(body),
    }
}

/// One outermost-leftmost rewrite step; `None` at normal form.
fn step(f: &Formula) -> Option<Formula> {
    if let Some(g) = rule(f) {
        return Some(g);
    }
    match f {
        Formula::Atom(..) => None,
        Formula::Not(inner) => step(inner).map(Formula::not),
        Formula::And(a, b) => match step(a) {
            Some(a2) => Some(Formula::and(a2, b.as_ref().clone())),
            None => step(b).map(|b2| Formula::and(a.as_ref().clone(), b2)),
        },
        Formula::Or(a, b) => match step(a) {
            Some(a2) => Some(Formula::or(a2, b.as_ref().clone())),
            None => step(b).map(|b2| Formula::or(a.as_ref().clone(), b2)),
        },
        Formula::Implies(a, b) => match step(a) {
            Some(a2) => Some(Formula::implies(a2, b.as_ref().clone())),
            None => step(b).map(|b2| Formula::implies(a.as_ref().clone(), b2)),
        },
        Formula::Forall(v, body) => step(body).map(|b2| Formula::forall(v, b2)),
        Formula::Exists(v, body) => step(body).map(|b2| Formula::exists(v, b2)),
    }
}

fn rule(f: &Formula) -> Option<Formula> {
    match f {
        Formula::Implies(a, b) => Some(Formula::or(Formula::not(a.as_ref().clone()), b.as_ref().clone())),
        Formula::Not(inner) => match inner.as_ref() {
            Formula::Not(g) => Some(g.as_ref().clone()),
            Formula::Or(a, b) => {
                Some(Formula::and(Formula::not(a.as_ref().clone()), Formula::not(b.as_ref().clone())))
            }
            Formula::And(a, b) => {
                Some(Formula::or(Formula::not(a.as_ref().clone()), Formula::not(b.as_ref().clone())))
            }
            Formula::Forall(v, body) => Some(Formula::exists(v, Formula::not(body.as_ref().clone()))),
            Formula::Exists(v, body) => Some(Formula::forall(v, Formula::not(body.as_ref().clone()))),
            _ => None,
        },
        _ => None,
    }
}

/// Rank strictly decreasing under every rule (saturating; used only as a step
/// bound): atoms 1, `~A` doubles, `A -> B` costs `2R(A)+R(B)+2`.
fn rank(f: &Formula) -> u64 {
    match f {
        Formula::Atom(..) => 1,
        Formula::Not(a) => rank(a).saturating_mul(2),
        Formula::And(a, b) | Formula::Or(a, b) => rank(a).saturating_add(rank(b)).saturating_add(1),
        Formula::Implies(a, b) => rank(a)
            .saturating_mul(2)
            .saturating_add(rank(b))
            .saturating_add(2),
        Formula::Forall(_, a) | Formula::Exists(_, a) => rank(a).saturating_add(1),
    }
}

/// Negation normal form under the six rules, outermost-first to fixpoint.
pub fn nnf(f: &Formula) -> Formula {
    let bound = rank(f);
    let mut cur = f.clone();
    let mut steps: u64 = 0;
    while let Some(next) = step(&cur) {
        cur = next;
        steps += 1;
        assert!(steps <= bound, "negation normalization exceeded its termination rank");
    }
    cur
}

/// Renames every quantifier occurrence to `x1, x2, ...` in leftmost-outermost
/// order, skipping names that collide with free variables of `f`.
pub fn rectify(f: &Formula) -> Formula {
    let free = f.free_vars();
    let mut counter = 0usize;
    let mut fresh = move || loop {
        counter += 1;
        let name = format!("x{counter}");
        if !free.contains(&name) {
            return name;
        }
    };
    rename(f, &mut Vec::new(), &mut fresh)
}

fn rename(f: &Formula, env: &mut Vec<(String, String)>, fresh: &mut dyn FnMut() -> String) -> Formula {
    match f {
        Formula::Atom(p, args) => {
            Formula::Atom(p.clone(), args.iter().map(|t| rename_term(t, env)).collect())
        }
        Formula::Not(a) => Formula::not(rename(a, env, fresh)),
        Formula::And(a, b) => {
            let a2 = rename(a, env, fresh);
            let b2 = rename(b, env, fresh);
            Formula::and(a2, b2)
        }
        Formula::Or(a, b) => {
            let a2 = rename(a, env, fresh);
            let b2 = rename(b, env, fresh);
            Formula::or(a2, b2)
        }
        Formula::Implies(a, b) => {
            let a2 = rename(a, env, fresh);
            let b2 = rename(b, env, fresh);
            Formula::implies(a2, b2)
        }
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            let new = fresh();
            env.push((v.clone(), new.clone()));
            let body2 = rename(body, env, fresh);
            env.pop();
            if matches!(f, Formula::Forall(..)) {
                Formula::forall(&new, body2)
            } else {
                Formula::exists(&new, body2)
            }
        }
    }
}

fn rename_term(t: &crate::syntax::Term, env: &[(String, String)]) -> crate::syntax::Term {
    use crate::syntax::Term;
    match t {
        Term::Var(v) => {
            // Innermost binding wins.
            match env.iter().rev().find(|(old, _)| old == v) {
                Some((_, new)) => Term::Var(new.clone()),
                None => t.clone(),
            }
        }
        Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| rename_term(a, env)).collect()),
    }
}

/// Renames every quantifier to `prefix1, prefix2, ...` in leftmost-outermost
/// order, with no collision avoidance; callers must guarantee the prefix is
/// disjoint from the free variables.
pub(crate) fn canonical_bound_rename(f: &Formula, prefix: &str) -> Formula {
    let mut counter = 0usize;
    let prefix = prefix.to_string();
    let mut fresh = move || {
        counter += 1;
        format!("{prefix}{counter}")
    };
    rename(f, &mut Vec::new(), &mut fresh)
}

/// The rectified negation normal form of `f`.
pub fn rnnf(f: &Formula) -> RnnfFormula {
    let normalized = rectify(&nnf(f));
    debug_assert!(is_nnf(&normalized) && normalized.is_rectified());
    RnnfFormula(normalized)
}
