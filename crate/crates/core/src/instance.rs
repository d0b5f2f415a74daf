//! Ground Skolem instances and availability in a finite term set.
//!
//! An instance substitutes ground terms for the free variables of an open
//! Skolemized formula. It is *available* in a term set when every direct
//! argument of every atomic subformula (both sides of `=` and `<=` included)
//! is a member of the set; subterms of members need not themselves be
//! members. Substituted values range over the set itself, since only atoms
//! built from the set carry truth values.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::skolem::SkolemizedFormula;
use crate::syntax::{Formula, Term};

/// A finite set of ground terms, ordered structurally.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TermSet {
    elements: BTreeSet<Term>,
    pub label: Option<String>,
}

impl TermSet {
    pub fn new(terms: impl IntoIterator<Item = Term>) -> Result<TermSet> {
        let mut elements = BTreeSet::new();
        for t in terms {
            if let Some(v) = t.first_var() {
                return Err(Error::NotGround(v.to_string()));
            }
            elements.insert(t);
        }
        Ok(TermSet { elements, label: None })
    }

    pub fn with_label(mut self, label: &str) -> TermSet {
        self.label = Some(label.to_string());
        self
    }

    pub fn empty() -> TermSet {
        TermSet::default()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, t: &Term) -> bool {
        self.elements.contains(t)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Term> {
        self.elements.iter()
    }

    pub fn insert(&mut self, t: Term) -> Result<bool> {
        if let Some(v) = t.first_var() {
            return Err(Error::NotGround(v.to_string()));
        }
        Ok(self.elements.insert(t))
    }

    pub fn union(&self, other: &TermSet) -> TermSet {
        TermSet { elements: self.elements.union(&other.elements).cloned().collect(), label: None }
    }

    pub fn is_subset(&self, other: &TermSet) -> bool {
        self.elements.is_subset(&other.elements)
    }

    /// Position of a term in the set's order.
    pub fn index_of(&self, t: &Term) -> Option<usize> {
        self.elements.iter().position(|e| e == t)
    }
}

impl fmt::Display for TermSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, t) in self.elements.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{t}")?;
        }
        write!(f, "}}")
    }
}

/// A ground instance of an open Skolemized formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkolemInstance {
    /// Index of the source formula in the list it was instantiated from.
    pub source: usize,
    /// Total substitution for the source's free variables.
    pub substitution: BTreeMap<String, Term>,
    /// The substituted, variable-free open formula.
    pub ground: Formula,
}

impl fmt::Display for SkolemInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.ground.fmt(f)
    }
}

/// Simultaneous substitution of ground terms for all free variables.
pub fn instantiate(
    sf: &SkolemizedFormula,
    source: usize,
    subst: &BTreeMap<String, Term>,
) -> Result<SkolemInstance> {
    let mut ground = sf.open.clone();
    for v in &sf.free_vars {
        let t = subst.get(v).ok_or_else(|| Error::MissingSubstitute(v.clone()))?;
        if let Some(w) = t.first_var() {
            return Err(Error::NotGround(w.to_string()));
        }
        ground = ground.substitute(v, t);
    }
    debug_assert!(ground.is_ground());
    Ok(SkolemInstance { source, substitution: subst.clone(), ground })
}

/// True when every direct argument of every atom of the instance is a member
/// of the term set.
pub fn is_available(inst: &SkolemInstance, lambda: &TermSet) -> bool {
    formula_available(&inst.ground, lambda)
}

pub(crate) fn formula_available(ground: &Formula, lambda: &TermSet) -> bool {
    ground.atoms().iter().all(|atom| match atom {
        Formula::Atom(_, args) => args.iter().all(|t| lambda.contains(t)),
        _ => unreachable!(),
    })
}

/// All available instances: substitutions range over the set, results are
/// deduplicated by ground formula, and the order is deterministic (source
/// index, then substitution in the set's term order).
pub fn available_instances(
    tsk: &[SkolemizedFormula],
    lambda: &TermSet,
    budget: &Budget,
) -> Result<Vec<SkolemInstance>> {
    let terms: Vec<&Term> = lambda.iter().collect();
    let mut out = Vec::new();
    let mut seen: BTreeSet<Formula> = BTreeSet::new();
    for (source, sf) in tsk.iter().enumerate() {
        let vars = &sf.free_vars;
        if !vars.is_empty() && terms.is_empty() {
            continue;
        }
        let count = (terms.len() as u64)
            .checked_pow(vars.len() as u32)
            .ok_or(Error::BudgetExceeded {
                what: "substitutions",
                need: u64::MAX,
                limit: budget.max_substitutions,
            })?;
        budget.check("substitutions", count)?;
        let mut idx = vec![0usize; vars.len()];
        loop {
            let subst: BTreeMap<String, Term> =
                vars.iter().cloned().zip(idx.iter().map(|&i| terms[i].clone())).collect();
            let inst = instantiate(sf, source, &subst)?;
            if is_available(&inst, lambda) && seen.insert(inst.ground.clone()) {
                out.push(inst);
            }
            // Advance the substitution odometer, last variable fastest.
            let mut pos = vars.len();
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < terms.len() {
                    break;
                }
                idx[pos] = 0;
            }
            if idx.iter().all(|&i| i == 0) {
                break;
            }
            if vars.is_empty() {
                break;
            }
        }
    }
    Ok(out)
}
