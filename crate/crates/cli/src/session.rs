//! A loaded proving session: theory file, optional goal, Skolemization state
//! and budgets.

use std::fs;
use std::path::Path;

use herbrand_core::budget::Budget;
use herbrand_core::error::{Error, Result};
use herbrand_core::instance::TermSet;
use herbrand_core::skolem::{skolemize, skolemize_theory, SkolemRegistry, SkolemizedFormula};
use herbrand_core::syntax::{
    parse_formula, parse_formula_with_free, parse_term, parse_theory_file, Formula, Theory,
};

pub struct Session {
    pub theory: Theory,
    pub registry: SkolemRegistry,
    /// Skolemized axioms, in axiom order.
    pub theory_sk: Vec<SkolemizedFormula>,
    /// The goal sentence and its Skolemized negation, when given.
    pub goal: Option<(Formula, SkolemizedFormula)>,
    pub budget: Budget,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Parse {
        line: 0,
        col: 0,
        msg: format!("cannot read {}: {e}", path.display()),
    })
}

impl Session {
    pub fn load(theory_path: &Path, goal: Option<&str>, budget: Budget) -> Result<Session> {
        let name = theory_path
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("theory")
            .to_string();
        let theory = parse_theory_file(&name, &read(theory_path)?)?;
        Self::from_theory(theory, goal, budget)
    }

    pub fn from_theory(theory: Theory, goal: Option<&str>, budget: Budget) -> Result<Session> {
        let mut registry = SkolemRegistry::new();
        let theory_sk = skolemize_theory(&theory, &mut registry);
        let goal = match goal {
            None => None,
            Some(text) => {
                let phi = parse_formula(text, &theory.signature)?;
                let neg = skolemize(&Formula::not(phi.clone()), &mut registry);
                Some((phi, neg))
            }
        };
        Ok(Session { theory, registry, theory_sk, goal, budget })
    }

    /// The formulas an evaluation must satisfy: the theory plus the negated
    /// goal when one is loaded.
    pub fn refutation_task(&self) -> Vec<SkolemizedFormula> {
        let mut all = self.theory_sk.clone();
        if let Some((_, neg)) = &self.goal {
            all.push(neg.clone());
        }
        all
    }

    /// Parses a term-set file: one ground term per line, `#` comments.
    /// Symbols may come from the signature or the session's registry.
    pub fn load_lambda(&self, path: &Path) -> Result<TermSet> {
        self.parse_lambda(&read(path)?)
    }

    pub fn parse_lambda(&self, text: &str) -> Result<TermSet> {
        let mut terms = Vec::new();
        for raw in text.lines() {
            let line = match raw.find('#') {
                Some(i) => &raw[..i],
                None => raw,
            };
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            terms.push(parse_term(line, &self.theory.signature, &self.registry)?);
        }
        TermSet::new(terms)
    }

    /// Parses a ground open formula (a forcing goal or an atom line).
    pub fn parse_ground(&self, text: &str) -> Result<Formula> {
        parse_formula_with_free(text, &self.theory.signature, &self.registry, &[])
    }

    /// Parses an evaluation file: the true atoms, one per line.
    pub fn load_true_atoms(&self, path: &Path) -> Result<Vec<Formula>> {
        let mut atoms = Vec::new();
        for raw in read(path)?.lines() {
            let line = match raw.find('#') {
                Some(i) => &raw[..i],
                None => raw,
            };
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            atoms.push(self.parse_ground(line)?);
        }
        Ok(atoms)
    }
}

/// Exit codes: 0 success, 1 mismatch or error, 2 budget/overflow.
pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::BudgetExceeded { .. }
        | Error::CeilingExceeded { .. }
        | Error::BruteRefused(_)
        | Error::TowerOverflow(_) => 2,
        _ => 1,
    }
}
