//! A small deterministic CDCL solver over clause sets, producing resolution
//! refutations that an independent replayer can check.
//!
//! Decisions follow the fixed variable order (lowest index first) and assign
//! false first, so runs are reproducible. Conflict analysis resolves the
//! conflicting clause against reason clauses, latest assignment first, until
//! only decision literals remain; every resolution step is recorded, and on
//! unsatisfiable inputs the recorded steps end in the empty clause.

use std::fmt;

/// A literal: variable index plus sign. Encoded as `2*var + (negative as 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit(u32);

impl Lit {
    pub fn positive(var: usize) -> Lit {
        Lit((var as u32) << 1)
    }

    pub fn negative(var: usize) -> Lit {
        Lit(((var as u32) << 1) | 1)
    }

    pub fn new(var: usize, positive: bool) -> Lit {
        if positive {
            Lit::positive(var)
        } else {
            Lit::negative(var)
        }
    }

    pub fn var(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    pub fn negated(self) -> Lit {
        Lit(self.0 ^ 1)
    }

    /// DIMACS-style signed integer (1-based).
    pub fn code(self) -> i64 {
        let v = self.var() as i64 + 1;
        if self.is_positive() {
            v
        } else {
            -v
        }
    }

    pub fn from_code(code: i64) -> Option<Lit> {
        if code == 0 {
            return None;
        }
        let var = (code.unsigned_abs() as usize).checked_sub(1)?;
        Some(Lit::new(var, code > 0))
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code())
    }
}

pub type Clause = Vec<Lit>;

/// A CNF problem. Clauses keep their insertion order; that order is part of
/// certificate identity.
#[derive(Debug, Clone, Default)]
pub struct ClauseSet {
    pub num_vars: usize,
    pub clauses: Vec<Clause>,
}

impl ClauseSet {
    pub fn new(num_vars: usize) -> ClauseSet {
        ClauseSet { num_vars, clauses: Vec::new() }
    }

    /// Adds a clause, deduplicating literals; tautologies are dropped.
    pub fn push(&mut self, mut clause: Clause) {
        clause.sort();
        clause.dedup();
        if clause.windows(2).any(|w| w[0].var() == w[1].var()) {
            return;
        }
        self.clauses.push(clause);
    }
}

/// One resolution step: resolve `left` (containing the pivot positively) with
/// `right` (containing it negatively). Indices refer to input clauses first,
/// then to earlier steps in order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResolutionStep {
    pub left: usize,
    pub right: usize,
    pub pivot: usize,
}

/// A recorded refutation; the final step derives the empty clause.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ResolutionProof {
    pub steps: Vec<ResolutionStep>,
}

#[derive(Debug, Clone)]
pub enum SatResult {
    Satisfiable(Vec<bool>),
    Unsatisfiable(ResolutionProof),
}

impl SatResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, SatResult::Satisfiable(_))
    }
}

/// Replays a proof against a clause set, independently of the search. Errors
/// name the first failing step.
pub fn check_proof(cs: &ClauseSet, proof: &ResolutionProof) -> Result<(), String> {
    if proof.steps.is_empty() {
        return match cs.clauses.iter().position(|c| c.is_empty()) {
            Some(_) => Ok(()),
            None => Err("empty proof over a clause set with no empty clause".into()),
        };
    }
    let mut derived: Vec<Clause> = Vec::with_capacity(proof.steps.len());
    let fetch = |idx: usize, derived: &Vec<Clause>| -> Result<Clause, String> {
        if idx < cs.clauses.len() {
            Ok(cs.clauses[idx].clone())
        } else {
            derived
                .get(idx - cs.clauses.len())
                .cloned()
                .ok_or_else(|| format!("step references clause {idx} before it is derived"))
        }
    };
    for (n, step) in proof.steps.iter().enumerate() {
        let left = fetch(step.left, &derived)?;
        let right = fetch(step.right, &derived)?;
        let pos = Lit::positive(step.pivot);
        let neg = Lit::negative(step.pivot);
        if !left.contains(&pos) {
            return Err(format!("step {n}: clause {} lacks literal {}", step.left, pos));
        }
        if !right.contains(&neg) {
            return Err(format!("step {n}: clause {} lacks literal {}", step.right, neg));
        }
        let mut resolvent: Clause = left.iter().copied().filter(|&l| l != pos).collect();
        for &l in right.iter().filter(|&&l| l != neg) {
            if resolvent.contains(&l.negated()) {
                return Err(format!("step {n}: tautological resolvent on {}", l.var()));
            }
            if !resolvent.contains(&l) {
                resolvent.push(l);
            }
        }
        resolvent.sort();
        derived.push(resolvent);
    }
    if derived.last().map(|c| c.is_empty()) == Some(true) {
        Ok(())
    } else {
        Err("final step does not derive the empty clause".into())
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Assign {
    Unassigned,
    True,
    False,
}

const DECISION: usize = usize::MAX;
const UNSET: usize = usize::MAX;

struct Solver {
    /// All clauses: input first, then resolvents, aligned with proof steps.
    clauses: Vec<Clause>,
    assign: Vec<Assign>,
    trail: Vec<Lit>,
    reason_of: Vec<usize>,
    level_of: Vec<usize>,
    trail_pos: Vec<usize>,
    decision_marks: Vec<usize>,
    watches: Vec<Vec<usize>>,
    proof: ResolutionProof,
    propagate_from: usize,
}

impl Solver {
    fn new(cs: &ClauseSet) -> Solver {
        let n = cs.num_vars;
        Solver {
            clauses: cs.clauses.clone(),
            assign: vec![Assign::Unassigned; n],
            trail: Vec::with_capacity(n),
            reason_of: vec![UNSET; n],
            level_of: vec![0; n],
            trail_pos: vec![UNSET; n],
            decision_marks: Vec::new(),
            watches: vec![Vec::new(); 2 * n.max(1)],
            proof: ResolutionProof::default(),
            propagate_from: 0,
        }
    }

    fn value(&self, lit: Lit) -> Assign {
        match self.assign[lit.var()] {
            Assign::Unassigned => Assign::Unassigned,
            Assign::True => {
                if lit.is_positive() {
                    Assign::True
                } else {
                    Assign::False
                }
            }
            Assign::False => {
                if lit.is_positive() {
                    Assign::False
                } else {
                    Assign::True
                }
            }
        }
    }

    fn watch_slot(lit: Lit) -> usize {
        (lit.var() << 1) | usize::from(lit.is_positive())
    }

    fn enqueue(&mut self, lit: Lit, reason: usize) -> bool {
        match self.value(lit) {
            Assign::True => true,
            Assign::False => false,
            Assign::Unassigned => {
                let v = lit.var();
                self.assign[v] = if lit.is_positive() { Assign::True } else { Assign::False };
                self.reason_of[v] = reason;
                self.level_of[v] = self.decision_marks.len();
                self.trail_pos[v] = self.trail.len();
                self.trail.push(lit);
                true
            }
        }
    }

    /// Watches two literals per clause; unit clauses enqueue immediately.
    /// Returns a conflicting clause if attachment already fails.
    fn attach(&mut self, idx: usize) -> Option<usize> {
        match self.clauses[idx].len() {
            0 => Some(idx),
            1 => {
                let lit = self.clauses[idx][0];
                if self.enqueue(lit, idx) {
                    None
                } else {
                    Some(idx)
                }
            }
            _ => {
                let (a, b) = (self.clauses[idx][0], self.clauses[idx][1]);
                self.watches[Self::watch_slot(a)].push(idx);
                self.watches[Self::watch_slot(b)].push(idx);
                None
            }
        }
    }

    fn propagate(&mut self) -> Option<usize> {
        while self.propagate_from < self.trail.len() {
            let lit = self.trail[self.propagate_from];
            self.propagate_from += 1;
            let falsified = lit.negated();
            let slot = Self::watch_slot(falsified);
            let mut i = 0;
            while i < self.watches[slot].len() {
                let cidx = self.watches[slot][i];
                if self.clauses[cidx][0] == falsified {
                    self.clauses[cidx].swap(0, 1);
                }
                if self.value(self.clauses[cidx][0]) == Assign::True {
                    i += 1;
                    continue;
                }
                let mut moved = false;
                for k in 2..self.clauses[cidx].len() {
                    if self.value(self.clauses[cidx][k]) != Assign::False {
                        self.clauses[cidx].swap(1, k);
                        let new_slot = Self::watch_slot(self.clauses[cidx][1]);
                        self.watches[new_slot].push(cidx);
                        self.watches[slot].swap_remove(i);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                let first = self.clauses[cidx][0];
                if !self.enqueue(first, cidx) {
                    return Some(cidx);
                }
                i += 1;
            }
        }
        None
    }

    /// Resolves out propagated literals, latest assignment first, until only
    /// decision literals remain. Returns the index of the final clause.
    fn analyze(&mut self, conflict: usize) -> usize {
        let mut current = conflict;
        loop {
            let clause = &self.clauses[current];
            let mut best: Option<(Lit, usize, usize)> = None;
            for &l in clause {
                let v = l.var();
                debug_assert!(self.value(l) == Assign::False);
                let reason = self.reason_of[v];
                if reason != DECISION && reason != UNSET {
                    let pos = self.trail_pos[v];
                    if best.map(|(_, _, p)| pos > p).unwrap_or(true) {
                        best = Some((l, reason, pos));
                    }
                }
            }
            let Some((lit, reason, _)) = best else {
                return current;
            };
            let (pos_idx, neg_idx) =
                if lit.is_positive() { (current, reason) } else { (reason, current) };
            let pivot = lit.var();
            let left = &self.clauses[pos_idx];
            let right = &self.clauses[neg_idx];
            let mut resolvent: Clause =
                left.iter().copied().filter(|&l| l != Lit::positive(pivot)).collect();
            for &l in right.iter().filter(|&&l| l != Lit::negative(pivot)) {
                if !resolvent.contains(&l) {
                    resolvent.push(l);
                }
            }
            resolvent.sort();
            self.proof.steps.push(ResolutionStep { left: pos_idx, right: neg_idx, pivot });
            self.clauses.push(resolvent);
            current = self.clauses.len() - 1;
        }
    }

    /// Level to jump back to so that the learned all-decision clause asserts:
    /// the second-highest decision level among its literals.
    fn backjump_level(&self, clause: &Clause) -> usize {
        let mut levels: Vec<usize> = clause.iter().map(|l| self.level_of[l.var()]).collect();
        levels.sort_unstable();
        levels.dedup();
        match levels.len() {
            0 => 0,
            1 => levels[0].saturating_sub(1),
            n => levels[n - 2],
        }
    }

    fn undo_to(&mut self, level: usize) {
        while self.decision_marks.len() > level {
            let mark = self.decision_marks.pop().unwrap();
            while self.trail.len() > mark {
                let lit = self.trail.pop().unwrap();
                let v = lit.var();
                self.assign[v] = Assign::Unassigned;
                self.reason_of[v] = UNSET;
                self.trail_pos[v] = UNSET;
            }
        }
        self.propagate_from = self.propagate_from.min(self.trail.len());
    }

    fn handle_conflict(&mut self, conflict: usize) -> Result<(), ()> {
        let learned = self.analyze(conflict);
        if self.clauses[learned].is_empty() {
            return Err(());
        }
        let level = self.backjump_level(&self.clauses[learned]);
        self.undo_to(level);
        // All literals of the learned clause negate decisions at pairwise
        // distinct levels, so exactly the deepest one is now unassigned.
        let clause = self.clauses[learned].clone();
        let open: Vec<Lit> =
            clause.iter().copied().filter(|&l| self.value(l) == Assign::Unassigned).collect();
        debug_assert_eq!(open.len(), 1, "learned clause must assert after backjump");
        if self.enqueue(open[0], learned) {
            Ok(())
        } else {
            Err(())
        }
    }

    fn solve(mut self) -> SatResult {
        for idx in 0..self.clauses.len() {
            if let Some(conflict) = self.attach(idx) {
                let final_idx = self.analyze(conflict);
                debug_assert!(self.clauses[final_idx].is_empty());
                return SatResult::Unsatisfiable(self.proof);
            }
        }
        loop {
            if let Some(conflict) = self.propagate() {
                if self.handle_conflict(conflict).is_err() {
                    return SatResult::Unsatisfiable(self.proof);
                }
                continue;
            }
            match self.assign.iter().position(|a| *a == Assign::Unassigned) {
                None => {
                    let model = self.assign.iter().map(|a| *a == Assign::True).collect();
                    return SatResult::Satisfiable(model);
                }
                Some(var) => {
                    self.decision_marks.push(self.trail.len());
                    // False-first keeps searches reproducible.
                    let ok = self.enqueue(Lit::negative(var), DECISION);
                    debug_assert!(ok);
                }
            }
        }
    }
}

/// Solves a clause set; on unsatisfiable inputs the returned proof replays
/// via [`check_proof`].
pub fn solve(cs: &ClauseSet) -> SatResult {
    Solver::new(cs).solve()
}
