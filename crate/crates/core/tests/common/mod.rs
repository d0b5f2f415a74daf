//! Brute-force finite-model semantics used as an independent oracle by the
//! integration suites: enumerate every interpretation of a small signature
//! over domains of bounded size and evaluate formulas directly.

use std::collections::BTreeMap;

use herbrand_core::syntax::{Formula, Signature, Term};

/// A finite first-order structure. Function tables map argument tuples
/// (mixed-radix encoded) to elements; predicate tables map tuples to truth.
#[derive(Debug, Clone)]
pub struct FiniteModel {
    pub size: usize,
    pub functions: BTreeMap<String, Vec<usize>>,
    pub predicates: BTreeMap<String, Vec<bool>>,
}

fn tuple_index(args: &[usize], size: usize) -> usize {
    args.iter().fold(0, |acc, &a| acc * size + a)
}

impl FiniteModel {
    pub fn eval_term(&self, t: &Term, env: &BTreeMap<String, usize>) -> usize {
        match t {
            Term::Var(v) => env[v],
            Term::App(f, args) => {
                let vals: Vec<usize> = args.iter().map(|a| self.eval_term(a, env)).collect();
                self.functions[f][tuple_index(&vals, self.size)]
            }
        }
    }

    pub fn eval(&self, f: &Formula, env: &mut BTreeMap<String, usize>) -> bool {
        match f {
            Formula::Atom(p, args) => {
                let vals: Vec<usize> = args.iter().map(|a| self.eval_term(a, env)).collect();
                if p == "=" {
                    vals[0] == vals[1]
                } else {
                    self.predicates[p][tuple_index(&vals, self.size)]
                }
            }
            Formula::Not(g) => !self.eval(g, env),
            Formula::And(a, b) => self.eval(a, env) && self.eval(b, env),
            Formula::Or(a, b) => self.eval(a, env) || self.eval(b, env),
            Formula::Implies(a, b) => !self.eval(a, env) || self.eval(b, env),
            Formula::Forall(v, body) => {
                let saved = env.get(v).copied();
                let ok = (0..self.size).all(|d| {
                    env.insert(v.clone(), d);
                    self.eval(body, env)
                });
                restore(env, v, saved);
                ok
            }
            Formula::Exists(v, body) => {
                let saved = env.get(v).copied();
                let ok = (0..self.size).any(|d| {
                    env.insert(v.clone(), d);
                    self.eval(body, env)
                });
                restore(env, v, saved);
                ok
            }
        }
    }

    pub fn satisfies_sentence(&self, f: &Formula) -> bool {
        self.eval(f, &mut BTreeMap::new())
    }
}

fn restore(env: &mut BTreeMap<String, usize>, v: &str, saved: Option<usize>) {
    match saved {
        Some(x) => {
            env.insert(v.to_string(), x);
        }
        None => {
            env.remove(v);
        }
    }
}

/// Every structure over the given symbol lists with the given domain size.
/// The count is the product of `size^(size^arity)` over functions and
/// `2^(size^arity)` over predicates, so keep signatures tiny.
pub fn enumerate_structures(
    functions: &[(String, usize)],
    predicates: &[(String, usize)],
    size: usize,
) -> Vec<FiniteModel> {
    let mut models = vec![FiniteModel {
        size,
        functions: BTreeMap::new(),
        predicates: BTreeMap::new(),
    }];
    for (name, arity) in functions {
        let cells = size.pow(*arity as u32);
        let mut expanded = Vec::new();
        for m in &models {
            let mut tables = vec![Vec::new()];
            for _ in 0..cells {
                let mut next = Vec::new();
                for t in &tables {
                    for v in 0..size {
                        let mut t2 = t.clone();
                        t2.push(v);
                        next.push(t2);
                    }
                }
                tables = next;
            }
            for table in tables {
                let mut m2 = m.clone();
                m2.functions.insert(name.clone(), table);
                expanded.push(m2);
            }
        }
        models = expanded;
    }
    for (name, arity) in predicates {
        let cells = size.pow(*arity as u32);
        let mut expanded = Vec::new();
        for m in &models {
            for mask in 0u64..(1 << cells) {
                let table: Vec<bool> = (0..cells).map(|i| mask & (1 << i) != 0).collect();
                let mut m2 = m.clone();
                m2.predicates.insert(name.clone(), table);
                expanded.push(m2);
            }
        }
        models = expanded;
    }
    models
}

/// Every model of the signature with the given domain size.
pub fn enumerate_models(sig: &Signature, size: usize) -> Vec<FiniteModel> {
    enumerate_structures(sig.functions(), sig.predicates(), size)
}
