//! The fixture corpus: named replay cases with expected verdicts, loaded
//! from a manifest and run in parallel with a deterministic report order.

use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::Deserialize;

use herbrand_core::budget::Budget;
use herbrand_core::engine::{check_certificate, prove, ProveStrategy};
use herbrand_core::error::{Error, Result};
use herbrand_core::eval::{
    atoms_over, force_check, search_evaluation, t_evaluation_violation, validate_evaluation,
    Evaluation, ForceOutcome, SearchMode,
};
use herbrand_core::syntax::render_formula;

use crate::session::Session;

#[derive(Debug, Clone, Deserialize)]
pub struct Manifest {
    pub fixtures: Vec<Fixture>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct Fixture {
    pub name: String,
    /// One of `check-eval`, `find-eval`, `force`, `prove`.
    pub op: String,
    pub theory: String,
    #[serde(default)]
    pub goal: Option<String>,
    #[serde(default)]
    pub lambda: Option<String>,
    #[serde(default)]
    pub eval: Option<String>,
    /// Search modes for `find-eval`; all must agree. Defaults to both when
    /// the table is small enough, else SAT only.
    #[serde(default)]
    pub modes: Option<Vec<String>>,
    /// Expected verdict: VALID, INVALID, SAT, UNSAT, FORCED, COUNTEREXAMPLE,
    /// PROVED, UNKNOWN.
    pub expect: String,
    /// Expected detail, e.g. the violated instance of an INVALID verdict.
    #[serde(default)]
    pub detail: Option<String>,
    /// Provenance note; carried into the report.
    #[serde(default)]
    pub note: Option<String>,
    #[serde(default)]
    pub seed_lambda: Option<String>,
    #[serde(default)]
    pub max_level: Option<u64>,
}

#[derive(Debug, Clone)]
pub struct FixtureReport {
    pub name: String,
    pub passed: bool,
    pub expected: String,
    pub got: String,
    pub detail: Option<String>,
    pub note: Option<String>,
    pub millis: u128,
}

pub fn load_manifest(dir: &Path) -> Result<Manifest> {
    let path = dir.join("manifest.json");
    let text = std::fs::read_to_string(&path).map_err(|e| Error::Parse {
        line: 0,
        col: 0,
        msg: format!("cannot read {}: {e}", path.display()),
    })?;
    serde_json::from_str(&text)
        .map_err(|e| Error::Parse { line: 0, col: 0, msg: format!("bad manifest: {e}") })
}

fn verdict(dir: &Path, f: &Fixture, budget: &Budget) -> Result<(String, Option<String>)> {
    let theory_path: PathBuf = dir.join(&f.theory);
    // Forcing goals are ground formulas over the Skolemized language and are
    // parsed after loading; sentence goals join the refutation task now.
    let sentence_goal = match f.op.as_str() {
        "find-eval" | "prove" => f.goal.as_deref(),
        _ => None,
    };
    let session = Session::load(&theory_path, sentence_goal, *budget)?;
    let tsk = session.refutation_task();
    let lambda = match &f.lambda {
        Some(rel) => Some(session.load_lambda(&dir.join(rel))?),
        None => None,
    };
    match f.op.as_str() {
        "check-eval" => {
            let lambda = lambda.ok_or_else(|| missing("lambda"))?;
            let eval_rel = f.eval.as_ref().ok_or_else(|| missing("eval"))?;
            let atoms = session.load_true_atoms(&dir.join(eval_rel))?;
            let table = Arc::new(atoms_over(&lambda, &session.theory.signature, budget)?);
            let p = Evaluation::from_true_atoms(table, &atoms)?;
            if let Err(v) = validate_evaluation(&p) {
                return Ok(("INVALID".into(), Some(v.to_string())));
            }
            match t_evaluation_violation(&p, &tsk, budget)? {
                None => Ok(("VALID".into(), None)),
                Some(inst) => Ok(("INVALID".into(), Some(render_formula(&inst.ground)))),
            }
        }
        "find-eval" => {
            let lambda = lambda.ok_or_else(|| missing("lambda"))?;
            let table = Arc::new(atoms_over(&lambda, &session.theory.signature, budget)?);
            let modes = match &f.modes {
                Some(ms) => ms.clone(),
                None => vec!["sat".into()],
            };
            let mut verdicts = Vec::new();
            for m in &modes {
                let mode = match m.as_str() {
                    "sat" => SearchMode::Sat,
                    "brute" => SearchMode::Brute,
                    other => return Err(Error::Parse { line: 0, col: 0, msg: format!("bad mode {other}") }),
                };
                let found = search_evaluation(&tsk, &table, &[], mode, budget)?.found();
                verdicts.push(found);
            }
            if verdicts.windows(2).any(|w| w[0] != w[1]) {
                return Ok(("DISAGREE".into(), Some(format!("{verdicts:?}"))));
            }
            Ok((if verdicts[0] { "SAT" } else { "UNSAT" }.into(), None))
        }
        "force" => {
            let lambda = lambda.ok_or_else(|| missing("lambda"))?;
            let goal_text = f.goal.as_ref().ok_or_else(|| missing("goal"))?;
            // Forcing goals are ground open formulas, possibly mentioning
            // Skolem symbols; reload them through the registry.
            let goal = session.parse_ground(goal_text)?;
            let tsk_theory = session.theory_sk.clone();
            match force_check(&tsk_theory, &lambda, &session.theory.signature, &goal, budget)? {
                ForceOutcome::Forced => Ok(("FORCED".into(), None)),
                ForceOutcome::Counterexample(_) => Ok(("COUNTEREXAMPLE".into(), None)),
            }
        }
        "prove" => {
            let goal_text = f.goal.as_ref().ok_or_else(|| missing("goal"))?;
            let goal = herbrand_core::syntax::parse_formula(goal_text, &session.theory.signature)?;
            let mut strategy = ProveStrategy {
                max_level: f.max_level.unwrap_or(2),
                ..ProveStrategy::default()
            };
            if let Some(rel) = &f.seed_lambda {
                strategy.seeds.push(session.load_lambda(&dir.join(rel))?);
            }
            match prove(&session.theory, &goal, &strategy, budget)? {
                herbrand_core::engine::ProveOutcome::Proved(cert) => {
                    check_certificate(&cert, budget)?;
                    Ok(("PROVED".into(), Some(format!("{} terms", cert.lambda.len()))))
                }
                herbrand_core::engine::ProveOutcome::Unknown(why) => Ok(("UNKNOWN".into(), Some(why))),
            }
        }
        other => Err(Error::Parse { line: 0, col: 0, msg: format!("unknown fixture op `{other}`") }),
    }
}

fn missing(field: &str) -> Error {
    Error::Parse { line: 0, col: 0, msg: format!("fixture is missing the `{field}` field") }
}

pub fn run_fixture(dir: &Path, f: &Fixture, budget: &Budget) -> FixtureReport {
    let start = Instant::now();
    let (got, detail) = match verdict(dir, f, budget) {
        Ok(v) => v,
        Err(e) => ("ERROR".to_string(), Some(e.to_string())),
    };
    let mut passed = got == f.expect;
    if passed {
        if let (Some(want), got_detail) = (&f.detail, &detail) {
            passed = got_detail.as_deref() == Some(want.as_str());
        }
    }
    FixtureReport {
        name: f.name.clone(),
        passed,
        expected: f.expect.clone(),
        got,
        detail,
        note: f.note.clone(),
        millis: start.elapsed().as_millis(),
    }
}

/// Runs fixtures in parallel; the report is ordered by fixture name.
pub fn run_all(dir: &Path, manifest: &Manifest, budget: &Budget, filter: Option<&str>) -> Vec<FixtureReport> {
    let selected: Vec<&Fixture> = manifest
        .fixtures
        .iter()
        .filter(|f| filter.map(|n| f.name == n).unwrap_or(true))
        .collect();
    let mut reports: Vec<FixtureReport> =
        selected.par_iter().map(|f| run_fixture(dir, f, budget)).collect();
    reports.sort_by(|a, b| a.name.cmp(&b.name));
    reports
}
