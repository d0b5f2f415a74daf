//! Command-line front end for the Herbrand provability engine.

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use serde_json::json;

use herbrand_cli::fixtures;
use herbrand_cli::report;
use herbrand_cli::session::{exit_code_for, Session};
use herbrand_core::budget::Budget;
use herbrand_core::coding::CodingScheme;
use herbrand_core::engine::{
    check_certificate, grow_universe, prove, CodeThreshold, ProveOutcome, ProveStrategy,
    UniverseLevel,
};
use herbrand_core::error::Error;
use herbrand_core::eval::{
    atoms_over, force_check, search_evaluation, t_evaluation_violation, validate_evaluation,
    Evaluation, ForceOutcome, SearchMode,
};
use herbrand_core::instance::available_instances;
use herbrand_core::normalize::rnnf;
use herbrand_core::skolem::skolemize_induction;
use herbrand_core::syntax::{parse_formula, render_formula, render_term};

#[derive(Parser)]
#[command(name = "herbrand", about = "Skolemization, evaluations and Herbrand provability at desk scale", version)]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Cap on atom-table sizes.
    #[arg(long, global = true, default_value_t = 20_000)]
    budget_atoms: u64,

    /// Cap on term-set sizes during closure.
    #[arg(long, global = true, default_value_t = 100_000)]
    budget_terms: u64,

    /// Cap on substitutions enumerated per open formula.
    #[arg(long, global = true, default_value_t = 5_000_000)]
    budget_subst: u64,

    /// Bit ceiling for materialized codes.
    #[arg(long, global = true, default_value_t = 1 << 26)]
    bit_ceiling: u64,

    /// Seed for randomized reports.
    #[arg(long, global = true, default_value_t = 0x5eed)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rewrite a formula to rectified negation normal form.
    Normalize {
        #[arg(long)]
        theory: PathBuf,
        /// Formula text; defaults to normalizing every axiom.
        #[arg(long)]
        formula: Option<String>,
    },
    /// Skolemize a theory (and optionally a goal or an induction body).
    Skolemize {
        #[arg(long)]
        theory: PathBuf,
        #[arg(long)]
        goal: Option<String>,
        /// Body `psi(x)` with exactly one free variable; emits the
        /// Skolemized induction sentence for it.
        #[arg(long)]
        induction_body: Option<String>,
    },
    /// Enumerate the available instances of a theory over a term set.
    Instances {
        #[arg(long)]
        theory: PathBuf,
        #[arg(long)]
        lambda: PathBuf,
        #[arg(long)]
        goal: Option<String>,
    },
    /// Search for a T-evaluation on a term set.
    FindEval {
        #[arg(long)]
        theory: PathBuf,
        #[arg(long)]
        lambda: PathBuf,
        #[arg(long)]
        goal: Option<String>,
        #[arg(long, default_value = "sat")]
        mode: String,
    },
    /// Check a serialized evaluation against a theory.
    CheckEval {
        #[arg(long)]
        theory: PathBuf,
        #[arg(long)]
        lambda: PathBuf,
        #[arg(long)]
        eval: PathBuf,
    },
    /// Does every T-evaluation on the set satisfy the ground goal?
    Force {
        #[arg(long)]
        theory: PathBuf,
        #[arg(long)]
        lambda: PathBuf,
        #[arg(long)]
        goal: String,
    },
    /// Herbrand provability search with a replayable certificate.
    Prove {
        #[arg(long)]
        theory: PathBuf,
        #[arg(long)]
        goal: String,
        #[arg(long, default_value_t = 2)]
        max_level: u64,
        #[arg(long)]
        seed_lambda: Option<PathBuf>,
        /// Write the certificate to this file.
        #[arg(long)]
        cert_out: Option<PathBuf>,
        /// Verify a previously written certificate instead of searching.
        #[arg(long)]
        check: Option<PathBuf>,
    },
    /// Grow the closure of a term set level by level.
    Universe {
        #[arg(long)]
        theory: PathBuf,
        #[arg(long)]
        lambda: PathBuf,
        #[arg(long, default_value_t = 1)]
        steps: u64,
        /// `level`, `admit-all`, or a decimal code threshold.
        #[arg(long, default_value = "admit-all")]
        threshold: String,
    },
    /// Randomized verification of the coding contract and growth bounds.
    CodingReport {
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Run the fixture corpus.
    Fixtures {
        #[command(subcommand)]
        action: FixturesAction,
    },
}

#[derive(Subcommand)]
enum FixturesAction {
    Run {
        /// Run a single fixture by name.
        #[arg(long)]
        name: Option<String>,
        /// Fixture directory; defaults to the corpus shipped with the crate.
        #[arg(long)]
        dir: Option<PathBuf>,
    },
}

fn budget_of(cli: &Cli) -> Budget {
    Budget {
        max_atoms: cli.budget_atoms,
        max_terms: cli.budget_terms,
        max_substitutions: cli.budget_subst,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e) as u8)
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode, Error> {
    let budget = budget_of(cli);
    match &cli.command {
        Command::Normalize { theory, formula } => {
            let session = Session::load(theory, None, budget)?;
            let inputs: Vec<_> = match formula {
                Some(text) => vec![parse_formula(text, &session.theory.signature)?],
                None => session.theory.axioms.clone(),
            };
            let mut rows = Vec::new();
            for f in &inputs {
                rows.push((render_formula(f), render_formula(rnnf(f).formula())));
            }
            if cli.json {
                let items: Vec<_> =
                    rows.iter().map(|(a, b)| json!({"input": a, "rnnf": b})).collect();
                println!("{}", serde_json::to_string_pretty(&json!({ "normalized": items })).unwrap());
            } else {
                for (a, b) in rows {
                    println!("{a}\n  ==> {b}");
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Skolemize { theory, goal, induction_body } => {
            let mut session = Session::load(theory, goal.as_deref(), budget)?;
            let mut rows: Vec<(String, String)> = session
                .theory
                .axioms
                .iter()
                .zip(&session.theory_sk)
                .map(|(ax, sk)| (render_formula(ax), render_formula(&sk.open)))
                .collect();
            if let Some((phi, neg)) = &session.goal {
                rows.push((format!("~({})", render_formula(phi)), render_formula(&neg.open)));
            }
            if let Some(body_text) = induction_body {
                let sig = session.theory.signature.clone();
                // Undeclared identifiers are the body's candidate free
                // variables; declared symbols keep their meaning.
                let mut free_names: Vec<String> = collect_idents(body_text);
                free_names.retain(|w| {
                    sig.function_arity(w).is_none()
                        && !sig.is_predicate(w)
                        && session.registry.entry(w).is_none()
                });
                let free_refs: Vec<&str> = free_names.iter().map(String::as_str).collect();
                let body = herbrand_core::syntax::parse_formula_with_free(
                    body_text,
                    &sig,
                    &session.registry,
                    &free_refs,
                )?;
                let sk = skolemize_induction(&body, &sig, &mut session.registry)?;
                rows.push((format!("induction on {body_text}"), render_formula(&sk.open)));
            }
            let table: Vec<_> = session
                .registry
                .entries()
                .iter()
                .map(|e| (e.name.clone(), e.arity, render_formula(&e.source)))
                .collect();
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "skolemized": rows.iter().map(|(a, b)| json!({"input": a, "open": b})).collect::<Vec<_>>(),
                        "registry": table.iter().map(|(n, a, s)| json!({"symbol": n, "arity": a, "source": s})).collect::<Vec<_>>(),
                    }))
                    .unwrap()
                );
            } else {
                for (a, b) in rows {
                    println!("{a}\n  ==> {b}");
                }
                println!("registry:");
                for (n, a, s) in table {
                    println!("  {n}/{a}  from  {s}");
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Instances { theory, lambda, goal } => {
            let session = Session::load(theory, goal.as_deref(), budget)?;
            let lambda = session.load_lambda(lambda)?;
            let tsk = session.refutation_task();
            let insts = available_instances(&tsk, &lambda, &budget)?;
            if cli.json {
                let items: Vec<_> = insts
                    .iter()
                    .map(|i| {
                        json!({
                            "source": i.source,
                            "substitution": i.substitution.iter()
                                .map(|(v, t)| json!({"var": v, "term": render_term(t)}))
                                .collect::<Vec<_>>(),
                            "ground": render_formula(&i.ground),
                        })
                    })
                    .collect();
                println!("{}", serde_json::to_string_pretty(&json!({ "instances": items })).unwrap());
            } else {
                for i in &insts {
                    let subst: Vec<String> =
                        i.substitution.iter().map(|(v, t)| format!("{v} := {}", render_term(t))).collect();
                    println!("[axiom {}] {{{}}}  {}", i.source, subst.join(", "), i.ground);
                }
                println!("{} available instances", insts.len());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::FindEval { theory, lambda, goal, mode } => {
            let session = Session::load(theory, goal.as_deref(), budget)?;
            let lambda = session.load_lambda(lambda)?;
            let tsk = session.refutation_task();
            let mode = parse_mode(mode)?;
            let table = Arc::new(atoms_over(&lambda, &session.theory.signature, &budget)?);
            let outcome = search_evaluation(&tsk, &table, &[], mode, &budget)?;
            match outcome {
                herbrand_core::eval::SearchOutcome::Found(p) => {
                    if cli.json {
                        let atoms: Vec<String> = p
                            .render_true_atoms()
                            .lines()
                            .map(str::to_string)
                            .collect();
                        println!(
                            "{}",
                            serde_json::to_string_pretty(&json!({"verdict": "SAT", "true_atoms": atoms}))
                                .unwrap()
                        );
                    } else {
                        println!("SAT");
                        print!("{}", p.render_true_atoms());
                    }
                    Ok(ExitCode::SUCCESS)
                }
                _ => {
                    if cli.json {
                        println!("{}", serde_json::to_string_pretty(&json!({"verdict": "UNSAT"})).unwrap());
                    } else {
                        println!("UNSAT");
                    }
                    Ok(ExitCode::SUCCESS)
                }
            }
        }
        Command::CheckEval { theory, lambda, eval } => {
            let session = Session::load(theory, None, budget)?;
            let lambda = session.load_lambda(lambda)?;
            let atoms = session.load_true_atoms(eval)?;
            let table = Arc::new(atoms_over(&lambda, &session.theory.signature, &budget)?);
            let p = Evaluation::from_true_atoms(table, &atoms)?;
            let verdict = match validate_evaluation(&p) {
                Err(v) => ("INVALID".to_string(), Some(v.to_string())),
                Ok(()) => match t_evaluation_violation(&p, &session.theory_sk, &budget)? {
                    Some(inst) => ("INVALID".to_string(), Some(render_formula(&inst.ground))),
                    None => ("VALID".to_string(), None),
                },
            };
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({"verdict": verdict.0, "violation": verdict.1}))
                        .unwrap()
                );
            } else {
                match &verdict.1 {
                    Some(detail) => println!("{}: {detail}", verdict.0),
                    None => println!("{}", verdict.0),
                }
            }
            Ok(if verdict.0 == "VALID" { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Command::Force { theory, lambda, goal } => {
            let session = Session::load(theory, None, budget)?;
            let lambda = session.load_lambda(lambda)?;
            let goal = session.parse_ground(goal)?;
            let outcome =
                force_check(&session.theory_sk, &lambda, &session.theory.signature, &goal, &budget)?;
            match outcome {
                ForceOutcome::Forced => {
                    if cli.json {
                        println!("{}", serde_json::to_string_pretty(&json!({"verdict": "FORCED"})).unwrap());
                    } else {
                        println!("FORCED");
                    }
                }
                ForceOutcome::Counterexample(p) => {
                    if cli.json {
                        let atoms: Vec<String> =
                            p.render_true_atoms().lines().map(str::to_string).collect();
                        println!(
                            "{}",
                            serde_json::to_string_pretty(
                                &json!({"verdict": "COUNTEREXAMPLE", "true_atoms": atoms})
                            )
                            .unwrap()
                        );
                    } else {
                        println!("COUNTEREXAMPLE");
                        print!("{}", p.render_true_atoms());
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Prove { theory, goal, max_level, seed_lambda, cert_out, check } => {
            if let Some(path) = check {
                let text = std::fs::read_to_string(path).map_err(|e| Error::Parse {
                    line: 0,
                    col: 0,
                    msg: format!("cannot read {}: {e}", path.display()),
                })?;
                let cert = herbrand_core::engine::ProofCertificate::parse(&text)?;
                check_certificate(&cert, &budget)?;
                println!("certificate ok");
                return Ok(ExitCode::SUCCESS);
            }
            let session = Session::load(theory, None, budget)?;
            let phi = parse_formula(goal, &session.theory.signature)?;
            let mut strategy = ProveStrategy { max_level: *max_level, ..ProveStrategy::default() };
            if let Some(path) = seed_lambda {
                // Seeds may mention the goal's Skolem constants, so resolve
                // them against a session that has the goal loaded.
                let with_goal = Session::load(theory, Some(goal), budget)?;
                strategy.seeds.push(with_goal.load_lambda(path)?);
            }
            match prove(&session.theory, &phi, &strategy, &budget)? {
                ProveOutcome::Proved(cert) => {
                    check_certificate(&cert, &budget)?;
                    if let Some(path) = cert_out {
                        std::fs::write(path, cert.render()).map_err(|e| Error::Parse {
                            line: 0,
                            col: 0,
                            msg: format!("cannot write {}: {e}", path.display()),
                        })?;
                    }
                    if cli.json {
                        println!(
                            "{}",
                            serde_json::to_string_pretty(&json!({
                                "verdict": "PROVED",
                                "lambda": cert.lambda,
                                "clauses": cert.clauses.len(),
                            }))
                            .unwrap()
                        );
                    } else {
                        println!("PROVED on {{{}}}", cert.lambda.join(", "));
                    }
                    Ok(ExitCode::SUCCESS)
                }
                ProveOutcome::Unknown(why) => {
                    if cli.json {
                        println!(
                            "{}",
                            serde_json::to_string_pretty(&json!({"verdict": "UNKNOWN", "reason": why}))
                                .unwrap()
                        );
                    } else {
                        println!("UNKNOWN: {why}");
                    }
                    Ok(ExitCode::FAILURE)
                }
            }
        }
        Command::Universe { theory, lambda, steps, threshold } => {
            let session = Session::load(theory, None, budget)?;
            let base = session.load_lambda(lambda)?;
            let threshold = match threshold.as_str() {
                "level" => CodeThreshold::Level,
                "admit-all" => CodeThreshold::AdmitAll,
                digits => CodeThreshold::Value(
                    digits.parse().map_err(|_| Error::Parse {
                        line: 0,
                        col: 0,
                        msg: format!("bad threshold `{digits}`"),
                    })?,
                ),
            };
            let scheme =
                CodingScheme::with_ceiling(&session.theory.signature, &session.registry, cli.bit_ceiling);
            let mut level = UniverseLevel::new(base, threshold, session.registry.clone());
            let mut sizes = vec![level.terms.len()];
            for _ in 0..*steps {
                level = grow_universe(&level, &session.theory.signature, &scheme, &budget)?;
                sizes.push(level.terms.len());
            }
            if cli.json {
                let terms: Vec<String> = level.terms.iter().map(render_term).collect();
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({"sizes": sizes, "terms": terms})).unwrap()
                );
            } else {
                println!("sizes per level: {sizes:?}");
                for t in level.terms.iter() {
                    println!("{}", render_term(t));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::CodingReport { samples } => {
            let value = report::coding_report(cli.seed, *samples, cli.bit_ceiling)?;
            println!("{}", report::render_text(&value));
            Ok(ExitCode::SUCCESS)
        }
        Command::Fixtures { action } => {
            let FixturesAction::Run { name, dir } = action;
            let dir = dir.clone().unwrap_or_else(default_fixture_dir);
            let manifest = fixtures::load_manifest(&dir)?;
            let reports = fixtures::run_all(&dir, &manifest, &budget, name.as_deref());
            if reports.is_empty() {
                eprintln!("no fixture matched");
                return Ok(ExitCode::FAILURE);
            }
            let mut all_ok = true;
            if cli.json {
                let items: Vec<_> = reports
                    .iter()
                    .map(|r| {
                        json!({
                            "name": r.name, "passed": r.passed, "expected": r.expected,
                            "got": r.got, "detail": r.detail, "note": r.note, "millis": r.millis,
                        })
                    })
                    .collect();
                println!("{}", serde_json::to_string_pretty(&json!({ "fixtures": items })).unwrap());
                all_ok = reports.iter().all(|r| r.passed);
            } else {
                for r in &reports {
                    let status = if r.passed { "pass" } else { "FAIL" };
                    let detail = r.detail.as_deref().unwrap_or("");
                    println!("{status}  {}  [{} in {} ms] {detail}", r.name, r.got, r.millis);
                    all_ok &= r.passed;
                }
                println!(
                    "{}/{} fixtures passed",
                    reports.iter().filter(|r| r.passed).count(),
                    reports.len()
                );
            }
            Ok(if all_ok { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
    }
}

fn parse_mode(mode: &str) -> Result<SearchMode, Error> {
    match mode {
        "sat" => Ok(SearchMode::Sat),
        "brute" => Ok(SearchMode::Brute),
        other => Err(Error::Parse { line: 0, col: 0, msg: format!("unknown mode `{other}`") }),
    }
}

/// Identifier-looking tokens of an induction body, used as its candidate
/// free variables (the parser only treats undeclared ones as variables).
fn collect_idents(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for ch in text.chars().chain(" ".chars()) {
        if ch.is_ascii_alphanumeric() || ch == '_' {
            cur.push(ch);
        } else if !cur.is_empty() {
            if !out.contains(&cur) {
                out.push(cur.clone());
            }
            cur.clear();
        }
    }
    out.retain(|w| w != "forall" && w != "exists");
    out
}

fn default_fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}
