use std::fs;
use std::io::{self, BufRead, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use pfrep_core::catalog;
use pfrep_core::corpus::{random_corpus, CorpusParams};
use pfrep_core::ef_game::{self, exhaustive_check, GameBudget, GameState, ScriptLine, Side};
use pfrep_core::format::{emit_pfun, parse_algebra, parse_pfun, PfunFile};
use pfrep_core::laws::{self, DistLaw, DistViolation, RightMeetInstance, Scope};
use pfrep_core::ninfty;
use pfrep_core::pfun::{close_generators, DEFAULT_CLOSURE_CAP};
use pfrep_core::representation::{
    brute_force_search, decide_cross_checked, DecideError, SearchOptions, Witness,
};
use pfrep_core::{
    build_theta, decide_complete_representability, DuplicatorStrategy, FiniteAlgebra, Representation,
    Signature, ThetaOutcome, Winner,
};

#[derive(Parser)]
#[command(name = "pfrep", version, about = "Finite algebras of partial functions and their representations")]
struct Cli {
    /// Seed for randomized drivers.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Largest closure `close` and `laws --random` will build.
    #[arg(long, global = true, default_value_t = DEFAULT_CLOSURE_CAP)]
    max_closure: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check an algebra file against the axioms of partial-function algebras.
    Validate { file: PathBuf },
    /// Close the functions of a partial-function file under ⨟, ∧ and A.
    Close {
        file: PathBuf,
        /// Extra operations beyond ⨟, ∧, A (e.g. range, domain).
        #[arg(long, value_delimiter = ',')]
        with: Vec<String>,
    },
    /// List zero, atoms, atomicity and atomisticity.
    Atoms { file: PathBuf },
    /// Build a representation: θ by default, or by exhaustive search.
    Represent {
        file: PathBuf,
        #[arg(long)]
        search: bool,
        /// Largest base tried by the search (default: number of atoms).
        #[arg(long)]
        max_base: Option<usize>,
    },
    /// Decide complete representability.
    Decide {
        file: PathBuf,
        /// Also run the exhaustive search and require agreement.
        #[arg(long)]
        cross_check: bool,
        #[arg(long)]
        max_base: Option<usize>,
    },
    /// Check distributivity of composition over joins and meets.
    Laws {
        file: Option<PathBuf>,
        /// The right-distributivity-over-meets counterexample.
        #[arg(long, conflicts_with_all = ["file", "random"])]
        figure1: bool,
        /// Check N seeded random closures.
        #[arg(long, value_name = "N", conflicts_with = "file")]
        random: Option<usize>,
    },
    /// Verify the infinite left-distributivity counterexample.
    Example43 {
        /// Compare with finite truncations up to this size.
        #[arg(long, default_value_t = 4)]
        truncation: u32,
    },
    /// Play the three-round partition game.
    EfGame {
        /// Elements spoiler picks in each of the three rounds, e.g. `1,2,1`.
        #[arg(long, value_delimiter = ',', default_value = "1,1,1")]
        rounds: Vec<u32>,
        /// Most parts spoiler may split one cell into in the exhaustive search.
        #[arg(long, default_value_t = 4)]
        split_bound: usize,
        /// Largest finite size spoiler may give a part in the exhaustive search.
        #[arg(long, default_value_t = 4)]
        max_finite: u32,
        #[arg(long, value_enum, default_value_t = Mode::Exhaustive)]
        mode: Mode,
        #[arg(long, value_enum, default_value_t = StrategyArg::SingleAtoms)]
        strategy: StrategyArg,
        /// Script for interactive-script mode (default: standard input).
        #[arg(long)]
        script: Option<PathBuf>,
    },
    /// Write a named fixture.
    Catalog {
        name: String,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exhaustive,
    InteractiveScript,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    SingleAtoms,
    MatchFiniteSizes,
}

impl From<StrategyArg> for DuplicatorStrategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::SingleAtoms => DuplicatorStrategy::SingleAtoms,
            StrategyArg::MatchFiniteSizes => DuplicatorStrategy::MatchFiniteSizes,
        }
    }
}

/// How a run ended, as an exit code.
enum Outcome {
    Yes,
    No,
}

enum Failure {
    Input(anyhow::Error),
    Internal(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Input(e)
    }
}

type Run = Result<Outcome, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = std::panic::catch_unwind(|| run(&cli));
    match result {
        Ok(Ok(Outcome::Yes)) => ExitCode::SUCCESS,
        Ok(Ok(Outcome::No)) => ExitCode::from(3),
        Ok(Err(Failure::Input(e))) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Ok(Err(Failure::Internal(e))) => {
            eprintln!("internal error: {e:#}");
            ExitCode::from(2)
        }
        Err(_) => ExitCode::from(2),
    }
}

fn run(cli: &Cli) -> Run {
    match &cli.command {
        Command::Validate { file } => validate(&load_algebra(file)?),
        Command::Close { file, with } => close(file, with, cli.max_closure),
        Command::Atoms { file } => atoms(&load_algebra(file)?),
        Command::Represent {
            file,
            search,
            max_base,
        } => represent(&load_algebra(file)?, *search, *max_base),
        Command::Decide {
            file,
            cross_check,
            max_base,
        } => decide(&load_algebra(file)?, *cross_check, *max_base),
        Command::Laws {
            file,
            figure1,
            random,
        } => match (file, figure1, random) {
            (_, true, _) => laws_figure1(),
            (_, _, Some(n)) => laws_random(*n, cli.seed, cli.max_closure),
            (Some(f), _, _) => laws_file(&load_algebra(f)?),
            _ => Err(anyhow!("laws needs a file, --figure1 or --random N").into()),
        },
        Command::Example43 { truncation } => example43(*truncation),
        Command::EfGame {
            rounds,
            split_bound,
            max_finite,
            mode,
            strategy,
            script,
        } => {
            let &[n1, n2, n3] = rounds.as_slice() else {
                return Err(anyhow!("--rounds takes three counts, e.g. 1,1,1").into());
            };
            let rounds = [n1, n2, n3];
            let strategy = DuplicatorStrategy::from(*strategy);
            match mode {
                Mode::Exhaustive => {
                    if rounds.iter().any(|&n| n > 4) || *split_bound > 8 || *max_finite > 8 {
                        return Err(anyhow!("budgets above n = 4, split bound 8, size 8 are not supported").into());
                    }
                    let budget = GameBudget {
                        max_finite: *max_finite,
                        ..GameBudget::new(rounds, *split_bound)
                    };
                    ef_exhaustive(budget, &strategy)
                }
                Mode::InteractiveScript => ef_script(rounds, &strategy, script.as_deref()),
            }
        }
        Command::Catalog { name, out } => catalog_cmd(name, out),
    }
}

/// Writes to standard output; a closed pipe is not an error.
fn emit(text: &str) {
    let _ = io::stdout().lock().write_all(text.as_bytes());
}

fn print(v: &Value) {
    emit(&format!("{}\n", serde_json::to_string_pretty(v).expect("JSON values serialize")));
}

fn load_algebra(path: &Path) -> anyhow::Result<FiniteAlgebra> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_algebra(&text).with_context(|| format!("parsing {}", path.display()))
}

fn names(alg: &FiniteAlgebra, es: &[usize]) -> Vec<String> {
    es.iter().map(|&e| alg.name(e).to_string()).collect()
}

fn validate(alg: &FiniteAlgebra) -> Run {
    let report = alg.validate();
    let failures: Vec<Value> = report
        .failures
        .iter()
        .map(|f| json!({"law": f.law.name(), "witness": names(alg, &f.witness)}))
        .collect();
    print(&json!({"valid": report.passed, "elements": alg.len(), "failures": failures}));
    Ok(if report.passed { Outcome::Yes } else { Outcome::No })
}

fn close(path: &Path, with: &[String], cap: usize) -> Run {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let funcs = parse_pfun(&text).with_context(|| format!("parsing {}", path.display()))?;
    let mut ops: Vec<_> = Signature::standard().ops().collect();
    for w in with {
        ops.push(pfrep_core::Op::parse(w).ok_or_else(|| anyhow!("unknown operation {w:?}"))?);
    }
    let closed = close_generators(funcs.base, &funcs.functions, &Signature::new(ops), cap)
        .context("closing the generators")?;
    emit(&emit_pfun(&PfunFile::from_algebra(&closed)));
    Ok(Outcome::Yes)
}

fn atoms(alg: &FiniteAlgebra) -> Run {
    let zero = alg.zero().context("no zero element")?;
    print(&json!({
        "zero": alg.name(zero),
        "atoms": names(alg, &alg.atoms()),
        "atomic": alg.is_atomic(),
        "atomistic": alg.is_atomistic(),
    }));
    Ok(Outcome::Yes)
}

fn emit_yes(rep: &Representation) {
    emit("YES\n");
    emit(&emit_pfun(&PfunFile::from_representation(rep)));
}

fn represent(alg: &FiniteAlgebra, search: bool, max_base: Option<usize>) -> Run {
    if search {
        let options = SearchOptions {
            max_base,
            ..SearchOptions::default()
        };
        return match brute_force_search(alg, &options).context("exhaustive search")? {
            Some(rep) => {
                emit_yes(&rep);
                Ok(Outcome::Yes)
            }
            None => {
                emit("NO\n");
                print(&json!({"kind": "search-exhausted", "witness": [], "max_base": max_base.unwrap_or(alg.atoms().len())}));
                Ok(Outcome::No)
            }
        };
    }
    // Tables that break the axioms are refuted by the broken law.
    if !alg.validate().passed {
        return decide(alg, false, None);
    }
    match build_theta(alg) {
        ThetaOutcome::Represented(rep) => {
            emit_yes(&rep);
            Ok(Outcome::Yes)
        }
        ThetaOutcome::Refuted(r) => {
            emit("NO\n");
            print(&r.to_json(alg));
            Ok(Outcome::No)
        }
    }
}

fn decide(alg: &FiniteAlgebra, cross_check: bool, max_base: Option<usize>) -> Run {
    let verdict = if cross_check {
        let options = SearchOptions {
            max_base,
            ..SearchOptions::default()
        };
        match decide_cross_checked(alg, &options) {
            Ok(v) => v,
            Err(e @ DecideError::Disagreement { .. }) => return Err(Failure::Internal(e.into())),
            Err(e) => return Err(Failure::Input(e.into())),
        }
    } else {
        decide_complete_representability(alg)
    };
    match &verdict.witness {
        Witness::Representation(rep) => {
            emit_yes(rep);
            Ok(Outcome::Yes)
        }
        Witness::Refutation(r) => {
            emit("NO\n");
            print(&r.to_json(alg));
            Ok(Outcome::No)
        }
        Witness::SearchExhausted { max_base } => {
            emit("NO\n");
            print(&json!({"kind": "search-exhausted", "witness": [], "max_base": max_base}));
            Ok(Outcome::No)
        }
    }
}

fn violation_json(alg: &FiniteAlgebra, v: &DistViolation) -> Value {
    let name = |e: Option<usize>| e.map(|e| alg.name(e).to_string());
    json!({
        "law": v.law.name(),
        "a": alg.name(v.a),
        "set": names(alg, &v.set),
        "extremum_first": name(v.lhs),
        "compose_first": name(v.rhs),
    })
}

fn laws_figure1() -> Run {
    let alg = catalog::figure1_closure()
        .to_abstract()
        .map_err(|e| Failure::Internal(e.into()))?;
    let idx = |n: &str| alg.index_of(n).expect("figure 1 names");
    let inst = RightMeetInstance::new(&alg, idx("f1"), idx("f2"), idx("g"));
    let held: Vec<&str> = laws::check_representable_laws(&alg, Scope::AllSubsets)
        .is_empty()
        .then(|| vec!["right-over-joins", "left-over-joins", "left-over-meets"])
        .unwrap_or_default();
    print(&json!({
        "law": DistLaw::RightOverMeets.name(),
        "fails": inst.fails(),
        "witness": {
            "b": "f1", "c": "f2", "a": "g",
            "(b∧c);a": alg.name(inst.meet_then_compose),
            "(b;a)∧(c;a)": alg.name(inst.compose_then_meet),
        },
        "laws_that_hold": held,
    }));
    Ok(if inst.fails() { Outcome::Yes } else { Outcome::No })
}

fn laws_file(alg: &FiniteAlgebra) -> Run {
    if alg.len() > 64 {
        return Err(anyhow!("laws supports at most 64 elements").into());
    }
    let scope = if alg.len() <= laws::MAX_SUBSET_CARRIER {
        Scope::AllSubsets
    } else {
        Scope::Pairs
    };
    let results: Vec<Value> = DistLaw::ALL
        .iter()
        .map(|&law| {
            let v = laws::first_violation(alg, law, scope);
            json!({"law": law.name(), "holds": v.is_none(), "violation": v.map(|v| violation_json(alg, &v))})
        })
        .collect();
    let ok = laws::check_representable_laws(alg, scope).is_empty();
    print(&json!({
        "scope": if scope == Scope::AllSubsets { "all-subsets" } else { "pairs" },
        "laws": results,
        "representable_laws_hold": ok,
    }));
    Ok(if ok { Outcome::Yes } else { Outcome::No })
}

/// Subset checks run on samples up to this size; larger ones use pairs.
const RANDOM_SUBSET_LIMIT: usize = 12;

fn laws_random(n: usize, seed: u64, cap: usize) -> Run {
    let params = CorpusParams {
        samples: n,
        ..CorpusParams::default()
    };
    let corpus = random_corpus(seed, params).context("building the corpus")?;
    let mut exceptions = Vec::new();
    let mut subset_checked = 0;
    for s in &corpus {
        if s.closure.len() > cap {
            return Err(anyhow!("sample {} exceeds --max-closure", s.index).into());
        }
        let alg = s.closure.to_abstract().map_err(|e| Failure::Internal(e.into()))?;
        let scope = if alg.len() <= RANDOM_SUBSET_LIMIT {
            subset_checked += 1;
            Scope::AllSubsets
        } else {
            Scope::Pairs
        };
        for v in laws::check_representable_laws(&alg, scope) {
            exceptions.push(json!({"sample": s.index, "violation": violation_json(&alg, &v)}));
        }
    }
    print(&json!({
        "seed": seed,
        "samples": corpus.len(),
        "subset_checked": subset_checked,
        "exceptions": exceptions,
    }));
    Ok(if exceptions.is_empty() { Outcome::Yes } else { Outcome::No })
}

fn example43(truncation: u32) -> Run {
    if truncation > catalog::MAX_TRUNCATION {
        return Err(anyhow!("truncations above {} are not supported", catalog::MAX_TRUNCATION).into());
    }
    let report = ninfty::verify_example_43();
    let mut agreement = Vec::new();
    let mut all_agree = true;
    for n in 1..=truncation {
        let r = ninfty::check_truncation(n);
        all_agree &= r.is_ok();
        agreement.push(json!({"n": n, "agrees": r.is_ok(), "mismatch": r.err().map(|m| format!("{m:?}"))}));
    }
    let mut out = report.to_json();
    out["truncation_agreement"] = Value::Array(agreement);
    print(&out);
    Ok(if report.passed() && all_agree {
        Outcome::Yes
    } else {
        Outcome::No
    })
}

fn ef_exhaustive(budget: GameBudget, strategy: &DuplicatorStrategy) -> Run {
    match exhaustive_check(budget, strategy) {
        Ok(report) => {
            print(&json!({
                "rounds": budget.rounds,
                "split_bound": budget.split_bound,
                "max_finite": budget.max_finite,
                "duplicator_wins": report.duplicator_wins,
                "positions": report.positions,
                "spoiler_moves": report.spoiler_moves,
                "losing_line": report.losing_line,
            }));
            Ok(if report.duplicator_wins {
                Outcome::Yes
            } else {
                Outcome::No
            })
        }
        Err(e) => Err(anyhow::Error::from(e).into()),
    }
}

fn empty_move(state: &GameState) -> ef_game::Move {
    match ef_game::spoiler_side(state.round() - 1) {
        Side::B => ef_game::Move::B(vec![]),
        Side::BPrime => ef_game::Move::BPrime(vec![]),
    }
}

fn ef_script(rounds: [u32; 3], strategy: &DuplicatorStrategy, script: Option<&Path>) -> Run {
    let reader: Box<dyn BufRead> = match script {
        Some(p) => Box::new(io::BufReader::new(
            fs::File::open(p).with_context(|| format!("opening {}", p.display()))?,
        )),
        None => Box::new(io::stdin().lock()),
    };
    let mut state = GameState::new(rounds);
    for (lineno, line) in reader.lines().enumerate() {
        let line = line.context("reading the script")?;
        if line.trim().is_empty() {
            continue;
        }
        if state.is_over() {
            return Err(anyhow!("line {}: the game is over after three rounds", lineno + 1).into());
        }
        let parsed: ScriptLine =
            serde_json::from_str(&line).with_context(|| format!("line {}", lineno + 1))?;
        let mv = parsed
            .to_move(&state)
            .with_context(|| format!("line {}", lineno + 1))?;
        let round = state.round();
        let after = state
            .spoiler_move(mv)
            .with_context(|| format!("line {}", lineno + 1))?;
        match after.duplicator_reply(strategy) {
            Ok(next) => state = next,
            Err(e) => {
                print(&json!({"round": round, "error": e.to_string(), "winner": Winner::Spoiler}));
                return Ok(Outcome::No);
            }
        }
        print(&json!({
            "round": round,
            "reply": state.last_reply(),
            "cells": state.cells(),
            "history": state.history(),
        }));
    }
    // Rounds without a script line choose nothing.
    while !state.is_over() {
        state = state
            .spoiler_move(empty_move(&state))
            .and_then(|s| s.duplicator_reply(strategy))
            .map_err(|e| Failure::Internal(e.into()))?;
    }
    let winner = state.winner().map_err(|e| Failure::Internal(e.into()))?;
    print(&json!({"winner": winner, "cells": state.cells()}));
    Ok(if winner == Winner::Duplicator {
        Outcome::Yes
    } else {
        Outcome::No
    })
}

fn catalog_cmd(name: &str, out: &Path) -> Run {
    let fixture = catalog::fixture(name).map_err(anyhow::Error::from)?;
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let mut written = Vec::new();
    for (file, text) in &fixture.files {
        let path = out.join(file);
        fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
        written.push(path.display().to_string());
    }
    print(&json!({"fixture": fixture.name, "files": written}));
    Ok(Outcome::Yes)
}
