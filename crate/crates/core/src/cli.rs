//! The `dsm` command line.
//!
//! Exit codes: 0 success or feasible, 1 infeasible or verification failed,
//! 2 usage error, 3 input error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::blocking::DeviatorSet;
use crate::format::{parse_instance, parse_matching, serialize_instance, serialize_matching, InstanceFile};
use crate::fpt::{solve_bipartite_restriction, solve_fpt_with, FptOptions};
use crate::generators::{generate, GenSpec, Model};
use crate::instance::AgentId;
use crate::matching::Matching;
use crate::oracle::{oracle_solve_with, OracleLimits};
use crate::problem::{verify_solution, Budget, DeviatorProblem, Objective, SizeRegime, SolveOutcome};
use crate::reductions::{
    complete_lists, minba_complete, parse_cnf_22e3, sat_to_perfect_smi, smi_to_sri, witness_matching,
};
use crate::shortlist::solve_shortlist;

#[derive(Parser, Debug)]
#[command(name = "dsm", version, about = "Stable matchings with deviators and conformists")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check an instance file and print a summary.
    Validate { instance: PathBuf },
    /// Solve an instance.
    Solve(SolveArgs),
    /// Exhaustive optima and stable-matching census for a small instance.
    Oracle {
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = RegimeArg::Any)]
        regime: RegimeArg,
        /// Largest instance the oracle will enumerate.
        #[arg(long, default_value_t = crate::oracle::DEFAULT_AGENT_CAP)]
        cap: usize,
    },
    /// Check a matching against an instance.
    Verify {
        instance: PathBuf,
        matching: PathBuf,
        #[arg(long, value_enum, default_value_t = ObjectiveArg::Bp)]
        objective: ObjectiveArg,
        #[arg(long, value_enum, default_value_t = RegimeArg::Any)]
        regime: RegimeArg,
        /// Budget the value must not exceed.
        #[arg(long)]
        k: Option<usize>,
        /// Claimed objective value.
        #[arg(long)]
        value: Option<usize>,
    },
    /// Write a seeded random instance.
    Gen(GenArgs),
    /// Hardness constructions.
    #[command(subcommand)]
    Reduce(Reduce),
}

#[derive(Args, Debug)]
struct SolveArgs {
    instance: PathBuf,
    #[arg(long, value_enum, default_value_t = ObjectiveArg::Bp)]
    objective: ObjectiveArg,
    #[arg(long, value_enum, default_value_t = RegimeArg::Any)]
    regime: RegimeArg,
    /// Decide whether the value can be at most K.
    #[arg(long, conflicts_with = "optimize")]
    k: Option<usize>,
    /// Minimise the value (the default when --k is absent).
    #[arg(long)]
    optimize: bool,
    #[arg(long, value_enum, default_value_t = EngineArg::Auto)]
    engine: EngineArg,
    /// Worker threads for the parametrised engine.
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Also write the matching to this file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value_t = ModelArg::Sri)]
    model: ModelArg,
    /// Maximum preference-list length.
    #[arg(long, default_value_t = 3)]
    cap: usize,
    /// Probability that an agent is a deviator.
    #[arg(long, default_value_t = 0.5)]
    fraction: f64,
    /// Exact number of deviators (overrides --fraction).
    #[arg(long)]
    deviators: Option<usize>,
    /// Acceptance probability of each candidate edge.
    #[arg(long, default_value_t = 1.0)]
    edge_probability: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Reduce {
    /// (2,2)-E3-SAT formula to a perfect SMI instance with deviators.
    Sat2smi {
        cnf: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the witness matching of the first satisfying assignment.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Perfect SMI to SRI with companion agents.
    Smi2sri {
        instance: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Append every unranked agent to each list.
    Complete {
        instance: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Complete lists while preserving "at most k blocking agents".
    MinbaComplete {
        instance: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ObjectiveArg {
    Bp,
    Ba,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RegimeArg {
    Any,
    Max,
    Perfect,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum EngineArg {
    Auto,
    Shortlist,
    Fpt,
    Bipartite,
    Oracle,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModelArg {
    Sri,
    Smi,
    Pathcycle,
    Core,
}

impl From<ObjectiveArg> for Objective {
    fn from(o: ObjectiveArg) -> Self {
        match o {
            ObjectiveArg::Bp => Objective::BlockingPairs,
            ObjectiveArg::Ba => Objective::BlockingAgents,
        }
    }
}

impl From<RegimeArg> for SizeRegime {
    fn from(r: RegimeArg) -> Self {
        match r {
            RegimeArg::Any => SizeRegime::Any,
            RegimeArg::Max => SizeRegime::MaxCardinality,
            RegimeArg::Perfect => SizeRegime::Perfect,
        }
    }
}

impl From<ModelArg> for Model {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Sri => Model::SriUniform,
            ModelArg::Smi => Model::SmiUniform,
            ModelArg::Pathcycle => Model::PathCycleOnly,
            ModelArg::Core => Model::DeviatorCore,
        }
    }
}

/// A failure with its exit code.
struct Exit(i32, String);

fn input_error(msg: impl Into<String>) -> Exit {
    Exit(3, msg.into())
}

fn read(path: &Path) -> Result<String, Exit> {
    fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), Exit> {
    fs::write(path, text).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<InstanceFile, Exit> {
    parse_instance(&read(path)?).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<(), Exit> {
    match path {
        Some(p) => write_file(p, text),
        None => out.write_all(text.as_bytes()).map_err(|e| Exit(3, e.to_string())),
    }
}

fn pairs_inline(m: &Matching) -> String {
    let parts: Vec<String> = m.pairs().map(|(a, b)| format!("{{{a},{b}}}")).collect();
    if parts.is_empty() {
        "{}".into()
    } else {
        parts.join(" ")
    }
}

fn agents_inline<'a>(agents: impl IntoIterator<Item = &'a AgentId>) -> String {
    agents.into_iter().map(|a| a.to_string()).collect::<Vec<_>>().join(" ")
}

/// Engine picked by `auto`, or the one requested.
fn engine_for(p: &DeviatorProblem, requested: EngineArg) -> EngineArg {
    if requested != EngineArg::Auto {
        return requested;
    }
    if p.instance.d_max() <= 2 {
        EngineArg::Shortlist
    } else if p.regime == SizeRegime::Any
        && p.budget == Budget::AtMost(0)
        && solve_bipartite_restriction(p).is_ok()
    {
        EngineArg::Bipartite
    } else {
        EngineArg::Fpt
    }
}

fn within_budget(p: &DeviatorProblem, m: Matching, value: usize, note: String) -> SolveOutcome {
    match p.budget {
        Budget::AtMost(k) if value > k => SolveOutcome::infeasible(format!("{note}; optimum {value} exceeds {k}")),
        _ => SolveOutcome::solution(m, value, note),
    }
}

fn run_engine(p: &DeviatorProblem, engine: EngineArg, threads: usize) -> Result<SolveOutcome, Exit> {
    match engine {
        EngineArg::Auto => unreachable!("resolved by engine_for"),
        EngineArg::Shortlist => solve_shortlist(p).map_err(|e| input_error(format!("shortlist engine: {e}"))),
        EngineArg::Fpt => Ok(solve_fpt_with(p, FptOptions { threads, access_log: None })),
        EngineArg::Bipartite => {
            if p.regime != SizeRegime::Any {
                return Err(Exit(2, "the bipartite engine only supports --regime any".into()));
            }
            let m = solve_bipartite_restriction(p).map_err(|e| input_error(format!("bipartite engine: {e}")))?;
            let v = p.value(&m);
            Ok(within_budget(p, m, v, "bipartite restriction, stable matching of the deviator edges".into()))
        }
        EngineArg::Oracle => {
            let report = oracle_solve_with(p, OracleLimits::default().without_census())
                .map_err(|e| input_error(format!("oracle engine: {e}")))?;
            Ok(match (report.optimum(p.objective), report.witness(p.objective)) {
                (Some(v), Some(m)) => {
                    within_budget(p, m.clone(), v, format!("exhaustive over {} matchings", report.family_size))
                }
                _ => SolveOutcome::infeasible(format!("no matching in the {} regime", p.regime)),
            })
        }
    }
}

fn engine_name(e: EngineArg) -> &'static str {
    match e {
        EngineArg::Auto => "auto",
        EngineArg::Shortlist => "shortlist",
        EngineArg::Fpt => "fpt",
        EngineArg::Bipartite => "bipartite",
        EngineArg::Oracle => "oracle",
    }
}

fn solve(args: SolveArgs, out: &mut dyn Write) -> Result<i32, Exit> {
    let f = load(&args.instance)?;
    let budget = match args.k {
        Some(k) => Budget::AtMost(k),
        None => Budget::Optimize,
    };
    let p = DeviatorProblem::new(f.instance, f.deviators, args.objective.into(), args.regime.into(), budget);
    let engine = engine_for(&p, args.engine);
    let outcome = run_engine(&p, engine, args.threads)?;
    let mut text = String::new();
    let code = match (outcome.matching(), outcome.value()) {
        (Some(m), Some(v)) => {
            text.push_str(&serialize_matching(m));
            text.push_str(&format!("# value: {v}\n"));
            if let Some(path) = &args.out {
                write_file(path, &serialize_matching(m))?;
            }
            0
        }
        _ => {
            text.push_str("# infeasible\n");
            1
        }
    };
    text.push_str(&format!("# engine: {}\n", engine_name(engine)));
    text.push_str(&format!("# objective: {}\n# regime: {}\n", p.objective, p.regime));
    text.push_str(&format!("# note: {}\n", outcome.certificate_note));
    emit(out, None, &text)?;
    Ok(code)
}

fn oracle(path: &Path, regime: RegimeArg, cap: usize, out: &mut dyn Write) -> Result<i32, Exit> {
    let f = load(path)?;
    let p = DeviatorProblem::new(f.instance, f.deviators, Objective::BlockingPairs, regime.into(), Budget::Optimize);
    let r = oracle_solve_with(&p, OracleLimits::with_cap(cap)).map_err(|e| input_error(e.to_string()))?;
    let opt = |v: Option<usize>| v.map_or("none".to_string(), |v| v.to_string());
    let wit = |m: Option<&Matching>| m.map_or("none".to_string(), pairs_inline);
    let yes_no = |b: bool| if b { "yes" } else { "no" };
    let mut s = String::new();
    s.push_str(&format!("regime: {}\n", r.regime));
    s.push_str(&format!("max-cardinality: {}\n", r.regime_sizes.max_cardinality));
    s.push_str(&format!("perfect-exists: {}\n", yes_no(r.regime_sizes.perfect_exists)));
    s.push_str(&format!("family-size: {}\n", r.family_size));
    s.push_str(&format!("optimum-bp: {}\n", opt(r.optimum_bp)));
    s.push_str(&format!("witness-bp: {}\n", wit(r.witness_bp.as_ref())));
    s.push_str(&format!("optimum-ba: {}\n", opt(r.optimum_ba)));
    s.push_str(&format!("witness-ba: {}\n", wit(r.witness_ba.as_ref())));
    s.push_str(&format!("stable-exists: {}\n", yes_no(r.stable_exists == Some(true))));
    for set in &r.stable_matched_sets {
        s.push_str(&format!("stable-matched-set: {}\n", agents_inline(set)));
    }
    emit(out, None, &s)?;
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn verify(
    instance: &Path,
    matching: &Path,
    objective: ObjectiveArg,
    regime: RegimeArg,
    k: Option<usize>,
    value: Option<usize>,
    out: &mut dyn Write,
) -> Result<i32, Exit> {
    let f = load(instance)?;
    let m = parse_matching(&read(matching)?, &f.instance)
        .map_err(|e| input_error(format!("{}: {e}", matching.display())))?;
    let budget = k.map_or(Budget::Optimize, Budget::AtMost);
    let p = DeviatorProblem::new(f.instance, f.deviators, objective.into(), regime.into(), budget);
    let claimed = value.unwrap_or_else(|| p.value(&m));
    match verify_solution(&p, &m, claimed) {
        Ok(v) => {
            emit(out, None, &format!("ok: {} {v}, {} pairs\n", p.objective, m.len()))?;
            Ok(0)
        }
        Err(e) => {
            emit(out, None, &format!("rejected: {e}\n"))?;
            Ok(1)
        }
    }
}

fn gen(args: GenArgs, out: &mut dyn Write) -> Result<i32, Exit> {
    let spec = GenSpec {
        n: args.n,
        model: args.model.into(),
        list_cap: args.cap,
        deviator_fraction: args.fraction,
        seed: args.seed,
        edge_probability: args.edge_probability,
        deviator_count: args.deviators,
    };
    let p = generate(&spec).map_err(|e| input_error(e.to_string()))?;
    emit(out, args.out.as_deref(), &serialize_instance(&p.instance, &p.deviators))?;
    Ok(0)
}

fn reduce(cmd: Reduce, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Exit> {
    match cmd {
        Reduce::Sat2smi { cnf, out: path, witness } => {
            let f = parse_cnf_22e3(&read(&cnf)?).map_err(|e| input_error(format!("{}: {e}", cnf.display())))?;
            let (p, idx) = sat_to_perfect_smi(&f);
            emit(out, path.as_deref(), &serialize_instance(&p.instance, &p.deviators))?;
            if let Some(wpath) = witness {
                let Some(assignment) = f.find_satisfying_assignment() else {
                    let _ = writeln!(err, "formula is unsatisfiable; no witness written");
                    return Ok(1);
                };
                let m = witness_matching(&f, &assignment, &idx).expect("assignment satisfies the formula");
                write_file(&wpath, &serialize_matching(&m))?;
            }
            Ok(0)
        }
        Reduce::Smi2sri { instance, out: path } => {
            let f = load(&instance)?;
            let p = DeviatorProblem::new(
                f.instance,
                f.deviators,
                Objective::BlockingPairs,
                SizeRegime::Perfect,
                Budget::AtMost(0),
            );
            let q = smi_to_sri(&p).expect("perfect regime with budget 0");
            emit(out, path.as_deref(), &serialize_instance(&q.instance, &q.deviators))?;
            Ok(0)
        }
        Reduce::Complete { instance, out: path } => {
            let f = load(&instance)?;
            let p = DeviatorProblem::new(
                f.instance,
                f.deviators,
                Objective::BlockingPairs,
                SizeRegime::Any,
                Budget::AtMost(0),
            );
            let q = complete_lists(&p);
            emit(out, path.as_deref(), &serialize_instance(&q.instance, &q.deviators))?;
            Ok(0)
        }
        Reduce::MinbaComplete { instance, k, out: path } => {
            let f = load(&instance)?;
            let inst = minba_complete(&f.instance, k);
            let d = DeviatorSet::all(inst.num_agents());
            emit(out, path.as_deref(), &serialize_instance(&inst, &d))?;
            Ok(0)
        }
    }
}

/// Runs the command line; `argv[0]` is the program name.
pub fn cli_main<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match cli.command {
        Command::Validate { instance } => load(&instance).and_then(|f| {
            let i = &f.instance;
            let text = format!(
                "valid: {} agents, {} deviators, {} acceptable pairs, d_max {}, {}\n",
                i.num_agents(),
                f.deviators.len(),
                i.num_edges(),
                i.d_max(),
                if i.sides().is_some() { "bipartite tag" } else { "no bipartite tag" }
            );
            emit(out, None, &text).map(|_| 0)
        }),
        Command::Solve(args) => solve(args, out),
        Command::Oracle { instance, regime, cap } => oracle(&instance, regime, cap, out),
        Command::Verify { instance, matching, objective, regime, k, value } => {
            verify(&instance, &matching, objective, regime, k, value, out)
        }
        Command::Gen(args) => gen(args, out),
        Command::Reduce(cmd) => reduce(cmd, out, err),
    };
    match result {
        Ok(code) => code,
        Err(Exit(code, msg)) => {
            let _ = writeln!(err, "dsm: {msg}");
            code
        }
    }
}
