//! Command-line surface. The binary only forwards to [`run`], which keeps
//! every subcommand testable in-process.
//!
//! Exit codes: 0 success, 1 input or validation error, 2 infeasible or
//! search budget exhausted.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::artifact::{
    factor_digraph, factorization_to_json, parse_graph_spec, parse_schedule_csv,
    parse_spanning_factorization, parse_word_set, same_arcs, schedule_to_csv, word_set_to_json,
};
use crate::cost::{compare_networks, network_cost, regime_time, Candidate, TauMode};
use crate::error::{Error, Result};
use crate::factor::{
    one_factorize, search_spanning_factorization, spanning_factorization_from_cayley,
    SearchOutcome, SpanningFactorization, DEFAULT_FACTOR_BUDGET,
};
use crate::fixtures::{builtin, GraphSource};
use crate::graph::{as_digraph, build_cayley_coset_graph, CosetGraph, Digraph};
use crate::layers::{layer_profile, LayerProfile};
use crate::schedule::{
    best_layer_two_words, classify, corollary6_bound, diameter2_schedule, exact_min_schedule,
    greedy_schedule, ExactOutcome, LayerTwoProfile, Schedule, DEFAULT_SCHEDULE_BUDGET,
};
use crate::sim::{expand_cayley_paths, expand_factor_paths, run_transpose, TransposeTrace};
use crate::words::{
    bfs_word_set, regular_bound_exact, WordList, WordMode, WordSet, DEFAULT_SEARCH_BUDGET,
};

/// Fixed default so repeated runs agree.
pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Debug, Parser)]
#[command(
    name = "cayley-transpose",
    version,
    about = "Transpose scheduling on vertex-symmetric digraphs"
)]
pub struct Cli {
    /// Worker threads for parallel distance computations (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
    /// Recorded in reports; every search in this tool is deterministic.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct SourceArgs {
    /// Graph spec file (JSON).
    #[arg(conflicts_with = "builtin", required_unless_present = "builtin")]
    pub spec: Option<PathBuf>,
    /// Built-in graph: c4, q3, z7-124, z5-12, k4, petersen, petersen-digraph, triangle.
    #[arg(long)]
    pub builtin: Option<String>,
}

#[derive(Debug, Args)]
pub struct PlanArgs {
    /// Word set written by `words`.
    #[arg(long, conflicts_with = "factorization")]
    pub words: Option<PathBuf>,
    /// Spanning factorization written by `factorize`.
    #[arg(long)]
    pub factorization: Option<PathBuf>,
    /// Find a spanning factorization by search even for Cayley graphs.
    #[arg(long)]
    pub search: bool,
    /// Node budget for searches.
    #[arg(long)]
    pub budget: Option<u64>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum WordsMode {
    FirstFound,
    LoadBalanced,
    /// Diameter-2 graphs: two-letter words minimizing max (M + N).
    LayerTwo,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Layer counts, diameter and the average-diameter bound.
    Bounds {
        #[command(flatten)]
        source: SourceArgs,
    },
    /// One shortest word per vertex and the per-generator loads.
    Words {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, value_enum, default_value = "load-balanced")]
        mode: WordsMode,
        /// Also compute the exact minimum of the maximum load.
        #[arg(long)]
        exact: bool,
        /// Node budget for the exact search.
        #[arg(long)]
        budget: Option<u64>,
        /// Write the word set as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// 1-factorization or spanning factorization.
    Factorize {
        #[command(flatten)]
        source: SourceArgs,
        /// Plain 1-factorization without words.
        #[arg(long)]
        plain: bool,
        /// Word set written by `words`, translated into factor words.
        #[arg(long)]
        words: Option<PathBuf>,
        /// Find a spanning factorization by search even for Cayley graphs.
        #[arg(long)]
        search: bool,
        /// Node budget for searches.
        #[arg(long)]
        budget: Option<u64>,
        /// Write the factorization as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Time slots for every letter of every word.
    Schedule {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        plan: PlanArgs,
        /// Skip the exact search.
        #[arg(long)]
        greedy: bool,
        /// Largest makespan accepted by the exact search.
        #[arg(long)]
        max_time: Option<usize>,
        /// Write the schedule as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Replay a schedule as an all-pairs exchange.
    Simulate {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        plan: PlanArgs,
        /// Schedule CSV written by `schedule`.
        #[arg(long)]
        schedule: PathBuf,
        /// Write the trace as CSV.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Words, factorization, schedule and replay in one go.
    Pipeline {
        #[command(flatten)]
        source: SourceArgs,
        /// Find a spanning factorization by search even for Cayley graphs.
        #[arg(long)]
        search: bool,
        /// Node budget for searches.
        #[arg(long)]
        budget: Option<u64>,
        /// Largest makespan accepted by the exact search.
        #[arg(long)]
        max_time: Option<usize>,
        /// Directory for words.json, factorization.json, schedule.csv,
        /// trace.csv and report.json.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Rank machine designs under a wire budget.
    Compare {
        /// Design files: one object or an array of objects each.
        networks: Vec<PathBuf>,
        /// Designs must satisfy P·d < this.
        #[arg(long)]
        wire_budget: i128,
        /// `ideal` or a measured transpose time.
        #[arg(long, default_value = "ideal")]
        tau: String,
        /// Write the ranking as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

/// Output of one invocation.
#[derive(Debug, Default)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: 1,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs)
        .build()
    {
        Ok(pool) => pool,
        Err(e) => {
            return Outcome {
                code: 1,
                stdout: String::new(),
                stderr: format!("error: cannot start {} workers: {e}\n", cli.jobs),
            }
        }
    };
    pool.install(|| {
        let mut outcome = Outcome::default();
        match dispatch(&cli, &mut outcome) {
            Ok(code) => outcome.code = code,
            Err(e) => {
                let _ = writeln!(outcome.stderr, "error: {e}");
                outcome.code = 1;
            }
        }
        outcome
    })
}

/// Runs with the process arguments and streams, returning the exit code.
pub fn main_entry() -> i32 {
    let outcome = run(std::env::args_os());
    let _ = std::io::stdout().write_all(outcome.stdout.as_bytes());
    let _ = std::io::stderr().write_all(outcome.stderr.as_bytes());
    outcome.code
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::parse(path.display().to_string(), e.to_string()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::parse(path.display().to_string(), e.to_string()))
}

fn pretty(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("json values serialize");
    s.push('\n');
    s
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

/// A graph in both views: the coset graph when given by a group, and the
/// plain digraph used by the factorization route.
struct Loaded {
    cayley: Option<CosetGraph>,
    digraph: Digraph,
}

impl Loaded {
    fn profile(&self) -> Result<LayerProfile> {
        match &self.cayley {
            Some(g) => layer_profile(g, 0),
            None => layer_profile(&self.digraph, 0),
        }
    }

    /// The coset graph when it has a trivial subgroup.
    fn cayley_graph(&self) -> Option<&CosetGraph> {
        self.cayley.as_ref().filter(|g| g.is_cayley())
    }
}

fn load(args: &SourceArgs) -> Result<Loaded> {
    let source = match (&args.spec, &args.builtin) {
        (_, Some(name)) => builtin(name)?,
        (Some(path), None) => parse_graph_spec(&read(path)?, &path.display().to_string())?,
        (None, None) => return Err(Error::Unsupported("give a spec file or --builtin".into())),
    };
    match source {
        GraphSource::Group(spec) => {
            let g = build_cayley_coset_graph(&spec)?;
            Ok(Loaded {
                digraph: as_digraph(&g),
                cayley: Some(g),
            })
        }
        GraphSource::Digraph(d) => {
            d.regular_degree()?;
            crate::graph::check_strongly_connected(&d)?;
            Ok(Loaded {
                cayley: None,
                digraph: d,
            })
        }
    }
}

/// Which route turns words into paths.
enum Route {
    Cayley(WordSet),
    Factor(SpanningFactorization),
}

impl Route {
    fn list(&self) -> WordList {
        match self {
            Route::Cayley(w) => w.to_word_list(),
            Route::Factor(f) => f.word_list(),
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Route::Cayley(_) => "cayley",
            Route::Factor(_) => "factorization",
        }
    }
}

enum Planned {
    Ready(Route),
    Exhausted { nodes: u64, best_depth: usize },
}

fn default_cayley_words(graph: &CosetGraph, profile: &LayerProfile) -> Result<WordSet> {
    if profile.diameter == 2 {
        if let Ok(w) = best_layer_two_words(graph) {
            return Ok(w);
        }
    }
    bfs_word_set(graph, WordMode::LoadBalanced)
}

fn search_route(loaded: &Loaded, budget: Option<u64>) -> Result<Planned> {
    match search_spanning_factorization(&loaded.digraph, budget.unwrap_or(DEFAULT_FACTOR_BUDGET))? {
        SearchOutcome::Found { factorization, .. } => {
            Ok(Planned::Ready(Route::Factor(factorization)))
        }
        SearchOutcome::Unknown {
            nodes, best_depth, ..
        } => Ok(Planned::Exhausted { nodes, best_depth }),
    }
}

fn plan(loaded: &Loaded, profile: &LayerProfile, args: &PlanArgs) -> Result<Planned> {
    if let Some(path) = &args.words {
        let graph = loaded
            .cayley_graph()
            .ok_or_else(|| Error::Unsupported("--words needs a Cayley graph".into()))?;
        return Ok(Planned::Ready(Route::Cayley(parse_word_set(
            graph,
            &read(path)?,
            &path.display().to_string(),
        )?)));
    }
    if let Some(path) = &args.factorization {
        let f = parse_spanning_factorization(&read(path)?, &path.display().to_string())?;
        if !same_arcs(&factor_digraph(&f.factorization), &loaded.digraph) {
            return Err(Error::Contract(format!(
                "{} does not factor the given graph",
                path.display()
            )));
        }
        return Ok(Planned::Ready(Route::Factor(f)));
    }
    match loaded.cayley_graph() {
        Some(graph) if !args.search => Ok(Planned::Ready(Route::Cayley(default_cayley_words(
            graph, profile,
        )?))),
        _ => search_route(loaded, args.budget),
    }
}

fn exhausted(out: &mut Outcome, nodes: u64, best_depth: usize) -> i32 {
    let _ = writeln!(
        out.stderr,
        "spanning factorization search gave up after {nodes} nodes (deepest word {best_depth})"
    );
    2
}

fn psi(list: &WordList) -> Result<usize> {
    Ok(list.loads()?.into_iter().max().unwrap_or(0))
}

/// `1 + max (M + N)` when every word has at most two letters.
fn corollary6_for(list: &WordList, profile: &LayerProfile) -> Option<usize> {
    (profile.diameter == 2 && list.words.iter().all(|w| w.len() <= 2))
        .then(|| corollary6_bound(&LayerTwoProfile::from_words(list)))
}

struct Scheduled {
    schedule: Schedule,
    proven: bool,
}

/// Exact search up to `max_time` (default: the greedy makespan); `None`
/// when nothing fits.
fn schedule_exact(
    list: &WordList,
    max_time: Option<usize>,
    budget: u64,
) -> Result<Option<Scheduled>> {
    let bound = max_time.unwrap_or_else(|| greedy_schedule(list).makespan());
    Ok(match exact_min_schedule(list, bound, budget)? {
        ExactOutcome::Optimal { schedule, .. } => Some(Scheduled {
            schedule,
            proven: true,
        }),
        ExactOutcome::Inexact { best, .. } => best.map(|schedule| Scheduled {
            schedule,
            proven: false,
        }),
        ExactOutcome::Infeasible { .. } => None,
    })
}

fn replay(loaded: &Loaded, route: &Route, schedule: &Schedule) -> Result<TransposeTrace> {
    match route {
        Route::Cayley(words) => {
            let graph = loaded
                .cayley_graph()
                .expect("Cayley route has a Cayley graph");
            Ok(run_transpose(
                graph,
                &expand_cayley_paths(graph, words, schedule)?,
            ))
        }
        Route::Factor(f) => Ok(run_transpose(
            &f.factorization,
            &expand_factor_paths(f, schedule)?,
        )),
    }
}

fn trace_verdict(trace: &TransposeTrace, theta: usize) -> Value {
    json!({
        "tau": trace.horizon,
        "theta": theta,
        "conflicts": trace.conflicts.len(),
        "undelivered": trace.undelivered.len(),
        "malformed": trace.malformed.len(),
        "delivered": trace.delivered,
        "valid": trace.is_valid(),
        "optimal": trace.is_valid() && trace.horizon == theta,
    })
}

fn dispatch(cli: &Cli, out: &mut Outcome) -> Result<i32> {
    match &cli.command {
        Command::Bounds { source } => {
            let profile = load(source)?.profile()?;
            let mut report = to_value(&profile);
            report["pair_bound"] = json!(profile.pair_bound());
            out.stdout = pretty(&report);
            Ok(0)
        }

        Command::Words {
            source,
            mode,
            exact,
            budget,
            out: path,
        } => {
            let loaded = load(source)?;
            let graph = loaded.cayley_graph().ok_or_else(|| {
                Error::Unsupported("word sets need a Cayley graph (trivial subgroup)".into())
            })?;
            let profile = loaded.profile()?;
            let words = match mode {
                WordsMode::FirstFound => bfs_word_set(graph, WordMode::FirstFound)?,
                WordsMode::LoadBalanced => bfs_word_set(graph, WordMode::LoadBalanced)?,
                WordsMode::LayerTwo => best_layer_two_words(graph)?,
            };
            let list = words.to_word_list();
            let mut report = word_set_to_json(&words);
            report["loads"] = json!(list.loads()?);
            report["psi_W"] = json!(psi(&list)?);
            report["theta"] = json!(profile.theta);
            let mut code = 0;
            if *exact {
                let bound = regular_bound_exact(graph, budget.unwrap_or(DEFAULT_SEARCH_BUDGET))?;
                report["psi_exact"] =
                    json!({ "value": bound.value, "exact": bound.exact, "nodes": bound.nodes });
                if !bound.exact {
                    let _ = writeln!(
                        out.stderr,
                        "exact search budget exhausted; value is an upper bound"
                    );
                    code = 2;
                }
            }
            if let Some(path) = path {
                write(path, &pretty(&report))?;
            }
            out.stdout = pretty(&report);
            Ok(code)
        }

        Command::Factorize {
            source,
            plain,
            words,
            search,
            budget,
            out: path,
        } => {
            let loaded = load(source)?;
            let report = if *plain {
                factorization_to_json(&one_factorize(&loaded.digraph)?, None)
            } else {
                let profile = loaded.profile()?;
                let planned = plan(
                    &loaded,
                    &profile,
                    &PlanArgs {
                        words: words.clone(),
                        factorization: None,
                        search: *search,
                        budget: *budget,
                    },
                )?;
                let sf = match planned {
                    Planned::Exhausted { nodes, best_depth } => {
                        out.stdout = pretty(
                            &json!({ "found": false, "nodes": nodes, "best_depth": best_depth }),
                        );
                        return Ok(exhausted(out, nodes, best_depth));
                    }
                    Planned::Ready(Route::Factor(sf)) => sf,
                    Planned::Ready(Route::Cayley(words)) => {
                        let graph = loaded.cayley_graph().expect("Cayley route");
                        spanning_factorization_from_cayley(graph, &words)?.1
                    }
                };
                let mut report = factorization_to_json(&sf.factorization, Some(&sf.words));
                report["short"] = json!(sf.is_short_for(profile.distance_sum()));
                report
            };
            if let Some(path) = path {
                write(path, &pretty(&report))?;
            }
            out.stdout = pretty(&report);
            Ok(0)
        }

        Command::Schedule {
            source,
            plan: plan_args,
            greedy,
            max_time,
            csv,
        } => {
            let loaded = load(source)?;
            let profile = loaded.profile()?;
            let route = match plan(&loaded, &profile, plan_args)? {
                Planned::Ready(route) => route,
                Planned::Exhausted { nodes, best_depth } => {
                    return Ok(exhausted(out, nodes, best_depth))
                }
            };
            let list = route.list();
            let scheduled = if *greedy {
                Some(Scheduled {
                    schedule: greedy_schedule(&list),
                    proven: false,
                })
            } else {
                schedule_exact(
                    &list,
                    *max_time,
                    plan_args.budget.unwrap_or(DEFAULT_SCHEDULE_BUDGET),
                )?
            };
            let Some(Scheduled { schedule, proven }) = scheduled else {
                let _ = writeln!(
                    out.stderr,
                    "no schedule finishes within {} slots",
                    max_time.unwrap_or(0)
                );
                return Ok(2);
            };
            schedule.validate(&list)?;
            let flags = classify(&list, &schedule, &profile)?;
            if let Some(path) = csv {
                write(path, &schedule_to_csv(&list, &schedule)?)?;
            }
            out.stdout = pretty(&json!({
                "route": route.name(),
                "makespan": schedule.makespan(),
                "proven_minimum": proven,
                "flags": to_value(&flags),
                "bounds": {
                    "theta": profile.theta,
                    "psi_for_W": psi(&list)?,
                    "corollary6": corollary6_for(&list, &profile),
                },
            }));
            Ok(0)
        }

        Command::Simulate {
            source,
            plan: plan_args,
            schedule,
            trace: trace_path,
        } => {
            let loaded = load(source)?;
            let profile = loaded.profile()?;
            let route = match plan(&loaded, &profile, plan_args)? {
                Planned::Ready(route) => route,
                Planned::Exhausted { nodes, best_depth } => {
                    return Ok(exhausted(out, nodes, best_depth))
                }
            };
            let list = route.list();
            let sched =
                parse_schedule_csv(&list, &read(schedule)?, &schedule.display().to_string())?;
            let trace = replay(&loaded, &route, &sched)?;
            if let Some(path) = trace_path {
                write(path, &trace.to_csv())?;
            }
            out.stdout = pretty(&trace_verdict(&trace, profile.theta));
            Ok(if trace.is_valid() { 0 } else { 1 })
        }

        Command::Pipeline {
            source,
            search,
            budget,
            max_time,
            out_dir,
        } => {
            let loaded = load(source)?;
            let profile = loaded.profile()?;
            let args = PlanArgs {
                words: None,
                factorization: None,
                search: *search,
                budget: *budget,
            };
            let route = match plan(&loaded, &profile, &args)? {
                Planned::Ready(route) => route,
                Planned::Exhausted { nodes, best_depth } => {
                    return Ok(exhausted(out, nodes, best_depth))
                }
            };
            let list = route.list();
            let schedule_budget = budget.unwrap_or(DEFAULT_SCHEDULE_BUDGET);
            let (schedule, proven, diameter2) = match &route {
                Route::Cayley(_) if profile.diameter <= 2 && max_time.is_none() => {
                    match diameter2_schedule(&list, &profile, schedule_budget) {
                        Ok(report) => (report.schedule.clone(), true, Some(to_value(&report))),
                        Err(Error::Unsupported(_)) => {
                            match schedule_exact(&list, None, schedule_budget)? {
                                Some(s) => (s.schedule, s.proven, None),
                                None => {
                                    return Err(Error::Internal("greedy bound infeasible".into()))
                                }
                            }
                        }
                        Err(e) => return Err(e),
                    }
                }
                _ => match schedule_exact(&list, *max_time, schedule_budget)? {
                    Some(s) => (s.schedule, s.proven, None),
                    None => {
                        let _ = writeln!(
                            out.stderr,
                            "no schedule finishes within {} slots",
                            max_time.unwrap_or(0)
                        );
                        return Ok(2);
                    }
                },
            };
            let flags = classify(&list, &schedule, &profile)?;
            let trace = replay(&loaded, &route, &schedule)?;
            let psi_w = psi(&list)?;

            if let Some(dir) = out_dir {
                fs::create_dir_all(dir)
                    .map_err(|e| Error::parse(dir.display().to_string(), e.to_string()))?;
                let sf = match &route {
                    Route::Cayley(words) => {
                        let graph = loaded.cayley_graph().expect("Cayley route");
                        write(&dir.join("words.json"), &pretty(&word_set_to_json(words)))?;
                        spanning_factorization_from_cayley(graph, words)?.1
                    }
                    Route::Factor(sf) => sf.clone(),
                };
                write(
                    &dir.join("factorization.json"),
                    &pretty(&factorization_to_json(&sf.factorization, Some(&sf.words))),
                )?;
                write(
                    &dir.join("schedule.csv"),
                    &schedule_to_csv(&list, &schedule)?,
                )?;
                write(&dir.join("trace.csv"), &trace.to_csv())?;
                write(
                    &dir.join("report.json"),
                    &pretty(&json!({
                        "route": route.name(),
                        "seed": cli.seed,
                        "profile": to_value(&profile),
                        "psi_W": psi_w,
                        "proven_minimum": proven,
                        "flags": to_value(&flags),
                        "diameter2": diameter2,
                        "verdict": trace_verdict(&trace, profile.theta),
                    })),
                )?;
            }
            let optimal = trace.is_valid() && trace.horizon == profile.theta;
            out.stdout = format!(
                "tau={} theta={} psi_W={} optimal={}\n",
                trace.horizon, profile.theta, psi_w, optimal
            );
            if !trace.is_valid() {
                return Err(Error::Internal(format!(
                    "replay found {} conflicts and {} undelivered pairs",
                    trace.conflicts.len(),
                    trace.undelivered.len()
                )));
            }
            Ok(0)
        }

        Command::Compare {
            networks,
            wire_budget,
            tau,
            csv,
        } => {
            let mut candidates: Vec<Candidate> = Vec::new();
            for path in networks {
                let text = read(path)?;
                let value: Value = serde_json::from_str(&text).map_err(|e| {
                    Error::parse(
                        format!("{}:{}:{}", path.display(), e.line(), e.column()),
                        e.to_string(),
                    )
                })?;
                let parsed = match value {
                    Value::Array(_) => serde_json::from_value::<Vec<Candidate>>(value),
                    other => serde_json::from_value::<Candidate>(other).map(|c| vec![c]),
                }
                .map_err(|e| Error::parse(path.display().to_string(), e.to_string()))?;
                candidates.extend(parsed);
            }
            if candidates.len() < 2 {
                return Err(Error::Unsupported(format!(
                    "compare needs at least two designs, got {}",
                    candidates.len()
                )));
            }
            let tau_mode = match tau.as_str() {
                "ideal" => TauMode::Ideal,
                t => TauMode::Measured(t.parse().map_err(|_| {
                    Error::parse(
                        "--tau",
                        format!("expected `ideal` or an integer, got {t:?}"),
                    )
                })?),
            };
            let verdict = compare_networks(&candidates, *wire_budget, tau_mode)?;
            let regimes: Vec<Value> = candidates
                .iter()
                .map(|c| {
                    let gamma = network_cost(c.params.processors, c.params.degree, c.params.rho);
                    match regime_time(&c.params, gamma) {
                        Ok(r) => json!({ "name": c.name, "regime": to_value(&r) }),
                        Err(e) => json!({ "name": c.name, "regime": null, "note": e.to_string() }),
                    }
                })
                .collect();
            if let Some(path) = csv {
                let mut w = csv::Writer::from_writer(Vec::new());
                let io = |e: csv::Error| Error::Internal(e.to_string());
                w.write_record([
                    "rank",
                    "name",
                    "P",
                    "d",
                    "wires",
                    "within_budget",
                    "gamma",
                    "T_p",
                    "T_c",
                    "T",
                ])
                .map_err(io)?;
                for (i, r) in verdict.ranking.iter().enumerate() {
                    w.write_record([
                        (i + 1).to_string(),
                        r.name.clone(),
                        r.processors.to_string(),
                        r.degree.to_string(),
                        r.wires.to_string(),
                        r.within_budget.to_string(),
                        r.gamma.to_string(),
                        r.times.compute.to_string(),
                        r.times.communicate.to_string(),
                        r.times.total.to_string(),
                    ])
                    .map_err(io)?;
                }
                let bytes = w.into_inner().map_err(|e| Error::Internal(e.to_string()))?;
                write(
                    path,
                    &String::from_utf8(bytes).expect("csv output is utf-8"),
                )?;
            }
            let mut report = to_value(&verdict);
            report["regimes"] = Value::Array(regimes);
            out.stdout = pretty(&report);
            if verdict.winner.is_none() {
                let _ = writeln!(out.stderr, "{}", verdict.explanation);
                return Ok(2);
            }
            Ok(0)
        }
    }
}
