use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use lcllab_core::depsim::{simulate, QuantumPi, SimOptions};
use lcllab_core::detectors::{
    check_badgraph, check_badoctopus, check_badtree, solve_badgraph, solve_badoctopus,
    solve_badtree, GraphOut, OctOut, TreeOut,
};
use lcllab_core::gadgets::{
    build_octopus, build_tree_gadget, check_octopus, check_proper, check_tree, compress, lift,
    BipartiteInstance, Instance, OctopusSpec, TreeGadgetSpec,
};
use lcllab_core::ghz::{
    check_iterghz, check_pi, hard_instance, iterghz_as_linearizable, quantum_solve_iterghz,
    solve_pi, GhzLabel, Pi, PiOut,
};
use lcllab_core::graph::{components, diameter, from_json, to_dot, to_json, GraphJson, Scope};
use lcllab_core::lcl::{Budget, Violation};
use lcllab_core::localsim::{run_sync, BadTreeProgram, FloodProgram, RunConfig, RunTrace};

#[derive(Parser)]
#[command(
    name = "lcllab",
    version,
    about = "Gadgets, detectors, GHZ and LOCAL simulation for LCLs"
)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Generate an instance.
    Gen {
        #[command(subcommand)]
        what: GenWhat,
    },
    /// Lift a bipartite instance into a proper instance.
    Lift {
        #[command(flatten)]
        io: Io,
        #[arg(long = "h", default_value_t = 1)]
        h: u32,
    },
    /// Contract a proper instance back to its bipartite graph.
    Compress {
        #[command(flatten)]
        io: Io,
    },
    /// Verify a structure or a labeling; exit 1 on violations.
    Check {
        #[command(flatten)]
        io: Io,
        #[arg(long, value_enum)]
        problem: CheckProblem,
        /// Labeling JSON (a list of node labels) for labeling problems.
        #[arg(long)]
        labels: Option<PathBuf>,
    },
    /// Solve an error-detection problem and verify the result.
    Detect {
        #[command(flatten)]
        io: Io,
        #[arg(long, value_enum)]
        problem: Detector,
    },
    /// Run an algorithm.
    Run {
        #[command(subcommand)]
        what: RunWhat,
    },
    /// Basic graph statistics.
    Stats {
        #[command(flatten)]
        io: Io,
    },
    /// Re-emit a graph as JSON or DOT.
    Export {
        #[command(flatten)]
        io: Io,
        #[arg(long, value_enum, default_value_t = Format::Dot)]
        format: Format,
    },
}

#[derive(Args)]
struct Io {
    #[arg(long = "in")]
    input: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum GenWhat {
    Tree {
        #[arg(long)]
        height: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Octopus {
        #[arg(long)]
        x: u32,
        /// Ports per head leaf, comma separated (1 or 2 each).
        #[arg(long, value_delimiter = ',')]
        eta: Vec<u8>,
        /// Port heights grouped by leaf: "2,3;1".
        #[arg(long)]
        heights: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random bipartite instance (black degree 3).
    Bipartite {
        #[arg(long)]
        whites: usize,
        #[arg(long, default_value_t = 3)]
        max_deg: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lift of a Δ-biregular instance sized for n nodes.
    Hard {
        #[arg(long)]
        delta: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum RunWhat {
    /// Two-round quantum algorithm on a bipartite instance.
    Quantum {
        #[command(flatten)]
        io: Io,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Full Π solver on a lifted instance.
    Pi {
        #[command(flatten)]
        io: Io,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        stats: bool,
    },
    /// Message-passing run of a built-in program.
    Sync {
        #[command(flatten)]
        io: Io,
        #[arg(long, value_enum)]
        program: Program,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        max_rounds: usize,
    },
    /// Classical simulation of the quantum Π outcome.
    Depsim {
        #[command(flatten)]
        io: Io,
        #[arg(long, value_enum, default_value_t = DepProblem::Pi)]
        problem: DepProblem,
        #[arg(long, value_enum, default_value_t = Oracle::Quantum)]
        oracle: Oracle,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        trials: u64,
        #[arg(long)]
        eps: Option<f64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckProblem {
    Tree,
    Octopus,
    Proper,
    Badtree,
    Badoctopus,
    Badgraph,
    Pi,
}

#[derive(Clone, Copy, ValueEnum)]
enum Detector {
    Badtree,
    Badoctopus,
    Badgraph,
}

#[derive(Clone, Copy, ValueEnum)]
enum Program {
    Flood,
    Badtree,
}

#[derive(Clone, Copy, ValueEnum)]
enum DepProblem {
    Pi,
}

#[derive(Clone, Copy, ValueEnum)]
enum Oracle {
    Quantum,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Dot,
    Json,
}

/// Input problems exit with 2, found violations with 1.
enum Status {
    Clean,
    Violations,
}

fn read(io: &Io) -> Result<String> {
    match &io.input {
        Some(p) => std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display())),
        None => bail!("--in is required"),
    }
}

fn read_graph(io: &Io) -> Result<Instance> {
    let doc: GraphJson<_, _> = serde_json::from_str(&read(io)?).context("parsing graph JSON")?;
    Ok(from_json(doc)?)
}

fn read_bipartite(io: &Io) -> Result<BipartiteInstance> {
    let mut b: BipartiteInstance =
        serde_json::from_str(&read(io)?).context("parsing bipartite JSON")?;
    if b.order.is_empty() {
        b = BipartiteInstance::new(b.whites, b.blacks, b.edges);
    }
    Ok(b)
}

fn emit_text(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit<T: Serialize>(out: &Option<PathBuf>, v: &T) -> Result<()> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    emit_text(out, &s)
}

fn verdict(v: &[Violation]) -> Status {
    if v.is_empty() {
        Status::Clean
    } else {
        Status::Violations
    }
}

#[derive(Serialize)]
struct Report<'a, L: Serialize> {
    problem: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    labels: Option<&'a [L]>,
    violations: &'a [Violation],
    #[serde(skip_serializing_if = "Option::is_none")]
    max_round: Option<usize>,
}

fn report<L: Serialize>(
    out: &Option<PathBuf>,
    problem: &str,
    labels: Option<&[L]>,
    vs: Vec<Violation>,
    max_round: Option<usize>,
) -> Result<Status> {
    emit(
        out,
        &Report {
            problem,
            labels,
            violations: &vs,
            max_round,
        },
    )?;
    Ok(verdict(&vs))
}

fn parse_heights(s: &str) -> Result<Vec<Vec<u32>>> {
    s.split(';')
        .map(|leaf| {
            leaf.split(',')
                .map(|h| {
                    h.trim()
                        .parse::<u32>()
                        .map_err(|e| anyhow!("bad height {h:?}: {e}"))
                })
                .collect()
        })
        .collect()
}

fn gen(what: GenWhat) -> Result<Status> {
    match what {
        GenWhat::Tree { height, out } => {
            if height == 0 {
                bail!("height must be at least 1");
            }
            emit(
                &out,
                &to_json(&build_tree_gadget(TreeGadgetSpec { height })),
            )?;
        }
        GenWhat::Octopus {
            x,
            eta,
            heights,
            out,
        } => {
            let spec = OctopusSpec {
                x,
                eta,
                heights: parse_heights(&heights)?,
            };
            let (g, _) = build_octopus(&spec)?;
            emit(&out, &to_json(&g))?;
        }
        GenWhat::Bipartite {
            whites,
            max_deg,
            seed,
            out,
        } => {
            if whites == 0
                || max_deg == 0
                || whites * max_deg < 3
                || (max_deg == 1 && whites % 3 != 0)
            {
                bail!("no bipartite instance with {whites} whites of degree at most {max_deg}");
            }
            emit(
                &out,
                &BipartiteInstance::random(whites, max_deg, &mut ChaCha8Rng::seed_from_u64(seed)),
            )?;
        }
        GenWhat::Hard {
            delta,
            n,
            seed,
            out,
        } => {
            if delta == 0 {
                bail!("delta must be positive");
            }
            emit(&out, &to_json(&hard_instance(delta, n, seed).1.graph))?;
        }
    }
    Ok(Status::Clean)
}

fn read_labels<L: serde::de::DeserializeOwned>(path: &Option<PathBuf>, n: usize) -> Result<Vec<L>> {
    let p = path
        .as_ref()
        .ok_or_else(|| anyhow!("--labels is required for this problem"))?;
    let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
    let v: serde_json::Value = serde_json::from_str(&text)?;
    // Accept a bare list or a report with a "labels" field.
    let list = v.get("labels").cloned().unwrap_or(v);
    let labels: Vec<L> = serde_json::from_value(list).context("parsing labels")?;
    if labels.len() != n {
        bail!("{} labels for {n} nodes", labels.len());
    }
    Ok(labels)
}

fn check(io: Io, problem: CheckProblem, labels: Option<PathBuf>) -> Result<Status> {
    let g = read_graph(&io)?;
    let none: Option<&[()]> = None;
    match problem {
        CheckProblem::Tree => report(&io.out, "tree", none, check_tree(&g), None),
        CheckProblem::Octopus => report(&io.out, "octopus", none, check_octopus(&g), None),
        CheckProblem::Proper => report(&io.out, "proper", none, check_proper(&g), None),
        CheckProblem::Badtree => {
            let l: Vec<TreeOut> = read_labels(&labels, g.n())?;
            report(&io.out, "badtree", none, check_badtree(&g, &l), None)
        }
        CheckProblem::Badoctopus => {
            let l: Vec<OctOut> = read_labels(&labels, g.n())?;
            report(&io.out, "badoctopus", none, check_badoctopus(&g, &l), None)
        }
        CheckProblem::Badgraph => {
            let l: Vec<GraphOut> = read_labels(&labels, g.n())?;
            report(&io.out, "badgraph", none, check_badgraph(&g, &l), None)
        }
        CheckProblem::Pi => {
            let l: Vec<PiOut<GhzLabel>> = read_labels(&labels, g.n())?;
            report(
                &io.out,
                "pi",
                none,
                check_pi(&g, &iterghz_as_linearizable(), &l),
                None,
            )
        }
    }
}

fn detect(io: Io, problem: Detector) -> Result<Status> {
    let g = read_graph(&io)?;
    match problem {
        Detector::Badtree => {
            let run = solve_badtree(&g);
            let vs = check_badtree(&g, &run.out);
            report(&io.out, "badtree", Some(&run.out), vs, Some(run.end))
        }
        Detector::Badoctopus => {
            let run = solve_badoctopus(&g);
            let vs = check_badoctopus(&g, &run.out);
            let end = run.round.iter().copied().max();
            report(&io.out, "badoctopus", Some(&run.out), vs, end)
        }
        Detector::Badgraph => {
            let run = solve_badgraph(&g);
            let vs = check_badgraph(&g, &run.out);
            report(&io.out, "badgraph", Some(&run.out), vs, Some(run.end))
        }
    }
}

#[derive(Serialize)]
struct TraceReport<O: Serialize> {
    program: &'static str,
    rounds: usize,
    output: Vec<O>,
    decided: Vec<usize>,
    radius: Vec<usize>,
    radius_histogram: Vec<usize>,
}

fn trace_report<O: Serialize>(program: &'static str, t: RunTrace<O>) -> TraceReport<O> {
    let radius_histogram = t.radius_histogram();
    TraceReport {
        program,
        rounds: t.rounds,
        output: t.output,
        decided: t.decided,
        radius: t.radius,
        radius_histogram,
    }
}

#[derive(Serialize)]
struct PiStats {
    n: usize,
    violations: usize,
    promise_nodes: usize,
    max_view_radius: usize,
    locality: usize,
    badgraph_end: usize,
    octopus_radius: usize,
    norm_drift: f64,
}

#[derive(Serialize)]
struct DepsimStats {
    trials: u64,
    successes: u64,
    success_rate: f64,
    n: usize,
    t: usize,
    eps: f64,
    /// Total locality per trial, as value → count.
    locality_histogram: BTreeMap<usize, u64>,
    d_size: Vec<usize>,
    clusters: Vec<usize>,
    parts: Vec<usize>,
    max_cluster_diameter: Vec<usize>,
}

fn run(what: RunWhat) -> Result<Status> {
    match what {
        RunWhat::Quantum { io, seed } => {
            let b = read_bipartite(&io)?;
            let run = quantum_solve_iterghz(&b, seed);
            let vs = check_iterghz(&b, &run.out);
            #[derive(Serialize)]
            struct Q<'a> {
                run: &'a lcllab_core::ghz::IterGhzRun,
                violations: &'a [Violation],
            }
            emit(
                &io.out,
                &Q {
                    run: &run,
                    violations: &vs,
                },
            )?;
            Ok(verdict(&vs))
        }
        RunWhat::Pi { io, seed, stats } => {
            let g = read_graph(&io)?;
            let run = solve_pi(&g, seed)?;
            let vs = check_pi(&g, &iterghz_as_linearizable(), &run.out);
            if stats {
                emit(
                    &io.out,
                    &PiStats {
                        n: g.n(),
                        violations: vs.len(),
                        promise_nodes: run.out.iter().filter(|o| o.is_promise()).count(),
                        max_view_radius: run.round.iter().copied().max().unwrap_or(0),
                        locality: run.locality,
                        badgraph_end: run.badgraph_end,
                        octopus_radius: run.octopus_radius,
                        norm_drift: run.norm_drift,
                    },
                )?;
                Ok(verdict(&vs))
            } else {
                report(&io.out, "pi", Some(&run.out), vs, Some(run.locality))
            }
        }
        RunWhat::Sync {
            io,
            program,
            seed,
            max_rounds,
        } => {
            let g = read_graph(&io)?;
            let cfg = RunConfig::rounds(max_rounds);
            match program {
                Program::Flood => emit(
                    &io.out,
                    &trace_report("flood", run_sync(&g, &FloodProgram, seed, cfg)?),
                )?,
                Program::Badtree => {
                    let t = run_sync(&g, &BadTreeProgram, seed, cfg)?;
                    let vs = check_badtree(&g, &t.output);
                    emit(&io.out, &trace_report("badtree", t))?;
                    return Ok(verdict(&vs));
                }
            }
            Ok(Status::Clean)
        }
        RunWhat::Depsim {
            io,
            problem: DepProblem::Pi,
            oracle: Oracle::Quantum,
            seed,
            trials,
            eps,
        } => {
            let g = read_graph(&io)?;
            if let Some(e) = eps {
                if !(e > 0.0 && e <= 1.0) {
                    bail!("--eps must lie in (0, 1]");
                }
            }
            if trials == 0 {
                bail!("--trials must be positive");
            }
            let pi = Pi {
                problem: iterghz_as_linearizable(),
            };
            let opts = SimOptions {
                eps,
                budget: Budget::from_env(),
            };
            let mut s = DepsimStats {
                trials,
                successes: 0,
                success_rate: 0.0,
                n: g.n(),
                t: 0,
                eps: 0.0,
                locality_histogram: BTreeMap::new(),
                d_size: Vec::new(),
                clusters: Vec::new(),
                parts: Vec::new(),
                max_cluster_diameter: Vec::new(),
            };
            for i in 0..trials {
                let r = simulate(&QuantumPi, &pi, &g, seed.wrapping_add(i), opts)?;
                if r.labeling
                    .as_ref()
                    .is_some_and(|l| check_pi(&g, &pi.problem, l).is_empty())
                {
                    s.successes += 1;
                }
                s.t = r.t;
                s.eps = r.eps;
                *s.locality_histogram.entry(r.locality.total()).or_default() += 1;
                s.d_size.push(r.clustering.d.len());
                s.clusters.push(r.clustering.clusters.len());
                s.parts.push(r.partition.parts.len());
                s.max_cluster_diameter.push(r.clustering.max_diameter(&g));
            }
            s.success_rate = s.successes as f64 / trials as f64;
            emit(&io.out, &s)?;
            Ok(if s.successes == trials {
                Status::Clean
            } else {
                Status::Violations
            })
        }
    }
}

#[derive(Serialize)]
struct GraphStats {
    n: usize,
    m: usize,
    max_degree: usize,
    components: usize,
    diameter: Option<usize>,
    node_kinds: BTreeMap<String, usize>,
    proper_violations: usize,
    parallel_edges: bool,
}

fn stats(io: Io) -> Result<Status> {
    let g = read_graph(&io)?;
    let (comp, k) = components(&g, Scope::FULL);
    let mut node_kinds = BTreeMap::new();
    for v in g.nodes() {
        *node_kinds.entry(g.label(v).to_string()).or_default() += 1;
    }
    // Largest component diameter.
    let diam = (0..k)
        .filter_map(|c| {
            let nodes: Vec<usize> = g.nodes().filter(|&v| comp[v] == c).collect();
            diameter(&g, &nodes[..1], Scope::FULL)
                .map(|_| diameter(&g, &nodes, Scope::FULL).unwrap())
        })
        .max();
    emit(
        &io.out,
        &GraphStats {
            n: g.n(),
            m: g.m(),
            max_degree: g.max_degree(),
            components: k,
            diameter: diam,
            node_kinds,
            proper_violations: check_proper(&g).len(),
            parallel_edges: g.has_parallel_edges(),
        },
    )?;
    Ok(Status::Clean)
}

fn dispatch(cli: Cli) -> Result<Status> {
    match cli.verb {
        Verb::Gen { what } => gen(what),
        Verb::Lift { io, h } => {
            let b = read_bipartite(&io)?;
            emit(&io.out, &to_json(&lift(&b, h)?.graph))?;
            Ok(Status::Clean)
        }
        Verb::Compress { io } => {
            let (b, _) = compress(&read_graph(&io)?)?;
            emit(&io.out, &b)?;
            Ok(Status::Clean)
        }
        Verb::Check {
            io,
            problem,
            labels,
        } => check(io, problem, labels),
        Verb::Detect { io, problem } => detect(io, problem),
        Verb::Run { what } => run(what),
        Verb::Stats { io } => stats(io),
        Verb::Export { io, format } => {
            let g = read_graph(&io)?;
            match format {
                Format::Dot => emit_text(&io.out, &to_dot(&g, "g"))?,
                Format::Json => emit(&io.out, &to_json(&g))?,
            }
            Ok(Status::Clean)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match dispatch(cli) {
        Ok(Status::Clean) => ExitCode::SUCCESS,
        Ok(Status::Violations) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
