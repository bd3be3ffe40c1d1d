// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! `localconn` command-line front end.
//!
//! Every command prints one JSON document on stdout. `--json-out` writes
//! the same document to a file.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use localconn::bruteforce::{
    bf_local_witness, bf_min_edge_cut_with, bf_min_vertex_cut_with, AugmentOrder, OracleLimits,
};
use localconn::generators::{self as gens, GenMeta};
use localconn::global_vc::{min_vertex_cut, vc_check, FrameworkConfig, Scheme, VcVerdict};
use localconn::graph::{parse_edge_list, Graph};
use localconn::local_ec::{gap_for, local_ec, local_ec_dfs, LocalEcParams, LocalRun};
use localconn::local_vc::local_vc;
use localconn::oracle::{IncidenceOracle, QueryOracle};
use localconn::report::{emit_plot_data, emit_plot_data_merged, RunReport};
use localconn::rng::{seeded, task_seed};
use localconn::suites::{run_suite, SuiteOptions, SUITES};
use localconn::tester::{run_tester, Property, TestInstance, TesterConfig, TesterModel};
use localconn::witness::CutWitness;

#[derive(Parser, Debug)]
#[command(name = "localconn", version, about = "Local cuts, vertex connectivity and connectivity testers")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Master seed; a random one is drawn and reported when omitted.
    #[arg(long, global = true)]
    rng_seed: Option<u64>,
    /// Also write the JSON output to this file.
    #[arg(long, global = true)]
    json_out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct GraphArgs {
    /// Edge-list file.
    #[arg(long)]
    graph: PathBuf,
    /// Read lines as arcs instead of undirected edges.
    #[arg(long)]
    directed: bool,
}

#[derive(Args, Debug, Clone)]
struct LocalArgs {
    #[command(flatten)]
    input: GraphArgs,
    #[arg(long)]
    seed_vertex: usize,
    #[arg(long)]
    nu: usize,
    #[arg(long)]
    k: usize,
    #[arg(long, conflicts_with = "eps")]
    gap: Option<usize>,
    /// Sets `gap = ⌊εk⌋`.
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long, default_value_t = 1)]
    trials: usize,
    /// Skip the `C·k·ν < m·(gap+1)` precondition. Returned cuts are still
    /// valid; the success probability and query bounds no longer apply.
    #[arg(long)]
    relaxed: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Local edge-cut search from a seed vertex.
    Localec {
        #[command(flatten)]
        local: LocalArgs,
        /// Depth-first variant (requires --eps).
        #[arg(long)]
        dfs: bool,
    },
    /// Local vertex-cut search from a seed vertex.
    Localvc {
        #[command(flatten)]
        local: LocalArgs,
    },
    /// Decide k-vertex-connectivity, or compute the vertex connectivity.
    Vc {
        #[command(flatten)]
        input: GraphArgs,
        /// Threshold to check; omit to compute κ.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 0.5)]
        eps: f64,
        /// Exact answer (`εk < 1` in every check).
        #[arg(long)]
        exact: bool,
        #[arg(long, value_enum, default_value_t = SchemeArg::Edge)]
        scheme: SchemeArg,
        /// Multiplies every sample count.
        #[arg(long, default_value_t = 1)]
        boost: usize,
    },
    /// Property tester for k-edge or k-vertex connectivity.
    Test {
        #[command(flatten)]
        input: GraphArgs,
        #[arg(long, value_enum)]
        property: PropertyArg,
        #[arg(long, value_enum, default_value_t = ModelArg::Unbounded)]
        model: ModelArg,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        eps: f64,
        /// Average degree hint for the unbounded model.
        #[arg(long, conflicts_with = "d")]
        dbar: Option<f64>,
        /// Degree bound for the bounded model.
        #[arg(long)]
        d: Option<usize>,
        /// Input has no parallel arcs or loops.
        #[arg(long)]
        simple: bool,
        #[arg(long, default_value_t = 1)]
        trials: usize,
    },
    /// Brute-force reference answers for small graphs.
    Oracle {
        #[command(subcommand)]
        query: OracleQuery,
    },
    /// Write a generated graph and its JSON sidecar.
    Gen {
        /// Edge-list output; metadata goes to `<out>.json`.
        #[arg(long)]
        out: PathBuf,
        #[command(subcommand)]
        family: Family,
    },
    /// Run an acceptance suite (or `all`).
    Suite {
        #[arg(required_unless_present = "list")]
        name: Option<String>,
        /// Multiplies trial counts.
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
        /// Write query and runtime curves as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// List suite names and exit.
        #[arg(long)]
        list: bool,
    },
}

#[derive(Subcommand, Debug)]
enum OracleQuery {
    Edgecut {
        #[command(flatten)]
        input: GraphArgs,
        #[arg(long, value_enum, default_value_t = OrderArg::Bfs)]
        order: OrderArg,
    },
    Vertexcut {
        #[command(flatten)]
        input: GraphArgs,
        #[arg(long, value_enum, default_value_t = OrderArg::Bfs)]
        order: OrderArg,
    },
    Localwitness {
        #[command(flatten)]
        input: GraphArgs,
        #[arg(long)]
        seed_vertex: usize,
        #[arg(long)]
        nu: usize,
        /// Only cuts below this size count.
        #[arg(long)]
        kmax: usize,
    },
}

#[derive(Subcommand, Debug)]
enum Family {
    Cycle {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        undirected: bool,
    },
    Clique {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        directed: bool,
    },
    Hypercube {
        #[arg(long)]
        dim: u32,
    },
    Circulant {
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        offsets: Vec<usize>,
        #[arg(long)]
        directed: bool,
    },
    UnionOfCycles {
        #[arg(long)]
        count: usize,
        #[arg(long)]
        len: usize,
        #[arg(long)]
        directed: bool,
    },
    GluedCliques {
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        #[arg(long)]
        shared: usize,
    },
    Gnp {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        directed: bool,
    },
    Regular {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
    },
    RingOfCliques {
        #[arg(long)]
        count: usize,
        #[arg(long)]
        size: usize,
    },
    PlantedEdgeCut {
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        #[arg(long)]
        c: usize,
    },
    PlantedLocalCut {
        #[arg(long)]
        a: usize,
        #[arg(long)]
        c: usize,
        #[arg(long)]
        base: usize,
        #[arg(long, default_value_t = 3)]
        h: usize,
    },
    PlantedVertexCut {
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        directed: bool,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum SchemeArg {
    Edge,
    Node,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum PropertyArg {
    Kec,
    Kvc,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ModelArg {
    Unbounded,
    Bounded,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum OrderArg {
    Bfs,
    Dfs,
}

impl From<OrderArg> for AugmentOrder {
    fn from(o: OrderArg) -> Self {
        match o {
            OrderArg::Bfs => AugmentOrder::Bfs,
            OrderArg::Dfs => AugmentOrder::Dfs,
        }
    }
}

fn load(args: &GraphArgs) -> Result<Graph> {
    let text = fs::read_to_string(&args.graph)
        .with_context(|| format!("reading {}", args.graph.display()))?;
    parse_edge_list(&text, args.directed).with_context(|| format!("parsing {}", args.graph.display()))
}

fn ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

fn witness_json(g: &Graph, w: &CutWitness) -> Value {
    match w {
        CutWitness::EdgeCut { set, .. } => json!({
            "set": set,
            "cut_size": w.size(),
            "volume": g.cut_stats(set).vol_out,
        }),
        CutWitness::VertexCut(t) => json!({
            "left_size": t.left.len(),
            "separator_size": t.separator.len(),
            "right_size": t.right_len(),
            "separator": t.separator,
        }),
    }
}

fn local_trial(g: &Graph, run: &LocalRun, queries: u64, wall: f64) -> Value {
    let mut out = json!({ "result": "bottom", "queries": queries, "time_ms": wall });
    if let Some(w) = run.result.witness() {
        out["result"] = json!("found");
        if let (Value::Object(o), Value::Object(extra)) = (&mut out, witness_json(g, w)) {
            o.extend(extra);
        }
    }
    out
}

fn local_gap(a: &LocalArgs) -> usize {
    match (a.gap, a.eps) {
        (Some(g), _) => g,
        (None, Some(e)) => gap_for(a.k, e),
        (None, None) => 0,
    }
}

fn cmd_local(a: &LocalArgs, seed: u64, vertex: bool, dfs: bool) -> Result<Value> {
    let g = load(&a.input)?;
    let gap = local_gap(a);
    if dfs && a.eps.is_none() {
        bail!("--dfs needs --eps");
    }
    let mut trials = Vec::with_capacity(a.trials);
    let mut found = 0;
    for t in 0..a.trials {
        let s = task_seed(seed, t as u64);
        let mut oracle = QueryOracle::unbounded(&g);
        if a.relaxed {
            oracle = oracle.hiding_arc_count();
        }
        let start = Instant::now();
        let run = if vertex {
            local_vc(&mut oracle, a.seed_vertex, a.nu, a.k, gap, s)?
        } else if dfs {
            local_ec_dfs(&mut oracle, a.seed_vertex, a.nu, a.k, a.eps.unwrap_or(1.0), s)?
        } else {
            let p = LocalEcParams { x: a.seed_vertex, nu: a.nu, k: a.k, gap, seed: s };
            local_ec(&mut oracle, &p)?
        };
        let wall = ms(start);
        found += usize::from(run.result.is_found());
        trials.push(local_trial(&g, &run, oracle.edge_queries(), wall));
    }
    Ok(json!({
        "command": if vertex { "localvc" } else { "localec" },
        "rng_seed": seed,
        "gap": gap,
        "found_rate": found as f64 / a.trials.max(1) as f64,
        "trials": trials,
    }))
}

#[allow(clippy::too_many_arguments)]
fn cmd_vc(
    input: &GraphArgs,
    k: Option<usize>,
    eps: f64,
    exact: bool,
    scheme: SchemeArg,
    boost: usize,
    seed: u64,
) -> Result<Value> {
    let g = load(input)?;
    let cfg = FrameworkConfig {
        scheme: match scheme {
            SchemeArg::Edge => Scheme::EdgeSampling,
            SchemeArg::Node => Scheme::NodeSampling,
        },
        boost,
        seed,
        ..FrameworkConfig::default()
    };
    let start = Instant::now();
    match k {
        Some(k) => {
            let eps = if exact { (0.5 / k as f64).min(eps) } else { eps };
            let r = vc_check(&g, k, eps, &cfg)?;
            let (verdict, cut) = match &r.verdict {
                VcVerdict::Connected { .. } => ("connected", Value::Null),
                VcVerdict::Cut { witness } => ("cut", serde_json::to_value(witness)?),
            };
            Ok(json!({
                "command": "vc",
                "rng_seed": seed,
                "k": k,
                "eps": eps,
                "verdict": verdict,
                "kappa": r.verdict.witness().map(|w| w.separator.len()),
                "cut": cut,
                "mode": r.mode,
                "samples_used": r.samples_used,
                "pairs_run": r.pairs_run,
                "queries": r.edge_queries,
                "wall_ms": ms(start),
            }))
        }
        None => {
            let est = min_vertex_cut(&g, eps, exact, &cfg)?;
            Ok(json!({
                "command": "vc",
                "rng_seed": seed,
                "eps": eps,
                "exact": exact,
                "verdict": if est.witness.is_some() { "cut" } else { "complete" },
                "kappa": est.kappa,
                "lower": est.lower,
                "upper": est.upper,
                "cut": est.witness,
                "checks": est.checks,
                "wall_ms": ms(start),
            }))
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_test(
    input: &GraphArgs,
    property: PropertyArg,
    model: ModelArg,
    k: usize,
    eps: f64,
    dbar: Option<f64>,
    d: Option<usize>,
    simple: bool,
    trials: usize,
    seed: u64,
) -> Result<Value> {
    let g = load(input)?;
    let model = match model {
        ModelArg::Unbounded => TesterModel::Unbounded { avg_degree: dbar },
        ModelArg::Bounded => {
            let d = d.context("the bounded model needs --d")?;
            TesterModel::Bounded { d }
        }
    };
    let property = match property {
        PropertyArg::Kec => Property::EdgeConnectivity,
        PropertyArg::Kvc => Property::VertexConnectivity,
    };
    let inst = TestInstance::new(&g);
    let mut records = Vec::with_capacity(trials);
    let mut rejects = 0;
    let mut max_queries = 0;
    for t in 0..trials {
        let mut cfg = TesterConfig::new(k, eps, model, task_seed(seed, t as u64));
        cfg.simple_graph = simple;
        let r = run_tester(&inst, property, &cfg)?;
        max_queries = max_queries.max(r.queries());
        let mut rec = json!({
            "verdict": if r.verdict.is_reject() { "reject" } else { "accept" },
            "queries": r.queries(),
            "edge_queries": r.edge_queries,
            "degree_queries": r.degree_queries,
            "cap": r.cap,
        });
        if let localconn::tester::TestVerdict::Reject { witness } = &r.verdict {
            rejects += 1;
            rec["witness"] = witness_json(&g, witness);
        }
        records.push(rec);
    }
    Ok(json!({
        "command": "test",
        "rng_seed": seed,
        "k": k,
        "eps": eps,
        "reject_rate": rejects as f64 / trials.max(1) as f64,
        "accept_rate": (trials - rejects) as f64 / trials.max(1) as f64,
        "max_queries": max_queries,
        "trials": records,
    }))
}

fn cmd_oracle(q: &OracleQuery) -> Result<Value> {
    let limits = OracleLimits::default();
    Ok(match q {
        OracleQuery::Edgecut { input, order } => {
            let g = load(input)?;
            let a = bf_min_edge_cut_with(&g, &limits, (*order).into())?;
            json!({ "command": "oracle edgecut", "value": a.value, "set": a.set })
        }
        OracleQuery::Vertexcut { input, order } => {
            let g = load(input)?;
            let a = bf_min_vertex_cut_with(&g, &limits, (*order).into())?;
            json!({ "command": "oracle vertexcut", "kappa": a.kappa(), "answer": a })
        }
        OracleQuery::Localwitness { input, seed_vertex, nu, kmax } => {
            let g = load(input)?;
            let a = bf_local_witness(&g, *seed_vertex, *nu, *kmax, &limits)?;
            json!({ "command": "oracle localwitness", "answer": a })
        }
    })
}

fn generate(family: &Family, seed: u64) -> Result<(Graph, GenMeta)> {
    let mut rng = seeded(seed);
    let plain = |name: &str, params: Value, g: Graph| {
        let meta = GenMeta::new(name, params, &g);
        (g, meta)
    };
    let (g, mut meta) = match *family {
        Family::Cycle { n, undirected } => {
            let g = if undirected { gens::gen_cycle_undirected(n) } else { gens::gen_cycle(n) };
            plain("cycle", json!({ "n": n }), g)
        }
        Family::Clique { n, directed } => plain("clique", json!({ "n": n }), gens::gen_clique(n, directed)),
        Family::Hypercube { dim } => plain("hypercube", json!({ "dim": dim }), gens::gen_hypercube(dim)),
        Family::Circulant { n, ref offsets, directed } => plain(
            "circulant",
            json!({ "n": n, "offsets": offsets }),
            gens::gen_circulant(n, offsets, directed)?,
        ),
        Family::UnionOfCycles { count, len, directed } => plain(
            "union_of_cycles",
            json!({ "count": count, "len": len }),
            gens::gen_union_of_cycles(count, len, directed)?,
        ),
        Family::GluedCliques { a, b, shared } => plain(
            "glued_cliques",
            json!({ "a": a, "b": b, "shared": shared }),
            gens::gen_glued_cliques(a, b, shared)?,
        ),
        Family::Gnp { n, p, directed } => {
            plain("gnp", json!({ "n": n, "p": p }), gens::gen_gnp(n, p, directed, &mut rng))
        }
        Family::Regular { n, d } => plain(
            "random_regular",
            json!({ "n": n, "d": d }),
            gens::gen_random_regular(n, d, &mut rng)?,
        ),
        Family::RingOfCliques { count, size } => plain(
            "ring_of_cliques",
            json!({ "count": count, "size": size }),
            gens::gen_ring_of_cliques(count, size)?,
        ),
        Family::PlantedEdgeCut { a, b, c } => gens::gen_planted_edge_cut(a, b, c, &mut rng)?,
        Family::PlantedLocalCut { a, c, base, h } => gens::gen_planted_local_cut(a, c, base, h, &mut rng)?,
        Family::PlantedVertexCut { a, b, s, directed } => {
            if directed {
                gens::gen_planted_vertex_cut_directed(a, b, s, &mut rng)?
            } else {
                gens::gen_planted_vertex_cut(a, b, s, &mut rng)?
            }
        }
    };
    meta.seed = Some(seed);
    Ok((g, meta))
}

fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".json");
    PathBuf::from(name)
}

fn cmd_gen(out: &Path, family: &Family, seed: u64) -> Result<Value> {
    let (g, meta) = generate(family, seed)?;
    fs::write(out, g.to_edge_list()).with_context(|| format!("writing {}", out.display()))?;
    let side = sidecar_path(out);
    fs::write(&side, serde_json::to_string_pretty(&meta)?)
        .with_context(|| format!("writing {}", side.display()))?;
    Ok(json!({
        "command": "gen",
        "rng_seed": seed,
        "graph": out,
        "sidecar": side,
        "meta": meta,
    }))
}

fn cmd_suite(name: &str, scale: f64, csv: Option<&Path>, seed: Option<u64>) -> Result<Value> {
    let mut opts = SuiteOptions { scale, ..SuiteOptions::default() };
    if let Some(s) = seed {
        opts.seed = s;
    }
    let names: Vec<&str> = if name == "all" {
        SUITES.iter().map(|(n, _)| *n).collect()
    } else {
        vec![name]
    };
    let mut reports: Vec<RunReport> = Vec::new();
    for n in names {
        let r = run_suite(n, &opts)?;
        eprintln!(
            "{} {n}: {}",
            if r.passed == Some(true) { "PASS" } else { "FAIL" },
            r.summary
        );
        reports.push(r);
    }
    if let Some(path) = csv {
        let text = match reports.as_slice() {
            [one] => emit_plot_data(one),
            many => emit_plot_data_merged(many),
        };
        fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(match reports.len() {
        1 => serde_json::to_value(&reports[0])?,
        _ => json!({ "command": "suite all", "reports": reports }),
    })
}

fn run(cli: &Cli) -> Result<Value> {
    let explicit = cli.rng_seed;
    let seed = explicit.unwrap_or_else(|| {
        let s = task_seed(
            std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_nanos() as u64)
                .unwrap_or(0),
            u64::from(std::process::id()),
        );
        eprintln!("rng seed: {s}");
        s
    });
    match &cli.command {
        Command::Localec { local, dfs } => cmd_local(local, seed, false, *dfs),
        Command::Localvc { local } => cmd_local(local, seed, true, false),
        Command::Vc { input, k, eps, exact, scheme, boost } => {
            cmd_vc(input, *k, *eps, *exact, *scheme, *boost, seed)
        }
        Command::Test { input, property, model, k, eps, dbar, d, simple, trials } => {
            cmd_test(input, *property, *model, *k, *eps, *dbar, *d, *simple, *trials, seed)
        }
        Command::Oracle { query } => cmd_oracle(query),
        Command::Gen { out, family } => cmd_gen(out, family, seed),
        Command::Suite { name, scale, csv, list } => {
            if *list {
                let names: Vec<Value> = SUITES
                    .iter()
                    .map(|(n, d)| json!({ "name": n, "description": d }))
                    .collect();
                return Ok(json!({ "suites": names }));
            }
            cmd_suite(name.as_deref().unwrap_or("all"), *scale, csv.as_deref(), explicit)
        }
    }
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .context("configuring the thread pool")?;
    }
    let out = run(&cli)?;
    let text = serde_json::to_string_pretty(&out)?;
    let _ = writeln!(std::io::stdout().lock(), "{text}");
    if let Some(path) = &cli.json_out {
        fs::write(path, format!("{text}\n")).with_context(|| format!("writing {}", path.display()))?;
    }
    if let Command::Suite { list: false, .. } = cli.command {
        let failed = match &out {
            Value::Object(o) if o.contains_key("reports") => o["reports"]
                .as_array()
                .is_some_and(|rs| rs.iter().any(|r| r["passed"] != json!(true))),
            other => other["passed"] != json!(true),
        };
        if failed {
            std::process::exit(1);
        }
    }
    Ok(())
}
