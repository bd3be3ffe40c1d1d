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

//! Global k-vertex-connectivity.
//!
//! A separator of size below `k` either has a small side, which a local
//! vertex run seeded inside it finds, or two large sides, which a pairwise
//! max-flow between random endpoints finds. The checker screens the
//! minimum-degree vertex first, then runs the pairwise and local tasks in
//! parallel and returns the lowest-index validated cut. Undirected inputs
//! are sparsified to `⌊(1+ε)k⌋` scan-first forests beforehand.
//!
//! When sampled pairs would cost more than an exhaustive sweep of `k`
//! anchors against every vertex, the sweep runs instead; it is exact, so no
//! local tasks are needed after it.

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::graph::Graph;
use crate::local_ec::gap_for;
use crate::local_vc::{run_split, VC_PRECONDITION_FACTOR};
use crate::oracle::{IncidenceOracle, QueryOracle};
use crate::rng::{seeded, task_rng};
use crate::witness::SeparationTriple;

/// Which seeds and pairs the sampled phase draws.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// Tails of uniformly random arcs.
    EdgeSampling,
    /// Uniformly random vertices, with volume budget `n̄² + n̄k`.
    NodeSampling,
}

/// How the pairwise phase is carried out.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairStrategy {
    /// Sweep when it is cheaper than sampling or when `4k ≥ n`.
    Auto,
    /// Sample unless `4k ≥ n` or the graph is too sparse for any local
    /// budget.
    Sampled,
    Sweep,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrameworkConfig {
    /// Multiplier `c` in the `⌈c·(m/ν)·ln n⌉` sample counts.
    pub sample_factor: f64,
    /// Every sample count is multiplied by this.
    pub boost: usize,
    pub scheme: Scheme,
    pub pairs: PairStrategy,
    /// Constant `C` of the largest local budget, `C·k·ν̄ < m·(gap+1)`.
    pub local_constant: u64,
    /// Tasks handed to the thread pool at once.
    pub chunk: usize,
    pub seed: u64,
}

impl Default for FrameworkConfig {
    fn default() -> Self {
        FrameworkConfig {
            sample_factor: 2.0,
            boost: 1,
            scheme: Scheme::EdgeSampling,
            pairs: PairStrategy::Auto,
            local_constant: VC_PRECONDITION_FACTOR,
            chunk: 32,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum VcVerdict {
    Connected { k: usize },
    Cut { witness: SeparationTriple },
}

impl VcVerdict {
    pub fn is_cut(&self) -> bool {
        matches!(self, VcVerdict::Cut { .. })
    }

    pub fn witness(&self) -> Option<&SeparationTriple> {
        match self {
            VcVerdict::Cut { witness } => Some(witness),
            VcVerdict::Connected { .. } => None,
        }
    }
}

/// Verdict plus the work that produced it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VcReport {
    pub verdict: VcVerdict,
    /// `screen`, `sweep` or `sampled`.
    pub mode: String,
    pub pairs_run: usize,
    pub local_runs: usize,
    pub samples_used: usize,
    pub edge_queries: u64,
    /// Arcs left after sparsification.
    pub working_arcs: usize,
    /// Largest local volume budget in effect.
    pub nu_max: usize,
}

/// Sparse certificate: the first `k` forests of a scan-first search that
/// always scans the unscanned vertex with the most scanned neighbors.
/// Keeps at most `k(n−1)` edges and every vertex cut of size below `k`.
pub fn sparsify_ni(g: &Graph, k: usize) -> Result<Graph, Error> {
    if g.is_directed() {
        return Err(Error::Param("sparsification needs an undirected graph".into()));
    }
    let n = g.n();
    let mut rank = vec![0usize; n];
    let mut scanned = vec![false; n];
    let mut kept = Vec::new();
    let mut buckets: Vec<Vec<usize>> = vec![(0..n).rev().collect()];
    let mut top = 0usize;
    let mut done = vec![false; g.m()];
    for _ in 0..n {
        let v = loop {
            match buckets[top].pop() {
                Some(v) if !scanned[v] && rank[v] == top => break v,
                Some(_) => {}
                None => top -= 1,
            }
        };
        scanned[v] = true;
        for arc in g.arc_ids(v) {
            let w = g.arc_head(arc);
            if done[arc] || w == v || scanned[w] {
                continue;
            }
            let mate = g.mate(arc).expect("undirected graphs have mates");
            done[arc] = true;
            done[mate] = true;
            rank[w] += 1;
            if rank[w] <= k {
                kept.push((v, w));
            }
            if rank[w] == buckets.len() {
                buckets.push(Vec::new());
            }
            buckets[rank[w]].push(w);
            top = top.max(rank[w]);
        }
    }
    Ok(Graph::from_edges(n, &kept)?)
}

const INF: i32 = i32::MAX / 2;

/// Unit vertex-capacity flow network of a graph: `v_in = 2v`,
/// `v_out = 2v + 1`, arc `v_in -> v_out` of capacity one and arc
/// `u_out -> v_in` of unbounded capacity per base arc. Built once and
/// shared; per-query state lives in [`FlowScratch`].
pub struct VertexFlowNetwork<'g> {
    graph: &'g Graph,
    /// Network position of each vertex, in breadth-first order so that
    /// searches touch nearby memory.
    rank: Vec<u32>,
    order: Vec<u32>,
    /// Residual arcs grouped by tail; `mate[e]` is the reverse of `e`.
    offsets: Vec<usize>,
    head: Vec<u32>,
    mate: Vec<u32>,
    cap: Vec<i32>,
}

/// Mutable state of one flow computation, reused across queries.
pub struct FlowScratch {
    flow: Vec<i32>,
    touched: Vec<u32>,
    stamp: Vec<u32>,
    generation: u32,
    parent: Vec<u32>,
    queue: Vec<u32>,
}

/// Result of a pairwise check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StOutcome {
    /// A separator of size below the limit, with `s` left and `t` right.
    Cut(SeparationTriple),
    /// At least this many internally disjoint paths.
    AtLeast(usize),
    /// `s -> t` is an arc; no vertex set separates them.
    Adjacent,
}

impl<'g> VertexFlowNetwork<'g> {
    pub fn new(graph: &'g Graph) -> Self {
        let n = graph.n();
        let mut rank = vec![u32::MAX; n];
        let mut order: Vec<u32> = Vec::with_capacity(n);
        for root in 0..n {
            if rank[root] != u32::MAX {
                continue;
            }
            rank[root] = order.len() as u32;
            order.push(root as u32);
            let mut head_idx = order.len() - 1;
            while head_idx < order.len() {
                let u = order[head_idx] as usize;
                head_idx += 1;
                for &w in graph.out_neighbors(u) {
                    if rank[w] == u32::MAX {
                        rank[w] = order.len() as u32;
                        order.push(w as u32);
                    }
                }
            }
        }
        let mut pairs: Vec<(u32, u32, i32)> = Vec::with_capacity(n + graph.m());
        for &v in &order {
            let r = rank[v as usize];
            pairs.push((2 * r, 2 * r + 1, 1));
            for &w in graph.out_neighbors(v as usize) {
                if w != v as usize {
                    pairs.push((2 * r + 1, 2 * rank[w], INF));
                }
            }
        }
        let nodes = 2 * n;
        let mut offsets = vec![0usize; nodes + 1];
        for &(u, v, _) in &pairs {
            offsets[u as usize + 1] += 1;
            offsets[v as usize + 1] += 1;
        }
        for i in 0..nodes {
            offsets[i + 1] += offsets[i];
        }
        let total = offsets[nodes];
        let mut cursor = offsets.clone();
        let mut head = vec![0u32; total];
        let mut mate = vec![0u32; total];
        let mut cap = vec![0i32; total];
        for (u, v, c) in pairs {
            let f = cursor[u as usize];
            cursor[u as usize] += 1;
            let r = cursor[v as usize];
            cursor[v as usize] += 1;
            head[f] = v;
            cap[f] = c;
            mate[f] = r as u32;
            head[r] = u;
            mate[r] = f as u32;
        }
        VertexFlowNetwork {
            graph,
            rank,
            order,
            offsets,
            head,
            mate,
            cap,
        }
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn scratch(&self) -> FlowScratch {
        FlowScratch {
            flow: vec![0; self.head.len()],
            touched: Vec::new(),
            stamp: vec![0; 2 * self.graph.n()],
            generation: 0,
            parent: vec![u32::MAX; 2 * self.graph.n()],
            queue: Vec::new(),
        }
    }

    /// BFS from `source` in the residual network; returns whether `sink`
    /// was reached. Reached nodes carry the current generation stamp.
    fn search(&self, sc: &mut FlowScratch, source: usize, sink: usize) -> bool {
        sc.generation = sc.generation.wrapping_add(1);
        if sc.generation == 0 {
            sc.stamp.iter_mut().for_each(|s| *s = 0);
            sc.generation = 1;
        }
        let gen = sc.generation;
        sc.queue.clear();
        sc.queue.push(source as u32);
        sc.stamp[source] = gen;
        let mut head_idx = 0;
        while head_idx < sc.queue.len() {
            let u = sc.queue[head_idx] as usize;
            head_idx += 1;
            for e in self.offsets[u]..self.offsets[u + 1] {
                if self.cap[e] - sc.flow[e] <= 0 {
                    continue;
                }
                let w = self.head[e] as usize;
                if sc.stamp[w] == gen {
                    continue;
                }
                sc.stamp[w] = gen;
                sc.parent[w] = e as u32;
                if w == sink {
                    return true;
                }
                sc.queue.push(w as u32);
            }
        }
        false
    }

    fn augment(&self, sc: &mut FlowScratch, source: usize, sink: usize) {
        let mut v = sink;
        while v != source {
            let e = sc.parent[v] as usize;
            let r = self.mate[e] as usize;
            sc.flow[e] += 1;
            sc.flow[r] -= 1;
            sc.touched.push(e as u32);
            v = self.head[r] as usize;
        }
    }

    fn reset(&self, sc: &mut FlowScratch) {
        for &e in &sc.touched {
            sc.flow[e as usize] = 0;
            sc.flow[self.mate[e as usize] as usize] = 0;
        }
        sc.touched.clear();
    }

    /// Internally vertex-disjoint `s -> t` paths, stopping at `limit`. Below
    /// the limit the minimum separator is extracted from the residual
    /// reachable set.
    pub fn st_connectivity(
        &self,
        sc: &mut FlowScratch,
        s: usize,
        t: usize,
        limit: usize,
    ) -> Result<StOutcome, Error> {
        let n = self.graph.n();
        if s >= n || t >= n || s == t {
            return Err(Error::Param(format!("invalid pair ({s}, {t})")));
        }
        if self.graph.has_arc(s, t) {
            return Ok(StOutcome::Adjacent);
        }
        let (rs, rt) = (self.rank[s] as usize, self.rank[t] as usize);
        let (source, sink) = (2 * rs + 1, 2 * rt);
        let mut value = 0;
        let outcome = loop {
            if value >= limit {
                break StOutcome::AtLeast(limit);
            }
            if !self.search(sc, source, sink) {
                let gen = sc.generation;
                let mut left = Vec::new();
                let mut sep = Vec::new();
                for (r, &v) in self.order.iter().enumerate() {
                    let v = v as usize;
                    let vin = sc.stamp[2 * r] == gen;
                    let vout = sc.stamp[2 * r + 1] == gen;
                    if vout {
                        left.push(v);
                    } else if vin {
                        sep.push(v);
                    }
                }
                break StOutcome::Cut(SeparationTriple::new(left, sep, n));
            }
            self.augment(sc, source, sink);
            value += 1;
        };
        self.reset(sc);
        Ok(outcome)
    }
}

/// One-off pairwise check: `Cut` when fewer than `⌊(1+ε)k⌋` internally
/// disjoint `s -> t` paths exist. Exact when `εk < 1`.
pub fn st_vertex_connectivity(
    g: &Graph,
    s: usize,
    t: usize,
    k: usize,
    eps: f64,
) -> Result<StOutcome, Error> {
    let net = VertexFlowNetwork::new(g);
    let mut sc = net.scratch();
    net.st_connectivity(&mut sc, s, t, k + gap_for(k, eps))
}

/// Rebuilds a triple of `g` around separator `sep`, keeping `anchor` on the
/// left. `None` when `sep` does not disconnect `anchor` from anything.
fn triple_around(g: &Graph, anchor: usize, sep: &[usize]) -> Option<SeparationTriple> {
    let mut removed = vec![false; g.n()];
    for &v in sep {
        removed[v] = true;
    }
    let reach = g.reachable_avoiding(anchor, &removed);
    let left: Vec<usize> = (0..g.n()).filter(|&v| reach[v]).collect();
    let t = SeparationTriple::new(left, sep.to_vec(), g.n());
    t.validate(g).ok().map(|_| t)
}

/// Makes a candidate separator into a validated triple of `g`.
fn confirm(g: &Graph, t: SeparationTriple, limit: usize) -> Option<SeparationTriple> {
    if t.separator.len() >= limit || t.left.is_empty() {
        return None;
    }
    if t.validate(g).is_ok() {
        return Some(t);
    }
    if let Some(t) = triple_around(g, t.left[0], &t.separator) {
        return Some(t);
    }
    // A separator of the sparsified graph need not separate the original;
    // the same pair still has fewer than `limit` disjoint paths there.
    let (s, r) = (t.left[0], *t.right().first()?);
    let net = VertexFlowNetwork::new(g);
    match net.st_connectivity(&mut net.scratch(), s, r, limit).ok()? {
        StOutcome::Cut(t) if t.validate(g).is_ok() => Some(t),
        _ => None,
    }
}

/// Out-neighborhood screen: the vertex with fewest distinct out-neighbors
/// (or in-neighbors, for digraphs) yields a separator when that number is
/// below `k`.
fn degree_screen(g: &Graph, rev: Option<&Graph>, k: usize) -> Option<SeparationTriple> {
    let n = g.n();
    let best = |h: &Graph| {
        let mut seen = vec![usize::MAX; n];
        let mut low: Option<(usize, usize)> = None;
        for v in 0..n {
            let mut distinct = 0;
            for &w in h.out_neighbors(v) {
                if w != v && seen[w] != v {
                    seen[w] = v;
                    distinct += 1;
                    if distinct >= k {
                        break;
                    }
                }
            }
            if distinct < k && distinct + 1 < n && low.is_none_or(|(d, _)| distinct < d) {
                low = Some((distinct, v));
            }
        }
        low
    };
    if let Some((_, v)) = best(g) {
        let t = SeparationTriple::new(vec![v], g.distinct_out_neighbors(v), n);
        if t.validate(g).is_ok() {
            return Some(t);
        }
    }
    if let Some(h) = rev {
        if let Some((_, v)) = best(h) {
            let t = SeparationTriple::new(vec![v], h.distinct_out_neighbors(v), n).mirrored();
            if t.validate(g).is_ok() {
                return Some(t);
            }
        }
    }
    None
}

#[derive(Clone, Copy, Debug)]
enum Task {
    /// Flow from `s` to `t`.
    Flow { s: usize, t: usize },
    /// Flow between the endpoints of two sampled arcs (or vertices).
    SampledPair,
    /// Local vertex run with budget `nu` from a sampled seed, on the
    /// reversed graph when `reversed`.
    Local { nu: usize, reversed: bool },
}

/// Tasks in execution order. The sweep is generated on the fly: anchor
/// `i / (n·dirs)`, target from one shared random permutation.
enum TaskList {
    Listed(Vec<Task>),
    Sweep {
        anchors: Vec<usize>,
        targets: Vec<usize>,
        directed: bool,
    },
}

impl TaskList {
    fn len(&self) -> usize {
        match self {
            TaskList::Listed(t) => t.len(),
            TaskList::Sweep {
                anchors,
                targets,
                directed,
            } => anchors.len() * targets.len() * if *directed { 2 } else { 1 },
        }
    }

    /// The task at `i`, or `None` for a pair that needs no flow.
    fn get(&self, g: &Graph, i: usize) -> Option<Task> {
        match self {
            TaskList::Listed(t) => Some(t[i]),
            TaskList::Sweep {
                anchors,
                targets,
                directed,
            } => {
                let dirs = if *directed { 2 } else { 1 };
                let per = targets.len() * dirs;
                let a = anchors[i / per];
                let t = targets[(i % per) / dirs];
                let (s, t) = if i.is_multiple_of(dirs) { (a, t) } else { (t, a) };
                (s != t && !g.has_arc(s, t)).then_some(Task::Flow { s, t })
            }
        }
    }
}

struct Plan<'a> {
    work: &'a Graph,
    work_rev: Option<&'a Graph>,
    original: &'a Graph,
    k: usize,
    gap: usize,
    scheme: Scheme,
    seed: u64,
}

enum TaskResult {
    Cut(SeparationTriple),
    Nothing { queries: u64 },
}

fn sample_vertex<R: Rng>(g: &Graph, scheme: Scheme, rng: &mut R) -> usize {
    match scheme {
        Scheme::EdgeSampling if g.m() > 0 => g.arc_tail(rng.gen_range(0..g.m())),
        _ => rng.gen_range(0..g.n()),
    }
}

fn run_task(
    plan: &Plan<'_>,
    net: &VertexFlowNetwork<'_>,
    sc: &mut FlowScratch,
    index: usize,
    task: Task,
) -> Result<TaskResult, Error> {
    let limit = plan.k + plan.gap;
    let mut rng = task_rng(plan.seed, index as u64);
    let flow_cut = |sc: &mut FlowScratch, s: usize, t: usize| -> Result<TaskResult, Error> {
        Ok(match net.st_connectivity(sc, s, t, limit)? {
            StOutcome::Cut(t) => match confirm(plan.original, t, limit) {
                Some(t) => TaskResult::Cut(t),
                None => TaskResult::Nothing { queries: 0 },
            },
            _ => TaskResult::Nothing { queries: 0 },
        })
    };
    match task {
        Task::Flow { s, t } => flow_cut(sc, s, t),
        Task::SampledPair => {
            for _ in 0..32 {
                let s = sample_vertex(plan.work, plan.scheme, &mut rng);
                let t = sample_vertex(plan.work, plan.scheme, &mut rng);
                if s != t && !plan.original.has_arc(s, t) {
                    return flow_cut(sc, s, t);
                }
            }
            Ok(TaskResult::Nothing { queries: 0 })
        }
        Task::Local { nu, reversed } => {
            let g = if reversed {
                plan.work_rev.expect("reversed graph present for digraphs")
            } else {
                plan.work
            };
            let x = sample_vertex(g, plan.scheme, &mut rng);
            let mut oracle = QueryOracle::unbounded(g);
            let run = run_split(&mut oracle, x, nu, plan.k, plan.gap, rng.gen(), false)?;
            let queries = oracle.edge_queries();
            Ok(match run.result.witness() {
                Some(crate::witness::CutWitness::VertexCut(t)) => {
                    let t = if reversed { t.mirrored() } else { t.clone() };
                    match confirm(plan.original, t, limit) {
                        Some(t) => TaskResult::Cut(t),
                        None => TaskResult::Nothing { queries },
                    }
                }
                _ => TaskResult::Nothing { queries },
            })
        }
    }
}

struct Execution {
    cut: Option<SeparationTriple>,
    pairs_run: usize,
    local_runs: usize,
    edge_queries: u64,
}

/// Runs tasks in parallel batches of sizes 4, 8, 16, … up to `chunk` and
/// stops after the first batch holding a cut; the cut with the lowest task
/// index wins. Batch boundaries do not depend on the thread count.
fn execute(plan: &Plan<'_>, tasks: &TaskList, chunk: usize) -> Result<Execution, Error> {
    let net = VertexFlowNetwork::new(plan.work);
    let mut exec = Execution {
        cut: None,
        pairs_run: 0,
        local_runs: 0,
        edge_queries: 0,
    };
    let total = tasks.len();
    let mut start = 0;
    let mut size = 4.min(chunk.max(1));
    while start < total && exec.cut.is_none() {
        let end = (start + size).min(total);
        let block: Vec<(usize, Task)> = (start..end)
            .filter_map(|i| tasks.get(plan.original, i).map(|t| (i, t)))
            .collect();
        let results: Vec<Result<TaskResult, Error>> = block
            .par_iter()
            .map_init(
                || net.scratch(),
                |sc, &(i, task)| run_task(plan, &net, sc, i, task),
            )
            .collect();
        for ((_, task), res) in block.iter().zip(results) {
            match task {
                Task::Local { .. } => exec.local_runs += 1,
                _ => exec.pairs_run += 1,
            }
            match res? {
                TaskResult::Cut(t) => {
                    if exec.cut.is_none() {
                        exec.cut = Some(t);
                    }
                }
                TaskResult::Nothing { queries } => exec.edge_queries += queries,
            }
        }
        start = end;
        size = (2 * size).min(chunk.max(1));
    }
    Ok(exec)
}

/// Largest `ν` with `c·k·ν < m·(gap+1)`.
pub fn nu_max(m: usize, k: usize, gap: usize, c: u64) -> usize {
    let rhs = m as u128 * (gap as u128 + 1);
    let den = c as u128 * k as u128;
    (rhs.div_ceil(den).saturating_sub(1)) as usize
}

fn sample_count(c: f64, boost: usize, total: usize, per: usize, n: usize) -> usize {
    let ln = (n.max(2) as f64).ln();
    ((c * total as f64 / per as f64 * ln).ceil() as usize).saturating_mul(boost.max(1))
}

/// Decides whether `g` is `k`-vertex-connected. A `Cut` carries a validated
/// separator with fewer than `⌊(1+ε)k⌋` vertices; `Connected` is exact in
/// sweep mode and correct with high probability in sampled mode.
pub fn vc_check(g: &Graph, k: usize, eps: f64, cfg: &FrameworkConfig) -> Result<VcReport, Error> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::Param(format!("eps = {eps} outside (0, 1]")));
    }
    if k == 0 {
        return Err(Error::Param("k must be at least 1".into()));
    }
    if cfg.sample_factor <= 0.0 || cfg.boost == 0 {
        return Err(Error::Param("sample factor and boost must be positive".into()));
    }
    let gap = gap_for(k, eps);
    let n_all = g.n().max(1);
    let sparse;
    let reversed;
    let (work, work_rev) = if g.is_directed() {
        reversed = g.reverse();
        (g, Some(&reversed))
    } else {
        if g.m() / 2 > (k + gap) * (n_all - 1) {
            sparse = sparsify_ni(g, k + gap)?;
            (&sparse, None)
        } else {
            (g, None)
        }
    };
    let mut report = VcReport {
        verdict: VcVerdict::Connected { k },
        mode: "screen".into(),
        pairs_run: 0,
        local_runs: 0,
        samples_used: 0,
        edge_queries: 0,
        working_arcs: work.m(),
        nu_max: 0,
    };
    let n = g.n();
    if n < 2 {
        return Ok(report);
    }
    let rev_for_screen = if g.is_directed() { work_rev } else { None };
    if let Some(t) = degree_screen(g, rev_for_screen, k) {
        report.verdict = VcVerdict::Cut { witness: t };
        return Ok(report);
    }

    let m = work.m();
    let nu_bar = nu_max(m, k, gap, cfg.local_constant);
    report.nu_max = nu_bar;
    let directions = if g.is_directed() { 2 } else { 1 };
    let sweep_cost = k.min(n) * n * directions;
    let (pair_count, locals): (usize, Vec<(usize, usize)>) = match cfg.scheme {
        Scheme::EdgeSampling => {
            let pairs = if nu_bar == 0 {
                usize::MAX
            } else {
                sample_count(cfg.sample_factor, cfg.boost, m, nu_bar, n)
            };
            let mut levels = Vec::new();
            let mut nu = 1usize;
            while nu <= nu_bar {
                if nu > k {
                    levels.push((nu, sample_count(cfg.sample_factor, cfg.boost, m, nu, n)));
                }
                nu *= 2;
            }
            (pairs, levels)
        }
        Scheme::NodeSampling => {
            let mut nbar = 0usize;
            while (nbar + 1) * (nbar + 1 + k) <= nu_bar {
                nbar += 1;
            }
            if nbar == 0 {
                (usize::MAX, Vec::new())
            } else {
                let count = sample_count(cfg.sample_factor, cfg.boost, n, nbar, n);
                let nu = nbar * nbar + nbar * k;
                let levels = if nu > k { vec![(nu, count)] } else { Vec::new() };
                (count, levels)
            }
        }
    };
    let sweep = match cfg.pairs {
        PairStrategy::Sweep => true,
        PairStrategy::Sampled => 4 * k >= n || pair_count == usize::MAX,
        PairStrategy::Auto => 4 * k >= n || sweep_cost <= pair_count,
    };

    let tasks = if sweep {
        report.mode = "sweep".into();
        let mut rng = seeded(cfg.seed);
        let mut anchors: Vec<usize> = (0..n).collect();
        anchors.shuffle(&mut rng);
        anchors.truncate(k.min(n));
        let mut targets: Vec<usize> = (0..n).collect();
        targets.shuffle(&mut rng);
        TaskList::Sweep {
            anchors,
            targets,
            directed: g.is_directed(),
        }
    } else {
        report.mode = "sampled".into();
        let mut tasks = vec![Task::SampledPair; pair_count];
        for &(nu, count) in &locals {
            for _ in 0..count {
                tasks.push(Task::Local { nu, reversed: false });
                if g.is_directed() {
                    tasks.push(Task::Local { nu, reversed: true });
                }
            }
        }
        report.samples_used = tasks.len();
        TaskList::Listed(tasks)
    };

    let plan = Plan {
        work,
        work_rev,
        original: g,
        k,
        gap,
        scheme: cfg.scheme,
        seed: cfg.seed,
    };
    let exec = execute(&plan, &tasks, cfg.chunk)?;
    report.pairs_run = exec.pairs_run;
    report.local_runs = exec.local_runs;
    report.edge_queries = exec.edge_queries;
    if let Some(t) = exec.cut {
        report.verdict = VcVerdict::Cut { witness: t };
    }
    Ok(report)
}

/// [`vc_check`] on a digraph: no sparsification, local seeds on both the
/// graph and its reverse.
pub fn vc_check_directed(
    g: &Graph,
    k: usize,
    eps: f64,
    cfg: &FrameworkConfig,
) -> Result<VcReport, Error> {
    if !g.is_directed() {
        return Err(Error::Param("expected a directed graph".into()));
    }
    vc_check(g, k, eps, cfg)
}

/// Result of [`min_vertex_cut`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KappaEstimate {
    /// Best estimate of the vertex connectivity.
    pub kappa: usize,
    /// Largest `k` reported connected.
    pub lower: usize,
    /// Smallest separator size seen, or `n − 1`.
    pub upper: usize,
    pub witness: Option<SeparationTriple>,
    /// No separator exists below `n − 1` (complete graph).
    pub cap_reached: bool,
    pub checks: usize,
}

/// Vertex connectivity by doubling `k` until a separator appears, then
/// binary search between the last connected `k` and the separator found.
/// With `exact`, every check runs with `εk < 1` and the answer is `κ`;
/// otherwise `eps` is used and the answer is within a `1+ε` factor.
pub fn min_vertex_cut(
    g: &Graph,
    eps: f64,
    exact: bool,
    cfg: &FrameworkConfig,
) -> Result<KappaEstimate, Error> {
    let n = g.n();
    let cap = n.saturating_sub(1);
    let mut est = KappaEstimate {
        kappa: cap,
        lower: 0,
        upper: cap,
        witness: None,
        cap_reached: false,
        checks: 0,
    };
    if n < 2 {
        est.cap_reached = true;
        return Ok(est);
    }
    let check = |k: usize, est: &mut KappaEstimate| -> Result<VcVerdict, Error> {
        est.checks += 1;
        let e = if exact { 0.5 / k as f64 } else { eps };
        let mut c = cfg.clone();
        c.seed = cfg.seed.wrapping_add(est.checks as u64);
        Ok(vc_check(g, k, e, &c)?.verdict)
    };

    let mut k = 1;
    loop {
        let k_now = k.min(cap);
        match check(k_now, &mut est)? {
            VcVerdict::Connected { .. } => {
                est.lower = k_now;
                if k_now == cap {
                    est.cap_reached = true;
                    est.kappa = cap;
                    return Ok(est);
                }
                k *= 2;
            }
            VcVerdict::Cut { witness } => {
                est.upper = witness.separator.len();
                est.witness = Some(witness);
                break;
            }
        }
    }
    while est.lower < est.upper {
        let mid = (est.lower + est.upper).div_ceil(2);
        match check(mid, &mut est)? {
            VcVerdict::Connected { .. } => est.lower = mid,
            VcVerdict::Cut { witness } => {
                if witness.separator.len() < est.upper {
                    est.upper = witness.separator.len();
                    est.witness = Some(witness);
                } else {
                    break;
                }
            }
        }
    }
    est.kappa = est.upper;
    Ok(est)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{
        gen_clique, gen_cycle, gen_glued_cliques, gen_hypercube, gen_planted_vertex_cut,
        gen_planted_vertex_cut_directed,
    };
    use crate::rng::seeded;

    #[test]
    fn sparsify_tree_unchanged() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (1, 3), (3, 4)]).unwrap();
        assert_eq!(sparsify_ni(&g, 1).unwrap().m(), g.m());
    }

    #[test]
    fn sparsify_clique_edge_bound() {
        let g = gen_clique(10, false);
        let h = sparsify_ni(&g, 3).unwrap();
        assert!(h.m() / 2 <= 27);
    }

    #[test]
    fn glued_cliques_pair() {
        let g = gen_glued_cliques(5, 5, 2).unwrap();
        match st_vertex_connectivity(&g, 0, 7, 3, 0.1).unwrap() {
            StOutcome::Cut(t) => {
                assert_eq!(t.separator, vec![3, 4]);
                assert!(t.validate(&g).is_ok());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn clique_pairs_are_adjacent() {
        let g = gen_clique(10, false);
        assert_eq!(st_vertex_connectivity(&g, 0, 1, 5, 0.1).unwrap(), StOutcome::Adjacent);
    }

    #[test]
    fn cycle_antipodal_cut() {
        let g = gen_cycle(10);
        match st_vertex_connectivity(&g, 0, 5, 2, 0.1).unwrap() {
            StOutcome::Cut(t) => assert_eq!(t.separator.len(), 1),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn flow_reaches_limit() {
        let g = gen_hypercube(4);
        assert_eq!(
            st_vertex_connectivity(&g, 0, 15, 4, 0.1).unwrap(),
            StOutcome::AtLeast(4)
        );
    }

    #[test]
    fn complete_graph_is_connected() {
        let g = gen_clique(50, false);
        let r = vc_check(&g, 10, 0.05, &FrameworkConfig::default()).unwrap();
        assert_eq!(r.verdict, VcVerdict::Connected { k: 10 });
    }

    #[test]
    fn hypercube_threshold() {
        let g = gen_hypercube(7);
        let cfg = FrameworkConfig::default();
        assert!(!vc_check(&g, 7, 0.1, &cfg).unwrap().verdict.is_cut());
        let r = vc_check(&g, 8, 0.1, &cfg).unwrap();
        assert_eq!(r.verdict.witness().unwrap().separator.len(), 7);
    }

    #[test]
    fn kappa_of_small_graphs() {
        let cfg = FrameworkConfig::default();
        let est = min_vertex_cut(&gen_cycle(12), 0.1, true, &cfg).unwrap();
        assert_eq!(est.kappa, 1);
        let est = min_vertex_cut(&gen_clique(7, false), 0.1, true, &cfg).unwrap();
        assert_eq!(est.kappa, 6);
        assert!(est.cap_reached);
        let est = min_vertex_cut(&gen_glued_cliques(6, 7, 3).unwrap(), 0.1, true, &cfg).unwrap();
        assert_eq!(est.kappa, 3);
        assert!(est.witness.unwrap().validate(&gen_glued_cliques(6, 7, 3).unwrap()).is_ok());
    }

    #[test]
    fn planted_cut_found_by_sweep() {
        let (g, _) = gen_planted_vertex_cut(300, 300, 3, &mut seeded(5)).unwrap();
        let r = vc_check(&g, 4, 0.1, &FrameworkConfig::default()).unwrap();
        assert_eq!(r.mode, "sweep");
        let t = r.verdict.witness().unwrap();
        assert_eq!(t.separator.len(), 3);
        assert!(t.validate(&g).is_ok());
        let r = vc_check(&g, 3, 0.1, &FrameworkConfig::default()).unwrap();
        assert!(!r.verdict.is_cut());
    }

    #[test]
    fn small_side_found_by_local_runs() {
        let (g, _) = gen_planted_vertex_cut(12, 1500, 3, &mut seeded(9)).unwrap();
        let cfg = FrameworkConfig {
            pairs: PairStrategy::Sampled,
            local_constant: 8,
            seed: 3,
            ..FrameworkConfig::default()
        };
        let r = vc_check(&g, 4, 0.1, &cfg).unwrap();
        assert_eq!(r.mode, "sampled");
        let t = r.verdict.witness().expect("separator found");
        assert!(t.separator.len() < 4);
        assert!(t.validate(&g).is_ok());
    }

    #[test]
    fn directed_planted_cut() {
        let (g, _) = gen_planted_vertex_cut_directed(40, 60, 2, &mut seeded(1)).unwrap();
        let r = vc_check_directed(&g, 3, 0.1, &FrameworkConfig::default()).unwrap();
        let t = r.verdict.witness().unwrap();
        assert!(t.separator.len() < 3);
        assert!(t.validate(&g).is_ok());
        assert!(vc_check_directed(&gen_clique(3, false), 1, 0.5, &FrameworkConfig::default()).is_err());
    }

    #[test]
    fn nu_max_boundary() {
        assert_eq!(nu_max(8320 * 4 * 10, 4, 0, 8320), 9);
        assert_eq!(nu_max(100, 4, 0, 8320), 0);
    }
}
