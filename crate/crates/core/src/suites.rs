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

//! End-to-end experiment suites, one per acceptance property.
//!
//! Every suite is deterministic in its seed: trial `i` draws its randomness
//! from stream `i` of the suite seed, and trials run in parallel without
//! affecting each other. A suite returns a [`RunReport`] whose `passed`
//! field carries the verdict and whose `summary` gives the measured values.

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use rustc_hash::{FxHashMap, FxHashSet};

use crate::bruteforce::{bf_local_witness, bf_min_vertex_cut, validate_witness, LocalAnswer, OracleLimits};
use crate::error::Error;
use crate::generators::{
    gen_circulant, gen_clique, gen_cycle, gen_glued_cliques, gen_gnp, gen_hypercube,
    gen_planted_edge_cut, gen_planted_local_cut, gen_planted_vertex_cut, gen_random_regular,
    gen_ring_of_cliques, gen_union_of_cycles,
};
use crate::global_vc::{min_vertex_cut, vc_check, FrameworkConfig};
use crate::graph::Graph;
use crate::local_ec::{
    local_ec, local_ec_dfs, local_ec_exact, mark_limit, LocalEcParams, DFS_VOLUME_FACTOR,
    VOLUME_FACTOR,
};
use crate::local_vc::{lift_triple, project_cut, split_cut_stats, SplitGraphView};
use crate::oracle::{ArcRef, IncidenceOracle, QueryOracle};
use crate::overlay::{reverse_tree_path, ReversalOverlay};
use crate::report::{percentile, RunReport, TrialRecord};
use crate::rng::{task_rng, task_seed};
use crate::tester::{query_cap, run_tester, Property, TestInstance, TesterConfig, TesterModel};
use crate::witness::{CutWitness, SeparationTriple};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SuiteOptions {
    pub seed: u64,
    /// Multiplies trial counts; `1.0` runs the full suite.
    pub scale: f64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { seed: 2024, scale: 1.0 }
    }
}

impl SuiteOptions {
    fn count(&self, full: usize) -> usize {
        ((full as f64 * self.scale).ceil() as usize).max(1)
    }
}

/// Suite names with one-line descriptions.
pub const SUITES: &[(&str, &str)] = &[
    ("localec-soundness", "every local edge-cut witness respects the cut and volume bounds"),
    ("ec-budget", "edge queries per local run stay within the mark limit plus k + gap"),
    ("localec-completeness", "planted local cuts are found in at least 70% of runs"),
    ("reversal-lemma", "reversing a path from x changes the cut of S by -1 or 0"),
    ("split-lemmas", "lifting preserves the separator size and volume within a factor 2"),
    ("vc-exact-small", "exact vertex connectivity matches brute force on 49 of 50 graphs"),
    ("vc-scaling", "median time per doubling of n grows by at most 2.6"),
    ("tester-one-sided", "k-connected graphs are always accepted"),
    ("tester-far", "far-from-connected graphs are rejected in at least 60% of trials"),
    ("tester-budget", "tester queries stay within their caps"),
    ("dfs-parity", "the depth-first variant finds planted cuts in at least 45% of runs"),
];

pub fn run_suite(name: &str, opts: &SuiteOptions) -> Result<RunReport, Error> {
    match name {
        "localec-soundness" => localec_soundness(opts),
        "ec-budget" => ec_budget(opts),
        "localec-completeness" => localec_completeness(opts),
        "reversal-lemma" => reversal_lemma(opts),
        "split-lemmas" => split_lemmas(opts),
        "vc-exact-small" => vc_exact_small(opts),
        "vc-scaling" => vc_scaling(opts),
        "tester-one-sided" => tester_one_sided(opts),
        "tester-far" => tester_far(opts),
        "tester-budget" => tester_budget(opts),
        "dfs-parity" => dfs_parity(opts),
        other => Err(Error::UnknownSuite(other.to_string())),
    }
}

fn trial_seed(base: u64, index: usize) -> u64 {
    task_seed(base, index as u64)
}

fn record(instance: &str, g: &Graph, k: usize, eps: f64, seed: u64) -> TrialRecord {
    TrialRecord {
        index: 0,
        instance: instance.to_string(),
        n: g.n(),
        k,
        eps,
        seed,
        outcome: String::new(),
        queries: 0,
        ok: true,
        detail: serde_json::Value::Null,
    }
}

/// Runs `f` on every job in parallel and appends the records in order.
fn run_trials<T, F>(report: &mut RunReport, jobs: &[T], f: F) -> Result<(), Error>
where
    T: Sync,
    F: Fn(usize, &T) -> Result<TrialRecord, Error> + Sync,
{
    let seed = report.seed;
    let results: Vec<Result<(TrialRecord, f64), Error>> = jobs
        .par_iter()
        .enumerate()
        .map(|(i, job)| {
            let start = Instant::now();
            let mut r = f(i, job)?;
            if r.seed == 0 {
                r.seed = trial_seed(seed, i);
            }
            Ok((r, start.elapsed().as_secs_f64() * 1e3))
        })
        .collect();
    for res in results {
        let (r, ms) = res?;
        report.push(r, ms);
    }
    Ok(())
}

fn finish(mut report: RunReport, passed: bool, summary: String) -> RunReport {
    report.passed = Some(passed);
    report.summary = summary;
    report
}

/// A graph with a short descriptive name.
pub struct Named {
    pub name: String,
    pub graph: Graph,
}

fn named(name: impl Into<String>, graph: Graph) -> Named {
    Named {
        name: name.into(),
        graph,
    }
}

/// Mixed instances for the local edge-cut suites.
fn local_catalogue(seed: u64) -> Result<Vec<Named>, Error> {
    let mut rng = task_rng(seed, u64::MAX);
    Ok(vec![
        named("cycle-6000", gen_cycle(6000)),
        named("cycles-200x30", gen_union_of_cycles(200, 30, true)?),
        named("seam-8-120-2", gen_planted_edge_cut(8, 120, 2, &mut rng)?.0),
        named("gnp-1500", gen_gnp(1500, 0.004, true, &mut rng)),
        named("regular-2000-4", gen_random_regular(2000, 4, &mut rng)?),
        named("circulant-3000", gen_circulant(3000, &[1, 2], false)?),
        named("ring-300-k5", gen_ring_of_cliques(300, 5)?),
        named("glued-60-60-3", gen_glued_cliques(60, 60, 3)?),
        named("local-6-2", gen_planted_local_cut(6, 2, 3400, 4, &mut rng)?.0),
    ])
}

#[derive(Clone, Copy)]
struct LocalSpec {
    instance: usize,
    x: usize,
    nu: usize,
    k: usize,
    gap: usize,
    seed: u64,
    bounded: bool,
}

fn local_jobs(cat: &[Named], count: usize, seed: u64, bounded: bool) -> Vec<LocalSpec> {
    let mut jobs = Vec::with_capacity(count);
    let mut rng = task_rng(seed, u64::MAX - 1);
    while jobs.len() < count {
        let instance = rng.gen_range(0..cat.len());
        let g = &cat[instance].graph;
        let k = rng.gen_range(1..=4);
        let gap = rng.gen_range(0..=k);
        let m = if bounded {
            g.n() * (g.max_out_degree() + 1)
        } else {
            g.m()
        };
        let nu_cap = (m * (gap + 1) - 1) / (VOLUME_FACTOR as usize * k);
        if nu_cap <= k {
            continue;
        }
        // favor small budgets, which is where cuts live
        let nu = if rng.gen_bool(0.5) {
            rng.gen_range(k + 1..=nu_cap.min(8 * k + 8))
        } else {
            rng.gen_range(k + 1..=nu_cap)
        };
        jobs.push(LocalSpec {
            instance,
            x: rng.gen_range(0..g.n()),
            nu,
            k,
            gap,
            seed: rng.gen(),
            bounded,
        });
    }
    jobs
}

fn run_local(g: &Graph, s: &LocalSpec) -> Result<(Result<crate::local_ec::LocalRun, Error>, u64), Error> {
    let mut oracle = if s.bounded {
        QueryOracle::bounded(g, g.max_out_degree() + 1)?
    } else {
        QueryOracle::unbounded(g)
    };
    let p = LocalEcParams {
        x: s.x,
        nu: s.nu,
        k: s.k,
        gap: s.gap,
        seed: s.seed,
    };
    let run = local_ec(&mut oracle, &p);
    Ok((run, oracle.edge_queries()))
}

fn localec_soundness(opts: &SuiteOptions) -> Result<RunReport, Error> {
    let cat = local_catalogue(opts.seed)?;
    let jobs = local_jobs(&cat, opts.count(10_000), opts.seed, false);
    let mut report = RunReport::new("suite localec-soundness", opts.seed);
    run_trials(&mut report, &jobs, |_, s| {
        let g = &cat[s.instance].graph;
        let mut r = record(&cat[s.instance].name, g, s.k, s.gap as f64 / s.k as f64, s.seed);
        let (run, queries) = run_local(g, s)?;
        r.queries = queries;
        match run {
            Err(Error::InvalidWitness(msg)) => {
                r.outcome = format!("violation: {msg}");
                r.ok = false;
            }
            Err(e) => return Err(e),
            Ok(run) => match run.result.witness() {
                None => r.outcome = "bottom".into(),
                Some(w) => {
                    let CutWitness::EdgeCut { set, .. } = w else {
                        unreachable!("edge runs return edge cuts")
                    };
                    let st = g.cut_stats(set);
                    let vol_ok = st.vol_out as u128 * (s.gap as u128 + 1)
                        <= VOLUME_FACTOR as u128 * s.nu as u128 * s.k as u128;
                    r.ok = validate_witness(g, w) && st.cut_size < s.k + s.gap && vol_ok;
                    r.outcome = if r.ok { "found" } else { "violation" }.into();
                    r.detail = serde_json::json!({ "cut": st.cut_size, "vol": st.vol_out, "nu": s.nu, "gap": s.gap });
                }
            },
        }
        Ok(r)
    })?;
    let violations = report.trials.iter().filter(|t| !t.ok).count();
    let found = report.trials.iter().filter(|t| t.outcome == "found").count();
    report.aggregates.insert("calls".into(), report.trials.len() as f64);
    report.aggregates.insert("found".into(), found as f64);
    report.aggregates.insert("violations".into(), violations as f64);
    let n = report.trials.len();
    Ok(finish(
        report,
        violations == 0 && n >= 10_000.min(opts.count(10_000)),
        format!("{n} calls, {found} found, {violations} violations"),
    ))
}

fn ec_budget(opts: &SuiteOptions) -> Result<RunReport, Error> {
    let cat = local_catalogue(opts.seed)?;
    let half = opts.count(2_000);
    let mut jobs = local_jobs(&cat, half, opts.seed, false);
    jobs.extend(local_jobs(&cat, half, opts.seed ^ 0x5eed, true));
    let mut report = RunReport::new("suite ec-budget", opts.seed);
    run_trials(&mut report, &jobs, |_, s| {
        let g = &cat[s.instance].graph;
        let mut r = record(&cat[s.instance].name, g, s.k, s.gap as f64 / s.k as f64, s.seed);
        let (run, queries) = run_local(g, s)?;
        if let Err(e) = &run {
            if !matches!(e, Error::InvalidWitness(_)) {
                return Err(e.clone());
            }
        }
        let cap = mark_limit(s.nu, s.k, s.gap) + (s.k + s.gap) as u64;
        r.queries = queries;
        r.ok = queries <= cap;
        r.outcome = if s.bounded { "bounded" } else { "unbounded" }.into();
        r.detail = serde_json::json!({ "cap": cap });
        Ok(r)
    })?;
    let violations = report.trials.iter().filter(|t| !t.ok).count();
    let ratio = report
        .trials
        .iter()
        .map(|t| t.queries as f64 / t.detail["cap"].as_f64().unwrap_or(1.0))
        .fold(0.0, f64::max);
    report.aggregates.insert("violations".into(), violations as f64);
    report.aggregates.insert("max_queries_over_cap".into(), ratio);
    let n = report.trials.len();
    Ok(finish(
        report,
        violations == 0,
        format!("{n} calls, {violations} over budget, max usage {ratio:.3} of cap"),
    ))
}

/// Twenty planted local-cut instances: `(graph, seed vertex, ν, k)`.
pub fn completeness_instances(seed: u64) -> Result<Vec<(String, Graph, usize, usize)>, Error> {
    let mut rng = task_rng(seed, u64::MAX - 2);
    let mut out = Vec::new();
    let shapes = [
        (4, 1, 2),
        (5, 1, 2),
        (5, 1, 3),
        (5, 2, 3),
        (6, 1, 3),
        (6, 2, 3),
        (6, 2, 4),
        (6, 3, 4),
        (7, 2, 3),
        (7, 1, 4),
    ];
    for (round, h) in [(0, 3usize), (1, 5usize)] {
        for &(a, c, k) in &shapes {
            let h = h.max(k);
            let nu = a * (a - 1) + c;
            let need = VOLUME_FACTOR as usize * k * nu + 1;
            let base = need.div_ceil(h) + 50 * (round + 1);
            let (g, _) = gen_planted_local_cut(a, c, base, h, &mut rng)?;
            out.push((format!("cluster-a{a}-c{c}-k{k}-h{h}"), g, nu, k));
        }
    }
    Ok(out)
}

fn confirm_planted(g: &Graph, nu: usize, k: usize) -> Result<bool, Error> {
    Ok(match bf_local_witness(g, 0, nu, k, &OracleLimits::default())? {
        LocalAnswer::Found { cut_size, vol, .. } => cut_size < k && vol <= nu,
        _ => false,
    })
}

fn localec_completeness(opts: &SuiteOptions) -> Result<RunReport, Error> {
    let inst = completeness_instances(opts.seed)?;
    let mut report = RunReport::new("suite localec-completeness", opts.seed);
    let trials = opts.count(500);
    let mut jobs = Vec::new();
    let mut confirmed = 0;
    for (i, (_, g, nu, k)) in inst.iter().enumerate() {
        if confirm_planted(g, *nu, *k)? {
            confirmed += 1;
            jobs.extend((0..trials).map(|t| (i, t)));
        }
    }
    run_trials(&mut report, &jobs, |idx, &(i, _)| {
        let (name, g, nu, k) = &inst[i];
        let seed = trial_seed(opts.seed, idx);
        let mut r = record(name, g, *k, 0.0, seed);
        let mut oracle = QueryOracle::unbounded(g);
        let run = local_ec_exact(&mut oracle, 0, *nu, *k, seed)?;
        r.queries = oracle.edge_queries();
        r.ok = match run.result.witness() {
            Some(w) => validate_witness(g, w) && w.size() < *k,
            None => false,
        };
        r.outcome = if run.result.is_found() { "found" } else { "bottom" }.into();
        Ok(r)
    })?;
    let (worst, rates) = per_instance_rates(&report);
    report.aggregates.insert("confirmed_instances".into(), confirmed as f64);
    report.aggregates.insert("min_found_rate".into(), worst);
    report.aggregates.insert("mean_found_rate".into(), report.ok_rate());
    Ok(finish(
        report,
        confirmed == 20 && worst >= 0.70,
        format!("{confirmed}/20 instances confirmed, found rates {rates}, minimum {worst:.3}"),
    ))
}

/// Lowest per-instance success rate and a compact listing of all rates.
fn per_instance_rates(report: &RunReport) -> (f64, String) {
    let mut by: Vec<(String, usize, usize)> = Vec::new();
    for t in &report.trials {
        match by.iter_mut().find(|(n, _, _)| *n == t.instance) {
            Some(e) => {
                e.1 += t.ok as usize;
                e.2 += 1;
            }
            None => by.push((t.instance.clone(), t.ok as usize, 1)),
        }
    }
    let rates: Vec<f64> = by.iter().map(|&(_, ok, all)| ok as f64 / all as f64).collect();
    let worst = rates.iter().copied().fold(f64::INFINITY, f64::min);
    let listing = rates.iter().map(|r| format!("{r:.2}")).collect::<Vec<_>>().join(" ");
    (if rates.is_empty() { 0.0 } else { worst }, listing)
}

fn reversal_lemma(opts: &SuiteOptions) -> Result<RunReport, Error> {
    let jobs: Vec<usize> = (0..opts.count(10_000)).collect();
    let mut report = RunReport::new("suite reversal-lemma", opts.seed);
    run_trials(&mut report, &jobs, |i, _| {
        let mut rng = task_rng(opts.seed, i as u64);
        let n = rng.gen_range(3..40);
        let g = gen_gnp(n, rng.gen_range(0.05..0.5), true, &mut rng);
        let mut r = record("gnp", &g, 0, 0.0, 0);
        if g.m() == 0 {
            r.outcome = "empty".into();
            return Ok(r);
        }
        let mut ov = ReversalOverlay::new();
        for _ in 0..rng.gen_range(0..g.m()) {
            let id = rng.gen_range(0..g.m());
            let arc = ArcRef {
                id: id as u64,
                tail: g.arc_tail(id),
                head: g.arc_head(id),
            };
            let current = if ov.is_reversed(arc.id) {
                ArcRef {
                    id: arc.id,
                    tail: arc.head,
                    head: arc.tail,
                }
            } else {
                arc
            };
            ov.flip(current);
        }
        let x = rng.gen_range(0..n);
        let mut parent: FxHashMap<usize, ArcRef> = FxHashMap::default();
        let mut order = vec![x];
        let mut seen: FxHashSet<usize> = [x].into_iter().collect();
        let mut head = 0;
        while head < order.len() {
            let u = order[head];
            head += 1;
            let mut out = ov.graph_out(&g, u);
            out.shuffle(&mut rng);
            for a in out {
                if seen.insert(a.head) {
                    parent.insert(a.head, a);
                    order.push(a.head);
                }
            }
        }
        let y = *order.choose(&mut rng).expect("x is reached");
        let mut s: Vec<usize> = (0..n).filter(|&v| v == x || rng.gen_bool(0.5)).collect();
        s.sort_unstable();
        let before = ov.cut_stats(&g, &s);
        reverse_tree_path(&mut ov, &parent, x, y)?;
        let after = ov.cut_stats(&g, &s);
        let expect: i64 = if s.binary_search(&y).is_ok() { 0 } else { -1 };
        let dc = after.cut_size as i64 - before.cut_size as i64;
        let dv = after.vol_out as i64 - before.vol_out as i64;
        r.ok = dc == expect && dv == expect;
        r.outcome = format!("{dc}/{dv}");
        Ok(r)
    })?;
    let failures = report.trials.iter().filter(|t| !t.ok).count();
    report.aggregates.insert("mismatches".into(), failures as f64);
    let n = report.trials.len();
    Ok(finish(report, failures == 0, format!("{n} reversals, {failures} mismatches")))
}

/// A random triple whose left side is an out-ball around `x`.
pub fn rooted_triple<R: Rng>(g: &Graph, x: usize, rng: &mut R) -> Option<SeparationTriple> {
    let target = rng.gen_range(1..=g.n().div_ceil(2));
    let mut left = vec![x];
    let mut inside: FxHashSet<usize> = [x].into_iter().collect();
    let mut head = 0;
    while head < left.len() && left.len() < target {
        let u = left[head];
        head += 1;
        let mut nb = g.distinct_out_neighbors(u);
        nb.shuffle(rng);
        for w in nb {
            if left.len() < target && inside.insert(w) {
                left.push(w);
            }
        }
    }
    let sep = g.cut_stats(&left).n_out;
    let t = SeparationTriple::new(left, sep, g.n());
    (t.right_len() > 0).then_some(t)
}

fn split_lemmas(opts: &SuiteOptions) -> Result<RunReport, Error> {
    let jobs: Vec<usize> = (0..opts.count(1_000)).collect();
    let mut report = RunReport::new("suite split-lemmas", opts.seed);
    run_trials(&mut report, &jobs, |i, _| {
        let mut rng = task_rng(opts.seed, i as u64);
        loop {
            let n = rng.gen_range(6..40);
            let directed = rng.gen_bool(0.5);
            let g = gen_gnp(n, rng.gen_range(0.05..0.35), directed, &mut rng);
            let x = rng.gen_range(0..n);
            let Some(t) = rooted_triple(&g, x, &mut rng) else {
                continue;
            };
            let mut r = record(if directed { "gnp-directed" } else { "gnp" }, &g, t.separator.len(), 0.0, 0);
            let lifted = match lift_triple(&g, x, &t) {
                Ok(l) => l,
                Err(Error::InvalidWitness(msg)) => {
                    r.ok = false;
                    r.outcome = msg;
                    return Ok(r);
                }
                Err(e) => return Err(e),
            };
            let (cut, vol) = split_cut_stats(&g, x, &lifted);
            let base_vol: usize = t.left.iter().map(|&v| g.out_degree(v)).sum();
            let mut oracle = QueryOracle::unbounded(&g);
            let mut view = SplitGraphView::new(&mut oracle, x);
            let back = project_cut(&mut view, &lifted)?;
            r.ok = cut == t.separator.len()
                && base_vol <= vol
                && vol <= 2 * base_vol
                && back.validate(&g).is_ok()
                && back.separator.len() <= t.separator.len();
            r.outcome = format!("cut {cut} vol {base_vol}/{vol} back {}", back.separator.len());
            return Ok(r);
        }
    })?;
    let failures = report.trials.iter().filter(|t| !t.ok).count();
    report.aggregates.insert("violations".into(), failures as f64);
    let n = report.trials.len();
    Ok(finish(report, failures == 0, format!("{n} triples, {failures} violations")))
}

/// Fifty small graphs with known structure or random edges.
pub fn small_vc_graphs(seed: u64) -> Result<Vec<Named>, Error> {
    let mut rng = task_rng(seed, u64::MAX - 3);
    let mut out = Vec::new();
    for n in [5, 12, 30] {
        out.push(named(format!("cycle-{n}"), gen_cycle(n)));
        out.push(named(format!("cycle-undirected-{n}"), crate::generators::gen_cycle_undirected(n)));
    }
    for d in [3, 4, 5] {
        out.push(named(format!("hypercube-{d}"), gen_hypercube(d)));
    }
    for (a, b, s) in [(5, 5, 2), (6, 8, 3), (10, 7, 1), (12, 12, 5), (9, 9, 4)] {
        out.push(named(format!("glued-{a}-{b}-{s}"), gen_glued_cliques(a, b, s)?));
    }
    out.push(named("clique-8", gen_clique(8, false)));
    out.push(named("clique-directed-6", gen_clique(6, true)));
    out.push(named("ring-6-k4", gen_ring_of_cliques(6, 4)?));
    out.push(named("circulant-20", gen_circulant(20, &[1, 3, 5], false)?));
    let (g, _) = gen_planted_vertex_cut(12, 14, 3, &mut rng)?;
    out.push(named("planted-12-14-3", g));
    while out.len() < 50 {
        let directed = out.len() % 3 == 0;
        let n = rng.gen_range(8..=if directed { 35 } else { 60 });
        let p = rng.gen_range(0.1..0.6);
        out.push(named(
            format!("gnp-{}{n}", if directed { "d" } else { "" }),
            gen_gnp(n, p, directed, &mut rng),
        ));
    }
    Ok(out)
}

fn vc_exact_small(opts: &SuiteOptions) -> Result<RunReport, Error> {
    let graphs = small_vc_graphs(opts.seed)?;
    let mut report = RunReport::new("suite vc-exact-small", opts.seed);
    let limits = OracleLimits::default();
    run_trials(&mut report, &graphs, |i, inst| {
        let g = &inst.graph;
        let truth = bf_min_vertex_cut(g, &limits)?.kappa();
        let cfg = FrameworkConfig {
            boost: (g.n() as f64).ln().ceil() as usize,
            seed: trial_seed(opts.seed, i),
            ..FrameworkConfig::default()
        };
        let est = min_vertex_cut(g, 0.5, true, &cfg)?;
        let mut r = record(&inst.name, g, truth, 0.0, cfg.seed);
        let witness_ok = est.witness.as_ref().is_none_or(|t| t.validate(g).is_ok());
        r.ok = est.kappa == truth;
        r.outcome = format!("kappa {} truth {truth}", est.kappa);
        r.detail = serde_json::json!({ "witness_valid": witness_ok, "checks": est.checks });
        Ok(r)
    })?;
    let matches = report.trials.iter().filter(|t| t.ok).count();
    let bad_witness = report
        .trials
        .iter()
        .filter(|t| t.detail["witness_valid"] == serde_json::Value::Bool(false))
        .count();
    report.aggregates.insert("matches".into(), matches as f64);
    report.aggregates.insert("invalid_witnesses".into(), bad_witness as f64);
    let n = report.trials.len();
    Ok(finish(
        report,
        matches >= 49 && n == 50 && bad_witness == 0,
        format!("{matches}/{n} match brute force, {bad_witness} invalid witnesses"),
    ))
}

fn vc_scaling(opts: &SuiteOptions) -> Result<RunReport, Error> {
    let sizes = [20_000usize, 40_000, 80_000];
    let reps = opts.count(11);
    let mut report = RunReport::new("suite vc-scaling", opts.seed);
    let mut graphs = Vec::new();
    for (si, &n) in sizes.iter().enumerate() {
        let mut rng = task_rng(opts.seed, si as u64);
        let side = (n - 3) / 2;
        graphs.push(gen_planted_vertex_cut(side, n - 3 - side, 3, &mut rng)?.0);
    }
    let mut times = vec![Vec::new(); sizes.len()];
    let mut all_cut = true;
    // sizes are interleaved and runs are sequential, so background load
    // affects every size alike
    for rep in 0..reps {
        for (si, g) in graphs.iter().enumerate() {
            let cfg = FrameworkConfig {
                seed: trial_seed(opts.seed, si * 1000 + rep),
                ..FrameworkConfig::default()
            };
            let start = Instant::now();
            let out = vc_check(g, 4, 0.25, &cfg)?;
            let ms = start.elapsed().as_secs_f64() * 1e3;
            let ok = out
                .verdict
                .witness()
                .is_some_and(|t| t.validate(g).is_ok() && t.separator.len() < 5);
            all_cut &= ok;
            let mut r = record("planted-vertex-cut", g, 4, 0.25, cfg.seed);
            r.ok = ok;
            r.queries = (out.pairs_run + out.local_runs) as u64;
            r.outcome = out.mode.clone();
            r.detail = serde_json::json!({ "m": g.m(), "working_arcs": out.working_arcs });
            report.push(r, ms);
            times[si].push(ms);
        }
    }
    let medians: Vec<f64> = times.iter().map(|t| percentile(t, 50.0)).collect();
    let ratios: Vec<f64> = medians.windows(2).map(|w| w[1] / w[0]).collect();
    let worst = ratios.iter().copied().fold(0.0, f64::max);
    for (i, r) in ratios.iter().enumerate() {
        report.aggregates.insert(format!("ratio_{}", i + 1), *r);
    }
    for (i, m) in medians.iter().enumerate() {
        report.aggregates.insert(format!("median_ms_{}", sizes[i]), *m);
    }
    Ok(finish(
        report,
        all_cut && worst <= 2.6,
        format!(
            "median ms {:?}, ratios {:?}, all cuts found: {all_cut}",
            medians.iter().map(|m| (m * 10.0).round() / 10.0).collect::<Vec<_>>(),
            ratios.iter().map(|r| (r * 100.0).round() / 100.0).collect::<Vec<_>>()
        ),
    ))
}

struct TesterCase {
    name: &'static str,
    graph: Graph,
    property: Property,
    cfg: TesterConfig,
}

fn tester_case(name: &'static str, graph: Graph, property: Property, k: usize, eps: f64, model: TesterModel) -> TesterCase {
    TesterCase {
        name,
        graph,
        property,
        cfg: TesterConfig::new(k, eps, model, 0),
    }
}

fn connected_cases() -> Result<Vec<TesterCase>, Error> {
    let unb = TesterModel::Unbounded { avg_degree: None };
    let mut out = Vec::new();
    for property in [Property::EdgeConnectivity, Property::VertexConnectivity] {
        out.push(tester_case("complete-digraph-20", gen_clique(20, true), property, 3, 0.25, unb));
        out.push(tester_case("circulant-64", gen_circulant(64, &[1, 2, 3], false)?, property, 3, 0.25, unb));
        out.push(tester_case("hypercube-6", gen_hypercube(6), property, 3, 0.25, unb));
        out.push(tester_case(
            "complete-digraph-20",
            gen_clique(20, true),
            property,
            3,
            0.25,
            TesterModel::Bounded { d: 19 },
        ));
        out.push(tester_case(
            "circulant-64",
            gen_circulant(64, &[1, 2, 3], false)?,
            property,
            3,
            0.25,
            TesterModel::Bounded { d: 6 },
        ));
        out.push(tester_case("hypercube-6", gen_hypercube(6), property, 3, 0.25, TesterModel::Bounded { d: 6 }));
    }
    Ok(out)
}

fn far_cases() -> Result<Vec<TesterCase>, Error> {
    let unb = TesterModel::Unbounded { avg_degree: None };
    let triangles = || gen_union_of_cycles(100, 3, true);
    let ring = || gen_ring_of_cliques(40, 5);
    let e = Property::EdgeConnectivity;
    let v = Property::VertexConnectivity;
    Ok(vec![
        tester_case("triangles-100", triangles()?, e, 2, 0.1, unb),
        tester_case("ring-40-k5", ring()?, e, 3, 0.04, unb),
        tester_case("triangles-100", triangles()?, e, 2, 0.1, TesterModel::Bounded { d: 4 }),
        tester_case("ring-40-k5", ring()?, e, 3, 0.035, TesterModel::Bounded { d: 5 }),
        tester_case("triangles-100", triangles()?, v, 2, 0.1, unb),
        tester_case("ring-40-k5", ring()?, v, 3, 0.04, unb),
        tester_case("triangles-100", triangles()?, v, 2, 0.1, TesterModel::Bounded { d: 4 }),
        tester_case("ring-40-k5", ring()?, v, 3, 0.035, TesterModel::Bounded { d: 5 }),
    ])
}

fn case_label(c: &TesterCase) -> String {
    let model = match c.cfg.model {
        TesterModel::Unbounded { .. } => "unbounded",
        TesterModel::Bounded { .. } => "bounded",
    };
    let prop = match c.property {
        Property::EdgeConnectivity => "kec",
        Property::VertexConnectivity => "kvc",
    };
    format!("{prop}-{model}:{}", c.name)
}

/// Runs `trials` seeds of every case and records verdicts and queries.
fn tester_trials(report: &mut RunReport, cases: &[TesterCase], trials: usize, seed: u64) -> Result<(), Error> {
    let instances: Vec<TestInstance<'_>> = cases.iter().map(|c| TestInstance::new(&c.graph)).collect();
    let jobs: Vec<(usize, usize)> = (0..cases.len()).flat_map(|c| (0..trials).map(move |t| (c, t))).collect();
    run_trials(report, &jobs, |idx, &(c, _)| {
        let case = &cases[c];
        let mut cfg = case.cfg.clone();
        cfg.seed = trial_seed(seed, idx);
        let mut r = record(&case_label(case), &case.graph, cfg.k, cfg.eps, cfg.seed);
        let cap = query_cap(case.property, &cfg);
        match run_tester(&instances[c], case.property, &cfg) {
            Ok(out) => {
                r.queries = out.queries();
                r.outcome = if out.verdict.is_reject() { "reject" } else { "accept" }.into();
                r.detail = serde_json::json!({ "cap": cap, "local_runs": out.local_runs });
            }
            Err(Error::BudgetExhausted { cap }) => {
                r.outcome = "over-budget".into();
                r.detail = serde_json::json!({ "cap": cap });
            }
            Err(e) => return Err(e),
        }
        Ok(r)
    })
}

fn tester_one_sided(opts: &SuiteOptions) -> Result<RunReport, Error> {
    let cases = connected_cases()?;
    let per = opts.count(1_000).div_ceil(cases.len());
    let mut report = RunReport::new("suite tester-one-sided", opts.seed);
    tester_trials(&mut report, &cases, per, opts.seed)?;
    for t in &mut report.trials {
        t.ok = t.outcome == "accept";
    }
    let rejects = report.trials.iter().filter(|t| !t.ok).count();
    report.aggregates.insert("rejects".into(), rejects as f64);
    let n = report.trials.len();
    Ok(finish(report, rejects == 0, format!("{n} trials over 4 testers, {rejects} rejections")))
}

fn tester_far(opts: &SuiteOptions) -> Result<RunReport, Error> {
    let cases = far_cases()?;
    let mut report = RunReport::new("suite tester-far", opts.seed);
    tester_trials(&mut report, &cases, opts.count(300), opts.seed)?;
    for t in &mut report.trials {
        t.ok = t.outcome == "reject";
    }
    let (worst, rates) = per_instance_rates(&report);
    report.aggregates.insert("min_reject_rate".into(), worst);
    Ok(finish(
        report,
        worst >= 0.60,
        format!("reject rates {rates}, minimum {worst:.3}"),
    ))
}

fn tester_budget(opts: &SuiteOptions) -> Result<RunReport, Error> {
    let mut cases = connected_cases()?;
    cases.extend(far_cases()?);
    let unb = TesterModel::Unbounded { avg_degree: None };
    let offsets: Vec<usize> = (1..=10).collect();
    for k in [20, 21] {
        let mut c = tester_case(
            "circulant-400-simple",
            gen_circulant(400, &offsets, false)?,
            Property::EdgeConnectivity,
            k,
            0.5,
            unb,
        );
        c.cfg.simple_graph = true;
        cases.push(c);
    }
    let mut report = RunReport::new("suite tester-budget", opts.seed);
    tester_trials(&mut report, &cases, opts.count(20), opts.seed)?;
    for t in &mut report.trials {
        let cap = t.detail["cap"].as_u64().unwrap_or(0);
        t.ok = t.outcome != "over-budget" && t.queries <= cap;
    }
    let violations = report.trials.iter().filter(|t| !t.ok).count();
    let usage = report
        .trials
        .iter()
        .map(|t| t.queries as f64 / t.detail["cap"].as_f64().unwrap_or(1.0))
        .fold(0.0, f64::max);
    report.aggregates.insert("violations".into(), violations as f64);
    report.aggregates.insert("max_usage".into(), usage);
    let n = report.trials.len();
    Ok(finish(
        report,
        violations == 0,
        format!("{n} tester runs, {violations} over cap, max usage {usage:.4} of cap"),
    ))
}

fn dfs_parity(opts: &SuiteOptions) -> Result<RunReport, Error> {
    let inst = completeness_instances(opts.seed)?;
    let eps = 0.5;
    let trials = opts.count(200);
    let jobs: Vec<(usize, usize)> = (0..inst.len()).flat_map(|i| (0..trials).map(move |t| (i, t))).collect();
    let mut report = RunReport::new("suite dfs-parity", opts.seed);
    run_trials(&mut report, &jobs, |idx, &(i, _)| {
        let (name, g, nu, k) = &inst[i];
        let seed = trial_seed(opts.seed, idx);
        let mut r = record(name, g, *k, eps, seed);
        let mut oracle = QueryOracle::unbounded(g);
        let run = match local_ec_dfs(&mut oracle, 0, *nu, *k, eps, seed) {
            Ok(run) => run,
            Err(Error::InvalidWitness(msg)) => {
                r.outcome = format!("violation: {msg}");
                r.detail = serde_json::json!({ "sound": false });
                return Ok(r);
            }
            Err(e) => return Err(e),
        };
        r.queries = oracle.edge_queries();
        let limit = k + crate::local_ec::gap_for(*k, eps);
        let sound = match run.result.witness() {
            Some(w @ CutWitness::EdgeCut { set, .. }) => {
                let st = g.cut_stats(set);
                validate_witness(g, w)
                    && st.cut_size < limit
                    && st.vol_out as f64 <= DFS_VOLUME_FACTOR * *nu as f64 / eps
            }
            Some(_) => false,
            None => true,
        };
        r.ok = run.result.is_found() && sound;
        r.outcome = if run.result.is_found() { "found" } else { "bottom" }.into();
        r.detail = serde_json::json!({ "sound": sound });
        Ok(r)
    })?;
    let unsound = report
        .trials
        .iter()
        .filter(|t| t.detail["sound"] == serde_json::Value::Bool(false))
        .count();
    let (worst, rates) = per_instance_rates(&report);
    report.aggregates.insert("min_found_rate".into(), worst);
    report.aggregates.insert("unsound".into(), unsound as f64);
    Ok(finish(
        report,
        worst >= 0.45 && unsound == 0,
        format!("found rates {rates}, minimum {worst:.3}, {unsound} unsound"),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite() {
        let err = run_suite("nope", &SuiteOptions::default()).unwrap_err();
        assert_eq!(err, Error::UnknownSuite("nope".into()));
    }

    #[test]
    fn every_listed_suite_dispatches() {
        let opts = SuiteOptions { seed: 1, scale: 0.001 };
        for (name, _) in SUITES {
            if *name == "vc-scaling" || *name == "localec-completeness" || *name == "dfs-parity" {
                continue;
            }
            let r = run_suite(name, &opts).unwrap();
            assert!(r.passed.is_some(), "{name}");
        }
    }

    #[test]
    fn reports_are_reproducible() {
        let opts = SuiteOptions { seed: 5, scale: 0.01 };
        let a = run_suite("reversal-lemma", &opts).unwrap();
        let b = run_suite("reversal-lemma", &opts).unwrap();
        assert_eq!(a.trials, b.trials);
    }
}
