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

//! One-sided property testers for k-edge- and k-vertex-connectivity.
//!
//! Each tester samples a few vertices for a degree check, then seeds local
//! runs over a grid of volume budgets and gaps, on the graph and on its
//! reverse. It rejects only with a validated cut of size below `k`, so a
//! k-connected graph is always accepted. Graphs far from k-connected have
//! many disjoint small-volume deficient sets, and some seed lands in one.
//!
//! Query counts are the measured quantity: every access goes through a
//! [`QueryOracle`], and each tester has a matching cap function.

use std::borrow::Cow;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::graph::Graph;
use crate::local_ec::{check_params, finish_edge_run, run_engine, EngineOptions, LocalRun};
use crate::local_vc::run_split;
use crate::oracle::{sample_edge_regular, IncidenceOracle, QueryOracle};
use crate::rng::seeded;
use crate::witness::{CutWitness, SeparationTriple};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum TesterModel {
    /// Incidence lists of any length; `avg_degree` is `m/n` when known.
    Unbounded { avg_degree: Option<f64> },
    /// Every list padded with self-loops to length `d`.
    Bounded { d: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    EdgeConnectivity,
    VertexConnectivity,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TesterConfig {
    pub k: usize,
    pub eps: f64,
    pub model: TesterModel,
    /// No parallel arcs or loops; enables the degree-only path for large ε.
    pub simple_graph: bool,
    /// Degree-check samples are `⌈c1/ε⌉`.
    pub c1: f64,
    /// Scales every seed count.
    pub c2: f64,
    pub seed: u64,
}

impl TesterConfig {
    pub fn new(k: usize, eps: f64, model: TesterModel, seed: u64) -> Self {
        TesterConfig {
            k,
            eps,
            model,
            simple_graph: false,
            c1: 8.0,
            c2: 12.0,
            seed,
        }
    }

    /// `⌊log₂ k⌋ + 1`, the number of gap classes.
    pub fn levels(&self) -> usize {
        (usize::BITS - self.k.leading_zeros()) as usize
    }

    fn check(&self, n: usize, property: Property) -> Result<(), Error> {
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return Err(Error::Param(format!("eps = {} outside (0, 1)", self.eps)));
        }
        if self.k == 0 {
            return Err(Error::Param("k must be at least 1".into()));
        }
        if self.c1 <= 0.0 || self.c2 <= 0.0 {
            return Err(Error::Param("sample constants must be positive".into()));
        }
        if property == Property::VertexConnectivity && 4 * self.k >= n {
            return Err(Error::Param(format!("need 4k < n, got k = {}, n = {n}", self.k)));
        }
        if n < 2 {
            return Err(Error::Param("need at least two vertices".into()));
        }
        Ok(())
    }

    fn degree_samples(&self) -> usize {
        (self.c1 / self.eps).ceil() as usize
    }

    fn fast_path(&self, property: Property) -> bool {
        property == Property::EdgeConnectivity
            && self.simple_graph
            && self.eps > 4.0 / self.k as f64
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum TestVerdict {
    Accept,
    Reject { witness: CutWitness },
}

impl TestVerdict {
    pub fn is_reject(&self) -> bool {
        matches!(self, TestVerdict::Reject { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub verdict: TestVerdict,
    pub edge_queries: u64,
    pub degree_queries: u64,
    pub local_runs: usize,
    /// Cap the run was held to.
    pub cap: u64,
}

impl TestReport {
    pub fn queries(&self) -> u64 {
        self.edge_queries + self.degree_queries
    }
}

/// A graph with its reverse, built once and shared by repeated trials.
pub struct TestInstance<'g> {
    forward: &'g Graph,
    backward: Cow<'g, Graph>,
}

impl<'g> TestInstance<'g> {
    pub fn new(g: &'g Graph) -> Self {
        let backward = if g.is_directed() {
            Cow::Owned(g.reverse())
        } else {
            Cow::Borrowed(g)
        };
        TestInstance {
            forward: g,
            backward,
        }
    }

    pub fn graph(&self) -> &'g Graph {
        self.forward
    }
}

/// Local edge-cut run with a gap: looks for `S ∋ x`, `vol(S) ≤ ν`, with
/// fewer than `k − gap` crossing arcs, and returns only cuts below `k`.
/// Needs `gap < k`.
pub fn gap_local_ec<O: IncidenceOracle>(
    oracle: &mut O,
    x: usize,
    nu: usize,
    k: usize,
    gap: usize,
    seed: u64,
) -> Result<LocalRun, Error> {
    if gap >= k {
        return Err(Error::Param(format!("gap {gap} must be below k = {k}")));
    }
    let inner = k - gap;
    check_params(oracle, x, nu, inner, gap, false, 0)?;
    let raw = run_engine(oracle, x, nu, inner, gap, seed, EngineOptions { shortcut: true })?;
    finish_edge_run(raw, nu, inner, gap, false)
}

/// Vertex counterpart of [`gap_local_ec`] over the split graph.
pub fn gap_local_vc<O: IncidenceOracle>(
    oracle: &mut O,
    x: usize,
    nu: usize,
    k: usize,
    gap: usize,
    seed: u64,
) -> Result<LocalRun, Error> {
    if gap >= k {
        return Err(Error::Param(format!("gap {gap} must be below k = {k}")));
    }
    let inner = k - gap;
    check_params(oracle, x, nu, inner, gap, false, 0)?;
    run_split(oracle, x, nu, inner, gap, seed, false)
}

/// Edge-query cap of the unbounded testers: `C·k·L³/ε²`, scaled by `k/d̄`
/// when the average degree is known and smaller than `k`. `L` is
/// `⌊log₂ k⌋ + 1`. With the simple-graph path only degree queries are
/// made and the cap is `C'·L/ε³`.
pub fn unbounded_cap(property: Property, cfg: &TesterConfig) -> u64 {
    let l = cfg.levels() as f64;
    let eps = cfg.eps;
    if cfg.fast_path(property) {
        return ((2.0 * cfg.c1 + 2.0) * l / eps.powi(3)).ceil() as u64;
    }
    let c = match property {
        Property::EdgeConnectivity => 1300.0,
        Property::VertexConnectivity => 4700.0,
    } * (cfg.c2 + 1.0)
        + 2.0 * cfg.c1
        + 2.0;
    let density = match cfg.model {
        TesterModel::Unbounded {
            avg_degree: Some(d),
        } if d > 0.0 => (cfg.k as f64 / d).max(1.0),
        _ => 1.0,
    };
    (c * cfg.k as f64 * l.powi(3) / (eps * eps) * density).ceil() as u64
}

/// Edge-query cap of the bounded testers: `C·k·(L·J)²/ε`, `J` being the
/// number of volume classes at the largest gap.
pub fn bounded_cap(property: Property, cfg: &TesterConfig) -> u64 {
    let l = cfg.levels();
    let j = volume_classes(property, cfg, l - 1) as f64;
    let c = match property {
        Property::EdgeConnectivity => 1300.0 * cfg.c2 + 10_000.0,
        Property::VertexConnectivity => 2600.0 * cfg.c2 + 20_000.0,
    } + 2.0 * cfg.c1
        + 2.0;
    (c * cfg.k as f64 * (l as f64 * j).powi(2) / cfg.eps).ceil() as u64
}

fn volume_budget(property: Property, cfg: &TesterConfig, level: usize) -> usize {
    let shift = match property {
        Property::EdgeConnectivity => level + 2,
        Property::VertexConnectivity => level + 3,
    };
    ((1u64 << shift) as f64 * cfg.levels() as f64 / cfg.eps).ceil() as usize
}

/// `⌊log₂ η⌋ + 1` for the level's largest volume `η`.
fn volume_classes(property: Property, cfg: &TesterConfig, level: usize) -> usize {
    let eta = volume_budget(property, cfg, level);
    (usize::BITS - eta.leading_zeros()) as usize
}

struct Session<'a, 'g> {
    inst: &'a TestInstance<'g>,
    property: Property,
    cfg: &'a TesterConfig,
    forward: QueryOracle<'a>,
    backward: QueryOracle<'a>,
    local_runs: usize,
    cap: u64,
}

impl<'a, 'g> Session<'a, 'g> {
    fn new(inst: &'a TestInstance<'g>, property: Property, cfg: &'a TesterConfig, cap: u64) -> Result<Self, Error> {
        let (forward, backward) = match cfg.model {
            TesterModel::Unbounded { .. } => (
                QueryOracle::unbounded(inst.forward),
                QueryOracle::unbounded(&inst.backward),
            ),
            TesterModel::Bounded { d } => (
                QueryOracle::bounded(inst.forward, d)?,
                QueryOracle::bounded(&inst.backward, d)?,
            ),
        };
        Ok(Session {
            inst,
            property,
            cfg,
            forward: forward.with_cap(cap),
            backward: backward.with_cap(cap),
            local_runs: 0,
            cap,
        })
    }

    fn directions(&self) -> &'static [bool] {
        if self.inst.forward.is_directed() {
            &[false, true]
        } else {
            &[false]
        }
    }

    fn edge_queries(&self) -> u64 {
        self.forward.edge_queries() + self.backward.edge_queries()
    }

    fn degree_queries(&self) -> u64 {
        self.forward.degree_queries() + self.backward.degree_queries()
    }

    /// Turns a set or triple found on one direction into a validated
    /// witness on the input graph.
    fn witness(&self, found: &CutWitness, reversed: bool) -> Result<CutWitness, Error> {
        let g = self.inst.forward;
        let w = match found {
            CutWitness::EdgeCut { set, .. } if reversed => {
                let mut inside = vec![false; g.n()];
                set.iter().for_each(|&v| inside[v] = true);
                CutWitness::edge_cut(g, (0..g.n()).filter(|&v| !inside[v]).collect())
            }
            CutWitness::EdgeCut { set, .. } => CutWitness::edge_cut(g, set.clone()),
            CutWitness::VertexCut(t) if reversed => CutWitness::VertexCut(t.mirrored()),
            CutWitness::VertexCut(t) => CutWitness::VertexCut(t.clone()),
        };
        w.validate(g).map_err(Error::InvalidWitness)?;
        if w.size() >= self.cfg.k {
            return Err(Error::InvalidWitness(format!(
                "cut of size {} is not below k = {}",
                w.size(),
                self.cfg.k
            )));
        }
        Ok(w)
    }

    fn degree_check<R: Rng>(&mut self, rng: &mut R) -> Result<Option<CutWitness>, Error> {
        let n = self.inst.forward.n();
        for _ in 0..self.cfg.degree_samples() {
            let v = rng.gen_range(0..n);
            for &reversed in self.directions() {
                let oracle = if reversed { &mut self.backward } else { &mut self.forward };
                if oracle.degree(v)? >= self.cfg.k {
                    continue;
                }
                let h = if reversed { &*self.inst.backward } else { self.inst.forward };
                let found = match self.property {
                    Property::EdgeConnectivity => CutWitness::edge_cut(h, vec![v]),
                    Property::VertexConnectivity => CutWitness::VertexCut(SeparationTriple::new(
                        vec![v],
                        h.distinct_out_neighbors(v),
                        n,
                    )),
                };
                return self.witness(&found, reversed).map(Some);
            }
        }
        Ok(None)
    }

    fn local<R: Rng>(&mut self, rng: &mut R, x: usize, nu: usize, gap: usize) -> Result<Option<CutWitness>, Error> {
        for &reversed in self.directions() {
            self.local_runs += 1;
            let oracle = if reversed { &mut self.backward } else { &mut self.forward };
            let seed = rng.gen();
            let run = match self.property {
                Property::EdgeConnectivity => gap_local_ec(oracle, x, nu, self.cfg.k, gap, seed)?,
                Property::VertexConnectivity => gap_local_vc(oracle, x, nu, self.cfg.k, gap, seed)?,
            };
            if let Some(found) = run.result.witness() {
                return self.witness(found, reversed).map(Some);
            }
        }
        Ok(None)
    }

    fn finish(self, witness: Option<CutWitness>) -> Result<TestReport, Error> {
        let report = TestReport {
            verdict: match witness {
                Some(witness) => TestVerdict::Reject { witness },
                None => TestVerdict::Accept,
            },
            edge_queries: self.edge_queries(),
            degree_queries: self.degree_queries(),
            local_runs: self.local_runs,
            cap: self.cap,
        };
        if report.queries() > report.cap {
            return Err(Error::BudgetExhausted { cap: report.cap });
        }
        Ok(report)
    }
}

fn unbounded(inst: &TestInstance<'_>, property: Property, cfg: &TesterConfig) -> Result<TestReport, Error> {
    let n = inst.forward.n();
    cfg.check(n, property)?;
    let TesterModel::Unbounded { avg_degree } = cfg.model else {
        return Err(Error::Param("expected the unbounded model".into()));
    };
    let cap = unbounded_cap(property, cfg);
    let mut s = Session::new(inst, property, cfg, cap)?;
    let mut rng = seeded(cfg.seed);
    if let Some(w) = s.degree_check(&mut rng)? {
        return s.finish(Some(w));
    }
    if cfg.fast_path(property) {
        return s.finish(None);
    }
    let log_k = (cfg.k.max(2) as f64).ln();
    let seeds = match avg_degree {
        Some(d) if d > 0.0 => cfg.c2 * cfg.k as f64 * log_k / (cfg.eps * d),
        _ => cfg.c2 * log_k / cfg.eps,
    }
    .ceil() as usize;
    for _ in 0..seeds {
        let x = rng.gen_range(0..n);
        for i in 0..cfg.levels() {
            let nu = volume_budget(property, cfg, i);
            if let Some(w) = s.local(&mut rng, x, nu, (1 << i) - 1)? {
                return s.finish(Some(w));
            }
        }
    }
    s.finish(None)
}

fn bounded(inst: &TestInstance<'_>, property: Property, cfg: &TesterConfig) -> Result<TestReport, Error> {
    let n = inst.forward.n();
    cfg.check(n, property)?;
    if !matches!(cfg.model, TesterModel::Bounded { .. }) {
        return Err(Error::Param("expected the bounded model".into()));
    }
    let cap = bounded_cap(property, cfg);
    let mut s = Session::new(inst, property, cfg, cap)?;
    let mut rng = seeded(cfg.seed);
    if let Some(w) = s.degree_check(&mut rng)? {
        return s.finish(Some(w));
    }
    let l = cfg.levels() as f64;
    for i in 0..cfg.levels() {
        let classes = volume_classes(property, cfg, i);
        for j in 0..classes {
            let count = (cfg.c2 * l * classes as f64 * (1u64 << i) as f64
                / (cfg.eps * (1u64 << j) as f64))
                .ceil() as usize;
            let nu = 1usize << (j + 1);
            for _ in 0..count {
                let x = sample_edge_regular(&mut s.forward, &mut rng)?.tail;
                if let Some(w) = s.local(&mut rng, x, nu, (1 << i) - 1)? {
                    return s.finish(Some(w));
                }
            }
        }
    }
    s.finish(None)
}

/// k-edge-connectivity in the unbounded-degree model.
pub fn test_kec_unbounded(inst: &TestInstance<'_>, cfg: &TesterConfig) -> Result<TestReport, Error> {
    unbounded(inst, Property::EdgeConnectivity, cfg)
}

/// k-edge-connectivity in the bounded-degree model.
pub fn test_kec_bounded(inst: &TestInstance<'_>, cfg: &TesterConfig) -> Result<TestReport, Error> {
    bounded(inst, Property::EdgeConnectivity, cfg)
}

/// k-vertex-connectivity in the unbounded-degree model. Needs `4k < n`.
pub fn test_kvc_unbounded(inst: &TestInstance<'_>, cfg: &TesterConfig) -> Result<TestReport, Error> {
    unbounded(inst, Property::VertexConnectivity, cfg)
}

/// k-vertex-connectivity in the bounded-degree model. Needs `4k < n`.
pub fn test_kvc_bounded(inst: &TestInstance<'_>, cfg: &TesterConfig) -> Result<TestReport, Error> {
    bounded(inst, Property::VertexConnectivity, cfg)
}

/// Dispatches on property and on the model in `cfg`.
pub fn run_tester(inst: &TestInstance<'_>, property: Property, cfg: &TesterConfig) -> Result<TestReport, Error> {
    match cfg.model {
        TesterModel::Unbounded { .. } => unbounded(inst, property, cfg),
        TesterModel::Bounded { .. } => bounded(inst, property, cfg),
    }
}

/// The cap [`run_tester`] would apply.
pub fn query_cap(property: Property, cfg: &TesterConfig) -> u64 {
    match cfg.model {
        TesterModel::Unbounded { .. } => unbounded_cap(property, cfg),
        TesterModel::Bounded { .. } => bounded_cap(property, cfg),
    }
}
