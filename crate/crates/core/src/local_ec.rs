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

//! Local edge-cut detection by repeated search with random stops and path
//! reversal.
//!
//! Each round grows a BFS tree from the seed over the current orientation
//! and marks every arc it scans. A newly marked arc stops the round with
//! probability `(gap+1)/(8ν)`; the tree path to the stopping arc's tail is
//! then reversed, which lowers the cut of any small set around the seed by
//! one exactly when the stop landed outside it. A round that runs dry has
//! found a set with no outgoing arcs in the current orientation, hence
//! fewer than `k + gap` in the base graph.

use std::collections::VecDeque;

use rand::Rng;
use rustc_hash::{FxHashMap, FxHashSet};
use serde::Serialize;

use crate::error::Error;
use crate::graph::Graph;
use crate::oracle::{Answer, ArcRef, IncidenceOracle};
use crate::overlay::ReversalOverlay;
pub use crate::overlay::reverse_tree_path;
use crate::rng::{coin, seeded};
use crate::witness::CutWitness;

/// A round stops at a newly marked arc with probability
/// `(gap+1)/(STOP_DENOMINATOR·ν)`.
pub const STOP_DENOMINATOR: u64 = 8;
/// The search gives up once `⌈MARK_FACTOR·ν·k/(gap+1)⌉` arcs are marked.
pub const MARK_FACTOR: u64 = 128;
/// Found sets have out-volume at most `VOLUME_FACTOR·ν·k/(gap+1)`.
pub const VOLUME_FACTOR: u64 = 130;
/// The DFS variant stops a round after `⌈DFS_VISIT_FACTOR·ν/ε⌉` arcs.
pub const DFS_VISIT_FACTOR: f64 = 8.0;
/// Found sets of the DFS variant have out-volume at most
/// `DFS_VOLUME_FACTOR·ν/ε`.
pub const DFS_VOLUME_FACTOR: f64 = 10.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LocalEcParams {
    /// Seed vertex.
    pub x: usize,
    /// Volume budget.
    pub nu: usize,
    pub k: usize,
    pub gap: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum LocalResult {
    Found(CutWitness),
    Bottom,
}

impl LocalResult {
    pub fn is_found(&self) -> bool {
        matches!(self, LocalResult::Found(_))
    }

    pub fn witness(&self) -> Option<&CutWitness> {
        match self {
            LocalResult::Found(w) => Some(w),
            LocalResult::Bottom => None,
        }
    }
}

/// Outcome of one local run with its transcript.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalRun {
    pub result: LocalResult,
    /// Distinct arcs marked (BFS) or visited (DFS).
    pub marks: usize,
    /// Rounds started.
    pub rounds: usize,
    /// Endpoint of each reversed path, in order.
    pub stops: Vec<usize>,
}

/// `⌈MARK_FACTOR·ν·k/(gap+1)⌉`.
pub fn mark_limit(nu: usize, k: usize, gap: usize) -> u64 {
    let num = MARK_FACTOR as u128 * nu as u128 * k as u128;
    num.div_ceil(gap as u128 + 1) as u64
}

/// `⌊εk⌋`, robust to the rounding of products like `0.3 · 10`.
pub fn gap_for(k: usize, eps: f64) -> usize {
    (eps * k as f64 + 1e-9).floor() as usize
}

/// A found set together with every base out-arc of its members.
#[derive(Clone, Debug)]
pub(crate) struct RawFound {
    pub set: Vec<usize>,
    pub arcs: Vec<ArcRef>,
}

impl RawFound {
    pub fn cut_size(&self) -> usize {
        let members: FxHashSet<usize> = self.set.iter().copied().collect();
        self.arcs.iter().filter(|a| !members.contains(&a.head)).count()
    }
}

pub(crate) struct RawRun {
    pub found: Option<RawFound>,
    pub marks: usize,
    pub rounds: usize,
    pub stops: Vec<usize>,
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct EngineOptions {
    /// Return `{v}` as soon as a vertex of out-degree below `k` is reached.
    pub shortcut: bool,
}

/// Lazily fetched out-lists plus the overlay of one run.
pub(crate) struct Explorer<'o, O: IncidenceOracle> {
    oracle: &'o mut O,
    degrees: FxHashMap<usize, usize>,
    lists: FxHashMap<usize, Vec<ArcRef>>,
    pub overlay: ReversalOverlay,
}

impl<'o, O: IncidenceOracle> Explorer<'o, O> {
    pub fn new(oracle: &'o mut O) -> Self {
        Explorer {
            oracle,
            degrees: FxHashMap::default(),
            lists: FxHashMap::default(),
            overlay: ReversalOverlay::new(),
        }
    }

    pub fn degree(&mut self, v: usize) -> Result<usize, Error> {
        if let Some(&d) = self.degrees.get(&v) {
            return Ok(d);
        }
        let d = self.oracle.degree(v)?;
        self.degrees.insert(v, d);
        Ok(d)
    }

    /// Base out-arc `i` (0-based) of `v`; fetched on first use.
    fn base_arc(&mut self, v: usize, i: usize) -> Result<ArcRef, Error> {
        let list = self.lists.entry(v).or_default();
        while list.len() <= i {
            match self.oracle.query_edge(v, list.len() + 1)? {
                Answer::Arc(a) => list.push(a),
                Answer::EndOfList => return Err(Error::IndexOutOfRange { vertex: v, index: i + 1 }),
            }
        }
        Ok(list[i])
    }

    /// The complete base out-list of `v`.
    pub fn base_list(&mut self, v: usize) -> Result<Vec<ArcRef>, Error> {
        let d = self.degree(v)?;
        if d > 0 {
            self.base_arc(v, d - 1)?;
        }
        Ok(self.lists.get(&v).cloned().unwrap_or_default())
    }

    /// Advances a cursor over the current out-list of `v`: unflipped base
    /// arcs first, then flipped arcs now leaving `v`.
    fn next_arc(&mut self, v: usize, pos: &mut usize) -> Result<Option<ArcRef>, Error> {
        let d = self.degree(v)?;
        while *pos < d {
            let a = self.base_arc(v, *pos)?;
            *pos += 1;
            if !self.overlay.is_reversed(a.id) {
                return Ok(Some(a));
            }
        }
        let j = *pos - d;
        let flipped = self.overlay.flipped_in(v);
        if j < flipped.len() {
            let a = flipped[j];
            *pos += 1;
            return Ok(Some(ArcRef {
                id: a.id,
                tail: v,
                head: a.tail,
            }));
        }
        Ok(None)
    }

    fn found(&mut self, set: Vec<usize>) -> Result<RawFound, Error> {
        let mut arcs = Vec::new();
        for &v in &set {
            arcs.extend(self.base_list(v)?);
        }
        Ok(RawFound { set, arcs })
    }
}

pub(crate) fn check_params<O: IncidenceOracle>(
    oracle: &O,
    x: usize,
    nu: usize,
    k: usize,
    gap: usize,
    strict: bool,
    precondition_factor: u64,
) -> Result<(), Error> {
    let n = oracle.vertex_count();
    if x >= n {
        return Err(Error::Param(format!("seed vertex {x} out of range (n = {n})")));
    }
    if k == 0 {
        return Err(Error::Param("k must be at least 1".into()));
    }
    if nu == 0 {
        return Err(Error::Param("volume budget must be positive".into()));
    }
    if !strict {
        return Ok(());
    }
    if nu <= k {
        return Err(Error::Param(format!("volume budget {nu} must exceed k = {k}")));
    }
    if gap > k {
        return Err(Error::Param(format!("gap {gap} exceeds k = {k}")));
    }
    if let Some(m) = oracle.arc_count() {
        let lhs = precondition_factor as u128 * k as u128 * nu as u128;
        let rhs = m as u128 * (gap as u128 + 1);
        if lhs >= rhs {
            return Err(Error::Param(format!(
                "volume budget {nu} too large: need {precondition_factor}·k·ν < m·(gap+1) with m = {m}"
            )));
        }
    }
    Ok(())
}

/// The BFS engine shared by the edge and vertex variants.
pub(crate) fn run_engine<O: IncidenceOracle>(
    oracle: &mut O,
    x: usize,
    nu: usize,
    k: usize,
    gap: usize,
    seed: u64,
    opts: EngineOptions,
) -> Result<RawRun, Error> {
    let n = oracle.vertex_count();
    let limit = mark_limit(nu, k, gap);
    let stop_num = gap as u64 + 1;
    let stop_den = STOP_DENOMINATOR * nu as u64;
    let mut rng = seeded(seed);
    let mut ex = Explorer::new(oracle);
    let mut run = RawRun {
        found: None,
        marks: 0,
        rounds: 0,
        stops: Vec::new(),
    };

    if opts.shortcut && ex.degree(x)? < k {
        run.found = Some(ex.found(vec![x])?);
        return Ok(run);
    }

    for _ in 0..k + gap {
        run.rounds += 1;
        let mut visited: FxHashSet<usize> = FxHashSet::default();
        let mut order = vec![x];
        let mut parent: FxHashMap<usize, ArcRef> = FxHashMap::default();
        let mut queue = VecDeque::from([x]);
        visited.insert(x);
        let mut stop = None;

        'bfs: while let Some(u) = queue.pop_front() {
            let mut pos = 0;
            while let Some(a) = ex.next_arc(u, &mut pos)? {
                if ex.overlay.mark(a.id) {
                    run.marks += 1;
                    if run.marks as u64 >= limit {
                        return Ok(run);
                    }
                    if coin(&mut rng, stop_num, stop_den) {
                        stop = Some(a.tail);
                        break 'bfs;
                    }
                }
                if visited.insert(a.head) {
                    parent.insert(a.head, a);
                    order.push(a.head);
                    if opts.shortcut && ex.degree(a.head)? < k {
                        run.found = Some(ex.found(vec![a.head])?);
                        return Ok(run);
                    }
                    queue.push_back(a.head);
                }
            }
        }

        match stop {
            None => {
                if order.len() < n {
                    run.found = Some(ex.found(order)?);
                }
                return Ok(run);
            }
            Some(y) => {
                run.stops.push(y);
                reverse_tree_path(&mut ex.overlay, &parent, x, y)?;
            }
        }
    }
    Ok(run)
}

fn edge_witness(found: &RawFound) -> CutWitness {
    let members: FxHashSet<usize> = found.set.iter().copied().collect();
    let mut set = found.set.clone();
    set.sort_unstable();
    let mut crossing: Vec<(usize, usize)> = found
        .arcs
        .iter()
        .filter(|a| !members.contains(&a.head))
        .map(|a| (a.tail, a.head))
        .collect();
    crossing.sort_unstable();
    CutWitness::EdgeCut { set, crossing }
}

pub(crate) fn finish_edge_run(
    raw: RawRun,
    nu: usize,
    k: usize,
    gap: usize,
    strict: bool,
) -> Result<LocalRun, Error> {
    let result = match &raw.found {
        None => LocalResult::Bottom,
        Some(found) => {
            let cut = found.cut_size();
            let vol = found.arcs.len() as u128;
            if cut >= k + gap {
                return Err(Error::InvalidWitness(format!(
                    "cut {cut} is not below k + gap = {}",
                    k + gap
                )));
            }
            if strict && vol * (gap as u128 + 1) > VOLUME_FACTOR as u128 * nu as u128 * k as u128 {
                return Err(Error::InvalidWitness(format!("volume {vol} exceeds the bound")));
            }
            LocalResult::Found(edge_witness(found))
        }
    };
    Ok(LocalRun {
        result,
        marks: raw.marks,
        rounds: raw.rounds,
        stops: raw.stops,
    })
}

/// Looks for a set `S ∋ x` with `|E(S, V−S)| < k` and `vol(S) ≤ ν`.
///
/// A returned set always has fewer than `k + gap` crossing arcs and volume
/// at most `130·ν·k/(gap+1)`. When a set of the target shape exists, one is
/// found with probability at least 3/4. Needs `k < ν`, `gap ≤ k` and, when
/// the oracle discloses `m`, `130·k·ν < m·(gap+1)`.
///
/// ```
/// use localconn::generators::gen_cycle;
/// use localconn::local_ec::{local_ec, LocalEcParams};
/// use localconn::oracle::QueryOracle;
///
/// let g = gen_cycle(6000);
/// let mut oracle = QueryOracle::unbounded(&g);
/// let params = LocalEcParams { x: 0, nu: 20, k: 2, gap: 0, seed: 7 };
/// let run = local_ec(&mut oracle, &params).unwrap();
/// if let Some(w) = run.result.witness() {
///     assert_eq!(w.size(), 1);
/// }
/// ```
pub fn local_ec<O: IncidenceOracle>(oracle: &mut O, p: &LocalEcParams) -> Result<LocalRun, Error> {
    check_params(oracle, p.x, p.nu, p.k, p.gap, true, VOLUME_FACTOR)?;
    let opts = EngineOptions { shortcut: true };
    let raw = run_engine(oracle, p.x, p.nu, p.k, p.gap, p.seed, opts)?;
    finish_edge_run(raw, p.nu, p.k, p.gap, true)
}

/// [`local_ec`] with `gap = 0`: any returned cut is smaller than `k`.
pub fn local_ec_exact<O: IncidenceOracle>(
    oracle: &mut O,
    x: usize,
    nu: usize,
    k: usize,
    seed: u64,
) -> Result<LocalRun, Error> {
    local_ec(oracle, &LocalEcParams { x, nu, k, gap: 0, seed })
}

/// [`local_ec`] with `gap = ⌊εk⌋`: any returned cut is smaller than
/// `⌊(1+ε)k⌋`.
pub fn local_ec_approx<O: IncidenceOracle>(
    oracle: &mut O,
    x: usize,
    nu: usize,
    k: usize,
    eps: f64,
    seed: u64,
) -> Result<LocalRun, Error> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::Param(format!("eps = {eps} outside (0, 1]")));
    }
    let gap = gap_for(k, eps);
    local_ec(oracle, &LocalEcParams { x, nu, k, gap, seed })
}

/// DFS variant: each round visits exactly `⌈8ν/ε⌉` arcs, then reverses
/// the tree path to the head of a uniformly chosen visited arc.
///
/// A returned set has fewer than `⌊(1+ε)k⌋` crossing arcs and volume at most
/// `10ν/ε`; a target set is missed with probability at most 1/2. Needs
/// `k ≤ ν` and, when `m` is known, `8ν < εm`.
pub fn local_ec_dfs<O: IncidenceOracle>(
    oracle: &mut O,
    x: usize,
    nu: usize,
    k: usize,
    eps: f64,
    seed: u64,
) -> Result<LocalRun, Error> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::Param(format!("eps = {eps} outside (0, 1]")));
    }
    let n = oracle.vertex_count();
    if x >= n {
        return Err(Error::Param(format!("seed vertex {x} out of range (n = {n})")));
    }
    if k == 0 || nu < k {
        return Err(Error::Param(format!("need 1 ≤ k ≤ ν, got k = {k}, ν = {nu}")));
    }
    if let Some(m) = oracle.arc_count() {
        if DFS_VISIT_FACTOR * nu as f64 >= eps * m as f64 {
            return Err(Error::Param(format!("volume budget {nu} too large for m = {m}")));
        }
    }
    let gap = gap_for(k, eps);
    let target = (DFS_VISIT_FACTOR * nu as f64 / eps - 1e-9).ceil() as usize;
    let mut rng = seeded(seed);
    let mut ex = Explorer::new(oracle);
    let mut raw = RawRun {
        found: None,
        marks: 0,
        rounds: 0,
        stops: Vec::new(),
    };

    for _ in 0..k + gap {
        raw.rounds += 1;
        let mut visited: FxHashSet<usize> = FxHashSet::default();
        let mut order = vec![x];
        let mut parent: FxHashMap<usize, ArcRef> = FxHashMap::default();
        let mut edges: Vec<ArcRef> = Vec::new();
        let mut stack: Vec<(usize, usize)> = vec![(x, 0)];
        visited.insert(x);

        while let Some(&mut (u, ref mut pos)) = stack.last_mut() {
            let mut cursor = *pos;
            let next = ex.next_arc(u, &mut cursor)?;
            *pos = cursor;
            let Some(a) = next else {
                stack.pop();
                continue;
            };
            edges.push(a);
            if ex.overlay.mark(a.id) {
                raw.marks += 1;
            }
            if visited.insert(a.head) {
                parent.insert(a.head, a);
                order.push(a.head);
                stack.push((a.head, 0));
            }
            if edges.len() >= target {
                break;
            }
        }

        if edges.len() < target {
            if order.len() < n {
                raw.found = Some(ex.found(order)?);
            }
            break;
        }
        let y = edges[rng.gen_range(0..edges.len())].head;
        raw.stops.push(y);
        reverse_tree_path(&mut ex.overlay, &parent, x, y)?;
    }

    if let Some(found) = &raw.found {
        let vol = found.arcs.len() as f64;
        if vol > DFS_VOLUME_FACTOR * nu as f64 / eps + 1e-9 {
            return Err(Error::InvalidWitness(format!("volume {vol} exceeds the bound")));
        }
    }
    finish_edge_run(raw, nu, k, gap, false)
}

/// Runs [`local_ec`] directly on a graph with a fresh counting oracle and
/// returns the run with the number of edge queries it made.
pub fn local_ec_on_graph(g: &Graph, p: &LocalEcParams) -> Result<(LocalRun, u64), Error> {
    let mut oracle = crate::oracle::QueryOracle::unbounded(g);
    let run = local_ec(&mut oracle, p)?;
    Ok((run, oracle.edge_queries()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_clique, gen_cycle};
    use crate::oracle::QueryOracle;

    #[test]
    fn limits() {
        assert_eq!(mark_limit(20, 2, 0), 5120);
        assert_eq!(mark_limit(10, 3, 2), 1280);
        assert_eq!(gap_for(10, 0.3), 3);
        assert_eq!(gap_for(4, 0.1), 0);
    }

    #[test]
    fn cycle_finds_cut_of_one() {
        let g = gen_cycle(6000);
        let mut found = 0;
        for seed in 0..200 {
            let (run, _) = local_ec_on_graph(&g, &LocalEcParams { x: 0, nu: 20, k: 2, gap: 0, seed }).unwrap();
            if let Some(w) = run.result.witness() {
                assert_eq!(w.size(), 1);
                found += 1;
            }
        }
        assert!(found >= 140, "{found}");
    }

    #[test]
    fn clique_is_always_bottom() {
        let g = gen_clique(200, true);
        for seed in 0..20 {
            let (run, _) = local_ec_on_graph(&g, &LocalEcParams { x: 0, nu: 60, k: 3, gap: 0, seed }).unwrap();
            assert_eq!(run.result, LocalResult::Bottom);
        }
    }

    #[test]
    fn strongly_connected_k1_is_bottom() {
        let g = gen_cycle(5000);
        for seed in 0..20 {
            let run = local_ec_exact(&mut QueryOracle::unbounded(&g), 0, 10, 1, seed).unwrap();
            assert_eq!(run.result, LocalResult::Bottom);
        }
    }

    #[test]
    fn low_degree_shortcut() {
        let g = Graph::from_arcs(3000, &(0..3000).map(|i| (i, (i + 1) % 3000)).collect::<Vec<_>>()).unwrap();
        let run = local_ec_exact(&mut QueryOracle::unbounded(&g), 5, 10, 2, 1).unwrap();
        let w = run.result.witness().unwrap();
        assert!(matches!(w, CutWitness::EdgeCut { set, .. } if set == &vec![5]));
    }

    #[test]
    fn preconditions() {
        let g = gen_cycle(100);
        let mut o = QueryOracle::unbounded(&g);
        assert!(local_ec_exact(&mut o, 0, 2, 2, 0).is_err());
        assert!(local_ec_exact(&mut o, 0, 20, 2, 0).is_err());
        assert!(local_ec(&mut o, &LocalEcParams { x: 0, nu: 5, k: 1, gap: 2, seed: 0 }).is_err());
        assert!(local_ec_exact(&mut o, 100, 5, 1, 0).is_err());
    }

    #[test]
    fn dfs_is_deterministic() {
        let g = gen_cycle(2000);
        let a = local_ec_dfs(&mut QueryOracle::unbounded(&g), 0, 10, 2, 1.0, 42).unwrap();
        let b = local_ec_dfs(&mut QueryOracle::unbounded(&g), 0, 10, 2, 1.0, 42).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn query_budget_on_clique() {
        let g = gen_clique(200, true);
        let p = LocalEcParams { x: 3, nu: 40, k: 3, gap: 1, seed: 5 };
        let (_, queries) = local_ec_on_graph(&g, &p).unwrap();
        assert!(queries <= mark_limit(40, 3, 1) + 4);
    }
}
