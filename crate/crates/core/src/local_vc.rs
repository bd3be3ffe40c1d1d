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

//! Local vertex cuts through the split graph.
//!
//! With respect to a seed `x`, every other vertex `v` becomes an arc
//! `v_in -> v_out`, and every arc `(u, v)` becomes `u_out -> v_in`; `x`
//! keeps a single copy. Small edge cuts around `x` in this graph project
//! back to separation triples whose separator is no larger than the cut.
//! The split graph is never built: [`SplitGraphView`] answers queries on
//! the fly from the base oracle.
//!
//! Ids in the split graph are `2v` for `v_in` and `2v + 1` for `v_out`;
//! `x` is always `2x`.

use rustc_hash::FxHashSet;

use crate::error::Error;
use crate::graph::Graph;
use crate::local_ec::{
    check_params, gap_for, run_engine, EngineOptions, LocalResult, LocalRun, RawFound,
};
use crate::oracle::{Answer, ArcRef, IncidenceOracle, SPLIT_TAG};
use crate::witness::{CutWitness, SeparationTriple};

/// Local vertex runs need `VC_PRECONDITION_FACTOR·k·ν < m·(gap+1)`.
pub const VC_PRECONDITION_FACTOR: u64 = 8320;

/// Split-graph id of `v_in`.
pub fn split_in(v: usize) -> usize {
    2 * v
}

/// Split-graph id of `v_out`; the seed keeps one id for both roles.
pub fn split_out(v: usize, x: usize) -> usize {
    if v == x {
        2 * v
    } else {
        2 * v + 1
    }
}

/// Base vertex of a split-graph id and whether the id is an out-copy.
pub fn split_origin(id: usize, x: usize) -> (usize, bool) {
    let v = id / 2;
    (v, id % 2 == 1 || v == x)
}

/// Oracle over the split graph of the base oracle with respect to `x`.
pub struct SplitGraphView<'a, O: IncidenceOracle> {
    base: &'a mut O,
    x: usize,
    edge_queries: u64,
    degree_queries: u64,
}

impl<'a, O: IncidenceOracle> SplitGraphView<'a, O> {
    pub fn new(base: &'a mut O, x: usize) -> Self {
        SplitGraphView {
            base,
            x,
            edge_queries: 0,
            degree_queries: 0,
        }
    }

    pub fn root(&self) -> usize {
        self.x
    }

    pub fn base(&self) -> &O {
        self.base
    }
}

impl<O: IncidenceOracle> IncidenceOracle for SplitGraphView<'_, O> {
    fn vertex_count(&self) -> usize {
        2 * self.base.vertex_count() - 1
    }

    fn arc_count(&self) -> Option<usize> {
        let n = self.base.vertex_count();
        self.base.arc_count().map(|m| m + n - 1)
    }

    fn degree(&mut self, id: usize) -> Result<usize, Error> {
        self.degree_queries += 1;
        match split_origin(id, self.x) {
            (v, true) => self.base.degree(v),
            (_, false) => Ok(1),
        }
    }

    fn query_edge(&mut self, id: usize, i: usize) -> Result<Answer, Error> {
        if i == 0 {
            return Err(Error::IndexOutOfRange { vertex: id, index: i });
        }
        self.edge_queries += 1;
        match split_origin(id, self.x) {
            (v, true) => Ok(match self.base.query_edge(v, i)? {
                Answer::Arc(a) => Answer::Arc(ArcRef {
                    id: a.id,
                    tail: id,
                    head: split_in(a.head),
                }),
                Answer::EndOfList => Answer::EndOfList,
            }),
            (v, false) if i == 1 => Ok(Answer::Arc(ArcRef {
                id: SPLIT_TAG | v as u64,
                tail: id,
                head: split_out(v, self.x),
            })),
            _ => Ok(Answer::EndOfList),
        }
    }

    fn edge_queries(&self) -> u64 {
        self.edge_queries
    }

    fn degree_queries(&self) -> u64 {
        self.degree_queries
    }
}

/// Out-arcs of a split-graph id, computed from the base graph. Used by
/// tests and offline tools.
pub fn split_out_arcs(g: &Graph, x: usize, id: usize) -> Vec<usize> {
    match split_origin(id, x) {
        (v, true) => g.out_neighbors(v).iter().map(|&w| split_in(w)).collect(),
        (v, false) => vec![split_out(v, x)],
    }
}

/// The split graph as an explicit graph on `2n` ids; id `2x + 1` is unused
/// and isolated.
pub fn materialize_split(g: &Graph, x: usize) -> Graph {
    let mut arcs = Vec::with_capacity(g.m() + g.n());
    for id in 0..2 * g.n() {
        if id == 2 * x + 1 {
            continue;
        }
        for head in split_out_arcs(g, x, id) {
            arcs.push((id, head));
        }
    }
    Graph::from_arcs(2 * g.n(), &arcs).expect("split ids in range")
}

/// Cut size and out-volume of a split-graph set.
pub fn split_cut_stats(g: &Graph, x: usize, set: &[usize]) -> (usize, usize) {
    let members: FxHashSet<usize> = set.iter().copied().collect();
    let mut cut = 0;
    let mut vol = 0;
    for &id in &members {
        for head in split_out_arcs(g, x, id) {
            vol += 1;
            if !members.contains(&head) {
                cut += 1;
            }
        }
    }
    (cut, vol)
}

/// Back-projection of a split-graph set `lp ∋ x` with all its out-arcs to
/// a separation triple of the base graph.
pub(crate) fn project_from_arcs(
    x: usize,
    n: usize,
    lp: &[usize],
    arcs: &[ArcRef],
) -> Result<SeparationTriple, Error> {
    let members: FxHashSet<usize> = lp.iter().copied().collect();
    if !members.contains(&split_in(x)) {
        return Err(Error::Param("projected set must contain the seed".into()));
    }
    let cut = arcs.iter().filter(|a| !members.contains(&a.head)).count();

    let mut out_degree: Vec<(usize, usize)> = Vec::new();
    {
        let mut tally: rustc_hash::FxHashMap<usize, usize> = Default::default();
        for a in arcs {
            *tally.entry(a.tail).or_default() += 1;
        }
        let mut ids: Vec<usize> = members.iter().copied().collect();
        ids.sort_unstable();
        for id in ids {
            if let (v, true) = split_origin(id, x) {
                out_degree.push((v, tally.get(&id).copied().unwrap_or(0)));
            }
        }
    }
    if let Some(&(v, _)) = out_degree.iter().find(|&&(_, d)| d <= cut) {
        let id = split_out(v, x);
        let mut sep: Vec<usize> = arcs
            .iter()
            .filter(|a| a.tail == id)
            .map(|a| a.head / 2)
            .filter(|&w| w != v)
            .collect();
        sep.sort_unstable();
        sep.dedup();
        let t = SeparationTriple::new(vec![v], sep, n);
        if t.right_len() == 0 {
            return Err(Error::ProjectionDegenerate);
        }
        return Ok(t);
    }

    // add v_in for every v_in reached by an out-copy arc leaving lp
    let mut grown = members.clone();
    for a in arcs {
        if !members.contains(&a.head) && split_origin(a.tail, x).1 {
            grown.insert(a.head);
        }
    }
    let mut left: Vec<usize> = grown
        .iter()
        .filter(|&&id| id % 2 == 0)
        .map(|&id| id / 2)
        .filter(|&v| grown.contains(&split_out(v, x)))
        .collect();
    left.sort_unstable();
    let left_set: FxHashSet<usize> = left.iter().copied().collect();
    let mut sep: Vec<usize> = arcs
        .iter()
        .filter(|a| split_origin(a.tail, x).1 && left_set.contains(&(a.tail / 2)))
        .map(|a| a.head / 2)
        .filter(|w| !left_set.contains(w))
        .collect();
    sep.sort_unstable();
    sep.dedup();
    let t = SeparationTriple::new(left, sep, n);
    if t.right_len() == 0 {
        return Err(Error::ProjectionDegenerate);
    }
    Ok(t)
}

/// Projects a split-graph set `lp ∋ x` to a separation triple `(L, S, R)`
/// with `|S|` at most the cut of `lp` and `vol(L) ≤ 2·vol'(lp)`. Reads the
/// out-lists of `lp` through the view.
pub fn project_cut<O: IncidenceOracle>(
    view: &mut SplitGraphView<'_, O>,
    lp: &[usize],
) -> Result<SeparationTriple, Error> {
    let mut arcs = Vec::new();
    let mut ids: Vec<usize> = lp.to_vec();
    ids.sort_unstable();
    ids.dedup();
    for &id in &ids {
        let d = view.degree(id)?;
        for i in 1..=d {
            if let Answer::Arc(a) = view.query_edge(id, i)? {
                arcs.push(a);
            }
        }
    }
    let n = view.base().vertex_count();
    project_from_arcs(view.root(), n, &ids, &arcs)
}

/// Lifts a triple `(L, S, R)` with `x ∈ L` and `S = N(L)` to the
/// split-graph set `{v_in, v_out : v ∈ L} ∪ {v_in : v ∈ S}`.
///
/// The lifted cut always equals `|S|` and the lifted volume is at least
/// `vol(L)`. When every vertex of `L` is reachable from `x` inside `L` the
/// lifted volume is also at most `2·vol(L)`; both facts are checked.
pub fn lift_triple(g: &Graph, x: usize, t: &SeparationTriple) -> Result<Vec<usize>, Error> {
    t.validate(g).map_err(Error::Param)?;
    let left: FxHashSet<usize> = t.left.iter().copied().collect();
    if !left.contains(&x) {
        return Err(Error::Param("seed is not on the left side".into()));
    }
    let neighbors = g.cut_stats(&t.left).n_out;
    if neighbors != t.separator {
        return Err(Error::Param("separator is not the out-neighborhood of the left side".into()));
    }
    let mut lifted: Vec<usize> = Vec::with_capacity(2 * t.left.len() + t.separator.len());
    for &v in &t.left {
        lifted.push(split_in(v));
        if v != x {
            lifted.push(split_out(v, x));
        }
    }
    lifted.extend(t.separator.iter().map(|&v| split_in(v)));
    lifted.sort_unstable();

    let (cut, vol) = split_cut_stats(g, x, &lifted);
    let base_vol: usize = t.left.iter().map(|&v| g.out_degree(v)).sum();
    if cut != t.separator.len() || vol < base_vol {
        return Err(Error::InvalidWitness(format!(
            "lift has cut {cut} and volume {vol} for |S| = {} and vol(L) = {base_vol}",
            t.separator.len()
        )));
    }
    if rooted_at(g, x, &left) && vol > 2 * base_vol {
        return Err(Error::InvalidWitness(format!(
            "lifted volume {vol} exceeds twice {base_vol}"
        )));
    }
    Ok(lifted)
}

/// Whether every vertex of `set` is reachable from `x` without leaving it.
pub fn rooted_at(g: &Graph, x: usize, set: &FxHashSet<usize>) -> bool {
    let mut seen = FxHashSet::default();
    let mut stack = vec![x];
    seen.insert(x);
    while let Some(u) = stack.pop() {
        for &w in g.out_neighbors(u) {
            if set.contains(&w) && seen.insert(w) {
                stack.push(w);
            }
        }
    }
    seen.len() == set.len()
}

fn finish_vertex_run(
    raw: crate::local_ec::RawRun,
    x: usize,
    n: usize,
    limit: usize,
    strict: bool,
) -> Result<LocalRun, Error> {
    let result = match &raw.found {
        None => LocalResult::Bottom,
        Some(RawFound { set, arcs }) => match project_from_arcs(x, n, set, arcs) {
            Ok(t) => {
                if t.separator.len() >= limit {
                    return Err(Error::InvalidWitness(format!(
                        "separator of size {} is not below {limit}",
                        t.separator.len()
                    )));
                }
                LocalResult::Found(CutWitness::VertexCut(t))
            }
            Err(Error::ProjectionDegenerate) if !strict => LocalResult::Bottom,
            Err(e) => return Err(e),
        },
    };
    Ok(LocalRun {
        result,
        marks: raw.marks,
        rounds: raw.rounds,
        stops: raw.stops,
    })
}

/// Looks for a separation triple `(L, S, R)` with `x ∈ L`, `|S| < k` and
/// `vol(L) ≤ ν` by running the local edge-cut engine with budget `2ν` on
/// the split graph.
///
/// A returned separator always has fewer than `k + gap` vertices; when the
/// target triple exists one is found with probability at least 3/4. Needs
/// `k < ν`, `gap ≤ k`, `4k < n` and, when `m` is known,
/// `8320·k·ν < m·(gap+1)`.
pub fn local_vc<O: IncidenceOracle>(
    oracle: &mut O,
    x: usize,
    nu: usize,
    k: usize,
    gap: usize,
    seed: u64,
) -> Result<LocalRun, Error> {
    check_params(oracle, x, nu, k, gap, true, VC_PRECONDITION_FACTOR)?;
    let n = oracle.vertex_count();
    if 4 * k >= n {
        return Err(Error::Param(format!("need 4k < n, got k = {k}, n = {n}")));
    }
    run_split(oracle, x, nu, k, gap, seed, true)
}

pub(crate) fn run_split<O: IncidenceOracle>(
    oracle: &mut O,
    x: usize,
    nu: usize,
    k: usize,
    gap: usize,
    seed: u64,
    strict: bool,
) -> Result<LocalRun, Error> {
    let n = oracle.vertex_count();
    if n < 2 {
        return Ok(LocalRun {
            result: LocalResult::Bottom,
            marks: 0,
            rounds: 0,
            stops: vec![],
        });
    }
    let mut view = SplitGraphView::new(oracle, x);
    let opts = EngineOptions { shortcut: false };
    let raw = run_engine(&mut view, split_in(x), 2 * nu, k, gap, seed, opts)?;
    finish_vertex_run(raw, x, n, k + gap, strict)
}

/// [`local_vc`] with `gap = 0`.
pub fn local_vc_exact<O: IncidenceOracle>(
    oracle: &mut O,
    x: usize,
    nu: usize,
    k: usize,
    seed: u64,
) -> Result<LocalRun, Error> {
    local_vc(oracle, x, nu, k, 0, seed)
}

/// [`local_vc`] with `gap = ⌊εk⌋`: separators have fewer than `⌊(1+ε)k⌋`
/// vertices.
pub fn local_vc_approx<O: IncidenceOracle>(
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
    local_vc(oracle, x, nu, k, gap_for(k, eps), seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::gen_clique;
    use crate::oracle::QueryOracle;

    #[test]
    fn view_counts() {
        let g = Graph::from_arcs(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap();
        let mut o = QueryOracle::unbounded(&g);
        let mut view = SplitGraphView::new(&mut o, 0);
        assert_eq!(view.vertex_count(), 7);
        assert_eq!(view.arc_count(), Some(8));
        assert_eq!(
            view.query_edge(split_in(2), 1).unwrap(),
            Answer::Arc(ArcRef { id: SPLIT_TAG | 2, tail: 4, head: 5 })
        );
        assert_eq!(view.degree(0).unwrap(), 2);
        let heads: Vec<usize> = (1..=2)
            .map(|i| match view.query_edge(0, i).unwrap() {
                Answer::Arc(a) => a.head,
                Answer::EndOfList => unreachable!(),
            })
            .collect();
        assert_eq!(heads, vec![split_in(1), split_in(2)]);
        assert_eq!(materialize_split(&g, 0).m(), 8);
    }

    #[test]
    fn singleton_lift() {
        let g = gen_clique(6, false);
        let t = SeparationTriple::new(vec![0], vec![], 6);
        assert!(lift_triple(&g, 0, &t).is_err());
        // star: 0 is the hub, leaves 1..5
        let star = Graph::from_edges(6, &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)]).unwrap();
        let t = SeparationTriple::new(vec![1], vec![0], 6);
        let lifted = lift_triple(&star, 1, &t).unwrap();
        assert_eq!(lifted, vec![split_in(0), split_in(1)]);
    }

    #[test]
    fn unrooted_left_side_breaks_the_doubling_bound() {
        // L = {x, a} with x -> s1, a -> s2 and nothing inside L
        let g = Graph::from_arcs(
            5,
            &[(0, 2), (1, 3), (2, 4), (3, 4), (4, 0), (4, 1), (2, 0), (3, 1)],
        )
        .unwrap();
        let t = SeparationTriple::new(vec![0, 1], vec![2, 3], 5);
        let lifted = lift_triple(&g, 0, &t).unwrap();
        let (cut, vol) = split_cut_stats(&g, 0, &lifted);
        assert_eq!(cut, 2);
        assert_eq!(vol, 5);
    }

    #[test]
    fn round_trip_on_glued_cliques() {
        let g = crate::generators::gen_glued_cliques(5, 5, 2).unwrap();
        // cliques {0..5} and {3..8}: shared {3, 4}
        let t = SeparationTriple::new(vec![0, 1, 2], vec![3, 4], 8);
        let lifted = lift_triple(&g, 0, &t).unwrap();
        let arcs: Vec<ArcRef> = lifted
            .iter()
            .flat_map(|&id| {
                split_out_arcs(&g, 0, id)
                    .into_iter()
                    .enumerate()
                    .map(move |(i, head)| ArcRef { id: (id * 100 + i) as u64, tail: id, head })
            })
            .collect();
        let back = project_from_arcs(0, 8, &lifted, &arcs).unwrap();
        assert!(back.separator.len() <= 2);
        assert!(back.validate(&g).is_ok());
    }

    #[test]
    fn clique_has_no_local_vertex_cut() {
        let g = gen_clique(400, true);
        for seed in 0..5 {
            let run = local_vc_exact(&mut QueryOracle::unbounded(&g), 7, 4, 3, seed).unwrap();
            assert_eq!(run.result, LocalResult::Bottom);
        }
    }
}
