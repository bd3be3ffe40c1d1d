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

//! Seeded instance generators.
//!
//! Generators with a planted structure return [`GenMeta`] alongside the
//! graph; it serializes to the JSON sidecar written next to edge lists.

use rand::seq::SliceRandom;
use rand::Rng;
use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};

use crate::error::GraphError;
use crate::graph::Graph;

/// The structure a generator planted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Planted {
    EdgeCut { set: Vec<usize>, size: usize },
    VertexCut {
        left: Vec<usize>,
        separator: Vec<usize>,
        right: Vec<usize>,
    },
}

/// Generator metadata: name, parameters, seed and planted witness.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenMeta {
    pub generator: String,
    pub params: serde_json::Value,
    pub seed: Option<u64>,
    pub directed: bool,
    pub n: usize,
    pub m: usize,
    pub planted: Option<Planted>,
}

impl GenMeta {
    pub fn new(generator: &str, params: serde_json::Value, g: &Graph) -> Self {
        GenMeta {
            generator: generator.to_string(),
            params,
            seed: None,
            directed: g.is_directed(),
            n: g.n(),
            m: g.m(),
            planted: None,
        }
    }
}

fn infeasible(msg: impl Into<String>) -> GraphError {
    GraphError::Construction(msg.into())
}

/// Directed cycle `0 -> 1 -> … -> n-1 -> 0`.
pub fn gen_cycle(n: usize) -> Graph {
    let arcs: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::from_arcs(n, &arcs).expect("ids in range")
}

/// Undirected cycle on `n ≥ 3` vertices.
pub fn gen_cycle_undirected(n: usize) -> Graph {
    let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::from_edges(n, &edges).expect("ids in range")
}

/// Complete graph; directed means every ordered pair is an arc.
pub fn gen_clique(n: usize, directed: bool) -> Graph {
    if directed {
        let arcs: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
            .collect();
        Graph::from_arcs(n, &arcs).expect("ids in range")
    } else {
        let edges: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        Graph::from_edges(n, &edges).expect("ids in range")
    }
}

/// Undirected hypercube of dimension `dim`; `dim`-regular and
/// `dim`-connected.
pub fn gen_hypercube(dim: u32) -> Graph {
    let n = 1usize << dim;
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (0..dim).map(move |b| (u, u ^ (1 << b))))
        .filter(|&(u, v)| u < v)
        .collect();
    Graph::from_edges(n, &edges).expect("ids in range")
}

/// Circulant graph: `i ~ i + o (mod n)` for every offset. Directed mode adds
/// only the forward arcs.
pub fn gen_circulant(n: usize, offsets: &[usize], directed: bool) -> Result<Graph, GraphError> {
    if offsets.iter().any(|&o| o == 0 || 2 * o > n || (!directed && 2 * o == n)) {
        return Err(infeasible("circulant offsets must lie in 1..n/2"));
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| offsets.iter().map(move |&o| (i, (i + o) % n)))
        .collect();
    if directed {
        Graph::from_arcs(n, &pairs)
    } else {
        Graph::from_edges(n, &pairs)
    }
}

/// `t` disjoint cycles of length `len`.
pub fn gen_union_of_cycles(t: usize, len: usize, directed: bool) -> Result<Graph, GraphError> {
    if len < 2 || (!directed && len < 3) {
        return Err(infeasible("cycle length too small"));
    }
    let pairs: Vec<(usize, usize)> = (0..t)
        .flat_map(|c| (0..len).map(move |i| (c * len + i, c * len + (i + 1) % len)))
        .collect();
    if directed {
        Graph::from_arcs(t * len, &pairs)
    } else {
        Graph::from_edges(t * len, &pairs)
    }
}

/// Two undirected cliques of sizes `a` and `b` sharing `shared` vertices.
/// The shared vertices form the only minimum vertex cut when both cliques
/// have private vertices.
pub fn gen_glued_cliques(a: usize, b: usize, shared: usize) -> Result<Graph, GraphError> {
    if shared > a.min(b) {
        return Err(infeasible("cannot share more vertices than a clique has"));
    }
    // clique A = 0..a, clique B = a-shared .. a-shared+b
    let n = a + b - shared;
    let mut edges = FxHashSet::default();
    for u in 0..a {
        for v in u + 1..a {
            edges.insert((u, v));
        }
    }
    let start = a - shared;
    for u in start..n {
        for v in u + 1..n {
            edges.insert((u, v));
        }
    }
    let mut edges: Vec<(usize, usize)> = edges.into_iter().collect();
    edges.sort_unstable();
    Graph::from_edges(n, &edges)
}

/// Erdős–Rényi graph: every pair (ordered pair when directed) independently
/// with probability `p`.
pub fn gen_gnp<R: Rng + ?Sized>(n: usize, p: f64, directed: bool, rng: &mut R) -> Graph {
    let mut pairs = Vec::new();
    for u in 0..n {
        let range = if directed { 0 } else { u + 1 };
        for v in range..n {
            if u != v && rng.gen_bool(p) {
                pairs.push((u, v));
            }
        }
    }
    if directed {
        Graph::from_arcs(n, &pairs).expect("ids in range")
    } else {
        Graph::from_edges(n, &pairs).expect("ids in range")
    }
}

/// Simple undirected `d`-regular graph by random pairing with restarts.
pub fn gen_random_regular<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> Result<Graph, GraphError> {
    if d >= n || (n * d) % 2 == 1 {
        return Err(infeasible(format!("no simple {d}-regular graph on {n} vertices")));
    }
    'attempt: for _ in 0..1000 {
        let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
        let mut seen: FxHashSet<(usize, usize)> = FxHashSet::default();
        let mut edges = Vec::with_capacity(n * d / 2);
        while !stubs.is_empty() {
            let mut placed = false;
            for _ in 0..100 {
                let i = rng.gen_range(0..stubs.len());
                let j = rng.gen_range(0..stubs.len());
                let (u, v) = (stubs[i], stubs[j]);
                if i == j || u == v || seen.contains(&(u.min(v), u.max(v))) {
                    continue;
                }
                seen.insert((u.min(v), u.max(v)));
                edges.push((u, v));
                let (hi, lo) = (i.max(j), i.min(j));
                stubs.swap_remove(hi);
                stubs.swap_remove(lo);
                placed = true;
                break;
            }
            if !placed {
                continue 'attempt;
            }
        }
        return Graph::from_edges(n, &edges);
    }
    Err(infeasible("random pairing kept failing"))
}

/// `t ≥ 3` undirected cliques of size `s ≥ 2` in a ring, consecutive cliques
/// joined by a single edge. Every clique is a set with exactly two crossing
/// edges; maximum degree is `s`.
pub fn gen_ring_of_cliques(t: usize, s: usize) -> Result<Graph, GraphError> {
    if t < 3 || s < 2 {
        return Err(infeasible("need at least 3 cliques of size 2"));
    }
    let mut edges = Vec::new();
    for c in 0..t {
        let base = c * s;
        for u in 0..s {
            for v in u + 1..s {
                edges.push((base + u, base + v));
            }
        }
        // vertex 0 of clique c to vertex 1 of clique c+1
        edges.push((base, ((c + 1) % t) * s + 1));
    }
    Graph::from_edges(t * s, &edges)
}

fn random_permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

fn relabel(list: &[usize], perm: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = list.iter().map(|&v| perm[v]).collect();
    out.sort_unstable();
    out
}

/// Two directed cliques `A` (size `a`) and `B` (size `b`) with `c` random
/// arcs from `A` to `B` and `c` from `B` to `A`. When both cliques have more
/// than `c` vertices the minimum edge cut is `c`, realized by `A`.
pub fn gen_planted_edge_cut<R: Rng + ?Sized>(
    a: usize,
    b: usize,
    c: usize,
    rng: &mut R,
) -> Result<(Graph, GenMeta), GraphError> {
    if a < 2 || b < 2 || c > a * b {
        return Err(infeasible("sides need 2 vertices and room for c seam arcs"));
    }
    let n = a + b;
    let mut arcs = Vec::new();
    for (lo, hi) in [(0, a), (a, n)] {
        for u in lo..hi {
            for v in lo..hi {
                if u != v {
                    arcs.push((u, v));
                }
            }
        }
    }
    let pick = |rng: &mut R, from: (usize, usize), to: (usize, usize)| {
        let mut chosen = FxHashSet::default();
        while chosen.len() < c {
            chosen.insert((rng.gen_range(from.0..from.1), rng.gen_range(to.0..to.1)));
        }
        let mut chosen: Vec<_> = chosen.into_iter().collect();
        chosen.sort_unstable();
        chosen
    };
    arcs.extend(pick(rng, (0, a), (a, n)));
    arcs.extend(pick(rng, (a, n), (0, a)));
    let g = Graph::from_arcs(n, &arcs)?;
    let mut meta = GenMeta::new(
        "planted_edge_cut",
        serde_json::json!({ "a": a, "b": b, "c": c }),
        &g,
    );
    meta.planted = Some(Planted::EdgeCut {
        set: (0..a).collect(),
        size: c,
    });
    Ok((g, meta))
}

/// A directed clique on `0..a` hanging off a directed circulant on the
/// remaining `base` vertices (offsets `1..=h`). The clique has `c` random
/// arcs into the circulant and receives `a` arcs back, so `0..a` is a set of
/// volume `a(a−1) + c` with exactly `c` crossing arcs.
pub fn gen_planted_local_cut<R: Rng + ?Sized>(
    a: usize,
    c: usize,
    base: usize,
    h: usize,
    rng: &mut R,
) -> Result<(Graph, GenMeta), GraphError> {
    if a < 2 || h == 0 || 2 * h > base || c > a * base {
        return Err(infeasible("need a ≥ 2, 1 ≤ h ≤ base/2 and room for c arcs"));
    }
    let n = a + base;
    let mut arcs = Vec::new();
    for u in 0..a {
        for v in 0..a {
            if u != v {
                arcs.push((u, v));
            }
        }
    }
    for i in 0..base {
        for o in 1..=h {
            arcs.push((a + i, a + (i + o) % base));
        }
    }
    let mut exits = FxHashSet::default();
    while exits.len() < c {
        exits.insert((rng.gen_range(0..a), rng.gen_range(a..n)));
    }
    let mut exits: Vec<_> = exits.into_iter().collect();
    exits.sort_unstable();
    arcs.extend(exits);
    for v in 0..a {
        arcs.push((rng.gen_range(a..n), v));
    }
    let g = Graph::from_arcs(n, &arcs)?;
    let mut meta = GenMeta::new(
        "planted_local_cut",
        serde_json::json!({ "a": a, "c": c, "base": base, "h": h }),
        &g,
    );
    meta.planted = Some(Planted::EdgeCut {
        set: (0..a).collect(),
        size: c,
    });
    Ok((g, meta))
}

/// Dense side of a planted vertex-cut instance: a circulant with offsets
/// `1..=h`, or a clique when the side is too small for it.
fn side_pairs(base: usize, size: usize, h: usize) -> Vec<(usize, usize)> {
    let mut pairs = FxHashSet::default();
    if size <= 2 * h + 1 {
        for u in 0..size {
            for v in u + 1..size {
                pairs.insert((base + u, base + v));
            }
        }
    } else {
        for u in 0..size {
            for o in 1..=h {
                let v = (u + o) % size;
                pairs.insert((base + u.min(v), base + u.max(v)));
            }
        }
    }
    let mut pairs: Vec<_> = pairs.into_iter().collect();
    pairs.sort_unstable();
    pairs
}

/// Vertex count, side and separator edges, and the separator attachments.
type Layout = (usize, Vec<(usize, usize)>, Vec<(usize, usize)>);

fn planted_vertex_layout<R: Rng + ?Sized>(
    a: usize,
    b: usize,
    s: usize,
    rng: &mut R,
) -> Result<Layout, GraphError> {
    if s == 0 || a <= s || b <= s {
        return Err(infeasible("need 1 ≤ s < min(a, b)"));
    }
    let h = 4usize.max((s + 1).div_ceil(2));
    let n = a + b + s;
    // A = 0..a, B = a..a+b, separator = a+b..n
    let mut inner = side_pairs(0, a, h);
    inner.extend(side_pairs(a, b, h));
    let sep_start = a + b;
    for u in sep_start..n {
        for v in u + 1..n {
            inner.push((u, v));
        }
    }
    // separator-to-side attachments, each separator vertex reaching s+1
    // distinct vertices on both sides
    let mut attach = Vec::new();
    for z in sep_start..n {
        for (lo, size) in [(0, a), (a, b)] {
            let reach = (s + 1).min(size);
            let mut chosen: Vec<usize> = (lo..lo + size).collect();
            chosen.shuffle(rng);
            for &v in &chosen[..reach] {
                attach.push((z, v));
            }
        }
    }
    Ok((n, inner, attach))
}

/// Undirected instance with vertex connectivity `s`: two dense sides joined
/// only through an `s`-vertex separator clique. Vertex labels are shuffled;
/// the planted triple is in the metadata. With sides of a few hundred
/// vertices or more, `m ≈ 8n` arcs.
pub fn gen_planted_vertex_cut<R: Rng + ?Sized>(
    a: usize,
    b: usize,
    s: usize,
    rng: &mut R,
) -> Result<(Graph, GenMeta), GraphError> {
    let (n, mut edges, attach) = planted_vertex_layout(a, b, s, rng)?;
    edges.extend(attach);
    let perm = random_permutation(n, rng);
    let edges: Vec<(usize, usize)> = edges.iter().map(|&(u, v)| (perm[u], perm[v])).collect();
    let g = Graph::from_edges(n, &edges)?;
    let mut meta = GenMeta::new(
        "planted_vertex_cut",
        serde_json::json!({ "a": a, "b": b, "s": s }),
        &g,
    );
    meta.planted = Some(Planted::VertexCut {
        left: relabel(&(0..a).collect::<Vec<_>>(), &perm),
        separator: relabel(&(a + b..n).collect::<Vec<_>>(), &perm),
        right: relabel(&(a..a + b).collect::<Vec<_>>(), &perm),
    });
    Ok((g, meta))
}

/// Directed counterpart of [`gen_planted_vertex_cut`]: sides and separator
/// are symmetric, and `s` extra arcs run from the right side to the left
/// side, so `(A, Sep, B)` is a separation triple while `B` reaches `A`
/// directly.
pub fn gen_planted_vertex_cut_directed<R: Rng + ?Sized>(
    a: usize,
    b: usize,
    s: usize,
    rng: &mut R,
) -> Result<(Graph, GenMeta), GraphError> {
    let (n, edges, attach) = planted_vertex_layout(a, b, s, rng)?;
    let mut arcs: Vec<(usize, usize)> = Vec::new();
    for (u, v) in edges.into_iter().chain(attach) {
        arcs.push((u, v));
        arcs.push((v, u));
    }
    for _ in 0..s {
        arcs.push((rng.gen_range(a..a + b), rng.gen_range(0..a)));
    }
    let perm = random_permutation(n, rng);
    let arcs: Vec<(usize, usize)> = arcs.iter().map(|&(u, v)| (perm[u], perm[v])).collect();
    let g = Graph::from_arcs(n, &arcs)?;
    let mut meta = GenMeta::new(
        "planted_vertex_cut_directed",
        serde_json::json!({ "a": a, "b": b, "s": s }),
        &g,
    );
    meta.planted = Some(Planted::VertexCut {
        left: relabel(&(0..a).collect::<Vec<_>>(), &perm),
        separator: relabel(&(a + b..n).collect::<Vec<_>>(), &perm),
        right: relabel(&(a..a + b).collect::<Vec<_>>(), &perm),
    });
    Ok((g, meta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    #[test]
    fn local_cut_cluster() {
        let (g, meta) = gen_planted_local_cut(6, 2, 100, 3, &mut seeded(1)).unwrap();
        let set: Vec<usize> = (0..6).collect();
        let st = g.cut_stats(&set);
        assert_eq!((st.cut_size, st.vol_out), (2, 32));
        assert_eq!(g.m(), 30 + 300 + 2 + 6);
        assert!(meta.planted.is_some());
    }

    #[test]
    fn union_of_triangles() {
        let g = gen_union_of_cycles(100, 3, true).unwrap();
        assert_eq!(g.n(), 300);
        assert_eq!(g.m(), 300);
        for c in 0..100 {
            let set: Vec<usize> = (3 * c..3 * c + 3).collect();
            assert_eq!(g.cut_stats(&set).cut_size, 0);
        }
    }

    #[test]
    fn hypercube_shape() {
        let g = gen_hypercube(4);
        assert_eq!(g.n(), 16);
        assert_eq!(g.m(), 64);
        assert!((0..16).all(|v| g.out_degree(v) == 4));
    }

    #[test]
    fn regular_is_simple_and_regular() {
        let g = gen_random_regular(50, 4, &mut seeded(2)).unwrap();
        for v in 0..50 {
            assert_eq!(g.out_degree(v), 4);
            assert_eq!(g.distinct_out_neighbors(v).len(), 4);
        }
        assert!(gen_random_regular(5, 5, &mut seeded(2)).is_err());
    }

    #[test]
    fn seeded_generators_repeat() {
        let (g1, m1) = gen_planted_vertex_cut(30, 40, 3, &mut seeded(11)).unwrap();
        let (g2, m2) = gen_planted_vertex_cut(30, 40, 3, &mut seeded(11)).unwrap();
        assert_eq!(g1, g2);
        assert_eq!(m1, m2);
    }

    #[test]
    fn planted_edge_cut_seam() {
        let (g, meta) = gen_planted_edge_cut(6, 6, 2, &mut seeded(4)).unwrap();
        let Some(Planted::EdgeCut { set, size }) = meta.planted else {
            panic!()
        };
        let st = g.cut_stats(&set);
        assert_eq!(st.cut_size, size);
        assert_eq!(st.vol_out, 32);
    }

    #[test]
    fn ring_of_cliques_cuts() {
        let g = gen_ring_of_cliques(5, 4).unwrap();
        assert_eq!(g.cut_stats(&[0, 1, 2, 3]).cut_size, 2);
        assert!(g.max_out_degree() <= 4);
    }
}
