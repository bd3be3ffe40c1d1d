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

//! Exact reference answers for small graphs.
//!
//! Everything here is deliberately simple and slow: plain augmenting-path
//! max-flow over an explicit residual network, and exhaustive enumeration of
//! vertex sets. Two augmenting orders are available so the oracles can be
//! checked against each other.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::graph::Graph;
use crate::witness::{CutWitness, SeparationTriple};

/// Size limits; inputs beyond them are refused rather than truncated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleLimits {
    /// Largest `n` for which local witnesses are enumerated without a budget.
    pub max_n: usize,
    /// Largest `n·m` accepted by the flow-based oracles.
    pub max_nm: u64,
    /// Sets visited by local enumeration on larger graphs before giving up.
    pub node_budget: u64,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            max_n: 18,
            max_nm: 1_000_000,
            node_budget: 2_000_000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AugmentOrder {
    Bfs,
    Dfs,
}

/// Minimum edge cut: its size and a source side realizing it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeCutAnswer {
    pub value: usize,
    pub set: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VertexCutAnswer {
    Cut { kappa: usize, triple: SeparationTriple },
    /// Every pair is adjacent; `κ = n − 1` by convention.
    Complete { kappa: usize },
}

impl VertexCutAnswer {
    pub fn kappa(&self) -> usize {
        match self {
            VertexCutAnswer::Cut { kappa, .. } | VertexCutAnswer::Complete { kappa } => *kappa,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LocalAnswer {
    /// Best set containing the seed: smallest cut, then smallest volume.
    Found {
        cut_size: usize,
        vol: usize,
        set: Vec<usize>,
    },
    /// No set within the volume cap has cut below `kmax`.
    None,
    /// Enumeration budget ran out.
    Unknown,
}

struct Residual {
    head: Vec<usize>,
    cap: Vec<i64>,
    adj: Vec<Vec<usize>>,
}

impl Residual {
    fn new(nodes: usize) -> Self {
        Residual {
            head: Vec::new(),
            cap: Vec::new(),
            adj: vec![Vec::new(); nodes],
        }
    }

    fn add(&mut self, u: usize, v: usize, c: i64) {
        self.adj[u].push(self.head.len());
        self.head.push(v);
        self.cap.push(c);
        self.adj[v].push(self.head.len());
        self.head.push(u);
        self.cap.push(0);
    }

    fn path(&self, s: usize, t: usize, order: AugmentOrder) -> Option<Vec<usize>> {
        let mut via = vec![usize::MAX; self.adj.len()];
        let mut seen = vec![false; self.adj.len()];
        let mut frontier = std::collections::VecDeque::from([s]);
        seen[s] = true;
        while let Some(u) = match order {
            AugmentOrder::Bfs => frontier.pop_front(),
            AugmentOrder::Dfs => frontier.pop_back(),
        } {
            if u == t {
                let mut arcs = Vec::new();
                let mut v = t;
                while v != s {
                    arcs.push(via[v]);
                    v = self.head[via[v] ^ 1];
                }
                return Some(arcs);
            }
            for &e in &self.adj[u] {
                let w = self.head[e];
                if self.cap[e] > 0 && !seen[w] {
                    seen[w] = true;
                    via[w] = e;
                    frontier.push_back(w);
                }
            }
        }
        None
    }

    /// Max-flow value and the residual-reachable side of `s`.
    fn max_flow(&mut self, s: usize, t: usize, order: AugmentOrder) -> (usize, Vec<bool>) {
        let mut value = 0;
        while let Some(arcs) = self.path(s, t, order) {
            let push = arcs.iter().map(|&e| self.cap[e]).min().unwrap_or(0);
            for e in arcs {
                self.cap[e] -= push;
                self.cap[e ^ 1] += push;
            }
            value += push as usize;
        }
        let mut seen = vec![false; self.adj.len()];
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(u) = stack.pop() {
            for &e in &self.adj[u] {
                if self.cap[e] > 0 && !seen[self.head[e]] {
                    seen[self.head[e]] = true;
                    stack.push(self.head[e]);
                }
            }
        }
        (value, seen)
    }
}

fn check_size(g: &Graph, limits: &OracleLimits) -> Result<(), Error> {
    let nm = g.n() as u64 * g.m().max(1) as u64;
    if nm > limits.max_nm {
        return Err(Error::LimitExceeded(format!(
            "n·m = {nm} exceeds {}",
            limits.max_nm
        )));
    }
    if g.n() < 2 {
        return Err(Error::Param("need at least two vertices".into()));
    }
    Ok(())
}

fn edge_network(g: &Graph) -> Residual {
    let mut r = Residual::new(g.n());
    for (u, v) in g.arcs() {
        if u != v {
            r.add(u, v, 1);
        }
    }
    r
}

/// Minimum edge cut `min_{S ≠ ∅, V} |E(S, V∖S)|` with unit arc capacities,
/// via flows from and to vertex 0.
pub fn bf_min_edge_cut(g: &Graph, limits: &OracleLimits) -> Result<EdgeCutAnswer, Error> {
    bf_min_edge_cut_with(g, limits, AugmentOrder::Bfs)
}

pub fn bf_min_edge_cut_with(
    g: &Graph,
    limits: &OracleLimits,
    order: AugmentOrder,
) -> Result<EdgeCutAnswer, Error> {
    check_size(g, limits)?;
    let mut best: Option<EdgeCutAnswer> = None;
    for t in 1..g.n() {
        for (a, b) in [(0, t), (t, 0)] {
            let (value, side) = edge_network(g).max_flow(a, b, order);
            if best.as_ref().is_none_or(|bst| value < bst.value) {
                let set = (0..g.n()).filter(|&v| side[v]).collect();
                best = Some(EdgeCutAnswer { value, set });
            }
        }
    }
    Ok(best.expect("n ≥ 2 yields a pair"))
}

/// Vertex connectivity: minimum over non-adjacent ordered pairs of the
/// unit vertex-capacity flow, or `Complete` when no such pair exists.
pub fn bf_min_vertex_cut(g: &Graph, limits: &OracleLimits) -> Result<VertexCutAnswer, Error> {
    bf_min_vertex_cut_with(g, limits, AugmentOrder::Bfs)
}

pub fn bf_min_vertex_cut_with(
    g: &Graph,
    limits: &OracleLimits,
    order: AugmentOrder,
) -> Result<VertexCutAnswer, Error> {
    check_size(g, limits)?;
    let n = g.n();
    let mut adjacent = vec![false; n * n];
    for (u, v) in g.arcs() {
        adjacent[u * n + v] = true;
    }
    let big = n as i64 + 1;
    let mut best: Option<(usize, SeparationTriple)> = None;
    for s in 0..n {
        for t in 0..n {
            if s == t || adjacent[s * n + t] {
                continue;
            }
            if !g.is_directed() && t < s {
                continue;
            }
            let mut r = Residual::new(2 * n);
            for v in 0..n {
                r.add(2 * v, 2 * v + 1, 1);
            }
            for (u, v) in g.arcs() {
                if u != v {
                    r.add(2 * u + 1, 2 * v, big);
                }
            }
            let (value, side) = r.max_flow(2 * s + 1, 2 * t, order);
            if best.as_ref().is_none_or(|(b, _)| value < *b) {
                let left = (0..n).filter(|&v| side[2 * v + 1]).collect();
                let sep = (0..n).filter(|&v| side[2 * v] && !side[2 * v + 1]).collect();
                best = Some((value, SeparationTriple::new(left, sep, n)));
            }
        }
    }
    Ok(match best {
        Some((kappa, triple)) => VertexCutAnswer::Cut { kappa, triple },
        None => VertexCutAnswer::Complete { kappa: n - 1 },
    })
}

struct Enumeration<'g> {
    g: &'g Graph,
    nu: usize,
    kmax: usize,
    budget: u64,
    visited: u64,
    best: Option<(usize, usize, Vec<usize>)>,
    member: Vec<bool>,
    set: Vec<usize>,
}

impl Enumeration<'_> {
    fn consider(&mut self, vol: usize) {
        if self.set.len() == self.g.n() {
            return;
        }
        let cut = self
            .set
            .iter()
            .flat_map(|&u| self.g.out_neighbors(u))
            .filter(|&&w| !self.member[w])
            .count();
        if cut >= self.kmax {
            return;
        }
        let better = self
            .best
            .as_ref()
            .is_none_or(|&(c, v, _)| (cut, vol) < (c, v));
        if better {
            let mut s = self.set.clone();
            s.sort_unstable();
            self.best = Some((cut, vol, s));
        }
    }

    /// Reports every set reachable from the seed inside itself exactly once:
    /// grow by one candidate at a time, then forbid it for later siblings.
    fn grow(&mut self, vol: usize, cand: &[usize], forbidden: &mut Vec<bool>) -> bool {
        self.visited += 1;
        if self.visited > self.budget {
            return false;
        }
        self.consider(vol);
        let mut banned = Vec::new();
        for (i, &v) in cand.iter().enumerate() {
            let new_vol = vol + self.g.out_degree(v);
            if new_vol <= self.nu {
                let mut next: Vec<usize> = cand[i + 1..].to_vec();
                for &w in self.g.out_neighbors(v) {
                    if !self.member[w] && !forbidden[w] && w != v && !next.contains(&w) && !cand[..i].contains(&w) {
                        next.push(w);
                    }
                }
                self.member[v] = true;
                self.set.push(v);
                let ok = self.grow(new_vol, &next, forbidden);
                self.set.pop();
                self.member[v] = false;
                if !ok {
                    return false;
                }
            }
            forbidden[v] = true;
            banned.push(v);
        }
        for v in banned {
            forbidden[v] = false;
        }
        true
    }
}

/// Smallest cut `|E(S, V∖S)| < kmax` over sets `S ∋ x`, `S ≠ V`, with
/// `vol(S) ≤ nu`; ties go to the smaller volume. Only sets whose vertices
/// are all reachable from `x` inside `S` are enumerated, which loses
/// nothing: dropping the unreachable part lowers neither quantity.
pub fn bf_local_witness(
    g: &Graph,
    x: usize,
    nu: usize,
    kmax: usize,
    limits: &OracleLimits,
) -> Result<LocalAnswer, Error> {
    if x >= g.n() {
        return Err(Error::Param(format!("seed {x} out of range")));
    }
    let budget = if g.n() <= limits.max_n {
        u64::MAX
    } else {
        limits.node_budget
    };
    let vol = g.out_degree(x);
    if vol > nu {
        return Ok(LocalAnswer::None);
    }
    let mut e = Enumeration {
        g,
        nu,
        kmax,
        budget,
        visited: 0,
        best: None,
        member: vec![false; g.n()],
        set: vec![x],
    };
    e.member[x] = true;
    let mut cand: Vec<usize> = Vec::new();
    for &w in g.out_neighbors(x) {
        if w != x && !cand.contains(&w) {
            cand.push(w);
        }
    }
    let mut forbidden = vec![false; g.n()];
    if !e.grow(vol, &cand, &mut forbidden) {
        return Ok(LocalAnswer::Unknown);
    }
    Ok(match e.best {
        Some((cut_size, vol, set)) => LocalAnswer::Found { cut_size, vol, set },
        None => LocalAnswer::None,
    })
}

/// Recomputes a witness from scratch on `g`.
pub fn validate_witness(g: &Graph, w: &CutWitness) -> bool {
    w.validate(g).is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_clique, gen_cycle, gen_glued_cliques, gen_planted_edge_cut};
    use crate::rng::seeded;

    const L: OracleLimits = OracleLimits {
        max_n: 18,
        max_nm: 1_000_000,
        node_budget: 2_000_000,
    };

    #[test]
    fn edge_cut_values() {
        assert_eq!(bf_min_edge_cut(&gen_cycle(7), &L).unwrap().value, 1);
        assert_eq!(bf_min_edge_cut(&gen_clique(5, true), &L).unwrap().value, 4);
        let (g, _) = gen_planted_edge_cut(8, 9, 3, &mut seeded(2)).unwrap();
        let a = bf_min_edge_cut(&g, &L).unwrap();
        assert_eq!(a.value, 3);
        assert_eq!(g.cut_stats(&a.set).cut_size, 3);
    }

    #[test]
    fn vertex_cut_values() {
        let k5 = gen_clique(5, false);
        assert_eq!(bf_min_vertex_cut(&k5, &L).unwrap(), VertexCutAnswer::Complete { kappa: 4 });
        let glued = gen_glued_cliques(5, 5, 2).unwrap();
        match bf_min_vertex_cut(&glued, &L).unwrap() {
            VertexCutAnswer::Cut { kappa, triple } => {
                assert_eq!(kappa, 2);
                assert!(triple.validate(&glued).is_ok());
            }
            other => panic!("{other:?}"),
        }
        let star = Graph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        assert_eq!(bf_min_vertex_cut(&star, &L).unwrap().kappa(), 1);
    }

    #[test]
    fn orders_agree() {
        let g = gen_glued_cliques(6, 5, 3).unwrap();
        let a = bf_min_vertex_cut_with(&g, &L, AugmentOrder::Bfs).unwrap();
        let b = bf_min_vertex_cut_with(&g, &L, AugmentOrder::Dfs).unwrap();
        assert_eq!(a.kappa(), b.kappa());
    }

    #[test]
    fn local_witness_examples() {
        match bf_local_witness(&gen_cycle(20), 3, 10, usize::MAX, &L).unwrap() {
            LocalAnswer::Found { cut_size, .. } => assert_eq!(cut_size, 1),
            other => panic!("{other:?}"),
        }
        match bf_local_witness(&gen_clique(6, false), 0, 5, usize::MAX, &L).unwrap() {
            LocalAnswer::Found { cut_size, vol, set } => {
                assert_eq!((cut_size, vol, set), (5, 5, vec![0]));
            }
            other => panic!("{other:?}"),
        }
        let (g, meta) = gen_planted_edge_cut(6, 6, 2, &mut seeded(4)).unwrap();
        let Some(crate::generators::Planted::EdgeCut { set, .. }) = meta.planted else {
            panic!()
        };
        match bf_local_witness(&g, 0, 32, usize::MAX, &L).unwrap() {
            LocalAnswer::Found { cut_size, set: s, .. } => {
                assert_eq!(cut_size, 2);
                assert_eq!(s, set);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn local_witness_budget() {
        let tight = OracleLimits {
            max_n: 4,
            node_budget: 10,
            ..L
        };
        let g = gen_clique(12, false);
        assert_eq!(bf_local_witness(&g, 0, 1000, usize::MAX, &tight).unwrap(), LocalAnswer::Unknown);
    }

    #[test]
    fn tampered_witness_rejected() {
        let g = gen_glued_cliques(5, 5, 2).unwrap();
        let good = SeparationTriple::new(vec![0, 1, 2], vec![3, 4], 8);
        assert!(validate_witness(&g, &CutWitness::VertexCut(good)));
        let bad = SeparationTriple::new(vec![0, 1, 2, 5], vec![3, 4], 8);
        assert!(!validate_witness(&g, &CutWitness::VertexCut(bad)));
        assert!(!validate_witness(&g, &CutWitness::edge_cut(&g, vec![])));
    }

    #[test]
    fn limits_refused() {
        let tiny = OracleLimits { max_nm: 10, ..L };
        assert!(matches!(
            bf_min_edge_cut(&gen_clique(6, false), &tiny),
            Err(Error::LimitExceeded(_))
        ));
    }
}
