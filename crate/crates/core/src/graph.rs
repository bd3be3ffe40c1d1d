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

//! Immutable directed multigraphs in CSR form.
//!
//! Undirected graphs are stored as symmetric arc pairs; every arc keeps a
//! stable integer id (its position in the global arc array) and, for
//! undirected graphs, a pointer to its twin.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::GraphError;

/// A directed multigraph with `n` vertices and ordered out-lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    directed: bool,
    offsets: Vec<usize>,
    heads: Vec<usize>,
    tails: Vec<usize>,
    mates: Option<Vec<usize>>,
}

/// Result of [`Graph::cut_stats`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutStats {
    /// `|E(S, V-S)|`.
    pub cut_size: usize,
    /// Sum of out-degrees over `S`.
    pub vol_out: usize,
    /// Heads of crossing arcs, sorted and deduplicated.
    pub n_out: Vec<usize>,
}

impl Graph {
    /// Builds a directed graph. Out-lists keep the input order of the arcs.
    pub fn from_arcs(n: usize, arcs: &[(usize, usize)]) -> Result<Self, GraphError> {
        Self::build(n, arcs, true, None)
    }

    /// Builds an undirected graph; each edge `{u, v}` becomes arcs `u->v`
    /// and `v->u`.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut arcs = Vec::with_capacity(edges.len() * 2);
        for &(u, v) in edges {
            arcs.push((u, v));
            arcs.push((v, u));
        }
        // arc 2e and 2e+1 are twins before the stable grouping by tail
        let twin: Vec<usize> = (0..arcs.len()).map(|i| i ^ 1).collect();
        Self::build(n, &arcs, false, Some(twin))
    }

    fn build(
        n: usize,
        arcs: &[(usize, usize)],
        directed: bool,
        twin: Option<Vec<usize>>,
    ) -> Result<Self, GraphError> {
        for &(u, v) in arcs {
            let bad = if u >= n { u } else { v };
            if u >= n || v >= n {
                return Err(GraphError::VertexOutOfRange { vertex: bad, n });
            }
        }
        let mut offsets = vec![0usize; n + 1];
        for &(u, _) in arcs {
            offsets[u + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut cursor = offsets.clone();
        let mut heads = vec![0usize; arcs.len()];
        let mut tails = vec![0usize; arcs.len()];
        let mut position = vec![0usize; arcs.len()];
        for (i, &(u, v)) in arcs.iter().enumerate() {
            let slot = cursor[u];
            cursor[u] += 1;
            heads[slot] = v;
            tails[slot] = u;
            position[i] = slot;
        }
        let mates = twin.map(|twin| {
            let mut mates = vec![0usize; arcs.len()];
            for (i, &t) in twin.iter().enumerate() {
                mates[position[i]] = position[t];
            }
            mates
        });
        Ok(Graph {
            n,
            directed,
            offsets,
            heads,
            tails,
            mates,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of arcs (an undirected edge counts twice).
    pub fn m(&self) -> usize {
        self.heads.len()
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    /// Heads of the out-arcs of `v`, in list order.
    pub fn out_neighbors(&self, v: usize) -> &[usize] {
        &self.heads[self.offsets[v]..self.offsets[v + 1]]
    }

    /// Arc ids of the out-arcs of `v`.
    pub fn arc_ids(&self, v: usize) -> std::ops::Range<usize> {
        self.offsets[v]..self.offsets[v + 1]
    }

    pub fn arc_head(&self, arc: usize) -> usize {
        self.heads[arc]
    }

    pub fn arc_tail(&self, arc: usize) -> usize {
        self.tails[arc]
    }

    /// Twin arc of an undirected edge.
    pub fn mate(&self, arc: usize) -> Option<usize> {
        self.mates.as_ref().map(|m| m[arc])
    }

    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.tails.iter().copied().zip(self.heads.iter().copied())
    }

    /// Undirected edges, each listed once. Panics on directed graphs.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mates = self.mates.as_ref().expect("edges() on a directed graph");
        (0..self.m())
            .filter(|&a| a < mates[a])
            .map(|a| (self.tails[a], self.heads[a]))
            .collect()
    }

    pub fn min_out_degree(&self) -> Option<(usize, usize)> {
        (0..self.n).map(|v| (self.out_degree(v), v)).min()
    }

    pub fn max_out_degree(&self) -> usize {
        (0..self.n).map(|v| self.out_degree(v)).max().unwrap_or(0)
    }

    pub fn max_in_degree(&self) -> usize {
        let mut indeg = vec![0usize; self.n];
        for &h in &self.heads {
            indeg[h] += 1;
        }
        indeg.into_iter().max().unwrap_or(0)
    }

    /// Out-neighbors of `v` other than `v`, deduplicated.
    pub fn distinct_out_neighbors(&self, v: usize) -> Vec<usize> {
        let mut nb: Vec<usize> = self
            .out_neighbors(v)
            .iter()
            .copied()
            .filter(|&w| w != v)
            .collect();
        nb.sort_unstable();
        nb.dedup();
        nb
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.out_neighbors(u).contains(&v)
    }

    /// The graph with every arc reversed. Undirected graphs are their own
    /// reverse.
    pub fn reverse(&self) -> Graph {
        if !self.directed {
            return self.clone();
        }
        let arcs: Vec<(usize, usize)> = self.arcs().map(|(u, v)| (v, u)).collect();
        Graph::build(self.n, &arcs, true, None).expect("reversal keeps ids in range")
    }

    /// Cut size, out-volume and out-neighborhood of `s`. Runs in
    /// `O(vol(s))`; duplicate members of `s` are ignored.
    pub fn cut_stats(&self, s: &[usize]) -> CutStats {
        let members: HashSet<usize> = s.iter().copied().collect();
        let mut stats = CutStats::default();
        for &u in &members {
            stats.vol_out += self.out_degree(u);
            for &w in self.out_neighbors(u) {
                if !members.contains(&w) {
                    stats.cut_size += 1;
                    stats.n_out.push(w);
                }
            }
        }
        stats.n_out.sort_unstable();
        stats.n_out.dedup();
        stats
    }

    /// Crossing arcs `E(S, V-S)` as sorted `(tail, head)` pairs.
    pub fn crossing_arcs(&self, s: &[usize]) -> Vec<(usize, usize)> {
        let members: HashSet<usize> = s.iter().copied().collect();
        let mut out = Vec::new();
        for &u in &members {
            for &w in self.out_neighbors(u) {
                if !members.contains(&w) {
                    out.push((u, w));
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Vertices reachable from `source` when the vertices flagged in
    /// `removed` are deleted.
    pub fn reachable_avoiding(&self, source: usize, removed: &[bool]) -> Vec<bool> {
        let mut seen = vec![false; self.n];
        if removed[source] {
            return seen;
        }
        let mut stack = vec![source];
        seen[source] = true;
        while let Some(u) = stack.pop() {
            for &w in self.out_neighbors(u) {
                if !seen[w] && !removed[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }

    /// Serializes as an edge-list document with an `n m` header. Undirected
    /// graphs list every edge once.
    pub fn to_edge_list(&self) -> String {
        let lines: Vec<(usize, usize)> = if self.directed {
            self.arcs().collect()
        } else {
            self.edges()
        };
        let mut out = format!("{} {}\n", self.n, lines.len());
        for (u, v) in lines {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }
}

/// Parses an edge-list document.
///
/// Data lines are `u v`. Blank lines and lines starting with `#` or `%` are
/// skipped. The first data line is read as an `n m` header when its second
/// number equals the count of the remaining data lines; without a header,
/// `n` is one more than the largest vertex id. In undirected mode every line
/// contributes two arcs.
pub fn parse_edge_list(text: &str, directed: bool) -> Result<Graph, GraphError> {
    let mut rows: Vec<(usize, usize, usize)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with('%') {
            continue;
        }
        let lineno = idx + 1;
        let mut fields = line.split_whitespace();
        let mut next = |what: &str| -> Result<usize, GraphError> {
            let tok = fields.next().ok_or_else(|| GraphError::Parse {
                line: lineno,
                message: format!("missing {what}"),
            })?;
            tok.parse::<usize>().map_err(|_| GraphError::Parse {
                line: lineno,
                message: format!("`{tok}` is not a vertex id"),
            })
        };
        let u = next("first field")?;
        let v = next("second field")?;
        if let Some(extra) = fields.next() {
            return Err(GraphError::Parse {
                line: lineno,
                message: format!("unexpected trailing field `{extra}`"),
            });
        }
        rows.push((lineno, u, v));
    }

    let (n, body) = match rows.first() {
        Some(&(_, hn, hm)) if hm == rows.len() - 1 => (Some(hn), &rows[1..]),
        _ => (None, &rows[..]),
    };
    let n = match n {
        Some(n) => {
            for &(line, u, v) in body {
                if u >= n || v >= n {
                    return Err(GraphError::HeaderRange {
                        line,
                        vertex: u.max(v),
                        n,
                    });
                }
            }
            n
        }
        None => body.iter().map(|&(_, u, v)| u.max(v) + 1).max().unwrap_or(0),
    };
    let pairs: Vec<(usize, usize)> = body.iter().map(|&(_, u, v)| (u, v)).collect();
    if directed {
        Graph::from_arcs(n, &pairs)
    } else {
        Graph::from_edges(n, &pairs)
    }
}
