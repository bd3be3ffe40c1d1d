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

//! Cut witnesses and their validation against the base graph.

use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};

use crate::graph::Graph;

/// A partition `(L, S, R)` of the vertices with `L` and `R` nonempty and no
/// arc from `L` to `R`. `R` is implicit: everything not in `L` or `S`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparationTriple {
    pub left: Vec<usize>,
    pub separator: Vec<usize>,
    pub vertex_count: usize,
}

impl SeparationTriple {
    pub fn new(mut left: Vec<usize>, mut separator: Vec<usize>, vertex_count: usize) -> Self {
        left.sort_unstable();
        left.dedup();
        separator.sort_unstable();
        separator.dedup();
        SeparationTriple {
            left,
            separator,
            vertex_count,
        }
    }

    pub fn right_len(&self) -> usize {
        self.vertex_count - self.left.len() - self.separator.len()
    }

    /// The right side, materialized. Costs `O(n)`.
    pub fn right(&self) -> Vec<usize> {
        let taken: FxHashSet<usize> = self
            .left
            .iter()
            .chain(self.separator.iter())
            .copied()
            .collect();
        (0..self.vertex_count).filter(|v| !taken.contains(v)).collect()
    }

    /// Swaps the roles of `L` and `R`. A triple of the reversed graph
    /// becomes a triple of the original graph.
    pub fn mirrored(&self) -> SeparationTriple {
        SeparationTriple::new(self.right(), self.separator.clone(), self.vertex_count)
    }

    /// Checks the partition, nonemptiness and `E(L, R) = ∅` by a scan of the
    /// out-arcs of `L`.
    pub fn validate(&self, g: &Graph) -> Result<(), String> {
        if self.vertex_count != g.n() {
            return Err(format!(
                "triple covers {} vertices, graph has {}",
                self.vertex_count,
                g.n()
            ));
        }
        let left: FxHashSet<usize> = self.left.iter().copied().collect();
        let sep: FxHashSet<usize> = self.separator.iter().copied().collect();
        if left.len() != self.left.len() || sep.len() != self.separator.len() {
            return Err("duplicate vertices".into());
        }
        if let Some(v) = self.left.iter().chain(&self.separator).find(|&&v| v >= g.n()) {
            return Err(format!("vertex {v} out of range"));
        }
        if left.iter().any(|v| sep.contains(v)) {
            return Err("left side and separator overlap".into());
        }
        if left.is_empty() {
            return Err("left side is empty".into());
        }
        if left.len() + sep.len() >= g.n() {
            return Err("right side is empty".into());
        }
        for &u in &self.left {
            for &w in g.out_neighbors(u) {
                if !left.contains(&w) && !sep.contains(&w) {
                    return Err(format!("arc {u}->{w} runs from left to right"));
                }
            }
        }
        Ok(())
    }
}

/// Evidence that a graph is not `k`-connected.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CutWitness {
    /// A vertex set with the arcs leaving it.
    EdgeCut {
        set: Vec<usize>,
        crossing: Vec<(usize, usize)>,
    },
    VertexCut(SeparationTriple),
}

impl CutWitness {
    /// Edge-cut witness for `set`, with crossing arcs recomputed from `g`.
    pub fn edge_cut(g: &Graph, mut set: Vec<usize>) -> CutWitness {
        set.sort_unstable();
        set.dedup();
        let crossing = g.crossing_arcs(&set);
        CutWitness::EdgeCut { set, crossing }
    }

    /// Number of crossing arcs, or separator size.
    pub fn size(&self) -> usize {
        match self {
            CutWitness::EdgeCut { crossing, .. } => crossing.len(),
            CutWitness::VertexCut(t) => t.separator.len(),
        }
    }

    /// Recounts the witness on `g`.
    pub fn validate(&self, g: &Graph) -> Result<(), String> {
        match self {
            CutWitness::EdgeCut { set, crossing } => {
                if set.is_empty() {
                    return Err("empty set".into());
                }
                if let Some(v) = set.iter().find(|&&v| v >= g.n()) {
                    return Err(format!("vertex {v} out of range"));
                }
                let distinct: FxHashSet<usize> = set.iter().copied().collect();
                if distinct.len() == g.n() {
                    return Err("set is the whole vertex set".into());
                }
                let mut claimed = crossing.clone();
                claimed.sort_unstable();
                if claimed != g.crossing_arcs(set) {
                    return Err("crossing arcs do not match the graph".into());
                }
                Ok(())
            }
            CutWitness::VertexCut(t) => t.validate(g),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_triangles_through_hub() -> Graph {
        // 0-1-2 and 3-4-5 share hub 6
        Graph::from_edges(
            7,
            &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 6), (3, 6)],
        )
        .unwrap()
    }

    #[test]
    fn valid_triple() {
        let g = two_triangles_through_hub();
        let t = SeparationTriple::new(vec![0, 1, 2], vec![6], 7);
        assert_eq!(t.validate(&g), Ok(()));
        assert_eq!(t.right(), vec![3, 4, 5]);
        assert!(t.mirrored().validate(&g).is_ok());
    }

    #[test]
    fn tampered_triple_fails() {
        let g = two_triangles_through_hub();
        let t = SeparationTriple::new(vec![0, 1, 2, 6], vec![], 7);
        assert!(t.validate(&g).is_err());
    }

    #[test]
    fn edge_cut_checks() {
        let g = two_triangles_through_hub();
        let w = CutWitness::edge_cut(&g, vec![0, 1, 2]);
        assert_eq!(w.size(), 1);
        assert!(w.validate(&g).is_ok());
        let empty = CutWitness::EdgeCut {
            set: vec![],
            crossing: vec![],
        };
        assert!(empty.validate(&g).is_err());
        let CutWitness::EdgeCut { mut set, crossing } = w else {
            unreachable!()
        };
        set.push(3);
        assert!(CutWitness::EdgeCut { set, crossing }.validate(&g).is_err());
    }
}
