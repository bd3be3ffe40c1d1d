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

//! Incidence-list access with query accounting.
//!
//! Algorithms that are meant to run in sublinear time only see a graph
//! through [`IncidenceOracle`]: `degree(v)` and `query_edge(v, i)` for the
//! `i`-th out-arc (1-based). Edge queries and degree queries are counted
//! separately.

use rand::Rng;

use crate::error::Error;
use crate::graph::Graph;

/// Tag bit set on the ids of padding self-loops.
pub const PAD_TAG: u64 = 1 << 62;
/// Tag bit set on the ids of the `v_in -> v_out` arcs of a split view.
pub const SPLIT_TAG: u64 = 1 << 63;

/// An arc as seen through an oracle. `id` is stable for the lifetime of the
/// oracle and unique among its arcs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArcRef {
    pub id: u64,
    pub tail: usize,
    pub head: usize,
}

impl ArcRef {
    pub fn is_loop(&self) -> bool {
        self.tail == self.head
    }

    pub fn is_padding(&self) -> bool {
        self.id & PAD_TAG != 0 && self.id & SPLIT_TAG == 0
    }
}

/// Answer to an edge query.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Answer {
    Arc(ArcRef),
    EndOfList,
}

/// Query access to the out-lists of a graph.
pub trait IncidenceOracle {
    fn vertex_count(&self) -> usize;

    /// Number of arcs, when the model discloses it.
    fn arc_count(&self) -> Option<usize>;

    /// Number of real out-arcs of `v` (padding excluded). Counts as one
    /// degree query.
    fn degree(&mut self, v: usize) -> Result<usize, Error>;

    /// The `i`-th out-arc of `v`, 1-based. Counts as one edge query.
    fn query_edge(&mut self, v: usize, i: usize) -> Result<Answer, Error>;

    fn edge_queries(&self) -> u64;

    fn degree_queries(&self) -> u64;
}

/// Access model of a [`QueryOracle`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Model {
    /// Out-lists of arbitrary length; reading past the end yields
    /// [`Answer::EndOfList`].
    Unbounded,
    /// Every vertex is treated as having exactly `d` out-arcs; positions
    /// past the real out-degree hold self-loops.
    BoundedRegular { d: usize },
}

/// Counting oracle over an in-memory [`Graph`].
#[derive(Clone, Debug)]
pub struct QueryOracle<'g> {
    graph: &'g Graph,
    model: Model,
    edge_queries: u64,
    degree_queries: u64,
    cap: Option<u64>,
    hide_arc_count: bool,
}

impl<'g> QueryOracle<'g> {
    pub fn unbounded(graph: &'g Graph) -> Self {
        QueryOracle {
            graph,
            model: Model::Unbounded,
            edge_queries: 0,
            degree_queries: 0,
            cap: None,
            hide_arc_count: false,
        }
    }

    /// Bounded-degree view. Fails when some out-degree exceeds `d`.
    pub fn bounded(graph: &'g Graph, d: usize) -> Result<Self, Error> {
        if d == 0 {
            return Err(Error::Param("degree bound must be positive".into()));
        }
        let max = graph.max_out_degree();
        if max > d {
            return Err(Error::Param(format!(
                "out-degree {max} exceeds the degree bound {d}"
            )));
        }
        Ok(QueryOracle {
            model: Model::BoundedRegular { d },
            ..Self::unbounded(graph)
        })
    }

    /// Hard limit on edge queries; the call that would exceed it fails with
    /// [`Error::BudgetExhausted`].
    pub fn with_cap(mut self, cap: u64) -> Self {
        self.cap = Some(cap);
        self
    }

    /// Makes [`IncidenceOracle::arc_count`] return `None`.
    pub fn hiding_arc_count(mut self) -> Self {
        self.hide_arc_count = true;
        self
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn reset_counters(&mut self) {
        self.edge_queries = 0;
        self.degree_queries = 0;
    }
}

impl IncidenceOracle for QueryOracle<'_> {
    fn vertex_count(&self) -> usize {
        self.graph.n()
    }

    fn arc_count(&self) -> Option<usize> {
        if self.hide_arc_count {
            return None;
        }
        Some(match self.model {
            Model::Unbounded => self.graph.m(),
            Model::BoundedRegular { d } => self.graph.n() * d,
        })
    }

    fn degree(&mut self, v: usize) -> Result<usize, Error> {
        if v >= self.graph.n() {
            return Err(Error::IndexOutOfRange { vertex: v, index: 0 });
        }
        self.degree_queries += 1;
        Ok(self.graph.out_degree(v))
    }

    fn query_edge(&mut self, v: usize, i: usize) -> Result<Answer, Error> {
        if v >= self.graph.n() || i == 0 {
            return Err(Error::IndexOutOfRange { vertex: v, index: i });
        }
        if let Model::BoundedRegular { d } = self.model {
            if i > d {
                return Err(Error::IndexOutOfRange { vertex: v, index: i });
            }
        }
        if let Some(cap) = self.cap {
            if self.edge_queries >= cap {
                return Err(Error::BudgetExhausted { cap });
            }
        }
        self.edge_queries += 1;
        let deg = self.graph.out_degree(v);
        if i <= deg {
            let id = self.graph.arc_ids(v).start + i - 1;
            return Ok(Answer::Arc(ArcRef {
                id: id as u64,
                tail: v,
                head: self.graph.arc_head(id),
            }));
        }
        Ok(match self.model {
            Model::Unbounded => Answer::EndOfList,
            Model::BoundedRegular { d } => Answer::Arc(ArcRef {
                id: PAD_TAG | (v * d + i - 1) as u64,
                tail: v,
                head: v,
            }),
        })
    }

    fn edge_queries(&self) -> u64 {
        self.edge_queries
    }

    fn degree_queries(&self) -> u64 {
        self.degree_queries
    }
}

/// Samples an arc of the padded `d`-regular graph uniformly: a uniform
/// vertex, then a uniform position in `1..=d`. Every real arc comes back
/// with probability `1/(nd)`.
pub fn sample_edge_regular<R: Rng + ?Sized>(
    oracle: &mut QueryOracle<'_>,
    rng: &mut R,
) -> Result<ArcRef, Error> {
    let Model::BoundedRegular { d } = oracle.model() else {
        return Err(Error::Param("edge sampling needs the bounded model".into()));
    };
    let n = oracle.vertex_count();
    if n == 0 {
        return Err(Error::Param("empty graph".into()));
    }
    let v = rng.gen_range(0..n);
    let i = rng.gen_range(1..=d);
    match oracle.query_edge(v, i)? {
        Answer::Arc(a) => Ok(a),
        Answer::EndOfList => unreachable!("bounded model never ends a list early"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    fn path() -> Graph {
        Graph::from_arcs(3, &[(0, 1), (0, 2), (1, 2)]).unwrap()
    }

    #[test]
    fn unbounded_end_of_list_counts() {
        let g = path();
        let mut o = QueryOracle::unbounded(&g);
        assert_eq!(o.query_edge(0, 3).unwrap(), Answer::EndOfList);
        assert_eq!(o.edge_queries(), 1);
    }

    #[test]
    fn bounded_pads_with_loops() {
        let g = path();
        let mut o = QueryOracle::bounded(&g, 5).unwrap();
        match o.query_edge(0, 4).unwrap() {
            Answer::Arc(a) => {
                assert_eq!((a.tail, a.head), (0, 0));
                assert!(a.is_padding());
            }
            Answer::EndOfList => panic!(),
        }
        assert_eq!(o.edge_queries(), 1);
        assert!(o.query_edge(0, 6).is_err());
    }

    #[test]
    fn cap_fires_on_the_next_call() {
        let g = path();
        let mut o = QueryOracle::unbounded(&g).with_cap(10);
        for _ in 0..10 {
            o.query_edge(0, 1).unwrap();
        }
        assert_eq!(
            o.query_edge(0, 1).unwrap_err(),
            Error::BudgetExhausted { cap: 10 }
        );
        assert_eq!(o.edge_queries(), 10);
    }

    #[test]
    fn degree_queries_are_separate() {
        let g = path();
        let mut o = QueryOracle::unbounded(&g);
        assert_eq!(o.degree(0).unwrap(), 2);
        assert_eq!(o.degree_queries(), 1);
        assert_eq!(o.edge_queries(), 0);
    }

    #[test]
    fn singleton_loop_always_sampled() {
        let g = Graph::from_arcs(1, &[(0, 0)]).unwrap();
        let mut o = QueryOracle::bounded(&g, 1).unwrap();
        let mut rng = seeded(1);
        for _ in 0..20 {
            assert_eq!(sample_edge_regular(&mut o, &mut rng).unwrap().id, 0);
        }
    }

    #[test]
    fn padding_frequency() {
        // vertex 0 has one real arc, vertex 1 has two; d = 2
        let g = Graph::from_arcs(2, &[(0, 1), (1, 0), (1, 0)]).unwrap();
        let mut o = QueryOracle::bounded(&g, 2).unwrap();
        let mut rng = seeded(9);
        let trials = 40_000;
        let pads = (0..trials)
            .filter(|_| sample_edge_regular(&mut o, &mut rng).unwrap().is_padding())
            .count();
        let p = 0.25;
        let sigma = (trials as f64 * p * (1.0 - p)).sqrt();
        assert!((pads as f64 - trials as f64 * p).abs() < 3.0 * sigma);
    }
}
