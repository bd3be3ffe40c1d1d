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

//! Reversible-arc view over an immutable graph.
//!
//! The overlay only stores what a local run touched: the arcs currently
//! flipped, the arcs marked so far, and for every vertex the flipped arcs
//! that now leave it. Setup is free and every operation is proportional to
//! the arcs involved.

use rustc_hash::{FxHashMap, FxHashSet};

use crate::error::Error;
use crate::graph::{CutStats, Graph};
use crate::oracle::ArcRef;

#[derive(Clone, Debug, Default)]
pub struct ReversalOverlay {
    /// Flipped arcs keyed by id, stored in base orientation.
    reversed: FxHashMap<u64, ArcRef>,
    marked: FxHashSet<u64>,
    /// Flipped arcs whose base head is the key, in flip order.
    flipped_in: FxHashMap<usize, Vec<ArcRef>>,
}

impl ReversalOverlay {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_reversed(&self, id: u64) -> bool {
        self.reversed.contains_key(&id)
    }

    pub fn reversed_count(&self) -> usize {
        self.reversed.len()
    }

    pub fn is_marked(&self, id: u64) -> bool {
        self.marked.contains(&id)
    }

    /// Marks an arc; returns whether it was unmarked before.
    pub fn mark(&mut self, id: u64) -> bool {
        self.marked.insert(id)
    }

    pub fn mark_count(&self) -> usize {
        self.marked.len()
    }

    /// Flipped arcs leaving `v` in the current orientation, as stored in
    /// base orientation (their base head is `v`).
    pub fn flipped_in(&self, v: usize) -> &[ArcRef] {
        self.flipped_in.get(&v).map_or(&[], Vec::as_slice)
    }

    /// Current out-arcs of `v` given its base out-list: unflipped base arcs
    /// in list order, then flipped arcs pointing away from `v`. Returned arcs
    /// are in current orientation.
    pub fn current_out(&self, v: usize, base: &[ArcRef]) -> Vec<ArcRef> {
        let mut out: Vec<ArcRef> = base
            .iter()
            .copied()
            .filter(|a| !self.is_reversed(a.id))
            .collect();
        out.extend(self.flipped_in(v).iter().map(|a| ArcRef {
            id: a.id,
            tail: v,
            head: a.tail,
        }));
        out
    }

    /// Flips an arc given in its current orientation. Flipping twice
    /// restores the base orientation.
    pub fn flip(&mut self, current: ArcRef) {
        if let Some(base) = self.reversed.remove(&current.id) {
            if let Some(list) = self.flipped_in.get_mut(&base.head) {
                list.retain(|a| a.id != base.id);
            }
        } else {
            self.reversed.insert(current.id, current);
            self.flipped_in.entry(current.head).or_default().push(current);
        }
    }

    /// Current out-arcs of `v` over an in-memory graph whose arc ids are
    /// the graph's own.
    pub fn graph_out(&self, g: &Graph, v: usize) -> Vec<ArcRef> {
        let base: Vec<ArcRef> = g
            .arc_ids(v)
            .map(|id| ArcRef {
                id: id as u64,
                tail: v,
                head: g.arc_head(id),
            })
            .collect();
        self.current_out(v, &base)
    }

    /// [`Graph::cut_stats`] evaluated on the current orientation.
    pub fn cut_stats(&self, g: &Graph, s: &[usize]) -> CutStats {
        let members: FxHashSet<usize> = s.iter().copied().collect();
        let mut stats = CutStats::default();
        for &u in &members {
            for a in self.graph_out(g, u) {
                stats.vol_out += 1;
                if !members.contains(&a.head) {
                    stats.cut_size += 1;
                    stats.n_out.push(a.head);
                }
            }
        }
        stats.n_out.sort_unstable();
        stats.n_out.dedup();
        stats
    }
}

/// Flips every arc on the tree path from `x` to `y`. `parent` maps each
/// tree vertex other than `x` to the tree arc entering it, in current
/// orientation.
pub fn reverse_tree_path(
    overlay: &mut ReversalOverlay,
    parent: &FxHashMap<usize, ArcRef>,
    x: usize,
    y: usize,
) -> Result<(), Error> {
    let mut path = Vec::new();
    let mut v = y;
    while v != x {
        let arc = *parent.get(&v).ok_or(Error::NotInTree(y))?;
        path.push(arc);
        v = arc.tail;
        if path.len() > parent.len() {
            return Err(Error::NotInTree(y));
        }
    }
    for arc in path {
        overlay.flip(arc);
    }
    Ok(())
}
