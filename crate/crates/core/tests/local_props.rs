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

use localconn::error::Error;
use localconn::generators::gen_gnp;
use localconn::graph::Graph;
use localconn::local_ec::{
    local_ec, local_ec_dfs, mark_limit, LocalEcParams, DFS_VOLUME_FACTOR, VOLUME_FACTOR,
};
use localconn::local_vc::{lift_triple, local_vc, project_cut, split_cut_stats, split_in, split_out, SplitGraphView};
use localconn::oracle::{ArcRef, IncidenceOracle, QueryOracle};
use localconn::overlay::{reverse_tree_path, ReversalOverlay};
use localconn::rng::seeded;
use localconn::suites::rooted_triple;
use localconn::witness::{CutWitness, SeparationTriple};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;
use rustc_hash::{FxHashMap, FxHashSet};

fn random_graph(seed: u64, max_n: usize) -> Graph {
    let mut rng = seeded(seed);
    let n = rng.gen_range(3..max_n);
    let directed = rng.gen_bool(0.5);
    gen_gnp(n, rng.gen_range(0.1..0.6), directed, &mut rng)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn reversing_a_tree_path_changes_cut_and_volume_by_one_or_zero(seed in any::<u64>()) {
        let g = random_graph(seed, 25);
        prop_assume!(g.m() > 0);
        let mut rng = seeded(seed ^ 0x5eed);
        let mut ov = ReversalOverlay::new();
        for _ in 0..rng.gen_range(0..g.m()) {
            let id = rng.gen_range(0..g.m());
            let (t, h) = (g.arc_tail(id), g.arc_head(id));
            let current = if ov.is_reversed(id as u64) {
                ArcRef { id: id as u64, tail: h, head: t }
            } else {
                ArcRef { id: id as u64, tail: t, head: h }
            };
            ov.flip(current);
        }
        let x = rng.gen_range(0..g.n());
        let mut parent: FxHashMap<usize, ArcRef> = FxHashMap::default();
        let mut order = vec![x];
        let mut seen: FxHashSet<usize> = [x].into_iter().collect();
        let mut i = 0;
        while i < order.len() {
            let u = order[i];
            i += 1;
            for a in ov.graph_out(&g, u) {
                if seen.insert(a.head) {
                    parent.insert(a.head, a);
                    order.push(a.head);
                }
            }
        }
        let y = *order.choose(&mut rng).unwrap();
        let s: Vec<usize> = (0..g.n()).filter(|&v| v == x || rng.gen_bool(0.5)).collect();
        let before = ov.cut_stats(&g, &s);
        reverse_tree_path(&mut ov, &parent, x, y).unwrap();
        let after = ov.cut_stats(&g, &s);
        let drop = usize::from(!s.contains(&y));
        prop_assert_eq!(after.cut_size + drop, before.cut_size);
        prop_assert_eq!(after.vol_out + drop, before.vol_out);
    }

    #[test]
    fn overlay_recount_matches_the_flipped_graph(seed in any::<u64>()) {
        let g = random_graph(seed, 20);
        prop_assume!(g.m() > 0);
        let mut rng = seeded(seed);
        let mut ov = ReversalOverlay::new();
        let mut flipped = vec![false; g.m()];
        for _ in 0..g.m() {
            let id = rng.gen_range(0..g.m());
            let (t, h) = (g.arc_tail(id), g.arc_head(id));
            let current = if flipped[id] {
                ArcRef { id: id as u64, tail: h, head: t }
            } else {
                ArcRef { id: id as u64, tail: t, head: h }
            };
            ov.flip(current);
            flipped[id] = !flipped[id];
        }
        let arcs: Vec<(usize, usize)> = (0..g.m())
            .map(|id| {
                let (t, h) = (g.arc_tail(id), g.arc_head(id));
                if flipped[id] { (h, t) } else { (t, h) }
            })
            .collect();
        let plain = Graph::from_arcs(g.n(), &arcs).unwrap();
        let s: Vec<usize> = (0..g.n()).filter(|_| rng.gen_bool(0.5)).collect();
        let a = ov.cut_stats(&g, &s);
        let b = plain.cut_stats(&s);
        prop_assert_eq!(a.cut_size, b.cut_size);
        prop_assert_eq!(a.vol_out, b.vol_out);
        prop_assert_eq!(ov.reversed_count(), flipped.iter().filter(|&&f| f).count());
    }

    #[test]
    fn local_ec_is_sound_and_within_budget(
        seed in any::<u64>(),
        k in 1usize..5,
        gap in 0usize..3,
        nu in 2usize..60,
    ) {
        let g = random_graph(seed, 40);
        prop_assume!(nu > k && gap <= k);
        let x = (seed % g.n() as u64) as usize;
        let mut oracle = QueryOracle::unbounded(&g).hiding_arc_count();
        let run = local_ec(&mut oracle, &LocalEcParams { x, nu, k, gap, seed }).unwrap();
        prop_assert!(oracle.edge_queries() <= mark_limit(nu, k, gap) + (k + gap) as u64);
        if let Some(w) = run.result.witness() {
            prop_assert!(w.validate(&g).is_ok());
            prop_assert!(w.size() < k + gap);
            let CutWitness::EdgeCut { set, .. } = w else { panic!("edge witness expected") };
            let vol = g.cut_stats(set).vol_out as u64;
            prop_assert!(vol * (gap as u64 + 1) <= VOLUME_FACTOR * nu as u64 * k as u64);
        }
    }

    #[test]
    fn dfs_variant_is_sound(seed in any::<u64>(), k in 1usize..5, eps in 0.1f64..1.0) {
        let g = random_graph(seed, 40);
        let nu = k + 5;
        let x = (seed % g.n() as u64) as usize;
        let mut oracle = QueryOracle::unbounded(&g).hiding_arc_count();
        let run = local_ec_dfs(&mut oracle, x, nu, k, eps, seed).unwrap();
        if let Some(CutWitness::EdgeCut { set, crossing }) = run.result.witness() {
            prop_assert!((crossing.len() as f64) < ((1.0 + eps) * k as f64).floor() + 1e-9);
            let vol = g.cut_stats(set).vol_out as f64;
            prop_assert!(vol <= DFS_VOLUME_FACTOR * nu as f64 / eps + 1e-9);
        }
    }

    #[test]
    fn local_vc_witnesses_are_separation_triples(
        seed in any::<u64>(),
        k in 1usize..4,
        gap in 0usize..2,
        nu in 4usize..60,
    ) {
        let mut rng = seeded(seed);
        let n = rng.gen_range(16..40);
        let g = gen_gnp(n, rng.gen_range(0.05..0.3), rng.gen_bool(0.5), &mut rng);
        prop_assume!(g.min_out_degree().is_some_and(|(_, d)| d > 0));
        prop_assume!(nu > k);
        let x = rng.gen_range(0..n);
        let mut oracle = QueryOracle::unbounded(&g).hiding_arc_count();
        let run = match local_vc(&mut oracle, x, nu, k, gap, seed) {
            Err(Error::ProjectionDegenerate) => return Ok(()),
            other => other.unwrap(),
        };
        if let Some(w) = run.result.witness() {
            prop_assert!(w.validate(&g).is_ok());
            prop_assert!(w.size() < k + gap);
        }
    }

    #[test]
    fn lifting_preserves_the_separator(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let n = rng.gen_range(6..30);
        let g = gen_gnp(n, rng.gen_range(0.05..0.4), rng.gen_bool(0.5), &mut rng);
        let x = rng.gen_range(0..n);
        let t = rooted_triple(&g, x, &mut rng);
        prop_assume!(t.is_some());
        let t = t.unwrap();
        let lifted = lift_triple(&g, x, &t).unwrap();
        let (cut, vol) = split_cut_stats(&g, x, &lifted);
        let base: usize = t.left.iter().map(|&v| g.out_degree(v)).sum();
        prop_assert_eq!(cut, t.separator.len());
        prop_assert!(base <= vol && vol <= 2 * base);
        let mut oracle = QueryOracle::unbounded(&g);
        let mut view = SplitGraphView::new(&mut oracle, x);
        let back = project_cut(&mut view, &lifted).unwrap();
        prop_assert!(back.validate(&g).is_ok());
        prop_assert!(back.separator.len() <= t.separator.len());
    }
}

/// Left side `{r, p, q, x}`, separator `{u, v, w, y, z}` and right side
/// `{a, b, c}`. The split-graph set holds `x`, both copies of `r, p, q` and
/// the in-copies of `w, y, z`; the out-copies of `p` and `q` reach the
/// in-copies of `u` and `v`, which the projection has to add back.
#[test]
fn projection_rebuilds_the_drawn_triple() {
    let [x, r, p, q, u, v, w, y, z, a, b, c] = [0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11];
    let mut arcs = vec![];
    for (tail, heads) in [
        (x, vec![r, p, q, w, y, z]),
        (r, vec![x, p, q, w, y, z]),
        (p, vec![x, r, q, u, w, y]),
        (q, vec![x, r, p, v, z, w]),
        (u, vec![a, p]),
        (v, vec![b, q]),
        (w, vec![c, x]),
        (y, vec![a, r]),
        (z, vec![b]),
        (a, vec![b, u]),
        (b, vec![c, v]),
        (c, vec![a, w, y, z]),
    ] {
        arcs.extend(heads.into_iter().map(|h| (tail, h)));
    }
    let g = Graph::from_arcs(12, &arcs).unwrap();
    let mut lp = vec![split_in(x)];
    for s in [r, p, q] {
        lp.push(split_in(s));
        lp.push(split_out(s, x));
    }
    lp.extend([w, y, z].map(split_in));
    let (cut, _) = split_cut_stats(&g, x, &lp);
    assert_eq!(cut, 5);

    let mut oracle = QueryOracle::unbounded(&g);
    let mut view = SplitGraphView::new(&mut oracle, x);
    let t = project_cut(&mut view, &lp).unwrap();
    assert_eq!(t, SeparationTriple::new(vec![r, p, q, x], vec![u, v, w, y, z], 12));
    assert!(t.validate(&g).is_ok());
}
