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

use localconn::bruteforce::{bf_min_vertex_cut, OracleLimits};
use localconn::generators::{gen_gnp, gen_planted_vertex_cut};
use localconn::global_vc::{
    min_vertex_cut, sparsify_ni, st_vertex_connectivity, vc_check, FrameworkConfig, PairStrategy, StOutcome,
};
use localconn::graph::Graph;
use localconn::rng::seeded;
use proptest::prelude::*;
use rand::Rng;

fn graph(seed: u64) -> Graph {
    let mut rng = seeded(seed);
    let n = rng.gen_range(4..14);
    let directed = rng.gen_bool(0.3);
    gen_gnp(n, rng.gen_range(0.2..0.9), directed, &mut rng)
}

fn exact_cfg(seed: u64) -> FrameworkConfig {
    FrameworkConfig { boost: 3, seed, ..FrameworkConfig::default() }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn exact_kappa_matches_brute_force(seed in any::<u64>()) {
        let g = graph(seed);
        let want = bf_min_vertex_cut(&g, &OracleLimits::default()).unwrap().kappa();
        let est = min_vertex_cut(&g, 0.5, true, &exact_cfg(seed)).unwrap();
        prop_assert_eq!(est.kappa, want);
        if let Some(t) = &est.witness {
            prop_assert!(t.validate(&g).is_ok());
            prop_assert_eq!(t.separator.len(), est.kappa);
        }
    }

    #[test]
    fn every_reported_cut_is_valid_and_small(seed in any::<u64>(), k in 1usize..6, eps in 0.05f64..1.0) {
        let g = graph(seed);
        let r = vc_check(&g, k, eps, &exact_cfg(seed)).unwrap();
        if let Some(t) = r.verdict.witness() {
            prop_assert!(t.validate(&g).is_ok());
            prop_assert!((t.separator.len() as f64) < (1.0 + eps) * k as f64);
        }
    }

    #[test]
    fn connected_verdicts_are_never_wrong_below_kappa(seed in any::<u64>()) {
        let g = graph(seed);
        let kappa = bf_min_vertex_cut(&g, &OracleLimits::default()).unwrap().kappa();
        prop_assume!(kappa > 0);
        let r = vc_check(&g, kappa, 0.5 / kappa as f64, &exact_cfg(seed)).unwrap();
        prop_assert!(!r.verdict.is_cut());
    }

    #[test]
    fn sparse_certificate_keeps_small_cuts(seed in any::<u64>(), k in 1usize..5) {
        let mut rng = seeded(seed);
        let n = rng.gen_range(4..14);
        let g = gen_gnp(n, rng.gen_range(0.3..1.0), false, &mut rng);
        let h = sparsify_ni(&g, k).unwrap();
        prop_assert!(h.m() / 2 <= k * (n - 1));
        let kg = bf_min_vertex_cut(&g, &OracleLimits::default()).unwrap().kappa();
        let kh = bf_min_vertex_cut(&h, &OracleLimits::default()).unwrap().kappa();
        prop_assert_eq!(kg.min(k), kh.min(k));
    }

    #[test]
    fn pair_flow_matches_brute_force_on_planted(seed in any::<u64>(), s in 1usize..4) {
        let (g, meta) = gen_planted_vertex_cut(8, 9, s, &mut seeded(seed)).unwrap();
        let Some(localconn::generators::Planted::VertexCut { left, right, .. }) = meta.planted else {
            panic!("vertex cut expected");
        };
        let t = st_vertex_connectivity(&g, left[0], right[0], s + 2, 0.5).unwrap();
        let StOutcome::Cut(w) = t else {
            return Err(TestCaseError::fail(format!("expected a cut, got {t:?}")));
        };
        prop_assert!(w.validate(&g).is_ok());
        prop_assert_eq!(w.separator.len(), s);
    }
}

#[test]
fn sweep_and_sampling_agree_on_planted_cut() {
    for seed in 0..4 {
        let (g, _) = gen_planted_vertex_cut(60, 70, 3, &mut seeded(seed)).unwrap();
        for pairs in [PairStrategy::Sweep, PairStrategy::Sampled] {
            let cfg = FrameworkConfig { pairs, seed, local_constant: 8, ..FrameworkConfig::default() };
            assert!(vc_check(&g, 4, 0.2, &cfg).unwrap().verdict.is_cut());
            assert!(!vc_check(&g, 3, 0.2, &cfg).unwrap().verdict.is_cut());
        }
    }
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let (g, _) = gen_planted_vertex_cut(200, 200, 4, &mut seeded(11)).unwrap();
    let cfg = FrameworkConfig { seed: 5, ..FrameworkConfig::default() };
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| vc_check(&g, 5, 0.1, &cfg).unwrap())
    };
    assert_eq!(run(1), run(3));
}
