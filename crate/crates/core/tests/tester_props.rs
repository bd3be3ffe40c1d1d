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

use localconn::generators::{gen_circulant, gen_gnp, gen_hypercube};
use localconn::graph::Graph;
use localconn::rng::seeded;
use localconn::tester::{
    query_cap, run_tester, Property, TestInstance, TestVerdict, TesterConfig, TesterModel,
};
use localconn::witness::CutWitness;
use proptest::prelude::*;
use rand::Rng;

const PROPERTIES: [Property; 2] = [Property::EdgeConnectivity, Property::VertexConnectivity];

fn models(g: &Graph) -> [TesterModel; 2] {
    [
        TesterModel::Unbounded { avg_degree: None },
        TesterModel::Bounded { d: g.max_out_degree().max(1) },
    ]
}

fn check_witness(g: &Graph, k: usize, w: &CutWitness) -> Result<(), TestCaseError> {
    prop_assert!(w.validate(g).is_ok(), "invalid witness {w:?}");
    prop_assert!(w.size() < k);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn connected_inputs_are_accepted(seed in any::<u64>(), which in 0usize..2) {
        let g = match which {
            0 => gen_hypercube(5),
            _ => gen_circulant(48, &[1, 2], false).unwrap(),
        };
        let inst = TestInstance::new(&g);
        for model in models(&g) {
            for property in PROPERTIES {
                let cfg = TesterConfig::new(4, 0.5, model, seed);
                let r = run_tester(&inst, property, &cfg).unwrap();
                prop_assert_eq!(&r.verdict, &TestVerdict::Accept);
                prop_assert!(r.edge_queries <= query_cap(property, &cfg));
            }
        }
    }

    #[test]
    fn rejections_carry_real_witnesses(seed in any::<u64>(), k in 1usize..5) {
        let mut rng = seeded(seed);
        let n = rng.gen_range(20..60);
        let g = gen_gnp(n, rng.gen_range(0.02..0.2), rng.gen_bool(0.5), &mut rng);
        let inst = TestInstance::new(&g);
        for model in models(&g) {
            for property in PROPERTIES {
                let cfg = TesterConfig::new(k, 0.3, model, seed);
                let r = match run_tester(&inst, property, &cfg) {
                    Ok(r) => r,
                    Err(localconn::error::Error::Param(_)) => continue,
                    Err(e) => return Err(TestCaseError::fail(e.to_string())),
                };
                prop_assert!(r.edge_queries <= query_cap(property, &cfg));
                if let TestVerdict::Reject { witness } = &r.verdict {
                    check_witness(&g, k, witness)?;
                }
            }
        }
    }
}

#[test]
fn isolated_triangles_are_rejected() {
    let g = localconn::generators::gen_union_of_cycles(30, 3, false).unwrap();
    let inst = TestInstance::new(&g);
    for model in models(&g) {
        let cfg = TesterConfig::new(2, 0.1, model, 3);
        let r = run_tester(&inst, Property::EdgeConnectivity, &cfg).unwrap();
        assert!(r.verdict.is_reject());
    }
}
