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

//! Local cut detection, vertex connectivity and connectivity testers for
//! directed graphs.
//!
//! * [`local_ec`] and [`local_vc`]: local searches for small edge and
//!   vertex cuts around a seed, with query counts independent of `n`.
//! * [`global_vc`]: `k`-vertex-connectivity checks and exact or
//!   approximate vertex connectivity.
//! * [`tester`]: property testers for `k`-edge and `k`-vertex connectivity
//!   in the unbounded and bounded-degree query models.
//! * [`bruteforce`]: exhaustive oracles for small graphs.
//! * [`suites`] and [`report`]: seeded experiments with JSON and CSV output.

pub mod error;
pub mod generators;
pub mod graph;
pub mod local_ec;
pub mod oracle;
pub mod overlay;
pub mod rng;
pub mod witness;
pub mod local_vc;
pub mod global_vc;
pub mod bruteforce;
pub mod tester;
pub mod report;
pub mod suites;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/graphs.md")]
    mod graphs {}
    #[doc = include_str!("../../../book/src/local-cuts.md")]
    mod local_cuts {}
    #[doc = include_str!("../../../book/src/split-graph.md")]
    mod split_graph {}
    #[doc = include_str!("../../../book/src/vertex-connectivity.md")]
    mod vertex_connectivity {}
    #[doc = include_str!("../../../book/src/testers.md")]
    mod testers {}
    #[doc = include_str!("../../../book/src/oracles.md")]
    mod oracles {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
}
