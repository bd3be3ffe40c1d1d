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

//! Runs every acceptance suite at full size and prints one line per
//! criterion. Exits non-zero when any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use localconn::suites::{run_suite, SuiteOptions, SUITES};

fn main() -> ExitCode {
    let only: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    let opts = SuiteOptions::default();
    let mut failed = 0;
    for (i, (name, what)) in SUITES.iter().enumerate() {
        if !only.is_empty() && !only.iter().any(|o| name.contains(o.as_str())) {
            continue;
        }
        let start = Instant::now();
        let line = match run_suite(name, &opts) {
            Ok(r) => {
                let pass = r.passed == Some(true);
                failed += usize::from(!pass);
                format!(
                    "{} criterion {:>2} {name}: {what} | {} | {:.1}s",
                    if pass { "PASS" } else { "FAIL" },
                    i + 1,
                    r.summary,
                    start.elapsed().as_secs_f64()
                )
            }
            Err(e) => {
                failed += 1;
                format!("FAIL criterion {:>2} {name}: error {e}", i + 1)
            }
        };
        println!("{line}");
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
