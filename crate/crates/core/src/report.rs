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

//! Run reports and plot data.
//!
//! A [`RunReport`] holds one record per trial plus aggregates. Records
//! contain nothing time-dependent, so re-running with the same seed
//! reproduces them exactly; wall times are kept alongside, keyed by trial
//! index.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub index: usize,
    pub instance: String,
    pub n: usize,
    pub k: usize,
    pub eps: f64,
    pub seed: u64,
    pub outcome: String,
    pub queries: u64,
    /// Whether the trial satisfied the property being measured.
    pub ok: bool,
    #[serde(default, skip_serializing_if = "serde_json::Value::is_null")]
    pub detail: serde_json::Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub seed: u64,
    pub passed: Option<bool>,
    pub summary: String,
    pub trials: Vec<TrialRecord>,
    /// Wall time of each trial in milliseconds, by index.
    pub wall_ms: Vec<f64>,
    pub aggregates: BTreeMap<String, f64>,
    pub constants: BTreeMap<String, f64>,
}

impl RunReport {
    pub fn new(command: impl Into<String>, seed: u64) -> Self {
        RunReport {
            command: command.into(),
            seed,
            passed: None,
            summary: String::new(),
            trials: Vec::new(),
            wall_ms: Vec::new(),
            aggregates: BTreeMap::new(),
            constants: default_constants(),
        }
    }

    pub fn push(&mut self, mut trial: TrialRecord, wall_ms: f64) {
        trial.index = self.trials.len();
        self.trials.push(trial);
        self.wall_ms.push(wall_ms);
    }

    pub fn ok_rate(&self) -> f64 {
        if self.trials.is_empty() {
            return 0.0;
        }
        self.trials.iter().filter(|t| t.ok).count() as f64 / self.trials.len() as f64
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

/// Named constants of the algorithms, recorded in every report.
pub fn default_constants() -> BTreeMap<String, f64> {
    [
        ("mark_factor", crate::local_ec::MARK_FACTOR as f64),
        ("stop_denominator", crate::local_ec::STOP_DENOMINATOR as f64),
        ("volume_factor", crate::local_ec::VOLUME_FACTOR as f64),
        ("vertex_precondition_factor", crate::local_vc::VC_PRECONDITION_FACTOR as f64),
        ("c1", 8.0),
        ("c2", 12.0),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect()
}

/// Nearest-rank percentile of an unsorted sample; `NaN` when empty.
pub fn percentile(values: &[f64], p: f64) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let rank = ((p / 100.0) * v.len() as f64).ceil().max(1.0) as usize;
    v[rank.min(v.len()) - 1]
}

const COLUMNS: &str = "n,k,eps,queries_p50,queries_p95,wall_ms_p50";

fn rows(report: &RunReport, prefix: Option<&str>, out: &mut String) {
    let mut groups: Vec<((usize, usize, u64), Vec<usize>)> = Vec::new();
    for (i, t) in report.trials.iter().enumerate() {
        let key = (t.n, t.k, t.eps.to_bits());
        match groups.iter_mut().find(|(k, _)| *k == key) {
            Some((_, idx)) => idx.push(i),
            None => groups.push((key, vec![i])),
        }
    }
    for ((n, k, eps), idx) in groups {
        let queries: Vec<f64> = idx.iter().map(|&i| report.trials[i].queries as f64).collect();
        let wall: Vec<f64> = idx
            .iter()
            .map(|&i| report.wall_ms.get(i).copied().unwrap_or(f64::NAN))
            .collect();
        if let Some(p) = prefix {
            let _ = write!(out, "{p},");
        }
        let _ = writeln!(
            out,
            "{n},{k},{},{},{},{:.3}",
            f64::from_bits(eps),
            percentile(&queries, 50.0),
            percentile(&queries, 95.0),
            percentile(&wall, 50.0)
        );
    }
}

/// CSV with one row per `(n, k, eps)` group of trials.
pub fn emit_plot_data(report: &RunReport) -> String {
    let mut out = format!("{COLUMNS}\n");
    rows(report, None, &mut out);
    out
}

/// Several reports in one CSV, with a leading `suite` column holding each
/// report's command.
pub fn emit_plot_data_merged(reports: &[RunReport]) -> String {
    let mut out = format!("suite,{COLUMNS}\n");
    for r in reports {
        rows(r, Some(&r.command), &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial(n: usize, queries: u64) -> TrialRecord {
        TrialRecord {
            index: 0,
            instance: "x".into(),
            n,
            k: 4,
            eps: 0.25,
            seed: 1,
            outcome: "cut".into(),
            queries,
            ok: true,
            detail: serde_json::Value::Null,
        }
    }

    #[test]
    fn empty_report_is_header_only() {
        let r = RunReport::new("scaling", 0);
        assert_eq!(emit_plot_data(&r), "n,k,eps,queries_p50,queries_p95,wall_ms_p50\n");
    }

    #[test]
    fn groups_and_percentiles() {
        let mut r = RunReport::new("scaling", 0);
        for q in 1..=20 {
            r.push(trial(100, q), q as f64);
        }
        r.push(trial(200, 7), 3.0);
        let csv = emit_plot_data(&r);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[1], "100,4,0.25,10,19,10.000");
        assert_eq!(lines[2], "200,4,0.25,7,7,3.000");
    }

    #[test]
    fn merged_has_suite_column() {
        let mut a = RunReport::new("a", 0);
        a.push(trial(10, 1), 1.0);
        let mut b = RunReport::new("b", 0);
        b.push(trial(20, 2), 1.0);
        let csv = emit_plot_data_merged(&[a, b]);
        assert_eq!(csv.lines().count(), 3);
        assert!(csv.lines().nth(2).unwrap().starts_with("b,20,"));
    }

    #[test]
    fn json_round_trip() {
        let mut r = RunReport::new("a", 3);
        r.push(trial(10, 1), 1.0);
        let back: RunReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }
}
