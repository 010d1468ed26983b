//! Context switches, waiting times and turnaround times.
//!
//! Two conventions are supported. `Paper` measures from tick 0, so waiting is
//! `completion - burst` and turnaround is `completion`; this is how the
//! published comparison tables were computed. `Standard` measures from each
//! process's arrival.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{Pid, ScheduleTrace, Tick};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricConvention {
    #[default]
    Paper,
    Standard,
}

impl MetricConvention {
    pub fn as_str(self) -> &'static str {
        match self {
            MetricConvention::Paper => "paper",
            MetricConvention::Standard => "standard",
        }
    }
}

impl fmt::Display for MetricConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MetricConvention {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "paper" => Ok(MetricConvention::Paper),
            "standard" => Ok(MetricConvention::Standard),
            other => Err(format!(
                "unknown convention `{other}` (expected paper or standard)"
            )),
        }
    }
}

/// An exact average, displayed with one fractional digit (half away from zero).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Average(Ratio<i64>);

impl fmt::Debug for Average {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self, self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid decimal `{0}`")]
pub struct ParseAverageError(String);

impl Average {
    pub fn new(sum: i64, count: usize) -> Self {
        assert!(count > 0, "average over zero items");
        Average(Ratio::new(sum, count as i64))
    }

    pub fn from_integer(value: i64) -> Self {
        Average(Ratio::from_integer(value))
    }

    pub fn ratio(&self) -> Ratio<i64> {
        self.0
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Value in tenths, rounded half away from zero.
    fn tenths(&self) -> i64 {
        let scaled = self.0 * Ratio::from_integer(10);
        let rounded = scaled.abs().round().to_integer();
        if scaled.is_negative() {
            -rounded
        } else {
            rounded
        }
    }
}

impl fmt::Display for Average {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = self.tenths();
        let sign = if t < 0 { "-" } else { "" };
        write!(f, "{sign}{}.{}", t.abs() / 10, t.abs() % 10)
    }
}

impl FromStr for Average {
    type Err = ParseAverageError;

    /// Parses a plain decimal such as `146.2`, `207` or `-3.25` exactly.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseAverageError(s.to_string());
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        let (int, frac) = body.split_once('.').unwrap_or((body, ""));
        if int.is_empty() || !int.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        if !frac.bytes().all(|b| b.is_ascii_digit()) || (body.contains('.') && frac.is_empty()) {
            return Err(err());
        }
        let digits: i64 = format!("{int}{frac}").parse().map_err(|_| err())?;
        let den = 10i64.checked_pow(frac.len() as u32).ok_or_else(err)?;
        let r = Ratio::new(digits, den);
        Ok(Average(if neg { -r } else { r }))
    }
}

impl Serialize for Average {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Average {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProcessMetrics {
    pub pid: Pid,
    pub waiting: i64,
    pub turnaround: i64,
    pub completion: Tick,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricsReport {
    pub policy_label: String,
    pub context_switches: usize,
    pub per_process: BTreeMap<Pid, ProcessMetrics>,
    pub avg_waiting: Average,
    pub avg_turnaround: Average,
    pub convention: MetricConvention,
    pub quantum_sequence: Vec<Tick>,
}

/// Number of dispatch boundaries: slices minus one. Back-to-back slices of the
/// same process still count.
pub fn context_switches(trace: &ScheduleTrace) -> usize {
    trace.slices.len().saturating_sub(1)
}

fn per_process(
    trace: &ScheduleTrace,
    convention: MetricConvention,
) -> impl Iterator<Item = ProcessMetrics> + '_ {
    trace.workload.processes().iter().map(move |p| {
        let completion = trace.completion[&p.pid];
        let origin = match convention {
            MetricConvention::Paper => 0,
            MetricConvention::Standard => p.arrival as i64,
        };
        let turnaround = completion as i64 - origin;
        ProcessMetrics {
            pid: p.pid,
            waiting: turnaround - p.burst as i64,
            turnaround,
            completion,
        }
    })
}

pub fn waiting_times(
    trace: &ScheduleTrace,
    convention: MetricConvention,
) -> (BTreeMap<Pid, i64>, Average) {
    let map: BTreeMap<_, _> = per_process(trace, convention)
        .map(|m| (m.pid, m.waiting))
        .collect();
    let avg = Average::new(map.values().sum(), map.len());
    (map, avg)
}

pub fn turnaround_times(
    trace: &ScheduleTrace,
    convention: MetricConvention,
) -> (BTreeMap<Pid, i64>, Average) {
    let map: BTreeMap<_, _> = per_process(trace, convention)
        .map(|m| (m.pid, m.turnaround))
        .collect();
    let avg = Average::new(map.values().sum(), map.len());
    (map, avg)
}

pub fn evaluate(trace: &ScheduleTrace, convention: MetricConvention) -> MetricsReport {
    let per_process: BTreeMap<_, _> = per_process(trace, convention).map(|m| (m.pid, m)).collect();
    let n = per_process.len();
    let waiting = per_process.values().map(|m| m.waiting).sum();
    let turnaround = per_process.values().map(|m| m.turnaround).sum();
    MetricsReport {
        policy_label: trace.policy_label.clone(),
        context_switches: context_switches(trace),
        per_process,
        avg_waiting: Average::new(waiting, n),
        avg_turnaround: Average::new(turnaround, n),
        convention,
        quantum_sequence: trace.quantum_sequence.clone(),
    }
}

/// One row of a side-by-side policy comparison.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComparisonRow {
    pub policy_label: String,
    pub quantum: String,
    pub context_switches: usize,
    pub avg_waiting: Average,
    pub avg_turnaround: Average,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompareError {
    #[error("cannot compare reports computed under different conventions ({0} and {1})")]
    MixedConventions(MetricConvention, MetricConvention),
}

pub fn quantum_description(sequence: &[Tick]) -> String {
    if sequence.is_empty() {
        "-".to_string()
    } else {
        sequence
            .iter()
            .map(Tick::to_string)
            .collect::<Vec<_>>()
            .join(",")
    }
}

pub fn compare(reports: &[MetricsReport]) -> Result<Vec<ComparisonRow>, CompareError> {
    if let Some(first) = reports.first() {
        if let Some(other) = reports.iter().find(|r| r.convention != first.convention) {
            return Err(CompareError::MixedConventions(
                first.convention,
                other.convention,
            ));
        }
    }
    Ok(reports
        .iter()
        .map(|r| ComparisonRow {
            policy_label: r.policy_label.clone(),
            quantum: quantum_description(&r.quantum_sequence),
            context_switches: r.context_switches,
            avg_waiting: r.avg_waiting,
            avg_turnaround: r.avg_turnaround,
        })
        .collect())
}

/// Renders rows in the layout of the published comparison tables: one column
/// per policy, one line per metric.
pub fn format_comparison(rows: &[ComparisonRow]) -> String {
    let header: Vec<String> = std::iter::once("algorithms".to_string())
        .chain(rows.iter().map(|r| r.policy_label.clone()))
        .collect();
    let lines: Vec<Vec<String>> = vec![
        header,
        std::iter::once("q_t".to_string())
            .chain(rows.iter().map(|r| r.quantum.clone()))
            .collect(),
        std::iter::once("CS".to_string())
            .chain(rows.iter().map(|r| r.context_switches.to_string()))
            .collect(),
        std::iter::once("a_wt".to_string())
            .chain(rows.iter().map(|r| r.avg_waiting.to_string()))
            .collect(),
        std::iter::once("a_tat".to_string())
            .chain(rows.iter().map(|r| r.avg_turnaround.to_string()))
            .collect(),
    ];
    let cols = lines[0].len();
    let widths: Vec<usize> = (0..cols)
        .map(|c| lines.iter().map(|l| l[c].len()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for line in &lines {
        let cells: Vec<String> = line
            .iter()
            .zip(&widths)
            .map(|(cell, w)| format!("{cell:<w$}"))
            .collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out
}
