//! Re-runs the six published RR vs. DQRRR comparisons on their embedded
//! workloads and audits every printed cell.
//!
//! Each printed value is either expected to reproduce exactly, or is a
//! pre-registered erratum carrying the value an independent hand trace
//! produced. A cell that neither matches its printed value nor its registered
//! oracle value is a regression.

use std::fmt::{self, Write as _};

use serde::Serialize;
use thiserror::Error;

use crate::metrics::{evaluate, quantum_description, Average, MetricConvention};
use crate::model::Tick;
use crate::policies::{schedule, PolicyConfig, PolicyKind, DEFAULT_RR_QUANTUM};
use crate::workload_io::{embedded_workload, ExportDocument};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum CellValue {
    Count(usize),
    Avg(Average),
    Quanta(Vec<Tick>),
}

impl fmt::Display for CellValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CellValue::Count(n) => write!(f, "{n}"),
            CellValue::Avg(a) => write!(f, "{a}"),
            CellValue::Quanta(q) => f.write_str(&quantum_description(q)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Quantum,
    ContextSwitches,
    AvgWaiting,
    AvgTurnaround,
}

impl Metric {
    pub fn label(self) -> &'static str {
        match self {
            Metric::Quantum => "q_t",
            Metric::ContextSwitches => "CS",
            Metric::AvgWaiting => "a_wt",
            Metric::AvgTurnaround => "a_tat",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpectedCell {
    pub metric: Metric,
    pub printed: CellValue,
    /// Set for registered errata: the value the algorithm actually yields.
    pub oracle: Option<CellValue>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EntryStatus {
    Verified,
    Erratum,
}

/// Printed results for one policy column of one table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpectedTableEntry {
    pub table_id: &'static str,
    pub policy: PolicyKind,
    pub cells: Vec<ExpectedCell>,
}

impl ExpectedTableEntry {
    pub fn status(&self) -> EntryStatus {
        if self.cells.iter().any(|c| c.oracle.is_some()) {
            EntryStatus::Erratum
        } else {
            EntryStatus::Verified
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Match,
    /// The paper value is wrong; `computed` equals the registered oracle value.
    Erratum,
    /// Neither the printed value nor the registered oracle value was reproduced.
    Regression {
        expected: CellValue,
    },
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Match => "match",
            Verdict::Erratum => "erratum",
            Verdict::Regression { .. } => "MISMATCH",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CellReport {
    pub metric: Metric,
    pub printed: CellValue,
    pub computed: CellValue,
    #[serde(flatten)]
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PolicyRun {
    #[serde(flatten)]
    pub result: ExportDocument,
    pub status: EntryStatus,
    pub verdicts: Vec<CellReport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableReport {
    pub table_id: String,
    pub workload_id: String,
    pub runs: Vec<PolicyRun>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReproduceError {
    #[error("unknown table `{0}` (expected one of 4.2, 4.4, 4.6, 4.8, 4.10, 4.12)")]
    UnknownTable(String),
}

/// Table id and the embedded workload it was computed from.
pub const TABLES: &[(&str, &str)] = &[
    ("4.2", "t4.1"),
    ("4.4", "t4.3"),
    ("4.6", "t4.5"),
    ("4.8", "t4.7"),
    ("4.10", "t4.9"),
    ("4.12", "t4.11"),
];

fn avg(s: &str) -> CellValue {
    CellValue::Avg(s.parse().expect("valid decimal literal"))
}

fn ok(metric: Metric, printed: CellValue) -> ExpectedCell {
    ExpectedCell {
        metric,
        printed,
        oracle: None,
    }
}

fn erratum(metric: Metric, printed: CellValue, oracle: CellValue) -> ExpectedCell {
    ExpectedCell {
        metric,
        printed,
        oracle: Some(oracle),
    }
}

fn rr_entry(table_id: &'static str, cells: [ExpectedCell; 3]) -> ExpectedTableEntry {
    let mut all = vec![ok(
        Metric::Quantum,
        CellValue::Quanta(vec![DEFAULT_RR_QUANTUM]),
    )];
    all.extend(cells);
    ExpectedTableEntry {
        table_id,
        policy: PolicyKind::Rr,
        cells: all,
    }
}

fn dq_entry(table_id: &'static str, cells: [ExpectedCell; 4]) -> ExpectedTableEntry {
    ExpectedTableEntry {
        table_id,
        policy: PolicyKind::Dqrrr,
        cells: cells.into(),
    }
}

/// Every printed RR and DQRRR cell, with registered errata.
pub fn expected_entries() -> Vec<ExpectedTableEntry> {
    use CellValue::{Count, Quanta};
    use Metric::*;
    vec![
        rr_entry(
            "4.2",
            [
                ok(ContextSwitches, Count(13)),
                ok(AvgWaiting, avg("146.2")),
                ok(AvgTurnaround, avg("207")),
            ],
        ),
        dq_entry(
            "4.2",
            [
                ok(Quantum, Quanta(vec![50, 41, 6])),
                ok(ContextSwitches, Count(7)),
                ok(AvgWaiting, avg("134.4")),
                ok(AvgTurnaround, avg("195.2")),
            ],
        ),
        rr_entry(
            "4.4",
            [
                ok(ContextSwitches, Count(15)),
                ok(AvgWaiting, avg("214")),
                ok(AvgTurnaround, avg("281")),
            ],
        ),
        dq_entry(
            "4.4",
            [
                ok(Quantum, Quanta(vec![60, 37, 8])),
                ok(ContextSwitches, Count(7)),
                ok(AvgWaiting, avg("152.4")),
                ok(AvgTurnaround, avg("219.4")),
            ],
        ),
        rr_entry(
            "4.6",
            [
                ok(ContextSwitches, Count(14)),
                erratum(AvgWaiting, avg("173.4"), avg("193.4")),
                ok(AvgTurnaround, avg("256.8")),
            ],
        ),
        dq_entry(
            "4.6",
            [
                erratum(Quantum, Quanta(vec![80, 11, 1]), Quanta(vec![70, 16, 6])),
                ok(ContextSwitches, Count(7)),
                erratum(AvgWaiting, avg("150.2"), avg("155.2")),
                erratum(AvgTurnaround, avg("215.6"), avg("218.6")),
            ],
        ),
        rr_entry(
            "4.8",
            [
                ok(ContextSwitches, Count(14)),
                ok(AvgWaiting, avg("139.8")),
                erratum(AvgTurnaround, avg("199.4"), avg("200.8")),
            ],
        ),
        dq_entry(
            "4.8",
            [
                ok(Quantum, Quanta(vec![28, 66, 30, 14])),
                ok(ContextSwitches, Count(7)),
                ok(AvgWaiting, avg("112.2")),
                ok(AvgTurnaround, avg("173.2")),
            ],
        ),
        rr_entry(
            "4.10",
            [
                ok(ContextSwitches, Count(13)),
                erratum(AvgWaiting, avg("216.8"), avg("212.6")),
                erratum(AvgTurnaround, avg("280.2"), avg("274.6")),
            ],
        ),
        dq_entry(
            "4.10",
            [
                ok(Quantum, Quanta(vec![80, 57, 11, 4])),
                ok(ContextSwitches, Count(7)),
                ok(AvgWaiting, avg("147.8")),
                ok(AvgTurnaround, avg("209.8")),
            ],
        ),
        rr_entry(
            "4.12",
            [
                ok(ContextSwitches, Count(12)),
                ok(AvgWaiting, avg("149.4")),
                ok(AvgTurnaround, avg("199.2")),
            ],
        ),
        dq_entry(
            "4.12",
            [
                ok(Quantum, Quanta(vec![26, 55, 21, 6])),
                ok(ContextSwitches, Count(7)),
                ok(AvgWaiting, avg("95.6")),
                ok(AvgTurnaround, avg("145.4")),
            ],
        ),
    ]
}

fn judge(cell: &ExpectedCell, computed: &CellValue) -> Verdict {
    match &cell.oracle {
        None if *computed == cell.printed => Verdict::Match,
        None => Verdict::Regression {
            expected: cell.printed.clone(),
        },
        Some(oracle) if computed == oracle => Verdict::Erratum,
        Some(oracle) => Verdict::Regression {
            expected: oracle.clone(),
        },
    }
}

pub fn reproduce_table(table_id: &str) -> Result<TableReport, ReproduceError> {
    let (table_id, workload_id) = TABLES
        .iter()
        .find(|(id, _)| *id == table_id)
        .ok_or_else(|| ReproduceError::UnknownTable(table_id.to_string()))?;
    let workload = embedded_workload(workload_id).expect("embedded workload exists");

    let runs = expected_entries()
        .into_iter()
        .filter(|e| e.table_id == *table_id)
        .map(|entry| {
            let trace = schedule(&workload, &PolicyConfig::new(entry.policy));
            let metrics = evaluate(&trace, MetricConvention::Paper);
            let verdicts = entry
                .cells
                .iter()
                .map(|cell| {
                    let computed = match cell.metric {
                        Metric::Quantum => CellValue::Quanta(metrics.quantum_sequence.clone()),
                        Metric::ContextSwitches => CellValue::Count(metrics.context_switches),
                        Metric::AvgWaiting => CellValue::Avg(metrics.avg_waiting),
                        Metric::AvgTurnaround => CellValue::Avg(metrics.avg_turnaround),
                    };
                    CellReport {
                        metric: cell.metric,
                        printed: cell.printed.clone(),
                        verdict: judge(cell, &computed),
                        computed,
                    }
                })
                .collect();
            PolicyRun {
                result: ExportDocument::new(&trace, &metrics),
                status: entry.status(),
                verdicts,
            }
        })
        .collect();

    Ok(TableReport {
        table_id: table_id.to_string(),
        workload_id: workload_id.to_string(),
        runs,
    })
}

pub fn reproduce_all() -> Vec<TableReport> {
    TABLES
        .iter()
        .map(|(id, _)| reproduce_table(id).expect("known table"))
        .collect()
}

impl TableReport {
    pub fn regressions(&self) -> impl Iterator<Item = (&PolicyRun, &CellReport)> {
        self.runs.iter().flat_map(|run| {
            run.verdicts
                .iter()
                .filter(|c| matches!(c.verdict, Verdict::Regression { .. }))
                .map(move |c| (run, c))
        })
    }

    pub fn is_clean(&self) -> bool {
        self.regressions().next().is_none()
    }

    pub fn cell(&self, policy: PolicyKind, metric: Metric) -> Option<&CellReport> {
        let label = PolicyConfig::new(policy).label();
        self.runs
            .iter()
            .find(|r| r.result.policy == label)?
            .verdicts
            .iter()
            .find(|c| c.metric == metric)
    }

    pub fn render_text(&self) -> String {
        let mut rows = vec![[
            "policy".to_string(),
            "cell".to_string(),
            "printed".to_string(),
            "computed".to_string(),
            "verdict".to_string(),
        ]];
        for run in &self.runs {
            for c in &run.verdicts {
                let verdict = match &c.verdict {
                    Verdict::Regression { expected } => format!("MISMATCH (expected {expected})"),
                    v => v.label().to_string(),
                };
                rows.push([
                    run.result.policy.clone(),
                    c.metric.label().to_string(),
                    c.printed.to_string(),
                    c.computed.to_string(),
                    verdict,
                ]);
            }
        }
        let widths: Vec<usize> = (0..5)
            .map(|i| rows.iter().map(|r| r[i].len()).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        let _ = writeln!(
            out,
            "Table {} (workload {}, paper convention, RR quantum {DEFAULT_RR_QUANTUM})",
            self.table_id, self.workload_id
        );
        for row in rows {
            let line: Vec<String> = row
                .iter()
                .zip(&widths)
                .map(|(cell, w)| format!("{cell:<w$}"))
                .collect();
            out.push_str(line.join("  ").trim_end());
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verified_entries_have_no_oracle_values() {
        for e in expected_entries() {
            if e.status() == EntryStatus::Verified {
                assert!(e.cells.iter().all(|c| c.oracle.is_none()));
            }
        }
    }

    #[test]
    fn every_table_is_clean() {
        for report in reproduce_all() {
            assert!(report.is_clean(), "{}", report.render_text());
        }
    }

    #[test]
    fn decreasing_table_all_match() {
        let r = reproduce_table("4.4").unwrap();
        assert!(r
            .runs
            .iter()
            .flat_map(|run| &run.verdicts)
            .all(|c| c.verdict == Verdict::Match));
    }

    #[test]
    fn unknown_table() {
        assert_eq!(
            reproduce_table("9.9").unwrap_err(),
            ReproduceError::UnknownTable("9.9".into())
        );
    }

    #[test]
    fn judge_flags_regression_against_oracle() {
        let cell = erratum(Metric::AvgWaiting, avg("1.0"), avg("2.0"));
        assert_eq!(judge(&cell, &avg("2.0")), Verdict::Erratum);
        assert_eq!(
            judge(&cell, &avg("1.0")),
            Verdict::Regression {
                expected: avg("2.0")
            }
        );
    }

    #[test]
    fn json_carries_verdicts() {
        let r = reproduce_table("4.8").unwrap();
        let v = serde_json::to_value(&r).unwrap();
        let rr = &v["runs"][0];
        assert_eq!(rr["policy"], "RR(q=25)");
        assert_eq!(rr["verdicts"][3]["metric"], "avg_turnaround");
        assert_eq!(rr["verdicts"][3]["verdict"], "erratum");
        assert_eq!(rr["verdicts"][3]["printed"], "199.4");
        assert_eq!(rr["verdicts"][3]["computed"], "200.8");
        assert_eq!(
            v["runs"][1]["quantum_sequence"],
            serde_json::json!([28, 66, 30, 14])
        );
    }
}
