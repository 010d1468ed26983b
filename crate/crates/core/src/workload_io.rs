//! Workload files, the synthetic workload generator, the embedded reference
//! workloads and result export.
//!
//! Workload CSV is a mandatory `pid,arrival,burst` header followed by one
//! row of three base-10 integers per process.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::metrics::{Average, MetricConvention, MetricsReport, ProcessMetrics};
use crate::model::{
    build_workload, ModelError, Pid, ProcessSpec, Provenance, ScheduleTrace, Tick, TimeSlice,
    Workload,
};

pub const CSV_HEADER: &str = "pid,arrival,burst";

/// Identifier of the pseudo-random source, recorded in generated provenance.
pub const GENERATOR_ALGORITHM: &str = "chacha8/rand-0.8-uniform-inclusive";

#[derive(Debug, Error)]
pub enum IoError {
    #[error("line {line}: expected header `{CSV_HEADER}`, found `{found}`")]
    Header { line: usize, found: String },
    #[error("line {line}: expected 3 fields, found {found}")]
    FieldCount { line: usize, found: usize },
    #[error("line {line}: `{field}` is not an integer")]
    NotInteger { line: usize, field: String },
    #[error("line {line}: blank line")]
    BlankLine { line: usize },
    #[error("line {line}: {source}")]
    Invalid { line: usize, source: ModelError },
    #[error("{0}")]
    Model(#[from] ModelError),
    #[error("unknown embedded workload `{0}`")]
    UnknownTable(String),
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("invalid generator parameters: {0}")]
    Params(String),
}

/// Parses workload CSV. `provenance` is attached to the result as-is.
pub fn parse_workload(text: &str, provenance: Provenance) -> Result<Workload, IoError> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let body = text.strip_suffix('\n').unwrap_or(text);
    let mut lines = body.split('\n').map(|l| l.strip_suffix('\r').unwrap_or(l));

    let header = lines.next().unwrap_or("");
    if header.trim() != CSV_HEADER {
        return Err(IoError::Header {
            line: 1,
            found: header.to_string(),
        });
    }

    let mut specs = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (idx, raw) in lines.enumerate() {
        let line = idx + 2;
        if raw.trim().is_empty() {
            return Err(IoError::BlankLine { line });
        }
        let fields: Vec<&str> = raw.split(',').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(IoError::FieldCount {
                line,
                found: fields.len(),
            });
        }
        let mut values = [0i64; 3];
        for (slot, field) in values.iter_mut().zip(&fields) {
            *slot = field.parse().map_err(|_| IoError::NotInteger {
                line,
                field: field.to_string(),
            })?;
        }
        let spec = ProcessSpec::from_signed(values[0], values[1], values[2])
            .map_err(|source| IoError::Invalid { line, source })?;
        if !seen.insert(spec.pid) {
            return Err(IoError::Invalid {
                line,
                source: ModelError::DuplicatePid(spec.pid),
            });
        }
        specs.push(spec);
    }
    Ok(build_workload(specs, provenance)?)
}

pub fn serialize_workload(workload: &Workload) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for p in workload.processes() {
        let _ = writeln!(out, "{},{},{}", p.pid.get(), p.arrival, p.burst);
    }
    out
}

pub fn read_workload_file(path: &str) -> Result<Workload, IoError> {
    let text = std::fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.to_string(),
        source,
    })?;
    parse_workload(
        &text,
        Provenance::File {
            path: path.to_string(),
        },
    )
}

/// Resolves an embedded id such as `t4.1`, or else reads `source` as a file path.
pub fn load_workload(source: &str) -> Result<Workload, IoError> {
    if embedded_ids().any(|id| id == source) {
        return embedded_workload(source);
    }
    read_workload_file(source)
}

/// `(id, arrivals, bursts)` for the six reference data sets.
const EMBEDDED: &[(&str, [Tick; 5], [Tick; 5])] = &[
    ("t4.1", [0, 0, 0, 0, 0], [30, 42, 50, 85, 97]),
    ("t4.3", [0, 0, 0, 0, 0], [105, 90, 60, 45, 35]),
    ("t4.5", [0, 0, 0, 0, 0], [92, 70, 35, 40, 80]),
    ("t4.7", [0, 2, 6, 6, 8], [28, 35, 50, 82, 110]),
    ("t4.9", [0, 2, 3, 4, 5], [80, 72, 65, 50, 43]),
    ("t4.11", [0, 1, 2, 5, 7], [26, 82, 70, 31, 40]),
];

pub fn embedded_ids() -> impl Iterator<Item = &'static str> {
    EMBEDDED.iter().map(|(id, _, _)| *id)
}

pub fn embedded_workload(id: &str) -> Result<Workload, IoError> {
    let (id, arrivals, bursts) = EMBEDDED
        .iter()
        .find(|(known, _, _)| *known == id)
        .ok_or_else(|| IoError::UnknownTable(id.to_string()))?;
    let specs = arrivals
        .iter()
        .zip(bursts)
        .enumerate()
        .map(|(i, (&a, &b))| ProcessSpec::new(Pid::new(i as u32 + 1)?, a, b))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(build_workload(
        specs,
        Provenance::PaperTable { id: id.to_string() },
    )?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BurstOrder {
    Increasing,
    Decreasing,
    Random,
}

impl FromStr for BurstOrder {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "increasing" => Ok(BurstOrder::Increasing),
            "decreasing" => Ok(BurstOrder::Decreasing),
            "random" => Ok(BurstOrder::Random),
            other => Err(format!(
                "unknown order `{other}` (expected increasing, decreasing or random)"
            )),
        }
    }
}

impl fmt::Display for BurstOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BurstOrder::Increasing => "increasing",
            BurstOrder::Decreasing => "decreasing",
            BurstOrder::Random => "random",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ArrivalMode {
    AllZero,
    /// Arrivals start at 0 and each gap to the next is drawn from `[0, max_gap]`.
    Staggered {
        max_gap: Tick,
    },
}

impl FromStr for ArrivalMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "zero" {
            return Ok(ArrivalMode::AllZero);
        }
        let gap = s.strip_prefix("staggered:").ok_or_else(|| {
            format!("unknown arrival mode `{s}` (expected zero or staggered:GAP)")
        })?;
        let max_gap: Tick = gap
            .parse()
            .map_err(|_| format!("staggered gap `{gap}` is not an integer"))?;
        if max_gap == 0 {
            return Err("staggered gap must be >= 1".to_string());
        }
        Ok(ArrivalMode::Staggered { max_gap })
    }
}

impl fmt::Display for ArrivalMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArrivalMode::AllZero => f.write_str("zero"),
            ArrivalMode::Staggered { max_gap } => write!(f, "staggered:{max_gap}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneratorParams {
    order: BurstOrder,
    count: usize,
    burst_lo: Tick,
    burst_hi: Tick,
    arrivals: ArrivalMode,
    seed: u64,
}

impl GeneratorParams {
    pub fn new(
        order: BurstOrder,
        count: usize,
        burst_range: (Tick, Tick),
        arrivals: ArrivalMode,
        seed: u64,
    ) -> Result<Self, IoError> {
        let (lo, hi) = burst_range;
        if count == 0 {
            return Err(IoError::Params("process count must be >= 1".into()));
        }
        if count > u32::MAX as usize {
            return Err(IoError::Params("process count too large".into()));
        }
        if lo == 0 {
            return Err(IoError::Params(
                "burst range lower bound must be >= 1".into(),
            ));
        }
        if lo > hi {
            return Err(IoError::Params(format!("empty burst range {lo}:{hi}")));
        }
        if let ArrivalMode::Staggered { max_gap: 0 } = arrivals {
            return Err(IoError::Params("staggered gap must be >= 1".into()));
        }
        Ok(GeneratorParams {
            order,
            count,
            burst_lo: lo,
            burst_hi: hi,
            arrivals,
            seed,
        })
    }

    pub fn order(&self) -> BurstOrder {
        self.order
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn burst_range(&self) -> (Tick, Tick) {
        (self.burst_lo, self.burst_hi)
    }

    pub fn arrivals(&self) -> ArrivalMode {
        self.arrivals
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// Parses `lo:hi`.
pub fn parse_burst_range(s: &str) -> Result<(Tick, Tick), String> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| format!("burst range `{s}` must look like LO:HI"))?;
    let lo = lo
        .parse()
        .map_err(|_| format!("burst bound `{lo}` is not an integer"))?;
    let hi = hi
        .parse()
        .map_err(|_| format!("burst bound `{hi}` is not an integer"))?;
    Ok((lo, hi))
}

/// Draws a workload from `params`. Bursts are uniform over the inclusive
/// range, then sorted for the increasing/decreasing orders.
pub fn generate_workload(params: &GeneratorParams) -> Workload {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut bursts: Vec<Tick> = (0..params.count)
        .map(|_| rng.gen_range(params.burst_lo..=params.burst_hi))
        .collect();
    match params.order {
        BurstOrder::Increasing => bursts.sort_unstable(),
        BurstOrder::Decreasing => bursts.sort_unstable_by(|a, b| b.cmp(a)),
        BurstOrder::Random => {}
    }
    let mut clock = 0;
    let specs = bursts
        .into_iter()
        .enumerate()
        .map(|(i, burst)| {
            let arrival = match params.arrivals {
                ArrivalMode::AllZero => 0,
                ArrivalMode::Staggered { max_gap } => {
                    if i > 0 {
                        clock += rng.gen_range(0..=max_gap);
                    }
                    clock
                }
            };
            ProcessSpec {
                pid: Pid::new(i as u32 + 1).expect("pids start at 1"),
                arrival,
                burst,
            }
        })
        .collect();
    let provenance = Provenance::Generated {
        params: format!(
            "order={} n={} burst={}:{} arrivals={}",
            params.order, params.count, params.burst_lo, params.burst_hi, params.arrivals
        ),
        seed: params.seed,
        algorithm: GENERATOR_ALGORITHM.to_string(),
    };
    build_workload(specs, provenance).expect("generator output is valid")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Json,
    Csv,
}

impl FromStr for ExportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(ExportFormat::Json),
            "csv" => Ok(ExportFormat::Csv),
            other => Err(format!("unknown format `{other}` (expected json or csv)")),
        }
    }
}

/// The JSON export document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExportDocument {
    pub workload: Workload,
    pub policy: String,
    pub convention: MetricConvention,
    pub quantum_sequence: Vec<Tick>,
    pub slices: Vec<TimeSlice>,
    pub per_process: Vec<ProcessMetrics>,
    pub avg_waiting: Average,
    pub avg_turnaround: Average,
    pub context_switches: usize,
}

impl ExportDocument {
    pub fn new(trace: &ScheduleTrace, report: &MetricsReport) -> Self {
        ExportDocument {
            workload: trace.workload.clone(),
            policy: trace.policy_label.clone(),
            convention: report.convention,
            quantum_sequence: trace.quantum_sequence.clone(),
            slices: trace.slices.clone(),
            per_process: report.per_process.values().copied().collect(),
            avg_waiting: report.avg_waiting,
            avg_turnaround: report.avg_turnaround,
            context_switches: report.context_switches,
        }
    }
}

/// CSV export. Every row has the same columns; `record` is `slice`,
/// `metrics` (one per process) or `summary`.
const EXPORT_CSV_HEADER: &str =
    "record,pid,start,end,waiting,turnaround,completion,context_switches,avg_waiting,avg_turnaround,quantum_sequence,convention,policy,provenance";

pub fn export_results(
    trace: &ScheduleTrace,
    report: &MetricsReport,
    format: ExportFormat,
) -> String {
    match format {
        ExportFormat::Json => {
            let doc = ExportDocument::new(trace, report);
            let mut s = serde_json::to_string_pretty(&doc).expect("export document serializes");
            s.push('\n');
            s
        }
        ExportFormat::Csv => export_csv(trace, report),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn export_csv(trace: &ScheduleTrace, report: &MetricsReport) -> String {
    let mut out = String::from(EXPORT_CSV_HEADER);
    out.push('\n');
    for s in &trace.slices {
        let _ = writeln!(out, "slice,{},{},{},,,,,,,,,,", s.pid.get(), s.start, s.end);
    }
    for m in report.per_process.values() {
        let _ = writeln!(
            out,
            "metrics,{},,,{},{},{},,,,,,,",
            m.pid.get(),
            m.waiting,
            m.turnaround,
            m.completion
        );
    }
    let quanta: Vec<String> = trace.quantum_sequence.iter().map(Tick::to_string).collect();
    let _ = writeln!(
        out,
        "summary,,,,,,,{},{},{},{},{},{},{}",
        report.context_switches,
        report.avg_waiting,
        report.avg_turnaround,
        csv_field(&quanta.join(" ")),
        report.convention,
        csv_field(&trace.policy_label),
        csv_field(&trace.workload.provenance().to_string()),
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::evaluate;
    use crate::policies::{schedule, PolicyConfig};

    #[test]
    fn parses_illustration_workload() {
        let w = parse_workload(
            "pid,arrival,burst\n1,0,21\n2,0,105\n3,0,12\n4,0,55\n",
            Provenance::Inline,
        )
        .unwrap();
        let bursts: Vec<_> = w.processes().iter().map(|p| p.burst).collect();
        assert_eq!(bursts, vec![21, 105, 12, 55]);
    }

    #[test]
    fn parses_single_row_without_trailing_newline() {
        let w = parse_workload("pid,arrival,burst\n1,0,5", Provenance::Inline).unwrap();
        assert_eq!(w.len(), 1);
        let w = parse_workload("pid,arrival,burst\r\n1,0,5\r\n", Provenance::Inline).unwrap();
        assert_eq!(w.processes()[0].burst, 5);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = parse_workload("pid,arrival,burst\n1,0,0\n", Provenance::Inline).unwrap_err();
        assert_eq!(err.to_string(), "line 2: P1: burst must be >= 1, got 0");

        let err = parse_workload("pid,burst\n1,0\n", Provenance::Inline).unwrap_err();
        assert!(matches!(err, IoError::Header { line: 1, .. }));

        let err =
            parse_workload("pid,arrival,burst\n1,0,3\n2,x,4\n", Provenance::Inline).unwrap_err();
        assert!(matches!(err, IoError::NotInteger { line: 3, .. }));

        let err = parse_workload("pid,arrival,burst\n1,-1,3\n", Provenance::Inline).unwrap_err();
        assert!(matches!(
            err,
            IoError::Invalid {
                line: 2,
                source: ModelError::NegativeArrival { .. }
            }
        ));

        let err =
            parse_workload("pid,arrival,burst\n1,0,3\n1,0,4\n", Provenance::Inline).unwrap_err();
        assert!(matches!(
            err,
            IoError::Invalid {
                line: 3,
                source: ModelError::DuplicatePid(_)
            }
        ));

        let err =
            parse_workload("pid,arrival,burst\n1,0,3\n\n2,0,4\n", Provenance::Inline).unwrap_err();
        assert!(matches!(err, IoError::BlankLine { line: 3 }));

        let err = parse_workload("pid,arrival,burst\n1,0\n", Provenance::Inline).unwrap_err();
        assert!(matches!(err, IoError::FieldCount { line: 2, found: 2 }));

        let err = parse_workload("pid,arrival,burst\n", Provenance::Inline).unwrap_err();
        assert!(matches!(err, IoError::Model(ModelError::EmptyWorkload)));
    }

    #[test]
    fn embedded_tables() {
        assert_eq!(embedded_ids().count(), 6);
        let w = embedded_workload("t4.7").unwrap();
        let arrivals: Vec<_> = w.processes().iter().map(|p| p.arrival).collect();
        assert_eq!(arrivals, vec![0, 2, 6, 6, 8]);
        assert!(matches!(
            embedded_workload("t9.9"),
            Err(IoError::UnknownTable(_))
        ));
    }

    #[test]
    fn generator_postconditions() {
        let p = GeneratorParams::new(BurstOrder::Increasing, 5, (1, 100), ArrivalMode::AllZero, 7)
            .unwrap();
        let w = generate_workload(&p);
        assert_eq!(w.len(), 5);
        assert!(w.processes().iter().all(|p| p.arrival == 0));
        assert!(w.processes().windows(2).all(|w| w[0].burst <= w[1].burst));

        let p = GeneratorParams::new(BurstOrder::Decreasing, 1, (10, 10), ArrivalMode::AllZero, 3)
            .unwrap();
        assert_eq!(generate_workload(&p).processes()[0].burst, 10);

        let p = GeneratorParams::new(
            BurstOrder::Random,
            5,
            (26, 110),
            ArrivalMode::Staggered { max_gap: 3 },
            11,
        )
        .unwrap();
        let w = generate_workload(&p);
        assert_eq!(w.processes()[0].arrival, 0);
        assert!(w
            .processes()
            .windows(2)
            .all(|w| w[0].arrival <= w[1].arrival && w[1].arrival - w[0].arrival <= 3));
        assert!(w.processes().iter().all(|p| (26..=110).contains(&p.burst)));
    }

    #[test]
    fn generator_rejects_bad_params() {
        assert!(
            GeneratorParams::new(BurstOrder::Random, 0, (1, 5), ArrivalMode::AllZero, 0).is_err()
        );
        assert!(
            GeneratorParams::new(BurstOrder::Random, 3, (6, 5), ArrivalMode::AllZero, 0).is_err()
        );
        assert!(
            GeneratorParams::new(BurstOrder::Random, 3, (0, 5), ArrivalMode::AllZero, 0).is_err()
        );
        assert!("staggered:0".parse::<ArrivalMode>().is_err());
        assert_eq!(
            "staggered:4".parse::<ArrivalMode>(),
            Ok(ArrivalMode::Staggered { max_gap: 4 })
        );
        assert_eq!(parse_burst_range("1:100"), Ok((1, 100)));
        assert!(parse_burst_range("100").is_err());
    }

    #[test]
    fn json_export_fields() {
        let w = embedded_workload("t4.3").unwrap();
        let t = schedule(&w, &PolicyConfig::dqrrr());
        let r = evaluate(&t, MetricConvention::Paper);
        let text = export_results(&t, &r, ExportFormat::Json);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["quantum_sequence"], serde_json::json!([60, 37, 8]));
        assert_eq!(v["avg_waiting"], "152.4");
        assert_eq!(v["context_switches"], 7);
        assert_eq!(v["convention"], "paper");
        assert_eq!(
            v["slices"][0],
            serde_json::json!({"pid": 5, "start": 0, "end": 35})
        );
        assert_eq!(v["workload"]["provenance"]["id"], "t4.3");

        let back: ExportDocument = serde_json::from_str(&text).unwrap();
        assert_eq!(back, ExportDocument::new(&t, &r));
    }

    #[test]
    fn csv_export_single_slice() {
        let w = parse_workload("pid,arrival,burst\n1,0,5\n", Provenance::Inline).unwrap();
        let t = schedule(&w, &PolicyConfig::fcfs());
        let r = evaluate(&t, MetricConvention::Paper);
        let text = export_results(&t, &r, ExportFormat::Csv);
        let rows: Vec<&str> = text.lines().collect();
        assert_eq!(rows[0], EXPORT_CSV_HEADER);
        assert_eq!(rows.iter().filter(|r| r.starts_with("slice,")).count(), 1);
        assert_eq!(rows.iter().filter(|r| r.starts_with("metrics,")).count(), 1);
        assert_eq!(rows[1], "slice,1,0,5,,,,,,,,,,");
        assert_eq!(rows[2], "metrics,1,,,0,5,5,,,,,,,");
        assert_eq!(rows[3], "summary,,,,,,,0,0.0,5.0,,paper,FCFS,inline");
        let cols = EXPORT_CSV_HEADER.split(',').count();
        assert!(rows.iter().all(|r| r.split(',').count() == cols));
    }
}
