//! Command-line front end: `run`, `compare`, `generate` and `reproduce`.
//!
//! Exit codes: 0 on success, 1 for input or data errors, 2 for usage errors.

use std::fmt::Write as _;
use std::io::Write;
use std::num::NonZeroU64;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::metrics::{compare, evaluate, format_comparison, MetricConvention};
use crate::model::Workload;
use crate::policies::{schedule, PolicyConfig, PolicyKind, DEFAULT_RR_QUANTUM};
use crate::report::{self, render_gantt_ascii, render_gantt_svg};
use crate::workload_io::{
    export_results, generate_workload, load_workload, parse_burst_range, serialize_workload,
    ArrivalMode, BurstOrder, ExportFormat, GeneratorParams,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DATA: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "dqrrr",
    version,
    about = "Uniprocessor CPU-scheduling simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GanttKind {
    None,
    Ascii,
    Svg,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simulate one policy on a workload and print its metrics.
    Run {
        /// CSV file or embedded id (t4.1, t4.3, t4.5, t4.7, t4.9, t4.11).
        #[arg(long)]
        workload: String,
        #[arg(long)]
        policy: PolicyKind,
        /// Fixed quantum for rr [default: 25].
        #[arg(long)]
        quantum: Option<u64>,
        #[arg(long, default_value = "paper")]
        convention: MetricConvention,
        #[arg(long, value_enum, default_value = "none")]
        gantt: GanttKind,
        /// Write a machine-readable result document here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
    },
    /// Run several policies on one workload side by side.
    Compare {
        #[arg(long)]
        workload: String,
        /// Comma-separated, at least two.
        #[arg(long, value_delimiter = ',', required = true)]
        policies: Vec<PolicyKind>,
        #[arg(long)]
        quantum: Option<u64>,
        #[arg(long, default_value = "paper")]
        convention: MetricConvention,
    },
    /// Emit a synthetic workload as CSV.
    Generate {
        #[arg(long)]
        order: BurstOrder,
        #[arg(long)]
        n: usize,
        /// Inclusive burst range, LO:HI.
        #[arg(long)]
        burst: String,
        /// `zero` or `staggered:GAP`.
        #[arg(long, default_value = "zero")]
        arrivals: ArrivalMode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-run the published comparison tables and audit each cell.
    Reproduce {
        /// Table id (4.2, 4.4, 4.6, 4.8, 4.10, 4.12) or `all`.
        #[arg(long, default_value = "all")]
        table: String,
        /// Also write the audit as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Data(String),
}

type CmdResult = Result<i32, Failure>;

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let result = match cli.command {
        Command::Run {
            workload,
            policy,
            quantum,
            convention,
            gantt,
            out,
            format,
        } => cmd_run(
            &workload, policy, quantum, convention, gantt, out, format, stdout,
        ),
        Command::Compare {
            workload,
            policies,
            quantum,
            convention,
        } => cmd_compare(&workload, &policies, quantum, convention, stdout),
        Command::Generate {
            order,
            n,
            burst,
            arrivals,
            seed,
            out,
        } => cmd_generate(order, n, &burst, arrivals, seed, out, stdout),
        Command::Reproduce { table, out } => cmd_reproduce(&table, out, stdout),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Data(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_DATA
        }
    }
}

fn rr_quantum(quantum: Option<u64>) -> Result<NonZeroU64, Failure> {
    let q = quantum.unwrap_or(DEFAULT_RR_QUANTUM);
    NonZeroU64::new(q).ok_or_else(|| Failure::Usage("--quantum must be >= 1".into()))
}

fn policy_config(kind: PolicyKind, quantum: NonZeroU64) -> PolicyConfig {
    match kind {
        PolicyKind::Rr => PolicyConfig::rr(quantum),
        other => PolicyConfig::new(other),
    }
}

fn load(source: &str) -> Result<Workload, Failure> {
    load_workload(source).map_err(|e| Failure::Data(e.to_string()))
}

fn write_file(path: &PathBuf, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents)
        .map_err(|e| Failure::Data(format!("cannot write {}: {e}", path.display())))
}

fn emit(stdout: &mut dyn Write, text: &str) -> Result<(), Failure> {
    stdout
        .write_all(text.as_bytes())
        .map_err(|e| Failure::Data(format!("cannot write output: {e}")))
}

#[allow(clippy::too_many_arguments)]
fn cmd_run(
    source: &str,
    policy: PolicyKind,
    quantum: Option<u64>,
    convention: MetricConvention,
    gantt: GanttKind,
    out: Option<PathBuf>,
    format: Option<FormatArg>,
    stdout: &mut dyn Write,
) -> CmdResult {
    if quantum.is_some() && policy != PolicyKind::Rr {
        return Err(Failure::Usage(
            "--quantum only applies to --policy rr".into(),
        ));
    }
    if format.is_some() && out.is_none() {
        return Err(Failure::Usage("--format requires --out".into()));
    }
    let config = policy_config(policy, rr_quantum(quantum)?);
    let workload = load(source)?;

    let trace = schedule(&workload, &config);
    let metrics = evaluate(&trace, convention);
    let rows = compare(std::slice::from_ref(&metrics)).expect("single convention");

    let mut text = String::new();
    let _ = writeln!(
        text,
        "workload: {} ({} processes), convention: {convention}",
        workload.provenance(),
        workload.len()
    );
    text.push_str(&format_comparison(&rows));
    text.push('\n');
    let _ = writeln!(text, "pid  arrival  burst  completion  waiting  turnaround");
    for p in workload.processes() {
        let m = &metrics.per_process[&p.pid];
        let _ = writeln!(
            text,
            "{:<3}  {:>7}  {:>5}  {:>10}  {:>7}  {:>10}",
            p.pid.to_string(),
            p.arrival,
            p.burst,
            m.completion,
            m.waiting,
            m.turnaround
        );
    }
    match gantt {
        GanttKind::None => {}
        GanttKind::Ascii => {
            text.push('\n');
            text.push_str(&render_gantt_ascii(&trace));
        }
        GanttKind::Svg => {
            text.push('\n');
            text.push_str(&render_gantt_svg(&trace));
        }
    }
    emit(stdout, &text)?;

    if let Some(path) = out {
        let format = match format.unwrap_or(FormatArg::Json) {
            FormatArg::Json => ExportFormat::Json,
            FormatArg::Csv => ExportFormat::Csv,
        };
        write_file(&path, &export_results(&trace, &metrics, format))?;
    }
    Ok(EXIT_OK)
}

fn cmd_compare(
    source: &str,
    policies: &[PolicyKind],
    quantum: Option<u64>,
    convention: MetricConvention,
    stdout: &mut dyn Write,
) -> CmdResult {
    if policies.len() < 2 {
        return Err(Failure::Usage(
            "--policies needs at least two policies".into(),
        ));
    }
    if quantum.is_some() && !policies.contains(&PolicyKind::Rr) {
        return Err(Failure::Usage(
            "--quantum only applies when rr is compared".into(),
        ));
    }
    let q = rr_quantum(quantum)?;
    let workload = load(source)?;
    let reports: Vec<_> = policies
        .iter()
        .map(|&kind| evaluate(&schedule(&workload, &policy_config(kind, q)), convention))
        .collect();
    let rows = compare(&reports).expect("single convention");
    let mut text = String::new();
    let _ = writeln!(
        text,
        "workload: {} ({} processes), convention: {convention}",
        workload.provenance(),
        workload.len()
    );
    text.push_str(&format_comparison(&rows));
    emit(stdout, &text)?;
    Ok(EXIT_OK)
}

fn cmd_generate(
    order: BurstOrder,
    n: usize,
    burst: &str,
    arrivals: ArrivalMode,
    seed: u64,
    out: Option<PathBuf>,
    stdout: &mut dyn Write,
) -> CmdResult {
    let range = parse_burst_range(burst).map_err(Failure::Usage)?;
    let params = GeneratorParams::new(order, n, range, arrivals, seed)
        .map_err(|e| Failure::Usage(e.to_string()))?;
    let csv = serialize_workload(&generate_workload(&params));
    match out {
        Some(path) => write_file(&path, &csv)?,
        None => emit(stdout, &csv)?,
    }
    Ok(EXIT_OK)
}

fn cmd_reproduce(table: &str, out: Option<PathBuf>, stdout: &mut dyn Write) -> CmdResult {
    let reports = if table == "all" {
        report::reproduce_all()
    } else {
        vec![report::reproduce_table(table).map_err(|e| Failure::Usage(e.to_string()))?]
    };
    let mut text = String::new();
    for (i, r) in reports.iter().enumerate() {
        if i > 0 {
            text.push('\n');
        }
        text.push_str(&r.render_text());
    }
    let regressions: usize = reports.iter().map(|r| r.regressions().count()).sum();
    let errata: usize = reports
        .iter()
        .flat_map(|r| &r.runs)
        .flat_map(|run| &run.verdicts)
        .filter(|c| c.verdict == report::Verdict::Erratum)
        .count();
    let _ = writeln!(
        text,
        "\n{} table(s): {errata} erratum cell(s), {regressions} mismatch(es)",
        reports.len()
    );
    emit(stdout, &text)?;
    if let Some(path) = out {
        let json = serde_json::to_string_pretty(&reports).expect("reports serialize");
        write_file(&path, &(json + "\n"))?;
    }
    Ok(if regressions == 0 { EXIT_OK } else { EXIT_DATA })
}
