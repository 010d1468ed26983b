//! Gantt charts and the reproduction audit.

mod gantt;
mod reproduce;

pub use gantt::{
    render_gantt_ascii, render_gantt_svg, render_gantt_svg_with, segments, Segment, SvgOptions,
};
pub use reproduce::{
    expected_entries, reproduce_all, reproduce_table, CellReport, CellValue, EntryStatus,
    ExpectedCell, ExpectedTableEntry, Metric, PolicyRun, ReproduceError, TableReport, Verdict,
    TABLES,
};
