use std::fmt::Write as _;

use crate::model::{ScheduleTrace, Tick};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Segment {
    Run { pid: u32, start: Tick, end: Tick },
    Idle { start: Tick, end: Tick },
}

/// Slices and idle gaps in chronological order, covering `[0, makespan)`.
pub fn segments(trace: &ScheduleTrace) -> Vec<Segment> {
    let mut out = Vec::with_capacity(trace.slices.len() + 1);
    let mut clock = 0;
    for s in &trace.slices {
        if s.start > clock {
            out.push(Segment::Idle {
                start: clock,
                end: s.start,
            });
        }
        out.push(Segment::Run {
            pid: s.pid.get(),
            start: s.start,
            end: s.end,
        });
        clock = s.end;
    }
    out
}

/// One-line chart such as `|P1 0..30|P2 30..72|`, terminated by a newline.
pub fn render_gantt_ascii(trace: &ScheduleTrace) -> String {
    let mut out = String::from("|");
    for seg in segments(trace) {
        match seg {
            Segment::Run { pid, start, end } => {
                let _ = write!(out, "P{pid} {start}..{end}|");
            }
            Segment::Idle { start, end } => {
                let _ = write!(out, "idle {start}..{end}|");
            }
        }
    }
    out.push('\n');
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvgOptions {
    pub px_per_tick: f64,
    /// Upper bound on the width of the time axis; the scale shrinks to fit.
    pub max_chart_width: f64,
    pub bar_height: f64,
    pub margin: f64,
}

impl Default for SvgOptions {
    fn default() -> Self {
        SvgOptions {
            px_per_tick: 4.0,
            max_chart_width: 1200.0,
            bar_height: 40.0,
            margin: 20.0,
        }
    }
}

impl SvgOptions {
    pub fn scale_for(&self, makespan: Tick) -> f64 {
        if makespan == 0 {
            return self.px_per_tick;
        }
        self.px_per_tick.min(self.max_chart_width / makespan as f64)
    }
}

const PALETTE: &[&str] = &[
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#ff9da7",
    "#9c755f", "#bab0ac",
];

pub fn render_gantt_svg(trace: &ScheduleTrace) -> String {
    render_gantt_svg_with(trace, &SvgOptions::default())
}

pub fn render_gantt_svg_with(trace: &ScheduleTrace, opts: &SvgOptions) -> String {
    let makespan = trace.makespan();
    let scale = opts.scale_for(makespan);
    let m = opts.margin;
    let x = |t: Tick| m + t as f64 * scale;
    let axis_y = m + opts.bar_height;
    let width = x(makespan) + m;
    let height = axis_y + 30.0;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.2}" height="{height:.2}" viewBox="0 0 {width:.2} {height:.2}" font-family="monospace" font-size="11">"#
    );
    let _ = writeln!(svg, "  <title>{}</title>", escape(&trace.policy_label));
    for s in &trace.slices {
        let pid = s.pid.get();
        let color = PALETTE[(pid as usize - 1) % PALETTE.len()];
        let (x0, w) = (x(s.start), s.len() as f64 * scale);
        let _ = writeln!(
            svg,
            r#"  <rect x="{x0:.2}" y="{m:.2}" width="{w:.2}" height="{:.2}" fill="{color}" stroke="black"/>"#,
            opts.bar_height
        );
        let _ = writeln!(
            svg,
            r#"  <text x="{:.2}" y="{:.2}" text-anchor="middle">P{pid}</text>"#,
            x0 + w / 2.0,
            m + opts.bar_height / 2.0 + 4.0
        );
    }
    let _ = writeln!(
        svg,
        r#"  <line x1="{:.2}" y1="{axis_y:.2}" x2="{:.2}" y2="{axis_y:.2}" stroke="black"/>"#,
        x(0),
        x(makespan)
    );
    let mut ticks: Vec<Tick> = std::iter::once(0)
        .chain(trace.slices.iter().flat_map(|s| [s.start, s.end]))
        .collect();
    ticks.dedup();
    for t in ticks {
        let _ = writeln!(
            svg,
            r#"  <line x1="{0:.2}" y1="{axis_y:.2}" x2="{0:.2}" y2="{1:.2}" stroke="black"/>"#,
            x(t),
            axis_y + 5.0
        );
        let _ = writeln!(
            svg,
            r#"  <text x="{:.2}" y="{:.2}" text-anchor="middle">{t}</text>"#,
            x(t),
            axis_y + 17.0
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
