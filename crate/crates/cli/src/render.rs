//! SVG renders: importance map with trajectory, and the sweep reward chart.
//!
//! Palette: red/yellow/green/blue for high/medium/low/zero cells, a white
//! base cell, white target dots, a black outgoing stroke and a purple return
//! stroke, both with direction arrowheads.

use std::fmt::Write as _;

use covplan_core::{CellIndex, GridMap, ImportanceClass, Segment, Trajectory};

const CELL: f64 = 40.0;
const MARGIN: f64 = 30.0;
const OUTGOING: &str = "#000000";
const RETURN: &str = "#7b2fbe";

fn fill(class: ImportanceClass) -> &'static str {
    match class {
        ImportanceClass::High => "#e0302a",
        ImportanceClass::Medium => "#f2d333",
        ImportanceClass::Low => "#3fa34d",
        ImportanceClass::Zero => "#2f5fb3",
    }
}

fn centre(cell: CellIndex) -> (f64, f64) {
    (
        MARGIN + (f64::from(cell.x) - 0.5) * CELL,
        MARGIN + (f64::from(cell.y) - 0.5) * CELL,
    )
}

fn arrow_marker(out: &mut String, id: &str, colour: &str) {
    let _ = writeln!(
        out,
        r#"    <marker id="{id}" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="5" markerHeight="5" orient="auto-start-reverse"><path d="M0,0 L10,5 L0,10 z" fill="{colour}"/></marker>"#
    );
}

/// Draws hops of one segment kind as individual arrows so direction is visible
/// on every move, including revisits.
fn strokes(
    out: &mut String,
    t: &Trajectory,
    kind: Segment,
    colour: &str,
    marker: &str,
    shift: f64,
) {
    let _ = writeln!(
        out,
        r#"  <g stroke="{colour}" stroke-width="3" stroke-linecap="round">"#
    );
    for (i, seg) in t.segments.iter().enumerate() {
        if *seg != kind {
            continue;
        }
        let (x1, y1) = centre(t.waypoints[i]);
        let (x2, y2) = centre(t.waypoints[i + 1]);
        // pull the arrow back from the centre so consecutive heads do not overlap
        let (dx, dy) = ((x2 - x1) * 0.18, (y2 - y1) * 0.18);
        let _ = writeln!(
            out,
            r#"    <line x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" marker-end="url(#{marker})"/>"#,
            x1 + dx + shift,
            y1 + dy + shift,
            x2 - dx + shift,
            y2 - dy + shift
        );
    }
    let _ = writeln!(out, "  </g>");
}

pub fn render_plan(grid: &GridMap, trajectory: &Trajectory, title: &str) -> String {
    let w = MARGIN * 2.0 + f64::from(grid.width()) * CELL;
    let h = MARGIN * 2.0 + f64::from(grid.height()) * CELL;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(out, "  <title>{}</title>", escape(title));
    let _ = writeln!(out, "  <defs>");
    arrow_marker(&mut out, "arrow-out", OUTGOING);
    arrow_marker(&mut out, "arrow-ret", RETURN);
    let _ = writeln!(out, "  </defs>");
    let _ = writeln!(
        out,
        r##"  <rect width="{w}" height="{h}" fill="#ffffff"/>"##
    );

    let _ = writeln!(out, r##"  <g stroke="#333333" stroke-width="0.5">"##);
    for cell in grid.cells() {
        let _ = writeln!(
            out,
            r#"    <rect x="{}" y="{}" width="{CELL}" height="{CELL}" fill="{}"/>"#,
            MARGIN + f64::from(cell.x - 1) * CELL,
            MARGIN + f64::from(cell.y - 1) * CELL,
            fill(grid.class_of(cell))
        );
    }
    let _ = writeln!(out, "  </g>");

    let base = trajectory.base();
    let _ = writeln!(
        out,
        r##"  <rect x="{}" y="{}" width="{CELL}" height="{CELL}" fill="#ffffff" stroke="#000000" stroke-width="1.5"/>"##,
        MARGIN + f64::from(base.x - 1) * CELL,
        MARGIN + f64::from(base.y - 1) * CELL
    );

    // axis labels, 1-based
    let _ = writeln!(
        out,
        r##"  <g font-family="sans-serif" font-size="11" fill="#000000" text-anchor="middle">"##
    );
    for x in 1..=grid.width() {
        let (cx, _) = centre(CellIndex::new(x, 1));
        let _ = writeln!(
            out,
            r#"    <text x="{cx:.1}" y="{:.1}">{x}</text>"#,
            MARGIN - 8.0
        );
    }
    for y in 1..=grid.height() {
        let (_, cy) = centre(CellIndex::new(1, y));
        let _ = writeln!(
            out,
            r#"    <text x="{:.1}" y="{:.1}">{y}</text>"#,
            MARGIN - 12.0,
            cy + 4.0
        );
    }
    let _ = writeln!(out, "  </g>");

    strokes(
        &mut out,
        trajectory,
        Segment::Outgoing,
        OUTGOING,
        "arrow-out",
        0.0,
    );
    strokes(
        &mut out,
        trajectory,
        Segment::Return,
        RETURN,
        "arrow-ret",
        4.0,
    );

    let _ = writeln!(
        out,
        r##"  <g fill="#ffffff" stroke="#000000" stroke-width="1">"##
    );
    for t in &trajectory.targets {
        let (cx, cy) = centre(*t);
        let _ = writeln!(out, r#"    <circle cx="{cx:.1}" cy="{cy:.1}" r="5"/>"#);
    }
    let _ = writeln!(out, "  </g>");
    let _ = writeln!(out, "</svg>");
    out
}

/// One line per series; `points` are `(battery, accumulated reward)` pairs.
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

const SERIES_COLOURS: [&str; 6] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
];

pub fn render_sweep(series: &[Series]) -> String {
    let (w, h) = (720.0, 440.0);
    let (left, right, top, bottom) = (70.0, 200.0, 30.0, 50.0);
    let all = series.iter().flat_map(|s| s.points.iter());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in all {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if x0 > x1 {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    if x1 == x0 {
        x1 = x0 + 1.0;
    }
    if y1 == y0 {
        y1 = y0 + 1.0;
    }
    let sx = |x: f64| left + (x - x0) / (x1 - x0) * (w - left - right);
    let sy = |y: f64| h - bottom - (y - y0) / (y1 - y0) * (h - top - bottom);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        out,
        r##"  <rect width="{w}" height="{h}" fill="#ffffff"/>"##
    );
    let _ = writeln!(
        out,
        r##"  <path d="M{left},{top} V{} H{}" fill="none" stroke="#000000"/>"##,
        h - bottom,
        w - right
    );
    for i in 0..=4 {
        let y = y0 + (y1 - y0) * f64::from(i) / 4.0;
        let _ = writeln!(
            out,
            r#"  <text x="{:.1}" y="{:.1}" text-anchor="end">{:.0}</text>"#,
            left - 6.0,
            sy(y) + 4.0,
            y
        );
    }
    let mut xs: Vec<f64> = series
        .iter()
        .flat_map(|s| s.points.iter().map(|p| p.0))
        .collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    for x in xs {
        let _ = writeln!(
            out,
            r#"  <text x="{:.1}" y="{:.1}" text-anchor="middle">{x}</text>"#,
            sx(x),
            h - bottom + 18.0
        );
    }
    let _ = writeln!(
        out,
        r#"  <text x="{:.1}" y="{:.1}" text-anchor="middle">starting battery</text>"#,
        (left + w - right) / 2.0,
        h - 10.0
    );
    let _ = writeln!(
        out,
        r#"  <text x="16" y="{:.1}" text-anchor="middle" transform="rotate(-90 16 {:.1})">accumulated reward</text>"#,
        h / 2.0,
        h / 2.0
    );
    for (i, s) in series.iter().enumerate() {
        let colour = SERIES_COLOURS[i % SERIES_COLOURS.len()];
        let pts: Vec<String> = s
            .points
            .iter()
            .map(|&(x, y)| format!("{:.1},{:.1}", sx(x), sy(y)))
            .collect();
        let _ = writeln!(
            out,
            r#"  <polyline points="{}" fill="none" stroke="{colour}" stroke-width="2"/>"#,
            pts.join(" ")
        );
        for &(x, y) in &s.points {
            let _ = writeln!(
                out,
                r#"  <circle cx="{:.1}" cy="{:.1}" r="3" fill="{colour}"/>"#,
                sx(x),
                sy(y)
            );
        }
        let ly = top + 20.0 * i as f64;
        let _ = writeln!(
            out,
            r#"  <line x1="{:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{colour}" stroke-width="2"/>"#,
            w - right + 15.0,
            w - right + 35.0
        );
        let _ = writeln!(
            out,
            r#"  <text x="{:.1}" y="{:.1}">{}</text>"#,
            w - right + 40.0,
            ly + 4.0,
            escape(&s.label)
        );
    }
    let _ = writeln!(out, "</svg>");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use covplan_core::{plan, shipped, PenaltyConfig, WeightVector};

    #[test]
    fn plan_render_has_palette_and_strokes() {
        let grid = shipped::island();
        let r = plan(
            &grid,
            CellIndex::new(7, 6),
            25,
            &PenaltyConfig::default(),
            &WeightVector::default(),
        )
        .unwrap();
        let svg = render_plan(&grid, &r.trajectory, "island");
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        for colour in ["#e0302a", "#f2d333", "#3fa34d", "#2f5fb3", OUTGOING, RETURN] {
            assert!(svg.contains(colour), "{colour}");
        }
        assert_eq!(svg.matches("<circle").count(), r.trajectory.targets.len());
        assert_eq!(
            svg.matches("marker-end").count(),
            r.trajectory.hops() as usize
        );
    }

    #[test]
    fn base_only_render() {
        let grid = shipped::island();
        let t = Trajectory::from_walk(vec![CellIndex::new(7, 6)]);
        let svg = render_plan(&grid, &t, "empty");
        assert_eq!(svg.matches("marker-end").count(), 0);
        assert_eq!(svg.matches("<circle").count(), 0);
    }

    #[test]
    fn sweep_chart_draws_every_series() {
        let series = vec![
            Series {
                label: "a".into(),
                points: vec![(20.0, 1.0), (30.0, 5.0)],
            },
            Series {
                label: "b <x>".into(),
                points: vec![(20.0, -3.0), (30.0, 2.0)],
            },
        ];
        let svg = render_sweep(&series);
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains("b &lt;x&gt;"));
        assert!(!render_sweep(&[]).is_empty());
    }
}
