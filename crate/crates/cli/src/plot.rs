//! Deterministic SVG line charts for JSON reports, with the plotted values
//! repeated as a table under the chart.

use std::fmt::Write;

use serde_json::Value;

use crate::error::{CliError, CliResult};

const WIDTH: f64 = 640.0;
const PLOT_HEIGHT: f64 = 360.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 150.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 50.0;
const ROW_HEIGHT: f64 = 16.0;
const COLORS: [&str; 5] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"];

#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Chart {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_x: bool,
    pub series: Vec<Series>,
    /// Horizontal reference line.
    pub reference: Option<(f64, String)>,
}

fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let a = x.abs();
    if !(1e-3..1e5).contains(&a) {
        format!("{x:.3e}")
    } else {
        let s = format!("{x:.4}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Evenly spaced ticks covering `[lo, hi]`.
fn ticks(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    (0..=count).map(|i| lo + (hi - lo) * i as f64 / count as f64).collect()
}

fn padded_range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for v in values.filter(|v| v.is_finite()) {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 {
        let pad = if lo == 0.0 { 1.0 } else { lo.abs() * 0.1 };
        return (lo - pad, hi + pad);
    }
    let pad = (hi - lo) * 0.05;
    (lo - pad, hi + pad)
}

pub fn render(chart: &Chart) -> String {
    let xs: Vec<f64> = chart.series.iter().flat_map(|s| s.points.iter().map(|p| p.0)).collect();
    let mut table_x = xs.clone();
    table_x.sort_by(f64::total_cmp);
    table_x.dedup();

    let tx = |x: f64| if chart.log_x { x.log10() } else { x };
    let (x_lo, x_hi) = padded_range(xs.iter().map(|&x| tx(x)));
    let ys = chart
        .series
        .iter()
        .flat_map(|s| s.points.iter().map(|p| p.1))
        .chain(chart.reference.iter().map(|r| r.0));
    let (y_lo, y_hi) = padded_range(ys);

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let sx = |x: f64| MARGIN_LEFT + (tx(x) - x_lo) / (x_hi - x_lo) * plot_w;
    let sy = |y: f64| MARGIN_TOP + (y_hi - y) / (y_hi - y_lo) * PLOT_HEIGHT;
    let table_top = MARGIN_TOP + PLOT_HEIGHT + MARGIN_BOTTOM;
    let height = table_top + ROW_HEIGHT * (table_x.len() as f64 + 2.0);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height}" viewBox="0 0 {WIDTH} {height}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="22" font-size="14" text-anchor="middle">{}</text>"#,
        MARGIN_LEFT + plot_w / 2.0,
        escape(&chart.title)
    );

    // Axes and ticks.
    let bottom = MARGIN_TOP + PLOT_HEIGHT;
    let _ = writeln!(
        svg,
        r#"<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{plot_w}" height="{PLOT_HEIGHT}" fill="none" stroke="black"/>"#
    );
    for t in ticks(y_lo, y_hi, 5) {
        let y = sy(t);
        let _ = writeln!(
            svg,
            r##"<line x1="{MARGIN_LEFT}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#ddd"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"##,
            MARGIN_LEFT + plot_w,
            MARGIN_LEFT - 6.0,
            y + 4.0,
            fmt_num(t)
        );
    }
    for &x in &table_x {
        let px = sx(x);
        let _ = writeln!(
            svg,
            r#"<line x1="{px:.2}" y1="{bottom}" x2="{px:.2}" y2="{:.2}" stroke="black"/><text x="{px:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            bottom + 5.0,
            bottom + 18.0,
            fmt_num(x)
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        MARGIN_LEFT + plot_w / 2.0,
        bottom + 38.0,
        escape(&chart.x_label)
    );
    let _ = writeln!(
        svg,
        r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">{}</text>"#,
        MARGIN_TOP + PLOT_HEIGHT / 2.0,
        MARGIN_TOP + PLOT_HEIGHT / 2.0,
        escape(&chart.y_label)
    );

    if let Some((y, label)) = &chart.reference {
        let py = sy(*y);
        let _ = writeln!(
            svg,
            r##"<line x1="{MARGIN_LEFT}" y1="{py:.2}" x2="{:.2}" y2="{py:.2}" stroke="#555" stroke-dasharray="6 4"/><text x="{:.2}" y="{:.2}">{}</text>"##,
            MARGIN_LEFT + plot_w,
            MARGIN_LEFT + plot_w + 6.0,
            py + 4.0,
            escape(label)
        );
    }

    for (i, s) in chart.series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let path: Vec<String> = s.points.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#,
            path.join(" ")
        );
        for &(x, y) in &s.points {
            let _ = writeln!(svg, r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"#, sx(x), sy(y));
        }
        let ly = MARGIN_TOP + 14.0 + 18.0 * i as f64;
        let lx = MARGIN_LEFT + plot_w + 10.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/><text x="{}" y="{}">{}</text>"#,
            lx + 16.0,
            lx + 20.0,
            ly + 4.0,
            escape(&s.name)
        );
    }

    // Data table.
    let col_w = (WIDTH - MARGIN_LEFT) / (chart.series.len() as f64 + 1.0);
    let _ = writeln!(svg, r#"<g class="data-table">"#);
    let header = std::iter::once(chart.x_label.as_str()).chain(chart.series.iter().map(|s| s.name.as_str()));
    for (c, name) in header.enumerate() {
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{table_top}" font-weight="bold">{}</text>"#,
            MARGIN_LEFT + col_w * c as f64,
            escape(name)
        );
    }
    for (r, &x) in table_x.iter().enumerate() {
        let y = table_top + ROW_HEIGHT * (r as f64 + 1.0);
        let _ = writeln!(svg, r#"<text x="{MARGIN_LEFT}" y="{y}">{}</text>"#, fmt_num(x));
        for (c, s) in chart.series.iter().enumerate() {
            let cell = s
                .points
                .iter()
                .find(|p| p.0 == x)
                .map_or_else(|| "-".to_string(), |p| fmt_num(p.1));
            let _ = writeln!(
                svg,
                r#"<text x="{:.2}" y="{y}">{cell}</text>"#,
                MARGIN_LEFT + col_w * (c as f64 + 1.0)
            );
        }
    }
    let _ = writeln!(svg, "</g>");
    svg.push_str("</svg>\n");
    svg
}

fn field<'a>(v: &'a Value, key: &str) -> CliResult<&'a Value> {
    v.get(key)
        .ok_or_else(|| CliError::Schema(format!("report is missing field '{key}'")))
}

fn num(v: &Value, key: &str) -> CliResult<f64> {
    field(v, key)?
        .as_f64()
        .ok_or_else(|| CliError::Schema(format!("field '{key}' is not a number")))
}

fn array<'a>(v: &'a Value, key: &str) -> CliResult<&'a Vec<Value>> {
    field(v, key)?
        .as_array()
        .ok_or_else(|| CliError::Schema(format!("field '{key}' is not an array")))
}

fn rate_chart(reports: &[Value]) -> CliResult<Chart> {
    let mut bound = Vec::new();
    let mut exact = Vec::new();
    let (mut low, mut high) = (Vec::new(), Vec::new());
    let (mut p, mut eps) = (f64::NAN, f64::NAN);
    for r in reports {
        let n = num(r, "n")?;
        p = num(r, "p")?;
        eps = num(r, "epsilon")?;
        bound.push((n, num(field(r, "bound")?, "per_symbol")?));
        if let Some(e) = r.get("exact").filter(|e| !e.is_null()) {
            exact.push((n, num(e, "rate")?));
        }
        if let Some(b) = r.get("bracket").filter(|b| !b.is_null()) {
            low.push((n, num(b, "low")?));
            high.push((n, num(b, "high")?));
        }
    }
    let mut series = vec![Series {
        name: "bound".into(),
        points: bound,
    }];
    for (name, points) in [("exact", exact), ("bracket low", low), ("bracket high", high)] {
        if !points.is_empty() {
            series.push(Series {
                name: name.into(),
                points,
            });
        }
    }
    Ok(Chart {
        title: format!("rate vs n (p = {}, eps = {})", fmt_num(p), fmt_num(eps)),
        x_label: "n".into(),
        y_label: "bits per vertex pair".into(),
        log_x: false,
        series,
        reference: None,
    })
}

fn wright_chart(report: &Value) -> CliResult<Chart> {
    let rows = array(report, "rows")?;
    let points = rows
        .iter()
        .map(|r| Ok((num(r, "n")?, num(r, "ratio")?)))
        .collect::<CliResult<_>>()?;
    let rule = report.get("rule").and_then(Value::as_str).unwrap_or("?");
    Ok(Chart {
        title: format!("N / Lambda vs n (j rule: {rule})"),
        x_label: "n".into(),
        y_label: "N / Lambda".into(),
        log_x: false,
        series: vec![Series {
            name: "ratio".into(),
            points,
        }],
        reference: Some((1.0, "1".into())),
    })
}

fn berry_chart(report: &Value) -> CliResult<Chart> {
    let rows = array(report, "rows")?;
    let mut sampled = Vec::new();
    let mut exact = Vec::new();
    for r in rows {
        let m = num(r, "m")?;
        sampled.push((m, num(r, "scaled")?));
        exact.push((m, num(r, "exact_deviation")? * m.sqrt()));
    }
    let a = num(report, "a")?;
    Ok(Chart {
        title: format!("D_m * sqrt(m) vs m (p = {})", fmt_num(num(report, "p")?)),
        x_label: "m".into(),
        y_label: "D_m * sqrt(m)".into(),
        log_x: true,
        series: vec![
            Series {
                name: "sampled".into(),
                points: sampled,
            },
            Series {
                name: "exact".into(),
                points: exact,
            },
        ],
        reference: Some((a, format!("A = {}", fmt_num(a)))),
    })
}

/// Picks the chart kind from the report's `schema` field.
pub fn render_report(report: &Value) -> CliResult<String> {
    let schema = report
        .get("schema")
        .and_then(Value::as_str)
        .ok_or_else(|| CliError::Schema("report has no 'schema' field".into()))?;
    let chart = match schema {
        "tsgraph.rate/v1" => rate_chart(std::slice::from_ref(report))?,
        "tsgraph.rates/v1" => rate_chart(array(report, "reports")?)?,
        "tsgraph.wright/v1" => wright_chart(report)?,
        "tsgraph.berry/v1" => berry_chart(report)?,
        other => return Err(CliError::Schema(format!("unknown report schema '{other}'"))),
    };
    Ok(render(&chart))
}
