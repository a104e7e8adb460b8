//! Static SVG charts from the CSV files written by the other experiments.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{FxError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChartSpec {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    /// Draw each series as a histogram outline (points are bin left edges,
    /// and the last point's width repeats the previous spacing).
    pub steps: bool,
}

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 160.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 55.0;
const COLORS: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

/// Data range widened by 5% of its span on both sides.
pub fn padded_range(values: impl IntoIterator<Item = f64>) -> Option<(f64, f64)> {
    let (lo, hi) = values
        .into_iter()
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if lo > hi {
        return None;
    }
    let span = hi - lo;
    let pad = if span > 0.0 { 0.05 * span } else { 0.05 * lo.abs().max(1.0) };
    Some((lo - pad, hi + pad))
}

fn tick_label(v: f64) -> String {
    let s = format!("{v:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.to_string() }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn step_points(points: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(points.len() * 2 + 1);
    for (i, &(x, y)) in points.iter().enumerate() {
        let next = match points.get(i + 1) {
            Some(&(nx, _)) => nx,
            None if i > 0 => x + (x - points[i - 1].0),
            None => x + 1.0,
        };
        out.push((x, y));
        out.push((next, y));
    }
    out
}

pub fn line_chart_svg(series: &[Series], spec: &ChartSpec) -> Result<String> {
    if series.is_empty() {
        return Err(FxError::InvalidArgument("nothing to plot".into()));
    }
    if let Some(s) = series.iter().find(|s| s.points.is_empty()) {
        return Err(FxError::InvalidArgument(format!("series {:?} has no points", s.label)));
    }
    let drawn: Vec<Vec<(f64, f64)>> = series
        .iter()
        .map(|s| if spec.steps { step_points(&s.points) } else { s.points.clone() })
        .collect();
    let all = || drawn.iter().flatten();
    let (x0, x1) = padded_range(all().map(|p| p.0))
        .ok_or_else(|| FxError::InvalidArgument("no finite x values".into()))?;
    let (y0, y1) = padded_range(all().map(|p| p.1))
        .ok_or_else(|| FxError::InvalidArgument("no finite y values".into()))?;
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| TOP + ph - (y - y0) / (y1 - y0) * ph;

    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    writeln!(
        s,
        r#"<text x="{}" y="22" text-anchor="middle" font-size="15">{}</text>"#,
        LEFT + pw / 2.0,
        escape(&spec.title)
    )
    .unwrap();
    writeln!(
        s,
        r##"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="#333"/>"##
    )
    .unwrap();
    for i in 0..=5 {
        let t = i as f64 / 5.0;
        let (xv, yv) = (x0 + t * (x1 - x0), y0 + t * (y1 - y0));
        let (px, py) = (sx(xv), sy(yv));
        writeln!(
            s,
            r##"<line x1="{px:.2}" y1="{b:.2}" x2="{px:.2}" y2="{b5:.2}" stroke="#333"/><text x="{px:.2}" y="{bt:.2}" text-anchor="middle">{}</text>"##,
            tick_label(xv),
            b = TOP + ph,
            b5 = TOP + ph + 5.0,
            bt = TOP + ph + 19.0
        )
        .unwrap();
        writeln!(
            s,
            r##"<line x1="{l5:.2}" y1="{py:.2}" x2="{LEFT}" y2="{py:.2}" stroke="#333"/><text x="{lt:.2}" y="{pyt:.2}" text-anchor="end">{}</text>"##,
            tick_label(yv),
            l5 = LEFT - 5.0,
            lt = LEFT - 8.0,
            pyt = py + 4.0
        )
        .unwrap();
    }
    writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        LEFT + pw / 2.0,
        HEIGHT - 12.0,
        escape(&spec.x_label)
    )
    .unwrap();
    writeln!(
        s,
        r#"<text transform="translate(18 {:.2}) rotate(-90)" text-anchor="middle">{}</text>"#,
        TOP + ph / 2.0,
        escape(&spec.y_label)
    )
    .unwrap();

    for (i, (ser, pts)) in series.iter().zip(&drawn).enumerate() {
        let color = COLORS[i % COLORS.len()];
        let coords: Vec<String> = pts
            .iter()
            .filter(|p| p.0.is_finite() && p.1.is_finite())
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        writeln!(
            s,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.8" points="{}"/>"#,
            coords.join(" ")
        )
        .unwrap();
        let ly = TOP + 10.0 + 20.0 * i as f64;
        let lx = WIDTH - RIGHT + 15.0;
        writeln!(
            s,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="3"/><text x="{}" y="{}">{}</text>"#,
            lx + 22.0,
            lx + 28.0,
            ly + 4.0,
            escape(&ser.label)
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    Ok(s)
}

/// Columns `x` and `y` of a CSV file as a series named after the file stem.
pub fn read_series(path: &Path, x: &str, y: &str) -> Result<Series> {
    let mut r = csv::Reader::from_path(path)?;
    let headers = r.headers()?.clone();
    let col = |name: &str| {
        headers.iter().position(|h| h == name).ok_or_else(|| {
            FxError::Parse(format!("{}: no column {name:?}", path.display()))
        })
    };
    let (xi, yi) = (col(x)?, col(y)?);
    let mut points = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        let num = |i: usize| -> Result<f64> {
            let v = rec.get(i).unwrap_or("");
            v.trim().parse().map_err(|_| {
                FxError::Parse(format!("{} row {}: {v:?} is not a number", path.display(), line + 2))
            })
        };
        points.push((num(xi)?, num(yi)?));
    }
    let label = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    Ok(Series { label, points })
}

/// Chooses the chart type from the first file's header: prediction
/// histograms (`bin_lo,bin_hi,count`) become outlines, epoch records become
/// lines of `column` against `epoch`.
pub fn plot_csv_files(paths: &[&Path], column: &str) -> Result<String> {
    let first = paths
        .first()
        .ok_or_else(|| FxError::InvalidArgument("no input files".into()))?;
    let is_histogram = csv::Reader::from_path(first)?
        .headers()?
        .iter()
        .any(|h| h == "bin_lo");
    let (x, y, spec) = if is_histogram {
        (
            "bin_lo",
            "count",
            ChartSpec {
                title: "Prediction histogram".into(),
                x_label: "predicted score".into(),
                y_label: "count".into(),
                steps: true,
            },
        )
    } else {
        (
            "epoch",
            column,
            ChartSpec {
                title: column.replace('_', " "),
                x_label: "epoch".into(),
                y_label: column.into(),
                steps: false,
            },
        )
    };
    let series = paths
        .iter()
        .map(|p| read_series(p, x, y))
        .collect::<Result<Vec<_>>>()?;
    line_chart_svg(&series, &spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> ChartSpec {
        ChartSpec {
            title: "t".into(),
            x_label: "x".into(),
            y_label: "y".into(),
            steps: false,
        }
    }

    #[test]
    fn one_polyline_per_series() {
        let series: Vec<Series> = (0..4)
            .map(|k| Series {
                label: format!("s{k}"),
                points: (0..5).map(|i| (i as f64, (i * k) as f64)).collect(),
            })
            .collect();
        let svg = line_chart_svg(&series, &spec()).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 4);
        for k in 0..4 {
            assert!(svg.contains(&format!(">s{k}</text>")));
        }
    }

    #[test]
    fn empty_input_is_an_error() {
        assert!(line_chart_svg(&[], &spec()).is_err());
        let s = Series { label: "e".into(), points: vec![] };
        assert!(line_chart_svg(&[s], &spec()).is_err());
    }

    #[test]
    fn five_percent_margin() {
        assert_eq!(padded_range([0.0, 10.0]), Some((-0.5, 10.5)));
        assert_eq!(padded_range([2.0]), Some((1.9, 2.1)));
        assert_eq!(padded_range([f64::NAN]), None);
    }

    #[test]
    fn steps_double_the_vertices() {
        let pts = step_points(&[(0.0, 1.0), (0.5, 2.0)]);
        assert_eq!(pts, vec![(0.0, 1.0), (0.5, 1.0), (0.5, 2.0), (1.0, 2.0)]);
    }

    #[test]
    fn reads_and_rejects_csv() {
        let dir = tempfile::tempdir().unwrap();
        let good = dir.path().join("rr.csv");
        std::fs::write(&good, "epoch,train_error,test_error\n0,0.5,0.4\n1,0.1,0.2\n").unwrap();
        let s = read_series(&good, "epoch", "test_error").unwrap();
        assert_eq!(s.label, "rr");
        assert_eq!(s.points, vec![(0.0, 0.4), (1.0, 0.2)]);
        let bad = dir.path().join("bad.csv");
        std::fs::write(&bad, "epoch,test_error\n0,zero\n").unwrap();
        assert!(read_series(&bad, "epoch", "test_error").is_err());
        assert!(read_series(&good, "epoch", "nope").is_err());
        let svg = plot_csv_files(&[good.as_path()], "test_error").unwrap();
        assert!(svg.starts_with("<svg"));
    }
}
