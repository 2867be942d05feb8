//! Plot data: transformed points as CSV and a standalone SVG with error bars
//! and the fitted line.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rfpm_core::scaling::{mapped_points, AxisMap, PowerFit, ScalingSeries};

use crate::io::{f17, with_suffix, write_atomic};
use crate::CliError;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 56.0;

/// Writes `<stem>.csv` and `<stem>.svg`. Points are mapped with the fit's
/// axis maps when a fit is given, else with `maps`.
pub fn emit_plot_data(
    series: &ScalingSeries,
    fit: Option<&PowerFit>,
    maps: (AxisMap, AxisMap),
    stem: &Path,
) -> Result<(PathBuf, PathBuf), CliError> {
    if series.is_empty() {
        return Err(CliError::Runtime("cannot plot an empty series".into()));
    }
    let (x_map, y_map) = fit.map(|f| (f.x_map, f.y_map)).unwrap_or(maps);
    let mapped = mapped_points(series, x_map, y_map).map_err(|e| CliError::Runtime(e.to_string()))?;

    let mut csv = String::from("x,y,yerr,X,Y,Yerr,Y_fit,residual\n");
    for (p, &(x, y, yerr)) in series.points().iter().zip(&mapped) {
        let (fitted, resid) = match fit {
            Some(f) => (f17(f.predict(x)), f17(y - f.predict(x))),
            None => (String::new(), String::new()),
        };
        writeln!(
            csv,
            "{},{},{},{},{},{},{},{}",
            f17(p.x),
            f17(p.y),
            f17(p.yerr),
            f17(x),
            f17(y),
            f17(yerr),
            fitted,
            resid
        )
        .expect("string write");
    }
    let csv_path = with_suffix(stem, ".csv");
    let svg_path = with_suffix(stem, ".svg");
    write_atomic(&csv_path, csv.as_bytes())?;
    write_atomic(&svg_path, svg(&mapped, fit, x_map, y_map).as_bytes())?;
    Ok((csv_path, svg_path))
}

fn span(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if hi - lo > 1e-12 {
        let pad = 0.05 * (hi - lo);
        (lo - pad, hi + pad)
    } else {
        (lo - 1.0, hi + 1.0)
    }
}

fn svg(points: &[(f64, f64, f64)], fit: Option<&PowerFit>, x_map: AxisMap, y_map: AxisMap) -> String {
    let (x0, x1) = span(points.iter().map(|p| p.0));
    let (y0, y1) = span(points.iter().flat_map(|p| [p.1 - p.2, p.1 + p.2]));
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    )
    .expect("string write");
    out.push_str(r#"<rect width="100%" height="100%" fill="white"/>"#);
    out.push('\n');
    writeln!(
        out,
        r#"<path d="M{m} {b} H{r} M{m} {b} V{m}" stroke="black" fill="none"/>"#,
        m = MARGIN,
        b = HEIGHT - MARGIN,
        r = WIDTH - MARGIN
    )
    .expect("string write");
    writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle" font-size="14">{}(x)</text>"#,
        WIDTH / 2.0,
        HEIGHT - 16.0,
        x_map
    )
    .expect("string write");
    writeln!(
        out,
        r#"<text x="16" y="{}" text-anchor="middle" font-size="14" transform="rotate(-90 16 {})">{}(y)</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0,
        y_map
    )
    .expect("string write");
    for &(x, y, e) in points {
        if e > 0.0 {
            writeln!(
                out,
                r#"<line x1="{0:.3}" y1="{1:.3}" x2="{0:.3}" y2="{2:.3}" stroke="gray"/>"#,
                sx(x),
                sy(y - e),
                sy(y + e)
            )
            .expect("string write");
        }
        writeln!(out, r#"<circle cx="{:.3}" cy="{:.3}" r="3" fill="black"/>"#, sx(x), sy(y)).expect("string write");
    }
    if let Some(f) = fit {
        writeln!(
            out,
            r#"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="crimson"/>"#,
            sx(x0),
            sy(f.predict(x0)),
            sx(x1),
            sy(f.predict(x1))
        )
        .expect("string write");
        writeln!(
            out,
            r#"<text x="{}" y="{}" font-size="12">slope {:.6} ± {:.6}</text>"#,
            MARGIN + 8.0,
            MARGIN,
            f.slope,
            f.stderr_slope
        )
        .expect("string write");
    }
    out.push_str("</svg>\n");
    out
}
