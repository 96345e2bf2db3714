//! SVG rendering of pattern and beam-set data files.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::io::DataTable;

pub const DEFAULT_FLOOR_DB: f64 = -60.0;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const MARGIN: f64 = 60.0;
const POLAR_SIZE: f64 = 600.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PlotStyle {
    /// Normalized dB against the swept angle.
    #[default]
    Rect,
    /// Radius `(dB − floor) / −floor` at the swept angle, 0° at the top.
    Polar,
}

impl FromStr for PlotStyle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rect" => Ok(PlotStyle::Rect),
            "polar" => Ok(PlotStyle::Polar),
            other => Err(Error::Usage(format!(
                "unknown plot style '{other}' (expected rect or polar)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotOptions {
    pub style: PlotStyle,
    /// dB column to draw; `None` picks `norm_db` or `hyper_norm_db`.
    pub column: Option<String>,
    pub floor_db: f64,
}

impl Default for PlotOptions {
    fn default() -> Self {
        PlotOptions {
            style: PlotStyle::Rect,
            column: None,
            floor_db: DEFAULT_FLOOR_DB,
        }
    }
}

fn c(x: f64) -> String {
    format!("{x:.2}")
}

pub fn render_svg(table: &DataTable, opts: &PlotOptions) -> Result<String> {
    if !(opts.floor_db.is_finite() && opts.floor_db < 0.0) {
        return Err(Error::Usage(format!(
            "dB floor must be negative (got {})",
            opts.floor_db
        )));
    }
    let (angle_name, angles) = table.swept_angle()?;
    let (db_name, db) = table.db_column(opts.column.as_deref())?;
    if table.is_empty() {
        return Err(Error::Format("no rows to plot".into()));
    }
    Ok(match opts.style {
        PlotStyle::Rect => rect(angle_name, angles, db_name, db, opts.floor_db),
        PlotStyle::Polar => polar(angle_name, angles, db_name, db, opts.floor_db),
    })
}

fn header(out: &mut String, w: f64, h: f64) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
}

fn nice_step(span: f64) -> f64 {
    let raw = span / 8.0;
    let mag = 10f64.powf(raw.log10().floor());
    [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|&s| s >= raw)
        .unwrap_or(10.0 * mag)
}

fn rect(angle_name: &str, angles: &[f64], db_name: &str, db: &[f64], floor: f64) -> String {
    let (lo, hi) = angles
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| {
            (a.min(x), b.max(x))
        });
    let hi = if hi > lo { hi } else { lo + 1.0 };
    let top = db.iter().fold(floor, |m, &v| m.max(v)).max(0.0);
    let (pw, ph) = (WIDTH - 2.0 * MARGIN, HEIGHT - 2.0 * MARGIN);
    let x = |a: f64| MARGIN + (a - lo) / (hi - lo) * pw;
    let y = |v: f64| MARGIN + (top - v.max(floor)) / (top - floor) * ph;

    let mut out = String::new();
    header(&mut out, WIDTH, HEIGHT);
    let _ = writeln!(out, r##"<g stroke="#ccc" stroke-width="1">"##);
    let step = nice_step(hi - lo);
    let mut a = (lo / step).ceil() * step;
    while a <= hi + 1e-9 {
        let _ = writeln!(
            out,
            r#"<line x1="{0}" y1="{1}" x2="{0}" y2="{2}"/>"#,
            c(x(a)),
            c(MARGIN),
            c(MARGIN + ph)
        );
        a += step;
    }
    let mut v = 0.0;
    while v >= floor - 1e-9 {
        let _ = writeln!(
            out,
            r#"<line x1="{1}" y1="{0}" x2="{2}" y2="{0}"/>"#,
            c(y(v)),
            c(MARGIN),
            c(MARGIN + pw)
        );
        v -= 10.0;
    }
    let _ = writeln!(out, "</g>");

    let _ = writeln!(out, r#"<g fill="black">"#);
    let mut a = (lo / step).ceil() * step;
    while a <= hi + 1e-9 {
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
            c(x(a)),
            c(MARGIN + ph + 18.0),
            format_tick(a)
        );
        a += step;
    }
    let mut v = 0.0;
    while v >= floor - 1e-9 {
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#,
            c(MARGIN - 6.0),
            c(y(v) + 4.0),
            format_tick(v)
        );
        v -= 10.0;
    }
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle">{angle_name}</text>"#,
        c(MARGIN + pw / 2.0),
        c(HEIGHT - 12.0)
    );
    let _ = writeln!(
        out,
        r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">{db_name}</text>"#,
        c(MARGIN + ph / 2.0),
        c(MARGIN + ph / 2.0)
    );
    let _ = writeln!(out, "</g>");
    let _ = writeln!(
        out,
        r#"<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        c(MARGIN),
        c(MARGIN),
        c(pw),
        c(ph)
    );

    let points: Vec<String> = angles
        .iter()
        .zip(db)
        .map(|(&a, &v)| format!("{},{}", c(x(a)), c(y(v))))
        .collect();
    polyline(&mut out, &points);
    out.push_str("</svg>\n");
    out
}

fn polar(angle_name: &str, angles: &[f64], db_name: &str, db: &[f64], floor: f64) -> String {
    let centre = POLAR_SIZE / 2.0;
    let radius = centre - MARGIN;
    let r = |v: f64| (v.max(floor).min(0.0) - floor) / -floor * radius;
    let at = |deg: f64, rr: f64| {
        let t = deg.to_radians();
        (centre + rr * t.sin(), centre - rr * t.cos())
    };

    let mut out = String::new();
    header(&mut out, POLAR_SIZE, POLAR_SIZE);
    let _ = writeln!(out, r##"<g stroke="#ccc" stroke-width="1" fill="none">"##);
    let mut v = 0.0;
    while v > floor + 1e-9 {
        let _ = writeln!(
            out,
            r#"<circle cx="{0}" cy="{0}" r="{1}"/>"#,
            c(centre),
            c(r(v))
        );
        v -= 10.0;
    }
    for spoke in (0..360).step_by(30) {
        let (px, py) = at(spoke as f64, radius);
        let _ = writeln!(
            out,
            r#"<line x1="{0}" y1="{0}" x2="{1}" y2="{2}"/>"#,
            c(centre),
            c(px),
            c(py)
        );
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, r#"<g fill="black" text-anchor="middle">"#);
    for spoke in (0..360).step_by(30) {
        let (px, py) = at(spoke as f64, radius + 18.0);
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}">{spoke}</text>"#,
            c(px),
            c(py + 4.0)
        );
    }
    let mut v = 0.0;
    while v > floor + 1e-9 {
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}">{}</text>"#,
            c(centre + 4.0),
            c(centre - r(v) - 2.0),
            format_tick(v)
        );
        v -= 10.0;
    }
    let _ = writeln!(
        out,
        r#"<text x="{}" y="20">{db_name} vs {angle_name}</text>"#,
        c(centre)
    );
    let _ = writeln!(out, "</g>");

    let points: Vec<String> = angles
        .iter()
        .zip(db)
        .map(|(&a, &v)| {
            let (px, py) = at(a, r(v));
            format!("{},{}", c(px), c(py))
        })
        .collect();
    polyline(&mut out, &points);
    out.push_str("</svg>\n");
    out
}

fn polyline(out: &mut String, points: &[String]) {
    let _ = writeln!(
        out,
        r##"<polyline fill="none" stroke="#1f4e9c" stroke-width="1.5" points="{}"/>"##,
        points.join(" ")
    );
}

fn format_tick(v: f64) -> String {
    let v = if v == 0.0 { 0.0 } else { v };
    if v.fract() == 0.0 {
        format!("{v:.0}")
    } else {
        format!("{v}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(rows: &[(f64, f64, f64)]) -> DataTable {
        let mut text = String::from("theta_deg,phi_deg,norm_db\n");
        for (t, p, d) in rows {
            text.push_str(&format!("{t},{p},{d}\n"));
        }
        DataTable::parse(&text).unwrap()
    }

    fn vertices(svg: &str) -> usize {
        let start = svg.find("points=\"").unwrap() + 8;
        let end = svg[start..].find('"').unwrap() + start;
        svg[start..end].split(' ').count()
    }

    #[test]
    fn one_vertex_per_row() {
        let rows: Vec<_> = (0..181)
            .map(|i| (i as f64 - 90.0, 0.0, -(i as f64 - 90.0).abs() / 3.0))
            .collect();
        let svg = render_svg(&table(&rows), &PlotOptions::default()).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 1);
        assert_eq!(vertices(&svg), 181);
        let polar = PlotOptions {
            style: PlotStyle::Polar,
            ..PlotOptions::default()
        };
        assert_eq!(vertices(&render_svg(&table(&rows), &polar).unwrap()), 181);
    }

    #[test]
    fn polar_covers_full_circle_for_phi_sweep() {
        let rows: Vec<_> = (0..360).map(|i| (90.0, i as f64, 0.0)).collect();
        let opts = PlotOptions {
            style: PlotStyle::Polar,
            ..PlotOptions::default()
        };
        let svg = render_svg(&table(&rows), &opts).unwrap();
        let start = svg.find("points=\"").unwrap() + 8;
        let end = svg[start..].find('"').unwrap() + start;
        let pts: Vec<(f64, f64)> = svg[start..end]
            .split(' ')
            .map(|p| {
                let (x, y) = p.split_once(',').unwrap();
                (x.parse().unwrap(), y.parse().unwrap())
            })
            .collect();
        let (cx, cy) = (POLAR_SIZE / 2.0, POLAR_SIZE / 2.0);
        // all four quadrants reached at full radius
        for (sx, sy) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
            assert!(pts
                .iter()
                .any(|&(x, y)| (x - cx) * sx > 100.0 && (y - cy) * sy > 100.0));
        }
    }

    #[test]
    fn missing_column_is_named() {
        let t = DataTable::parse("theta_deg,phi_deg,mag\n0,0,1\n").unwrap();
        let err = render_svg(&t, &PlotOptions::default()).unwrap_err();
        assert!(matches!(err, Error::Format(_)));
        assert!(err.to_string().contains("norm_db"));
        let t = DataTable::parse("angle,norm_db\n0,0\n").unwrap();
        assert!(render_svg(&t, &PlotOptions::default())
            .unwrap_err()
            .to_string()
            .contains("theta_deg"));
    }

    #[test]
    fn floor_must_be_negative() {
        let t = table(&[(0.0, 0.0, 0.0), (1.0, 0.0, -1.0)]);
        let opts = PlotOptions {
            floor_db: 0.0,
            ..PlotOptions::default()
        };
        assert!(render_svg(&t, &opts).is_err());
    }
}
