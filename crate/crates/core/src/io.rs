//! Delimited data files and number formatting.

use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::fields::{CutPlane, PatternCut};
use crate::hyperbeam::BeamSet;
use crate::metrics::normalize_db;

pub const PATTERN_HEADER: &[&str] = &["theta_deg", "phi_deg", "re", "im", "mag", "norm_db"];
pub const BEAMSET_HEADER: &[&str] = &[
    "theta_deg",
    "phi_deg",
    "sum",
    "diff",
    "hyper",
    "hyper_norm_db",
];

const SIGNIFICANT: usize = 9;

/// Nine significant digits, shortest form, `.` as decimal separator.
///
/// Fixed notation is used for decimal exponents in `[-5, 9)`, otherwise
/// scientific (`1.5e-07`). Zero is written as `0`.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{:.*e}", SIGNIFICANT - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..SIGNIFICANT as i32).contains(&exp) {
        let decimals = (SIGNIFICANT as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, x))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!(
            "{}e{sign}{:02}",
            trim_zeros(mantissa.to_string()),
            exp.abs()
        )
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// `x` rounded to the precision written by [`fmt_num`].
pub fn round_sig(x: f64) -> f64 {
    fmt_num(x).parse().unwrap_or(x)
}

/// Write `bytes` to `path` through a temporary file in the same directory,
/// or to standard output when `path` is `None` or `-`.
pub fn write_output(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        None => write_stdout(bytes),
        Some(p) if p.as_os_str() == "-" => write_stdout(bytes),
        Some(p) => write_atomic(p, bytes),
    }
}

fn write_stdout(bytes: &[u8]) -> Result<()> {
    let mut out = std::io::stdout().lock();
    out.write_all(bytes)
        .and_then(|_| out.flush())
        .map_err(|e| Error::io("<stdout>", e))
}

pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(path, e))?;
    tmp.write_all(bytes).map_err(|e| Error::io(path, e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

fn cut_angles_deg(plane: CutPlane, swept: &[f64]) -> Vec<(f64, f64)> {
    swept
        .iter()
        .map(|&s| {
            let d = plane.direction(s);
            (d.theta.to_degrees(), d.phi.to_degrees())
        })
        .collect()
}

fn push_row(out: &mut String, fields: &[f64]) {
    let row: Vec<String> = fields.iter().map(|&v| fmt_num(v)).collect();
    out.push_str(&row.join(","));
    out.push('\n');
}

/// Pattern table: one row per grid point.
pub fn pattern_table(cut: &PatternCut) -> Result<String> {
    let mags = cut.magnitudes();
    let db = normalize_db(&mags)?;
    let mut out = PATTERN_HEADER.join(",");
    out.push('\n');
    for (i, (theta, phi)) in cut_angles_deg(cut.plane, cut.grid.radians())
        .into_iter()
        .enumerate()
    {
        let af = cut.af[i];
        push_row(&mut out, &[theta, phi, af.re, af.im, mags[i], db[i]]);
    }
    Ok(out)
}

/// Beam-set table: sum, difference and hyper beams per grid point.
pub fn beamset_table(beams: &BeamSet) -> Result<String> {
    let db = normalize_db(&beams.hyper)?;
    let mut out = BEAMSET_HEADER.join(",");
    out.push('\n');
    for (i, (theta, phi)) in cut_angles_deg(beams.plane, beams.grid.radians())
        .into_iter()
        .enumerate()
    {
        push_row(
            &mut out,
            &[
                theta,
                phi,
                beams.sum[i],
                beams.difference[i],
                beams.hyper[i],
                db[i],
            ],
        );
    }
    Ok(out)
}

/// A parsed numeric table with named columns.
#[derive(Debug, Clone, PartialEq)]
pub struct DataTable {
    pub header: Vec<String>,
    pub columns: Vec<Vec<f64>>,
}

impl DataTable {
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header: Vec<String> = lines
            .next()
            .ok_or_else(|| Error::Format("empty data file".into()))?
            .split(',')
            .map(|h| h.trim().to_string())
            .collect();
        let mut columns = vec![Vec::new(); header.len()];
        for (i, line) in lines.enumerate() {
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != header.len() {
                return Err(Error::Format(format!(
                    "row {}: expected {} fields, found {}",
                    i + 1,
                    header.len(),
                    fields.len()
                )));
            }
            for (col, field) in columns.iter_mut().zip(fields) {
                let v = field.trim().parse::<f64>().map_err(|_| {
                    Error::Format(format!("row {}: '{}' is not a number", i + 1, field.trim()))
                })?;
                col.push(v);
            }
        }
        if columns.first().is_none_or(|c| c.is_empty()) {
            return Err(Error::Format("data file has a header but no rows".into()));
        }
        Ok(DataTable { header, columns })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        DataTable::parse(&text)
    }

    pub fn len(&self) -> usize {
        self.columns.first().map_or(0, Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn has(&self, name: &str) -> bool {
        self.header.iter().any(|h| h == name)
    }

    pub fn column(&self, name: &str) -> Result<&[f64]> {
        self.header
            .iter()
            .position(|h| h == name)
            .map(|i| self.columns[i].as_slice())
            .ok_or_else(|| Error::Format(format!("missing column '{name}'")))
    }

    /// The dB column: `column` if given, else `norm_db` or `hyper_norm_db`.
    pub fn db_column(&self, column: Option<&str>) -> Result<(&str, &[f64])> {
        let name = match column {
            Some(c) => c,
            None if self.has("norm_db") => "norm_db",
            None if self.has("hyper_norm_db") => "hyper_norm_db",
            None => {
                return Err(Error::Format(
                    "missing column 'norm_db' (or 'hyper_norm_db')".into(),
                ))
            }
        };
        let col = self.column(name)?;
        let name = self.header.iter().find(|h| *h == name).expect("present");
        Ok((name.as_str(), col))
    }

    /// The swept angle in degrees: `theta_deg`, unless θ is constant and φ varies.
    pub fn swept_angle(&self) -> Result<(&'static str, &[f64])> {
        let theta = self.column("theta_deg")?;
        let phi = self.column("phi_deg")?;
        let constant = |c: &[f64]| c.iter().all(|&v| v == c[0]);
        if constant(theta) && !constant(phi) {
            Ok(("phi_deg", phi))
        } else {
            Ok(("theta_deg", theta))
        }
    }
}
