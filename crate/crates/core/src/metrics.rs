//! Pattern normalization and beam metrics: SLL, FNBW, HPBW and a
//! quadrature directivity estimate.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Side};

/// Level assigned to exact zeros by [`normalize_db`].
pub const DB_FLOOR: f64 = -200.0;

/// Half-power level below the peak, in dB.
pub const HALF_POWER_DB: f64 = 3.0;

/// A side lobe within this many dB of the peak is flagged as a grating lobe.
pub const GRATING_LOBE_MARGIN_DB: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatternMetrics {
    /// Angle of the main-lobe maximum, degrees.
    pub peak_angle: f64,
    /// Highest side lobe relative to the peak, dB (<= 0).
    pub sll_db: f64,
    /// Null-to-null width of the main lobe, degrees.
    pub fnbw_deg: f64,
    /// Width between the −3 dB crossings, degrees.
    pub hpbw_deg: f64,
    /// Only available for full-sphere patterns.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub directivity_dbi: Option<f64>,
    /// Set when the highest side lobe is within 0.5 dB of the peak.
    #[serde(default)]
    pub grating_lobe: bool,
}

/// `20 log10(s / max s)`. Exact zeros map to −200 dB, or to the lowest
/// non-zero level when the pattern dips deeper than that, so a true null is
/// never shallower than its neighbours.
pub fn normalize_db(samples: &[f64]) -> Result<Vec<f64>> {
    if samples.iter().any(|s| !(s.is_finite() && *s >= 0.0)) {
        return Err(Error::invalid(
            "pattern samples must be finite and non-negative",
        ));
    }
    let peak = samples.iter().copied().fold(0.0, f64::max);
    if peak <= 0.0 {
        return Err(Error::invalid("pattern has no positive sample"));
    }
    let db: Vec<f64> = samples
        .iter()
        .map(|&s| {
            if s == 0.0 {
                f64::INFINITY
            } else {
                20.0 * (s / peak).log10()
            }
        })
        .collect();
    let floor = db.iter().copied().fold(DB_FLOOR, f64::min);
    Ok(db
        .into_iter()
        .map(|v| if v == f64::INFINITY { floor } else { v })
        .collect())
}

/// Peak index: the middle of the first run of samples equal to the maximum.
fn peak_index(db: &[f64]) -> usize {
    let max = db.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let first = db.iter().position(|&v| v == max).unwrap_or(0);
    let run = db[first..].iter().take_while(|&&v| v == max).count();
    first + (run - 1) / 2
}

/// Walk downhill from the peak to the first local minimum on one side.
///
/// Plateaus are walked across; the minimum reported is the plateau sample
/// nearest the peak. `None` when the descent runs into the boundary.
fn first_null(db: &[f64], peak: usize, side: Side) -> Option<usize> {
    let last = db.len() - 1;
    let step = |i: usize| -> Option<usize> {
        match side {
            Side::Left => i.checked_sub(1),
            Side::Right => (i < last).then_some(i + 1),
        }
    };
    let back = |i: usize| match side {
        Side::Left => i + 1,
        Side::Right => i - 1,
    };
    let mut i = peak;
    loop {
        let next = step(i)?;
        if db[next] > db[i] {
            break;
        }
        i = next;
    }
    while i != peak && db[back(i)] == db[i] {
        i = back(i);
    }
    (i != peak).then_some(i)
}

/// Linearly interpolated angle where the pattern first drops to `level`.
fn crossing(angles: &[f64], db: &[f64], peak: usize, level: f64, side: Side) -> Option<f64> {
    let outward: Box<dyn Iterator<Item = usize>> = match side {
        Side::Left => Box::new((0..peak).rev()),
        Side::Right => Box::new(peak + 1..db.len()),
    };
    for j in outward {
        if db[j] <= level {
            let inner = match side {
                Side::Left => j + 1,
                Side::Right => j - 1,
            };
            let t = (level - db[j]) / (db[inner] - db[j]);
            return Some(angles[j] + t * (angles[inner] - angles[j]));
        }
    }
    None
}

/// Extract SLL, FNBW, HPBW and peak direction from a sampled dB cut.
///
/// The first nulls are the nearest local minima on either side of the peak;
/// SLL is the highest sample outside the open null-to-null interval.
pub fn extract_metrics(angles_deg: &[f64], db: &[f64]) -> Result<PatternMetrics> {
    if angles_deg.len() != db.len() {
        return Err(Error::invalid(format!(
            "{} angles for {} samples",
            angles_deg.len(),
            db.len()
        )));
    }
    if db.len() < 3 {
        return Err(Error::invalid("at least 3 samples are needed for metrics"));
    }
    if db.iter().chain(angles_deg).any(|v| !v.is_finite()) {
        return Err(Error::invalid("non-finite sample in pattern cut"));
    }
    let peak = peak_index(db);
    if peak == 0 || peak == db.len() - 1 {
        return Err(Error::PeakAtEdge);
    }
    let left = first_null(db, peak, Side::Left).ok_or(Error::NoSidelobeStructure(Side::Left))?;
    let right = first_null(db, peak, Side::Right).ok_or(Error::NoSidelobeStructure(Side::Right))?;
    let peak_db = db[peak];
    let side_lobe = db[..=left]
        .iter()
        .chain(&db[right..])
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let sll_db = side_lobe - peak_db;

    let level = peak_db - HALF_POWER_DB;
    let lo = crossing(angles_deg, db, peak, level, Side::Left)
        .ok_or(Error::NoHalfPowerCrossing(Side::Left))?;
    let hi = crossing(angles_deg, db, peak, level, Side::Right)
        .ok_or(Error::NoHalfPowerCrossing(Side::Right))?;

    Ok(PatternMetrics {
        peak_angle: angles_deg[peak],
        sll_db,
        fnbw_deg: (angles_deg[right] - angles_deg[left]).abs(),
        hpbw_deg: (hi - lo).abs(),
        directivity_dbi: None,
        grating_lobe: sll_db >= -GRATING_LOBE_MARGIN_DB,
    })
}

/// Normalize linear magnitudes and extract metrics in one step.
pub fn cut_metrics(angles_deg: &[f64], magnitudes: &[f64]) -> Result<PatternMetrics> {
    extract_metrics(angles_deg, &normalize_db(magnitudes)?)
}

/// Field magnitudes over the whole sphere.
///
/// `theta` runs from 0 to π inclusive; `phi` is uniform over `[0, 2π)`.
/// `magnitude[i * phi.len() + j]` belongs to `(theta[i], phi[j])`.
#[derive(Debug, Clone, PartialEq)]
pub struct SphericalPattern {
    pub theta: Vec<f64>,
    pub phi: Vec<f64>,
    pub magnitude: Vec<f64>,
}

impl SphericalPattern {
    /// Uniform grid with `theta_count` points over `[0, π]` and `phi_count`
    /// points over `[0, 2π)`, filled by `f(θ, φ)`.
    pub fn from_fn(theta_count: usize, phi_count: usize, f: impl Fn(f64, f64) -> f64) -> Self {
        let theta: Vec<f64> = (0..theta_count)
            .map(|i| PI * i as f64 / (theta_count - 1) as f64)
            .collect();
        let phi: Vec<f64> = (0..phi_count)
            .map(|j| 2.0 * PI * j as f64 / phi_count as f64)
            .collect();
        let magnitude = theta
            .iter()
            .flat_map(|&t| phi.iter().map(move |&p| (t, p)))
            .map(|(t, p)| f(t, p))
            .collect();
        SphericalPattern {
            theta,
            phi,
            magnitude,
        }
    }

    fn check_coverage(&self) -> Result<()> {
        let max_step = 1.0f64.to_radians() * (1.0 + 1e-9);
        let tol = 1e-9;
        let incomplete =
            |why: &str| Err(Error::invalid(format!("incomplete sphere coverage: {why}")));
        if self.theta.len() < 2 || self.phi.len() < 2 {
            return incomplete("too few samples");
        }
        if self.magnitude.len() != self.theta.len() * self.phi.len() {
            return incomplete("magnitude table does not match the grid");
        }
        if self.theta[0].abs() > tol || (self.theta[self.theta.len() - 1] - PI).abs() > tol {
            return incomplete("theta must span [0, π]");
        }
        if self
            .theta
            .windows(2)
            .any(|w| w[1] <= w[0] || w[1] - w[0] > max_step)
        {
            return incomplete("theta steps must be increasing and at most 1°");
        }
        let dphi = 2.0 * PI / self.phi.len() as f64;
        if dphi > max_step {
            return incomplete("phi step exceeds 1°");
        }
        if self
            .phi
            .iter()
            .enumerate()
            .any(|(j, &p)| (p - j as f64 * dphi).abs() > tol)
        {
            return incomplete("phi must be uniform over [0, 2π)");
        }
        if self.magnitude.iter().any(|m| !(m.is_finite() && *m >= 0.0)) {
            return Err(Error::invalid("pattern magnitudes must be finite and >= 0"));
        }
        Ok(())
    }
}

/// `D = 4π max|F|² / ∮|F|² dΩ` in dBi, trapezoidal in θ and periodic in φ.
pub fn directivity_estimate(pattern: &SphericalPattern) -> Result<f64> {
    pattern.check_coverage()?;
    let nphi = pattern.phi.len();
    let dphi = 2.0 * PI / nphi as f64;
    let ring_power: Vec<f64> = pattern
        .magnitude
        .chunks(nphi)
        .map(|row| row.iter().map(|m| m * m).sum::<f64>() * dphi)
        .collect();
    let integral: f64 = pattern
        .theta
        .windows(2)
        .zip(ring_power.windows(2))
        .map(|(t, p)| 0.5 * (t[1] - t[0]) * (p[0] * t[0].sin() + p[1] * t[1].sin()))
        .sum();
    let peak = pattern.magnitude.iter().copied().fold(0.0, f64::max);
    if integral.is_nan() || integral <= 0.0 {
        return Err(Error::invalid("pattern radiates no power"));
    }
    Ok(10.0 * (4.0 * PI * peak * peak / integral).log10())
}
