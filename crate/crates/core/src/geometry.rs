//! Array geometry: stacked elliptical rings along the z-axis.
//!
//! All lengths are held in wavelengths, so the wave number is always `2π`
//! and patterns do not depend on the operating frequency. The frequency is
//! kept only so the physical wavelength can be reported.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Wave number for lengths measured in wavelengths.
pub const WAVE_NUMBER: f64 = 2.0 * PI;

/// Geometric and electrical description of an elliptical-cylindrical array.
///
/// Ring `m` (1-based) sits at height `(m - 1) * dv`; element `n` of every ring
/// sits at `(a cos φn, b sin φn)` with `φn = 2π(n - 1)/N`.
#[derive(Debug, Clone, PartialEq)]
pub struct EcaaConfig {
    /// Number of rings stacked along z.
    pub m_rings: usize,
    /// Elements per ring.
    pub n_per_ring: usize,
    /// Semi-axis along x, in wavelengths.
    pub a_major: f64,
    /// Semi-axis along y, in wavelengths.
    pub b_minor: f64,
    /// Vertical ring spacing, in wavelengths.
    pub dv: f64,
    /// Operating frequency in Hz.
    pub freq_hz: f64,
}

impl EcaaConfig {
    pub fn new(
        m_rings: usize,
        n_per_ring: usize,
        a_major: f64,
        b_minor: f64,
        dv: f64,
        freq_hz: f64,
    ) -> Result<Self> {
        let cfg = EcaaConfig {
            m_rings,
            n_per_ring,
            a_major,
            b_minor,
            dv,
            freq_hz,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// The baseline configuration: 3 rings of 12 elements, a = 1.15,
    /// b = 0.99, dv = 0.5, 305 MHz.
    pub fn baseline() -> Self {
        EcaaConfig {
            m_rings: 3,
            n_per_ring: 12,
            a_major: 1.15,
            b_minor: 0.99,
            dv: 0.5,
            freq_hz: 305.0e6,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.m_rings < 1 {
            return Err(Error::invalid("m_rings must be at least 1"));
        }
        if self.n_per_ring < 1 {
            return Err(Error::invalid("n_per_ring must be at least 1"));
        }
        positive("a_major", self.a_major)?;
        positive("b_minor", self.b_minor)?;
        positive("dv", self.dv)?;
        positive("freq_hz", self.freq_hz)?;
        Ok(())
    }

    pub fn total_elements(&self) -> usize {
        self.m_rings * self.n_per_ring
    }

    pub fn wave_number(&self) -> f64 {
        WAVE_NUMBER
    }

    /// Physical wavelength in meters.
    pub fn wavelength_m(&self) -> f64 {
        SPEED_OF_LIGHT / self.freq_hz
    }

    /// Angular positions of all elements of one ring, in order.
    pub fn ring_angles(&self) -> Vec<f64> {
        (0..self.n_per_ring)
            .map(|i| 2.0 * PI * i as f64 / self.n_per_ring as f64)
            .collect()
    }

    /// Distance from the ring axis to element `n` (1-based).
    pub fn element_radius(&self, n: usize) -> Result<f64> {
        let phi = ring_angle(n, self.n_per_ring)?;
        Ok((self.a_major * phi.cos()).hypot(self.b_minor * phi.sin()))
    }

    /// Descriptive axis ratio `a / b`.
    pub fn axis_ratio(&self) -> f64 {
        self.a_major / self.b_minor
    }

    /// Ellipse eccentricity, defined only when `a >= b`.
    pub fn eccentricity(&self) -> Option<f64> {
        eccentricity_from_axes(self.a_major, self.b_minor).ok()
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "{name} must be positive and finite (got {v})"
        )))
    }
}

/// Ellipse eccentricity `e`, with `0 <= e < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisRatio(f64);

impl AxisRatio {
    pub fn new(eccentricity: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&eccentricity) {
            return Err(Error::invalid(format!(
                "eccentricity must lie in [0, 1) (got {eccentricity})"
            )));
        }
        Ok(AxisRatio(eccentricity))
    }

    pub fn eccentricity(self) -> f64 {
        self.0
    }
}

/// Angular position of element `n` (1-based) on a ring of `n_per_ring`.
pub fn ring_angle(n: usize, n_per_ring: usize) -> Result<f64> {
    if n == 0 || n > n_per_ring {
        return Err(Error::invalid(format!(
            "element index {n} outside 1..={n_per_ring}"
        )));
    }
    Ok(2.0 * PI * (n - 1) as f64 / n_per_ring as f64)
}

/// `b = a √(1 − e²)`.
pub fn minor_from_eccentricity(a_major: f64, e: AxisRatio) -> Result<f64> {
    positive("a_major", a_major)?;
    let e = e.eccentricity();
    Ok(a_major * (1.0 - e * e).sqrt())
}

/// `e = √(1 − (b/a)²)`, for `0 < b <= a`.
pub fn eccentricity_from_axes(a_major: f64, b_minor: f64) -> Result<f64> {
    positive("a_major", a_major)?;
    positive("b_minor", b_minor)?;
    if b_minor > a_major {
        return Err(Error::invalid(format!(
            "eccentricity undefined for b > a ({b_minor} > {a_major})"
        )));
    }
    let q = b_minor / a_major;
    Ok(((1.0 - q) * (1.0 + q)).sqrt())
}

/// Free-space wavelength in meters for a frequency in Hz.
pub fn wavelength_m(freq_hz: f64) -> Result<f64> {
    if !(freq_hz.is_finite() && freq_hz > 0.0) {
        return Err(Error::invalid(format!(
            "frequency must be positive (got {freq_hz})"
        )));
    }
    Ok(SPEED_OF_LIGHT / freq_hz)
}
