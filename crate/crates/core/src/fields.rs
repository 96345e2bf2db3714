//! Complex array factor of the ring stack and its left/right half beams.
//!
//! The excitation of element `(m, n)` is
//!
//! ```text
//! A_mn = A_m · exp(j (m−1)(k dv cosθ + P_m)) · A_n · exp(j P_n)
//! ```
//!
//! and the array factor adds `A_mn · exp(j k sinθ (a cosφ cosφn + b sinφ sinφn))`
//! over all elements. Because the ring term does not depend on `m` and the
//! vertical term does not depend on `n`, the double sum factors into a
//! vertical sum times a ring sum; [`ArrayModel`] evaluates it that way.
//!
//! Steering phases are negated so every element's phase vanishes in the
//! steer direction and the main beam lands there.

use std::f64::consts::PI;
use std::ops::Range;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::EcaaConfig;
use crate::metrics::SphericalPattern;

/// Main-beam direction `(θ0, φ0)` in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Steering {
    pub theta0: f64,
    pub phi0: f64,
}

impl Steering {
    /// `θ0` must lie in `[−π/2, π/2]` and `φ0` in `[0, 2π)`.
    pub fn new(theta0: f64, phi0: f64) -> Result<Self> {
        if !(-PI / 2.0..=PI / 2.0).contains(&theta0) {
            return Err(Error::invalid(format!(
                "steering elevation {theta0} rad outside [-π/2, π/2]"
            )));
        }
        if !(0.0..2.0 * PI).contains(&phi0) {
            return Err(Error::invalid(format!(
                "steering azimuth {phi0} rad outside [0, 2π)"
            )));
        }
        Ok(Steering { theta0, phi0 })
    }

    pub fn from_degrees(theta0_deg: f64, phi0_deg: f64) -> Result<Self> {
        Self::new(theta0_deg.to_radians(), phi0_deg.to_radians())
    }

    /// Beam along the stacking axis, `θ0 = φ0 = 0`.
    pub fn boresight() -> Self {
        Steering {
            theta0: 0.0,
            phi0: 0.0,
        }
    }

    pub fn direction(&self) -> Direction {
        Direction::new(self.theta0, self.phi0)
    }
}

/// Observation direction in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction {
    pub theta: f64,
    pub phi: f64,
}

impl Direction {
    pub fn new(theta: f64, phi: f64) -> Self {
        Direction { theta, phi }
    }

    pub fn from_degrees(theta_deg: f64, phi_deg: f64) -> Self {
        Direction::new(theta_deg.to_radians(), phi_deg.to_radians())
    }
}

/// Amplitude weights per ring (`A_m`) and per ring position (`A_n`).
#[derive(Debug, Clone, PartialEq)]
pub struct Excitation {
    pub ring_amp: Vec<f64>,
    pub element_amp: Vec<f64>,
}

impl Excitation {
    pub fn uniform(config: &EcaaConfig) -> Self {
        Excitation {
            ring_amp: vec![1.0; config.m_rings],
            element_amp: vec![1.0; config.n_per_ring],
        }
    }

    pub fn new(ring_amp: Vec<f64>, element_amp: Vec<f64>) -> Result<Self> {
        let exc = Excitation {
            ring_amp,
            element_amp,
        };
        if exc
            .ring_amp
            .iter()
            .chain(&exc.element_amp)
            .any(|&a| !(a.is_finite() && a >= 0.0))
        {
            return Err(Error::invalid(
                "excitation amplitudes must be finite and >= 0",
            ));
        }
        Ok(exc)
    }

    pub fn is_uniform(&self) -> bool {
        self.ring_amp
            .iter()
            .chain(&self.element_amp)
            .all(|&a| a == 1.0)
    }

    pub fn validate_for(&self, config: &EcaaConfig) -> Result<()> {
        if self.ring_amp.len() != config.m_rings {
            return Err(Error::invalid(format!(
                "{} ring amplitudes for {} rings",
                self.ring_amp.len(),
                config.m_rings
            )));
        }
        if self.element_amp.len() != config.n_per_ring {
            return Err(Error::invalid(format!(
                "{} element amplitudes for {} elements per ring",
                self.element_amp.len(),
                config.n_per_ring
            )));
        }
        Excitation::new(self.ring_amp.clone(), self.element_amp.clone()).map(|_| ())
    }

    /// Upper bound on `|AF|`: `Σ_m A_m · Σ_n A_n`.
    pub fn magnitude_bound(&self) -> f64 {
        self.ring_amp.iter().sum::<f64>() * self.element_amp.iter().sum::<f64>()
    }
}

/// Progressive phase of the ring stack and per-element ring phases.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementPhases {
    pub pm: f64,
    pub pn: Vec<f64>,
}

impl ElementPhases {
    /// All phases zero.
    pub fn zero(n_per_ring: usize) -> Self {
        ElementPhases {
            pm: 0.0,
            pn: vec![0.0; n_per_ring],
        }
    }
}

// Shared by the propagation and steering terms so the two cancel bit-exactly
// in the steer direction.
#[inline]
fn ring_projection(a: f64, b: f64, cos_phi: f64, sin_phi: f64, cos_n: f64, sin_n: f64) -> f64 {
    a * (cos_phi * cos_n) + b * (sin_phi * sin_n)
}

#[inline]
fn vertical_phase(k_dv: f64, theta: f64) -> f64 {
    k_dv * theta.cos()
}

fn ring_trig(config: &EcaaConfig) -> (Vec<f64>, Vec<f64>) {
    config
        .ring_angles()
        .into_iter()
        .map(|phi| (phi.cos(), phi.sin()))
        .unzip()
}

/// Steering phases `P_m = −k dv cosθ0` and
/// `P_n = −k sinθ0 (a cosφn cosφ0 + b sinφn sinφ0)`.
pub fn steering_phases(config: &EcaaConfig, steer: &Steering) -> ElementPhases {
    let k = config.wave_number();
    let (cos_n, sin_n) = ring_trig(config);
    let (cos0, sin0) = (steer.phi0.cos(), steer.phi0.sin());
    let k_sin0 = k * steer.theta0.sin();
    let pn = cos_n
        .iter()
        .zip(&sin_n)
        .map(|(&c, &s)| {
            -(k_sin0 * ring_projection(config.a_major, config.b_minor, cos0, sin0, c, s))
        })
        .collect();
    ElementPhases {
        pm: -vertical_phase(k * config.dv, steer.theta0),
        pn,
    }
}

/// Field value of the whole array plus, for even `N`, its two half beams.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSample {
    pub af: Complex64,
    pub halves: Option<(Complex64, Complex64)>,
}

/// Precomputed evaluator for one configuration, excitation and steering.
#[derive(Debug, Clone)]
pub struct ArrayModel {
    config: EcaaConfig,
    excitation: Excitation,
    phases: ElementPhases,
    cos_n: Vec<f64>,
    sin_n: Vec<f64>,
}

impl ArrayModel {
    pub fn new(config: &EcaaConfig, excitation: &Excitation, steer: &Steering) -> Result<Self> {
        config.validate()?;
        Self::with_phases(config, excitation, steering_phases(config, steer))
    }

    /// Evaluator with explicit phases, e.g. [`ElementPhases::zero`] for an
    /// array with no steering network.
    pub fn with_phases(
        config: &EcaaConfig,
        excitation: &Excitation,
        phases: ElementPhases,
    ) -> Result<Self> {
        config.validate()?;
        excitation.validate_for(config)?;
        if phases.pn.len() != config.n_per_ring {
            return Err(Error::invalid(format!(
                "{} ring phases for {} elements per ring",
                phases.pn.len(),
                config.n_per_ring
            )));
        }
        let (cos_n, sin_n) = ring_trig(config);
        Ok(ArrayModel {
            config: config.clone(),
            excitation: excitation.clone(),
            phases,
            cos_n,
            sin_n,
        })
    }

    pub fn config(&self) -> &EcaaConfig {
        &self.config
    }

    pub fn excitation(&self) -> &Excitation {
        &self.excitation
    }

    pub fn phases(&self) -> &ElementPhases {
        &self.phases
    }

    fn vertical_sum(&self, theta: f64) -> Complex64 {
        let psi =
            vertical_phase(self.config.wave_number() * self.config.dv, theta) + self.phases.pm;
        self.excitation
            .ring_amp
            .iter()
            .enumerate()
            .map(|(m, &amp)| amp * Complex64::cis(m as f64 * psi))
            .sum()
    }

    fn ring_sum(&self, dir: &Direction, range: Range<usize>) -> Complex64 {
        let k_sin = self.config.wave_number() * dir.theta.sin();
        let (cos_phi, sin_phi) = (dir.phi.cos(), dir.phi.sin());
        let (a, b) = (self.config.a_major, self.config.b_minor);
        range
            .map(|n| {
                let proj = ring_projection(a, b, cos_phi, sin_phi, self.cos_n[n], self.sin_n[n]);
                self.excitation.element_amp[n] * Complex64::cis(k_sin * proj + self.phases.pn[n])
            })
            .sum()
    }

    /// Array factor and (for even `N`) both half beams at one direction.
    pub fn sample(&self, dir: &Direction) -> FieldSample {
        let n = self.config.n_per_ring;
        let vertical = self.vertical_sum(dir.theta);
        let left = self.ring_sum(dir, 0..n / 2);
        let right = self.ring_sum(dir, n / 2..n);
        let af = vertical * (left + right);
        let halves = n
            .is_multiple_of(2)
            .then(|| (vertical * left, vertical * right));
        FieldSample { af, halves }
    }

    pub fn array_factor(&self, dir: &Direction) -> Complex64 {
        self.sample(dir).af
    }

    /// `(R_left, R_right)`: elements `1..=N/2` and `N/2+1..=N` of every ring.
    pub fn half_beams(&self, dir: &Direction) -> Result<(Complex64, Complex64)> {
        self.sample(dir)
            .halves
            .ok_or(Error::OddElementCount(self.config.n_per_ring))
    }
}

/// Array factor at a single direction.
pub fn array_factor(
    config: &EcaaConfig,
    exc: &Excitation,
    steer: &Steering,
    dir: &Direction,
) -> Result<Complex64> {
    Ok(ArrayModel::new(config, exc, steer)?.array_factor(dir))
}

/// Left and right half beams at a single direction. Requires even `N`.
pub fn half_beams(
    config: &EcaaConfig,
    exc: &Excitation,
    steer: &Steering,
    dir: &Direction,
) -> Result<(Complex64, Complex64)> {
    if !config.n_per_ring.is_multiple_of(2) {
        return Err(Error::OddElementCount(config.n_per_ring));
    }
    ArrayModel::new(config, exc, steer)?.half_beams(dir)
}

/// Strictly increasing sample angles, stored in radians.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleGrid {
    angles: Vec<f64>,
}

impl AngleGrid {
    pub fn new(angles: Vec<f64>) -> Result<Self> {
        if angles.len() < 2 {
            return Err(Error::invalid(format!(
                "angle grid needs at least 2 points (got {})",
                angles.len()
            )));
        }
        if angles.iter().any(|a| !a.is_finite()) {
            return Err(Error::invalid("angle grid contains non-finite values"));
        }
        if angles.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("angle grid must be strictly increasing"));
        }
        Ok(AngleGrid { angles })
    }

    /// `start, start + step, …` up to and including `stop` (in degrees).
    ///
    /// The point count is `round((stop − start)/step) + 1` and every angle is
    /// computed from its index, so there is no accumulated drift.
    pub fn from_degrees(start: f64, stop: f64, step: f64) -> Result<Self> {
        if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
            return Err(Error::invalid("grid bounds must be finite"));
        }
        if step <= 0.0 {
            return Err(Error::invalid(format!(
                "grid step must be positive (got {step})"
            )));
        }
        if stop <= start {
            return Err(Error::invalid(format!(
                "grid stop {stop} must exceed start {start}"
            )));
        }
        let count = ((stop - start) / step).round() as usize + 1;
        let angles = (0..count)
            .map(|i| (start + i as f64 * step).to_radians())
            .collect();
        AngleGrid::new(angles)
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    pub fn radians(&self) -> &[f64] {
        &self.angles
    }

    pub fn degrees(&self) -> Vec<f64> {
        self.angles.iter().map(|a| a.to_degrees()).collect()
    }
}

/// Which angle is held fixed while the grid sweeps the other.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CutPlane {
    /// Fixed azimuth (radians); the grid sweeps θ.
    FixedPhi(f64),
    /// Fixed elevation (radians); the grid sweeps φ.
    FixedTheta(f64),
}

impl CutPlane {
    pub fn direction(&self, swept: f64) -> Direction {
        match *self {
            CutPlane::FixedPhi(phi) => Direction::new(swept, phi),
            CutPlane::FixedTheta(theta) => Direction::new(theta, swept),
        }
    }
}

/// Complex left/right half beams co-sampled with a cut.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfBeams {
    pub left: Vec<Complex64>,
    pub right: Vec<Complex64>,
}

/// Complex field samples along one pattern cut.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternCut {
    pub plane: CutPlane,
    pub grid: AngleGrid,
    pub af: Vec<Complex64>,
    /// Elements per ring of the sampled array.
    pub n_per_ring: usize,
    /// Present only when `N` is even.
    pub halves: Option<HalfBeams>,
}

impl PatternCut {
    pub fn len(&self) -> usize {
        self.af.len()
    }

    pub fn is_empty(&self) -> bool {
        self.af.is_empty()
    }

    pub fn directions(&self) -> impl Iterator<Item = Direction> + '_ {
        self.grid.radians().iter().map(|&a| self.plane.direction(a))
    }

    pub fn magnitudes(&self) -> Vec<f64> {
        self.af.iter().map(|z| z.norm()).collect()
    }
}

/// Sample a cut with a prepared model. Grid points are evaluated in
/// parallel; each is independent, so the result equals sequential evaluation.
pub fn sample_cut_with(model: &ArrayModel, plane: CutPlane, grid: &AngleGrid) -> PatternCut {
    let samples: Vec<FieldSample> = grid
        .radians()
        .par_iter()
        .map(|&a| model.sample(&plane.direction(a)))
        .collect();
    let af = samples.iter().map(|s| s.af).collect();
    let halves = model.config().n_per_ring.is_multiple_of(2).then(|| {
        let (left, right) = samples
            .iter()
            .map(|s| s.halves.expect("even N has halves"))
            .unzip();
        HalfBeams { left, right }
    });
    PatternCut {
        plane,
        grid: grid.clone(),
        af,
        n_per_ring: model.config().n_per_ring,
        halves,
    }
}

pub fn sample_cut(
    config: &EcaaConfig,
    exc: &Excitation,
    steer: &Steering,
    plane: CutPlane,
    grid: &AngleGrid,
) -> Result<PatternCut> {
    let model = ArrayModel::new(config, exc, steer)?;
    Ok(sample_cut_with(&model, plane, grid))
}

/// Sample `|AF|` over the whole sphere for [`directivity_estimate`].
///
/// [`directivity_estimate`]: crate::metrics::directivity_estimate
pub fn sample_sphere(
    model: &ArrayModel,
    theta_step_deg: f64,
    phi_step_deg: f64,
) -> Result<SphericalPattern> {
    for step in [theta_step_deg, phi_step_deg] {
        if !(step.is_finite() && step > 0.0) {
            return Err(Error::invalid(format!(
                "sphere step must be positive (got {step})"
            )));
        }
    }
    let theta_count = (180.0 / theta_step_deg).round() as usize + 1;
    let phi_count = (360.0 / phi_step_deg).round() as usize;
    let grid = SphericalPattern::from_fn(theta_count, phi_count, |_, _| 0.0);
    let magnitude = grid
        .theta
        .par_iter()
        .flat_map_iter(|&t| {
            grid.phi
                .iter()
                .map(move |&p| model.array_factor(&Direction::new(t, p)).norm())
        })
        .collect();
    Ok(SphericalPattern { magnitude, ..grid })
}
