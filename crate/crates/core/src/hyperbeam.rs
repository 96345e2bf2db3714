//! Sum, difference and hyper beams built from the two half beams.
//!
//! `S = |L| + |R|`, `D = |L − R|` and `H = (S^r − D^r)^(1/r)`. Since
//! `D <= S`, `H` is real and lies in `[0, S]`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fields::{AngleGrid, CutPlane, PatternCut};

/// Exponents below this produce grating lobes; they are computed but flagged.
pub const GRATING_LOBE_EXPONENT: f64 = 0.1;

/// Below this exponent the hyper beam is evaluated in the log domain.
const LOG_DOMAIN_EXPONENT: f64 = 0.25;

pub fn sum_beam(left: Complex64, right: Complex64) -> f64 {
    left.norm() + right.norm()
}

pub fn difference_beam(left: Complex64, right: Complex64) -> f64 {
    (left - right).norm()
}

fn check_exponent(r: f64) -> Result<()> {
    if r.is_finite() && r > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "hyper-beam exponent must be positive (got {r})"
        )))
    }
}

/// `(S^r − D^r)^(1/r)` from precomputed sum and difference magnitudes.
///
/// For `r < 0.25` the difference of powers is formed as
/// `S^r · (−expm1(r ln(D/S)))`, which keeps full relative precision when
/// `D` is close to `S`.
pub fn hyper_from_sum_diff(sum: f64, diff: f64, r: f64) -> Result<f64> {
    check_exponent(r)?;
    Ok(hyper_unchecked(sum, diff, r))
}

fn hyper_unchecked(sum: f64, diff: f64, r: f64) -> f64 {
    if sum <= 0.0 {
        return 0.0;
    }
    if diff <= 0.0 {
        return sum;
    }
    // rounding can leave |L − R| a hair above |L| + |R|
    let diff = diff.min(sum);
    if r == 1.0 {
        return sum - diff;
    }
    if r < LOG_DOMAIN_EXPONENT {
        let gap = -(r * (diff / sum).ln()).exp_m1();
        if gap <= 0.0 {
            return 0.0;
        }
        (sum * (gap.ln() / r).exp()).min(sum)
    } else {
        let radicand = (sum.powf(r) - diff.powf(r)).max(0.0);
        radicand.powf(r.recip()).min(sum)
    }
}

pub fn hyper_beam(left: Complex64, right: Complex64, r: f64) -> Result<f64> {
    hyper_from_sum_diff(sum_beam(left, right), difference_beam(left, right), r)
}

/// Sum, difference and hyper beams over a sampled cut.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamSet {
    pub plane: CutPlane,
    pub grid: AngleGrid,
    pub left: Vec<Complex64>,
    pub right: Vec<Complex64>,
    pub sum: Vec<f64>,
    pub difference: Vec<f64>,
    pub hyper: Vec<f64>,
    pub exponent: f64,
    /// Set when `exponent < 0.1`.
    pub grating_lobe_advisory: bool,
}

impl BeamSet {
    pub fn len(&self) -> usize {
        self.hyper.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hyper.is_empty()
    }
}

pub fn compose_beamset(cut: &PatternCut, r: f64) -> Result<BeamSet> {
    check_exponent(r)?;
    if cut.is_empty() {
        return Err(Error::invalid("cannot compose beams over an empty cut"));
    }
    let halves = cut
        .halves
        .as_ref()
        .ok_or(Error::OddElementCount(cut.n_per_ring))?;
    let rows: Vec<(f64, f64, f64)> = halves
        .left
        .par_iter()
        .zip(&halves.right)
        .map(|(&l, &rt)| {
            let s = sum_beam(l, rt);
            let d = difference_beam(l, rt);
            (s, d, hyper_unchecked(s, d, r))
        })
        .collect();
    let mut sum = Vec::with_capacity(rows.len());
    let mut difference = Vec::with_capacity(rows.len());
    let mut hyper = Vec::with_capacity(rows.len());
    for (s, d, h) in rows {
        sum.push(s);
        difference.push(d);
        hyper.push(h);
    }
    Ok(BeamSet {
        plane: cut.plane,
        grid: cut.grid.clone(),
        left: halves.left.clone(),
        right: halves.right.clone(),
        sum,
        difference,
        hyper,
        exponent: r,
        grating_lobe_advisory: r < GRATING_LOBE_EXPONENT,
    })
}
