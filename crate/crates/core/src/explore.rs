//! Parameter studies over the array geometry and the hyper-beam exponent,
//! plus the iterative random search for the vertical ring spacing.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fields::{sample_cut, AngleGrid, CutPlane, Excitation, PatternCut, Steering};
use crate::geometry::EcaaConfig;
use crate::hyperbeam::{compose_beamset, BeamSet};
use crate::metrics::{cut_metrics, PatternMetrics};

/// Everything needed to turn a configuration into one set of metrics.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub config: EcaaConfig,
    pub steering: Steering,
    pub excitation: Excitation,
    /// When set, metrics are taken from the hyper beam instead of `|AF|`.
    pub exponent: Option<f64>,
    pub plane: CutPlane,
    pub grid: AngleGrid,
}

impl Scenario {
    /// Uniform excitation, beam steered along the ring axis, θ swept over
    /// `[−90°, 90°]` in 0.05° steps in the `φ = 0` plane.
    pub fn new(config: EcaaConfig) -> Self {
        let excitation = Excitation::uniform(&config);
        Scenario {
            config,
            steering: Steering::boresight(),
            excitation,
            exponent: None,
            plane: CutPlane::FixedPhi(0.0),
            grid: default_grid(),
        }
    }

    pub fn baseline() -> Self {
        Scenario::new(EcaaConfig::baseline())
    }

    pub fn with_exponent(mut self, r: Option<f64>) -> Self {
        self.exponent = r;
        self
    }

    /// Same scenario with a different geometry. A uniform excitation is
    /// regenerated to the new size; a tapered one must keep its shape.
    pub fn with_config(&self, config: EcaaConfig) -> Result<Scenario> {
        config.validate()?;
        let excitation = if self.excitation.is_uniform() {
            Excitation::uniform(&config)
        } else {
            self.excitation.validate_for(&config)?;
            self.excitation.clone()
        };
        Ok(Scenario {
            config,
            excitation,
            ..self.clone()
        })
    }

    pub fn cut(&self) -> Result<PatternCut> {
        sample_cut(
            &self.config,
            &self.excitation,
            &self.steering,
            self.plane,
            &self.grid,
        )
    }

    /// The sampled cut and, when an exponent is set, its beam set.
    pub fn beams(&self) -> Result<(PatternCut, Option<BeamSet>)> {
        let cut = self.cut()?;
        let beams = match self.exponent {
            Some(r) => Some(compose_beamset(&cut, r)?),
            None => None,
        };
        Ok((cut, beams))
    }

    pub fn metrics(&self) -> Result<PatternMetrics> {
        let (cut, beams) = self.beams()?;
        let magnitudes = match &beams {
            Some(bs) => bs.hyper.clone(),
            None => cut.magnitudes(),
        };
        cut_metrics(&self.grid.degrees(), &magnitudes)
    }
}

/// θ from −90° to 90° in 0.05° steps.
pub fn default_grid() -> AngleGrid {
    AngleGrid::from_degrees(-90.0, 90.0, 0.05).expect("static grid is valid")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParameter {
    /// Total element count `M · N`, realized per [`ElementLayout`].
    Elements,
    /// Number of rings `M`.
    Rings,
    /// Semi-axis `a` with `b` held fixed.
    MajorAxis,
    /// Vertical ring spacing `dv`.
    Spacing,
    /// Hyper-beam exponent `r`.
    Exponent,
}

impl SweepParameter {
    pub fn name(self) -> &'static str {
        match self {
            SweepParameter::Elements => "elements",
            SweepParameter::Rings => "rings",
            SweepParameter::MajorAxis => "major_axis",
            SweepParameter::Spacing => "spacing",
            SweepParameter::Exponent => "exponent",
        }
    }
}

impl fmt::Display for SweepParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepParameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "elements" => Ok(SweepParameter::Elements),
            "rings" => Ok(SweepParameter::Rings),
            "major_axis" | "major-axis" => Ok(SweepParameter::MajorAxis),
            "spacing" => Ok(SweepParameter::Spacing),
            "exponent" => Ok(SweepParameter::Exponent),
            other => Err(Error::Usage(format!(
                "unknown sweep parameter '{other}' (expected elements, rings, major_axis, spacing or exponent)"
            ))),
        }
    }
}

/// How a total element count is split into rings and elements per ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ElementLayout {
    /// Keep `M` from the base and set `N = total / M`.
    #[default]
    PerRing,
    /// Keep `N` from the base and add rings (`M = total / N`); when the total
    /// is not a multiple of `N`, keep `M` and set `N = total / M`.
    /// With the 3 × 12 baseline: 18 → 3 × 6, 36 → 3 × 12, 72 → 6 × 12, …
    RingsFirst,
}

impl FromStr for ElementLayout {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rings-first" | "rings_first" => Ok(ElementLayout::RingsFirst),
            "per-ring" | "per_ring" => Ok(ElementLayout::PerRing),
            other => Err(Error::Usage(format!(
                "unknown element layout '{other}' (expected rings-first or per-ring)"
            ))),
        }
    }
}

impl ElementLayout {
    /// `(M, N)` for `total` elements starting from `base`.
    pub fn split(self, base: &EcaaConfig, total: usize) -> Result<(usize, usize)> {
        let (m, n) = (base.m_rings, base.n_per_ring);
        let by_rings = (total.is_multiple_of(m) && total >= m).then(|| (m, total / m));
        let by_elements = (total.is_multiple_of(n) && total >= n).then(|| (total / n, n));
        let split = match self {
            ElementLayout::RingsFirst => by_elements.or(by_rings),
            ElementLayout::PerRing => by_rings,
        };
        split.ok_or_else(|| {
            Error::invalid(format!(
                "{total} elements cannot be laid out from a {m} x {n} base"
            ))
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub parameter: SweepParameter,
    pub values: Vec<f64>,
    pub base: Scenario,
    pub layout: ElementLayout,
}

impl SweepSpec {
    pub fn new(parameter: SweepParameter, values: Vec<f64>, base: Scenario) -> Self {
        SweepSpec {
            parameter,
            values,
            base,
            layout: ElementLayout::default(),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(Error::invalid("sweep needs at least one value"));
        }
        let increasing = self.values.windows(2).all(|w| w[1] > w[0]);
        let decreasing = self.values.windows(2).all(|w| w[1] < w[0]);
        if !(increasing || decreasing) {
            return Err(Error::invalid("sweep values must be strictly monotone"));
        }
        Ok(())
    }

    /// The scenario evaluated for one sweep value.
    pub fn scenario_for(&self, value: f64) -> Result<Scenario> {
        let base = &self.base;
        let mut cfg = base.config.clone();
        match self.parameter {
            SweepParameter::Elements => {
                let total = whole(value, "element count")?;
                let (m, n) = self.layout.split(&cfg, total)?;
                cfg.m_rings = m;
                cfg.n_per_ring = n;
            }
            SweepParameter::Rings => cfg.m_rings = whole(value, "ring count")?,
            SweepParameter::MajorAxis => cfg.a_major = value,
            SweepParameter::Spacing => cfg.dv = value,
            SweepParameter::Exponent => {
                if !(value.is_finite() && value > 0.0) {
                    return Err(Error::invalid(format!(
                        "exponent must be positive (got {value})"
                    )));
                }
                return Ok(base.clone().with_exponent(Some(value)));
            }
        }
        if base.exponent.is_some() && !cfg.n_per_ring.is_multiple_of(2) {
            return Err(Error::OddElementCount(cfg.n_per_ring));
        }
        base.with_config(cfg)
    }
}

fn whole(value: f64, what: &str) -> Result<usize> {
    if value.fract() != 0.0 || value < 1.0 || !value.is_finite() {
        return Err(Error::invalid(format!(
            "{what} must be a positive integer (got {value})"
        )));
    }
    Ok(value as usize)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub config: EcaaConfig,
    pub exponent: Option<f64>,
    pub metrics: PatternMetrics,
}

/// One row per value, in the order given. Values are evaluated in parallel.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    spec.values
        .par_iter()
        .map(|&value| {
            let wrap = |e: Error| Error::SweepValue {
                value,
                source: Box::new(e),
            };
            let scenario = spec.scenario_for(value).map_err(wrap)?;
            let metrics = scenario.metrics().map_err(wrap)?;
            Ok(SweepRow {
                value,
                config: scenario.config,
                exponent: scenario.exponent,
                metrics,
            })
        })
        .collect()
}

/// Sweep the ring count with the base ring (normally 12 elements) fixed.
pub fn ring_count_study(base: &Scenario, ring_counts: &[usize]) -> Result<Vec<SweepRow>> {
    let values = ring_counts.iter().map(|&m| m as f64).collect();
    run_sweep(&SweepSpec::new(SweepParameter::Rings, values, base.clone()))
}

/// 64-bit linear congruential generator with Knuth's MMIX constants.
///
/// `state ← 6364136223846793005 · state + 1442695040888963407 (mod 2⁶⁴)`;
/// each uniform draw uses the top 53 bits of the new state.
#[derive(Debug, Clone)]
pub struct Lcg {
    state: u64,
}

impl Lcg {
    pub const MULTIPLIER: u64 = 6_364_136_223_846_793_005;
    pub const INCREMENT: u64 = 1_442_695_040_888_963_407;

    pub fn new(seed: u64) -> Self {
        Lcg { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self
            .state
            .wrapping_mul(Self::MULTIPLIER)
            .wrapping_add(Self::INCREMENT);
        self.state
    }

    /// Uniform in `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

/// Best-so-far state of the spacing search.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchState {
    pub best_sll_db: f64,
    pub best_dv: f64,
    /// Non-improving proposals still allowed.
    pub remaining: u32,
    pub rng_seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchStep {
    /// 1-based proposal number.
    pub iteration: usize,
    pub proposed_dv: f64,
    pub sll_db: f64,
    pub accepted: bool,
    pub best_dv: f64,
    pub best_sll_db: f64,
    pub remaining: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    pub initial_dv: f64,
    pub initial_sll_db: f64,
    pub best_dv: f64,
    pub best_sll_db: f64,
    pub trace: Vec<SearchStep>,
    /// True when the proposal cap stopped the search before the budget ran out.
    pub capped: bool,
}

/// Proposals allowed per unit of iteration budget.
pub const PROPOSAL_CAP_FACTOR: usize = 100;

fn sll_at(base: &Scenario, dv: f64) -> Result<f64> {
    let mut cfg = base.config.clone();
    cfg.dv = dv;
    Ok(base.with_config(cfg)?.metrics()?.sll_db)
}

/// Iterative random search for the vertical spacing.
///
/// Starting from the base spacing and its SLL, each step draws a spacing
/// uniformly from `[dv_min, dv_max]`. A strictly lower SLL replaces the best
/// so far without using up budget; any other proposal costs one iteration.
/// The loop ends when the budget reaches zero, or after
/// `100 · iterations` proposals.
pub fn search_spacing(
    base: &Scenario,
    seed: u64,
    iterations: u32,
    dv_range: (f64, f64),
) -> Result<SearchOutcome> {
    let (dv_min, dv_max) = dv_range;
    if !(dv_min.is_finite() && dv_max.is_finite() && dv_min > 0.0 && dv_min < dv_max) {
        return Err(Error::invalid(format!(
            "spacing range [{dv_min}, {dv_max}] is empty or non-positive"
        )));
    }
    let initial_dv = base.config.dv;
    let initial_sll_db = sll_at(base, initial_dv)?;
    let mut state = SearchState {
        best_sll_db: initial_sll_db,
        best_dv: initial_dv,
        remaining: iterations,
        rng_seed: seed,
    };
    let mut rng = Lcg::new(state.rng_seed);
    let cap = PROPOSAL_CAP_FACTOR * iterations as usize;
    let mut trace = Vec::new();

    while state.remaining != 0 && trace.len() < cap {
        let proposed_dv = dv_min + (dv_max - dv_min) * rng.next_f64();
        let sll_db = sll_at(base, proposed_dv)?;
        let accepted = sll_db < state.best_sll_db;
        if accepted {
            state.best_sll_db = sll_db;
            state.best_dv = proposed_dv;
        } else {
            state.remaining -= 1;
        }
        trace.push(SearchStep {
            iteration: trace.len() + 1,
            proposed_dv,
            sll_db,
            accepted,
            best_dv: state.best_dv,
            best_sll_db: state.best_sll_db,
            remaining: state.remaining,
        });
    }

    Ok(SearchOutcome {
        initial_dv,
        initial_sll_db,
        best_dv: state.best_dv,
        best_sll_db: state.best_sll_db,
        capped: state.remaining != 0,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coarse(mut s: Scenario) -> Scenario {
        s.grid = AngleGrid::from_degrees(-90.0, 90.0, 0.1).unwrap();
        s
    }

    #[test]
    fn lcg_reference_values() {
        // state_1 = a·0 + c
        let mut rng = Lcg::new(0);
        assert_eq!(rng.next_u64(), Lcg::INCREMENT);
        let expected = Lcg::INCREMENT
            .wrapping_mul(Lcg::MULTIPLIER)
            .wrapping_add(Lcg::INCREMENT);
        assert_eq!(rng.next_u64(), expected);
        let mut rng = Lcg::new(42);
        for _ in 0..1000 {
            let u = rng.next_f64();
            assert!((0.0..1.0).contains(&u));
        }
    }

    #[test]
    fn layouts() {
        let base = EcaaConfig::baseline();
        let rf = ElementLayout::RingsFirst;
        assert_eq!(rf.split(&base, 18).unwrap(), (3, 6));
        assert_eq!(rf.split(&base, 36).unwrap(), (3, 12));
        assert_eq!(rf.split(&base, 72).unwrap(), (6, 12));
        assert_eq!(rf.split(&base, 288).unwrap(), (24, 12));
        let pr = ElementLayout::PerRing;
        assert_eq!(pr.split(&base, 18).unwrap(), (3, 6));
        assert_eq!(pr.split(&base, 288).unwrap(), (3, 96));
        assert!(pr.split(&base, 20).is_err());
    }

    #[test]
    fn sweep_values_must_be_monotone() {
        let spec = SweepSpec::new(
            SweepParameter::Spacing,
            vec![0.5, 0.4, 0.6],
            Scenario::baseline(),
        );
        assert!(run_sweep(&spec).is_err());
        let spec = SweepSpec::new(SweepParameter::Spacing, vec![], Scenario::baseline());
        assert!(run_sweep(&spec).is_err());
    }

    #[test]
    fn invalid_value_is_named() {
        let spec = SweepSpec::new(SweepParameter::Rings, vec![2.0, 2.5], Scenario::baseline());
        match run_sweep(&spec) {
            Err(Error::SweepValue { value, .. }) => assert_eq!(value, 2.5),
            other => panic!("{other:?}"),
        }
        let spec = SweepSpec::new(
            SweepParameter::Elements,
            vec![36.0, 42.0],
            Scenario::baseline().with_exponent(Some(0.5)),
        );
        // 42 = 3 × 14 is fine; odd N with an exponent is not
        assert!(run_sweep(&spec).is_ok());
        let spec = SweepSpec::new(
            SweepParameter::Elements,
            vec![21.0],
            Scenario::baseline().with_exponent(Some(0.5)),
        );
        assert!(matches!(run_sweep(&spec), Err(Error::SweepValue { value, .. }) if value == 21.0));
    }

    #[test]
    fn rows_keep_given_order() {
        let spec = SweepSpec::new(
            SweepParameter::MajorAxis,
            vec![1.15, 1.0, 0.8],
            coarse(Scenario::baseline()),
        );
        let rows = run_sweep(&spec).unwrap();
        let values: Vec<f64> = rows.iter().map(|r| r.value).collect();
        assert_eq!(values, vec![1.15, 1.0, 0.8]);
        assert_eq!(rows[2].config.a_major, 0.8);
        assert_eq!(rows[2].config.b_minor, 0.99);
    }

    #[test]
    fn ring_study_three_rings_is_baseline() {
        let base = coarse(Scenario::baseline());
        let rows = ring_count_study(&base, &[2, 3]).unwrap();
        assert_eq!(rows[1].metrics, base.metrics().unwrap());
    }

    #[test]
    fn zero_budget_returns_start() {
        let base = coarse(Scenario::baseline());
        let out = search_spacing(&base, 42, 0, (0.1, 1.0)).unwrap();
        assert!(out.trace.is_empty());
        assert_eq!(out.best_dv, 0.5);
        assert_eq!(out.best_sll_db, base.metrics().unwrap().sll_db);
        assert!(!out.capped);
    }

    #[test]
    fn empty_range_rejected() {
        let base = coarse(Scenario::baseline());
        assert!(search_spacing(&base, 1, 5, (0.5, 0.5)).is_err());
        assert!(search_spacing(&base, 1, 5, (0.9, 0.1)).is_err());
        assert!(search_spacing(&base, 1, 5, (0.0, 1.0)).is_err());
    }

    #[test]
    fn search_trace_bookkeeping() {
        let base = coarse(Scenario::baseline());
        let out = search_spacing(&base, 7, 20, (0.1, 1.0)).unwrap();
        let rejected = out.trace.iter().filter(|s| !s.accepted).count();
        assert_eq!(rejected, 20);
        assert!(out.best_sll_db <= out.initial_sll_db);
        assert!(out
            .trace
            .windows(2)
            .all(|w| w[1].best_sll_db <= w[0].best_sll_db));
        assert_eq!(out.trace.last().unwrap().remaining, 0);
        let again = search_spacing(&base, 7, 20, (0.1, 1.0)).unwrap();
        assert_eq!(out, again);
    }
}
