//! Command-line front end.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::explore::{
    run_sweep, search_spacing, ElementLayout, Scenario, SearchOutcome, SweepParameter, SweepRow,
    SweepSpec,
};
use crate::fields::{sample_sphere, AngleGrid, ArrayModel, CutPlane};
use crate::hyperbeam::GRATING_LOBE_EXPONENT;
use crate::io::{beamset_table, fmt_num, pattern_table, round_sig, write_output, DataTable};
use crate::metrics::{directivity_estimate, extract_metrics, PatternMetrics};
use crate::plot::{render_svg, PlotOptions, PlotStyle, DEFAULT_FLOOR_DB};

#[derive(Debug, Parser)]
#[command(
    name = "ecaa",
    version,
    about = "Elliptical-cylindrical array patterns and hyper beams"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample the array factor over a cut.
    Pattern {
        #[command(flatten)]
        setup: Setup,
        /// Also estimate directivity over the full sphere (1° grid).
        #[arg(long)]
        directivity: bool,
    },
    /// Sum, difference and hyper beams over a cut.
    Hyper {
        #[command(flatten)]
        setup: Setup,
        #[arg(long)]
        exponent: f64,
    },
    /// Extract SLL, FNBW and HPBW from a pattern or beam-set file.
    Metrics {
        file: PathBuf,
        /// dB column to analyse (default: norm_db, else hyper_norm_db).
        #[arg(long)]
        column: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate metrics over a list of parameter values.
    Sweep {
        #[command(flatten)]
        setup: Setup,
        /// elements, rings, major_axis, spacing or exponent.
        #[arg(long)]
        param: SweepParameter,
        /// Comma-separated, strictly monotone.
        #[arg(
            long,
            value_delimiter = ',',
            required = true,
            allow_hyphen_values = true
        )]
        values: Vec<f64>,
        /// Metrics of the hyper beam with this exponent instead of the array factor.
        #[arg(long)]
        exponent: Option<f64>,
        /// How element totals are split into rings: per-ring or rings-first.
        #[arg(long, default_value = "per-ring")]
        layout: ElementLayout,
    },
    /// Random search over the vertical ring spacing.
    SearchDv {
        #[command(flatten)]
        setup: Setup,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 500)]
        iters: u32,
        /// Proposal range in wavelengths, min:max.
        #[arg(long, default_value = "0.1:1.0")]
        dv_range: String,
    },
    /// Render a pattern or beam-set file as SVG.
    Plot {
        file: PathBuf,
        #[arg(long, default_value = "rect")]
        style: PlotStyle,
        #[arg(long)]
        column: Option<String>,
        #[arg(long, default_value_t = DEFAULT_FLOOR_DB, allow_hyphen_values = true)]
        floor: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Options shared by every command that builds an array.
#[derive(Debug, Args)]
pub struct Setup {
    /// TOML config file (default: the 3 x 12 baseline).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override a config key, e.g. --set dv_wl=0.9 (repeatable).
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Swept angle range in degrees, start:stop:step.
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    /// Sweep θ in the plane of fixed φ (degrees). Default: 0.
    #[arg(long, conflicts_with = "theta_cut", allow_hyphen_values = true)]
    phi_cut: Option<f64>,
    /// Sweep φ on the cone of fixed θ (degrees).
    #[arg(long, allow_hyphen_values = true)]
    theta_cut: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Setup {
    fn run_config(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        for o in &self.overrides {
            cfg.set(o)?;
        }
        Ok(cfg)
    }

    fn plane(&self) -> CutPlane {
        match (self.phi_cut, self.theta_cut) {
            (_, Some(t)) => CutPlane::FixedTheta(t.to_radians()),
            (Some(p), None) => CutPlane::FixedPhi(p.to_radians()),
            (None, None) => CutPlane::FixedPhi(0.0),
        }
    }

    fn grid(&self) -> Result<AngleGrid> {
        let spec = match (&self.grid, self.plane()) {
            (Some(g), _) => g.as_str(),
            (None, CutPlane::FixedPhi(_)) => "-90:90:0.05",
            (None, CutPlane::FixedTheta(_)) => "0:360:0.05",
        };
        parse_grid(spec)
    }

    fn scenario(&self) -> Result<Scenario> {
        let rc = self.run_config()?;
        let mut s = Scenario::new(rc.geometry()?);
        s.steering = rc.steering()?;
        s.plane = self.plane();
        s.grid = self.grid()?;
        Ok(s)
    }
}

pub fn parse_grid(spec: &str) -> Result<AngleGrid> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || Error::Usage(format!("grid '{spec}' is not start:stop:step in degrees"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_>>()?;
    AngleGrid::from_degrees(nums[0], nums[1], nums[2])
        .map_err(|e| Error::Usage(format!("grid '{spec}': {e}")))
}

fn parse_range(spec: &str) -> Result<(f64, f64)> {
    let bad = || Error::Usage(format!("range '{spec}' is not min:max"));
    let (a, b) = spec.split_once(':').ok_or_else(bad)?;
    Ok((
        a.trim().parse().map_err(|_| bad())?,
        b.trim().parse().map_err(|_| bad())?,
    ))
}

fn diag(msg: &str) {
    eprintln!("{msg}");
}

fn metrics_record(m: &PatternMetrics) -> Result<String> {
    let rounded = PatternMetrics {
        peak_angle: round_sig(m.peak_angle),
        sll_db: round_sig(m.sll_db),
        fnbw_deg: round_sig(m.fnbw_deg),
        hpbw_deg: round_sig(m.hpbw_deg),
        directivity_dbi: m.directivity_dbi.map(round_sig),
        grating_lobe: m.grating_lobe,
    };
    toml::to_string(&rounded).map_err(|e| Error::Format(e.to_string()))
}

fn grating_advisory(m: &PatternMetrics) {
    if m.grating_lobe {
        diag(&format!(
            "advisory: grating lobe, side lobe at {} dB is within 0.5 dB of the peak",
            fmt_num(m.sll_db)
        ));
    }
}

fn sweep_table(param: SweepParameter, rows: &[SweepRow]) -> String {
    let mut out = format!(
        "{param},m_rings,n_per_ring,a_major_wl,b_minor_wl,dv_wl,hyper_exponent,peak_angle,sll_db,fnbw_deg,hpbw_deg,grating_lobe\n"
    );
    for r in rows {
        let c = &r.config;
        let fields = [
            fmt_num(r.value),
            c.m_rings.to_string(),
            c.n_per_ring.to_string(),
            fmt_num(c.a_major),
            fmt_num(c.b_minor),
            fmt_num(c.dv),
            r.exponent.map(fmt_num).unwrap_or_default(),
            fmt_num(r.metrics.peak_angle),
            fmt_num(r.metrics.sll_db),
            fmt_num(r.metrics.fnbw_deg),
            fmt_num(r.metrics.hpbw_deg),
            (r.metrics.grating_lobe as u8).to_string(),
        ];
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

fn search_table(out: &SearchOutcome, iterations: u32) -> String {
    let mut text =
        String::from("iteration,proposed_dv,sll_db,accepted,best_dv,best_sll_db,remaining\n");
    let row0 = [
        "0".to_string(),
        fmt_num(out.initial_dv),
        fmt_num(out.initial_sll_db),
        "1".into(),
        fmt_num(out.initial_dv),
        fmt_num(out.initial_sll_db),
        iterations.to_string(),
    ];
    text.push_str(&row0.join(","));
    text.push('\n');
    for s in &out.trace {
        let row = [
            s.iteration.to_string(),
            fmt_num(s.proposed_dv),
            fmt_num(s.sll_db),
            (s.accepted as u8).to_string(),
            fmt_num(s.best_dv),
            fmt_num(s.best_sll_db),
            s.remaining.to_string(),
        ];
        text.push_str(&row.join(","));
        text.push('\n');
    }
    text
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Pattern { setup, directivity } => {
            let scenario = setup.scenario()?;
            let cut = scenario.cut()?;
            write_output(setup.out.as_deref(), pattern_table(&cut)?.as_bytes())?;
            if directivity {
                let model =
                    ArrayModel::new(&scenario.config, &scenario.excitation, &scenario.steering)?;
                let d = directivity_estimate(&sample_sphere(&model, 1.0, 1.0)?)?;
                diag(&format!("directivity_dbi = {}", fmt_num(d)));
            }
        }
        Command::Hyper { setup, exponent } => {
            let scenario = setup.scenario()?.with_exponent(Some(exponent));
            let (_, beams) = scenario.beams()?;
            let beams = beams.expect("exponent set");
            if beams.grating_lobe_advisory {
                diag(&format!(
                    "advisory: exponent {} is below {GRATING_LOBE_EXPONENT}; expect grating lobes",
                    fmt_num(exponent)
                ));
            }
            write_output(setup.out.as_deref(), beamset_table(&beams)?.as_bytes())?;
        }
        Command::Metrics { file, column, out } => {
            let table = DataTable::load(&file)?;
            let (_, angles) = table.swept_angle()?;
            let (_, db) = table.db_column(column.as_deref())?;
            let m = extract_metrics(angles, db)?;
            grating_advisory(&m);
            write_output(out.as_deref(), metrics_record(&m)?.as_bytes())?;
        }
        Command::Sweep {
            setup,
            param,
            values,
            exponent,
            layout,
        } => {
            let base = setup.scenario()?.with_exponent(exponent);
            let spec = SweepSpec {
                parameter: param,
                values,
                base,
                layout,
            };
            let rows = run_sweep(&spec)?;
            write_output(setup.out.as_deref(), sweep_table(param, &rows).as_bytes())?;
            if let Some(best) = rows
                .iter()
                .min_by(|a, b| a.metrics.sll_db.total_cmp(&b.metrics.sll_db))
            {
                diag(&format!(
                    "best: {param} = {}, sll_db = {}, fnbw_deg = {}, hpbw_deg = {}",
                    fmt_num(best.value),
                    fmt_num(best.metrics.sll_db),
                    fmt_num(best.metrics.fnbw_deg),
                    fmt_num(best.metrics.hpbw_deg)
                ));
            }
        }
        Command::SearchDv {
            setup,
            seed,
            iters,
            dv_range,
        } => {
            let base = setup.scenario()?;
            let range = parse_range(&dv_range)?;
            let outcome = search_spacing(&base, seed, iters, range)?;
            write_output(
                setup.out.as_deref(),
                search_table(&outcome, iters).as_bytes(),
            )?;
            diag(&format!(
                "best: dv_wl = {}, sll_db = {} (initial dv_wl = {}, sll_db = {}; {} proposals{})",
                fmt_num(outcome.best_dv),
                fmt_num(outcome.best_sll_db),
                fmt_num(outcome.initial_dv),
                fmt_num(outcome.initial_sll_db),
                outcome.trace.len(),
                if outcome.capped {
                    ", stopped at proposal cap"
                } else {
                    ""
                }
            ));
        }
        Command::Plot {
            file,
            style,
            column,
            floor,
            out,
        } => {
            let table = DataTable::load(&file)?;
            let opts = PlotOptions {
                style,
                column,
                floor_db: floor,
            };
            write_output(out.as_deref(), render_svg(&table, &opts)?.as_bytes())?;
        }
    }
    Ok(())
}

/// Parse arguments, run, and return the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
