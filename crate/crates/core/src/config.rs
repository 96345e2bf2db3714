//! TOML run configuration.
//!
//! ```toml
//! m_rings = 3
//! n_per_ring = 12
//! a_major_wl = 1.15
//! b_minor_wl = 0.99        # or: eccentricity = 0.5 (exactly one of the two)
//! dv_wl = 0.5
//! freq_hz = 305000000.0
//! steer_theta_deg = 0.0    # optional, default 0
//! steer_phi_deg = 0.0      # optional, default 0
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::Steering;
use crate::geometry::{minor_from_eccentricity, AxisRatio, EcaaConfig};

/// Keys accepted in config files and `--set` overrides.
pub const KEYS: &[&str] = &[
    "m_rings",
    "n_per_ring",
    "a_major_wl",
    "b_minor_wl",
    "eccentricity",
    "dv_wl",
    "freq_hz",
    "steer_theta_deg",
    "steer_phi_deg",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub m_rings: usize,
    pub n_per_ring: usize,
    pub a_major_wl: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b_minor_wl: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eccentricity: Option<f64>,
    pub dv_wl: f64,
    pub freq_hz: f64,
    #[serde(default)]
    pub steer_theta_deg: f64,
    #[serde(default)]
    pub steer_phi_deg: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig::from_parts(&EcaaConfig::baseline(), 0.0, 0.0)
    }
}

impl RunConfig {
    pub fn from_parts(cfg: &EcaaConfig, steer_theta_deg: f64, steer_phi_deg: f64) -> Self {
        RunConfig {
            m_rings: cfg.m_rings,
            n_per_ring: cfg.n_per_ring,
            a_major_wl: cfg.a_major,
            b_minor_wl: Some(cfg.b_minor),
            eccentricity: None,
            dv_wl: cfg.dv,
            freq_hz: cfg.freq_hz,
            steer_theta_deg,
            steer_phi_deg,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.check()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        RunConfig::parse(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    fn check(&self) -> Result<()> {
        match (self.b_minor_wl, self.eccentricity) {
            (Some(_), Some(_)) => {
                return Err(Error::Config(
                    "give exactly one of b_minor_wl and eccentricity, not both".into(),
                ))
            }
            (None, None) => {
                return Err(Error::Config(
                    "one of b_minor_wl or eccentricity is required".into(),
                ))
            }
            _ => {}
        }
        self.geometry().map_err(as_config)?;
        self.steering().map_err(as_config)?;
        Ok(())
    }

    pub fn geometry(&self) -> Result<EcaaConfig> {
        let b = match (self.b_minor_wl, self.eccentricity) {
            (Some(b), _) => b,
            (None, Some(e)) => minor_from_eccentricity(self.a_major_wl, AxisRatio::new(e)?)?,
            (None, None) => return Err(Error::Config("minor axis unspecified".into())),
        };
        EcaaConfig::new(
            self.m_rings,
            self.n_per_ring,
            self.a_major_wl,
            b,
            self.dv_wl,
            self.freq_hz,
        )
    }

    pub fn steering(&self) -> Result<Steering> {
        Steering::from_degrees(self.steer_theta_deg, self.steer_phi_deg)
    }

    /// Apply one `key=value` override. Setting `b_minor_wl` drops
    /// `eccentricity` and vice versa.
    pub fn set(&mut self, assignment: &str) -> Result<()> {
        let (key, value) = assignment
            .split_once('=')
            .ok_or_else(|| Error::Usage(format!("override '{assignment}' is not key=value")))?;
        let (key, value) = (key.trim(), value.trim());
        let float = || -> Result<f64> {
            value
                .parse::<f64>()
                .map_err(|_| Error::Usage(format!("{key}: '{value}' is not a number")))
        };
        let int = || -> Result<usize> {
            value.parse::<usize>().map_err(|_| {
                Error::Usage(format!("{key}: '{value}' is not a non-negative integer"))
            })
        };
        match key {
            "m_rings" => self.m_rings = int()?,
            "n_per_ring" => self.n_per_ring = int()?,
            "a_major_wl" => self.a_major_wl = float()?,
            "b_minor_wl" => {
                self.b_minor_wl = Some(float()?);
                self.eccentricity = None;
            }
            "eccentricity" => {
                self.eccentricity = Some(float()?);
                self.b_minor_wl = None;
            }
            "dv_wl" => self.dv_wl = float()?,
            "freq_hz" => self.freq_hz = float()?,
            "steer_theta_deg" => self.steer_theta_deg = float()?,
            "steer_phi_deg" => self.steer_phi_deg = float()?,
            _ => {
                return Err(Error::Usage(format!(
                    "unknown config key '{key}' (known: {})",
                    KEYS.join(", ")
                )))
            }
        }
        self.check()
    }
}

fn as_config(e: Error) -> Error {
    match e {
        Error::InvalidArgument(msg) => Error::Config(msg),
        other => other,
    }
}
