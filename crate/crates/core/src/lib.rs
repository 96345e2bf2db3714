//! Pattern synthesis for elliptical-cylindrical antenna arrays (ECAA), with
//! hyper beamforming and a small set of parameter-study tools.

pub mod cli;
pub mod config;
pub mod error;
pub mod explore;
pub mod fields;
pub mod geometry;
pub mod hyperbeam;
pub mod io;
pub mod metrics;
pub mod plot;

pub use error::{Error, Result};
pub use geometry::EcaaConfig;
