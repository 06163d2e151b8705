//! Flat `key = value` run configuration.
//!
//! A configuration file sets defaults for the same parameters the
//! command-line flags expose; flags win when both are given. The format is
//! deliberately small: one assignment per line, `#` starts a comment (full
//! line or trailing), blank lines are ignored, and hyphens in keys are
//! interchangeable with underscores so `theta-s` and `theta_s` name the
//! same knob. Unknown keys are rejected rather than ignored to keep typos
//! from silently running with defaults.

use crate::circuit::PseudoPureConfig;
use crate::nmr::{AcquisitionConfig, SpinSystem};
use crate::purification::MixedQubit;
use crate::sweep::{Backend, SchemeChoice};
use crate::{Error, Result};

use std::f64::consts::{FRAC_PI_4, PI};

/// Every tunable parameter of a run, with working defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Which scheme(s) to evaluate.
    pub scheme: SchemeChoice,
    /// Purity `r = p1 - p2` of the system qubit.
    pub r: f64,
    /// Polar angle of the system field axis, radians.
    pub theta_s: f64,
    /// Grid points per sweep.
    pub points: usize,
    /// Evaluation route for measured phases.
    pub backend: Backend,
    /// Dimensionless evolution time `omega_s * t`.
    pub omega_s_t: f64,
    /// Pseudo-pure admixture for circuit and spectrometer runs.
    pub epsilon: f64,
    /// FID dwell time, seconds.
    pub dwell: f64,
    /// FID length (power of two).
    pub npoints: usize,
    /// Transverse relaxation time, seconds.
    pub t2: f64,
    /// Probe-system coupling, Hz.
    pub j12: f64,
    /// Probe-ancilla coupling, Hz.
    pub j13: f64,
    /// System-ancilla coupling, Hz.
    pub j23: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            scheme: SchemeChoice::Both,
            r: 2.0 / 3.0,
            theta_s: FRAC_PI_4,
            points: 101,
            backend: Backend::Amplitude,
            omega_s_t: 2.0 * PI,
            epsilon: 1e-5,
            dwell: 2e-3,
            npoints: 4096,
            t2: 0.5,
            j12: -1.3,
            j13: 54.1,
            j23: 34.9,
        }
    }
}

fn parse_f64(key: &str, value: &str, lineno: usize) -> Result<f64> {
    value.parse::<f64>().map_err(|_| {
        Error::Config(format!(
            "line {lineno}: '{key}' expects a number, got '{value}'"
        ))
    })
}

fn parse_usize(key: &str, value: &str, lineno: usize) -> Result<usize> {
    value.parse::<usize>().map_err(|_| {
        Error::Config(format!(
            "line {lineno}: '{key}' expects a nonnegative integer, got '{value}'"
        ))
    })
}

impl RunConfig {
    /// Parses a config file on top of the defaults.
    pub fn parse(text: &str) -> Result<Self> {
        Self::default().apply(text)
    }

    /// Applies `key = value` assignments from `text` onto `self`.
    pub fn apply(mut self, text: &str) -> Result<Self> {
        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!(
                    "line {lineno}: expected 'key = value', got '{raw}'"
                ))
            })?;
            let key = key.trim().replace('-', "_");
            let value = value.trim();
            match key.as_str() {
                "scheme" => {
                    self.scheme = value
                        .parse()
                        .map_err(|e| Error::Config(format!("line {lineno}: {e}")))?
                }
                "backend" => {
                    self.backend = value
                        .parse()
                        .map_err(|e| Error::Config(format!("line {lineno}: {e}")))?
                }
                "r" => self.r = parse_f64(&key, value, lineno)?,
                "theta_s" => self.theta_s = parse_f64(&key, value, lineno)?,
                "omega_s_t" => self.omega_s_t = parse_f64(&key, value, lineno)?,
                "epsilon" => self.epsilon = parse_f64(&key, value, lineno)?,
                "dwell" => self.dwell = parse_f64(&key, value, lineno)?,
                "t2" => self.t2 = parse_f64(&key, value, lineno)?,
                "j12" => self.j12 = parse_f64(&key, value, lineno)?,
                "j13" => self.j13 = parse_f64(&key, value, lineno)?,
                "j23" => self.j23 = parse_f64(&key, value, lineno)?,
                "points" => self.points = parse_usize(&key, value, lineno)?,
                "npoints" => self.npoints = parse_usize(&key, value, lineno)?,
                other => {
                    return Err(Error::Config(format!(
                        "line {lineno}: unknown key '{other}'"
                    )))
                }
            }
        }
        Ok(self)
    }

    /// The mixed qubit described by `r` (validated).
    pub fn mixed_qubit(&self) -> Result<MixedQubit> {
        MixedQubit::from_purity(self.r)
    }

    /// Acquisition parameters (validated).
    pub fn acquisition(&self) -> Result<AcquisitionConfig> {
        AcquisitionConfig::new(self.dwell, self.npoints, self.t2)
    }

    /// Spin couplings (validated).
    pub fn spin_system(&self) -> Result<SpinSystem> {
        SpinSystem::new(self.j12, self.j13, self.j23)
    }

    /// Pseudo-pure admixture (validated).
    pub fn pseudo_pure(&self) -> Result<PseudoPureConfig> {
        PseudoPureConfig::new(self.epsilon)
    }
}
