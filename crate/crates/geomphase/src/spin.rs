//! Single-qubit precession in a static field.
//!
//! The generator convention is fixed once for the whole crate:
//! `H = +(omega/2) (n . sigma)` with precession rate `omega >= 0` and all
//! sign freedom pushed into the unit axis `n`. A field pointing opposite to
//! another is represented by negating the axis, never by a negative rate.
//! Under this convention a pure `|0>` state carried once around the cone of a
//! field at polar angle `theta` (so `omega t = 2 pi`) acquires the geometric
//! phase `-pi (1 - cos theta)` modulo `2 pi`.

use crate::linalg::{su2_exp, ComplexMatrix, UNIT_AXIS_TOL};
use crate::{Error, Result};

/// A static field: precession rate (rad/s) and unit axis.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSpec {
    omega: f64,
    axis: [f64; 3],
}

impl FieldSpec {
    /// Builds a field from a nonnegative rate and a unit axis.
    pub fn new(omega: f64, axis: [f64; 3]) -> Result<Self> {
        if !omega.is_finite() || omega < 0.0 {
            return Err(Error::Range(format!(
                "field rate must be finite and >= 0, got {omega}"
            )));
        }
        let norm = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
        if (norm - 1.0).abs() > UNIT_AXIS_TOL {
            return Err(Error::NotUnitAxis { norm });
        }
        Ok(Self { omega, axis })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn axis(&self) -> [f64; 3] {
        self.axis
    }

    /// The Hamiltonian `(omega/2) (n . sigma)` as a 2x2 matrix.
    pub fn hamiltonian(&self) -> ComplexMatrix {
        crate::linalg::axis_dot_sigma(self.axis)
            .scale(num_complex::Complex64::new(self.omega / 2.0, 0.0))
    }
}

/// A finite-time propagator: the 2x2 unitary together with its duration.
#[derive(Debug, Clone, PartialEq)]
pub struct Propagator {
    matrix: ComplexMatrix,
    duration: f64,
}

impl Propagator {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }
}

/// The system field at polar angle `theta_s` in the x-z plane.
///
/// Returns axis `(sin theta_s, 0, cos theta_s)` with rate `omega_s`.
/// `theta_s` must lie in `[0, pi/2]` and `omega_s` must be positive.
pub fn system_field(theta_s: f64, omega_s: f64) -> Result<FieldSpec> {
    if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&theta_s) {
        return Err(Error::Range(format!(
            "theta_s must lie in [0, pi/2], got {theta_s}"
        )));
    }
    if !omega_s.is_finite() || omega_s <= 0.0 {
        return Err(Error::Range(format!(
            "omega_s must be finite and > 0, got {omega_s}"
        )));
    }
    FieldSpec::new(omega_s, [theta_s.sin(), 0.0, theta_s.cos()])
}

/// Evolution under a static field for time `t >= 0`.
///
/// `U(t) = exp(-i (omega t / 2) (n . sigma))`. A full turn (`omega t = 2 pi`)
/// returns `-I`: the spinor sign that shows up as a global pi offset in
/// interference phases.
pub fn propagator(field: &FieldSpec, t: f64) -> Result<Propagator> {
    if !t.is_finite() || t < 0.0 {
        return Err(Error::Range(format!(
            "propagation time must be finite and >= 0, got {t}"
        )));
    }
    Ok(Propagator {
        matrix: su2_exp(field.axis, field.omega * t)?,
        duration: t,
    })
}
