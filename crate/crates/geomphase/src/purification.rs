//! Canonical purification of a diagonal qubit state and transport residuals.
//!
//! The mixed state `rho = p1 |0><0| + p2 |1><1|` (with `p1 >= p2`, so the
//! purity `r = p1 - p2` is nonnegative) is purified on a single ancilla as
//! `|Psi> = sqrt(p1) |00> + sqrt(p2) |11>`. Bilocal evolution
//! `U_s(t) x U_a(t)` acts on it; in operator form the same object is the
//! amplitude `w(t) = U_s sqrt(rho) U_a^T`, whose row-major vectorization is
//! exactly the evolved purification.
//!
//! Two residuals quantify how far a given bilocal evolution is from the two
//! transport prescriptions:
//!
//! * [`pure_transport_residual`]: `|<Psi(t)| d/dt |Psi(t)>|`, zero when every
//!   branch accumulates no phase (the parallel transport behind the
//!   spectral/Sjoqvist phase);
//! * [`uhlmann_parallel_residual`]: the anti-Hermitian defect of
//!   `w(t)^dag dw/dt`, zero exactly when the amplitude is Uhlmann-parallel.
//!
//! Derivatives are central finite differences; the documented default step is
//! `delta = 1e-6 / omega_s` ([`DEFAULT_FD_SCALE`] over the system rate).

use num_complex::Complex64;

use crate::linalg::{ComplexMatrix, ComplexVector};
use crate::spin::Propagator;
use crate::{Error, Result};

/// Numerator of the default finite-difference step: `delta = 1e-6 / omega_s`.
pub const DEFAULT_FD_SCALE: f64 = 1e-6;

/// A diagonal qubit mixed state with `p1 >= p2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixedQubit {
    p1: f64,
    p2: f64,
}

impl MixedQubit {
    /// Builds the state from its eigenvalues. Requires `p1 + p2 = 1` within
    /// `1e-12` and `0 <= p2 <= p1`.
    pub fn new(p1: f64, p2: f64) -> Result<Self> {
        if !(p1.is_finite() && p2.is_finite()) || (p1 + p2 - 1.0).abs() > 1e-12 {
            return Err(Error::Range(format!(
                "populations must sum to one, got p1 = {p1}, p2 = {p2}"
            )));
        }
        if p2 < 0.0 || p2 > p1 {
            return Err(Error::Range(format!(
                "populations must satisfy 0 <= p2 <= p1, got p1 = {p1}, p2 = {p2}"
            )));
        }
        Ok(Self { p1, p2 })
    }

    /// Builds the state from its purity `r = p1 - p2 in [0, 1]`.
    pub fn from_purity(r: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&r) {
            return Err(Error::Range(format!("purity must lie in [0, 1], got {r}")));
        }
        Self::new((1.0 + r) / 2.0, (1.0 - r) / 2.0)
    }

    pub fn p1(&self) -> f64 {
        self.p1
    }

    pub fn p2(&self) -> f64 {
        self.p2
    }

    /// Purity `r = p1 - p2`.
    pub fn purity(&self) -> f64 {
        self.p1 - self.p2
    }

    /// The density matrix `diag(p1, p2)`.
    pub fn density(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(2, 2);
        m.set(0, 0, Complex64::new(self.p1, 0.0));
        m.set(1, 1, Complex64::new(self.p2, 0.0));
        m
    }

    /// The positive square root `diag(sqrt(p1), sqrt(p2))`.
    pub fn sqrt_density(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(2, 2);
        m.set(0, 0, Complex64::new(self.p1.sqrt(), 0.0));
        m.set(1, 1, Complex64::new(self.p2.sqrt(), 0.0));
        m
    }
}

/// The canonical two-qubit purification `sqrt(p1)|00> + sqrt(p2)|11>`.
#[derive(Debug, Clone, PartialEq)]
pub struct PurifiedState {
    state: ComplexVector,
}

impl PurifiedState {
    pub fn state(&self) -> &ComplexVector {
        &self.state
    }
}

/// Purifies a mixed qubit on one ancilla with real nonnegative amplitudes.
pub fn purify(q: &MixedQubit) -> PurifiedState {
    let mut data = vec![Complex64::new(0.0, 0.0); 4];
    data[0] = Complex64::new(q.p1.sqrt(), 0.0);
    data[3] = Complex64::new(q.p2.sqrt(), 0.0);
    PurifiedState {
        state: ComplexVector::new(data).expect("dimension 4"),
    }
}

/// The amplitude operator `w(t) = U_s(t) sqrt(rho) U_a(t)^T` at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeOperator {
    w: ComplexMatrix,
    t: f64,
}

impl AmplitudeOperator {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.w
    }

    pub fn time(&self) -> f64 {
        self.t
    }
}

/// Forms the amplitude operator from system and ancilla propagators.
///
/// The two propagators must cover the same duration. Row-major vectorization
/// of the result equals `(U_s kron U_a)` applied to the purification.
pub fn amplitude_operator(
    q: &MixedQubit,
    us: &Propagator,
    ua: &Propagator,
) -> Result<AmplitudeOperator> {
    let (ts, ta) = (us.duration(), ua.duration());
    if (ts - ta).abs() > 1e-12 * ts.abs().max(1.0) {
        return Err(Error::State(format!(
            "propagator durations differ: system {ts}, ancilla {ta}"
        )));
    }
    let w = us
        .matrix()
        .mul(&q.sqrt_density())?
        .mul(&ua.matrix().transpose())?;
    Ok(AmplitudeOperator { w, t: ts })
}

/// Evolved purification `(U_s(t) kron U_a(t)) |Psi>`.
fn evolved_state(
    q: &MixedQubit,
    evolution: &mut impl FnMut(f64) -> Result<(Propagator, Propagator)>,
    t: f64,
) -> Result<ComplexVector> {
    let (us, ua) = evolution(t)?;
    let u = crate::linalg::kron(us.matrix(), ua.matrix())?;
    u.apply(purify(q).state())
}

fn check_fd_args(t: f64, delta: f64) -> Result<()> {
    if !(delta.is_finite() && delta > 0.0) {
        return Err(Error::Range(format!(
            "finite-difference step must be > 0, got {delta}"
        )));
    }
    if t - delta < 0.0 {
        return Err(Error::Range(format!(
            "central difference needs t - delta >= 0, got t = {t}, delta = {delta}"
        )));
    }
    Ok(())
}

/// Residual of pure-state parallel transport, `|<Psi(t)| d/dt |Psi(t)>|`.
///
/// The derivative is a central difference with step `delta`. A scheme that
/// cancels every branch's dynamical phase drives this to zero for all times;
/// a generic scheme leaves it of order `omega_s`.
pub fn pure_transport_residual(
    q: &MixedQubit,
    mut evolution: impl FnMut(f64) -> Result<(Propagator, Propagator)>,
    t: f64,
    delta: f64,
) -> Result<f64> {
    check_fd_args(t, delta)?;
    let plus = evolved_state(q, &mut evolution, t + delta)?;
    let minus = evolved_state(q, &mut evolution, t - delta)?;
    let center = evolved_state(q, &mut evolution, t)?;
    let derivative = plus.add_scaled(&minus, Complex64::new(-1.0, 0.0))?;
    let overlap = center.inner(&derivative)? / Complex64::new(2.0 * delta, 0.0);
    Ok(overlap.norm())
}

/// Residual of Uhlmann parallelity: the max-norm of the anti-Hermitian part
/// of `w(t)^dag dw/dt`, with the derivative taken by central difference.
pub fn uhlmann_parallel_residual(
    q: &MixedQubit,
    mut evolution: impl FnMut(f64) -> Result<(Propagator, Propagator)>,
    t: f64,
    delta: f64,
) -> Result<f64> {
    check_fd_args(t, delta)?;
    let w_at = |ev: &mut dyn FnMut(f64) -> Result<(Propagator, Propagator)>,
                tau: f64|
     -> Result<ComplexMatrix> {
        let (us, ua) = ev(tau)?;
        Ok(amplitude_operator(q, &us, &ua)?.matrix().clone())
    };
    let plus = w_at(&mut evolution, t + delta)?;
    let minus = w_at(&mut evolution, t - delta)?;
    let center = w_at(&mut evolution, t)?;
    let dw = plus
        .sub(&minus)?
        .scale(Complex64::new(1.0 / (2.0 * delta), 0.0));
    let k = center.adjoint().mul(&dw)?;
    let anti = k.sub(&k.adjoint())?.scale(Complex64::new(0.5, 0.0));
    Ok(anti.max_abs())
}
