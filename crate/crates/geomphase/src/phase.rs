//! Ancilla schemes and geometric phase evaluation.
//!
//! One purification, two ancilla fields, two geometric phases. The system
//! precesses about `(sin theta_s, 0, cos theta_s)` at rate `omega_s`; the
//! ancilla field selects which notion of parallel transport the joint
//! evolution realizes:
//!
//! * **Spectral scheme** ([`sjoqvist_ancilla`]): ancilla field along `-z`
//!   with rate `omega_s cos theta_s`. Each eigenbranch's dynamical phase
//!   cancels exactly, so the interference phase is the spectral mixed-state
//!   geometric phase.
//! * **Uhlmann scheme** ([`uhlmann_ancilla`]): ancilla field along
//!   `-(sin theta_a, 0, cos theta_a)` with the polar angle and rate fixed by
//!   the two transport conditions
//!   `tan theta_a = 2 sqrt(p1 p2) tan theta_s` and
//!   `omega_a cos theta_a = omega_s cos theta_s`,
//!   which make the amplitude operator Uhlmann-parallel at every time.
//!
//! The interference amplitude `A = <Psi| U_s(t) x U_a(t) |Psi>` evaluated on
//! the tensor product is the ground truth; the closed forms below reproduce
//! `arg A` exactly and are cross-checked against it on dense grids. Both are
//! stated in pole-free `atan2` form. After one full system cycle
//! (`omega_s t = 2 pi`) the propagator contributes the spinor sign `-I`;
//! nothing is subtracted silently, so any constant offset between a closed
//! form and a measured phase is reported, not hidden.
//!
//! Sign conventions follow the crate-wide generator `H = +(omega/2) n.sigma`.
//! Relative to that convention the closed-form numerator carries a minus sign
//! between its two terms and the denominator coefficient is `+2 sqrt(p1 p2)`;
//! both choices are forced by the amplitude oracle (see the adjudication
//! tests), which is the arbiter wherever transcriptions disagree.

use num_complex::Complex64;

use crate::linalg::kron;
use crate::purification::{purify, MixedQubit};
use crate::spin::{propagator, system_field, FieldSpec, Propagator};
use crate::{Error, Result};

use std::f64::consts::{FRAC_PI_2, PI};

/// Which ancilla construction a scheme realizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeKind {
    Sjoqvist,
    Uhlmann,
}

impl SchemeKind {
    pub fn label(&self) -> &'static str {
        match self {
            SchemeKind::Sjoqvist => "sjoqvist",
            SchemeKind::Uhlmann => "uhlmann",
        }
    }
}

/// An ancilla evolution choice: the tag, the ancilla field, and the total
/// ancilla rotation angle over one full system cycle (`omega_s t = 2 pi`).
#[derive(Debug, Clone, PartialEq)]
pub struct AncillaScheme {
    kind: SchemeKind,
    field: FieldSpec,
    rotation_angle: f64,
}

impl AncillaScheme {
    /// Assembles a scheme from raw parts. Intended for tests and fault
    /// injection; the named constructors build the physical schemes.
    pub fn from_parts(kind: SchemeKind, field: FieldSpec, rotation_angle: f64) -> Self {
        Self {
            kind,
            field,
            rotation_angle,
        }
    }

    pub fn kind(&self) -> SchemeKind {
        self.kind
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    /// Total ancilla rotation angle `omega_a * (2 pi / omega_s)` over one
    /// system cycle.
    pub fn rotation_angle(&self) -> f64 {
        self.rotation_angle
    }

    /// Polar angle of the *negated* field axis measured from `+z`. For the
    /// Uhlmann scheme this is `theta_a`; for the spectral scheme it is 0.
    pub fn polar_angle(&self) -> f64 {
        let a = self.field.axis();
        (-a[0]).atan2(-a[2])
    }
}

/// Ancilla field that cancels each eigenbranch's dynamical phase:
/// rate `omega_s cos theta_s` along `-z`.
pub fn sjoqvist_ancilla(theta_s: f64, omega_s: f64) -> Result<AncillaScheme> {
    // Reuse the system-field range checks on (theta_s, omega_s).
    system_field(theta_s, omega_s)?;
    let omega_a = omega_s * theta_s.cos();
    Ok(AncillaScheme {
        kind: SchemeKind::Sjoqvist,
        field: FieldSpec::new(omega_a, [0.0, 0.0, -1.0])?,
        rotation_angle: 2.0 * PI * theta_s.cos(),
    })
}

/// Ancilla field satisfying both Uhlmann transport conditions.
///
/// `theta_a = atan(2 sqrt(p1 p2) tan theta_s)` and
/// `omega_a = omega_s cos theta_s / cos theta_a`, with axis
/// `-(sin theta_a, 0, cos theta_a)`. At `theta_s = pi/2` the continuity
/// limit is taken: `theta_a = pi/2`, `omega_a = 2 sqrt(p1 p2) omega_s`.
pub fn uhlmann_ancilla(q: &MixedQubit, theta_s: f64, omega_s: f64) -> Result<AncillaScheme> {
    system_field(theta_s, omega_s)?;
    let g = 2.0 * (q.p1() * q.p2()).sqrt();
    let (sin_a, cos_a, omega_a) = if theta_s == FRAC_PI_2 {
        (1.0, 0.0, g * omega_s)
    } else {
        let tan_a = g * theta_s.tan();
        let cos_a = 1.0 / (1.0 + tan_a * tan_a).sqrt();
        (tan_a * cos_a, cos_a, omega_s * theta_s.cos() / cos_a)
    };
    Ok(AncillaScheme {
        kind: SchemeKind::Uhlmann,
        field: FieldSpec::new(omega_a, [-sin_a, 0.0, -cos_a])?,
        rotation_angle: 2.0 * PI * omega_a / omega_s,
    })
}

/// Residuals of the two Uhlmann field conditions, relative to `omega_s`.
///
/// Returned as `(res_a, res_b)` with
/// `res_a = |omega_a sin theta_a - 2 sqrt(p1 p2) omega_s sin theta_s| / omega_s`
/// (the pole-free form of the angle condition) and
/// `res_b = |omega_a cos theta_a - omega_s cos theta_s| / omega_s`
/// (the rate-matching condition). Both vanish for [`uhlmann_ancilla`] output
/// and stay meaningful at `theta_s = pi/2` where the tangent form blows up.
pub fn uhlmann_condition_residuals(
    q: &MixedQubit,
    theta_s: f64,
    omega_s: f64,
    scheme: &AncillaScheme,
) -> (f64, f64) {
    let g = 2.0 * (q.p1() * q.p2()).sqrt();
    let axis = scheme.field().axis();
    let (sin_a, cos_a) = (-axis[0], -axis[2]);
    let omega_a = scheme.field().omega();
    let res_a = (omega_a * sin_a - g * omega_s * theta_s.sin()).abs() / omega_s;
    let res_b = (omega_a * cos_a - omega_s * theta_s.cos()).abs() / omega_s;
    (res_a, res_b)
}

/// Pairs a system field with a scheme's ancilla field as a bilocal evolution
/// `t -> (U_s(t), U_a(t))`, the shape the transport residuals consume.
pub fn bilocal_evolution(
    system: FieldSpec,
    ancilla: FieldSpec,
) -> impl FnMut(f64) -> Result<(Propagator, Propagator)> {
    move |t| Ok((propagator(&system, t)?, propagator(&ancilla, t)?))
}

/// Interference amplitude `A = <Psi| U_s(t) kron U_a(t) |Psi>` evaluated
/// directly on the two-qubit tensor product.
///
/// This brute-force evaluation is the oracle every closed form and every
/// circuit path is checked against.
pub fn interference_amplitude(
    q: &MixedQubit,
    system: &FieldSpec,
    scheme: &AncillaScheme,
    t: f64,
) -> Result<Complex64> {
    let us = propagator(system, t)?;
    let ua = propagator(scheme.field(), t)?;
    let u = kron(us.matrix(), ua.matrix())?;
    let psi = purify(q);
    psi.state().inner(&u.apply(psi.state())?)
}

/// Interference phase and visibility extracted from a complex amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseResult {
    /// Principal phase in `(-pi, pi]`, or `None` below the visibility floor.
    pub phase: Option<f64>,
    /// Fringe visibility `|A|`.
    pub visibility: f64,
}

/// Visibility below which an interference phase is reported as undefined.
pub const VISIBILITY_FLOOR: f64 = 1e-9;

/// Splits an amplitude into principal phase and visibility.
pub fn phase_of(a: Complex64) -> PhaseResult {
    let visibility = a.norm();
    let phase = if visibility <= VISIBILITY_FLOOR {
        None
    } else {
        Some(crate::wrap_angle(a.im.atan2(a.re)))
    };
    PhaseResult { phase, visibility }
}

fn check_unit_interval(name: &str, v: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::Range(format!("{name} must lie in [0, 1], got {v}")));
    }
    Ok(())
}

fn check_polar(name: &str, v: f64) -> Result<()> {
    if !(0.0..=FRAC_PI_2).contains(&v) {
        return Err(Error::Range(format!(
            "{name} must lie in [0, pi/2], got {v}"
        )));
    }
    Ok(())
}

/// Closed form for the spectral phase after one full system cycle.
///
/// `-atan2(r sin(Omega/2), cos(Omega/2))` with half solid angle
/// `Omega/2 = pi (1 - cos theta_s)`. Pole-free: defined for every input,
/// including where the arctan-of-ratio form would cross a visibility zero.
pub fn sjoqvist_closed_form(r: f64, theta_s: f64) -> Result<f64> {
    check_unit_interval("r", r)?;
    check_polar("theta_s", theta_s)?;
    let half_solid = PI * (1.0 - theta_s.cos());
    Ok(-f64::atan2(r * half_solid.sin(), half_solid.cos()))
}

/// Closed form for the Uhlmann-scheme interference phase at arbitrary time.
///
/// With `s_x = sin(omega_x t / 2)`, `c_x = cos(omega_x t / 2)`:
///
/// ```text
/// N = (p1 - p2) [cos(theta_s) s_s c_a - cos(theta_a) s_a c_s]
/// D = c_s c_a + [cos(theta_s) cos(theta_a)
///                + 2 sqrt(p1 p2) sin(theta_s) sin(theta_a)] s_s s_a
/// phase = -atan2(N, D)
/// ```
///
/// This reproduces `arg A` of [`interference_amplitude`] identically (offset
/// zero) under the crate's sign convention. The relative minus in `N` and the
/// `+2 sqrt(p1 p2)` coefficient in `D` are the variants selected by the
/// amplitude oracle; see `uhlmann_closed_form_variant` and its tests for the
/// rejected alternatives.
pub fn uhlmann_closed_form(
    q: &MixedQubit,
    theta_s: f64,
    theta_a: f64,
    omega_s: f64,
    omega_a: f64,
    t: f64,
) -> Result<f64> {
    check_polar("theta_s", theta_s)?;
    check_polar("theta_a", theta_a)?;
    if omega_s <= 0.0 || omega_a < 0.0 || t < 0.0 {
        return Err(Error::Range(format!(
            "rates and time must be nonnegative (omega_s > 0), got omega_s = {omega_s}, omega_a = {omega_a}, t = {t}"
        )));
    }
    Ok(uhlmann_closed_form_variant(
        q, theta_s, theta_a, omega_s, omega_a, t, 2.0,
    ))
}

/// The same closed form with the denominator coefficient on
/// `sqrt(p1 p2) sin(theta_s) sin(theta_a)` left as a knob.
///
/// `denom_coeff = +2` is the accepted variant; the tests drive the rejected
/// candidates (`-1`, `+1`, `-2`) through the constant-offset check to show
/// only the accepted one matches the amplitude oracle away from the cyclic
/// time.
pub(crate) fn uhlmann_closed_form_variant(
    q: &MixedQubit,
    theta_s: f64,
    theta_a: f64,
    omega_s: f64,
    omega_a: f64,
    t: f64,
    denom_coeff: f64,
) -> f64 {
    let (ss, cs) = (omega_s * t / 2.0).sin_cos();
    let (sa, ca) = (omega_a * t / 2.0).sin_cos();
    let root = (q.p1() * q.p2()).sqrt();
    let n = (q.p1() - q.p2()) * (theta_s.cos() * ss * ca - theta_a.cos() * sa * cs);
    let d = cs * ca
        + (theta_s.cos() * theta_a.cos() + denom_coeff * root * theta_s.sin() * theta_a.sin())
            * ss
            * sa;
    -f64::atan2(n, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::purification::{
        pure_transport_residual, uhlmann_parallel_residual, DEFAULT_FD_SCALE,
    };
    use crate::wrap_angle;
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_6};

    const OMEGA_S: f64 = 1.0;

    fn cycle_time() -> f64 {
        2.0 * PI / OMEGA_S
    }

    #[test]
    fn sjoqvist_ancilla_construction() {
        let s = sjoqvist_ancilla(0.0, 2.0).unwrap();
        assert_eq!(s.kind(), SchemeKind::Sjoqvist);
        assert!((s.field().omega() - 2.0).abs() < 1e-15);
        assert_eq!(s.field().axis(), [0.0, 0.0, -1.0]);
        assert!((s.rotation_angle() - 2.0 * PI).abs() < 1e-12);

        let s = sjoqvist_ancilla(FRAC_PI_4, 1.0).unwrap();
        assert!((s.rotation_angle() - 2.0 * PI * FRAC_PI_4.cos()).abs() < 1e-12);
        // theta_s = pi/2: the ancilla field switches off.
        let s = sjoqvist_ancilla(FRAC_PI_2, 1.0).unwrap();
        assert!(s.field().omega().abs() < 1e-15);
    }

    #[test]
    fn sjoqvist_ancilla_cancels_each_branch() {
        for theta_s in [0.0, 0.3, FRAC_PI_4, 1.2, FRAC_PI_2] {
            let sys = system_field(theta_s, OMEGA_S).unwrap();
            let anc = sjoqvist_ancilla(theta_s, OMEGA_S).unwrap();
            let hs = sys.hamiltonian();
            let ha = anc.field().hamiltonian();
            for k in 0..2 {
                let branch = hs.get(k, k) + ha.get(k, k);
                assert!(branch.norm() < 1e-15, "branch {k} at theta {theta_s}");
            }
        }
    }

    #[test]
    fn uhlmann_ancilla_frozen_point() {
        // p1 = 5/6, p2 = 1/6, theta_s = pi/4:
        // theta_a = atan(2 sqrt(5)/6) = 0.64052..., omega_a/omega_s = 0.88192...
        let q = MixedQubit::new(5.0 / 6.0, 1.0 / 6.0).unwrap();
        let s = uhlmann_ancilla(&q, FRAC_PI_4, OMEGA_S).unwrap();
        let theta_a = s.polar_angle();
        assert!((theta_a - (2.0 * 5.0f64.sqrt() / 6.0).atan()).abs() < 1e-14);
        assert!((theta_a - 0.6405).abs() < 1e-3);
        assert!((s.field().omega() / OMEGA_S - 0.8819).abs() < 1e-4);
        assert_eq!(s.kind(), SchemeKind::Uhlmann);
        // Field points opposite to (sin, 0, cos) theta_a.
        let axis = s.field().axis();
        assert!(axis[0] < 0.0 && axis[2] < 0.0);
    }

    #[test]
    fn uhlmann_conditions_hold_on_grid() {
        for i in 0..=12 {
            let r = i as f64 / 12.0;
            let q = MixedQubit::from_purity(r).unwrap();
            for j in 0..=12 {
                let theta_s = (j as f64 / 12.0) * FRAC_PI_2;
                let theta_s = theta_s.min(FRAC_PI_2 - 1e-6);
                let s = uhlmann_ancilla(&q, theta_s, OMEGA_S).unwrap();
                let (ra, rb) = uhlmann_condition_residuals(&q, theta_s, OMEGA_S, &s);
                assert!(ra <= 1e-12, "res_a = {ra} at r={r}, theta={theta_s}");
                assert!(rb <= 1e-12, "res_b = {rb} at r={r}, theta={theta_s}");
            }
        }
    }

    #[test]
    fn uhlmann_condition_residuals_detect_perturbation() {
        let q = MixedQubit::new(5.0 / 6.0, 1.0 / 6.0).unwrap();
        let s = uhlmann_ancilla(&q, FRAC_PI_4, OMEGA_S).unwrap();
        let theta_a = s.polar_angle() + 1e-6;
        let perturbed = AncillaScheme::from_parts(
            SchemeKind::Uhlmann,
            FieldSpec::new(s.field().omega(), [-theta_a.sin(), 0.0, -theta_a.cos()]).unwrap(),
            s.rotation_angle(),
        );
        let (ra, rb) = uhlmann_condition_residuals(&q, FRAC_PI_4, OMEGA_S, &perturbed);
        assert!(
            ra.max(rb) > 1e-7,
            "perturbation went undetected: {ra}, {rb}"
        );
    }

    #[test]
    fn uhlmann_ancilla_limits() {
        // r = 0: theta_a = theta_s and omega_a = omega_s.
        let q = MixedQubit::from_purity(0.0).unwrap();
        let s = uhlmann_ancilla(&q, 0.7, OMEGA_S).unwrap();
        assert!((s.polar_angle() - 0.7).abs() < 1e-14);
        assert!((s.field().omega() - OMEGA_S).abs() < 1e-14);

        // r = 1: theta_a = 0, omega_a = omega_s cos theta_s (spectral field).
        let q = MixedQubit::from_purity(1.0).unwrap();
        let s = uhlmann_ancilla(&q, 0.7, OMEGA_S).unwrap();
        assert!(s.polar_angle().abs() < 1e-14);
        assert!((s.field().omega() - OMEGA_S * 0.7f64.cos()).abs() < 1e-14);

        // theta_s = pi/2: continuity limit theta_a = pi/2,
        // omega_a = 2 sqrt(p1 p2) omega_s.
        let q = MixedQubit::from_purity(0.5).unwrap();
        let s = uhlmann_ancilla(&q, FRAC_PI_2, OMEGA_S).unwrap();
        assert!((s.polar_angle() - FRAC_PI_2).abs() < 1e-14);
        let g = 2.0 * (q.p1() * q.p2()).sqrt();
        assert!((s.field().omega() - g * OMEGA_S).abs() < 1e-14);

        // The limit joins continuously: amplitudes just below pi/2 agree.
        let near = FRAC_PI_2 - 1e-9;
        let s_near = uhlmann_ancilla(&q, near, OMEGA_S).unwrap();
        let sys_near = system_field(near, OMEGA_S).unwrap();
        let sys_at = system_field(FRAC_PI_2, OMEGA_S).unwrap();
        let a_near = interference_amplitude(&q, &sys_near, &s_near, cycle_time()).unwrap();
        let a_at = interference_amplitude(&q, &sys_at, &s, cycle_time()).unwrap();
        assert!((a_near - a_at).norm() < 1e-6);
    }

    #[test]
    fn amplitude_frozen_value_sjoqvist() {
        // r = 2/3, theta_s = pi/4, omega_s t = 2 pi: arg A = -0.7191...,
        // computed by hand from A = -(cos c + i r sin c), c = pi cos theta_s.
        let q = MixedQubit::from_purity(2.0 / 3.0).unwrap();
        let sys = system_field(FRAC_PI_4, OMEGA_S).unwrap();
        let anc = sjoqvist_ancilla(FRAC_PI_4, OMEGA_S).unwrap();
        let a = interference_amplitude(&q, &sys, &anc, cycle_time()).unwrap();
        let phase = phase_of(a).phase.unwrap();
        assert!((phase - (-0.7191)).abs() < 1e-3, "phase = {phase}");
    }

    #[test]
    fn amplitude_frozen_value_uhlmann() {
        // p1 = 5/6, theta_s = pi/4, omega_s t = 2 pi: arg A = -0.2050...,
        // computed by hand from A = -(cos(phi/2) + i r cos(theta_a)
        // sin(phi/2)) with phi = 2 pi omega_a / omega_s.
        let q = MixedQubit::new(5.0 / 6.0, 1.0 / 6.0).unwrap();
        let sys = system_field(FRAC_PI_4, OMEGA_S).unwrap();
        let anc = uhlmann_ancilla(&q, FRAC_PI_4, OMEGA_S).unwrap();
        let a = interference_amplitude(&q, &sys, &anc, cycle_time()).unwrap();
        let phase = phase_of(a).phase.unwrap();
        assert!((phase - (-0.2050)).abs() < 1e-3, "phase = {phase}");
    }

    #[test]
    fn closed_forms_match_amplitude_on_cyclic_grid() {
        // Offset between arg A and each closed form is identically zero on
        // the cyclic grid, wherever the fringe is visible.
        for i in 0..=12 {
            let r = i as f64 / 12.0;
            let q = MixedQubit::from_purity(r).unwrap();
            for j in 0..=12 {
                let theta_s = (j as f64 / 12.0) * FRAC_PI_2;
                let sys = system_field(theta_s, OMEGA_S).unwrap();

                let anc = sjoqvist_ancilla(theta_s, OMEGA_S).unwrap();
                let a = interference_amplitude(&q, &sys, &anc, cycle_time()).unwrap();
                let res = phase_of(a);
                if res.visibility > 1e-6 {
                    let closed = sjoqvist_closed_form(r, theta_s).unwrap();
                    let d = wrap_angle(res.phase.unwrap() - closed);
                    assert!(
                        d.abs() < 1e-12,
                        "spectral offset {d} at r={r}, theta={theta_s}"
                    );
                }

                let anc = uhlmann_ancilla(&q, theta_s, OMEGA_S).unwrap();
                let a = interference_amplitude(&q, &sys, &anc, cycle_time()).unwrap();
                let res = phase_of(a);
                if res.visibility > 1e-6 {
                    let closed = uhlmann_closed_form(
                        &q,
                        theta_s,
                        anc.polar_angle(),
                        OMEGA_S,
                        anc.field().omega(),
                        cycle_time(),
                    )
                    .unwrap();
                    let d = wrap_angle(res.phase.unwrap() - closed);
                    assert!(
                        d.abs() < 1e-12,
                        "uhlmann offset {d} at r={r}, theta={theta_s}"
                    );
                }
            }
        }
    }

    #[test]
    fn uhlmann_closed_form_matches_amplitude_at_generic_times() {
        // Also away from the cyclic time, where the denominator coefficient
        // actually matters.
        let q = MixedQubit::new(0.7, 0.3).unwrap();
        let theta_s = 0.9;
        let sys = system_field(theta_s, OMEGA_S).unwrap();
        let anc = uhlmann_ancilla(&q, theta_s, OMEGA_S).unwrap();
        for k in 1..=40 {
            let t = 0.31 * k as f64;
            let a = interference_amplitude(&q, &sys, &anc, t).unwrap();
            let res = phase_of(a);
            if res.visibility <= 1e-6 {
                continue;
            }
            let closed = uhlmann_closed_form(
                &q,
                theta_s,
                anc.polar_angle(),
                OMEGA_S,
                anc.field().omega(),
                t,
            )
            .unwrap();
            let d = wrap_angle(res.phase.unwrap() - closed);
            assert!(d.abs() < 1e-12, "offset {d} at t = {t}");
        }
    }

    #[test]
    fn denominator_coefficient_adjudication() {
        // Only the +2 sqrt(p1 p2) variant tracks the amplitude at non-cyclic
        // times; the transcribed alternatives (-1, +1, -2) all fail.
        let q = MixedQubit::new(0.75, 0.25).unwrap();
        let theta_s = 1.1;
        let sys = system_field(theta_s, OMEGA_S).unwrap();
        let anc = uhlmann_ancilla(&q, theta_s, OMEGA_S).unwrap();
        let times: Vec<f64> = (1..=24).map(|k| 0.47 * k as f64).collect();

        for (coeff, should_pass) in [(2.0, true), (-1.0, false), (1.0, false), (-2.0, false)] {
            let mut worst: f64 = 0.0;
            for &t in &times {
                let a = interference_amplitude(&q, &sys, &anc, t).unwrap();
                let res = phase_of(a);
                if res.visibility <= 1e-6 {
                    continue;
                }
                let closed = uhlmann_closed_form_variant(
                    &q,
                    theta_s,
                    anc.polar_angle(),
                    OMEGA_S,
                    anc.field().omega(),
                    t,
                    coeff,
                );
                worst = worst.max(wrap_angle(res.phase.unwrap() - closed).abs());
            }
            if should_pass {
                assert!(worst < 1e-12, "accepted variant deviates by {worst}");
            } else {
                assert!(worst > 1e-3, "coeff {coeff} was not rejected ({worst})");
            }
        }
    }

    #[test]
    fn sjoqvist_closed_form_frozen_value() {
        // r = 1/3, theta_s = pi/6: -atan2(sin(0.42089)/3, cos(0.42089))
        // = -0.14812..., computed by hand.
        let got = sjoqvist_closed_form(1.0 / 3.0, FRAC_PI_6).unwrap();
        assert!((got - (-0.1481)).abs() < 1e-3, "got {got}");
    }

    #[test]
    fn closed_form_limits() {
        // Pure state: spectral phase is -pi (1 - cos theta_s) mod 2 pi.
        for theta_s in [0.0, 0.4, FRAC_PI_4, 1.3, FRAC_PI_2] {
            let got = sjoqvist_closed_form(1.0, theta_s).unwrap();
            let want = wrap_angle(-PI * (1.0 - theta_s.cos()));
            assert!((wrap_angle(got - want)).abs() < 1e-12);
        }
        // Fully mixed: phase is 0 or pi (amplitude real).
        for theta_s in [0.0, 0.5, 1.0, FRAC_PI_2] {
            let got = sjoqvist_closed_form(0.0, theta_s).unwrap();
            assert!(got.abs() < 1e-12 || (got.abs() - PI).abs() < 1e-12);
        }
        // theta_s = 0: no solid angle, phase 0 for every purity and scheme.
        for r in [0.0, 0.5, 1.0] {
            let q = MixedQubit::from_purity(r).unwrap();
            assert!(sjoqvist_closed_form(r, 0.0).unwrap().abs() < 1e-12);
            let anc = uhlmann_ancilla(&q, 0.0, OMEGA_S).unwrap();
            let got = uhlmann_closed_form(
                &q,
                0.0,
                anc.polar_angle(),
                OMEGA_S,
                anc.field().omega(),
                cycle_time(),
            )
            .unwrap();
            assert!(got.abs() < 1e-12);
        }
    }

    #[test]
    fn phase_of_behaviour() {
        let res = phase_of(Complex64::new(0.0, -0.5));
        assert!((res.phase.unwrap() + FRAC_PI_2).abs() < 1e-15);
        assert!((res.visibility - 0.5).abs() < 1e-15);
        // Below the floor the phase is undefined, not fabricated.
        let res = phase_of(Complex64::new(1e-12, -1e-12));
        assert!(res.phase.is_none());
        // Negative real axis maps to +pi, the principal representative.
        let res = phase_of(Complex64::new(-1.0, 0.0));
        assert!((res.phase.unwrap() - PI).abs() < 1e-15);
        // Conjugation negates the phase away from the branch cut.
        for a in [
            Complex64::new(0.3, 0.4),
            Complex64::new(-0.2, 0.9),
            Complex64::new(0.8, -0.1),
            Complex64::new(-0.5, -0.5),
        ] {
            let plus = phase_of(a).phase.unwrap();
            let minus = phase_of(a.conj()).phase.unwrap();
            assert!((plus + minus).abs() < 1e-15, "{a}");
        }
    }

    #[test]
    fn visibility_stays_in_unit_interval_on_grid() {
        for i in 0..=10 {
            let q = MixedQubit::from_purity(i as f64 / 10.0).unwrap();
            for j in 0..=10 {
                let theta_s = (j as f64 / 10.0) * FRAC_PI_2;
                let sys = system_field(theta_s, OMEGA_S).unwrap();
                for scheme in [
                    sjoqvist_ancilla(theta_s, OMEGA_S).unwrap(),
                    uhlmann_ancilla(&q, theta_s, OMEGA_S).unwrap(),
                ] {
                    let a = interference_amplitude(&q, &sys, &scheme, cycle_time()).unwrap();
                    let v = phase_of(a).visibility;
                    assert!((0.0..=1.0 + 1e-12).contains(&v), "visibility {v}");
                    // A pure state evolves unitarily, so the Uhlmann fringe
                    // keeps full contrast at r = 1.
                    if i == 10 && scheme.kind() == SchemeKind::Uhlmann {
                        assert!((v - 1.0).abs() <= 1e-12, "visibility {v} at r = 1");
                    }
                }
            }
        }
    }

    #[test]
    fn schemes_satisfy_their_transport_prescriptions() {
        // End-to-end on the constructors (the purification tests drive the
        // residuals with hand-built fields).
        let q = MixedQubit::new(5.0 / 6.0, 1.0 / 6.0).unwrap();
        let theta_s = FRAC_PI_4;
        let sys = system_field(theta_s, OMEGA_S).unwrap();
        let delta = DEFAULT_FD_SCALE / OMEGA_S;

        let sj = sjoqvist_ancilla(theta_s, OMEGA_S).unwrap();
        let uh = uhlmann_ancilla(&q, theta_s, OMEGA_S).unwrap();
        for k in 1..=4 {
            let t = 1.1 * k as f64;
            let res = pure_transport_residual(
                &q,
                bilocal_evolution(sys.clone(), sj.field().clone()),
                t,
                delta,
            )
            .unwrap();
            assert!(res <= 1e-6 * OMEGA_S);
            let res = uhlmann_parallel_residual(
                &q,
                bilocal_evolution(sys.clone(), uh.field().clone()),
                t,
                delta,
            )
            .unwrap();
            assert!(res <= 1e-6 * OMEGA_S);
            // And the spectral field is not Uhlmann-parallel at this point.
            let res = uhlmann_parallel_residual(
                &q,
                bilocal_evolution(sys.clone(), sj.field().clone()),
                t,
                delta,
            )
            .unwrap();
            assert!(res > 1e-3 * OMEGA_S);
        }
    }

    #[test]
    fn range_validation() {
        let q = MixedQubit::from_purity(0.5).unwrap();
        assert!(sjoqvist_ancilla(-0.1, 1.0).is_err());
        assert!(sjoqvist_ancilla(0.5, 0.0).is_err());
        assert!(uhlmann_ancilla(&q, 2.0, 1.0).is_err());
        assert!(sjoqvist_closed_form(1.1, 0.3).is_err());
        assert!(sjoqvist_closed_form(0.5, -0.3).is_err());
        assert!(uhlmann_closed_form(&q, 0.3, 0.3, 1.0, 1.0, -1.0).is_err());
        assert!(uhlmann_closed_form(&q, 0.3, 1.8, 1.0, 1.0, 1.0).is_err());
    }
}
