//! Three-qubit Ramsey interferometer.
//!
//! Register layout: probe, system, ancilla, with the probe the most
//! significant bit of the 8-dimensional computational index
//! (`index = 4 probe + 2 system + ancilla`). The circuit is
//!
//! 1. state preparation: `ry(2 arccos sqrt(p1))` on the system followed by
//!    `CNOT(system -> ancilla)`, turning `|000>` into the purification
//!    `|0> (sqrt(p1)|00> + sqrt(p2)|11>)`;
//! 2. probe splitting: `ry(pi/2)` on the probe;
//! 3. the bilocal evolution `U_s(t) kron U_a(t)` applied conditionally on
//!    the probe being `|1>`.
//!
//! No recombination pulse follows: the interference amplitude is read off
//! the probe's transverse coherence, `A = <sigma_x> + i <sigma_y>
//! = 2 rho_p[1][0]`, which equals `<Psi| U_s kron U_a |Psi>` exactly on the
//! ideal input and `epsilon` times it on a pseudo-pure input
//! `(1 - epsilon)/8 I + epsilon |000><000|` — the maximally mixed part is
//! blind to every gate here, so the phase is unchanged and only the fringe
//! contrast scales.
//!
//! All gates are validated as unitary before application and registers can
//! be checked for physicality (Hermitian, unit trace, positive
//! semidefinite) at any point.

use num_complex::Complex64;

use crate::linalg::{
    hermitian_eig, kron, partial_trace, su2_exp, ComplexMatrix, ComplexVector, UNITARY_TOL,
};
use crate::phase::AncillaScheme;
use crate::purification::MixedQubit;
use crate::spin::{propagator, FieldSpec, Propagator};
use crate::{Error, Result};

use std::f64::consts::FRAC_PI_2;

/// Qubit slots in the register, most significant first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Qubit {
    Probe,
    System,
    Ancilla,
}

impl Qubit {
    /// Bit shift of this qubit inside the 3-bit computational index.
    fn shift(self) -> usize {
        match self {
            Qubit::Probe => 2,
            Qubit::System => 1,
            Qubit::Ancilla => 0,
        }
    }

    /// Position in most-significant-first factor order (kron order).
    fn slot(self) -> usize {
        2 - self.shift()
    }
}

/// Admixture parameter for a pseudo-pure input state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PseudoPureConfig {
    pub epsilon: f64,
}

impl PseudoPureConfig {
    /// `epsilon` must lie in `(0, 1]`; `1` reproduces the ideal input.
    pub fn new(epsilon: f64) -> Result<Self> {
        if !epsilon.is_finite() || epsilon <= 0.0 || epsilon > 1.0 {
            return Err(Error::Range(format!(
                "pseudo-pure epsilon must lie in (0, 1], got {epsilon}"
            )));
        }
        Ok(Self { epsilon })
    }
}

impl Default for PseudoPureConfig {
    /// Thermal-polarization scale typical of room-temperature ensembles.
    fn default() -> Self {
        Self { epsilon: 1e-5 }
    }
}

/// Three-qubit register carried as an 8x8 density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Register3 {
    rho: ComplexMatrix,
}

impl Register3 {
    /// All three qubits in `|0>`.
    pub fn ground() -> Self {
        let mut rho = ComplexMatrix::zeros(8, 8);
        rho.set(0, 0, Complex64::new(1.0, 0.0));
        Self { rho }
    }

    /// Register in a pure state (must be 8-dimensional and normalized).
    pub fn pure(state: &ComplexVector) -> Result<Self> {
        if state.dim() != 8 {
            return Err(Error::Dimension(format!(
                "register state must have dimension 8, got {}",
                state.dim()
            )));
        }
        if (state.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::State(format!(
                "register state must be normalized, norm = {}",
                state.norm()
            )));
        }
        Ok(Self { rho: state.outer() })
    }

    /// Pseudo-pure input `(1 - epsilon)/8 I + epsilon |000><000|`.
    pub fn pseudo_pure(cfg: PseudoPureConfig) -> Self {
        let mut rho =
            ComplexMatrix::identity(8).scale(Complex64::new((1.0 - cfg.epsilon) / 8.0, 0.0));
        let e00 = rho.get(0, 0) + Complex64::new(cfg.epsilon, 0.0);
        rho.set(0, 0, e00);
        Self { rho }
    }

    pub fn density(&self) -> &ComplexMatrix {
        &self.rho
    }

    /// Conjugates the register by a unitary, `rho -> U rho U^dagger`.
    pub fn apply_unitary(&mut self, u: &ComplexMatrix) -> Result<()> {
        if u.rows() != 8 {
            return Err(Error::Dimension(format!(
                "register unitaries are 8x8, got {}x{}",
                u.rows(),
                u.cols()
            )));
        }
        let dev = u.unitarity_deviation();
        if dev > UNITARY_TOL {
            return Err(Error::NotUnitary { deviation: dev });
        }
        self.rho = u.mul(&self.rho)?.mul(&u.adjoint())?;
        Ok(())
    }

    /// Reduced density matrix of one qubit.
    pub fn reduced(&self, q: Qubit) -> Result<ComplexMatrix> {
        partial_trace(&self.rho, &[2, 2, 2], &[q.slot()])
    }

    /// Checks Hermiticity, unit trace, and positive semidefiniteness.
    pub fn validate_physical(&self) -> Result<()> {
        let dev = self.rho.hermiticity_deviation();
        if dev > 1e-10 {
            return Err(Error::NotHermitian { deviation: dev });
        }
        let tr = self.rho.trace();
        if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
            return Err(Error::State(format!("register trace is {tr}, want 1")));
        }
        let (eigs, _) = hermitian_eig(&self.rho)?;
        if let Some(lambda) = eigs.iter().find(|&&l| l < -1e-10) {
            return Err(Error::State(format!(
                "register density has negative eigenvalue {lambda}"
            )));
        }
        Ok(())
    }
}

/// Embeds a single-qubit gate into the 8-dimensional register.
pub fn single_qubit_gate(u: &ComplexMatrix, q: Qubit) -> Result<ComplexMatrix> {
    if u.rows() != 2 {
        return Err(Error::Dimension(format!(
            "single-qubit gates are 2x2, got {}x{}",
            u.rows(),
            u.cols()
        )));
    }
    let id = ComplexMatrix::identity(2);
    let factor = |slot: usize| if slot == q.slot() { u } else { &id };
    kron(&kron(factor(0), factor(1))?, factor(2))
}

/// `ry(beta)`: rotation about the y axis by `beta`.
pub fn ry(beta: f64) -> ComplexMatrix {
    su2_exp([0.0, 1.0, 0.0], beta).expect("y axis is unit")
}

/// CNOT with the given control and target qubits.
pub fn cnot(control: Qubit, target: Qubit) -> Result<ComplexMatrix> {
    if control == target {
        return Err(Error::Dimension(
            "cnot control and target must differ".into(),
        ));
    }
    let mut m = ComplexMatrix::zeros(8, 8);
    for input in 0..8 {
        let output = if (input >> control.shift()) & 1 == 1 {
            input ^ (1 << target.shift())
        } else {
            input
        };
        m.set(output, input, Complex64::new(1.0, 0.0));
    }
    Ok(m)
}

/// System rotation that loads the mixed qubit's populations:
/// `ry(2 arccos sqrt(p1))` takes `|0>` to `sqrt(p1)|0> + sqrt(p2)|1>`.
pub fn prep_system_gate(q: &MixedQubit) -> Result<ComplexMatrix> {
    single_qubit_gate(&ry(2.0 * q.p1().sqrt().acos()), Qubit::System)
}

/// Probe splitting pulse, `ry(pi/2)` on the probe.
pub fn probe_split_gate() -> Result<ComplexMatrix> {
    single_qubit_gate(&ry(FRAC_PI_2), Qubit::Probe)
}

/// Bilocal evolution applied only when the probe is `|1>`:
/// `|0><0| kron I + |1><1| kron (U_s kron U_a)`.
pub fn controlled_bilocal(us: &Propagator, ua: &Propagator) -> Result<ComplexMatrix> {
    if (us.duration() - ua.duration()).abs() > 1e-12 * us.duration().abs().max(1.0) {
        return Err(Error::State(format!(
            "system and ancilla propagators cover different durations: {} vs {}",
            us.duration(),
            ua.duration()
        )));
    }
    let mut p0 = ComplexMatrix::zeros(2, 2);
    p0.set(0, 0, Complex64::new(1.0, 0.0));
    let mut p1 = ComplexMatrix::zeros(2, 2);
    p1.set(1, 1, Complex64::new(1.0, 0.0));
    let idle = kron(&p0, &ComplexMatrix::identity(4))?;
    let evolved = kron(&p1, &kron(us.matrix(), ua.matrix())?)?;
    idle.add(&evolved)
}

/// Runs preparation on a register already holding the input state:
/// population loading on the system, then entangling CNOT to the ancilla.
pub fn prepare_purification(reg: &mut Register3, q: &MixedQubit) -> Result<()> {
    reg.apply_unitary(&prep_system_gate(q)?)?;
    reg.apply_unitary(&cnot(Qubit::System, Qubit::Ancilla)?)?;
    Ok(())
}

/// Transverse probe coherence, `<sigma_x> + i <sigma_y> = 2 rho_p[1][0]`.
pub fn probe_readout(reg: &Register3) -> Result<Complex64> {
    let rho_p = reg.reduced(Qubit::Probe)?;
    Ok(rho_p.get(1, 0) * 2.0)
}

/// A completed interferometer run: the final register and the probe readout.
#[derive(Debug, Clone)]
pub struct InterferometerRun {
    register: Register3,
    amplitude: Complex64,
}

impl InterferometerRun {
    pub fn register(&self) -> &Register3 {
        &self.register
    }

    /// Probe readout amplitude (phase and fringe visibility).
    pub fn amplitude(&self) -> Complex64 {
        self.amplitude
    }
}

fn run_on(
    mut reg: Register3,
    q: &MixedQubit,
    system: &FieldSpec,
    scheme: &AncillaScheme,
    t: f64,
) -> Result<InterferometerRun> {
    prepare_purification(&mut reg, q)?;
    reg.apply_unitary(&probe_split_gate()?)?;
    let us = propagator(system, t)?;
    let ua = propagator(scheme.field(), t)?;
    reg.apply_unitary(&controlled_bilocal(&us, &ua)?)?;
    let amplitude = probe_readout(&reg)?;
    Ok(InterferometerRun {
        register: reg,
        amplitude,
    })
}

/// Full interferometer on the ideal ground-state input.
pub fn run_interferometer(
    q: &MixedQubit,
    system: &FieldSpec,
    scheme: &AncillaScheme,
    t: f64,
) -> Result<InterferometerRun> {
    run_on(Register3::ground(), q, system, scheme, t)
}

/// Full interferometer on a pseudo-pure input; the readout is `epsilon`
/// times the ideal amplitude.
pub fn run_pseudo_pure(
    q: &MixedQubit,
    system: &FieldSpec,
    scheme: &AncillaScheme,
    t: f64,
    cfg: PseudoPureConfig,
) -> Result<InterferometerRun> {
    run_on(Register3::pseudo_pure(cfg), q, system, scheme, t)
}
