//! Spectrometer readout of the probe coherence.
//!
//! The three register qubits map to three weakly coupled spin-1/2 nuclei
//! (probe, system, ancilla, in register order). In the triple rotating frame
//! the chemical shifts vanish and the internal Hamiltonian is the diagonal
//! scalar-coupling term
//!
//! ```text
//! H = 2 pi sum_{i<j} J_ij Iz_i Iz_j,   Iz eigenvalue +1/2 for bit 0
//! ```
//!
//! so free evolution multiplies each density-matrix element by an exact
//! phase, `rho_jk(t) = rho_jk exp(-i (d_j - d_k) t)`. The observable is the
//! probe's transverse magnetization `Tr[rho sigma_minus^probe]`, which picks
//! out the four elements `rho[sa][4 + sa]`; their evolution frequencies
//! `J_12 m_2 + J_13 m_3` put the probe multiplet at
//! `+/-(J12 + J13)/2` and `+/-(J13 - J12)/2` Hz (the system-ancilla
//! coupling drops out). The free-induction decay is sampled at a fixed dwell
//! time under an exponential `T2` envelope, conjugated, and Fourier
//! transformed; conjugation makes the spectral integral carry `arg A` rather
//! than its negative, matching the convention of the probe readout
//! `A = 2 rho_p[1][0]`.
//!
//! Phase and visibility are extracted from the complex spectral integral
//! over the full acquired band, normalized against a reference run whose
//! conditional evolution is the identity; the normalization cancels the
//! pseudo-pure admixture, the decay envelope, and the transform scale in
//! one stroke. Integrating the full band rather than just the multiplet
//! windows is deliberate: the all-bin sum of a DFT equals `N` times the
//! first time-domain sample, so every dispersive Lorentzian tail cancels
//! identically and the extracted phase is exact. Window-limited integrals
//! clip those tails — which decay only logarithmically in integral — and
//! can bias the phase by orders of magnitude more than the line intensity
//! ratios suggest (see the tests). The multiplet windows remain the right
//! tool for locating and diagnosing individual lines.

use num_complex::Complex64;

use crate::linalg::ComplexMatrix;
use crate::phase::{phase_of, AncillaScheme, PhaseResult};
use crate::purification::MixedQubit;
use crate::spin::FieldSpec;
use crate::{circuit, Error, Result};

use std::f64::consts::PI;

/// Scalar couplings (in Hz) between the three register spins.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinSystem {
    j12: f64,
    j13: f64,
    j23: f64,
}

impl SpinSystem {
    /// Couplings `(J_probe-system, J_probe-ancilla, J_system-ancilla)` in Hz.
    pub fn new(j12: f64, j13: f64, j23: f64) -> Result<Self> {
        for (name, v) in [("j12", j12), ("j13", j13), ("j23", j23)] {
            if !v.is_finite() {
                return Err(Error::Range(format!("{name} must be finite, got {v}")));
            }
        }
        Ok(Self { j12, j13, j23 })
    }

    pub fn j12(&self) -> f64 {
        self.j12
    }

    pub fn j13(&self) -> f64 {
        self.j13
    }

    pub fn j23(&self) -> f64 {
        self.j23
    }

    /// Diagonal internal Hamiltonian in angular-frequency units.
    pub fn hamiltonian(&self) -> ComplexMatrix {
        let d = self.diagonal();
        let mut h = ComplexMatrix::zeros(8, 8);
        for (j, dj) in d.iter().enumerate() {
            h.set(j, j, Complex64::new(*dj, 0.0));
        }
        h
    }

    /// Diagonal entries `d_j` of the internal Hamiltonian (rad/s).
    fn diagonal(&self) -> [f64; 8] {
        let mut d = [0.0; 8];
        for (j, dj) in d.iter_mut().enumerate() {
            let m = |shift: usize| if (j >> shift) & 1 == 0 { 0.5 } else { -0.5 };
            let (m1, m2, m3) = (m(2), m(1), m(0));
            *dj = 2.0 * PI * (self.j12 * m1 * m2 + self.j13 * m1 * m3 + self.j23 * m2 * m3);
        }
        d
    }

    /// Rotating-frame frequencies (Hz) of the four probe coherences,
    /// indexed by the system-ancilla basis state.
    pub fn probe_line_frequencies(&self) -> [f64; 4] {
        let d = self.diagonal();
        let mut f = [0.0; 4];
        for (sa, fsa) in f.iter_mut().enumerate() {
            *fsa = (d[sa] - d[4 + sa]) / (2.0 * PI);
        }
        f
    }
}

impl Default for SpinSystem {
    /// Couplings of a trichlorethylene-like three-spin molecule:
    /// `J12 = -1.3 Hz`, `J13 = 54.1 Hz`, `J23 = 34.9 Hz`.
    fn default() -> Self {
        Self {
            j12: -1.3,
            j13: 54.1,
            j23: 34.9,
        }
    }
}

/// Sampling parameters for the free-induction decay.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AcquisitionConfig {
    dwell: f64,
    npoints: usize,
    t2: f64,
}

impl AcquisitionConfig {
    /// `dwell` in seconds, `npoints` a power of two in `[16, 65536]`,
    /// `t2` in seconds.
    pub fn new(dwell: f64, npoints: usize, t2: f64) -> Result<Self> {
        if !dwell.is_finite() || dwell <= 0.0 {
            return Err(Error::Range(format!("dwell must be positive, got {dwell}")));
        }
        if !npoints.is_power_of_two() || !(16..=65536).contains(&npoints) {
            return Err(Error::Range(format!(
                "npoints must be a power of two in [16, 65536], got {npoints}"
            )));
        }
        if !t2.is_finite() || t2 <= 0.0 {
            return Err(Error::Range(format!("t2 must be positive, got {t2}")));
        }
        Ok(Self { dwell, npoints, t2 })
    }

    pub fn dwell(&self) -> f64 {
        self.dwell
    }

    pub fn npoints(&self) -> usize {
        self.npoints
    }

    pub fn t2(&self) -> f64 {
        self.t2
    }

    /// Lorentzian full width at half maximum, `1 / (pi T2)` Hz.
    pub fn linewidth(&self) -> f64 {
        1.0 / (PI * self.t2)
    }

    /// Spectral bin spacing, `1 / (npoints * dwell)` Hz.
    pub fn resolution(&self) -> f64 {
        1.0 / (self.npoints as f64 * self.dwell)
    }
}

impl Default for AcquisitionConfig {
    /// 2 ms dwell, 4096 points, `T2 = 0.5 s`: 250 Hz of one-sided bandwidth
    /// at 0.122 Hz resolution, comfortably resolving the probe multiplet.
    fn default() -> Self {
        Self {
            dwell: 2e-3,
            npoints: 4096,
            t2: 0.5,
        }
    }
}

/// Sampled free-induction decay of the probe magnetization.
#[derive(Debug, Clone)]
pub struct Fid {
    samples: Vec<Complex64>,
    dwell: f64,
}

impl Fid {
    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn dwell(&self) -> f64 {
        self.dwell
    }

    /// CSV dump with header `index,time_s,re,im`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,time_s,re,im\n");
        for (k, s) in self.samples.iter().enumerate() {
            out.push_str(&format!(
                "{},{},{},{}\n",
                k,
                crate::fmt_sci(k as f64 * self.dwell),
                crate::fmt_sci(s.re),
                crate::fmt_sci(s.im)
            ));
        }
        out
    }
}

/// Frequency-domain signal on an fftshifted axis (ascending Hz).
#[derive(Debug, Clone)]
pub struct Spectrum {
    freqs: Vec<f64>,
    values: Vec<Complex64>,
}

impl Spectrum {
    pub fn freqs(&self) -> &[f64] {
        &self.freqs
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// CSV dump with header `index,freq_hz,re,im`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,freq_hz,re,im\n");
        for (k, (f, v)) in self.freqs.iter().zip(&self.values).enumerate() {
            out.push_str(&format!(
                "{},{},{},{}\n",
                k,
                crate::fmt_sci(*f),
                crate::fmt_sci(v.re),
                crate::fmt_sci(v.im)
            ));
        }
        out
    }
}

/// Synthesizes the probe FID from a register density matrix.
///
/// Only the four probe-coherence elements evolve into the signal; the
/// diagonal Hamiltonian turns their propagation into exact per-element
/// phases, and the `T2` envelope multiplies on top:
/// `s(t_k) = sum_sa rho[sa][4+sa] exp(-i (d_sa - d_{4+sa}) t_k) exp(-t_k/T2)`.
pub fn acquire_fid(
    rho: &ComplexMatrix,
    spins: &SpinSystem,
    acq: &AcquisitionConfig,
) -> Result<Fid> {
    if rho.rows() != 8 || rho.cols() != 8 {
        return Err(Error::Dimension(format!(
            "spectrometer input must be an 8x8 register density, got {}x{}",
            rho.rows(),
            rho.cols()
        )));
    }
    let dev = rho.hermiticity_deviation();
    if dev > 1e-10 {
        return Err(Error::NotHermitian { deviation: dev });
    }
    let lines = spins.probe_line_frequencies();
    let amps: Vec<Complex64> = (0..4).map(|sa| rho.get(sa, 4 + sa)).collect();
    let mut samples = Vec::with_capacity(acq.npoints());
    for k in 0..acq.npoints() {
        let t = k as f64 * acq.dwell();
        let envelope = (-t / acq.t2()).exp();
        let mut s = Complex64::new(0.0, 0.0);
        for (amp, f) in amps.iter().zip(&lines) {
            s += amp * Complex64::from_polar(1.0, -2.0 * PI * f * t);
        }
        samples.push(s * envelope);
    }
    Ok(Fid {
        samples,
        dwell: acq.dwell(),
    })
}

/// Conjugates the FID and Fourier transforms it onto an fftshifted axis.
///
/// With the forward DFT `X_m = sum_k x_k exp(-i 2 pi k m / N)`, conjugation
/// flips the acquisition phases `exp(-i 2 pi f t_k)` into `exp(+i ...)`, so
/// a coherence at `f` appears at `+f` on the shifted axis and the spectral
/// integral inherits the amplitude's own phase.
pub fn fourier_spectrum(fid: &Fid) -> Spectrum {
    let n = fid.samples.len();
    let mut buf: Vec<Complex64> = fid.samples.iter().map(|s| s.conj()).collect();
    let mut planner = rustfft::FftPlanner::<f64>::new();
    planner.plan_fft_forward(n).process(&mut buf);
    let resolution = 1.0 / (n as f64 * fid.dwell);
    let mut freqs = Vec::with_capacity(n);
    let mut values = Vec::with_capacity(n);
    for i in 0..n {
        let m = (i + n / 2) % n; // fftshift
        freqs.push((i as f64 - (n / 2) as f64) * resolution);
        values.push(buf[m]);
    }
    Spectrum { freqs, values }
}

/// Integration windows around the four probe lines, `+/- 2` linewidths
/// wide, merged wherever neighbouring windows overlap.
pub fn multiplet_windows(spins: &SpinSystem, acq: &AcquisitionConfig) -> Vec<(f64, f64)> {
    let half = 2.0 * acq.linewidth();
    let mut lines = spins.probe_line_frequencies();
    lines.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut windows: Vec<(f64, f64)> = Vec::new();
    for f in lines {
        let (lo, hi) = (f - half, f + half);
        match windows.last_mut() {
            Some(last) if lo <= last.1 => last.1 = hi.max(last.1),
            _ => windows.push((lo, hi)),
        }
    }
    windows
}

/// Sum of spectral values over all bins inside any window.
pub fn windowed_integral(spec: &Spectrum, windows: &[(f64, f64)]) -> Complex64 {
    spec.freqs
        .iter()
        .zip(&spec.values)
        .filter(|(f, _)| windows.iter().any(|(lo, hi)| **f >= *lo && **f <= *hi))
        .map(|(_, v)| v)
        .sum()
}

/// Sum of the spectrum over the full band. Equal to `N` times the first
/// conjugated FID sample, which makes it free of lineshape truncation bias.
pub fn total_integral(spec: &Spectrum) -> Complex64 {
    spec.values.iter().sum()
}

/// Frequency of the strongest bin inside a window, with its magnitude.
pub fn dominant_peak(spec: &Spectrum, window: (f64, f64)) -> Option<(f64, f64)> {
    spec.freqs
        .iter()
        .zip(&spec.values)
        .filter(|(f, _)| **f >= window.0 && **f <= window.1)
        .map(|(f, v)| (*f, v.norm()))
        .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
}

/// A complete spectrometer observation of one interferometer run.
#[derive(Debug, Clone)]
pub struct NmrObservation {
    result: PhaseResult,
    fid: Fid,
    spectrum: Spectrum,
}

impl NmrObservation {
    /// Phase and visibility extracted from the full-band spectral integral.
    pub fn result(&self) -> PhaseResult {
        self.result
    }

    pub fn fid(&self) -> &Fid {
        &self.fid
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }
}

/// Runs the pseudo-pure interferometer, acquires and transforms the FID,
/// and extracts phase and visibility from the spectrum.
///
/// A second run with zero evolution time provides the reference fringe: the
/// ratio of the two full-band spectral integrals normalizes the magnitude
/// (cancelling the pseudo-pure scale and the envelope) and anchors the
/// phase origin, the same role the first-point phasing of quadrature
/// detection plays on a spectrometer.
pub fn observe_interference(
    q: &MixedQubit,
    system: &FieldSpec,
    scheme: &AncillaScheme,
    t: f64,
    pp: circuit::PseudoPureConfig,
    spins: &SpinSystem,
    acq: &AcquisitionConfig,
) -> Result<NmrObservation> {
    let run = circuit::run_pseudo_pure(q, system, scheme, t, pp)?;
    let fid = acquire_fid(run.register().density(), spins, acq)?;
    let spectrum = fourier_spectrum(&fid);
    let signal = total_integral(&spectrum);

    let reference_run = circuit::run_pseudo_pure(q, system, scheme, 0.0, pp)?;
    let reference_fid = acquire_fid(reference_run.register().density(), spins, acq)?;
    let reference = total_integral(&fourier_spectrum(&reference_fid));
    if reference.norm() == 0.0 {
        return Err(Error::State(
            "reference spectrum vanished; cannot normalize".into(),
        ));
    }

    let result = phase_of(signal / reference);
    Ok(NmrObservation {
        result,
        fid,
        spectrum,
    })
}
