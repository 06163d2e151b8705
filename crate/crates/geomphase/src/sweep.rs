//! Parameter sweeps and the deterministic CSV layer.
//!
//! Every sweep works at the internal rate `OMEGA_S = 1 rad/s`; phases depend
//! only on the product `omega_s * t`, which callers pass directly. A sweep
//! row records, for one `(scheme, r, theta_s)` point, the measured
//! interference phase (principal and unwrapped), the fringe visibility, the
//! matching closed form, and the absolute circular difference between the
//! two. Undefined quantities — a phase below the visibility floor, or the
//! cyclic-only spectral closed form evaluated away from `omega_s t = 2 pi`
//! — are carried as NaN and serialized as the literal `nan`.
//!
//! CSV output is deterministic: `#`-prefixed metadata lines (tool version,
//! parameter echo, measured scheme offsets), one fixed header, rows in sweep
//! order, floats in 12-significant-digit scientific notation, LF endings.
//! `parse_csv` inverts `emit_csv` and emitting a parsed table reproduces the
//! input byte for byte, which is what makes the files diffable artifacts.

use crate::circuit::{run_interferometer, PseudoPureConfig};
use crate::nmr::{observe_interference, AcquisitionConfig, SpinSystem};
use crate::phase::{
    interference_amplitude, phase_of, sjoqvist_ancilla, sjoqvist_closed_form, uhlmann_ancilla,
    uhlmann_closed_form, SchemeKind,
};
use crate::purification::MixedQubit;
use crate::spin::system_field;
use crate::{fmt_sci, wrap_angle, Error, Result};

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_6, PI};
use std::str::FromStr;

/// Internal system rate. Phases depend only on `omega_s * t`, so the rate
/// itself is a fixed scale and sweep inputs are expressed as `omega_s t`.
pub const OMEGA_S: f64 = 1.0;

/// Tolerance within which `omega_s t` counts as one full cycle.
const CYCLE_TOL: f64 = 1e-9;

/// Which evaluation route produces the measured phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    /// Direct tensor-product amplitude (the reference implementation).
    Amplitude,
    /// Three-qubit interferometer circuit on the ideal input.
    Circuit,
    /// Pseudo-pure circuit followed by the simulated spectrometer readout.
    Nmr,
}

impl Backend {
    pub fn label(&self) -> &'static str {
        match self {
            Backend::Amplitude => "amplitude",
            Backend::Circuit => "circuit",
            Backend::Nmr => "nmr",
        }
    }
}

impl FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "amplitude" => Ok(Backend::Amplitude),
            "circuit" => Ok(Backend::Circuit),
            "nmr" => Ok(Backend::Nmr),
            other => Err(Error::Config(format!(
                "unknown backend '{other}' (expected amplitude, circuit, or nmr)"
            ))),
        }
    }
}

/// Scheme selection for a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeChoice {
    Sjoqvist,
    Uhlmann,
    Both,
}

impl SchemeChoice {
    pub fn kinds(&self) -> &'static [SchemeKind] {
        match self {
            SchemeChoice::Sjoqvist => &[SchemeKind::Sjoqvist],
            SchemeChoice::Uhlmann => &[SchemeKind::Uhlmann],
            SchemeChoice::Both => &[SchemeKind::Sjoqvist, SchemeKind::Uhlmann],
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            SchemeChoice::Sjoqvist => "sjoqvist",
            SchemeChoice::Uhlmann => "uhlmann",
            SchemeChoice::Both => "both",
        }
    }
}

impl FromStr for SchemeChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sjoqvist" => Ok(SchemeChoice::Sjoqvist),
            "uhlmann" => Ok(SchemeChoice::Uhlmann),
            "both" => Ok(SchemeChoice::Both),
            other => Err(Error::Config(format!(
                "unknown scheme '{other}' (expected sjoqvist, uhlmann, or both)"
            ))),
        }
    }
}

/// Which parameter varies along the sweep; the other one is held fixed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SweepAxis {
    /// Sweep the purity `r` over `[0, 1]` at fixed polar angle.
    Purity { theta_s: f64 },
    /// Sweep the polar angle over `[0, pi/2]` at fixed purity.
    Polar { r: f64 },
}

/// Full description of one sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub axis: SweepAxis,
    pub points: usize,
    pub omega_s_t: f64,
    pub schemes: SchemeChoice,
    pub backend: Backend,
}

/// One evaluated grid point. NaN marks undefined entries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub scheme: SchemeKind,
    pub r: f64,
    pub theta_s: f64,
    pub phase_rad: f64,
    pub phase_unwrapped_rad: f64,
    pub visibility: f64,
    pub closed_form_rad: f64,
    pub abs_diff_mod_2pi: f64,
}

/// Rows plus the `#` metadata lines that precede them in the CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub comments: Vec<String>,
    pub rows: Vec<SweepRow>,
}

/// The one and only sweep CSV header.
pub const CSV_HEADER: &str =
    "scheme,r,theta_s,phase_rad,phase_unwrapped_rad,visibility,closed_form_rad,abs_diff_mod_2pi";

/// Evaluates a single grid point through the chosen backend and pairs it
/// with its closed form.
///
/// The spectral closed form exists only at the cyclic time, so for the
/// spectral scheme away from `omega_s t = 2 pi` the `closed_form_rad`
/// column is NaN; the Uhlmann closed form is time-general. The unwrapped
/// phase of a lone point is the principal phase.
pub fn point_row(
    r: f64,
    theta_s: f64,
    kind: SchemeKind,
    omega_s_t: f64,
    backend: Backend,
) -> Result<SweepRow> {
    if !omega_s_t.is_finite() || omega_s_t <= 0.0 {
        return Err(Error::Range(format!(
            "omega_s_t must be positive, got {omega_s_t}"
        )));
    }
    let q = MixedQubit::from_purity(r)?;
    let sys = system_field(theta_s, OMEGA_S)?;
    let scheme = match kind {
        SchemeKind::Sjoqvist => sjoqvist_ancilla(theta_s, OMEGA_S)?,
        SchemeKind::Uhlmann => uhlmann_ancilla(&q, theta_s, OMEGA_S)?,
    };
    let t = omega_s_t / OMEGA_S;

    let res = match backend {
        Backend::Amplitude => phase_of(interference_amplitude(&q, &sys, &scheme, t)?),
        Backend::Circuit => phase_of(run_interferometer(&q, &sys, &scheme, t)?.amplitude()),
        Backend::Nmr => observe_interference(
            &q,
            &sys,
            &scheme,
            t,
            PseudoPureConfig::default(),
            &SpinSystem::default(),
            &AcquisitionConfig::default(),
        )?
        .result(),
    };

    let closed_form_rad = match kind {
        SchemeKind::Sjoqvist => {
            if (omega_s_t - 2.0 * PI).abs() <= CYCLE_TOL {
                sjoqvist_closed_form(r, theta_s)?
            } else {
                f64::NAN
            }
        }
        SchemeKind::Uhlmann => uhlmann_closed_form(
            &q,
            theta_s,
            scheme.polar_angle(),
            OMEGA_S,
            scheme.field().omega(),
            t,
        )?,
    };

    let phase_rad = res.phase.unwrap_or(f64::NAN);
    let abs_diff_mod_2pi = if phase_rad.is_finite() && closed_form_rad.is_finite() {
        wrap_angle(phase_rad - closed_form_rad).abs()
    } else {
        f64::NAN
    };
    Ok(SweepRow {
        scheme: kind,
        r,
        theta_s,
        phase_rad,
        phase_unwrapped_rad: phase_rad,
        visibility: res.visibility,
        closed_form_rad,
        abs_diff_mod_2pi,
    })
}

/// Runs a sweep: grid points in ascending order, one block per scheme,
/// with the principal phase unwrapped along the sweep (undefined points are
/// skipped and left NaN).
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepTable> {
    if spec.points < 2 {
        return Err(Error::Range(format!(
            "a sweep needs at least 2 points, got {}",
            spec.points
        )));
    }
    let mut rows = Vec::with_capacity(spec.points * spec.schemes.kinds().len());
    for &kind in spec.schemes.kinds() {
        let mut prev: Option<f64> = None;
        for i in 0..spec.points {
            let frac = i as f64 / (spec.points - 1) as f64;
            let (r, theta_s) = match spec.axis {
                SweepAxis::Purity { theta_s } => (frac, theta_s),
                SweepAxis::Polar { r } => (r, frac * FRAC_PI_2),
            };
            let mut row = point_row(r, theta_s, kind, spec.omega_s_t, spec.backend)?;
            if row.phase_rad.is_finite() {
                let unwrapped = match prev {
                    None => row.phase_rad,
                    Some(p) => p + wrap_angle(row.phase_rad - p),
                };
                row.phase_unwrapped_rad = unwrapped;
                prev = Some(unwrapped);
            } else {
                row.phase_unwrapped_rad = f64::NAN;
            }
            rows.push(row);
        }
    }

    let axis_echo = match spec.axis {
        SweepAxis::Purity { theta_s } => format!("axis=purity theta_s={}", fmt_sci(theta_s)),
        SweepAxis::Polar { r } => format!("axis=polar r={}", fmt_sci(r)),
    };
    let mut comments = vec![
        format!("geomphase {}", env!("CARGO_PKG_VERSION")),
        format!(
            "sweep: {axis_echo} points={} omega_s_t={} scheme={} backend={}",
            spec.points,
            fmt_sci(spec.omega_s_t),
            spec.schemes.label(),
            spec.backend.label()
        ),
    ];
    comments.extend(offset_comments(&rows));
    Ok(SweepTable { comments, rows })
}

/// Circular mean of `phase - closed_form` per scheme, over rows where both
/// are defined. This is the measured scheme offset reported in the CSV
/// metadata; zero for both schemes under this crate's conventions.
pub fn scheme_offsets(rows: &[SweepRow]) -> Vec<(SchemeKind, f64)> {
    let mut out = Vec::new();
    for kind in [SchemeKind::Sjoqvist, SchemeKind::Uhlmann] {
        let (mut s, mut c, mut n) = (0.0, 0.0, 0usize);
        for row in rows.iter().filter(|row| row.scheme == kind) {
            let d = row.phase_rad - row.closed_form_rad;
            if d.is_finite() {
                let d = wrap_angle(d);
                s += d.sin();
                c += d.cos();
                n += 1;
            }
        }
        if n > 0 {
            out.push((kind, s.atan2(c)));
        }
    }
    out
}

fn offset_comments(rows: &[SweepRow]) -> Vec<String> {
    scheme_offsets(rows)
        .into_iter()
        .map(|(kind, offset)| format!("measured_offset_{}_rad = {}", kind.label(), fmt_sci(offset)))
        .collect()
}

/// Phase surfaces over the full `(r, theta_s)` rectangle: 51 x 51 grid per
/// scheme at the cyclic time, polar angle varying fastest.
pub fn fig2_table() -> Result<SweepTable> {
    let mut rows = Vec::with_capacity(2 * 51 * 51);
    for &kind in SchemeChoice::Both.kinds() {
        for i in 0..51 {
            let r = i as f64 / 50.0;
            let spec = SweepSpec {
                axis: SweepAxis::Polar { r },
                points: 51,
                omega_s_t: 2.0 * PI,
                schemes: match kind {
                    SchemeKind::Sjoqvist => SchemeChoice::Sjoqvist,
                    SchemeKind::Uhlmann => SchemeChoice::Uhlmann,
                },
                backend: Backend::Amplitude,
            };
            rows.extend(run_sweep(&spec)?.rows);
        }
    }
    let mut comments = vec![
        format!("geomphase {}", env!("CARGO_PKG_VERSION")),
        "preset: fig2 (phase surfaces, 51x51 grid per scheme, omega_s_t = 2 pi)".to_string(),
    ];
    comments.extend(offset_comments(&rows));
    Ok(SweepTable { comments, rows })
}

/// The four sweep axes of the standard presentation: purity sweeps at
/// `theta_s = pi/6` and `pi/4`, polar sweeps at `r = 1/3` and `2/3`.
pub fn fig4_axes() -> [SweepAxis; 4] {
    [
        SweepAxis::Purity { theta_s: FRAC_PI_6 },
        SweepAxis::Purity { theta_s: FRAC_PI_4 },
        SweepAxis::Polar { r: 1.0 / 3.0 },
        SweepAxis::Polar { r: 2.0 / 3.0 },
    ]
}

/// Number of grid points per sweep in the standard presentation.
pub const FIG4_POINTS: usize = 13;

/// The four interferometer sweeps of the standard presentation
/// ([`fig4_axes`]), 13 points each, both schemes, cyclic time.
pub fn fig4_table() -> Result<SweepTable> {
    let axes = fig4_axes();
    let mut rows = Vec::with_capacity(axes.len() * 2 * FIG4_POINTS);
    for axis in axes {
        let spec = SweepSpec {
            axis,
            points: FIG4_POINTS,
            omega_s_t: 2.0 * PI,
            schemes: SchemeChoice::Both,
            backend: Backend::Amplitude,
        };
        rows.extend(run_sweep(&spec)?.rows);
    }
    let mut comments = vec![
        format!("geomphase {}", env!("CARGO_PKG_VERSION")),
        "preset: fig4 (purity sweeps at theta_s = pi/6, pi/4; polar sweeps at r = 1/3, 2/3)"
            .to_string(),
    ];
    comments.extend(offset_comments(&rows));
    Ok(SweepTable { comments, rows })
}

/// Serializes a table: `#` metadata, the fixed header, then one line per
/// row with 12-significant-digit floats and LF endings.
pub fn emit_csv(table: &SweepTable) -> String {
    let mut out = String::new();
    for comment in &table.comments {
        if comment.is_empty() {
            out.push_str("#\n");
        } else {
            out.push_str("# ");
            out.push_str(comment);
            out.push('\n');
        }
    }
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in &table.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            row.scheme.label(),
            fmt_sci(row.r),
            fmt_sci(row.theta_s),
            fmt_sci(row.phase_rad),
            fmt_sci(row.phase_unwrapped_rad),
            fmt_sci(row.visibility),
            fmt_sci(row.closed_form_rad),
            fmt_sci(row.abs_diff_mod_2pi),
        ));
    }
    out
}

fn parse_field(field: &str, lineno: usize) -> Result<f64> {
    field
        .parse::<f64>()
        .map_err(|_| Error::Csv(format!("line {lineno}: cannot parse float from '{field}'")))
}

/// Parses a sweep CSV produced by [`emit_csv`]. Metadata lines are kept
/// verbatim so a parsed table re-emits byte-identically.
pub fn parse_csv(text: &str) -> Result<SweepTable> {
    let mut comments = Vec::new();
    let mut rows = Vec::new();
    let mut header_seen = false;
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        if let Some(rest) = line.strip_prefix('#') {
            comments.push(rest.strip_prefix(' ').unwrap_or(rest).to_string());
            continue;
        }
        if !header_seen {
            if line != CSV_HEADER {
                return Err(Error::Csv(format!(
                    "line {lineno}: expected header '{CSV_HEADER}', got '{line}'"
                )));
            }
            header_seen = true;
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 8 {
            return Err(Error::Csv(format!(
                "line {lineno}: expected 8 fields, got {}",
                fields.len()
            )));
        }
        let scheme = match fields[0] {
            "sjoqvist" => SchemeKind::Sjoqvist,
            "uhlmann" => SchemeKind::Uhlmann,
            other => {
                return Err(Error::Csv(format!(
                    "line {lineno}: unknown scheme '{other}'"
                )))
            }
        };
        rows.push(SweepRow {
            scheme,
            r: parse_field(fields[1], lineno)?,
            theta_s: parse_field(fields[2], lineno)?,
            phase_rad: parse_field(fields[3], lineno)?,
            phase_unwrapped_rad: parse_field(fields[4], lineno)?,
            visibility: parse_field(fields[5], lineno)?,
            closed_form_rad: parse_field(fields[6], lineno)?,
            abs_diff_mod_2pi: parse_field(fields[7], lineno)?,
        });
    }
    if !header_seen {
        return Err(Error::Csv("missing header line".into()));
    }
    Ok(SweepTable { comments, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn backend_and_scheme_labels_round_trip() {
        for b in [Backend::Amplitude, Backend::Circuit, Backend::Nmr] {
            assert_eq!(b.label().parse::<Backend>().unwrap(), b);
        }
        for s in [
            SchemeChoice::Sjoqvist,
            SchemeChoice::Uhlmann,
            SchemeChoice::Both,
        ] {
            assert_eq!(s.label().parse::<SchemeChoice>().unwrap(), s);
        }
        assert!("bogus".parse::<Backend>().is_err());
        assert!("bogus".parse::<SchemeChoice>().is_err());
    }

    #[test]
    fn backends_agree_at_the_standard_point() {
        let reference = point_row(
            2.0 / 3.0,
            FRAC_PI_4,
            SchemeKind::Uhlmann,
            2.0 * PI,
            Backend::Amplitude,
        )
        .unwrap();
        for backend in [Backend::Circuit, Backend::Nmr] {
            let row =
                point_row(2.0 / 3.0, FRAC_PI_4, SchemeKind::Uhlmann, 2.0 * PI, backend).unwrap();
            assert!(
                wrap_angle(row.phase_rad - reference.phase_rad).abs() < 1e-10,
                "{backend:?}"
            );
            assert!((row.visibility - reference.visibility).abs() < 1e-9);
        }
    }

    #[test]
    fn closed_form_column_follows_scheme_and_time() {
        // Spectral closed form only exists at the cyclic time.
        let row = point_row(0.5, 0.7, SchemeKind::Sjoqvist, 3.0, Backend::Amplitude).unwrap();
        assert!(row.closed_form_rad.is_nan());
        assert!(row.abs_diff_mod_2pi.is_nan());
        assert!(row.phase_rad.is_finite());
        // The Uhlmann closed form is time-general and tracks the
        // measurement with zero offset even off-cycle.
        let row = point_row(0.5, 0.7, SchemeKind::Uhlmann, 3.0, Backend::Amplitude).unwrap();
        assert!(row.closed_form_rad.is_finite());
        assert!(row.abs_diff_mod_2pi < 1e-12);
    }

    #[test]
    fn undefined_phase_at_the_visibility_zero() {
        // Fully mixed spectral fringe vanishes at theta_s = pi/3.
        let row = point_row(
            0.0,
            PI / 3.0,
            SchemeKind::Sjoqvist,
            2.0 * PI,
            Backend::Amplitude,
        )
        .unwrap();
        assert!(row.visibility <= 1e-9);
        assert!(row.phase_rad.is_nan());
        assert!(row.phase_unwrapped_rad.is_nan());
        assert!(row.abs_diff_mod_2pi.is_nan());
        assert!(row.closed_form_rad.is_finite());
    }

    #[test]
    fn sweep_order_and_unwrap_continuity() {
        let spec = SweepSpec {
            axis: SweepAxis::Polar { r: 2.0 / 3.0 },
            points: 201,
            omega_s_t: 2.0 * PI,
            schemes: SchemeChoice::Both,
            backend: Backend::Amplitude,
        };
        let table = run_sweep(&spec).unwrap();
        assert_eq!(table.rows.len(), 402);
        // Scheme blocks in declaration order, theta ascending inside each.
        assert_eq!(table.rows[0].scheme, SchemeKind::Sjoqvist);
        assert_eq!(table.rows[201].scheme, SchemeKind::Uhlmann);
        assert!(table.rows[0].theta_s == 0.0 && table.rows[200].theta_s == FRAC_PI_2);
        for block in [&table.rows[..201], &table.rows[201..]] {
            assert!((block[0].phase_unwrapped_rad - block[0].phase_rad).abs() < 1e-15);
            for pair in block.windows(2) {
                let step = pair[1].phase_unwrapped_rad - pair[0].phase_unwrapped_rad;
                assert!(step.is_finite() && step.abs() < 0.2, "jump of {step}");
            }
        }
        // The spectral phase winds down to -pi(1 - cos theta) territory at
        // the pure end of the scale without wrapping artifacts.
        let last = table.rows[200];
        assert!(last.phase_unwrapped_rad < -PI / 2.0);
    }

    #[test]
    fn fig2_shape() {
        let table = fig2_table().unwrap();
        assert_eq!(table.rows.len(), 2 * 51 * 51);
        assert_eq!(table.rows[0].scheme, SchemeKind::Sjoqvist);
        assert_eq!(table.rows[51 * 51].scheme, SchemeKind::Uhlmann);
        // r advances every 51 rows; theta cycles within.
        assert!((table.rows[50].theta_s - FRAC_PI_2).abs() < 1e-15);
        assert!((table.rows[51].r - 0.02).abs() < 1e-15);
        assert!(table.comments.iter().any(|c| c.contains("fig2")));
    }

    #[test]
    fn fig4_shape_and_zero_offsets() {
        let table = fig4_table().unwrap();
        assert_eq!(table.rows.len(), 104);
        // First block: purity sweep at pi/6, spectral scheme.
        assert_eq!(table.rows[0].scheme, SchemeKind::Sjoqvist);
        assert!((table.rows[0].theta_s - FRAC_PI_6).abs() < 1e-15);
        assert!(table.rows[0].r == 0.0 && (table.rows[12].r - 1.0).abs() < 1e-15);
        // Third block: same sweep, Uhlmann scheme.
        assert_eq!(table.rows[13].scheme, SchemeKind::Uhlmann);
        // Last block: polar sweep at r = 2/3, Uhlmann.
        let last = table.rows[103];
        assert_eq!(last.scheme, SchemeKind::Uhlmann);
        assert!((last.r - 2.0 / 3.0).abs() < 1e-15);
        assert!((last.theta_s - FRAC_PI_2).abs() < 1e-15);

        // Measured offsets vanish for both schemes at the cyclic time.
        for (_, offset) in scheme_offsets(&table.rows) {
            assert!(offset.abs() < 1e-12, "offset {offset}");
        }
        // And every defined row agrees with its closed form pointwise.
        for row in &table.rows {
            if row.abs_diff_mod_2pi.is_finite() {
                assert!(row.abs_diff_mod_2pi < 1e-12);
            }
        }
    }

    #[test]
    fn csv_round_trip_is_byte_identical() {
        let table = fig4_table().unwrap();
        let first = emit_csv(&table);
        let reparsed = parse_csv(&first).unwrap();
        let second = emit_csv(&reparsed);
        assert_eq!(first, second);
        assert_eq!(reparsed.comments, table.comments);

        // Including a sweep that contains NaN columns.
        let spec = SweepSpec {
            axis: SweepAxis::Polar { r: 0.0 },
            points: 13,
            omega_s_t: 2.0 * PI,
            schemes: SchemeChoice::Sjoqvist,
            backend: Backend::Amplitude,
        };
        let table = run_sweep(&spec).unwrap();
        assert!(table.rows.iter().any(|row| row.phase_rad.is_nan()));
        let first = emit_csv(&table);
        assert!(first.contains(",nan,"));
        let second = emit_csv(&parse_csv(&first).unwrap());
        assert_eq!(first, second);
    }

    #[test]
    fn emitted_csv_layout() {
        let table = fig4_table().unwrap();
        let text = emit_csv(&table);
        assert!(!text.contains('\r'));
        assert!(text.ends_with('\n'));
        let mut lines = text.lines();
        let mut line = lines.next().unwrap();
        while let Some(rest) = line.strip_prefix('#') {
            assert!(rest.is_empty() || rest.starts_with(' '));
            line = lines.next().unwrap();
        }
        assert_eq!(line, CSV_HEADER);
        let first_row = lines.next().unwrap();
        assert!(first_row.starts_with("sjoqvist,0.00000000000e0,"));
        assert_eq!(text.lines().count(), table.comments.len() + 1 + 104);
        assert!(text
            .lines()
            .any(|l| l.starts_with("# measured_offset_sjoqvist_rad = ")));
        assert!(text
            .lines()
            .any(|l| l.starts_with("# measured_offset_uhlmann_rad = ")));
    }

    #[test]
    fn parse_rejects_malformed_input() {
        assert!(matches!(parse_csv("x,y\n"), Err(Error::Csv(_))));
        assert!(matches!(parse_csv(""), Err(Error::Csv(_))));
        let good = format!("{CSV_HEADER}\n");
        parse_csv(&good).unwrap();
        let bad_scheme = format!("{CSV_HEADER}\nmystery,0,0,0,0,0,0,0\n");
        assert!(matches!(parse_csv(&bad_scheme), Err(Error::Csv(_))));
        let bad_arity = format!("{CSV_HEADER}\nsjoqvist,0,0\n");
        assert!(matches!(parse_csv(&bad_arity), Err(Error::Csv(_))));
        let bad_float = format!("{CSV_HEADER}\nsjoqvist,zero,0,0,0,0,0,0\n");
        assert!(matches!(parse_csv(&bad_float), Err(Error::Csv(_))));
    }

    #[test]
    fn sweep_validation() {
        let spec = SweepSpec {
            axis: SweepAxis::Polar { r: 0.5 },
            points: 1,
            omega_s_t: 2.0 * PI,
            schemes: SchemeChoice::Both,
            backend: Backend::Amplitude,
        };
        assert!(run_sweep(&spec).is_err());
        assert!(point_row(0.5, 0.5, SchemeKind::Uhlmann, 0.0, Backend::Amplitude).is_err());
        assert!(point_row(1.5, 0.5, SchemeKind::Uhlmann, 1.0, Backend::Amplitude).is_err());
        assert!(point_row(0.5, 3.0, SchemeKind::Uhlmann, 1.0, Backend::Amplitude).is_err());
    }
}
