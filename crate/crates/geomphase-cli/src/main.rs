//! Command-line front end for the `geomphase` library.
//!
//! Subcommands cover the two experiment families and their verification:
//! `phase` evaluates a single working point, `sweep` produces a
//! one-parameter grid, `fig2`/`fig4` emit the standard sweep tables,
//! `nmr` runs the full spectrometer pipeline and dumps FID and spectrum,
//! and `check` executes the numerical verification suite.
//!
//! Exit codes: 0 success, 1 usage or parameter error, 2 verification
//! failure, 3 I/O error.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use geomphase::checks::run_all_checks;
use geomphase::config::RunConfig;
use geomphase::fmt_sci;
use geomphase::nmr::observe_interference;
use geomphase::phase::{sjoqvist_ancilla, uhlmann_ancilla, SchemeKind};
use geomphase::spin::system_field;
use geomphase::sweep::{
    emit_csv, fig2_table, fig4_table, point_row, run_sweep, Backend, SchemeChoice, SweepAxis,
    SweepSpec, SweepTable, OMEGA_S,
};

#[derive(Parser)]
#[command(name = "geomphase", version, about, long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the interference phase at a single working point
    Phase(PhaseArgs),
    /// Sweep one parameter; pass exactly one of --r / --theta-s as the
    /// fixed coordinate (the other one is swept over its full range)
    Sweep(SweepArgs),
    /// Emit the two-scheme 51x51 phase-surface table
    Fig2(TableArgs),
    /// Emit the four standard 13-point sweeps
    Fig4(TableArgs),
    /// Run the spectrometer pipeline and dump FID and spectrum CSVs
    Nmr(NmrArgs),
    /// Run the numerical verification suite and print one line per check
    Check,
}

/// Flags shared by every CSV-producing subcommand.
#[derive(Args)]
struct OutputArgs {
    /// Write output here instead of stdout
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Suppress the generated_unix_s metadata comment
    #[arg(long)]
    no_timestamp: bool,
}

/// Flags shared by the subcommands that take a working point.
#[derive(Args)]
struct PointFlags {
    /// Evolution scheme: sjoqvist, uhlmann, or both
    #[arg(long)]
    scheme: Option<SchemeChoice>,
    /// Purity r = p1 - p2 in [0, 1]
    #[arg(long)]
    r: Option<f64>,
    /// Field polar angle theta_s in [0, pi/2] radians
    #[arg(long)]
    theta_s: Option<f64>,
    /// Evolution backend: amplitude, circuit, or nmr
    #[arg(long)]
    backend: Option<Backend>,
    /// Dimensionless evolution time omega_s * t (2 pi is one cycle)
    #[arg(long)]
    omega_s_t: Option<f64>,
    /// Key = value configuration file applied before the flags
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct PhaseArgs {
    #[command(flatten)]
    point: PointFlags,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    point: PointFlags,
    /// Number of grid points along the swept axis
    #[arg(long)]
    points: Option<usize>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct TableArgs {
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct NmrArgs {
    #[command(flatten)]
    point: PointFlags,
    /// Directory for the FID and spectrum CSV files
    #[arg(long, value_name = "DIR", default_value = ".")]
    out: PathBuf,
    /// Suppress the generated_unix_s metadata comment
    #[arg(long)]
    no_timestamp: bool,
}

enum CliError {
    Usage(String),
    Check(String),
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Check(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Check(m) | CliError::Io(m) => f.write_str(m),
        }
    }
}

impl From<geomphase::Error> for CliError {
    fn from(e: geomphase::Error) -> Self {
        match e {
            geomphase::Error::Io(io) => CliError::Io(io.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Phase(args) => cmd_phase(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Fig2(args) => emit_table(fig2_table()?, &args.output),
        Command::Fig4(args) => emit_table(fig4_table()?, &args.output),
        Command::Nmr(args) => cmd_nmr(args),
        Command::Check => cmd_check(),
    }
}

/// Loads the configuration file if given, then overlays explicit flags.
fn resolve_config(flags: &PointFlags) -> Result<RunConfig, CliError> {
    let mut cfg = match &flags.config {
        None => RunConfig::default(),
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Io(format!("reading {}: {e}", path.display())))?;
            RunConfig::parse(&text)
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
        }
    };
    if let Some(s) = flags.scheme {
        cfg.scheme = s;
    }
    if let Some(r) = flags.r {
        cfg.r = r;
    }
    if let Some(t) = flags.theta_s {
        cfg.theta_s = t;
    }
    if let Some(b) = flags.backend {
        cfg.backend = b;
    }
    if let Some(w) = flags.omega_s_t {
        cfg.omega_s_t = w;
    }
    Ok(cfg)
}

fn unix_now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

fn emit_table(mut table: SweepTable, output: &OutputArgs) -> Result<(), CliError> {
    if !output.no_timestamp {
        table
            .comments
            .push(format!("generated_unix_s = {}", unix_now()));
    }
    let text = emit_csv(&table);
    match &output.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Io(format!("writing {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_phase(args: PhaseArgs) -> Result<(), CliError> {
    let cfg = resolve_config(&args.point)?;
    let mut table = SweepTable {
        comments: vec![
            format!("geomphase {}", env!("CARGO_PKG_VERSION")),
            format!(
                "point r = {}, theta_s = {}, omega_s_t = {}, backend = {}",
                fmt_sci(cfg.r),
                fmt_sci(cfg.theta_s),
                fmt_sci(cfg.omega_s_t),
                cfg.backend.label()
            ),
        ],
        rows: Vec::new(),
    };
    for &kind in cfg.scheme.kinds() {
        table.rows.push(point_row(
            cfg.r,
            cfg.theta_s,
            kind,
            cfg.omega_s_t,
            cfg.backend,
        )?);
    }
    emit_table(table, &args.output)
}

fn cmd_sweep(args: SweepArgs) -> Result<(), CliError> {
    let cfg = resolve_config(&args.point)?;
    let axis = match (args.point.r, args.point.theta_s) {
        (Some(_), Some(_)) => {
            return Err(CliError::Usage(
                "pass exactly one of --r (fixes purity, sweeps theta_s) or --theta-s \
                 (fixes the angle, sweeps r)"
                    .into(),
            ))
        }
        (Some(r), None) => SweepAxis::Polar { r },
        (None, Some(theta_s)) => SweepAxis::Purity { theta_s },
        (None, None) => SweepAxis::Purity {
            theta_s: cfg.theta_s,
        },
    };
    let spec = SweepSpec {
        axis,
        points: args.points.unwrap_or(cfg.points),
        omega_s_t: cfg.omega_s_t,
        schemes: cfg.scheme,
        backend: cfg.backend,
    };
    emit_table(run_sweep(&spec)?, &args.output)
}

fn cmd_nmr(args: NmrArgs) -> Result<(), CliError> {
    let cfg = resolve_config(&args.point)?;
    let q = cfg.mixed_qubit()?;
    let system = system_field(cfg.theta_s, OMEGA_S)?;
    let spins = cfg.spin_system()?;
    let acq = cfg.acquisition()?;
    let pp = cfg.pseudo_pure()?;
    let t = cfg.omega_s_t / OMEGA_S;

    fs::create_dir_all(&args.out)
        .map_err(|e| CliError::Io(format!("creating {}: {e}", args.out.display())))?;

    for &kind in cfg.scheme.kinds() {
        let scheme = match kind {
            SchemeKind::Sjoqvist => sjoqvist_ancilla(cfg.theta_s, OMEGA_S)?,
            SchemeKind::Uhlmann => uhlmann_ancilla(&q, cfg.theta_s, OMEGA_S)?,
        };
        let obs = observe_interference(&q, &system, &scheme, t, pp, &spins, &acq)?;
        let preamble = nmr_preamble(&cfg, kind, args.no_timestamp);

        let fid_path = args.out.join(format!("fid_{}.csv", kind.label()));
        write_with_preamble(&fid_path, &preamble, &obs.fid().to_csv())?;
        let spec_path = args.out.join(format!("spectrum_{}.csv", kind.label()));
        write_with_preamble(&spec_path, &preamble, &obs.spectrum().to_csv())?;

        let result = obs.result();
        println!(
            "scheme={} phase_rad={} visibility={} fid={} spectrum={}",
            kind.label(),
            fmt_sci(result.phase.unwrap_or(f64::NAN)),
            fmt_sci(result.visibility),
            fid_path.display(),
            spec_path.display()
        );
    }
    Ok(())
}

fn nmr_preamble(cfg: &RunConfig, kind: SchemeKind, no_timestamp: bool) -> String {
    let mut lines = vec![
        format!("# geomphase {}", env!("CARGO_PKG_VERSION")),
        format!(
            "# scheme = {}, r = {}, theta_s = {}, omega_s_t = {}, epsilon = {}",
            kind.label(),
            fmt_sci(cfg.r),
            fmt_sci(cfg.theta_s),
            fmt_sci(cfg.omega_s_t),
            fmt_sci(cfg.epsilon)
        ),
        format!(
            "# dwell_s = {}, npoints = {}, t2_s = {}",
            fmt_sci(cfg.dwell),
            cfg.npoints,
            fmt_sci(cfg.t2)
        ),
    ];
    if !no_timestamp {
        lines.push(format!("# generated_unix_s = {}", unix_now()));
    }
    lines.push(String::new());
    lines.join("\n")
}

fn write_with_preamble(path: &Path, preamble: &str, body: &str) -> Result<(), CliError> {
    fs::write(path, format!("{preamble}{body}"))
        .map_err(|e| CliError::Io(format!("writing {}: {e}", path.display())))
}

fn cmd_check() -> Result<(), CliError> {
    let outcomes = run_all_checks();
    for outcome in &outcomes {
        println!("{}", outcome.line());
    }
    let failed: Vec<&str> = outcomes
        .iter()
        .filter(|o| !o.passed)
        .map(|o| o.name)
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Check(format!(
            "failed checks: {}",
            failed.join(", ")
        )))
    }
}
