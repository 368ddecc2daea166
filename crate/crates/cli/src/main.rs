use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use calderon_core::selftest::{self, Level};
use calderon_core::{
    add_noise, forward_measure, forward_measure_quadrature_set, project, reconstruct_with, synthesize,
    BallQuadrature, CoefficientField, Complex64, Error, GridSlice, MeasurementSet, OracleForm, PhantomSpec, Plane,
    ReconOptions, SynthesisMode, TruncationSchedule,
};
use clap::{Args, Parser, Subcommand, ValueEnum};

const EXIT_FAILURE: u8 = 1;
const EXIT_BAD_ARGS: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;
const EXIT_MISSING: u8 = 4;
const EXIT_SELFTEST: u8 = 5;

#[derive(Parser)]
#[command(name = "calderon", version, about = "Direct reconstruction for the linearised Calderón problem in the unit ball")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Project a phantom onto the Zernike basis and write the coefficient field.
    Project(ProjectArgs),
    /// Simulate measurements from a coefficient file or a phantom.
    Simulate(SimulateArgs),
    /// Reconstruct coefficients from a measurement file.
    Reconstruct(ReconstructArgs),
    /// Sample a coefficient field on a plane and write CSV.
    Slice(SliceArgs),
    /// Run the internal consistency checks.
    Selftest(SelftestArgs),
}

#[derive(Args, Clone, Copy)]
struct QuadArgs {
    /// Gauss-Legendre nodes in r.
    #[arg(long, default_value_t = 48)]
    quad_radial: usize,
    /// Gauss-Legendre nodes in cos θ.
    #[arg(long, default_value_t = 64)]
    quad_theta: usize,
    /// Equispaced nodes in φ.
    #[arg(long, default_value_t = 128)]
    quad_phi: usize,
}

impl QuadArgs {
    fn build(self) -> calderon_core::Result<BallQuadrature> {
        BallQuadrature::new(self.quad_radial, self.quad_theta, self.quad_phi)
    }
}

#[derive(Args)]
struct ProjectArgs {
    /// zero | gaussian | gaussian:x,y,z,a | basis:k,ell,m
    #[arg(long, default_value = "gaussian")]
    phantom: String,
    /// Per-k degree caps "l0,l1,..."; overrides --kmax/--lmax.
    #[arg(long)]
    schedule: Option<String>,
    #[arg(long, default_value_t = 7)]
    kmax: usize,
    #[arg(long, default_value_t = 30)]
    lmax: usize,
    #[command(flatten)]
    quad: QuadArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SimMode {
    /// Exact finite series from coefficients.
    Series,
    /// Ball quadrature of the bilinear form.
    Oracle,
}

#[derive(Args)]
struct SimulateArgs {
    /// Coefficient field JSON.
    #[arg(long, conflicts_with = "phantom", required_unless_present = "phantom")]
    field: Option<PathBuf>,
    /// Phantom spec, as for `project`.
    #[arg(long)]
    phantom: Option<String>,
    #[arg(long, value_enum, default_value = "series")]
    mode: SimMode,
    /// Measurement caps "l0,l1,..." (one per k).
    #[arg(long)]
    schedule: String,
    /// Relative noise level (fraction of the measurement RMS).
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    quad: QuadArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReconstructArgs {
    /// Measurement JSON.
    #[arg(long)]
    measurements: PathBuf,
    /// Truncation schedule "l0,l1,..."; defaults to the measurement caps.
    #[arg(long)]
    schedule: Option<String>,
    /// Treat dependencies outside an infeasible schedule as zero.
    #[arg(long)]
    zero_fill: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SliceArgs {
    /// Coefficient field or reconstruction report JSON.
    #[arg(long)]
    field: PathBuf,
    /// Plot Σ_{k≤K} Re(η_k) instead of the full expansion.
    #[arg(long, value_name = "K")]
    partial_sum: Option<usize>,
    #[arg(long, default_value = "z=0")]
    plane: String,
    #[arg(long, default_value_t = 201)]
    resolution: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Quick,
    Full,
}

#[derive(Args)]
struct SelftestArgs {
    #[arg(long, value_enum, default_value = "quick")]
    level: LevelArg,
}

/// Errors raised while interpreting arguments.
#[derive(Debug)]
struct BadArgs(String);

impl std::fmt::Display for BadArgs {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for BadArgs {}

fn bad_args<E: std::fmt::Display>(what: &str) -> impl FnOnce(E) -> anyhow::Error + '_ {
    move |e| BadArgs(format!("{what}: {e}")).into()
}

fn parse_schedule(s: &str) -> anyhow::Result<TruncationSchedule> {
    s.parse().map_err(bad_args("--schedule"))
}

fn parse_phantom(s: &str) -> anyhow::Result<PhantomSpec> {
    s.parse().map_err(bad_args("--phantom"))
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// Status lines go to stdout when the payload goes to a file, stderr otherwise.
fn status(out: Option<&Path>, line: &str) {
    if out.is_some() {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
}

/// Caps needed to evaluate the series for `caps`: row q must reach `caps[k] + 2(k - q)`.
fn support_for(caps: &[usize]) -> Vec<usize> {
    (0..caps.len())
        .map(|q| (q..caps.len()).map(|k| caps[k] + 2 * (k - q)).max().unwrap_or(0))
        .collect()
}

fn cmd_project(a: ProjectArgs) -> anyhow::Result<()> {
    let phantom = parse_phantom(&a.phantom)?;
    let caps = match &a.schedule {
        Some(s) => parse_schedule(s)?.caps().to_vec(),
        None => vec![a.lmax; a.kmax + 1],
    };
    let quad = a.quad.build().map_err(bad_args("quadrature"))?;
    let field = project(|p| phantom.eval(p), &caps, &quad);
    let out = a.out.as_deref();
    emit(out, &field.to_json()?)?;
    for k in 0..caps.len() {
        status(out, &format!("k={k} |eta_k|={:.17e}", field.norm_sq_k(k).sqrt()));
    }
    Ok(())
}

fn cmd_simulate(a: SimulateArgs) -> anyhow::Result<()> {
    let schedule = parse_schedule(&a.schedule)?;
    let caps = schedule.caps();
    if !(a.noise.is_finite() && a.noise >= 0.0) {
        return Err(BadArgs(format!("--noise must be finite and >= 0, got {}", a.noise)).into());
    }
    let quad = a.quad.build().map_err(bad_args("quadrature"))?;
    let field = a
        .field
        .as_deref()
        .map(|p| -> anyhow::Result<_> { Ok(CoefficientField::from_json(&read(p)?)?) })
        .transpose()?;
    let phantom = a.phantom.as_deref().map(parse_phantom).transpose()?;

    let clean = match (a.mode, field, phantom) {
        (SimMode::Series, Some(c), _) => forward_measure(&c, caps)?,
        (SimMode::Series, None, Some(ph)) => {
            let c = project(|p| ph.eval(p), &support_for(caps), &quad);
            forward_measure(&c, caps)?
        }
        (SimMode::Oracle, None, Some(ph)) => {
            forward_measure_quadrature_set(|p| ph.eval(p), caps, &quad, OracleForm::Phi)?
        }
        (SimMode::Oracle, Some(c), _) => {
            let eta = |p| synthesize(&c, &[p], SynthesisMode::Full).map_or(Complex64::default(), |v| v[0]);
            forward_measure_quadrature_set(eta, caps, &quad, OracleForm::Phi)?
        }
        (_, None, None) => unreachable!("clap requires --field or --phantom"),
    };
    let ms = add_noise(&clean, a.noise, a.seed)?;
    emit(a.out.as_deref(), &ms.to_json()?)?;
    status(a.out.as_deref(), &format!("measurements={} rms={:.17e}", ms.len(), ms.rms()));
    Ok(())
}

fn cmd_reconstruct(a: ReconstructArgs) -> anyhow::Result<()> {
    let ms = MeasurementSet::from_json(&read(&a.measurements)?)?;
    let schedule = match &a.schedule {
        Some(s) => parse_schedule(s)?,
        None => TruncationSchedule::new(ms.caps().to_vec()).map_err(bad_args("measurement file"))?,
    };
    let opts = ReconOptions { zero_fill: a.zero_fill, ..Default::default() };
    let report = reconstruct_with(&ms, &schedule, &opts)?;
    let out = a.out.as_deref();
    emit(out, &report.to_json()?)?;
    status(out, &format!("schedule={schedule} min_divisor={:.17e}", report.min_divisor));
    if report.regularised {
        status(out, "warning: schedule infeasible, missing dependencies were zero-filled");
    }
    Ok(())
}

fn cmd_slice(a: SliceArgs) -> anyhow::Result<()> {
    let plane: Plane = a.plane.parse().map_err(bad_args("--plane"))?;
    if a.resolution == 0 {
        bail!(BadArgs("--resolution must be positive".into()));
    }
    let field = CoefficientField::from_json(&read(&a.field)?)?;
    let mode = a.partial_sum.map_or(SynthesisMode::Full, SynthesisMode::RealPartialSum);
    let slice = GridSlice::sample(&field, mode, plane, a.resolution)?;
    emit(a.out.as_deref(), &slice.to_csv())
}

fn cmd_selftest(a: SelftestArgs) -> anyhow::Result<bool> {
    let level = match a.level {
        LevelArg::Quick => Level::Quick,
        LevelArg::Full => Level::Full,
    };
    let report = selftest::run(level);
    println!("{report}");
    Ok(report.passed())
}

fn exit_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<BadArgs>().is_some() {
        return EXIT_BAD_ARGS;
    }
    match e.downcast_ref::<Error>() {
        Some(Error::InfeasibleSchedule(_)) => EXIT_INFEASIBLE,
        Some(Error::MissingMeasurement { .. }) => EXIT_MISSING,
        Some(Error::Phantom(_)) => EXIT_BAD_ARGS,
        _ => EXIT_FAILURE,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Project(a) => cmd_project(a).map(|_| true),
        Command::Simulate(a) => cmd_simulate(a).map(|_| true),
        Command::Reconstruct(a) => cmd_reconstruct(a).map(|_| true),
        Command::Slice(a) => cmd_slice(a).map(|_| true),
        Command::Selftest(a) => cmd_selftest(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_SELFTEST),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
