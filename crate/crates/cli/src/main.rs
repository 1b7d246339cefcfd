mod manifest;

use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Ratio;
use serde_json::{json, Value};

use sphmax::experiments::{
    self, write_report_csv, ExperimentConfig, ExperimentError, ReportSummary, Verdict,
};
use sphmax::exponents::{
    exponent_row, format_rational, lattice_points, parse_rational, quadrangle_q, ExponentPoint,
    Figure1, RegionTag, Vertex,
};
use sphmax::field::io::{fmt_float, read_field, write_field, Precision};
use sphmax::field::{lebesgue_norm, LebesgueExponent, RegionMask};
use sphmax::operators::decompose::{decompose_with, residual_law, Decomposer};
use sphmax::operators::{
    apply_multiplier, maximal_over_t, uniform_t_grid, MultiplierKind, RadialMultiplier,
};
use sphmax::selftest::{run_selftest, Faults};
use sphmax::specfun::ComplexOrder;

use manifest::{digest_file, RunManifest};

/// Environment variable holding the worker thread count.
const THREADS_ENV: &str = "SPHMAX_THREADS";

#[derive(Parser)]
#[command(
    name = "sphmax",
    version,
    about = "Spherical maximal operators of complex order"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact exponent tables and region polygons.
    Exponents(ExponentsArgs),
    /// Radial samples of the spherical-mean symbol, optionally decomposed.
    Multiplier(MultiplierArgs),
    /// Apply the spherical mean at one radius to a stored field.
    Apply(ApplyArgs),
    /// Maximal function over a uniform radius grid of a stored field.
    Maximal(MaximalArgs),
    /// Run a scaling experiment from a config or a previous manifest.
    Experiment(ExperimentArgs),
    /// Invariant checks across all modules.
    Selftest(SelftestArgs),
}

#[derive(Args)]
struct ExponentsArgs {
    #[arg(long, default_value_t = 2)]
    n: u32,
    /// A point `1/p,1/q` with rational coordinates, e.g. `3/5,1/5`.
    #[arg(long = "point", value_name = "INV_P,INV_Q")]
    points: Vec<String>,
    /// Tabulate every admissible point `(a/k, b/k)`.
    #[arg(long, value_name = "K")]
    density: Option<u32>,
    /// Emit the vertex and polygon description of the exponent plane.
    #[arg(long)]
    figure1: bool,
    /// Rows as JSON instead of CSV.
    #[arg(long)]
    json: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MultiplierArgs {
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    alpha: String,
    #[arg(long, default_value_t = 16.0)]
    rmax: f64,
    #[arg(long, default_value_t = 256)]
    samples: usize,
    /// Divide by the value at the origin.
    #[arg(long)]
    normalized: bool,
    /// Split into low, two principal and residual parts with `N` expansion
    /// terms and cutoff `M`.
    #[arg(long, num_args = 2, value_names = ["N", "M"])]
    decompose: Option<Vec<f64>>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum PrecisionArg {
    C64,
    C128,
}

impl From<PrecisionArg> for Precision {
    fn from(p: PrecisionArg) -> Self {
        match p {
            PrecisionArg::C64 => Precision::Complex64,
            PrecisionArg::C128 => Precision::Complex128,
        }
    }
}

#[derive(Args)]
struct FieldIo {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: PathBuf,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    alpha: String,
    #[arg(long, value_enum, default_value_t = PrecisionArg::C128)]
    precision: PrecisionArg,
    /// Also report the `L^p` norm of the output (`inf` allowed).
    #[arg(long, value_name = "P")]
    norm: Option<String>,
}

#[derive(Args)]
struct ApplyArgs {
    #[command(flatten)]
    io: FieldIo,
    #[arg(long, default_value_t = 1.0)]
    t: f64,
    #[arg(long)]
    normalized: bool,
}

#[derive(Args)]
struct MaximalArgs {
    #[command(flatten)]
    io: FieldIo,
    #[arg(long, default_value_t = 1.0)]
    t_min: f64,
    #[arg(long, default_value_t = 2.0)]
    t_max: f64,
    #[arg(long, default_value_t = 1.0 / 64.0)]
    t_step: f64,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Experiment config, or a manifest written by a previous run.
    config: PathBuf,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    j_min: Option<u32>,
    #[arg(long)]
    j_max: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    #[arg(long)]
    tolerance: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FaultArg {
    S2Middle,
    B0Phase,
}

#[derive(Args)]
struct SelftestArgs {
    /// Inject a known defect; the suite is expected to fail.
    #[arg(long, value_enum)]
    fault: Vec<FaultArg>,
    #[arg(long)]
    json: bool,
}

/// Failure classes of the exit-code contract.
#[derive(Debug)]
enum Failure {
    Verdict(String),
    Invalid(anyhow::Error),
    Resolution(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verdict(_) => 1,
            Failure::Invalid(_) => 2,
            Failure::Resolution(_) => 3,
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Invalid(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Invalid(e.into())
    }
}

impl From<ExperimentError> for Failure {
    fn from(e: ExperimentError) -> Self {
        match e {
            ExperimentError::Resolution(_) => Failure::Resolution(e.into()),
            other => Failure::Invalid(other.into()),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    let result = match cli.command {
        Command::Exponents(a) => cmd_exponents(a),
        Command::Multiplier(a) => cmd_multiplier(a),
        Command::Apply(a) => cmd_apply(a),
        Command::Maximal(a) => cmd_maximal(a),
        Command::Experiment(a) => cmd_experiment(a),
        Command::Selftest(a) => cmd_selftest(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Verdict(msg) => eprintln!("{msg}"),
                Failure::Invalid(e) | Failure::Resolution(e) => eprintln!("error: {e:#}"),
            }
            ExitCode::from(f.code())
        }
    }
}

fn configure_threads() -> anyhow::Result<()> {
    let Ok(text) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = text
        .trim()
        .parse()
        .with_context(|| format!("{THREADS_ENV} must be a thread count, got {text:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .context("configuring the thread pool")
}

fn open_output(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn parse_alpha(text: &str) -> anyhow::Result<ComplexOrder> {
    text.parse()
        .map_err(|e| anyhow!("invalid alpha {text:?}: {e}"))
}

fn parse_point(text: &str, n: u32) -> anyhow::Result<ExponentPoint> {
    let (x, y) = text
        .split_once(',')
        .ok_or_else(|| anyhow!("point {text:?} must be written INV_P,INV_Q"))?;
    Ok(ExponentPoint::new(
        parse_rational(x)?,
        parse_rational(y)?,
        n,
    )?)
}

fn rational_pair(v: Vertex) -> Value {
    json!([format_rational(&v.0), format_rational(&v.1)])
}

fn opt_rational(v: &Option<Ratio<i64>>) -> String {
    v.as_ref().map(format_rational).unwrap_or_default()
}

fn cmd_exponents(a: ExponentsArgs) -> CmdResult {
    let mut out = open_output(a.out.as_deref())?;
    if a.figure1 {
        let fig = Figure1::new(a.n).map_err(anyhow::Error::from)?;
        let quad = quadrangle_q(a.n).map_err(anyhow::Error::from)?;
        let vertices: serde_json::Map<String, Value> = fig
            .named_vertices()
            .iter()
            .map(|(name, v)| (name.to_string(), rational_pair(*v)))
            .collect();
        let triangles: serde_json::Map<String, Value> = RegionTag::TRIANGLES
            .iter()
            .map(|t| {
                let corners = fig.triangle(*t).expect("triangle tags have corners");
                let poly: Vec<Value> = corners.iter().map(|v| rational_pair(*v)).collect();
                (t.as_str().to_string(), Value::Array(poly))
            })
            .collect();
        let quadrangle: Vec<Value> = quad.polygon().into_iter().map(rational_pair).collect();
        let doc = json!({
            "n": a.n,
            "vertices": vertices,
            "triangles": triangles,
            "quadrangle": quadrangle,
        });
        writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&doc).map_err(anyhow::Error::from)?
        )?;
        return Ok(out.flush()?);
    }

    let mut points = a
        .points
        .iter()
        .map(|p| parse_point(p, a.n))
        .collect::<anyhow::Result<Vec<_>>>()?;
    if let Some(k) = a.density {
        points.extend(lattice_points(a.n, k).map_err(anyhow::Error::from)?);
    }
    if points.is_empty() {
        return Err(anyhow!("give at least one --point, --density or --figure1").into());
    }
    let rows: Vec<_> = points.iter().map(exponent_row).collect();
    if a.json {
        let list: Vec<Value> = rows
            .iter()
            .map(|r| {
                json!({
                    "inv_p": format_rational(&r.point.inv_p),
                    "inv_q": format_rational(&r.point.inv_q),
                    "sigma": r.sigma.as_ref().map(format_rational),
                    "d": r.d.as_ref().map(format_rational),
                    "s": r.s.as_ref().map(format_rational),
                    "region": r.region.tag.as_str(),
                    "boundary": r.region.boundary,
                })
            })
            .collect();
        writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&list).map_err(anyhow::Error::from)?
        )?;
    } else {
        writeln!(out, "inv_p,inv_q,sigma,d,s,region,triangle")?;
        for r in &rows {
            let region = if r.region.boundary {
                "boundary"
            } else {
                r.region.tag.as_str()
            };
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                format_rational(&r.point.inv_p),
                format_rational(&r.point.inv_q),
                opt_rational(&r.sigma),
                opt_rational(&r.d),
                opt_rational(&r.s),
                region,
                r.region.tag.as_str(),
            )?;
        }
    }
    Ok(out.flush()?)
}

fn cmd_multiplier(a: MultiplierArgs) -> CmdResult {
    let alpha = parse_alpha(&a.alpha)?;
    if a.samples < 2 {
        return Err(anyhow!("--samples must be at least 2").into());
    }
    if !(a.rmax > 0.0 && a.rmax.is_finite()) {
        return Err(anyhow!("--rmax must be positive").into());
    }
    let mut out = open_output(a.out.as_deref())?;
    match a.decompose.as_deref() {
        None => {
            let kind = if a.normalized {
                MultiplierKind::NormalizedSphericalMean
            } else {
                MultiplierKind::SphericalMean
            };
            let eval = RadialMultiplier {
                kind,
                ..RadialMultiplier::spherical_mean(a.n, alpha, 1.0)
            }
            .evaluator()
            .map_err(anyhow::Error::from)?;
            writeln!(out, "r,re,im")?;
            for k in 0..a.samples {
                let r = a.rmax * k as f64 / (a.samples - 1) as f64;
                let v = eval.eval(r);
                writeln!(
                    out,
                    "{},{},{}",
                    fmt_float(r),
                    fmt_float(v.re),
                    fmt_float(v.im)
                )?;
            }
        }
        Some(&[terms, m]) => {
            if terms.fract() != 0.0 || terms < 1.0 {
                return Err(anyhow!("N must be a positive integer").into());
            }
            let d = Decomposer::new(a.n, alpha, terms as usize, m).map_err(anyhow::Error::from)?;
            let r: Vec<f64> = (1..=a.samples)
                .map(|k| a.rmax * k as f64 / a.samples as f64)
                .collect();
            let parts = decompose_with(&d, &r).map_err(anyhow::Error::from)?;
            writeln!(out, "r,part,re,im")?;
            for (i, r) in parts.r.iter().enumerate() {
                for (name, v) in [
                    ("low", parts.low[i]),
                    ("principal_plus", parts.principal_plus[i]),
                    ("principal_minus", parts.principal_minus[i]),
                    ("residual", parts.residual[i]),
                ] {
                    writeln!(
                        out,
                        "{},{name},{},{}",
                        fmt_float(*r),
                        fmt_float(v.re),
                        fmt_float(v.im)
                    )?;
                }
            }
            let (lo, hi) = (8.0, 1024.0);
            let law = residual_law(&d, lo, hi, 64).map_err(anyhow::Error::from)?;
            let summary = json!({
                "r_range": [lo, hi],
                "residual_slope": law.slope,
                "predicted_slope": -(terms + 0.5 + alpha.re),
                "fit_residual_max": law.fit_residual_max,
                "envelope_max": law.envelope.iter().map(|e| e.1).fold(0.0, f64::max),
            });
            eprintln!("{summary}");
        }
        Some(_) => unreachable!("clap enforces two values"),
    }
    Ok(out.flush()?)
}

fn load_field(path: &Path) -> anyhow::Result<sphmax::field::GridField> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let (field, _) =
        read_field(BufReader::new(file)).with_context(|| format!("reading {}", path.display()))?;
    Ok(field)
}

fn store_field(io_args: &FieldIo, field: &sphmax::field::GridField) -> anyhow::Result<()> {
    if let Some(p) = &io_args.norm {
        let exponent = if matches!(p.as_str(), "inf" | "infinity") {
            LebesgueExponent::Infinite
        } else {
            LebesgueExponent::new(p.parse().with_context(|| format!("invalid --norm {p:?}"))?)?
        };
        let space = field.to_representation(sphmax::field::Representation::Space);
        let norm = lebesgue_norm(&space, exponent, &RegionMask::full(*space.spec()))?;
        println!("{}", json!({ "p": p, "norm": fmt_float(norm) }));
    }
    if io_args.input == io_args.output {
        return Err(anyhow!("refusing to overwrite the input field"));
    }
    let file = File::create(&io_args.output)
        .with_context(|| format!("creating {}", io_args.output.display()))?;
    let mut w = BufWriter::new(file);
    write_field(&mut w, field, io_args.precision.into())?;
    w.flush()?;
    Ok(())
}

fn cmd_apply(a: ApplyArgs) -> CmdResult {
    let alpha = parse_alpha(&a.io.alpha)?;
    let field = load_field(&a.io.input)?;
    let kind = if a.normalized {
        MultiplierKind::NormalizedSphericalMean
    } else {
        MultiplierKind::SphericalMean
    };
    let mult = RadialMultiplier {
        kind,
        ..RadialMultiplier::spherical_mean(field.spec().dim, alpha, a.t)
    };
    let g = apply_multiplier(&field, &mult).map_err(anyhow::Error::from)?;
    store_field(&a.io, &g)?;
    Ok(())
}

fn cmd_maximal(a: MaximalArgs) -> CmdResult {
    let alpha = parse_alpha(&a.io.alpha)?;
    if !(a.t_min > 0.0 && a.t_max >= a.t_min && a.t_step > 0.0) {
        return Err(anyhow!("need 0 < t-min <= t-max and t-step > 0").into());
    }
    let field = load_field(&a.io.input)?;
    let t_grid = uniform_t_grid(a.t_min, a.t_max, a.t_step);
    let m = maximal_over_t(&field, alpha, &t_grid).map_err(anyhow::Error::from)?;
    store_field(&a.io, &m.field)?;
    Ok(())
}

fn cmd_experiment(a: ExperimentArgs) -> CmdResult {
    let text =
        fs::read_to_string(&a.config).with_context(|| format!("reading {}", a.config.display()))?;
    let doc: Value =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", a.config.display()))?;
    let mut config: ExperimentConfig = match RunManifest::config_of(&doc) {
        Some(c) => serde_json::from_value(c.clone()),
        None => serde_json::from_value(doc),
    }
    .with_context(|| format!("invalid config in {}", a.config.display()))?;
    if let Some(seed) = a.seed {
        config.seed = seed;
    }
    if let Some(j) = a.j_min {
        config.j_min = Some(j);
    }
    if let Some(j) = a.j_max {
        config.j_max = Some(j);
    }
    if let Some(alpha) = &a.alpha {
        config.alpha = parse_alpha(alpha)?;
    }
    if let Some(t) = a.tolerance {
        config.tolerance = Some(t);
    }
    let config = config.materialized();
    config.validate()?;
    experiments::preflight(&config)?;

    let started = Instant::now();
    let report = experiments::run(&config)?;
    let seconds = started.elapsed().as_secs_f64();

    fs::create_dir_all(&a.out).with_context(|| format!("creating {}", a.out.display()))?;
    let csv_path = a.out.join("report.csv");
    let json_path = a.out.join("summary.json");
    {
        let mut w = BufWriter::new(File::create(&csv_path)?);
        write_report_csv(&mut w, &report)?;
        w.flush()?;
    }
    let summary = ReportSummary::from(&report);
    fs::write(
        &json_path,
        serde_json::to_string_pretty(&summary).map_err(anyhow::Error::from)? + "\n",
    )?;
    let outputs = [&csv_path, &json_path]
        .iter()
        .map(|p| digest_file(p))
        .collect::<io::Result<Vec<_>>>()?;
    let manifest = RunManifest::new("experiment", &config, seconds, outputs);
    fs::write(
        a.out.join("manifest.json"),
        serde_json::to_string_pretty(&manifest).map_err(anyhow::Error::from)? + "\n",
    )?;

    println!(
        "{} slope {:.4} vs predicted {:.4} ({:?}, tol {}): {:?}",
        summary.family,
        summary.fitted_slope,
        summary.predicted_slope,
        summary.comparison,
        summary.tolerance,
        summary.verdict
    );
    for flag in &summary.flags {
        println!("flag: {flag}");
    }
    match report.verdict {
        Verdict::Pass => Ok(()),
        Verdict::Fail => Err(Failure::Verdict(format!(
            "verdict fail: fitted slope {} outside tolerance {} of {}",
            fmt_float(report.fitted_slope),
            report.tolerance,
            fmt_float(report.predicted_slope)
        ))),
    }
}

fn cmd_selftest(a: SelftestArgs) -> CmdResult {
    let mut faults = Faults::default();
    for f in &a.fault {
        match f {
            FaultArg::S2Middle => faults.s2_middle_shift = Some(Ratio::new(1, 1_000_000)),
            FaultArg::B0Phase => faults.b0_phase_error = Some(0.1),
        }
    }
    let report = run_selftest(&faults);
    if a.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&report).map_err(anyhow::Error::from)?
        );
    } else {
        for c in &report.checks {
            println!(
                "{} {}: {} (measured {}, tolerance {}, {:.2}s)",
                if c.passed { "PASS" } else { "FAIL" },
                c.module,
                c.name,
                c.measured,
                c.tolerance,
                c.seconds
            );
        }
    }
    let failures: Vec<String> = report
        .failures()
        .map(|c| {
            format!(
                "{}: {} violated tolerance {}",
                c.module, c.name, c.tolerance
            )
        })
        .collect();
    if failures.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verdict(format!(
            "{} check(s) failed:\n{}",
            failures.len(),
            failures.join("\n")
        )))
    }
}
