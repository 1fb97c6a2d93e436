//! `levinson-cert`: certificates, registry checks, Domar traces and curve data.
//!
//! Exit codes: 0 success, 1 malformed input or I/O failure, 2 the log-log
//! integral of the majorant diverges, 3 the Domar condition cannot be met,
//! 4 a registry sample is not sound.

use std::fs::{self, File};
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use levinson_core::curves::{bound_curve, distribution_curve, log_space, sum_curve, write_bound_csv, write_pairs_csv};
use levinson_core::domar::{domar_escape_trace, TraceConfig, TruncationPolicy};
use levinson_core::field::{Axis, SampledField};
use levinson_core::harness::{
    check_entry, default_registry, load_registry, make_boundary_blowup, reports_to_json, GridConfig, SampleReport,
};
use levinson_core::json::csv_float;
use levinson_core::pipeline::{certify_bound, BoundCertificate, CylinderSpec};
use levinson_core::{CertError, Majorant};

#[derive(Parser, Debug)]
#[command(name = "levinson-cert", version, about = "Certified sup bounds for harmonic functions on cylinders")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Certified bound on the inner cylinder for every admissible harmonic function.
    Bound(BoundArgs),
    /// Membership, measured sup and certificate comparison for each registry sample.
    Check(CheckArgs),
    /// Doubling trace of the Domar iteration on a sampled subharmonic field.
    Trace(TraceArgs),
    /// CSV data for F(t), S(C) and the bound as a function of eps.
    Curves(CurvesArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct SpecArgs {
    /// Ambient dimension.
    #[arg(long, default_value_t = 4)]
    n: u32,
    /// Cylinder radius.
    #[arg(long = "R", default_value_t = 1.0)]
    radius: f64,
    /// Cylinder half-height.
    #[arg(long = "H", default_value_t = 1.0)]
    height: f64,
    /// Margin between the target and the cylinder boundary.
    #[arg(long, default_value_t = 0.25)]
    eps: f64,
}

impl SpecArgs {
    fn spec(&self) -> Result<CylinderSpec, CertError> {
        CylinderSpec::new(self.n, self.radius, self.height, self.eps)
    }
}

#[derive(Args, Debug)]
struct BoundArgs {
    #[command(flatten)]
    spec: SpecArgs,
    /// Majorant text form, e.g. `doubleexp:alpha=0.5` or `tabulated:@m.csv`.
    #[arg(long)]
    majorant: String,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CheckArgs {
    /// Registry JSON; the built-in registry is used when omitted.
    #[arg(long)]
    registry: Option<PathBuf>,
    /// Nodes per axis of the sup grid.
    #[arg(long)]
    grid: Option<usize>,
    /// Relative Laplacian residual accepted as harmonic.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct TraceArgs {
    /// Majorant supplying the search radii.
    #[arg(long)]
    majorant: String,
    /// Half-height `b` of the strip.
    #[arg(long = "H", default_value_t = 1.0)]
    height: f64,
    /// Starting level C.
    #[arg(long)]
    level: f64,
    #[arg(long, default_value_t = 0.0)]
    x0: f64,
    #[arg(long, default_value_t = 0.75)]
    y0: f64,
    /// Sampled field CSV; defaults to log|f| of the c = 1 boundary-blowup sample.
    #[arg(long)]
    field: Option<PathBuf>,
    /// Nodes per axis of the default field.
    #[arg(long, default_value_t = 1001)]
    grid: usize,
    #[arg(long, default_value_t = 64)]
    max_steps: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CurvesArgs {
    #[command(flatten)]
    spec: SpecArgs,
    #[arg(long)]
    majorant: String,
    /// Points per curve (the bound curve uses a quarter of them).
    #[arg(long, default_value_t = 200)]
    grid: usize,
    /// Truncation tolerance of the Domar sum.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, default_value_t = 1e-2)]
    t_min: f64,
    #[arg(long, default_value_t = 1e4)]
    t_max: f64,
    #[arg(long, default_value_t = 1e-2)]
    c_min: f64,
    #[arg(long, default_value_t = 1e4)]
    c_max: f64,
    /// Directory receiving F.csv, S.csv and bound_eps.csv; stdout blocks otherwise.
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Cert(CertError),
    Unsound(Vec<String>),
}

impl From<CertError> for Failure {
    fn from(e: CertError) -> Self {
        Failure::Cert(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Cert(e.into())
    }
}

fn exit_code(e: &CertError) -> u8 {
    match e {
        CertError::LevinsonFails(_) => 2,
        CertError::NoCertificate { .. } | CertError::NonSummableTail(_) => 3,
        _ => 1,
    }
}

fn emit(out: Option<&Path>, text: &str) -> io::Result<()> {
    match out {
        Some(p) => fs::write(p, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn bound_csv(cert: &BoundCertificate) -> String {
    let d = &cert.domar;
    let rows = [
        ("final_bound", cert.final_bound.unwrap_or(f64::INFINITY)),
        ("log_bound", cert.log_bound),
        ("loglog_bound", cert.loglog_bound),
        ("C", d.c),
        ("ln_C", d.ln_c),
        ("sum_value", d.sum_value),
        ("tail_bound", d.tail_bound),
        ("distance", d.distance),
    ];
    let mut s = String::from("quantity,value\n");
    for (k, v) in rows {
        s.push_str(&format!("{k},{}\n", csv_float(v)));
    }
    s
}

fn cmd_bound(a: &BoundArgs) -> Result<(), Failure> {
    let spec = a.spec.spec()?;
    let m = Majorant::parse(&a.majorant, spec.height)?;
    let cert = certify_bound(&spec, &m)?;
    let text = match a.format {
        Format::Json => cert.to_json() + "\n",
        Format::Csv => bound_csv(&cert),
    };
    emit(a.out.as_deref(), &text)?;
    Ok(())
}

fn reports_csv(reports: &[SampleReport]) -> String {
    let mut s = String::from("name,n,sound,residual_max,ratio_max,measured_sup,log_bound,error\n");
    let f = |x: Option<f64>| x.map(csv_float).unwrap_or_default();
    for r in reports {
        s.push_str(&format!(
            "\"{}\",{},{},{},{},{},{},\"{}\"\n",
            r.name.replace('"', "\"\""),
            r.n,
            r.sound,
            f(r.membership.map(|m| m.residual_max)),
            f(r.membership.map(|m| m.ratio_max)),
            f(r.sup.map(|s| s.value())),
            f(r.certificate.as_ref().map(|c| c.log_bound)),
            r.error.as_deref().unwrap_or("").replace('"', "\"\"")
        ));
    }
    s
}

fn cmd_check(a: &CheckArgs) -> Result<(), Failure> {
    let registry = match &a.registry {
        Some(p) => load_registry(p)?,
        None => default_registry(),
    };
    let mut cfg = GridConfig::default();
    if let Some(g) = a.grid {
        if g < 3 {
            return Err(CertError::Config(format!("--grid must be at least 3, got {g}")).into());
        }
        cfg = GridConfig { vertical: 2 * g - 1, ..cfg.with_resolution(g) };
    }
    if let Some(t) = a.tol {
        cfg.residual_tol = t;
    }
    let reports: Vec<SampleReport> = registry
        .iter()
        .map(|e| {
            let r = check_entry(e, &cfg);
            log::info!("{}: sound = {}", r.name, r.sound);
            r
        })
        .collect();
    let text = match a.format {
        Format::Json => reports_to_json(&reports) + "\n",
        Format::Csv => reports_csv(&reports),
    };
    emit(a.out.as_deref(), &text)?;
    let unsound: Vec<String> = reports.iter().filter(|r| !r.sound).map(|r| r.name.clone()).collect();
    eprintln!("{} samples, {} sound", reports.len(), reports.len() - unsound.len());
    if unsound.is_empty() {
        Ok(())
    } else {
        Err(Failure::Unsound(unsound))
    }
}

fn cmd_trace(a: &TraceArgs) -> Result<(), Failure> {
    let m = Majorant::parse(&a.majorant, a.height)?;
    let b = a.height;
    let v = match &a.field {
        Some(p) => SampledField::read_csv(BufReader::new(File::open(p)?))?,
        None => {
            if a.grid < 3 {
                return Err(CertError::Config(format!("--grid must be at least 3, got {}", a.grid)).into());
            }
            let s = make_boundary_blowup(1.0, b)?;
            // y = b is never a node of this grid
            let x = Axis::new(-2.0 * b, 2.0 * b, a.grid)?;
            let y = Axis::new(-2.0 * b, 2.6 * b, a.grid)?;
            SampledField::from_fn(x, y, |px, py| s.log_modulus(&[px], py))?
        }
    };
    let cfg = TraceConfig { halfwidth: b, max_steps: a.max_steps };
    let trace = domar_escape_trace(&v, (a.x0, a.y0), a.level, &m, &cfg)?;
    let mut buf = Vec::new();
    trace.write_csv(&mut buf)?;
    emit(a.out.as_deref(), &String::from_utf8(buf).expect("ascii csv"))?;
    eprintln!(
        "{} steps, terminated = {}, escaped_domain = {}, step_cap_hit = {}",
        trace.steps(),
        trace.terminated,
        trace.escaped_domain,
        trace.step_cap_hit
    );
    Ok(())
}

fn cmd_curves(a: &CurvesArgs) -> Result<(), Failure> {
    let spec = a.spec.spec()?;
    let m = Majorant::parse(&a.majorant, spec.height)?;
    let b = spec.height;
    let mut policy = TruncationPolicy::default();
    if let Some(t) = a.tol {
        policy.tolerance = t;
    }
    let f_rows = distribution_curve(&m, b, &log_space(a.t_min, a.t_max, a.grid)?)?;
    let s_rows = sum_curve(&m, b, &log_space(a.c_min, a.c_max, a.grid)?, &policy)?;
    let e_rows = bound_curve(&spec, &m, (a.grid / 4).max(1))?;
    let mut blocks: Vec<(&str, Vec<u8>)> =
        vec![("F.csv", Vec::new()), ("S.csv", Vec::new()), ("bound_eps.csv", Vec::new())];
    write_pairs_csv(&mut blocks[0].1, "t,F", &f_rows)?;
    write_pairs_csv(&mut blocks[1].1, "C,S", &s_rows)?;
    write_bound_csv(&mut blocks[2].1, &e_rows)?;
    match &a.out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            for (name, data) in &blocks {
                fs::write(dir.join(name), data)?;
            }
        }
        None => {
            let mut out = io::stdout().lock();
            for (i, (_, data)) in blocks.iter().enumerate() {
                if i > 0 {
                    out.write_all(b"\n")?;
                }
                out.write_all(data)?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().filter_or("LEVINSON_CERT_LOG", "warn")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Bound(a) => cmd_bound(a),
        Command::Check(a) => cmd_check(a),
        Command::Trace(a) => cmd_trace(a),
        Command::Curves(a) => cmd_curves(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Cert(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
        Err(Failure::Unsound(names)) => {
            for n in &names {
                eprintln!("unsound: {n}");
            }
            ExitCode::from(4)
        }
    }
}
