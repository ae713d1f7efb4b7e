//! Command-line front end.
//!
//! Exit codes: 0 success, 1 an in-range inequality failed, 2 bad
//! configuration, 3 the built function failed its membership scan while
//! `--require-member` was set.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use crate::coefficients::{laurent_coeffs, taylor_coeffs, write_coefficients_csv, CoefficientVector};
use crate::error::Error;
use crate::families::{
    build_concave_on, build_starlike_on, closed_form_g_on, extremal_ftheta_on, Family, GridSpec, MemberFunction,
    StarlikeCenter,
};
use crate::inequalities::{concave_reports, starlike_reports};
use crate::report::{format_number, write_reports_csv, InequalityId, InequalityReport};
use crate::schur::{ruscheweyh_check, schwarz_pick_check, SchurGenerator};
use crate::search::{range_sweep, region_sample, sharpness_probe, write_sweep_csv, SearchProblem, SearchResult};
use crate::tolerance::DEFAULT_ORDER;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NOT_MEMBER: i32 = 3;

const THEOREM_A_MAX: usize = 10;
const TAIL_MAX: usize = 8;
const RUSCHEWEYH_MAX: usize = 5;

#[derive(Debug, Parser)]
#[command(name = "univalent", version, about = "Coefficient bounds for concave and starlike meromorphic functions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Laurent and Taylor coefficient tables of a member.
    Coeffs(MemberArgs),
    /// Run every applicable inequality on a member.
    Verify(VerifyArgs),
    /// Search for the parameters that push one inequality hardest.
    Probe(ProbeArgs),
    /// Probe one inequality across a grid of `p`.
    Sweep(SweepArgs),
    /// Sample the Taylor coefficient region of concave members.
    Region(RegionArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    /// Concave functions with pole at `p`.
    Co,
    /// Meromorphically starlike functions with omitted point `w0`.
    Sigma,
    /// Constant generators only (searches).
    Const,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MemberArgs {
    #[arg(long, value_enum, default_value_t = FamilyArg::Co)]
    pub family: FamilyArg,
    #[arg(long, allow_hyphen_values = true)]
    pub p: f64,
    /// `auto-lower`, `auto-upper`, `auto-counter`, or `re,im`.
    #[arg(long, allow_hyphen_values = true)]
    pub w0: Option<String>,
    /// Constant generator `e^{i theta}`.
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    /// Generator as JSON, e.g. `{"variant":"constant","value":[0.5,0.0]}`.
    #[arg(long)]
    pub generator: Option<String>,
    /// Use `g(z) = -zp/((z-p)(1-pz))`.
    #[arg(long)]
    pub closed_form_g: bool,
    #[arg(long, default_value_t = DEFAULT_ORDER)]
    pub order: usize,
    #[arg(long, default_value_t = 48)]
    pub radii: usize,
    #[arg(long, default_value_t = 96)]
    pub angles: usize,
    #[arg(long, default_value_t = 0.02)]
    pub puncture: f64,
    /// Exit 3 when the membership scan fails.
    #[arg(long)]
    pub require_member: bool,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub member: MemberArgs,
    /// Also run the historical, incorrect residue disk.
    #[arg(long)]
    pub include_deprecated: bool,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long)]
    pub ineq: InequalityId,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub w0: Option<String>,
    /// `const` restricts the search to constant generators.
    #[arg(long, value_enum)]
    pub family: Option<FamilyArg>,
    /// Largest Blaschke degree in the search family.
    #[arg(long, default_value_t = crate::search::DEFAULT_DEGREE)]
    pub degree: usize,
    /// Evaluations per start.
    #[arg(long, default_value_t = crate::search::DEFAULT_BUDGET)]
    pub budget: usize,
    #[arg(long, default_value_t = crate::search::DEFAULT_STARTS)]
    pub starts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ProbeArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub p: f64,
    #[command(flatten)]
    pub search: SearchArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// `start:stop:step`, both ends inclusive.
    #[arg(long)]
    pub p_grid: String,
    #[command(flatten)]
    pub search: SearchArgs,
}

#[derive(Debug, Args)]
pub struct RegionArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub p: f64,
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Math(#[from] Error),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Io(_) | Self::Csv(_) | Self::Json(_) => 1,
            Self::Config(_) | Self::Math(_) => EXIT_CONFIG,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parse `args` (program name first) and run; returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match execute(&cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(command: &Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<i32> {
    match command {
        Command::Coeffs(args) => cmd_coeffs(args, stdout, stderr),
        Command::Verify(args) => cmd_verify(args, stdout, stderr),
        Command::Probe(args) => cmd_probe(args, stdout),
        Command::Sweep(args) => cmd_sweep(args, stdout),
        Command::Region(args) => cmd_region(args, stdout),
    }
}

/// `auto-lower`, `auto-upper`, `auto-counter`, `re,im` or a bare real.
pub fn parse_w0(text: &str, p: f64) -> CliResult<Complex64> {
    let center = match text.trim() {
        "auto-lower" => StarlikeCenter::lower(p)?,
        "auto-upper" => StarlikeCenter::upper(p)?,
        "auto-counter" => StarlikeCenter::counter(p)?,
        other => {
            let parts: Vec<&str> = other.split(',').map(str::trim).collect();
            let num = |s: &str| {
                s.parse::<f64>()
                    .map_err(|_| CliError::Config(format!("invalid w0 `{text}`")))
            };
            let w0 = match parts.as_slice() {
                [re] => Complex64::new(num(re)?, 0.0),
                [re, im] => Complex64::new(num(re)?, num(im)?),
                _ => return Err(CliError::Config(format!("invalid w0 `{text}`"))),
            };
            StarlikeCenter::new(w0, p)?
        }
    };
    Ok(center.w0())
}

/// `start:stop:step` with both ends included.
pub fn parse_p_grid(text: &str) -> CliResult<Vec<f64>> {
    let bad = || CliError::Config(format!("invalid p grid `{text}`, expected start:stop:step"));
    let parts: Vec<f64> = text
        .split(':')
        .map(|s| s.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<CliResult<_>>()?;
    let [start, stop, step] = parts.as_slice() else {
        return Err(bad());
    };
    if !(*step > 0.0) || stop < start {
        return Err(bad());
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|k| start + k as f64 * step).collect())
}

fn grid_of(args: &MemberArgs) -> CliResult<GridSpec> {
    if args.radii == 0 || args.angles == 0 || !(args.puncture > 0.0 && args.puncture < 1.0) {
        return Err(CliError::Config("grid needs radii, angles > 0 and puncture in (0, 1)".into()));
    }
    Ok(GridSpec {
        radii: args.radii,
        angles: args.angles,
        puncture: args.puncture,
        ..GridSpec::default()
    })
}

fn parse_generator(json: &str) -> CliResult<SchurGenerator> {
    serde_json::from_str(json).map_err(|e| CliError::Config(format!("invalid generator: {e}")))
}

fn build_member(args: &MemberArgs) -> CliResult<MemberFunction> {
    let p = args.p;
    crate::series::check_pole(p)?;
    let grid = grid_of(args)?;
    let order = args.order;
    let generator = match (&args.generator, args.theta) {
        (Some(_), Some(_)) => return Err(CliError::Config("use either --generator or --theta".into())),
        (Some(json), None) => Some(parse_generator(json)?),
        (None, Some(theta)) => Some(SchurGenerator::unimodular(theta)),
        (None, None) => None,
    };
    if args.closed_form_g && generator.is_some() {
        return Err(CliError::Config("--closed-form-g takes no generator".into()));
    }
    match args.family {
        FamilyArg::Co => {
            if args.w0.is_some() {
                return Err(CliError::Config("--w0 applies to --family sigma".into()));
            }
            if args.closed_form_g {
                return Ok(closed_form_g_on(Family::Concave { p }, order, &grid)?);
            }
            match (args.theta, generator) {
                (Some(theta), _) => Ok(extremal_ftheta_on(p, theta, order, &grid)?),
                (None, Some(g)) => Ok(build_concave_on(p, g, order, &grid)?),
                (None, None) => Err(CliError::Config(
                    "--family co needs --theta, --generator or --closed-form-g".into(),
                )),
            }
        }
        FamilyArg::Sigma => {
            let w0 = parse_w0(args.w0.as_deref().unwrap_or("auto-lower"), p)?;
            if args.closed_form_g {
                return Ok(closed_form_g_on(Family::Starlike { p, w0 }, order, &grid)?);
            }
            let inner = generator.unwrap_or(SchurGenerator::Constant {
                value: Complex64::new(0.0, 0.0),
            });
            Ok(build_starlike_on(p, w0, inner, order, &grid)?)
        }
        FamilyArg::Const => Err(CliError::Config("--family const applies to probe and sweep".into())),
    }
}

fn open_output<'a>(out: &OutputArgs, stdout: &'a mut dyn Write) -> CliResult<Box<dyn Write + 'a>> {
    Ok(match &out.output {
        Some(path) => Box::new(io::BufWriter::new(File::create(path)?)),
        None => Box::new(stdout),
    })
}

#[derive(Serialize)]
struct CoefficientRow {
    kind: &'static str,
    n: isize,
    re: f64,
    im: f64,
    modulus: f64,
}

fn omega_at_zero(f: &MemberFunction) -> Option<Complex64> {
    if f.family().is_concave() {
        return None;
    }
    let w0 = f.family().w0()?;
    Some(crate::families::pinned_value(w0, f.p()))
}

fn cmd_coeffs(args: &MemberArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<i32> {
    let f = build_member(args)?;
    if args.require_member && !f.is_member() {
        writeln!(stderr, "membership scan failed: {:?}", f.membership())?;
        return Ok(EXIT_NOT_MEMBER);
    }
    let laurent = laurent_coeffs(&f, args.order)?;
    let taylor = taylor_coeffs(&f, args.order)?;
    let omega0 = omega_at_zero(&f);
    let mut out = open_output(&args.out, stdout)?;
    match args.out.format {
        Format::Csv => {
            let mut buf = Vec::new();
            write_coefficients_csv(&[&laurent, &taylor], &mut buf)?;
            let text = String::from_utf8(buf).map_err(|e| CliError::Config(e.to_string()))?;
            let mut lines = text.lines();
            if let Some(header) = lines.next() {
                writeln!(out, "{header}")?;
            }
            if let Some(a) = omega0 {
                writeln!(
                    out,
                    "omega_at_0,0,{},{},{}",
                    format_number(a.re),
                    format_number(a.im),
                    format_number(a.norm())
                )?;
            }
            for line in lines {
                writeln!(out, "{line}")?;
            }
        }
        Format::Json => {
            let mut rows = Vec::new();
            if let Some(a) = omega0 {
                rows.push(CoefficientRow {
                    kind: "omega_at_0",
                    n: 0,
                    re: a.re,
                    im: a.im,
                    modulus: a.norm(),
                });
            }
            rows.extend(coefficient_rows(&laurent).chain(coefficient_rows(&taylor)));
            serde_json::to_writer_pretty(&mut out, &rows)?;
            writeln!(out)?;
        }
    }
    out.flush()?;
    Ok(EXIT_OK)
}

fn coefficient_rows(v: &CoefficientVector) -> impl Iterator<Item = CoefficientRow> + '_ {
    v.iter().map(move |(n, c)| CoefficientRow {
        kind: v.kind().as_str(),
        n,
        re: c.re,
        im: c.im,
        modulus: c.norm(),
    })
}

fn generator_reports(f: &MemberFunction, order: usize) -> CliResult<Vec<InequalityReport>> {
    let Some(g) = f.generator() else {
        return Ok(Vec::new());
    };
    if g.validate().is_err() {
        return Ok(Vec::new());
    }
    let e = g.taylor_about_p(f.p(), RUSCHEWEYH_MAX.min(order).max(1))?;
    let mut out = vec![schwarz_pick_check(&e)?];
    for n in 1..=e.order() {
        out.push(ruscheweyh_check(&e, n)?);
    }
    Ok(out)
}

fn cmd_verify(args: &VerifyArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<i32> {
    let m = &args.member;
    let f = build_member(m)?;
    if m.require_member && !f.is_member() {
        writeln!(stderr, "membership scan failed: {:?}", f.membership())?;
        return Ok(EXIT_NOT_MEMBER);
    }
    let mut reports = generator_reports(&f, m.order)?;
    if f.family().is_concave() {
        reports.extend(concave_reports(&f, THEOREM_A_MAX.min(m.order), TAIL_MAX.min(m.order))?);
    } else {
        reports.extend(starlike_reports(&f, args.include_deprecated)?);
    }
    write_reports(&reports, &m.out, stdout)?;
    Ok(if reports.iter().any(InequalityReport::is_violation) {
        EXIT_VIOLATION
    } else {
        EXIT_OK
    })
}

fn write_reports(reports: &[InequalityReport], args: &OutputArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let mut out = open_output(args, stdout)?;
    match args.format {
        Format::Csv => write_reports_csv(reports, &mut out)?,
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, reports)?;
            writeln!(out)?;
        }
    }
    out.flush()?;
    Ok(())
}

fn search_problem(args: &SearchArgs, p: f64) -> CliResult<SearchProblem> {
    let mut problem = SearchProblem::new(args.ineq, p)?
        .with_budget(args.budget)
        .with_starts(args.starts)
        .with_seed(args.seed)
        .with_degree(match args.family {
            Some(FamilyArg::Const) => 0,
            _ => args.degree,
        });
    if let Some(n) = args.n {
        problem = problem.with_n(n);
    }
    if let Some(w0) = &args.w0 {
        problem = problem.with_w0(parse_w0(w0, p)?);
    }
    Ok(problem)
}

fn write_search(rows: &[SearchResult], args: &OutputArgs, stdout: &mut dyn Write) -> CliResult<i32> {
    let mut out = open_output(args, stdout)?;
    match args.format {
        Format::Csv => write_sweep_csv(rows, &mut out)?,
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, rows)?;
            writeln!(out)?;
        }
    }
    out.flush()?;
    Ok(if rows.iter().any(SearchResult::certifies_violation) {
        EXIT_VIOLATION
    } else {
        EXIT_OK
    })
}

fn cmd_probe(args: &ProbeArgs, stdout: &mut dyn Write) -> CliResult<i32> {
    let problem = search_problem(&args.search, args.p)?;
    let result = sharpness_probe(&problem)?;
    write_search(std::slice::from_ref(&result), &args.search.out, stdout)
}

fn cmd_sweep(args: &SweepArgs, stdout: &mut dyn Write) -> CliResult<i32> {
    let grid = parse_p_grid(&args.p_grid)?;
    let Some(&first) = grid.first() else {
        return Err(CliError::Config("empty p grid".into()));
    };
    let template = search_problem(&args.search, first)?;
    if args.search.w0.is_some() && grid.len() > 1 {
        return Err(CliError::Config("--w0 depends on p; omit it for sweeps".into()));
    }
    let rows = range_sweep(&template, &grid)?;
    write_search(&rows, &args.search.out, stdout)
}

fn cmd_region(args: &RegionArgs, stdout: &mut dyn Write) -> CliResult<i32> {
    let stats = region_sample(args.p, args.n, args.samples, args.seed)?;
    let mut out = open_output(&args.out, stdout)?;
    match args.out.format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(["index", "re", "im", "distance"])?;
            for (i, a) in stats.points.iter().enumerate() {
                w.write_record([
                    i.to_string(),
                    format_number(a.re),
                    format_number(a.im),
                    format_number((a - stats.center).norm()),
                ])?;
            }
            w.flush()?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, &stats)?;
            writeln!(out)?;
        }
    }
    out.flush()?;
    Ok(if stats.max_distance > stats.radius + 1e-8 {
        EXIT_VIOLATION
    } else {
        EXIT_OK
    })
}
