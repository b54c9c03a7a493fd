use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use boxplus::hausdorff::continuity_scan;
use boxplus::laws::DEFAULT_LAW_GRID;
use boxplus::measure::validate_renormalized;
use boxplus::support::SnapshotSummary;
use boxplus::verify::{verify, VerifyConfig};
use boxplus::{
    hausdorff, law_measure, snapshot, validate, Error, LawSpec, Measure, MeasureSpec, Numerics,
    TimeParam,
};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "boxplus",
    version,
    about = "Supports, densities and atoms of free convolution powers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Support, atoms and density of μ_t at one time.
    Snapshot(TimeArgs),
    /// Density samples (u, p) of μ_t.
    Density(TimeArgs),
    /// Hausdorff distances between supports at adjacent times.
    Scan(ScanArgs),
    /// Hausdorff distance between the supports in two snapshot files.
    Hausdorff(HausdorffArgs),
    /// Randomized property checks; exits 1 if any fails.
    Verify(VerifyArgs),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Named law: semicircle[:variance], bernoulli, free_poisson:<lambda>, arcsine[:radius].
    #[arg(long)]
    law: Option<String>,
    /// JSON measure spec with "atoms" and "segments".
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Args)]
struct Knobs {
    #[arg(long, default_value_t = Numerics::default().grid_n)]
    grid_n: usize,
    #[arg(long, default_value_t = Numerics::default().samples_n)]
    samples_n: usize,
    #[arg(long, default_value_t = Numerics::default().y_floor)]
    y_floor: f64,
    /// Density breakpoints used to discretize a named law.
    #[arg(long, default_value_t = DEFAULT_LAW_GRID)]
    law_grid_n: usize,
    /// Rescale the density of a spec file so the total mass is 1.
    #[arg(long)]
    renormalize: bool,
}

impl Knobs {
    fn numerics(&self) -> Numerics {
        Numerics {
            grid_n: self.grid_n,
            samples_n: self.samples_n,
            y_floor: self.y_floor,
            ..Numerics::default()
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct TimeArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long)]
    t: String,
    #[command(flatten)]
    knobs: Knobs,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct ScanArgs {
    #[command(flatten)]
    source: Source,
    /// Time range lo:hi.
    #[arg(long)]
    t: String,
    #[arg(long, default_value_t = 41)]
    steps: usize,
    #[arg(long, default_value_t = 3)]
    refine_depth: usize,
    #[command(flatten)]
    knobs: Knobs,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args)]
struct HausdorffArgs {
    a: PathBuf,
    b: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long, default_value_t = VerifyConfig::default().seed)]
    seed: u64,
    #[command(flatten)]
    knobs: Knobs,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Core(Error),
    Io(String),
    Verify,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Io(m) => f.write_str(m),
            Failure::Core(e) => write!(f, "{}: {e}", e.kind()),
            Failure::Verify => f.write_str("property check failed"),
        }
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verify => 1,
            Failure::Usage(_) => 2,
            Failure::Core(e) if e.is_validation() => 2,
            Failure::Core(_) => 3,
            Failure::Io(_) => 3,
        }
    }
}

type Run<T> = Result<T, Failure>;

fn load(source: &Source, knobs: &Knobs) -> Run<(String, Measure)> {
    if let Some(name) = &source.law {
        let law: LawSpec = name.parse()?;
        return Ok((law.to_string(), law_measure(law, knobs.law_grid_n)?));
    }
    let path = source.file.as_ref().expect("clap enforces a source");
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    let spec = MeasureSpec::from_json(&text)?;
    let m = if knobs.renormalize {
        validate_renormalized(&spec)?
    } else {
        validate(&spec)?
    };
    Ok((path.display().to_string(), m))
}

fn parse_f64(s: &str) -> Run<f64> {
    s.trim()
        .parse()
        .map_err(|_| Failure::Usage(format!("not a number: {s:?}")))
}

fn parse_time(s: &str) -> Run<TimeParam> {
    if s.contains(':') {
        return Err(Failure::Usage(format!(
            "expected a single time, got range {s:?}"
        )));
    }
    Ok(TimeParam::new(parse_f64(s)?)?)
}

fn parse_range(s: &str) -> Run<(f64, f64)> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| Failure::Usage(format!("expected lo:hi, got {s:?}")))?;
    Ok((parse_f64(lo)?, parse_f64(hi)?))
}

/// Writes to a temporary file next to `path` and renames it into place, so
/// a failed run never leaves a partial file.
fn emit(out: Option<&Path>, body: &str) -> Run<()> {
    let Some(path) = out else {
        print!("{body}");
        return Ok(());
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let io = |e: std::io::Error| Failure::Io(format!("cannot write {}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(body.as_bytes()).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

fn with_newline(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

fn cmd_snapshot(a: &TimeArgs) -> Run<()> {
    let t = parse_time(&a.t)?;
    let (_, m) = load(&a.source, &a.knobs)?;
    let s = snapshot(&m, t, &a.knobs.numerics())?;
    let body = match a.format {
        Format::Json => s.to_json(),
        Format::Csv => {
            let mut out = String::from("kind,lo,hi,mass\n");
            for iv in s.ac_support.intervals() {
                out.push_str(&format!("ac,{},{},\n", iv.lo, iv.hi));
            }
            for at in &s.atoms {
                out.push_str(&format!(
                    "atom,{},{},{}\n",
                    at.position, at.position, at.mass
                ));
            }
            out
        }
    };
    emit(a.out.as_deref(), &with_newline(body))
}

fn cmd_density(a: &TimeArgs) -> Run<()> {
    let t = parse_time(&a.t)?;
    let (_, m) = load(&a.source, &a.knobs)?;
    let s = snapshot(&m, t, &a.knobs.numerics())?;
    let pts = s.density.points();
    let body = match a.format {
        Format::Json => {
            let rows: Vec<[f64; 2]> = pts.iter().map(|&(u, p)| [u, p]).collect();
            serde_json::to_string_pretty(&serde_json::json!({ "t": s.t, "density": rows }))
                .expect("density serializes")
        }
        Format::Csv => {
            let mut out = String::from("u,p\n");
            for (u, p) in pts {
                out.push_str(&format!("{u},{p}\n"));
            }
            out
        }
    };
    emit(a.out.as_deref(), &with_newline(body))
}

fn cmd_scan(a: &ScanArgs) -> Run<()> {
    let (lo, hi) = parse_range(&a.t)?;
    let (_, m) = load(&a.source, &a.knobs)?;
    let table = continuity_scan(&m, lo, hi, a.steps, a.refine_depth, &a.knobs.numerics())?;
    let body = match a.format {
        Format::Csv => table.to_csv(),
        Format::Json => serde_json::to_string_pretty(&table).expect("table serializes"),
    };
    emit(a.out.as_deref(), &with_newline(body))
}

fn read_summary(path: &Path) -> Run<SnapshotSummary> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(SnapshotSummary::from_json(&text)?)
}

fn cmd_hausdorff(a: &HausdorffArgs) -> Run<()> {
    let (sa, sb) = (read_summary(&a.a)?, read_summary(&a.b)?);
    let d = hausdorff(&sa.support(), &sb.support())?;
    let body = match a.format {
        Format::Json => serde_json::to_string_pretty(&serde_json::json!({
            "t_a": sa.t,
            "t_b": sb.t,
            "d_h": d,
        }))
        .expect("distance serializes"),
        Format::Csv => format!("t_a,t_b,d_h\n{},{},{d}\n", sa.t, sb.t),
    };
    emit(a.out.as_deref(), &with_newline(body))
}

fn cmd_verify(a: &VerifyArgs) -> Run<()> {
    let (label, m) = load(&a.source, &a.knobs)?;
    let cfg = VerifyConfig {
        seed: a.seed,
        ..VerifyConfig::default()
    };
    let report = verify(&m, &label, &cfg, &a.knobs.numerics())?;
    emit(a.out.as_deref(), &with_newline(report.to_json()))?;
    if report.passed {
        Ok(())
    } else {
        Err(Failure::Verify)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Snapshot(a) => cmd_snapshot(a),
        Command::Density(a) => cmd_density(a),
        Command::Scan(a) => cmd_scan(a),
        Command::Hausdorff(a) => cmd_hausdorff(a),
        Command::Verify(a) => cmd_verify(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
