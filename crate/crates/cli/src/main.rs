//! `medusa`: analyze colored trajectories, generate synthetic ones, and
//! cross-check the engine against the oracle.

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use medusa_core::pipeline::{oracle_report, run_analysis, AnalysisConfig, InclusionSpec};
use medusa_core::synth::{generate, SynthConfig};
use medusa_core::time::parse_decimal;
use medusa_core::{parse_frames, write_frames, Error, Result, TargetSpec, TrajectorySet};

const DEFAULT_OUT_DIR: &str = "medusa-out";

#[derive(Parser)]
#[command(name = "medusa", version, about = "Persistent homology of space-time medusas")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build medusas, compute diagrams and summaries, write a hashed bundle.
    Analyze(AnalyzeArgs),
    /// Write a synthetic frames file.
    Synth(SynthArgs),
    /// Compare engine diagrams and alpha-complex Betti numbers with the oracle.
    Oracle(OracleArgs),
}

#[derive(Args)]
struct AnalysisFlags {
    /// Frames file (`frame,time,point_id,color,x,y[,z]`).
    #[arg(long)]
    frames: PathBuf,
    /// JSON analysis config; flags given on the command line take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    alpha0: Option<String>,
    /// Target such as `alpha:multi` or `delaunay:mono2`; repeatable.
    #[arg(long = "target")]
    targets: Vec<TargetSpec>,
    /// Inclusion such as `alpha:mono1->alpha:multi`; repeatable.
    #[arg(long = "inclusion")]
    inclusions: Vec<InclusionSpec>,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    common: AnalysisFlags,
    #[arg(long)]
    min_persistence: Option<String>,
    #[arg(long, env = "MEDUSA_OUT_DIR")]
    out_dir: Option<PathBuf>,
    #[arg(long)]
    oracle_check: bool,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    common: AnalysisFlags,
    /// Medusa text file to check instead of the one built from the frames.
    #[arg(long)]
    medusa: Option<PathBuf>,
}

#[derive(Args)]
struct SynthArgs {
    /// JSON synth config; flags given on the command line take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    dimension: Option<usize>,
    #[arg(long)]
    grid_side: Option<usize>,
    #[arg(long)]
    frames: Option<usize>,
    /// segregation, mono_control, static or random_walk.
    #[arg(long)]
    dynamics: Option<String>,
    /// fair_coin, all_one or split_existing.
    #[arg(long)]
    colors: Option<String>,
    #[arg(long)]
    noise: Option<f64>,
    /// Output file; standard output when absent.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| {
        Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
    })
}

fn decimal(s: &str, what: &str) -> Result<medusa_core::Rational> {
    parse_decimal(s).ok_or_else(|| Error::ConfigInvalid(format!("bad {what} `{s}`")))
}

fn load_analysis(flags: &AnalysisFlags) -> Result<(TrajectorySet, AnalysisConfig)> {
    let mut cfg: AnalysisConfig = match &flags.config {
        Some(p) => serde_json::from_str(&read(p)?)?,
        None => AnalysisConfig::default(),
    };
    if let Some(a) = &flags.alpha0 {
        cfg.alpha0 = decimal(a, "alpha0")?;
    }
    if !flags.targets.is_empty() {
        cfg.targets = flags.targets.clone();
    }
    if !flags.inclusions.is_empty() {
        cfg.inclusions = flags.inclusions.clone();
    }
    cfg.validate()?;
    let ts = parse_frames(&read(&flags.frames)?)?;
    Ok((ts, cfg))
}

fn analyze(args: AnalyzeArgs) -> Result<()> {
    let (ts, mut cfg) = load_analysis(&args.common)?;
    if let Some(m) = &args.min_persistence {
        cfg.min_persistence = decimal(m, "min_persistence")?;
    }
    cfg.oracle_check |= args.oracle_check;
    if let Some(d) = args.out_dir {
        cfg.out_dir = Some(d);
    }
    let dir = cfg.out_dir.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR));
    let (analysis, manifest) = run_analysis(&ts, &cfg, &dir)?;
    let mut out = std::io::stdout().lock();
    for t in &analysis.targets {
        writeln!(
            out,
            "{}: {} cells, {} dots, {} fillers",
            t.spec,
            t.medusa.len(),
            t.diagram.visible(cfg.min_persistence).count(),
            t.diagnostics.fillers()
        )?;
    }
    for i in &analysis.images {
        writeln!(out, "{}: {} dots", i.spec, i.diagram.visible(cfg.min_persistence).count())?;
    }
    writeln!(out, "wrote {} files to {}", manifest.artifacts.len() + 1, dir.display())?;
    Ok(())
}

fn synth(args: SynthArgs) -> Result<()> {
    let mut cfg: SynthConfig = match &args.config {
        Some(p) => serde_json::from_str(&read(p)?)?,
        None => SynthConfig::default(),
    };
    if let Some(v) = args.seed {
        cfg.seed = v;
    }
    if let Some(v) = args.dimension {
        cfg.dimension = v;
    }
    if let Some(v) = args.grid_side {
        cfg.grid_side = v;
    }
    if let Some(v) = args.frames {
        cfg.frames = v;
    }
    if let Some(v) = args.dynamics {
        cfg.dynamics = serde_json::from_value(serde_json::Value::String(v))?;
    }
    if let Some(v) = args.colors {
        cfg.colors = serde_json::from_value(serde_json::Value::String(v))?;
    }
    if let Some(v) = args.noise {
        cfg.noise = v;
    }
    let text = write_frames(&generate(&cfg)?);
    match args.out {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn oracle(args: OracleArgs) -> Result<()> {
    let (ts, cfg) = load_analysis(&args.common)?;
    let medusa = args.medusa.as_deref().map(read).transpose()?;
    let report = oracle_report(&ts, &cfg, medusa.as_deref())?;
    print!("{}", report.to_text());
    if !report.passed() {
        return Err(Error::Verification("engine and oracle disagree".into()));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Analyze(a) => analyze(a),
        Command::Synth(a) => synth(a),
        Command::Oracle(a) => oracle(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
