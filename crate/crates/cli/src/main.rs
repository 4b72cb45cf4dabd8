mod commands;
mod config;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::Parser;
use magstep::{Context, Resolution};

use commands::{CliError, Output};
use config::{Command, Format, RunConfig, SCHEMA_VERSION};

/// Spectral computations for Schrödinger operators with magnetic step fields.
#[derive(Debug, Parser)]
#[command(name = "magstep", version, allow_negative_numbers = true)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
    /// JSON run configuration; flags given on the command line take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file (default: stdout).
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,
    /// Worker threads for parameter sweeps.
    #[arg(long, env = "MAGSTEP_THREADS", global = true)]
    threads: Option<usize>,
    /// Node spacing of the 1D fiber problems.
    #[arg(long, global = true, allow_hyphen_values = true)]
    h1d: Option<f64>,
    /// Node spacing of the 2D problems.
    #[arg(long, global = true, allow_hyphen_values = true)]
    h2d: Option<f64>,
    /// Distance between the potential's minimum set and the artificial walls.
    #[arg(long, global = true, allow_hyphen_values = true)]
    box_radius: Option<f64>,
    /// Eigensolver residual tolerance.
    #[arg(long, global = true, allow_hyphen_values = true)]
    tol: Option<f64>,
    #[arg(long, global = true)]
    max_iter: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
}

fn resolve(cli: Cli) -> Result<RunConfig, CliError> {
    let base = match &cli.config {
        Some(path) => {
            let file = File::open(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            Some(serde_json::from_reader::<_, RunConfig>(file).map_err(|e| CliError::Input(format!("config: {e}")))?)
        }
        None => None,
    };
    let command = match (cli.command, &base) {
        (Some(c), _) => c,
        (None, Some(b)) => b.command.clone(),
        (None, None) => return Err(CliError::Input("no command given (see --help)".into())),
    };
    let mut cfg = base.unwrap_or(RunConfig {
        command: command.clone(),
        resolution: Resolution::default(),
        output: Default::default(),
        threads: None,
    });
    cfg.command = command;
    let r = &mut cfg.resolution;
    r.h1d = cli.h1d.unwrap_or(r.h1d);
    r.h2d = cli.h2d.unwrap_or(r.h2d);
    r.box_radius = cli.box_radius.unwrap_or(r.box_radius);
    r.tol = cli.tol.unwrap_or(r.tol);
    r.max_iter = cli.max_iter.unwrap_or(r.max_iter);
    r.seed = cli.seed.unwrap_or(r.seed);
    r.validate()?;
    if cli.output.is_some() {
        cfg.output.path = cli.output;
    }
    if let Some(f) = cli.format {
        cfg.output.format = f;
    }
    if cli.threads.is_some() {
        cfg.threads = cli.threads;
    }
    if cfg.threads == Some(0) {
        return Err(CliError::Input("threads must be at least 1".into()));
    }
    Ok(cfg)
}

fn write_csv(cfg: &RunConfig, out: &Output, w: &mut dyn Write) -> io::Result<()> {
    writeln!(w, "# magstep {}", env!("CARGO_PKG_VERSION"))?;
    writeln!(w, "# config: {}", serde_json::to_string(cfg)?)?;
    for note in &out.notes {
        writeln!(w, "# {note}")?;
    }
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record(&out.columns)?;
    for row in &out.rows {
        csv.write_record(row)?;
    }
    csv.flush()
}

fn write_json(cfg: &RunConfig, out: &Output, wall: f64, w: &mut dyn Write) -> io::Result<()> {
    let doc = serde_json::json!({
        "schema_version": SCHEMA_VERSION,
        "magstep_version": env!("CARGO_PKG_VERSION"),
        "config": cfg,
        "wall_time_s": wall,
        "notes": out.notes,
        "result": out.json,
    });
    serde_json::to_writer_pretty(&mut *w, &doc)?;
    writeln!(w)
}

fn execute(cfg: &RunConfig) -> Result<(), CliError> {
    if let Some(n) = cfg.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Input(format!("thread pool: {e}")))?;
    }
    let start = Instant::now();
    let ctx = Context::new(cfg.resolution);
    let out = commands::run(&ctx, &cfg.command)?;
    let wall = start.elapsed().as_secs_f64();
    eprintln!("wall time: {wall:.3} s");

    let io_err = |e: io::Error| CliError::Input(format!("writing output: {e}"));
    let mut sink: Box<dyn Write> = match &cfg.output.path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    match cfg.output.format {
        Format::Csv => write_csv(cfg, &out, &mut sink),
        Format::Json => write_json(cfg, &out, wall, &mut sink),
    }
    .map_err(io_err)?;
    sink.flush().map_err(io_err)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match resolve(cli).and_then(|cfg| execute(&cfg)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
