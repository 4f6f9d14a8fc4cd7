use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use starnet_cli::output::{write_csv, write_json, RatesRecord};
use starnet_cli::{Spacing, SweepSpec};
use starnet_core::netsim::{run, run_with_workers};
use starnet_core::rates::{curve_point, gap_report, lattice_asymptotic_gap, lattice_worst_case_gap};
use starnet_core::{BcMode, SimConfig, SnrPoint, Strategy};
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "starnet", version, about = "Three-pair star relay exchange: rates, gaps and Monte Carlo")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Tabulate bounds and achievable exchange rates over an SNR sweep.
    Rates(RatesArgs),
    /// Report the largest gaps to the upper bound over an SNR sweep.
    Gap(GapArgs),
    /// Run a seeded Monte Carlo campaign for one relaying strategy.
    Simulate(SimulateArgs),
}

#[derive(Args, Debug, Serialize)]
struct SweepArgs {
    #[arg(long, default_value_t = -20.0, allow_hyphen_values = true)]
    snr_db_start: f64,
    #[arg(long, default_value_t = 40.0, allow_hyphen_values = true)]
    snr_db_stop: f64,
    #[arg(long, default_value_t = 121)]
    points: usize,
    #[arg(long, value_enum, default_value_t = Spacing::LinearDb)]
    spacing: Spacing,
}

impl SweepArgs {
    fn spec(&self) -> SweepSpec {
        SweepSpec {
            snr_db_start: self.snr_db_start,
            snr_db_stop: self.snr_db_stop,
            points: self.points,
            spacing: self.spacing,
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
enum GapFormat {
    Text,
    Json,
}

#[derive(Args, Debug, Serialize)]
struct RatesArgs {
    #[command(flatten)]
    sweep: SweepArgs,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output file; standard output when omitted or `-`.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct GapArgs {
    #[arg(long, default_value_t = -20.0, allow_hyphen_values = true)]
    snr_db_start: f64,
    #[arg(long, default_value_t = 40.0, allow_hyphen_values = true)]
    snr_db_stop: f64,
    #[arg(long, default_value_t = 2001)]
    points: usize,
    #[arg(long, value_enum, default_value_t = Spacing::LinearDb)]
    spacing: Spacing,
    #[arg(long, value_enum, default_value_t = GapFormat::Text)]
    format: GapFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
enum StrategyArg {
    Df,
    Af,
    Lattice,
}

#[derive(Clone, Copy, Debug, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
enum BcModeArg {
    Ideal,
    Coded,
}

#[derive(Args, Debug, Serialize)]
struct SimulateArgs {
    #[arg(long, value_enum, default_value_t = StrategyArg::Lattice)]
    strategy: StrategyArg,
    #[arg(long, default_value_t = 10.0, allow_hyphen_values = true)]
    snr_db: f64,
    /// Real lattice dimension, or complex blocklength for DF and AF.
    #[arg(long, default_value_t = 64)]
    dim: usize,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Nesting margin over the MMSE noise (lattice only).
    #[arg(long, default_value_t = 2.0)]
    margin: f64,
    /// Accept margins below 1, which are expected to fail decoding.
    #[arg(long)]
    margin_override: bool,
    /// Fraction of the closed-form rate used to size DF/AF codebooks.
    #[arg(long, default_value_t = 0.7)]
    rate_fraction: f64,
    /// Fixed per-source codebook size (DF/AF).
    #[arg(long)]
    codebook_size: Option<u64>,
    #[arg(long, value_enum, default_value_t = BcModeArg::Ideal)]
    bc_mode: BcModeArg,
    #[arg(long)]
    noiseless: bool,
    #[arg(long)]
    noiseless_bc: bool,
    /// Worker threads; all available cores when omitted.
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl SimulateArgs {
    fn config(&self) -> Result<SimConfig> {
        if !self.snr_db.is_finite() {
            bail!("--snr-db must be finite");
        }
        Ok(SimConfig {
            strategy: match self.strategy {
                StrategyArg::Df => Strategy::Df,
                StrategyArg::Af => Strategy::Af,
                StrategyArg::Lattice => Strategy::Lattice,
            },
            snr: SnrPoint::from_db(self.snr_db),
            dim: self.dim,
            trials: self.trials,
            seed: self.seed,
            margin: self.margin,
            margin_override: self.margin_override,
            rate_fraction: self.rate_fraction,
            codebook_size: self.codebook_size,
            bc_mode: match self.bc_mode {
                BcModeArg::Ideal => BcMode::Ideal,
                BcModeArg::Coded => BcMode::Coded,
            },
            noiseless: self.noiseless,
            noiseless_bc: self.noiseless_bc,
        })
    }
}

fn open_output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    match path {
        Some(p) if p.as_os_str() != "-" => {
            let f = File::create(p).with_context(|| format!("cannot create {}", p.display()))?;
            Ok(Box::new(BufWriter::new(f)))
        }
        _ => Ok(Box::new(BufWriter::new(io::stdout().lock()))),
    }
}

fn echo_config<T: Serialize>(command: &str, args: &T) -> Result<()> {
    let json = serde_json::to_string(args)?;
    eprintln!("starnet {command}: effective configuration {json}");
    Ok(())
}

fn cmd_rates(args: &RatesArgs) -> Result<()> {
    echo_config("rates", args)?;
    let grid = args.sweep.spec().grid().map_err(anyhow::Error::msg)?;
    let records: Vec<RatesRecord> = grid.iter().map(|&s| RatesRecord::from(&curve_point(s))).collect();
    let mut out = open_output(&args.out)?;
    match args.format {
        Format::Csv => write_csv(&mut out, &records)?,
        Format::Json => write_json(&mut out, &records)?,
    }
    out.flush()?;
    Ok(())
}

fn cmd_gap(args: &GapArgs) -> Result<()> {
    echo_config("gap", args)?;
    let spec = SweepSpec {
        snr_db_start: args.snr_db_start,
        snr_db_stop: args.snr_db_stop,
        points: args.points,
        spacing: args.spacing,
    };
    let grid = spec.grid().map_err(anyhow::Error::msg)?;
    let g = gap_report(&grid)?;
    let mut out = open_output(&args.out)?;
    match args.format {
        GapFormat::Json => {
            serde_json::to_writer_pretty(&mut out, &g)?;
            writeln!(out)?;
        }
        GapFormat::Text => {
            writeln!(out, "grid: {} points, {} .. {}", grid.len(), grid[0], grid[grid.len() - 1])?;
            writeln!(
                out,
                "max lattice gap:       {} at snr {} (closed form {})",
                g.max_gap_lattice,
                g.max_gap_lattice_snr,
                lattice_worst_case_gap()
            )?;
            writeln!(out, "max best-of-three gap: {} at snr {}", g.max_gap_best, g.max_gap_best_snr)?;
            writeln!(
                out,
                "lattice gap at top:    {} at snr {} (limit {})",
                g.top_gap_lattice,
                g.top_snr,
                lattice_asymptotic_gap()
            )?;
        }
    }
    out.flush()?;
    Ok(())
}

fn cmd_simulate(args: &SimulateArgs) -> Result<()> {
    echo_config("simulate", args)?;
    let cfg = args.config()?;
    eprintln!("starnet simulate: seed {}", cfg.seed);
    let result = match args.workers {
        Some(0) => bail!("--workers must be positive"),
        Some(w) => run_with_workers(&cfg, w)?,
        None => run(&cfg)?,
    };
    let mut out = open_output(&args.out)?;
    serde_json::to_writer_pretty(&mut out, &result)?;
    writeln!(out)?;
    out.flush()?;
    eprintln!(
        "starnet simulate: {} trials in {:.3} s, worst receiver error {}",
        result.trials,
        result.elapsed.as_secs_f64(),
        result.worst_receiver_rate()
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Rates(a) => cmd_rates(a),
        Command::Gap(a) => cmd_gap(a),
        Command::Simulate(a) => cmd_simulate(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("starnet: error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
