use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};

use simplex_lattice_cli::commands;
use simplex_lattice_cli::{exit_code, Format, GridKind, IdentityFailure, SweepConfig, Table};

#[derive(Parser)]
#[command(name = "simplex-lattice", version, about = "Lattice points in weighted simplices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact open and closed counts with leading terms and errors.
    Count(Opts),
    /// Normalized errors over a grid, with growth fits.
    ErrorSweep(Opts),
    /// Continued fractions and approximability of the inclines.
    Dioph(Opts),
    /// Fourier-side identity suites.
    FourierCheck(Opts),
    /// Lattice sums and the balanced error bound.
    LatticeSum(Opts),
    /// Spencer sums over the inclines.
    Spencer(Opts),
}

#[derive(Args)]
struct Opts {
    /// JSON file with sweep settings; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    preset: Option<String>,
    /// Comma-separated weights, e.g. `1,sqrt2,1+sqrt3`.
    #[arg(long)]
    weights: Option<String>,
    #[arg(long)]
    t_min: Option<f64>,
    #[arg(long)]
    t_max: Option<f64>,
    #[arg(long, value_enum)]
    grid: Option<GridKind>,
    #[arg(long)]
    points: Option<usize>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long)]
    precision_bits: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; 0 uses every core.
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    shifts: Option<usize>,
    #[arg(long)]
    scan: Option<u64>,
    #[arg(long)]
    slack: Option<f64>,
}

impl Opts {
    fn resolve(self) -> anyhow::Result<SweepConfig> {
        let mut cfg = match &self.config {
            Some(path) => SweepConfig::from_json_file(path)?,
            None => SweepConfig::default(),
        };
        if self.preset.is_some() || self.weights.is_some() {
            cfg.preset = self.preset;
            cfg.weights = self.weights;
        }
        macro_rules! set {
            ($($f:ident),*) => { $(if let Some(v) = self.$f { cfg.$f = v; })* };
        }
        set!(t_min, t_max, grid, points, delta, kappa, precision_bits, seed, jobs, format, shifts, scan, slack);
        if self.out.is_some() {
            cfg.out = self.out;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn emit(table: &Table, cfg: &SweepConfig) -> anyhow::Result<()> {
    match &cfg.out {
        Some(path) => {
            let file = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
            let mut w = BufWriter::new(file);
            table.write(cfg.format, &mut w)?;
            w.flush()?;
        }
        None => table.write(cfg.format, io::stdout().lock())?,
    }
    for f in &table.fits {
        let params: Vec<String> = f.params.iter().map(|p| format!("{} = {:.4} +- {:.4}", p.name, p.value, p.stderr)).collect();
        eprintln!("fit {} {:?} on {} points: {}", f.target, f.model, f.n_points, params.join(", "));
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let (opts, which) = match cli.command {
        Command::Count(o) => (o, 0),
        Command::ErrorSweep(o) => (o, 1),
        Command::Dioph(o) => (o, 2),
        Command::FourierCheck(o) => (o, 3),
        Command::LatticeSum(o) => (o, 4),
        Command::Spencer(o) => (o, 5),
    };
    let cfg = opts.resolve()?;
    let table = match which {
        0 => commands::count(&cfg)?,
        1 => commands::error_sweep(&cfg)?,
        2 => commands::dioph(&cfg)?,
        3 => {
            let (table, failures) = commands::fourier_check(&cfg)?;
            emit(&table, &cfg)?;
            if failures > 0 {
                return Err(IdentityFailure(failures).into());
            }
            return Ok(());
        }
        4 => commands::lattice_sum(&cfg)?,
        _ => commands::spencer(&cfg)?,
    };
    emit(&table, &cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
