use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use superrad::commands;
use superrad::config::{parse_n_list, RatioGrid, RunConfig};
use superrad::Result;

#[derive(Parser)]
#[command(name = "superrad", version, about = "Collective cross-cavity superradiance simulations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Steady-state intensities, inversion and Casimirs over N and W/Γc.
    Steady(Common),
    /// Zero-delay g2 and intensity fluctuations of both cavities.
    G2(Common),
    /// Quantum trajectories with the optimal-generator QFI.
    Traj(Common),
    /// Coherent information of steady states (full basis, small N).
    Entropy(Common),
    /// Effective rates and bad-cavity checks from cavity parameters.
    Rates(Common),
    /// Large-N extrapolation of a written steady.csv.
    Fit {
        #[command(flatten)]
        common: Common,
        /// steady.csv produced by the `steady` command.
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Args)]
struct Common {
    /// TOML config, or a run manifest whose config is reused.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    workers: Option<usize>,
    /// Comma-separated atom counts.
    #[arg(long)]
    n: Option<String>,
    /// `min,max,count` of the log-spaced W/Γc grid.
    #[arg(long)]
    ratio_grid: Option<String>,
    /// Run atom counts beyond the size guards.
    #[arg(long)]
    override_guards: bool,
}

impl Common {
    fn config(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(w) = self.workers {
            cfg.workers = Some(w);
        }
        if let Some(n) = &self.n {
            cfg.n = parse_n_list(n)?;
        }
        if let Some(g) = &self.ratio_grid {
            cfg.ratio_grid = RatioGrid::parse(g)?;
        }
        cfg.override_guards |= self.override_guards;
        cfg.validate()?;
        Ok(cfg)
    }
}

fn run(cli: Cli) -> Result<()> {
    let manifest = match &cli.command {
        Command::Steady(c) => commands::steady::run(&c.config()?, &c.out)?,
        Command::G2(c) => commands::g2::run(&c.config()?, &c.out)?,
        Command::Traj(c) => commands::traj::run(&c.config()?, &c.out)?,
        Command::Entropy(c) => commands::entropy::run(&c.config()?, &c.out)?,
        Command::Rates(c) => commands::rates::run(&c.config()?, &c.out)?,
        Command::Fit { common, input } => commands::fit::run(&common.config()?, input, &common.out)?,
    };
    for out in &manifest.outputs {
        println!("{} ({} rows)", out.path, out.rows);
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
