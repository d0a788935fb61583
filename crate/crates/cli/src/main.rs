//! `expfit` command-line driver.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use commands::Run;
use config::{RunConfig, RunSection};

#[derive(Parser)]
#[command(name = "expfit", version, about = "Exponentially fitted finite elements for drift-diffusion")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Assemble and solve, writing `field.csv` and `summary.txt`.
    Solve(Common),
    /// Sample the reference-element basis into `basis_<j>.csv`.
    Basis(Common),
    /// Run a convergence study into `convergence.csv`.
    Converge {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 4)]
        levels: usize,
    },
    /// Compare basis functions built along different paths.
    Pathdiff(Common),
    /// Print mesh statistics.
    MeshInfo(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides `output.dir`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Single-threaded, deterministic run.
    #[arg(long)]
    serial: bool,
}

fn run(cli: Cli) -> Result<()> {
    let (name, common, levels) = match &cli.command {
        Command::Solve(c) => ("solve", c, None),
        Command::Basis(c) => ("basis", c, None),
        Command::Converge { common, levels } => ("converge", common, Some(*levels)),
        Command::Pathdiff(c) => ("pathdiff", c, None),
        Command::MeshInfo(c) => ("mesh-info", c, None),
    };
    let mut config = RunConfig::load(&common.config)?;
    let levels = levels.or(config.run.as_ref().and_then(|r| r.levels));
    if common.serial {
        rayon::ThreadPoolBuilder::new().num_threads(1).build_global().ok();
    }
    if name == "mesh-info" {
        print!("{}", commands::mesh_info_cmd(&Run { config: &config, out: &PathBuf::new(), serial: common.serial })?);
        return Ok(());
    }
    let out = common.out.clone().unwrap_or_else(|| PathBuf::from(&config.output.dir));
    std::fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;
    config.output.dir = out.to_string_lossy().into_owned();
    config.run = Some(RunSection {
        command: name.into(),
        levels,
    });
    std::fs::write(out.join("manifest.toml"), config.to_toml()).context("writing manifest")?;

    let ctx = Run {
        config: &config,
        out: &out,
        serial: common.serial,
    };
    let report = match name {
        "solve" => commands::solve_cmd(&ctx)?,
        "basis" => commands::basis_cmd(&ctx)?,
        "converge" => commands::converge_cmd(&ctx, levels.unwrap_or(4))?,
        _ => commands::pathdiff_cmd(&ctx)?,
    };
    print!("{report}");
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", format!("{e:#}").replace('\n', " "));
            ExitCode::FAILURE
        }
    }
}
