use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use covplan_cli::config::MapSource;
use covplan_cli::{run, FileConfig, Overrides, Result, RunConfig};

/// Battery-constrained coverage path planning on importance grids.
#[derive(Parser)]
#[command(name = "covplan", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Plan one mission and write trajectory.txt, report.txt and render.svg.
    Plan(Common),
    /// Plan every map x base x battery combination and write sweep.csv and sweep.svg.
    Sweep(Common),
    /// Compare the greedy plan with the exhaustive optimum on a small map.
    Oracle(Common),
    /// Re-render and re-score a stored trajectory file.
    Render {
        #[command(flatten)]
        common: Common,
        /// Trajectory file to render.
        #[arg(long)]
        trajectory: PathBuf,
    },
}

#[derive(Args)]
struct Common {
    /// TOML configuration file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Map: `shipped:island`, `shipped:gaussian`, `gaussian:<params>` or a mask file. Repeatable for sweeps.
    #[arg(long)]
    map: Vec<String>,
    /// Gaussian map: `seed=S mean=X,Y cov=A,B,C,D thresholds=H,M,L [size=WxH]`.
    #[arg(long)]
    gaussian: Option<String>,
    /// Base cell `X,Y` (1-based). Repeatable for sweeps.
    #[arg(long)]
    base: Vec<String>,
    /// Starting battery.
    #[arg(long, allow_negative_numbers = true)]
    battery: Option<i64>,
    /// Comma-separated battery list for sweeps.
    #[arg(long)]
    batteries: Option<String>,
    #[arg(long)]
    revisit_penalty: Option<f64>,
    #[arg(long)]
    unspent_penalty: Option<f64>,
    /// Objective weights `A1,A2,A3`.
    #[arg(long)]
    alphas: Option<String>,
    /// Class scores `ZERO,LOW,MEDIUM,HIGH`.
    #[arg(long)]
    scores: Option<String>,
    #[arg(long)]
    cell_size: Option<f64>,
    /// Output directory (render: output SVG file).
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn resolve(&self) -> Result<RunConfig> {
        let overrides = Overrides {
            maps: self.map.clone(),
            gaussian: self.gaussian.clone(),
            bases: self.base.clone(),
            battery: self.battery,
            batteries: self.batteries.clone(),
            revisit_penalty: self.revisit_penalty,
            unspent_penalty: self.unspent_penalty,
            alphas: self.alphas.clone(),
            scores: self.scores.clone(),
            cell_size: self.cell_size,
            out: self.out.clone(),
        };
        match &self.config {
            Some(path) => {
                let file = FileConfig::read(path)?;
                RunConfig::resolve(Some((path, file)), &overrides)
            }
            None => RunConfig::resolve(None, &overrides),
        }
    }
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Plan(common) => {
            let out = run::run_plan(&common.resolve()?)?;
            print!("{}", out.report);
            println!("wrote {}", out.trajectory_path.display());
            println!("wrote {}", out.report_path.display());
            println!("wrote {}", out.render_path.display());
        }
        Command::Sweep(common) => {
            let out = run::run_sweep(&common.resolve()?)?;
            print!("{}", out.csv);
            println!("wrote {}", out.csv_path.display());
            println!("wrote {}", out.chart_path.display());
        }
        Command::Oracle(common) => {
            print!("{}", run::run_oracle(&common.resolve()?)?);
        }
        Command::Render { common, trajectory } => {
            let cfg = common.resolve()?;
            let map: Option<MapSource> = match cfg.maps.as_slice() {
                [] => None,
                [one] => Some(one.clone()),
                _ => {
                    return Err(covplan_cli::CliError::Config(
                        "render takes at most one map".into(),
                    ))
                }
            };
            let out = common
                .out
                .clone()
                .unwrap_or_else(|| trajectory.with_extension("svg"));
            print!(
                "{}",
                run::render_stored(&trajectory, map.as_ref(), &cfg, &out)?
            );
            println!("wrote {}", out.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
