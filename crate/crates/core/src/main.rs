use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use log::{debug, info};

use dephase::config::{parse_config, RunConfig};
use dephase::figures::{render_svg, reproduce_figure, FigureId};
use dephase::run::{compare_config, critical_times, run_timeseries};
use dephase::error::IoError;
use dephase::{Error, Result};

#[derive(Parser)]
#[command(name = "dephase", version, about = "Correlation dynamics of two qubits crossing a spin array")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve the configured initial state and write the correlation time series as CSV.
    Evolve {
        #[arg(long)]
        config: PathBuf,
        /// Output CSV; falls back to `out=` in the config, then stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Regenerate the datasets behind one of the reference figures (fig1..fig7).
    Figure {
        /// fig1 .. fig7
        id: String,
        #[arg(long)]
        out_dir: PathBuf,
        /// Also render SVG plots next to the CSVs.
        #[arg(long)]
        plot: bool,
    },
    /// Analytic critical times and asymptotic correlations for a c1=±1, c2=∓c3 mixture.
    CriticalTimes {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        c3: f64,
    },
    /// Log-domain deviation between the exact product and the limit engine.
    Compare {
        #[arg(long)]
        config: PathBuf,
    },
}

fn load(path: &Path) -> Result<RunConfig> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Io(IoError(format!("cannot read config {}: {e}", path.display()))))?;
    parse_config(&text)
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::Io(IoError(format!("{}: {e}", path.display()))))
}

fn execute(cmd: Command) -> Result<()> {
    match cmd {
        Command::Evolve { config, out } => {
            let cfg = load(&config)?;
            let csv = run_timeseries(&cfg)?;
            match out.or(cfg.out) {
                Some(path) => {
                    write(&path, &csv)?;
                    info!("wrote {}", path.display());
                }
                None => print!("{csv}"),
            }
        }
        Command::Figure { id, out_dir, plot } => {
            let id: FigureId = id.parse()?;
            let out = reproduce_figure(id)?;
            fs::create_dir_all(&out_dir).map_err(|e| Error::Io(IoError(format!("{}: {e}", out_dir.display()))))?;
            for ds in &out.datasets {
                let path = out_dir.join(&ds.name);
                write(&path, &ds.csv)?;
                info!("wrote {}", path.display());
            }
            if plot {
                for p in &out.plots {
                    let path = out_dir.join(format!("{}.svg", p.name));
                    write(&path, &render_svg(p))?;
                    info!("wrote {}", path.display());
                }
            }
        }
        Command::CriticalTimes { config, c3 } => {
            let cfg = load(&config)?;
            print!("{}", critical_times(&cfg.params, c3)?);
        }
        Command::Compare { config } => {
            let cfg = load(&config)?;
            print!("{}", compare_config(&cfg)?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("DEPHASE_LOG", "error"))
        .target(env_logger::Target::Stderr)
        .init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            debug!("exit code {}", e.exit_code());
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
