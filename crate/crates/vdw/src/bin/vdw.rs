use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use vdw::sweep::{self, presets, RunOptions, SweepConfig};
use vdw::UnitMode;

#[derive(Parser)]
#[command(name = "vdw", version, about = "Non-equilibrium van der Waals forces between two-level atoms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// sweep configuration file
    #[arg(long)]
    config: Option<PathBuf>,
    /// built-in figure preset, see `vdw presets`
    #[arg(long)]
    preset: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Units {
    Si,
    Natural,
}

#[derive(Subcommand)]
enum Command {
    /// Run a sweep and write a CSV table plus a JSON manifest next to it
    Sweep {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        out: PathBuf,
        /// use the short- and long-range closed forms inside their regimes
        #[arg(long)]
        fast: bool,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long, value_enum)]
        units: Option<Units>,
        /// manifest path; defaults to the CSV path with extension .manifest.json
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
    /// Check a configuration without computing anything
    Validate {
        #[command(flatten)]
        source: Source,
    },
    /// List the built-in figure presets
    Presets,
}

fn load(source: &Source) -> vdw::Result<SweepConfig> {
    match (&source.config, &source.preset) {
        (Some(path), _) => SweepConfig::from_file(path),
        (None, Some(name)) => presets::load(name),
        (None, None) => unreachable!("clap requires one source"),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match cli.command {
        Command::Presets => {
            let mut stdout = std::io::stdout().lock();
            for p in presets::PRESETS {
                let desc = SweepConfig::from_toml(p.text)
                    .map(|c| c.description)
                    .unwrap_or_default();
                // a closed pipe ends the listing
                if writeln!(stdout, "{:<6} {}", p.name, desc).is_err() {
                    break;
                }
            }
            ExitCode::SUCCESS
        }
        Command::Validate { source } => match load(&source).and_then(|c| sweep::resolve(&c)).and_then(|r| sweep::config::report(&r)) {
            Ok(report) => {
                println!("valid\n{report}");
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("invalid configuration:\n{}", e.to_string().trim_start_matches("config: "));
                ExitCode::from(1)
            }
        },
        Command::Sweep {
            source,
            out,
            fast,
            workers,
            units,
            manifest,
        } => {
            let res = match load(&source).and_then(|c| sweep::resolve(&c)) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("invalid configuration:\n{}", e.to_string().trim_start_matches("config: "));
                    return ExitCode::from(1);
                }
            };
            let opts = RunOptions {
                fast,
                workers,
                units: units.map(|u| match u {
                    Units::Si => UnitMode::Si,
                    Units::Natural => UnitMode::Natural,
                }),
                ..Default::default()
            };
            let table = match sweep::run_sweep(&res, &opts) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("{e}");
                    return ExitCode::from(2);
                }
            };
            let written = File::create(&out).and_then(|f| sweep::write_csv(&table, BufWriter::new(f)));
            if let Err(e) = written {
                eprintln!("{}: {e}", out.display());
                return ExitCode::from(2);
            }
            let mpath = manifest.unwrap_or_else(|| out.with_extension("manifest.json"));
            let text = serde_json::to_string_pretty(&sweep::manifest(&res, &opts, &table)).expect("manifest serialises");
            if let Err(e) = std::fs::write(&mpath, text + "\n") {
                eprintln!("{}: {e}", mpath.display());
                return ExitCode::from(2);
            }
            let failed = table.failed_rows();
            if failed > 0 {
                eprintln!("{failed} of {} rows failed; see the status column", table.rows.len());
                return ExitCode::from(2);
            }
            ExitCode::SUCCESS
        }
    }
}
