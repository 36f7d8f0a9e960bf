use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rapidec_cli::{load, presets, run, summary_table, RunOptions, EXIT_CONFIG};

#[derive(Parser)]
#[command(name = "rapidec", version, about = "Seminorm asymptotics and characterization checks for nets")]
struct Cli {
    /// Worker threads for the numerical sweeps (defaults to all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file or a bundled preset.
    Run {
        /// Path to a .cfg file or a preset name.
        config: String,
        /// Output directory (overrides `out_dir` in the file).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Omit the generation timestamp and timings so outputs are byte-stable.
        #[arg(long)]
        no_timestamp: bool,
    },
    /// List bundled presets.
    ListPresets,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: --jobs: {e}");
            return ExitCode::from(EXIT_CONFIG as u8);
        }
    }
    match cli.command {
        Command::ListPresets => {
            print!("{}", presets::listing());
            ExitCode::SUCCESS
        }
        Command::Run {
            config,
            out,
            no_timestamp,
        } => {
            let cfg = match load(&config) {
                Ok(c) => c,
                Err(e) => {
                    eprint!("error: {e}");
                    if !e.to_string().ends_with('\n') {
                        eprintln!();
                    }
                    return ExitCode::from(EXIT_CONFIG as u8);
                }
            };
            let out_dir = out
                .or_else(|| cfg.out_dir.clone())
                .unwrap_or_else(|| PathBuf::from("out").join(config.trim_end_matches(".cfg").rsplit('/').next().unwrap_or("run")));
            let opts = RunOptions {
                out_dir,
                timestamp: (!no_timestamp).then(|| chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)),
            };
            match run(&cfg, &opts) {
                Ok(report) => {
                    print!("{}", summary_table(&report));
                    println!("artifacts: {}", opts.out_dir.display());
                    ExitCode::from(report.exit_code() as u8)
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(EXIT_CONFIG as u8)
                }
            }
        }
    }
}
