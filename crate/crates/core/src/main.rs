use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use solab::cli::{self, Format, RunOptions};
use solab::Error;

#[derive(Parser)]
#[command(name = "solab", version, about = "Gradient Ricci almost soliton lab")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the suites listed in a manifest.
    Run {
        manifest: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Tolerance override, e.g. `--tol residual=1e-7`.
        #[arg(long = "tol", value_name = "KEY=VAL", value_parser = parse_tol)]
        tol: Vec<(String, f64)>,
        /// Seed for randomized checks (default: manifest seed, then 42).
        #[arg(long)]
        seed: Option<u64>,
        /// Leave timings out so reports are byte-identical across runs.
        #[arg(long)]
        no_timings: bool,
    },
    /// List the constructors a manifest may name.
    Families,
    /// Write the canonical manifests to the working directory.
    Demo,
}

fn parse_tol(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or("expected KEY=VAL")?;
    let v: f64 = v.parse().map_err(|e| format!("bad value `{v}`: {e}"))?;
    Ok((k.trim().to_string(), v))
}

fn run(args: Args) -> Result<bool, Error> {
    match args.command {
        Command::Run {
            manifest,
            format,
            out,
            tol,
            seed,
            no_timings,
        } => {
            let text = std::fs::read(&manifest)?;
            let m = cli::parse_manifest(&text)?;
            let opts = RunOptions {
                default_resolution: None,
                tolerances: tol.into_iter().collect(),
                seed,
                timings: !no_timings,
            };
            let report = cli::run_suite(&m, &opts)?;
            cli::emit_report(&report, format, out.as_deref())?;
            Ok(report.overall_pass)
        }
        Command::Families => {
            for f in &cli::FAMILIES {
                println!("{:<18} {}", f.name, f.summary);
                println!("{:<18} params: {} (optional: lambda_offset)", "", f.params.join(", "));
            }
            Ok(true)
        }
        Command::Demo => {
            for p in cli::write_demo(&std::env::current_dir()?)? {
                println!("{}", p.display());
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Args::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("solab: {e}");
            ExitCode::from(2)
        }
    }
}
