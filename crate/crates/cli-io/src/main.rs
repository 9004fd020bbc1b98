use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use cli_io::output::{render_csv, render_json};
use cli_io::{execute, prepare, read_config_source, write_scan, CliError, Config, Experiment, Format};

/// Simulations of driven solid-state spin defects: PLE spectra, LZS maps,
/// optical and spin Rabi, Ramsey/echo and ZEFOZ dispersion.
#[derive(Debug, Parser)]
#[command(name = "stueckelberg", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Configuration file, `.meta` sidecar, or JSON scan with embedded config.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Override one key, e.g. `--set optics.t1_ns=12`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    set: Vec<String>,

    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output file; CSV also writes `<out>.meta`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// csv or json; defaults from the `--out` extension.
    #[arg(long, global = true)]
    format: Option<Format>,

    /// Worker threads for scans; 0 uses all cores.
    #[arg(long, env = "STUECKELBERG_THREADS", default_value_t = 0, global = true)]
    threads: usize,

    /// Spin Rabi on the full three-level space.
    #[arg(long, global = true)]
    full3level: bool,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum Command {
    /// Photoluminescence excitation spectrum, optionally under an ac Stark drive.
    Ple,
    /// Emission map over drive amplitude and laser detuning.
    Lzs,
    /// Emission map over relative phase of a two-tone drive.
    Bichromatic,
    /// Time-resolved emission under a rectangular laser pulse.
    OpticalRabi,
    /// Microwave Rabi oscillation of one ground-state spin transition.
    SpinRabi,
    Ramsey,
    Echo,
    /// ZEFOZ field and transition dispersion around it.
    Zefoz,
    /// Fit a stored scan.
    Fit,
    /// Invariant checks; exits nonzero on any failure.
    Selftest,
}

impl Command {
    fn experiment(self) -> Experiment {
        match self {
            Command::Ple => Experiment::Ple,
            Command::Lzs => Experiment::Lzs,
            Command::Bichromatic => Experiment::Bichromatic,
            Command::OpticalRabi => Experiment::OpticalRabi,
            Command::SpinRabi => Experiment::SpinRabi,
            Command::Ramsey => Experiment::Ramsey,
            Command::Echo => Experiment::Echo,
            Command::Zefoz => Experiment::Zefoz,
            Command::Fit => Experiment::Fit,
            Command::Selftest => Experiment::Selftest,
        }
    }
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    if cli.threads > 0 {
        // Fails only if a pool already exists, which cannot happen here.
        rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global().ok();
    }
    let experiment = cli.command.experiment();
    let base = match &cli.config {
        Some(path) => Config::parse(&read_config_source(path)?)?,
        None => Config::default(),
    };
    let config = prepare(experiment, base, &cli.set, cli.seed, cli.full3level)?;
    let output = execute(experiment, &config)?;
    if let Some(report) = &output.report {
        print!("{report}");
    }
    if let Some(scan) = &output.scan {
        match &cli.out {
            Some(path) => write_scan(scan, cli.format.unwrap_or_else(|| Format::for_path(path)), path)?,
            None if output.report.is_none() => match cli.format.unwrap_or(Format::Csv) {
                Format::Csv => print!("{}", render_csv(scan)),
                Format::Json => print!("{}", render_json(scan)),
            },
            None => {}
        }
    }
    Ok(output.success)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
