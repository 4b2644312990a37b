//! Command-line front end: load a configuration, run the verification
//! suites and emit the structured report.
//!
//! Exit codes: 0 when every requested suite passes, 1 when a suite fails,
//! 2 on usage or configuration errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use smverify::config::RunConfig;
use smverify::connections::{ConnectionSet, PhysConstants};
use smverify::manifold::Chart;
use smverify::runner;

#[derive(Parser)]
#[command(
    name = "smverify",
    version,
    about = "Verify gauge-field, symmetry-breaking and matter-sector identities over a curved space-time chart"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the verification suites described by a configuration file.
    Run {
        /// Path to the JSON configuration.
        #[arg(long)]
        config: PathBuf,
        /// Run only the named suites (repeatable); overrides the config.
        #[arg(long = "suite")]
        suites: Vec<String>,
        /// Override the grid extents to N points per axis.
        #[arg(long)]
        grid: Option<usize>,
        /// Write the report to this path instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the built-in chart, vacuum and constants presets.
    ListPresets,
    /// Print the default configuration.
    PrintConfig,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run {
            config,
            suites,
            grid,
            out,
        } => run_command(config, suites, grid, out),
        Command::ListPresets => {
            list_presets();
            ExitCode::SUCCESS
        }
        Command::PrintConfig => {
            println!(
                "{}",
                serde_json::to_string_pretty(&RunConfig::default()).expect("default serializes")
            );
            ExitCode::SUCCESS
        }
    }
}

fn run_command(
    config_path: PathBuf,
    suites: Vec<String>,
    grid: Option<usize>,
    out: Option<PathBuf>,
) -> ExitCode {
    let text = match std::fs::read_to_string(&config_path) {
        Ok(text) => text,
        Err(err) => {
            eprintln!("error: cannot read {}: {err}", config_path.display());
            return ExitCode::from(2);
        }
    };
    let mut config = match RunConfig::from_json(&text) {
        Ok(config) => config,
        Err(err) => {
            eprintln!("error: {err}");
            return ExitCode::from(2);
        }
    };
    if !suites.is_empty() {
        config.suites = suites;
    }
    if let Some(n) = grid {
        config.chart.extents = [n; 4];
    }

    let report = match runner::run(&config) {
        Ok(report) => report,
        Err(err) => {
            eprintln!("error: {err}");
            return ExitCode::from(2);
        }
    };

    let json = report.to_json();
    if let Some(path) = out {
        if let Err(err) = std::fs::write(&path, &json) {
            eprintln!("error: cannot write {}: {err}", path.display());
            return ExitCode::from(2);
        }
    } else {
        println!("{json}");
    }

    for (name, suite) in &report.suites {
        eprintln!("{name}: {}", suite.status);
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn list_presets() {
    println!("chart presets:");
    for (name, desc) in Chart::preset_catalog() {
        println!("  {name}: {desc}");
    }
    println!("vacuum presets:");
    for (name, desc) in ConnectionSet::vacuum_catalog() {
        println!("  {name}: {desc}");
    }
    println!("constants presets:");
    for (name, desc) in PhysConstants::catalog() {
        println!("  {name}: {desc}");
    }
}
