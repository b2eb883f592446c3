use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use helixforge::{execute, parse_config, Command, Overrides, Window};

#[derive(Debug, Parser)]
#[command(name = "helixforge", version, about = "Verify helix transforms and dimension identities from a TOML config")]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// TOML run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Main index window `a:b`, overriding the config.
    #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
    window: Option<Window>,
    /// RNG seed for random-instance checks, overriding the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Report `timing_ms = 0` so identical inputs give byte-identical reports.
    #[arg(long)]
    no_timing: bool,
}

fn parse_window(s: &str) -> Result<Window, String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("expected a:b, got {s:?}"))?;
    let parse = |x: &str| x.trim().parse::<i64>().map_err(|e| format!("{x:?}: {e}"));
    Ok(Window(parse(a)?, parse(b)?))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let text = match std::fs::read_to_string(&cli.config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("helixforge: cannot read {}: {e}", cli.config.display());
            return ExitCode::from(2);
        }
    };
    let overrides = Overrides { window: cli.window, seed: cli.seed };
    let cfg = match parse_config(&text, cli.command, overrides) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("helixforge: {}: {e}", cli.config.display());
            return ExitCode::from(2);
        }
    };
    let report = execute(cli.command, &cfg, !cli.no_timing);
    let json = report.to_json();
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &json) {
                eprintln!("helixforge: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{json}"),
    }
    ExitCode::from(report.exit_code() as u8)
}
