use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use blaschke_cli::commands::{reproduce_paper, run_command};
use blaschke_cli::config::{parse_config, MapConfig, RunConfig, COMMANDS};
use blaschke_cli::error::CliError;
use clap::Parser;

/// Exact and numerical study of two-variable Blaschke products.
#[derive(Parser, Debug)]
#[command(name = "blaschke", version)]
struct Args {
    /// One of classify, lift, degrees, indeterminacy, topdeg,
    /// preimage-measure, torus-entropy, winding, reproduce-paper.
    /// Falls back to `command` in the config file.
    command: Option<String>,
    /// TOML run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides `params.seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Output file; a directory for reproduce-paper.
    #[arg(long)]
    out: Option<PathBuf>,
    /// json or csv.
    #[arg(long)]
    format: Option<String>,
}

fn run(args: Args) -> Result<(), CliError> {
    let mut cfg = match &args.config {
        Some(p) => parse_config(&fs::read_to_string(p)?)?,
        None => RunConfig::for_map(MapConfig {
            family: Some("low-top-degree".into()),
            ..MapConfig::default()
        }),
    };
    if let Some(s) = args.seed {
        cfg.params.seed = s;
    }
    if let Some(f) = args.format {
        cfg.output.format = Some(f);
    }
    if let Some(o) = &args.out {
        cfg.output.path = Some(o.display().to_string());
    }
    let command = args
        .command
        .or_else(|| cfg.command.clone())
        .ok_or_else(|| CliError::Validation {
            code: "MissingCommand".into(),
            message: format!("no command given; expected one of {}", COMMANDS.join(", ")),
        })?;
    cfg.command = Some(command.clone());
    cfg.validate()?;
    let format = cfg.output.format.clone().unwrap_or_else(|| "json".into());

    if command == "reproduce-paper" {
        let dir = PathBuf::from(cfg.output.path.clone().unwrap_or_else(|| "reproduction".into()));
        let report = reproduce_paper(&dir, cfg.params.seed)?;
        print!("{}", report.render(&format)?);
        return Ok(());
    }
    let text = run_command(&command, &cfg)?.render(&format)?;
    match &cfg.output.path {
        Some(p) => fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Args::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", serde_json::to_string_pretty(&e.to_json()).expect("error serializes"));
            ExitCode::from(e.exit_code())
        }
    }
}
