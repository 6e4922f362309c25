use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use densecode::commands::{cmd_fig4, cmd_run, cmd_table, cmd_tomo, cmd_validate};
use densecode::config::{load_config, load_noise, ConfigFile};
use densecode::validate::ValidateOptions;
use densecode::{CliError, Layer, Output, OutputFormat, RunConfig};
use densecode_core::{BellVariant, Message};

/// Two-spin dense coding as run on an NMR spectrometer.
#[derive(Debug, Parser)]
#[command(name = "densecode", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the start-state × encoding correspondence table.
    Table(OutputArgs),
    /// Send one message through the network.
    Run(RunArgs),
    /// Element moduli of the four reconstructed outputs, for bar charts.
    Fig4(SimArgs),
    /// Simulate the readout experiments and reconstruct the output state.
    Tomo(RunArgs),
    /// Run the acceptance checks.
    Validate(SimArgs),
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "text")]
    format: OutputFormat,
    /// Write output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SimArgs {
    /// JSON config with optional `spin_system` and `noise` objects.
    #[arg(long)]
    config: Option<PathBuf>,
    /// JSON noise settings; overrides the config's `noise` object.
    #[arg(long)]
    noise: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct RunArgs {
    #[arg(short, long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=4))]
    message: u8,
    #[arg(short, long, default_value = "minus-phi", value_parser = parse_variant)]
    variant: BellVariant,
    #[arg(long, value_enum, default_value = "ideal")]
    layer: Layer,
    #[command(flatten)]
    sim: SimArgs,
}

fn parse_variant(s: &str) -> Result<BellVariant, String> {
    s.parse().map_err(|e| format!("{e}"))
}

impl SimArgs {
    fn resolve(&self, base: RunConfig) -> Result<RunConfig, CliError> {
        let file = match &self.config {
            Some(p) => load_config(p)?,
            None => ConfigFile::default(),
        };
        let noise = match &self.noise {
            Some(p) => Some(load_noise(p)?),
            None => file.noise,
        };
        let sys = file.spin_system.spin_system()?;
        let mut cfg = RunConfig { sys, epsilon: file.spin_system.epsilon, format: self.output.format, ..base };
        if let Some(n) = noise {
            cfg.noise = Some(n.error_params(&sys)?);
            cfg.seed = n.seed;
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        Ok(cfg)
    }
}

impl RunArgs {
    fn resolve(&self) -> Result<RunConfig, CliError> {
        let base = RunConfig {
            layer: self.layer,
            message: Message::new(self.message)?,
            variant: self.variant,
            ..RunConfig::default()
        };
        let cfg = self.sim.resolve(base)?;
        cfg.validate()?;
        Ok(cfg)
    }
}

fn execute(command: &Command) -> Result<(Output, Option<&PathBuf>), CliError> {
    Ok(match command {
        Command::Table(o) => (cmd_table(o.format)?, o.out.as_ref()),
        Command::Run(a) => (cmd_run(&a.resolve()?)?, a.sim.output.out.as_ref()),
        Command::Tomo(a) => (cmd_tomo(&a.resolve()?)?, a.sim.output.out.as_ref()),
        Command::Fig4(s) => (cmd_fig4(&s.resolve(RunConfig::default())?)?, s.output.out.as_ref()),
        Command::Validate(s) => {
            let cfg = s.resolve(RunConfig::default())?;
            let defaults = ValidateOptions::default();
            let opts = ValidateOptions {
                sys: cfg.sys,
                epsilon: cfg.epsilon,
                seed: cfg.seed,
                noise: cfg.noise.unwrap_or(defaults.noise),
            };
            (cmd_validate(&opts, s.output.format), s.output.out.as_ref())
        }
    })
}

fn emit(body: &str, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, body).map_err(|source| CliError::Io { path: path.clone(), source }),
        None => std::io::stdout()
            .write_all(body.as_bytes())
            .map_err(|source| CliError::Io { path: "<stdout>".into(), source }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = execute(&cli.command).and_then(|(output, out)| {
        emit(&output.body, out)?;
        Ok(output.ok)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("densecode: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
