mod args;
mod commands;
mod config;
mod manifest;
mod report;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use config::RunConfig;
use lucas_ez::Execution;
use manifest::RunManifest;

const EXIT_INVALID: u8 = 2;
const EXIT_STATISTICAL: u8 = 3;
const EXIT_UNIT_PSI: u8 = 4;

fn exit_code_for(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<lucas_ez::Error>() {
        Some(lucas_ez::Error::UnitPsi { .. }) => EXIT_UNIT_PSI,
        _ => EXIT_INVALID,
    }
}

fn resolve(cli: &Cli) -> anyhow::Result<RunConfig> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &cli.command.common().config {
        cfg.merge_file(path)?;
    }
    cli.command.apply(&mut cfg);
    Ok(cfg)
}

fn configure_threads(cfg: &RunConfig, warnings: &mut Vec<String>) -> anyhow::Result<()> {
    let Some(n) = cfg.threads else {
        return Ok(());
    };
    if n == 0 {
        anyhow::bail!("InvalidThreads: --threads must be at least 1");
    }
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| anyhow::anyhow!("thread pool: {e}"))?;
    #[cfg(not(feature = "parallel"))]
    warnings.push(format!("built without the parallel feature; --threads {n} has no effect"));
    let _ = warnings;
    Ok(())
}

fn run(command: &Command, cfg: &RunConfig, warnings: &mut Vec<String>) -> anyhow::Result<commands::Outcome> {
    configure_threads(cfg, warnings)?;
    let outcome = match command {
        Command::Solve { .. } => commands::solve_cmd(cfg),
        Command::Verify { .. } => commands::verify_cmd(cfg),
        Command::Sweep { .. } => commands::sweep_cmd(cfg),
        Command::Panic { .. } => commands::panic_cmd(cfg),
        Command::Simulate { .. } => commands::simulate_cmd(cfg),
    }?;
    match &cfg.output {
        Some(path) => std::fs::write(path, &outcome.stdout)
            .map_err(|e| anyhow::anyhow!("IoFailure: {path}: {e}"))?,
        None => std::io::stdout()
            .lock()
            .write_all(&outcome.stdout)
            .map_err(|e| anyhow::anyhow!("IoFailure: stdout: {e}"))?,
    }
    Ok(outcome)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match resolve(&cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(EXIT_INVALID);
        }
    };

    let mut warnings = Vec::new();
    let result = run(&cli.command, &cfg, &mut warnings);
    let (code, checks, error) = match result {
        Ok(outcome) => {
            warnings.extend(outcome.warnings.iter().cloned());
            let code = if outcome.all_pass() { 0 } else { EXIT_STATISTICAL };
            (code, outcome.checks, None)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            (exit_code_for(&e), Vec::new(), Some(format!("{e:#}")))
        }
    };
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    for c in checks.iter().filter(|c| !c.pass) {
        eprintln!("check failed: {}", c.name);
    }

    let manifest = RunManifest {
        tool: env!("CARGO_BIN_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        command: cli.command.name(),
        config: &cfg,
        rng_algorithm: lucas_ez::rng::RNG_ALGORITHM,
        seed: cfg.seed,
        execution: Execution::default().to_string(),
        timestamp: chrono::Utc::now().to_rfc3339(),
        checks: &checks,
        warnings: &warnings,
        exit_code: code.into(),
        error,
    };
    if let Err(e) = manifest.write(&cfg.manifest) {
        eprintln!("error: IoFailure: cannot write manifest {}: {e}", cfg.manifest);
        return ExitCode::from(EXIT_INVALID);
    }
    ExitCode::from(code)
}
