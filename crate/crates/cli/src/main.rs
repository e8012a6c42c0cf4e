mod args;
mod commands;
mod error;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command, Format};
use commands::Report;
use error::CliError;
use output::{json_document, RunConfig};

const THREADS_ENV: &str = "ORBENT_THREADS";

fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = value
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Io(format!("thread pool: {e}")))
}

fn params(command: &Command) -> (&'static str, serde_json::Value, bool) {
    match command {
        Command::Formula(a) => ("formula", v(a), false),
        Command::OracleVerify(a) => ("oracle-verify", v(a), false),
        Command::Inspect(a) => ("inspect", v(a), false),
        Command::FreeFermionScan(a) => ("free-fermion-scan", v(a), true),
        Command::Lmin(a) => ("lmin", v(a), true),
        Command::EhmScan(a) => ("ehm-scan", v(a), true),
        Command::Dimer(a) => ("dimer", v(a), false),
        Command::Seniority(a) => ("seniority", v(a), false),
    }
}

fn v<T: serde::Serialize>(args: &T) -> serde_json::Value {
    serde_json::to_value(args).expect("arguments serialize")
}

fn run(cli: &Cli) -> Result<(), CliError> {
    configure_threads()?;
    let (name, params, tabular) = params(&cli.command);
    let g = &cli.global;
    if !(g.tol > 0.0 && g.tol.is_finite()) {
        return Err(CliError::Usage(format!("--tol must be positive, got {}", g.tol)));
    }
    let format = g.format.unwrap_or(if tabular { Format::Csv } else { Format::Json });
    if format == Format::Csv && !tabular {
        return Err(CliError::Usage(format!("`{name}` only writes json")));
    }
    let config = RunConfig {
        command: name,
        params,
        seed: g.seed,
        tol: g.tol,
        units: if g.bits { "bits" } else { "nats" },
        threads: rayon::current_num_threads(),
        format,
        output: g.output.as_ref().map(|p| p.display().to_string()),
    };
    let report = match &cli.command {
        Command::Formula(a) => commands::formula(a, &config),
        Command::OracleVerify(a) => commands::oracle_verify(a, &config),
        Command::Inspect(a) => commands::inspect(a, &config),
        Command::FreeFermionScan(a) => commands::free_fermion_scan(a, &config),
        Command::Lmin(a) => commands::lmin(a, &config),
        Command::EhmScan(a) => commands::ehm_scan(a, &config),
        Command::Dimer(a) => commands::dimer_report(a, &config),
        Command::Seniority(a) => commands::seniority(a, &config),
    }?;
    let (text, failure) = match report {
        Report::Json(v) => (json_document(&config, v), None),
        Report::Failed(v, e) => (json_document(&config, v), Some(e)),
        Report::Table(t) => match format {
            Format::Csv => (t.to_csv(&config), None),
            Format::Json => (t.to_json(&config), None),
        },
    };
    match &g.output {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Io(format!("standard output: {e}")))?;
        }
    }
    failure.map_or(Ok(()), Err)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
