use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use swssb_cli::{parse_config, run, CliError, CliResult, ExperimentConfig, Format};

#[derive(Parser)]
#[command(name = "swssb", version, about = "Strong-to-weak symmetry breaking diagnostics")]
struct Cli {
    /// Master seed; overrides `seed` in the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output table path; metadata goes to `<out>.meta.json`. Stdout otherwise.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "csv")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Runs whichever backend the config names.
    Run { config: PathBuf },
    /// Dense correlators of a reference state.
    Exact { config: PathBuf },
    /// Stabilizer correlators from syndrome statistics.
    Stab { config: PathBuf },
    /// Error-chain correlators of the dephased Ising model.
    Ising { config: PathBuf },
    /// Same-cluster frequencies of the percolation ensemble.
    Perc { config: PathBuf },
    /// Free-fermion transverse-field Ising chain.
    Tfim {
        #[command(subcommand)]
        action: TfimAction,
    },
    /// Cross-checks the backends on random small instances.
    Compare {
        config: Option<PathBuf>,
        #[arg(long)]
        instances: Option<usize>,
    },
    /// Prints the canonical form of a config.
    CheckConfig { config: PathBuf },
}

#[derive(Subcommand)]
enum TfimAction {
    /// R1 over a temperature by field grid; the full default grid without a config.
    Sweep { config: Option<PathBuf> },
}

fn load(path: &PathBuf) -> CliResult<ExperimentConfig> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
    parse_config(&text)
}

fn expect_backend(cfg: ExperimentConfig, name: &str) -> CliResult<ExperimentConfig> {
    if cfg.backend.name() != name {
        return Err(CliError::Validation(format!(
            "`{name}` needs a [{name}] section, the config has [{}]",
            cfg.backend.name()
        )));
    }
    Ok(cfg)
}

fn execute(cli: Cli) -> CliResult<usize> {
    let mut cfg = match &cli.command {
        Command::Run { config } => load(config)?,
        Command::Exact { config } => expect_backend(load(config)?, "exact")?,
        Command::Stab { config } => expect_backend(load(config)?, "stab")?,
        Command::Ising { config } => expect_backend(load(config)?, "ising")?,
        Command::Perc { config } => expect_backend(load(config)?, "perc")?,
        Command::Tfim {
            action: TfimAction::Sweep { config },
        } => match config {
            Some(c) => expect_backend(load(c)?, "tfim")?,
            None => parse_config("[tfim]\n")?,
        },
        Command::Compare { config, instances } => {
            let mut cfg = match config {
                Some(c) => expect_backend(load(c)?, "compare")?,
                None => parse_config("[run]\nseed = 0\n[compare]\n")?,
            };
            if let (Some(k), swssb_cli::BackendConfig::Compare(c)) = (instances, &mut cfg.backend) {
                c.instances = *k;
            }
            cfg
        }
        Command::CheckConfig { config } => {
            print!("{}", load(config)?);
            return Ok(0);
        }
    };
    if cli.seed.is_some() {
        cfg.seed = cli.seed;
    }
    let out = run(&cfg, cli.threads)?;
    let bytes = out.table.to_bytes(cli.format)?;
    let meta = serde_json::to_string_pretty(&out.metadata)
        .map_err(|e| CliError::Output(e.to_string()))?;
    let io = |e: io::Error| CliError::Output(e.to_string());
    match &cli.out {
        Some(path) => {
            fs::write(path, &bytes).map_err(io)?;
            let mut meta_path = path.clone().into_os_string();
            meta_path.push(".meta.json");
            fs::write(meta_path, meta + "\n").map_err(io)?;
        }
        None => {
            io::stdout().write_all(&bytes).map_err(io)?;
            eprintln!("{meta}");
        }
    }
    Ok(out.failures)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(cli) {
        Ok(0) => ExitCode::SUCCESS,
        Ok(n) => {
            eprintln!("error: {}", CliError::Discrepancy(n));
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
