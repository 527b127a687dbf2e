use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use reslie_cli::goldens::{run_goldens, Status};
use reslie_cli::{load_modulus_table, run_file, CliError, Overrides, MODULUS_TABLE_VAR};

#[derive(Parser)]
#[command(name = "reslie", version, about = "Restricted Lie algebra scenarios over finite fields")]
struct Cli {
    /// Largest module dimension a task may build.
    #[arg(long, global = true, value_name = "N")]
    guard_dim: Option<usize>,
    /// JSON list of {p, k, modulus} fixing the field moduli.
    #[arg(long, global = true, env = MODULUS_TABLE_VAR, value_name = "PATH")]
    modulus_table: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and print its report.
    Run {
        file: PathBuf,
        /// Also write the canonical JSON report here.
        #[arg(long, value_name = "JSON")]
        out: Option<PathBuf>,
        #[arg(long, value_name = "N")]
        seed: Option<u64>,
        /// Print the canonical JSON instead of the text report.
        #[arg(long)]
        json: bool,
    },
    /// Compare every scenario in a directory with its expected report.
    Goldens {
        dir: PathBuf,
        /// Rewrite the expected reports instead of comparing.
        #[arg(long)]
        update: bool,
    },
}

fn fail(e: &CliError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(e.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(path) = &cli.modulus_table {
        if let Err(e) = load_modulus_table(path) {
            return fail(&e);
        }
    }
    match cli.command {
        Command::Run { file, out, seed, json } => {
            let overrides = Overrides {
                seed,
                guard_dim: cli.guard_dim,
            };
            let (report, elapsed) = match run_file(&file, overrides) {
                Ok(r) => r,
                Err(e) => return fail(&e),
            };
            let canonical = report.canonical();
            if json {
                print!("{canonical}");
            } else {
                print!("{}", report.render(elapsed));
            }
            if let Some(path) = out {
                if let Err(e) = std::fs::write(&path, &canonical) {
                    return fail(&CliError::io(path, e));
                }
            }
            if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(4)
            }
        }
        Command::Goldens { dir, update } => {
            if cli.guard_dim.is_some() {
                eprintln!("note: --guard-dim is ignored by goldens; scenarios carry their own guards");
            }
            let cases = match run_goldens(&dir, update) {
                Ok(c) => c,
                Err(e) => return fail(&e),
            };
            let mut bad = 0;
            for c in &cases {
                match &c.status {
                    Status::Pass => println!("ok       {}", c.name),
                    Status::Updated => println!("updated  {}", c.name),
                    Status::Failed(msg) => {
                        bad += 1;
                        println!("FAILED   {}: {msg}", c.name);
                    }
                    Status::Mismatch(d) => {
                        bad += 1;
                        println!("MISMATCH {}", c.name);
                        for x in d {
                            println!("    {x}");
                        }
                    }
                }
            }
            println!("{} cases, {} passed, {bad} failed", cases.len(), cases.len() - bad);
            if bad == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
    }
}
