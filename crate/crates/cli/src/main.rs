use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use foliation_cli::corpus::{run_corpus, run_source};
use foliation_cli::report::Options;
use foliation_cli::run::{worse, EXIT_USAGE};
use foliation_cli::script::{parse, pretty};

#[derive(Parser)]
#[command(name = "foliation-kit", version, about = "Exact checks for germs of polynomial foliations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct RunOptions {
    /// Emit the JSON report instead of text.
    #[arg(long)]
    json: bool,
    /// Truncation order for normal-form units.
    #[arg(long, default_value_t = 8)]
    order: u32,
    /// Search bound for nonnegative resonances.
    #[arg(long, default_value_t = 50)]
    bound: u64,
    /// Random members sampled by pencil commands.
    #[arg(long, default_value_t = 20)]
    samples: usize,
    /// Seed of the random stream.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl RunOptions {
    fn options(&self) -> Options {
        Options {
            order: self.order,
            bound: self.bound,
            samples: self.samples,
            seed: self.seed,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run a .fol script.
    Run {
        script: PathBuf,
        #[command(flatten)]
        opts: RunOptions,
    },
    /// Run the shipped regression corpus.
    Corpus {
        #[command(flatten)]
        opts: RunOptions,
    },
    /// Print a script in normalised form.
    Fmt { script: PathBuf },
}

fn read(path: &PathBuf) -> Result<String, ExitCode> {
    std::fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        ExitCode::from(EXIT_USAGE as u8)
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { script, opts } => {
            let src = match read(&script) {
                Ok(s) => s,
                Err(c) => return c,
            };
            let name = script.file_name().map_or_else(|| script.display().to_string(), |n| n.to_string_lossy().into());
            match run_source(&name, &src, &opts.options()) {
                Ok((report, _)) => {
                    if opts.json {
                        println!("{}", report.to_json());
                    } else {
                        print!("{}", report.to_text());
                    }
                    ExitCode::from(report.exit_code as u8)
                }
                Err(e) => {
                    eprintln!("{}: {e}", script.display());
                    ExitCode::from(EXIT_USAGE as u8)
                }
            }
        }
        Command::Corpus { opts } => {
            let reports = run_corpus(&opts.options());
            let worst = reports.iter().fold(0, |acc, r| worse(acc, r.exit_code));
            if opts.json {
                println!("{}", serde_json::to_string_pretty(&reports).expect("serialisable reports"));
            } else {
                for r in &reports {
                    let expects = r.results.iter().filter(|c| c.expect.is_some()).count();
                    let matched = r.results.iter().filter(|c| c.matched == Some(true)).count();
                    println!(
                        "{:<28} {:>3} commands  {:>3}/{:<3} expectations met  exit {}",
                        r.script,
                        r.results.len(),
                        matched,
                        expects,
                        r.exit_code
                    );
                }
            }
            ExitCode::from(worst as u8)
        }
        Command::Fmt { script } => {
            let src = match read(&script) {
                Ok(s) => s,
                Err(c) => return c,
            };
            match parse(&src) {
                Ok(s) => {
                    print!("{}", pretty(&s));
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("{}: {e}", script.display());
                    ExitCode::from(EXIT_USAGE as u8)
                }
            }
        }
    }
}
