use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use codim_one::error::Error;
use codim_one::groebner::{GbConfig, DEFAULT_MAX_SPAIRS};
use codim_one::polycore::Field;
use codim_one::session::paper::{paper_session, PAPER_SESSIONS};
use codim_one::session::{
    parse_session, render_report, resolve, run_session, Format, Resolved, RunOptions,
};

#[derive(Parser)]
#[command(name = "codim-one", version, about = "Superheight bounds and affineness of D(a)")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run every task in a session file.
    Run {
        file: PathBuf,
        #[command(flatten)]
        flags: RunFlags,
    },
    /// Parse and resolve a session file without running its tasks.
    Check { file: PathBuf },
    /// Run a bundled example session.
    Paper {
        id: String,
        #[command(flatten)]
        flags: RunFlags,
    },
}

#[derive(Args)]
struct RunFlags {
    /// text or json-lines
    #[arg(long, default_value = "text")]
    format: Format,
    /// Cap on S-pair reductions per Groebner basis.
    #[arg(long, default_value_t = DEFAULT_MAX_SPAIRS)]
    max_spairs: u64,
    /// q, or fp:<p> to cross-check memberships modulo p.
    #[arg(long, default_value = "q", value_parser = parse_field)]
    field: Prefilter,
    #[arg(long)]
    verbose: bool,
}

#[derive(Clone, Copy)]
struct Prefilter(Option<u32>);

fn parse_field(s: &str) -> Result<Prefilter, String> {
    if s == "q" {
        return Ok(Prefilter(None));
    }
    let p = s
        .strip_prefix("fp:")
        .ok_or_else(|| format!("expected `q` or `fp:<p>`, found `{s}`"))?;
    let p: u32 = p.parse().map_err(|_| format!("`{p}` is not a prime"))?;
    Field::prime(p).map_err(|e| e.to_string())?;
    Ok(Prefilter(Some(p)))
}

fn load(text: &str, cfg: &GbConfig) -> Result<Resolved, Error> {
    resolve(&parse_session(text)?, cfg)
}

fn load_error(origin: &str, e: Error) -> ExitCode {
    eprintln!("{origin}:{e}");
    match e {
        Error::ComputationTooLarge { .. } => ExitCode::from(4),
        _ => ExitCode::from(1),
    }
}

fn run(origin: &str, text: &str, flags: &RunFlags) -> ExitCode {
    let cfg = GbConfig {
        max_spairs: flags.max_spairs,
        prefilter: flags.field.0,
        ..GbConfig::default()
    };
    let resolved = match load(text, &cfg) {
        Ok(r) => r,
        Err(e) => return load_error(origin, e),
    };
    let report = run_session(
        &resolved,
        &RunOptions {
            cfg,
            verbose: flags.verbose,
        },
    );
    print!("{}", render_report(&report, flags.format));
    ExitCode::from(report.exit_code() as u8)
}

fn read(file: &PathBuf) -> Result<String, ExitCode> {
    std::fs::read_to_string(file).map_err(|e| {
        eprintln!("{}: {e}", file.display());
        ExitCode::from(1)
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match cli.cmd {
        Cmd::Run { file, flags } => match read(&file) {
            Ok(text) => run(&file.display().to_string(), &text, &flags),
            Err(c) => c,
        },
        Cmd::Check { file } => {
            let text = match read(&file) {
                Ok(t) => t,
                Err(c) => return c,
            };
            match load(&text, &GbConfig::default()) {
                Ok(r) => {
                    println!(
                        "{}: ok, {} declarations, {} tasks",
                        file.display(),
                        r.len(),
                        r.tasks.len()
                    );
                    ExitCode::SUCCESS
                }
                Err(e) => load_error(&file.display().to_string(), e),
            }
        }
        Cmd::Paper { id, flags } => match paper_session(&id) {
            Some(text) => run(&format!("paper/{id}"), text, &flags),
            None => {
                eprintln!("unknown example `{id}`; available:");
                for (k, _) in PAPER_SESSIONS {
                    eprintln!("  {k}");
                }
                ExitCode::from(1)
            }
        },
    }
}
