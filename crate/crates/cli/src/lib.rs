//! Command-line front end of `jetvar`: a TOML problem-file loader, the
//! commands, and plain-text/LaTeX/JSON emitters.
//!
//! Exit codes: 0 success, 1 engine error, 2 parse error, 3 when `derive`
//! disagrees with the reference equation of a fixture.

pub mod commands;
pub mod problem_file;
pub mod render;

use std::ffi::OsString;

use clap::{Parser, Subcommand};

use commands::{Common, Done, Status};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error(transparent)]
    Engine(#[from] jetvar::Error),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Engine(e) if e.is_parse_error() => 2,
            CliError::Engine(_) | CliError::Io(_) => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "jetvar", version, about = "Variational calculus on jet bundles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Euler–Lagrange expressions of the Lagrangian.
    El(Common),
    /// Poincaré–Cartan form.
    Pc(Common),
    /// Full Lepage equivalent (Krupka–Betounes for first order).
    Kb(Common),
    /// Whether a form is Lepage; prints the Euler–Lagrange expressions of p1 d(form).
    LepageCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "kb")]
        form: String,
    },
    /// Noether current of a projectable vector field.
    Noether {
        #[command(flatten)]
        common: Common,
        /// A vector field from the problem file, or translate_<coord>, shift_<field>, scale.
        #[arg(long)]
        field: String,
    },
    /// Field equations after eliminating auxiliary fields.
    Derive(Common),
    /// Contact components of a form, e.g. `--form "d(kb)" --k 1`.
    Decompose {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        form: String,
        #[arg(long)]
        k: Option<usize>,
    },
}

/// What a run printed and how it exited.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub exit_code: u8,
    pub stdout: String,
    pub stderr: String,
}

fn dispatch(command: &Command) -> Result<Done, CliError> {
    match command {
        Command::El(c) => commands::el(c),
        Command::Pc(c) => commands::pc(c),
        Command::Kb(c) => commands::kb(c),
        Command::LepageCheck { common, form } => commands::lepage_check(common, form),
        Command::Noether { common, field } => commands::noether(common, field),
        Command::Derive(c) => commands::derive(c),
        Command::Decompose { common, form, k } => commands::decompose(common, form, *k),
    }
}

/// Runs the command line `args` (program name first) without touching the
/// process streams.
pub fn execute<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let code = e.exit_code() as u8;
            let (stdout, stderr) = if code == 0 { (text, String::new()) } else { (String::new(), text) };
            return Outcome {
                exit_code: code,
                stdout,
                stderr,
            };
        }
    };
    match dispatch(&cli.command) {
        Ok((Status::Ok, stdout)) => Outcome {
            exit_code: 0,
            stdout,
            stderr: String::new(),
        },
        Ok((Status::Mismatch(msg), stdout)) => Outcome {
            exit_code: 3,
            stdout,
            stderr: format!("{msg}\n"),
        },
        Err(e) => Outcome {
            exit_code: e.exit_code(),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}
