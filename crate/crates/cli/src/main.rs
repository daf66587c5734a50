use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use radicals_cli::{
    cmd_abelize, cmd_builtin, cmd_character, cmd_obstruct, cmd_symmetrize, cmd_verify, Outcome, DEFAULT_MAX_DEGREE,
    EXIT_INPUT,
};

#[derive(Parser)]
#[command(name = "radicals", version, about = "Exact checks of radical formulas for polynomial roots")]
struct Cli {
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Refuse to expand polynomials of larger total degree.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_DEGREE)]
    max_degree: u32,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check every identity of a formula document (exit 0 pass, 1 fail, 2 bad input).
    Verify {
        /// Formula document (scheme, polyformula or towerformula).
        input: PathBuf,
    },
    /// Diagnose a candidate formula of degree n >= 5.
    Obstruct {
        /// Polyformula document.
        input: PathBuf,
    },
    /// Character of f under even permutations, e.g. "(1 2 3)".
    Character {
        /// Polynomial in x1..xn whose q-th power is even-symmetric.
        f: String,
        /// Prime exponent.
        #[arg(long)]
        q: u32,
        /// Cycle notation; defaults to the generators (1 2 m).
        #[arg(long = "perm")]
        perms: Vec<String>,
        /// Number of roots; defaults to the largest index in f.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Express a symmetric polynomial in x1..xn through s1..sn.
    Symmetrize {
        /// Symmetric polynomial in x1..xn.
        f: String,
        /// Number of roots; defaults to the largest index in f.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Make every radical of a tower formula a polynomial in the roots.
    Abelize {
        /// Towerformula document with a witness for every level.
        input: PathBuf,
    },
    /// Print a built-in formula: degree2 or degree3.
    Builtin {
        /// degree2 or degree3.
        name: String,
        /// Emit the tower form.
        #[arg(long)]
        tower: bool,
    },
}

fn read(path: &Path) -> Result<String, Outcome> {
    fs::read_to_string(path).map_err(|e| Outcome {
        code: EXIT_INPUT,
        stdout: String::new(),
        stderr: format!("error: cannot read {}: {e}\n", path.display()),
    })
}

fn run(cli: &Cli) -> Outcome {
    let text = |p: &Path| read(p);
    let result = match &cli.command {
        Command::Verify { input } => text(input).map(|t| cmd_verify(&t, cli.seed, cli.max_degree)),
        Command::Obstruct { input } => text(input).map(|t| cmd_obstruct(&t, cli.max_degree)),
        Command::Character { f, q, perms, n } => Ok(cmd_character(f, *q, perms, *n)),
        Command::Symmetrize { f, n } => Ok(cmd_symmetrize(f, *n, cli.max_degree)),
        Command::Abelize { input } => text(input).map(|t| cmd_abelize(&t)),
        Command::Builtin { name, tower } => Ok(cmd_builtin(name, *tower)),
    };
    result.unwrap_or_else(|o| o)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = run(&cli);
    let written = match &cli.output {
        Some(path) => fs::write(path, &out.stdout),
        None => io::stdout().write_all(out.stdout.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write report: {e}");
        return ExitCode::from(EXIT_INPUT as u8);
    }
    eprint!("{}", out.stderr);
    ExitCode::from(out.code as u8)
}
