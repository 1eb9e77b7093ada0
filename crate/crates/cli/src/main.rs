//! `qcc`: command-line front end for the qcluster workbench.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error,
//! 3 enumeration bound exceeded.

mod cache;
mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{
    CharArgs, Identity, MutateArgs, Oracle, OracleQuery, Outcome, PolicyArg, Status, VerifyArgs,
};
use qcluster::{Error, Exec};

#[derive(Parser, Debug)]
#[command(name = "qcc", version, about = "Quantum cluster algebra workbench")]
struct Cli {
    /// Run every loop on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
    /// Directory of cached outputs, keyed by a hash of the command and quiver.
    #[arg(long, global = true, value_name = "DIR")]
    cache: Option<PathBuf>,
    /// File receiving the report of failing instances.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Quantum seed operations.
    Seed {
        #[command(subcommand)]
        op: SeedOp,
    },
    /// Rank-2 cluster variables.
    Rank2 {
        #[command(subcommand)]
        op: Rank2Op,
    },
    /// Quantum cluster characters.
    Cc {
        #[command(subcommand)]
        op: CcOp,
    },
    /// Batch verification of an identity.
    Verify {
        which: Identity,
        #[command(flatten)]
        args: VerifyArgs,
    },
    /// Rank-2 basis checks.
    Basis {
        #[command(subcommand)]
        op: BasisOp,
    },
    /// Finite-field counts.
    Oracle {
        which: Oracle,
        #[command(flatten)]
        args: OracleQuery,
    },
}

#[derive(Subcommand, Debug)]
enum SeedOp {
    /// Mutate the initial seed along a sequence of directions.
    Mutate(MutateArgs),
}

#[derive(Subcommand, Debug)]
enum Rank2Op {
    /// Cluster variables `X_from..=X_to` of the rank-2 recursion.
    #[command(allow_negative_numbers = true)]
    Vars {
        #[arg(long)]
        b: u32,
        #[arg(long)]
        c: u32,
        #[arg(long, default_value_t = 1)]
        from: i64,
        #[arg(long, default_value_t = 6)]
        to: i64,
    },
}

#[derive(Subcommand, Debug)]
enum CcOp {
    /// Character of a module, optionally plus a shifted injective.
    Char(CharArgs),
}

#[derive(Subcommand, Debug)]
enum BasisOp {
    /// Check the family `{X_d}` on the box `|d_i| ≤ radius`.
    Check {
        #[arg(long)]
        b: i64,
        #[arg(long)]
        c: i64,
        #[arg(long, default_value_t = 2)]
        radius: i64,
        #[arg(long, value_enum, default_value_t = PolicyArg::Generic)]
        policy: PolicyArg,
    },
}

impl Command {
    fn quiver_spec(&self) -> Option<&str> {
        match self {
            Command::Cc { op: CcOp::Char(a) } => Some(&a.quiver.quiver),
            Command::Verify { args, .. } => Some(&args.quiver.quiver),
            Command::Oracle { args, .. } => Some(&args.common.quiver.quiver),
            Command::Seed { op: SeedOp::Mutate(a) } => a.quiver.as_deref(),
            _ => None,
        }
    }
}

fn run(cli: &Cli) -> qcluster::Result<Outcome> {
    let exec = if cli.sequential { Exec::Sequential } else { Exec::Parallel };
    let json = cli.json;
    match &cli.command {
        Command::Seed { op: SeedOp::Mutate(a) } => commands::seed_mutate(a, json),
        Command::Rank2 { op: Rank2Op::Vars { b, c, from, to } } => {
            commands::rank2_vars_cmd(*b, *c, *from, *to, json)
        }
        Command::Cc { op: CcOp::Char(a) } => commands::cc_char(a, exec, json),
        Command::Verify { which, args } => commands::verify(*which, args, exec),
        Command::Basis { op: BasisOp::Check { b, c, radius, policy } } => {
            commands::basis_check(*b, *c, *radius, *policy, exec, json)
        }
        Command::Oracle { which, args } => commands::oracle(*which, args, exec, json),
    }
}

fn cache_key(cli: &Cli) -> String {
    // a quiver file's content matters, not its path alone
    let file = cli
        .command
        .quiver_spec()
        .and_then(|p| std::fs::read_to_string(p).ok())
        .unwrap_or_default();
    let version = env!("CARGO_PKG_VERSION");
    cache::key(&[version, &format!("{:?}", cli.command), &file, if cli.json { "json" } else { "text" }])
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::BoundExceeded(_) => 3,
        Error::NonPolynomial(_) | Error::NonIntegerResult(_) | Error::NotInSpan(_) | Error::MissingGrData(_) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let store = match cli.cache.as_deref().map(cache::Cache::open).transpose() {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: cache: {e}");
            return ExitCode::from(2);
        }
    };
    let key = cache_key(&cli);
    let hit = store.as_ref().and_then(|s| s.get(&key));
    let outcome = match hit {
        Some(o) => o,
        None => match run(&cli) {
            Ok(o) => {
                if let Some(s) = &store {
                    if let Err(e) = s.put(&key, &o) {
                        eprintln!("warning: cache write failed: {e}");
                    }
                }
                o
            }
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(exit_code(&e));
            }
        },
    };
    print!("{}", outcome.text);
    if let (Some(path), Some(artifact)) = (&cli.out, &outcome.artifact) {
        if let Err(e) = std::fs::write(path, artifact) {
            eprintln!("error: writing {}: {e}", path.display());
        }
    }
    match outcome.status {
        Status::Ok => ExitCode::SUCCESS,
        Status::Failed => ExitCode::from(1),
    }
}
