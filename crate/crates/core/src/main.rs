use std::process::ExitCode;

use clap::{Parser, Subcommand};

use lensd::cli::{self, Format, Profile, Suite};

/// Exact d-invariants of lens spaces: tables, homology cobordism
/// classification, and finite verification sweeps.
#[derive(Parser)]
#[command(name = "lensd", version)]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the exact d-invariant table of L(p, q)
    Dtable {
        p: u64,
        q: u64,
        #[arg(long, value_enum, default_value = "plain")]
        format: Format,
    },
    /// Decide homeomorphism / d-isomorphism of L(p, q1) and L(p, q2)
    Classify {
        p: u64,
        q1: u64,
        q2: u64,
        /// Require witnesses to carry spin structures to spin structures
        #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
        require_spin_compat: bool,
        #[arg(long, value_enum, default_value = "plain")]
        format: Format,
    },
    /// Print the image of the relative invariant mod p with multiplicities
    Sbar {
        p: u64,
        q: u64,
        #[arg(long, value_enum, default_value = "plain")]
        format: Format,
    },
    /// Run a verification sweep; exits 1 if any counterexample is found
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        /// Override the profile's p cap for the selected suite(s)
        #[arg(long)]
        pmax: Option<u64>,
        #[arg(long, value_enum, default_value = "full")]
        profile: Profile,
        #[arg(long, value_enum, default_value = "plain")]
        format: Format,
    },
}

fn main() -> ExitCode {
    let args = Args::parse();
    let result = match args.command {
        Command::Dtable { p, q, format } => cli::cmd_dtable(p, q, format).map(|s| (s, true)),
        Command::Classify {
            p,
            q1,
            q2,
            require_spin_compat,
            format,
        } => cli::cmd_classify(p, q1, q2, require_spin_compat, format).map(|s| (s, true)),
        Command::Sbar { p, q, format } => cli::cmd_sbar(p, q, format).map(|s| (s, true)),
        Command::Verify {
            suite,
            pmax,
            profile,
            format,
        } => {
            let outcome = cli::cmd_verify(suite, profile, pmax, format);
            Ok((outcome.rendered, outcome.passed))
        }
    };
    match result {
        Ok((rendered, passed)) => {
            print!("{rendered}");
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}
