use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "decalage", version, about = "Special values of twisted multivariable zeta series at negative integers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub options: GlobalOptions,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Values at the given k (or at the document's queries)
    Value {
        /// Problem document; standard input when omitted
        document: Option<PathBuf>,
        /// k-tuple k1,...,kT
        #[arg(long, value_delimiter = ',')]
        k: Option<Vec<u32>>,
    },
    /// All values with k_t <= K_t
    Table {
        document: Option<PathBuf>,
        /// Print machine-readable lines instead of the aligned table
        #[arg(long)]
        machine: bool,
    },
    /// Cross-check the recurrence against the closed form, other shifts and Abel sums
    Verify { document: Option<PathBuf> },
    /// Report sufficient conditions on the factors
    Check { document: Option<PathBuf> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Recurrence,
    Closed,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exact,
    Approx,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOptions {
    #[arg(long, value_enum, default_value = "recurrence", global = true)]
    pub method: Method,
    /// Shift a1,...,aN for the recurrence
    #[arg(long, value_delimiter = ',', global = true)]
    pub shift: Option<Vec<u32>>,
    #[arg(long, value_enum, global = true)]
    pub mode: Option<Mode>,
    /// Upper bounds K1,...,KT for table and verify
    #[arg(long, value_delimiter = ',', global = true)]
    pub max: Option<Vec<u32>>,
    /// Value cache file, read before and written after the run
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,
    /// Seed for the random shifts tried by verify
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    /// Perturbs every recurrence value by one (for testing the checks)
    #[arg(long, hide = true, global = true)]
    pub inject_fault: bool,
}
