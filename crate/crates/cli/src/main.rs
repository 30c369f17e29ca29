//! `projent`: command-line front end for the projection inequality toolkit.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use output::Emitter;

#[derive(Parser, Debug)]
#[command(name = "projent", version, about = "Set-family compressions, entropy and sumset inequalities")]
pub struct Cli {
    /// Tolerance in bits for floating-point entropy checks.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,

    /// Seed for sampled searches, echoed in every output line.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Emit JSON lines only, without the human summary on stderr.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Set families and their compressions.
    #[command(subcommand)]
    Family(FamilyCmd),
    /// Entropy inequalities for a joint distribution.
    #[command(subcommand)]
    Entropy(EntropyCmd),
    /// Finite point sets in Z^n and their projections.
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// Sumset inequalities.
    #[command(subcommand)]
    Sumset(SumsetCmd),
    /// Search small groups for instances where a conjectured system of
    /// constants is infeasible.
    Search(SearchArgs),
}

#[derive(Subcommand, Debug)]
pub enum FamilyCmd {
    /// Print the minimal compression.
    Sharp { family: PathBuf },
    /// Apply one elementary compression to members I and J (1-based).
    Compress {
        #[arg(long)]
        i: usize,
        #[arg(long)]
        j: usize,
        family: PathBuf,
    },
    /// Report whether the family is a (uniform) k-cover.
    Check {
        #[arg(long)]
        k: usize,
        family: PathBuf,
    },
    /// Decide whether the second family is a compression of the first.
    Compare { first: PathBuf, second: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum EntropyCmd {
    /// H(X_{A∪B}) + H(X_{A∩B}) <= H(X_A) + H(X_B).
    Submod {
        /// Comma-separated 1-based coordinates, e.g. 1,2.
        #[arg(long, value_delimiter = ',')]
        a: Vec<usize>,
        #[arg(long, value_delimiter = ',')]
        b: Vec<usize>,
        distribution: PathBuf,
    },
    /// k H(X) <= Σ H(X_A) for a k-cover.
    Shearer {
        #[arg(long)]
        k: usize,
        distribution: PathBuf,
        family: PathBuf,
    },
    /// Two-sided conditional bound for a uniform k-cover.
    Mt {
        #[arg(long)]
        k: usize,
        distribution: PathBuf,
        family: PathBuf,
    },
    /// Σ_{B} H(X_B) <= Σ_{A} H(X_A) when the second family compresses the first.
    Gen1 {
        distribution: PathBuf,
        first: PathBuf,
        second: PathBuf,
    },
    /// The same inequality against the minimal compression.
    Gen2 { distribution: PathBuf, family: PathBuf },
    /// Box constants h_i and their sandwich checks.
    Box { distribution: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum LatticeCmd {
    /// Project onto the coordinates in A.
    Project {
        #[arg(long, value_delimiter = ',')]
        a: Vec<usize>,
        lattice: PathBuf,
    },
    /// |S|^k <= Π |S_A| for a k-cover.
    Cover {
        #[arg(long)]
        k: usize,
        lattice: PathBuf,
        family: PathBuf,
    },
    /// A five-point set whose projections break the chain inequality.
    Fig2,
}

#[derive(Args, Debug)]
pub struct GroupOverride {
    /// Group file used instead of the group named in the instance.
    #[arg(long)]
    pub group: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum SumsetCmd {
    /// |S|^k <= Π |S_A| for a uniform k-cover, with the embedded lattice check
    /// and the multiplicative constants.
    Cover {
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        group: GroupOverride,
        instance: PathBuf,
        family: PathBuf,
    },
    /// |A+C|^k <= |C|^{k-1} Π |A+B_i| for C inside B_1+...+B_k.
    Gymr { file: PathBuf },
    /// The marking construction in an ordered group.
    Marking {
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        group: GroupOverride,
        instance: PathBuf,
        family: PathBuf,
    },
    /// Cauchy-Davenport; with a family, the additive cover bound instead.
    Cd {
        #[command(flatten)]
        group: GroupOverride,
        instance: PathBuf,
        family: Option<PathBuf>,
        #[arg(long, requires = "family")]
        k: Option<usize>,
    },
    /// Same as `lattice fig2`.
    Fig2,
}

#[derive(Args, Debug)]
pub struct SearchArgs {
    /// Which system: 6.1 (product constants) or 6.2 (additive constants).
    #[arg(value_parser = ["6.1", "6.2"])]
    pub conjecture: String,
    /// small | abelian | torsion-free | path to a JSON list of group files.
    #[arg(long, default_value = "small")]
    pub groups: String,
    /// Number of sets per instance.
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, default_value_t = 3)]
    pub set_size_max: usize,
    /// Maximum number of instances.
    #[arg(long)]
    pub budget: Option<usize>,
    /// Draw the budgeted instances at random using --seed.
    #[arg(long, requires = "budget")]
    pub sample: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let mut out = Emitter::new(&cli);
    match commands::run(&cli, &mut out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
