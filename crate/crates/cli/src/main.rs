mod bench;
mod commands;
mod files;
mod selftest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// List decoding of one-point AG codes.
#[derive(Parser)]
#[command(name = "aglist", version, about)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a code spec and print its parameters.
    MakeCode(MakeCodeArgs),
    /// Build the evaluation tables for the pointwise route.
    Precompute(PrecomputeArgs),
    /// Encode messages (k integers per line) into codewords.
    Encode(EncodeArgs),
    /// Add exactly e errors to every word.
    Corrupt(CorruptArgs),
    /// List decode every word of a file; one JSON record per candidate.
    Decode(DecodeArgs),
    /// Check library invariants on pinned configurations.
    Selftest,
    /// Time the decoder stages; CSV on stdout.
    Bench(BenchArgs),
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("curve").required(true).args(["rational", "hermitian"]))]
pub struct MakeCodeArgs {
    /// Projective line; --q and --points select the field and D.
    #[arg(long)]
    pub rational: bool,
    /// Hermitian curve over GF(q0^2); --q0 and --fibers select D.
    #[arg(long)]
    pub hermitian: bool,
    #[arg(long, required_if_eq("rational", "true"))]
    pub q: Option<u32>,
    /// Evaluation x-values, e.g. `0..11` (inclusive) or `1,3,5`.
    #[arg(long)]
    pub points: Option<String>,
    #[arg(long, required_if_eq("hermitian", "true"))]
    pub q0: Option<u32>,
    /// Number of full fibers, taken above x = 0, 1, ...
    #[arg(long, conflicts_with = "fiber_xs")]
    pub fibers: Option<u32>,
    /// Explicit x-values of the fibers.
    #[arg(long)]
    pub fiber_xs: Option<String>,
    /// Degree of G = m P_inf.
    #[arg(long)]
    pub m: i64,
    #[arg(long)]
    pub label: Option<String>,
    /// Output file; the code description goes to stdout when omitted.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct PrecomputeArgs {
    #[arg(long)]
    pub code: PathBuf,
    #[arg(long)]
    pub s: usize,
    #[arg(long)]
    pub l: usize,
    /// Use this many places instead of the minimum.
    #[arg(long)]
    pub places: Option<usize>,
    #[arg(long, short)]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct EncodeArgs {
    #[arg(long)]
    pub code: PathBuf,
    /// Message file, k values per line.
    #[arg(long, short)]
    pub input: PathBuf,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct CorruptArgs {
    #[arg(long)]
    pub code: PathBuf,
    #[arg(long, short)]
    pub input: PathBuf,
    /// Number of positions changed in every word.
    #[arg(long, short)]
    pub errors: usize,
    /// Seed of the ChaCha8 generator.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum RouteArg {
    Auto,
    Pointwise,
    Exact,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum RootArg {
    Auto,
    RothRuckenstein,
    Enumerate,
}

#[derive(Args)]
pub struct DecodeArgs {
    #[arg(long)]
    pub code: PathBuf,
    #[arg(long, short)]
    pub input: PathBuf,
    #[arg(long)]
    pub s: usize,
    #[arg(long)]
    pub l: usize,
    /// Decoding radius; defaults to the guaranteed radius.
    #[arg(long)]
    pub tau: Option<usize>,
    /// Allow tau above the guaranteed radius.
    #[arg(long)]
    pub force: bool,
    /// Table file from `precompute`; implies the pointwise route.
    #[arg(long, conflicts_with = "route")]
    pub precomp: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub route: Option<RouteArg>,
    #[arg(long, value_enum, default_value = "auto")]
    pub root_finding: RootArg,
    /// Bound on q^k for enumeration root finding.
    #[arg(long, default_value_t = aglist::gsdecoder::DEFAULT_ENUMERATION_CAP)]
    pub enumeration_cap: u128,
    /// Write the basis matrices of word i to DIR/word_i.txt.
    #[arg(long, value_name = "DIR")]
    pub dump_matrices: Option<PathBuf>,
    /// Decode words in parallel on J threads; output order is unchanged.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct BenchArgs {
    /// Sweep Reed-Solomon codes over the lengths in --n.
    #[arg(long, required_unless_present = "code")]
    pub sweep: bool,
    /// Time a single code spec instead.
    #[arg(long, conflicts_with = "sweep")]
    pub code: Option<PathBuf>,
    #[arg(long, default_value_t = 256)]
    pub q: u32,
    #[arg(long, default_value = "8,16,32")]
    pub n: String,
    /// Multiplicities; each row uses l = max(l, s).
    #[arg(long, default_value = "1,2")]
    pub s: String,
    #[arg(long, default_value_t = 3)]
    pub l: usize,
    /// Words timed per row; the reported times are means.
    #[arg(long, default_value_t = 3)]
    pub reps: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Cmd::MakeCode(a) => commands::make_code(&a),
        Cmd::Precompute(a) => commands::precompute(&a),
        Cmd::Encode(a) => commands::encode(&a),
        Cmd::Corrupt(a) => commands::corrupt(&a),
        Cmd::Decode(a) => commands::decode(&a),
        Cmd::Selftest => Ok(selftest::run()),
        Cmd::Bench(a) => bench::run(&a),
    };
    match res {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
