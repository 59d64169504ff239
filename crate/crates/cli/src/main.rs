use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod report;

use report::Report;

#[derive(Parser)]
#[command(name = "liftshadow", version)]
#[command(about = "Homomorphisms, forbidden lifts and SNP compilation for finite relational structures")]
struct Cli {
    /// Output style
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,

    /// Seed for every randomized step
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Machine,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Plain,
    Injective,
    Full,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Category {
    General,
    Injective,
    Full,
}

#[derive(Args, Clone, Copy)]
pub struct DualCaps {
    /// Cap on the universe of an unreduced dual
    #[arg(long, default_value_t = liftshadow::duality::DUAL_SIZE_LIMIT)]
    pub dual_size_limit: u128,
    /// Cap on candidate tuples examined while building a dual
    #[arg(long, default_value_t = liftshadow::duality::DUAL_TUPLE_LIMIT)]
    pub dual_tuple_limit: u128,
}

#[derive(Subcommand)]
enum Command {
    /// Search for a homomorphism from SOURCE to TARGET
    Hom {
        source: PathBuf,
        target: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Plain)]
        mode: Mode,
    },
    /// Core of a structure with a retraction onto it
    Core { file: PathBuf },
    /// Girth and a shortest cycle
    Girth { file: PathBuf },
    /// Blocks (maximal pieces without a cut point)
    Blocks { file: PathBuf },
    /// Dual templates for the forests in FILE
    Dual {
        file: PathBuf,
        #[command(flatten)]
        caps: DualCaps,
    },
    /// Decide whether a monadic family defines a finite union of CSPs
    FpDecide {
        family: PathBuf,
        /// Also write each template to DIR/template_<i>.txt
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[command(flatten)]
        caps: DualCaps,
    },
    /// Whether a structure has a partition lift avoiding every pattern
    FpMember {
        family: PathBuf,
        structure: PathBuf,
        /// Cap on colorings examined
        #[arg(long, default_value_t = liftshadow::fpdecide::MEMBERSHIP_LIMIT)]
        limit: u128,
    },
    /// Compile an SNP formula into a family of forbidden lifts
    SnpCompile {
        formula: PathBuf,
        #[arg(long, value_enum, default_value_t = Category::General)]
        category: Category,
        /// Write the family here instead of the report
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Evaluate an SNP formula on a structure
    SnpEval {
        formula: PathBuf,
        structure: PathBuf,
        /// Cap on proof assignments examined
        #[arg(long, default_value_t = liftshadow::snpc::EVAL_LIMIT)]
        limit: u128,
    },
    /// Block-signature reduction of a monadic family
    FvReduce {
        family: PathBuf,
        /// Structure over the input signature to send forward
        #[arg(long)]
        forward: Option<PathBuf>,
        /// Structure over the block signature to send back
        #[arg(long)]
        backward: Option<PathBuf>,
        /// Skip the template construction for G′
        #[arg(long)]
        no_templates: bool,
        #[command(flatten)]
        caps: DualCaps,
    },
    /// High-girth replacement with the same small-target behavior
    Sparse {
        file: PathBuf,
        /// Targets with at most k elements must agree
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// No cycle shorter than this
        #[arg(long, default_value_t = 4)]
        ell: usize,
        /// Copies of each element (default 16 times the size)
        #[arg(long)]
        fiber_size: Option<usize>,
        /// Sampled tuples per tuple as a fraction of the fiber size
        #[arg(long)]
        density: Option<f64>,
        #[arg(long, default_value_t = 64)]
        attempts: usize,
        #[arg(long, default_value_t = liftshadow::sparsegen::SPARSE_SIZE_LIMIT)]
        size_limit: usize,
        /// Write the structure here instead of the report
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Exhaustive checks on small structures
    Verify {
        #[command(subcommand)]
        check: Check,
    },
}

#[derive(Subcommand)]
pub enum Check {
    /// Forb(FAMILY) against the union of CSP(TEMPLATES); a lifted family is
    /// compared through its shadows
    Duality {
        family: PathBuf,
        templates: PathBuf,
        /// Largest structure checked
        #[arg(long, default_value_t = 4)]
        n: usize,
    },
    /// Girth, projection and small-target agreement of a replacement
    Sparse {
        original: PathBuf,
        replacement: PathBuf,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 4)]
        ell: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = command_name(&cli.command);
    let report = commands::run(cli.command, cli.seed).unwrap_or_else(|e| Report::error(name, e));
    match cli.format {
        Format::Human => {
            if report.exit_code == 2 {
                eprint!("{}", report.human);
            } else {
                print!("{}", report.human);
            }
        }
        Format::Machine => println!("{}", report.machine_json()),
    }
    ExitCode::from(report.exit_code)
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Hom { .. } => "hom",
        Command::Core { .. } => "core",
        Command::Girth { .. } => "girth",
        Command::Blocks { .. } => "blocks",
        Command::Dual { .. } => "dual",
        Command::FpDecide { .. } => "fp-decide",
        Command::FpMember { .. } => "fp-member",
        Command::SnpCompile { .. } => "snp-compile",
        Command::SnpEval { .. } => "snp-eval",
        Command::FvReduce { .. } => "fv-reduce",
        Command::Sparse { .. } => "sparse",
        Command::Verify { .. } => "verify",
    }
}
