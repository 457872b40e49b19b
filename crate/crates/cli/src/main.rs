//! `mfold`: convert, split, train and evaluate multi-fold knowledge bases.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric failure.
//! Reports and stats go to stdout; diagnostics go to stderr.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use mfold::ErrorClass;

#[derive(Debug, Parser)]
#[command(name = "mfold", version, about = "Embedding toolkit for knowledge bases with multi-fold relations")]
pub struct Cli {
    /// Directory that relative input and output paths are resolved against.
    #[arg(long, global = true, env = "MFOLD_DATA_DIR")]
    pub data_dir: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print entity, relation and fold statistics of a file.
    Stats(StatsArgs),
    /// Convert between fact, instance and triple representations.
    Convert(ConvertArgs),
    /// Filter a fact file into datasets and split them into train and test.
    Split(SplitArgs),
    /// Train a model.
    Train(TrainArgs),
    /// Rank test entities with a trained model.
    Eval(EvalArgs),
    /// Write the two instance sets that star-to-clique conversion cannot tell apart.
    Witness(WitnessArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InputKind {
    /// Keyed instances (`rel<TAB>role=entity...`).
    Keyed,
    /// Positional instances (`rel e1 ... eJ`).
    Positional,
    /// Facts (`rel<TAB>id<TAB>role={e1,e2}...`).
    Facts,
}

#[derive(Debug, Args)]
pub struct InputArgs {
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = InputKind::Keyed)]
    pub format: InputKind,
    /// Role order for positional input: `rel<TAB>role1<TAB>role2...` per line.
    #[arg(long)]
    pub schema: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrictCounts {
    Jf17kTrain,
    Jf17kTest,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Fail unless the counts match a published dataset split.
    #[arg(long, value_enum)]
    pub strict: Option<StrictCounts>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConvertMode {
    /// Facts to instances, dropping fact ids.
    T,
    /// Facts to instances tagged with a FACT-ID role.
    TId,
    /// Instances to star-to-clique triples.
    S2c,
    /// ID-tagged instances back to facts.
    Recover,
}

#[derive(Debug, Args)]
pub struct ConvertArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_enum)]
    pub mode: ConvertMode,
    /// With `t-id`: leave meta-relations whose facts are all degenerate untagged.
    #[arg(long)]
    pub collapse_degenerate: bool,
    #[arg(short, long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct SplitArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Directory receiving the train and test files of every variant.
    #[arg(long)]
    pub out_dir: PathBuf,
    #[arg(long, default_value_t = 0.2)]
    pub test_fraction: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 5)]
    pub min_entity_instances: usize,
    #[arg(long, default_value_t = 10_000)]
    pub max_facts_per_type: usize,
    /// Keep meta-relations with a single role.
    #[arg(long)]
    pub keep_single_role: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    TranshTriple,
    MTransh,
    MTranshId,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// TOML file with any TrainConfig fields; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long)]
    pub margin: Option<f64>,
    #[arg(long)]
    pub learning_rate: Option<f64>,
    #[arg(long)]
    pub epochs: Option<usize>,
    #[arg(long)]
    pub batch_size: Option<usize>,
    #[arg(long)]
    pub penalty_weight: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub strict_constraints: bool,
    #[arg(long)]
    pub freeze_weights: bool,
    #[arg(long)]
    pub reject_known_positives: bool,
    /// Model output path.
    #[arg(short, long)]
    pub output: PathBuf,
    /// Per-epoch log file; stderr when absent.
    #[arg(long)]
    pub log: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProtocolArg {
    Triple,
    Instance,
    InstanceId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TieArg {
    Optimistic,
    Pessimistic,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    pub model: PathBuf,
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_enum)]
    pub protocol: ProtocolArg,
    #[arg(long, value_enum, default_value_t = TieArg::Optimistic)]
    pub tie: TieArg,
    /// Evaluate a seeded random fraction of the test items.
    #[arg(long)]
    pub sample_fraction: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub sample_seed: u64,
    /// Evaluation threads; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
    /// Drop test items mentioning entities the model does not embed.
    #[arg(long)]
    pub skip_unknown: bool,
    /// Report file; stdout when absent.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct WitnessArgs {
    /// Directory receiving `g1.tsv`, `g2.tsv` and `s2c.tsv`.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

fn exit_code(class: ErrorClass) -> u8 {
    match class {
        ErrorClass::Usage => 1,
        ErrorClass::Data => 2,
        ErrorClass::Numeric => 3,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(e.class()))
        }
    }
}
