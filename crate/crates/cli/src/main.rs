//! `conceptkit`: command-line front end for the conceptkit library.
//!
//! Exit codes: 0 success, 1 failed verification or training, 2 bad input.

use std::ffi::OsString;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod config;
mod io;

#[derive(Debug)]
pub enum Failure {
    /// Verification or training did not succeed.
    Failed(String),
    Input(String),
    Clap(clap::Error),
}

impl Failure {
    pub fn input(msg: impl Into<String>) -> Self {
        Failure::Input(msg.into())
    }
}

impl From<conceptkit::Error> for Failure {
    fn from(e: conceptkit::Error) -> Self {
        match e {
            conceptkit::Error::Diverged { .. } => Failure::Failed(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "conceptkit", version, about = "Concept lattices, embeddings, VAEs and group invariance checks")]
pub struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// JSON object of flag values; explicit flags win.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the concept lattice of a context CSV.
    Fca(FcaArgs),
    /// Run a checker and print a JSON report.
    #[command(subcommand)]
    Verify(Verify),
    /// Train a model, writing a checkpoint and a loss CSV.
    #[command(subcommand)]
    Train(Train),
    #[command(subcommand)]
    Vae(Vae),
    #[command(subcommand)]
    Invariance(InvarianceCmd),
    /// Write a synthetic dataset.
    #[command(subcommand)]
    Gen(Gen),
    /// Prototype or exemplar classification of points.
    Classify(ClassifyArgs),
    Kmeans(KmeansArgs),
    /// Vector negation and disjunction over an embedding.
    #[command(subcommand)]
    Logic(Logic),
    /// Rank completions of `a : b :: c : ?`.
    Analogy(AnalogyArgs),
}

#[derive(Debug, Args)]
pub struct FcaArgs {
    pub context: PathBuf,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct ReportOut {
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ActionArgs {
    /// Group action JSON: {"group": {...}, "act": "rotate" | "shift"}.
    #[arg(long)]
    pub action: PathBuf,
    /// Built-in map name or path to a VAE checkpoint.
    #[arg(long)]
    pub phi: String,
    #[arg(long, default_value_t = 64)]
    pub samples: usize,
    /// Group elements to draw when the group is large or continuous.
    #[arg(long, default_value_t = 64)]
    pub budget: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum PsiArg {
    Identity,
    Rotate,
    AngleAdd,
}

#[derive(Debug, Subcommand)]
pub enum Verify {
    /// Duality and lattice laws of an exported lattice JSON.
    Lattice {
        lattice: PathBuf,
        #[command(flatten)]
        out: ReportOut,
    },
    /// Group axioms of a group JSON.
    Group {
        group: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        budget: usize,
        #[command(flatten)]
        out: ReportOut,
    },
    Invariance(InvarianceArgs),
    Equivariance {
        #[command(flatten)]
        action: ActionArgs,
        #[arg(long, value_enum)]
        psi: PsiArg,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[command(flatten)]
        out: ReportOut,
    },
    Disentangle {
        #[command(flatten)]
        action: ActionArgs,
        /// Representation blocks, one per factor: "0,1;2,3".
        #[arg(long)]
        blocks: String,
        #[arg(long, default_value_t = 1e-3)]
        tol: f64,
        #[command(flatten)]
        out: ReportOut,
    },
    /// Rotation Lie derivative of a built-in planar function.
    Lie {
        #[arg(long, default_value = "circle")]
        function: String,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[command(flatten)]
        out: ReportOut,
    },
}

#[derive(Debug, Args)]
pub struct InvarianceArgs {
    #[command(flatten)]
    pub action: ActionArgs,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[command(flatten)]
    pub out: ReportOut,
}

#[derive(Debug, Subcommand)]
pub enum InvarianceCmd {
    Check(InvarianceArgs),
}

#[derive(Debug, Args)]
pub struct TrainOut {
    #[arg(long)]
    pub data: PathBuf,
    /// Checkpoint path.
    #[arg(long)]
    pub out: PathBuf,
    /// Loss history CSV; defaults to the checkpoint path with extension `loss.csv`.
    #[arg(long)]
    pub loss: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VaeTrainArgs {
    #[command(flatten)]
    pub io: TrainOut,
    /// Label column to drop from the data, if any.
    #[arg(long)]
    pub label_column: Option<String>,
    #[arg(long, default_value_t = 1)]
    pub latent_dim: usize,
    #[arg(long, default_value_t = 16)]
    pub hidden: usize,
    #[arg(long, default_value_t = 200)]
    pub epochs: usize,
    #[arg(long, default_value_t = 0.05)]
    pub lr: f64,
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    #[arg(long, default_value_t = 16)]
    pub batch_size: usize,
}

#[derive(Debug, Subcommand)]
pub enum Train {
    /// Skip-gram word vectors from a text corpus; writes TSV.
    Sgns {
        #[command(flatten)]
        io: TrainOut,
        #[arg(long, default_value_t = 16)]
        dim: usize,
        #[arg(long, default_value_t = 5)]
        epochs: usize,
        #[arg(long, default_value_t = 0.025)]
        lr: f64,
        #[arg(long, default_value_t = 3)]
        window: usize,
        #[arg(long, default_value_t = 5)]
        negatives: usize,
    },
    /// Poincaré-ball embedding of a child,parent taxonomy CSV; writes TSV.
    Poincare {
        #[command(flatten)]
        io: TrainOut,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 200)]
        epochs: usize,
        #[arg(long, default_value_t = 0.3)]
        lr: f64,
        #[arg(long, default_value_t = 10)]
        negatives: usize,
        #[arg(long, default_value_t = 10)]
        burn_in: usize,
    },
    /// Box embedding of a taxonomy CSV; writes TSV.
    Boxes {
        #[command(flatten)]
        io: TrainOut,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 500)]
        epochs: usize,
        #[arg(long, default_value_t = 0.01)]
        lr: f64,
        #[arg(long, default_value_t = 0.02)]
        margin: f64,
        #[arg(long, default_value_t = 0.1)]
        min_side: f64,
    },
    /// Variational autoencoder on a points CSV; writes JSON.
    Vae(VaeTrainArgs),
}

#[derive(Debug, Subcommand)]
pub enum Vae {
    Train(VaeTrainArgs),
    /// Decode a straight latent path between two data rows, as CSV.
    Interpolate {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        label_column: Option<String>,
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
        #[arg(long, default_value_t = 16)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct GenOut {
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Gen {
    /// Random context CSV.
    Context {
        #[arg(long, default_value_t = 10)]
        objects: usize,
        #[arg(long, default_value_t = 10)]
        attributes: usize,
        #[arg(long, default_value_t = 0.3)]
        density: f64,
        #[command(flatten)]
        out: GenOut,
    },
    /// Balanced tree as child,parent CSV.
    Tree {
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long, default_value_t = 2)]
        branching: usize,
        #[command(flatten)]
        out: GenOut,
    },
    /// Corpus with planted topics.
    Corpus {
        #[arg(long, default_value_t = 2)]
        topics: usize,
        #[arg(long, default_value_t = 10)]
        vocab: usize,
        #[arg(long, default_value_t = 2000)]
        sentences: usize,
        #[arg(long, default_value_t = 10)]
        length: usize,
        #[command(flatten)]
        out: GenOut,
    },
    /// Corpus with a planted row/column analogy grid.
    Analogy {
        #[arg(long, default_value_t = 2)]
        rows: usize,
        #[arg(long, default_value_t = 2)]
        cols: usize,
        #[arg(long, default_value_t = 4)]
        pool: usize,
        #[arg(long, default_value_t = 4000)]
        sentences: usize,
        #[command(flatten)]
        out: GenOut,
    },
    /// Gaussian blobs: centers as "x,y;x,y".
    Blobs {
        #[arg(long, default_value = "-2,0;2,0", allow_hyphen_values = true)]
        centers: String,
        #[arg(long, default_value_t = 50)]
        per_cluster: usize,
        #[arg(long, default_value_t = 0.3)]
        spread: f64,
        #[command(flatten)]
        out: GenOut,
    },
    Moons {
        #[arg(long, default_value_t = 200)]
        n: usize,
        #[arg(long, default_value_t = 0.05)]
        noise: f64,
        #[command(flatten)]
        out: GenOut,
    },
    /// Points on the grid of a flat torus in ℝ⁴.
    Torus {
        #[arg(long, default_value_t = 8)]
        n1: usize,
        #[arg(long, default_value_t = 8)]
        n2: usize,
        /// Random grid points instead of the full grid.
        #[arg(long)]
        samples: Option<usize>,
        #[command(flatten)]
        out: GenOut,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ClassifierKind {
    Prototype,
    Exemplar,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum MetricArg {
    WeightedL1,
    WeightedEuclidean,
    Cosine,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    /// Labelled training points.
    #[arg(long, required_unless_present = "model_in")]
    pub train: Option<PathBuf>,
    /// Saved model JSON instead of training data.
    #[arg(long, conflicts_with = "train")]
    pub model_in: Option<PathBuf>,
    #[arg(long, default_value = "label")]
    pub label_column: String,
    #[arg(long, value_enum, default_value = "prototype")]
    pub model: ClassifierKind,
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    #[arg(long, value_enum, default_value = "weighted-euclidean")]
    pub metric: MetricArg,
    /// Per-dimension weights, "1,1"; all ones when absent.
    #[arg(long, allow_hyphen_values = true)]
    pub weights: Option<String>,
    /// Points to classify; the training points when absent.
    #[arg(long)]
    pub query: Option<PathBuf>,
    #[arg(long)]
    pub model_out: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct KmeansArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub label_column: Option<String>,
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 100)]
    pub max_iter: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Logic {
    /// Nearest tokens to `a NOT b`.
    Not {
        #[arg(long)]
        embedding: PathBuf,
        a: String,
        b: String,
        #[arg(long, default_value_t = 5)]
        top_k: usize,
    },
    /// Distance of each query token from the span of the given tokens.
    Or {
        #[arg(long)]
        embedding: PathBuf,
        /// Tokens spanning the subspace, comma separated.
        #[arg(long)]
        span: String,
        query: Vec<String>,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
}

#[derive(Debug, Args)]
pub struct AnalogyArgs {
    #[arg(long)]
    pub embedding: PathBuf,
    pub a: String,
    pub b: String,
    pub c: String,
    #[arg(long, default_value_t = 5)]
    pub top_k: usize,
}

fn run(args: Vec<OsString>) -> Result<(), Failure> {
    let args = config::merge(args)?;
    let cli = Cli::try_parse_from(args).map_err(Failure::Clap)?;
    commands::dispatch(cli)
}

fn main() -> ExitCode {
    match run(std::env::args_os().collect()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Clap(e)) => {
            let _ = e.print();
            ExitCode::from(if e.use_stderr() { 2 } else { 0 })
        }
        Err(Failure::Failed(msg)) => {
            eprintln!("conceptkit: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
