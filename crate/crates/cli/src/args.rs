use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use dxz_core::polar::PolarConfig;
use dxz_core::IterationConfig;

#[derive(Debug, Parser)]
#[command(name = "dxz", version, about = "Block D·X·Z decompositions of unitary matrices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct IterArgs {
    /// Maximum number of Sinkhorn steps.
    #[arg(long, default_value_t = IterationConfig::default().max_iter)]
    pub max_iter: usize,
    /// Stop once Ψ = n² − |Btr X|² is at most this.
    #[arg(long, default_value_t = IterationConfig::default().psi_tol)]
    pub psi_tol: f64,
    /// Newton steps per polar decomposition.
    #[arg(long, default_value_t = PolarConfig::default().newton_iters)]
    pub polar_iters: usize,
    /// Smallest singular value below which a block sum counts as singular.
    #[arg(long, default_value_t = PolarConfig::default().sing_tol)]
    pub sing_tol: f64,
    /// Iterate each polar decomposition to convergence instead.
    #[arg(long)]
    pub refine: bool,
}

impl IterArgs {
    pub fn config(&self) -> IterationConfig {
        IterationConfig {
            max_iter: self.max_iter,
            psi_tol: self.psi_tol,
            polar: PolarConfig {
                newton_iters: self.polar_iters,
                sing_tol: self.sing_tol,
                refine: self.refine,
            },
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decompose a unitary as U = D·X·Z and write the factors.
    Decompose {
        input: PathBuf,
        /// Block size; must divide n.
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        iter: IterArgs,
        /// Directory for D.json, X.json, Z.json and report.json.
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Print Ψ_t for every step of the iteration.
    Trace {
        input: PathBuf,
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        iter: IterArgs,
        #[arg(long)]
        json: bool,
    },
    /// Check a claimed factorization U = D·X·Z.
    Verify {
        #[arg(long)]
        u: PathBuf,
        #[arg(long)]
        d: PathBuf,
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        z: PathBuf,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
    /// Exact factorization of a permutation given in one-line notation.
    Perm {
        /// e.g. "5 1 2 4 6 3"
        perm: String,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Write a Haar-random unitary.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; standard output if omitted.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Biunitary vectors V, W with U·V = W and leading block of V equal to I.
    Biunitary {
        input: PathBuf,
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        iter: IterArgs,
        /// For a 2x2 input with m = 1, use the closed-form factorization
        /// instead of iterating.
        #[arg(long)]
        closed_form: bool,
        #[arg(long)]
        json: bool,
    },
    /// Conjugate decomposition U = C·(I ⊕ A)·Y with block-circulant C, Y.
    Conjugate {
        input: PathBuf,
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        iter: IterArgs,
        /// Directory for C.json, A.json, Y.json and report.json.
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Decompose several matrices, optionally in parallel.
    Batch {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        iter: IterArgs,
        /// Worker threads.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        json: bool,
    },
}
