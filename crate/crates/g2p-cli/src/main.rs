//! `g2p`: loop extraction, synthetic corpus generation, graph building,
//! model training, evaluation and pragma suggestion, as one pipeline.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::CliError;

#[derive(Parser)]
#[command(
    name = "g2p",
    about = "Detects loop-level parallelism in C code and suggests OpenMP pragma categories",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Extract outermost for-loops (with attached OpenMP pragmas) to JSONL.
    Extract {
        /// A .c file or a directory of .c files.
        #[arg(long = "in")]
        input: PathBuf,
        /// Output JSONL path; stdout when omitted.
        #[arg(long = "out")]
        output: Option<PathBuf>,
    },
    /// Generate the labeled synthetic loop corpus.
    Synth {
        /// Output directory for .c files, manifest.json and loops.jsonl.
        #[arg(long = "out")]
        output: PathBuf,
        /// Directory of *.c.tmpl template files; built-ins when omitted.
        #[arg(long)]
        templates: Option<PathBuf>,
        /// Variants per template for each parallel pattern.
        #[arg(long, default_value_t = 20)]
        variants: usize,
        /// Number of non-parallel files.
        #[arg(long, default_value_t = 700)]
        nonparallel: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Build featurized graphs from extracted loops.
    Graph {
        /// loops.jsonl from `extract` or `synth`.
        #[arg(long = "in")]
        input: PathBuf,
        /// Output graph JSONL path.
        #[arg(long = "out")]
        output: PathBuf,
        /// Where to write the vocabulary built from the input corpus.
        #[arg(long)]
        vocab_out: Option<PathBuf>,
        /// Reuse an existing vocabulary instead of building one.
        #[arg(long)]
        vocab_in: Option<PathBuf>,
        /// Minimum corpus frequency for a token to enter the vocabulary.
        #[arg(long, default_value_t = 2)]
        min_freq: usize,
    },
    /// Train one binary task model on graph JSONL.
    Train {
        #[arg(long = "in")]
        input: PathBuf,
        /// Output directory: model.g2p, history.csv, split.json, summary.json.
        #[arg(long = "out")]
        output: PathBuf,
        #[arg(long, default_value = "parallel")]
        task: String,
        #[arg(long)]
        seed: Option<u64>,
        /// key=value file with any of: d, heads, layers, lr, epochs, seed,
        /// batch_size, patience, min_delta, val_frac, test_frac, mean_pool.
        #[arg(long)]
        config: Option<PathBuf>,
        /// vocab.json from `graph`; sizes the token embedding table so the
        /// checkpoint accepts any loop featurized with this vocabulary.
        #[arg(long)]
        vocab: Option<PathBuf>,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        heads: Option<usize>,
        #[arg(long)]
        layers: Option<usize>,
        #[arg(long)]
        lr: Option<f64>,
        #[arg(long)]
        epochs: Option<usize>,
        #[arg(long)]
        batch_size: Option<usize>,
        #[arg(long)]
        patience: Option<usize>,
        #[arg(long)]
        val_frac: Option<f64>,
        #[arg(long)]
        test_frac: Option<f64>,
    },
    /// Suggest pragma categories for every loop of a C file.
    Predict {
        /// Directory with per-task checkpoints (`<task>.g2p`) and vocab.json.
        #[arg(long)]
        models: PathBuf,
        /// A .c file to analyze.
        #[arg(long = "in")]
        input: PathBuf,
        /// Write suggestions as JSONL here as well as printing them.
        #[arg(long = "out")]
        output: Option<PathBuf>,
    },
    /// Evaluate a checkpoint on labeled graph JSONL.
    Eval {
        #[arg(long)]
        model: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        task: Option<String>,
        /// split.json from `train`; enforces train/test disjointness.
        #[arg(long)]
        split: Option<PathBuf>,
        /// Directory for report.json and per-loop predictions.csv.
        #[arg(long = "out")]
        output: Option<PathBuf>,
    },
    /// Per-category corpus statistics from loops JSONL.
    Stats {
        #[arg(long = "in")]
        input: PathBuf,
        /// Write the table as JSON here as well as printing it.
        #[arg(long = "out")]
        output: Option<PathBuf>,
    },
    /// Compare analytic gradients with central finite differences.
    Gradcheck {
        #[arg(long, default_value_t = 8)]
        d: usize,
        #[arg(long, default_value_t = 2)]
        heads: usize,
        #[arg(long, default_value_t = 1)]
        layers: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 1e-4)]
        eps: f64,
        /// Write the per-tensor report as JSON here.
        #[arg(long = "out")]
        output: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    // Argument mistakes are user errors (exit 1); help and version exit 0.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Extract { input, output } => commands::extract(&input, output.as_deref()),
        Command::Synth {
            output,
            templates,
            variants,
            nonparallel,
            seed,
        } => commands::synth(&output, templates.as_deref(), variants, nonparallel, seed),
        Command::Graph {
            input,
            output,
            vocab_out,
            vocab_in,
            min_freq,
        } => commands::graph(
            &input,
            &output,
            vocab_out.as_deref(),
            vocab_in.as_deref(),
            min_freq,
        ),
        Command::Train {
            input,
            output,
            task,
            seed,
            config,
            vocab,
            d,
            heads,
            layers,
            lr,
            epochs,
            batch_size,
            patience,
            val_frac,
            test_frac,
        } => commands::train(commands::TrainArgs {
            input,
            output,
            task,
            seed,
            config_file: config,
            vocab,
            d,
            heads,
            layers,
            lr,
            epochs,
            batch_size,
            patience,
            val_frac,
            test_frac,
        }),
        Command::Predict {
            models,
            input,
            output,
        } => commands::predict(&models, &input, output.as_deref()),
        Command::Eval {
            model,
            input,
            task,
            split,
            output,
        } => commands::eval(
            &model,
            &input,
            task.as_deref(),
            split.as_deref(),
            output.as_deref(),
        ),
        Command::Stats { input, output } => commands::stats(&input, output.as_deref()),
        Command::Gradcheck {
            d,
            heads,
            layers,
            seed,
            eps,
            output,
        } => commands::gradcheck(d, heads, layers, seed, eps, output.as_deref()),
    };

    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::User(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
        Err(CliError::Internal(message)) => {
            eprintln!("internal error: {message}");
            ExitCode::from(2)
        }
    }
}
