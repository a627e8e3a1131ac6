use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use maskprune::pipeline::{run_prune, run_score, run_stats, run_synth, RunConfig, RunMethod};

/// Training-free pruning of instance segmentation datasets by mask shape
/// complexity. Emits a machine summary as one JSON line on stdout; human
/// logs and degenerate-mask warnings go to stderr.
#[derive(Parser)]
#[command(name = "maskprune", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Worker threads for scoring. Defaults to MASKPRUNE_WORKERS or all
    /// cores. Never changes output bytes, only wall time.
    #[arg(long, global = true)]
    workers: Option<usize>,
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum MethodArg {
    #[default]
    Cb,
    Si,
    Scs,
    Random,
}

impl From<MethodArg> for RunMethod {
    fn from(arg: MethodArg) -> Self {
        match arg {
            MethodArg::Cb => RunMethod::Cb,
            MethodArg::Si => RunMethod::Si,
            MethodArg::Scs => RunMethod::Scs,
            MethodArg::Random => RunMethod::Random,
        }
    }
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum CrowdArg {
    /// Score crowd regions like any other instance.
    #[default]
    Score,
    /// Leave crowd regions unscored.
    Skip,
}

#[derive(Subcommand)]
enum Command {
    /// Score every instance and image, writing CSV reports.
    Score {
        #[arg(long)]
        annotations: PathBuf,
        /// Directory for instance_scores.csv and image_scores.csv.
        #[arg(long)]
        report: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        method: MethodArg,
        #[arg(long, value_enum, default_value_t)]
        crowd: CrowdArg,
    },
    /// Select the top images and write the pruned annotation file.
    Prune {
        #[arg(long)]
        annotations: PathBuf,
        /// Pruned annotation file; a .manifest.txt is written alongside.
        #[arg(long)]
        out: PathBuf,
        /// Optional directory for coverage.csv.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Fraction of images to remove, in [0, 1).
        #[arg(long)]
        pruning_rate: f64,
        #[arg(long, value_enum, default_value_t)]
        method: MethodArg,
        /// Random generator seed (required for --method random).
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value_t)]
        crowd: CrowdArg,
    },
    /// Write class and area distribution reports.
    Stats {
        #[arg(long)]
        annotations: PathBuf,
        /// Directory for distribution.json.
        #[arg(long)]
        report: PathBuf,
    },
    /// Generate a synthetic annotation corpus.
    Synth {
        #[arg(long)]
        out: PathBuf,
        /// Number of images to generate.
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn configure_workers(flag: Option<usize>) {
    let workers = flag.or_else(|| {
        std::env::var("MASKPRUNE_WORKERS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    if let Some(n) = workers.filter(|&n| n > 0) {
        // A failure here means a pool already exists, which is fine.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_workers(cli.workers);

    let result = match cli.command {
        Command::Score { annotations, report, method, crowd } => run_score(&RunConfig {
            annotations: Some(annotations),
            report: Some(report),
            method: method.into(),
            skip_crowds: matches!(crowd, CrowdArg::Skip),
            ..RunConfig::default()
        }),
        Command::Prune { annotations, out, report, pruning_rate, method, seed, crowd } => {
            run_prune(&RunConfig {
                annotations: Some(annotations),
                out: Some(out),
                report,
                pruning_rate,
                method: method.into(),
                seed,
                skip_crowds: matches!(crowd, CrowdArg::Skip),
                ..RunConfig::default()
            })
        }
        Command::Stats { annotations, report } => run_stats(&RunConfig {
            annotations: Some(annotations),
            report: Some(report),
            ..RunConfig::default()
        }),
        Command::Synth { out, count, seed } => run_synth(&RunConfig {
            out: Some(out),
            count,
            seed: Some(seed),
            ..RunConfig::default()
        }),
    };

    match result {
        Ok(output) => {
            for warning in &output.warnings {
                eprintln!("warning: {warning}");
            }
            println!("{}", output.summary);
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
