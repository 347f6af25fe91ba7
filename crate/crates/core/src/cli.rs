//! The `gleu` command line.
//!
//! Exit status is 0 on success, 1 on data errors (unreadable or misaligned
//! files, id mismatches) and 2 on usage errors. Reports go to standard
//! output; diagnostics and the `--per-sentence` dump go to standard error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand};

use crate::io::{
    emit_per_sentence, emit_report, load_parallel_corpus, load_ranking, load_scores, Format,
    ParallelCorpusFiles,
};
use crate::meta_eval::{correlate, rank_systems};
use crate::metric::{Metric, MetricConfig, Smoothing, DEFAULT_MAX_ORDER};
use crate::sampler::{evaluate, SamplerConfig, DEFAULT_ITERATIONS, DEFAULT_SEED};
use crate::text::TokenizeOptions;
use crate::Result;

#[derive(Debug, Parser)]
#[command(
    name = "gleu",
    version,
    about = "GLEU+ scoring for grammatical error correction"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Score one system output against one or more reference sets.
    Score(ScoreArgs),
    /// Score several system outputs with a shared seed and rank them.
    Compare(CompareArgs),
    /// Correlate a metric's ranking or scores with a gold ranking.
    Correlate(CorrelateArgs),
}

#[derive(Debug, Args)]
struct ScoreArgs {
    /// Source (uncorrected) sentences, one per line.
    #[arg(short, long)]
    source: PathBuf,

    /// System output, one sentence per line.
    #[arg(short = 'y', long)]
    hypothesis: PathBuf,

    /// Reference set, one sentence per line (repeatable).
    #[arg(short, long, required = true)]
    reference: Vec<PathBuf>,

    #[command(flatten)]
    scoring: ScoringArgs,
}

#[derive(Debug, Args)]
struct CompareArgs {
    #[arg(short, long)]
    source: PathBuf,

    /// System output (repeat for each system, at least two).
    #[arg(short = 'y', long, required = true)]
    hypothesis: Vec<PathBuf>,

    #[arg(short, long, required = true)]
    reference: Vec<PathBuf>,

    #[command(flatten)]
    scoring: ScoringArgs,
}

#[derive(Debug, Args)]
struct ScoringArgs {
    /// Maximum n-gram order.
    #[arg(short = 'n', long, default_value_t = DEFAULT_MAX_ORDER as u64,
          value_parser = clap::value_parser!(u64).range(1..))]
    order: u64,

    /// Number of sampling iterations.
    #[arg(short, long, default_value_t = DEFAULT_ITERATIONS as u64,
          value_parser = clap::value_parser!(u64).range(1..))]
    iterations: u64,

    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Case-fold all text before scoring.
    #[arg(long)]
    lowercase: bool,

    /// `none` or `floor:EPS`.
    #[arg(long, default_value = "none")]
    smoothing: Smoothing,

    #[arg(long, value_enum, default_value_t)]
    format: Format,

    /// Dump per-sentence statistics to standard error.
    #[arg(long)]
    per_sentence: bool,

    #[arg(long, value_enum, default_value_t)]
    metric: Metric,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("other").required(true).args(["scores", "metric_ranking"]))]
struct CorrelateArgs {
    /// Gold ranking: one id per line, best first, optional TAB score.
    #[arg(long)]
    gold: PathBuf,

    /// Metric scores: `id<TAB>score` per line.
    #[arg(long)]
    scores: Option<PathBuf>,

    /// Metric ranking: one id per line, best first.
    #[arg(long)]
    metric_ranking: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

impl ScoringArgs {
    fn metric_config(&self) -> Result<MetricConfig> {
        Ok(MetricConfig::with_order(self.order as usize)?
            .smoothing(self.smoothing)
            .metric(self.metric))
    }

    fn sampler_config(&self) -> SamplerConfig {
        SamplerConfig {
            iterations: self.iterations as usize,
            seed: self.seed,
        }
    }

    fn tokenize_options(&self) -> TokenizeOptions {
        TokenizeOptions {
            lowercase: self.lowercase,
        }
    }
}

/// Parses `args` (including the program name) and runs the subcommand,
/// returning the process exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => return report_clap_error(e, stdout, stderr),
    };
    if let Command::Compare(args) = &cli.command {
        if args.hypothesis.len() < 2 {
            let e = Cli::command().error(
                ErrorKind::TooFewValues,
                "compare needs at least two --hypothesis files",
            );
            return report_clap_error(e, stdout, stderr);
        }
    }
    let result = match &cli.command {
        Command::Score(args) => run_score(args, stderr),
        Command::Compare(args) => run_compare(args, stderr),
        Command::Correlate(args) => run_correlate(args),
    };
    match result {
        Ok(text) => {
            if stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .is_err()
            {
                return 1;
            }
            0
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            1
        }
    }
}

fn report_clap_error(e: clap::Error, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let text = e.render().to_string();
    if e.use_stderr() {
        let _ = stderr.write_all(text.as_bytes());
        2
    } else {
        let _ = stdout.write_all(text.as_bytes());
        0
    }
}

fn run_score(args: &ScoreArgs, stderr: &mut dyn Write) -> Result<String> {
    let files = ParallelCorpusFiles {
        source: args.source.clone(),
        hypotheses: vec![args.hypothesis.clone()],
        references: args.reference.clone(),
        human_ranking: None,
    };
    let scoring = &args.scoring;
    let systems = load_parallel_corpus(
        &files,
        &scoring.metric_config()?,
        scoring.tokenize_options(),
    )?;
    let system = &systems[0];
    if scoring.per_sentence {
        let _ = stderr.write_all(emit_per_sentence(&system.system, &system.corpus).as_bytes());
    }
    let score = evaluate(&system.corpus, &scoring.sampler_config());
    Ok(emit_report(&score, scoring.format))
}

fn run_compare(args: &CompareArgs, stderr: &mut dyn Write) -> Result<String> {
    let files = ParallelCorpusFiles {
        source: args.source.clone(),
        hypotheses: args.hypothesis.clone(),
        references: args.reference.clone(),
        human_ranking: None,
    };
    let scoring = &args.scoring;
    let systems = load_parallel_corpus(
        &files,
        &scoring.metric_config()?,
        scoring.tokenize_options(),
    )?;
    let sampler = scoring.sampler_config();
    let mut means = Vec::with_capacity(systems.len());
    for system in &systems {
        if scoring.per_sentence {
            let _ = stderr.write_all(emit_per_sentence(&system.system, &system.corpus).as_bytes());
        }
        means.push((
            system.system.clone(),
            evaluate(&system.corpus, &sampler).mean,
        ));
    }
    Ok(emit_report(&rank_systems(means)?, scoring.format))
}

fn run_correlate(args: &CorrelateArgs) -> Result<String> {
    let gold = load_ranking(&args.gold)?;
    let other = match (&args.scores, &args.metric_ranking) {
        (Some(path), _) => load_scores(path)?,
        (None, Some(path)) => load_ranking(path)?,
        (None, None) => unreachable!("clap enforces the argument group"),
    };
    Ok(emit_report(&correlate(&gold, &other)?, args.format))
}
