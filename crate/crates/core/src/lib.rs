//! GLEU+ scoring for grammatical error correction.
//!
//! The crate is organised bottom-up:
//!
//! * [`text`] turns raw lines into [`Sentence`]s and counts n-grams.
//! * [`metric`] computes per-sentence precision statistics (the GLEU+
//!   modified precision, plus plain BLEU as a baseline) and composes corpus
//!   statistics into a score with the BLEU brevity penalty and weighted
//!   geometric mean.
//! * [`sampler`] precomputes statistics for every (sentence, reference) pair
//!   and runs the Monte-Carlo reference-sampling evaluation.
//! * [`meta_eval`] ranks systems and correlates rankings (Pearson, Spearman,
//!   mean rank displacement).
//! * [`io`] loads one-sentence-per-line corpora and ranking files, and
//!   renders reports as TSV or JSON lines.
//! * [`cli`] is the `gleu` command-line front end.
//!
//! ```
//! use gleu::{EvalCorpus, MetricConfig, SamplerConfig, TokenizeOptions};
//!
//! let source = vec!["the cat sit".to_string()];
//! let hypothesis = vec!["the cat sat".to_string()];
//! let references = vec![vec!["the cat sat".to_string()]];
//! let corpus = EvalCorpus::build(
//!     &source,
//!     &hypothesis,
//!     &references,
//!     &MetricConfig::with_order(1)?,
//!     TokenizeOptions::default(),
//! )?;
//! let score = gleu::evaluate(&corpus, &SamplerConfig::default());
//! assert_eq!(score.mean, 1.0);
//! # Ok::<(), gleu::Error>(())
//! ```

pub mod cli;
mod error;
pub mod io;
pub mod meta_eval;
pub mod metric;
pub mod sampler;
pub mod text;

pub use error::{Error, Result};
pub use meta_eval::{
    mean_rank_displacement, pearson, rank_systems, spearman, CorrelationReport, RankedSystem,
    RankingTable,
};
pub use metric::{
    bleu_precision_stats, brevity_penalty, compose_score, gleu_precision_stats, sum_stats, Metric,
    MetricConfig, PrecisionStats, Smoothing,
};
pub use sampler::{
    evaluate, sample_assignment, CorpusScore, EvalCorpus, SamplerConfig, SentenceTriple,
};
pub use text::{clipped_count, extract_ngrams, tokenize, NGramCounts, Sentence, TokenizeOptions};
