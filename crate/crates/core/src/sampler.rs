//! Monte-Carlo reference sampling.
//!
//! Each iteration draws one reference per sentence, uniformly and
//! independently, sums the precomputed statistics of the drawn pairs and
//! composes a corpus score. The reported score is the mean over iterations.
//!
//! Iteration `i` draws from a ChaCha8 stream keyed by the master seed with
//! stream id `i`, so results do not depend on how iterations are scheduled
//! across threads, and a run with more iterations extends a shorter run
//! with the same seed.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::metric::{compose_score, MetricConfig, PrecisionStats};
use crate::text::{tokenize, Sentence, TokenizeOptions};
use crate::{Error, Result};

pub const DEFAULT_ITERATIONS: usize = 500;
pub const DEFAULT_SEED: u64 = 0;

/// z-value of the two-sided normal 95% interval.
const Z_95: f64 = 1.959_963_984_540_054;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SamplerConfig {
    pub iterations: usize,
    pub seed: u64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self {
            iterations: DEFAULT_ITERATIONS,
            seed: DEFAULT_SEED,
        }
    }
}

/// One source sentence, its system output, and every available reference.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SentenceTriple {
    pub source: Sentence,
    pub candidate: Sentence,
    pub references: Vec<Sentence>,
}

/// A corpus with the statistics of every (sentence, reference) pair
/// materialised up front.
#[derive(Clone, Debug)]
pub struct EvalCorpus {
    sentences: Vec<SentenceTriple>,
    stats: Vec<Vec<PrecisionStats>>,
    config: MetricConfig,
}

impl EvalCorpus {
    /// Builds a corpus from aligned lines. `reference_sets` holds one line
    /// sequence per annotator.
    pub fn build<S: AsRef<str>>(
        source_lines: &[S],
        candidate_lines: &[S],
        reference_sets: &[Vec<S>],
        config: &MetricConfig,
        tokenize_options: TokenizeOptions,
    ) -> Result<Self> {
        if reference_sets.is_empty() {
            return Err(Error::Alignment(
                "at least one reference set is required".into(),
            ));
        }
        let n = source_lines.len();
        if candidate_lines.len() != n {
            return Err(Error::Alignment(format!(
                "source has {n} lines but candidate has {}",
                candidate_lines.len()
            )));
        }
        for (k, set) in reference_sets.iter().enumerate() {
            if set.len() != n {
                return Err(Error::Alignment(format!(
                    "source has {n} lines but reference set {k} has {}",
                    set.len()
                )));
            }
        }
        let tok = |line: &S| tokenize(line.as_ref(), tokenize_options);
        let sentences = (0..n)
            .map(|i| SentenceTriple {
                source: tok(&source_lines[i]),
                candidate: tok(&candidate_lines[i]),
                references: reference_sets.iter().map(|set| tok(&set[i])).collect(),
            })
            .collect();
        Self::from_sentences(sentences, config)
    }

    /// Builds a corpus from already tokenized triples; reference counts may
    /// differ between sentences but none may be zero.
    pub fn from_sentences(sentences: Vec<SentenceTriple>, config: &MetricConfig) -> Result<Self> {
        if let Some(i) = sentences.iter().position(|t| t.references.is_empty()) {
            return Err(Error::NoReferences { sentence: i });
        }
        let stats = sentences
            .par_iter()
            .map(|t| {
                t.references
                    .iter()
                    .map(|r| config.sentence_stats(&t.candidate, &t.source, r))
                    .collect()
            })
            .collect();
        Ok(Self {
            sentences,
            stats,
            config: config.clone(),
        })
    }

    pub fn sentences(&self) -> &[SentenceTriple] {
        &self.sentences
    }

    pub fn config(&self) -> &MetricConfig {
        &self.config
    }

    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }

    /// Number of references of each sentence.
    pub fn reference_counts(&self) -> impl Iterator<Item = usize> + '_ {
        self.stats.iter().map(Vec::len)
    }

    /// Cached statistics of sentence `sentence` against reference `reference`.
    pub fn stats(&self, sentence: usize, reference: usize) -> &PrecisionStats {
        &self.stats[sentence][reference]
    }

    /// Total number of cached (sentence, reference) entries.
    pub fn stats_len(&self) -> usize {
        self.stats.iter().map(Vec::len).sum()
    }

    /// Corpus statistics for one reference choice per sentence.
    ///
    /// Panics if `assignment` has the wrong length or an index is out of range.
    pub fn assignment_stats(&self, assignment: &[usize]) -> PrecisionStats {
        assert_eq!(assignment.len(), self.len(), "assignment length");
        let mut total = PrecisionStats::zeros(self.config.max_order());
        for (per_sentence, &k) in self.stats.iter().zip(assignment) {
            total += &per_sentence[k];
        }
        total
    }

    /// Corpus score for one reference choice per sentence.
    pub fn assignment_score(&self, assignment: &[usize]) -> f64 {
        compose_score(&self.assignment_stats(assignment), &self.config)
    }
}

/// The random stream used by iteration `iteration` of a run seeded with `seed`.
pub fn iteration_rng(seed: u64, iteration: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(iteration);
    rng
}

/// Draws one reference index per sentence, uniformly and independently.
pub fn sample_assignment<R: Rng + ?Sized>(corpus: &EvalCorpus, rng: &mut R) -> Vec<usize> {
    corpus
        .reference_counts()
        .map(|k| if k == 1 { 0 } else { rng.gen_range(0..k) })
        .collect()
}

/// Result of a sampled evaluation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorpusScore {
    pub iteration_scores: Vec<f64>,
    pub mean: f64,
    pub stdev: f64,
    pub ci95_half_width: f64,
    pub iterations: usize,
    pub seed: u64,
}

impl CorpusScore {
    /// Summarises per-iteration scores. `stdev` is the sample standard
    /// deviation (0 for a single iteration) and the interval is the normal
    /// approximation `1.96 * stdev / sqrt(iterations)`.
    pub fn from_scores(iteration_scores: Vec<f64>, seed: u64) -> Self {
        let n = iteration_scores.len();
        // shifted by the first score so that a constant series has an exact mean
        let mean = match iteration_scores.first() {
            None => 0.0,
            Some(&x0) => x0 + iteration_scores.iter().map(|x| x - x0).sum::<f64>() / n as f64,
        };
        let stdev = if n < 2 {
            0.0
        } else {
            let ss: f64 = iteration_scores.iter().map(|x| (x - mean).powi(2)).sum();
            (ss / (n - 1) as f64).sqrt()
        };
        let ci95_half_width = if n == 0 {
            0.0
        } else {
            Z_95 * stdev / (n as f64).sqrt()
        };
        Self {
            iteration_scores,
            mean,
            stdev,
            ci95_half_width,
            iterations: n,
            seed,
        }
    }
}

/// Runs the sampled evaluation. Iterations run in parallel on the current
/// rayon pool; scores are collected in iteration order.
///
/// Panics if `sampler.iterations` is 0.
pub fn evaluate(corpus: &EvalCorpus, sampler: &SamplerConfig) -> CorpusScore {
    assert!(
        sampler.iterations >= 1,
        "at least one iteration is required"
    );
    let scores = (0..sampler.iterations as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = iteration_rng(sampler.seed, i);
            corpus.assignment_score(&sample_assignment(corpus, &mut rng))
        })
        .collect();
    CorpusScore::from_scores(scores, sampler.seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn lines(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn build_counts_entries() {
        let src = lines(&["a b", "c d"]);
        let refs = vec![lines(&["a b", "c d"]), lines(&["a c", "c e"])];
        let corpus = EvalCorpus::build(
            &src,
            &src,
            &refs,
            &MetricConfig::default(),
            Default::default(),
        )
        .unwrap();
        assert_eq!(corpus.stats_len(), 4);
        assert_eq!(corpus.len(), 2);
    }

    #[test]
    fn build_rejects_misalignment() {
        let src = lines(&["a", "b", "c"]);
        let hyp = lines(&["a", "b"]);
        let err = EvalCorpus::build(
            &src,
            &hyp,
            std::slice::from_ref(&src),
            &MetricConfig::default(),
            Default::default(),
        )
        .unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains('3') && msg.contains('2'), "{msg}");

        let short_ref = vec![lines(&["a", "b"])];
        assert!(matches!(
            EvalCorpus::build(
                &src,
                &src,
                &short_ref,
                &MetricConfig::default(),
                Default::default()
            ),
            Err(Error::Alignment(_))
        ));
        let none: Vec<Vec<String>> = vec![];
        assert!(EvalCorpus::build(
            &src,
            &src,
            &none,
            &MetricConfig::default(),
            Default::default()
        )
        .is_err());
    }

    #[test]
    fn ragged_references() {
        let t = |c: &str, refs: &[&str]| SentenceTriple {
            source: tokenize(c, Default::default()),
            candidate: tokenize(c, Default::default()),
            references: refs
                .iter()
                .map(|r| tokenize(r, Default::default()))
                .collect(),
        };
        let corpus = EvalCorpus::from_sentences(
            vec![t("a b", &["a b"]), t("c d", &["c d", "c", "d c"])],
            &MetricConfig::default(),
        )
        .unwrap();
        assert_eq!(corpus.reference_counts().collect::<Vec<_>>(), vec![1, 3]);
        let mut rng = iteration_rng(7, 0);
        for _ in 0..50 {
            let a = sample_assignment(&corpus, &mut rng);
            assert_eq!(a[0], 0);
            assert!(a[1] < 3);
        }
        let empty = vec![SentenceTriple {
            references: vec![],
            ..t("a", &["a"])
        }];
        assert!(matches!(
            EvalCorpus::from_sentences(empty, &MetricConfig::default()),
            Err(Error::NoReferences { sentence: 0 })
        ));
    }

    #[test]
    fn empty_corpus_scores_zero() {
        let empty: Vec<String> = vec![];
        let corpus = EvalCorpus::build(
            &empty,
            &empty,
            std::slice::from_ref(&empty),
            &MetricConfig::default(),
            Default::default(),
        )
        .unwrap();
        let score = evaluate(
            &corpus,
            &SamplerConfig {
                iterations: 3,
                seed: 1,
            },
        );
        assert_eq!(score.iteration_scores, vec![0.0; 3]);
        assert_eq!(score.stdev, 0.0);
    }

    #[test]
    fn two_sentence_worked_example() {
        let src = lines(&["the cat sit", "the cat sat"]);
        let hyp = lines(&["the cat sat", "the cat sat"]);
        let refs = vec![lines(&["the cat sat", "the cat sit"])];
        let cfg = MetricConfig::with_order(1).unwrap();
        let corpus = EvalCorpus::build(&src, &hyp, &refs, &cfg, Default::default()).unwrap();
        let score = evaluate(&corpus, &SamplerConfig::default());
        assert_eq!(score.iterations, 500);
        assert_abs_diff_eq!(score.mean, 2.0 / 3.0, epsilon = 1e-9);
        assert_eq!(score.stdev, 0.0);
        assert!(score
            .iteration_scores
            .iter()
            .all(|&s| s == score.iteration_scores[0]));
    }

    #[test]
    fn single_reference_assignment_is_zero() {
        let src = lines(&["a b", "c"]);
        let corpus = EvalCorpus::build(
            &src,
            &src,
            std::slice::from_ref(&src),
            &MetricConfig::default(),
            Default::default(),
        )
        .unwrap();
        for seed in [0, 1, u64::MAX] {
            let mut rng = iteration_rng(seed, 3);
            assert_eq!(sample_assignment(&corpus, &mut rng), vec![0, 0]);
        }
    }

    #[test]
    fn assignment_is_deterministic() {
        let src = lines(&["a"; 20]);
        let refs = vec![src.clone(), src.clone(), src.clone()];
        let corpus = EvalCorpus::build(
            &src,
            &src,
            &refs,
            &MetricConfig::default(),
            Default::default(),
        )
        .unwrap();
        let a = sample_assignment(&corpus, &mut iteration_rng(5, 9));
        let b = sample_assignment(&corpus, &mut iteration_rng(5, 9));
        let c = sample_assignment(&corpus, &mut iteration_rng(5, 10));
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn uniform_frequencies() {
        let src = lines(&["a"]);
        let refs = vec![src.clone(), src.clone()];
        let corpus = EvalCorpus::build(
            &src,
            &src,
            &refs,
            &MetricConfig::default(),
            Default::default(),
        )
        .unwrap();
        let ones: usize = (0..10_000)
            .map(|i| sample_assignment(&corpus, &mut iteration_rng(0, i))[0])
            .sum();
        let freq = ones as f64 / 10_000.0;
        assert!((freq - 0.5).abs() <= 0.02, "frequency {freq}");
    }

    #[test]
    fn prefix_property() {
        let src = lines(&["a b c", "b c d", "c d e"]);
        let refs = vec![
            lines(&["a b d", "b c d", "c e"]),
            lines(&["a b c", "b d", "c d e"]),
        ];
        let corpus = EvalCorpus::build(
            &src,
            &src,
            &refs,
            &MetricConfig::with_order(2).unwrap(),
            Default::default(),
        )
        .unwrap();
        let short = evaluate(
            &corpus,
            &SamplerConfig {
                iterations: 10,
                seed: 42,
            },
        );
        let long = evaluate(
            &corpus,
            &SamplerConfig {
                iterations: 40,
                seed: 42,
            },
        );
        assert_eq!(short.iteration_scores[..], long.iteration_scores[..10]);
    }

    #[test]
    fn summary_statistics() {
        let s = CorpusScore::from_scores(vec![0.2, 0.4, 0.6], 3);
        assert_abs_diff_eq!(s.mean, 0.4, epsilon = 1e-15);
        assert_abs_diff_eq!(s.stdev, 0.2, epsilon = 1e-15);
        assert_abs_diff_eq!(s.ci95_half_width, Z_95 * 0.2 / 3f64.sqrt(), epsilon = 1e-15);
        let one = CorpusScore::from_scores(vec![0.7], 0);
        assert_eq!((one.stdev, one.ci95_half_width), (0.0, 0.0));
    }
}
