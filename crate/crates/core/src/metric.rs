//! Sentence-level precision statistics and their composition into a corpus
//! score.
//!
//! GLEU+ precision for order n rewards candidate n-grams matched in the
//! reference and subtracts, for every candidate n-gram, how much more often
//! it is matched in the source than in the reference:
//!
//! ```text
//! numerator_n   = Σ_{g ∈ C} min(C[g], R[g])
//!               − Σ_{g ∈ C} max(0, min(C[g], S[g]) − min(C[g], R[g]))
//! denominator_n = Σ_{g ∈ C} C[g]
//! ```
//!
//! The numerator is clamped to zero per sentence, so corpus statistics are
//! plain sums of non-negative integers. The corpus score is the BLEU
//! composition: brevity penalty times the weighted geometric mean of the
//! corpus precisions.

use std::fmt;
use std::ops::AddAssign;
use std::str::FromStr;

use serde::Serialize;

use crate::text::{window_counts, Sentence};
use crate::{Error, Result};

pub const DEFAULT_MAX_ORDER: usize = 4;
pub const DEFAULT_FLOOR_EPSILON: f64 = 1e-9;

/// Which precision statistic a corpus is scored with.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum Metric {
    #[default]
    #[value(name = "gleu-plus")]
    GleuPlus,
    Bleu,
}

/// What to do when a corpus precision is zero.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub enum Smoothing {
    /// A zero precision makes the score zero.
    #[default]
    None,
    /// Zero precisions are replaced by the given epsilon.
    Floor(f64),
}

impl FromStr for Smoothing {
    type Err = Error;

    /// Parses `none`, `floor` or `floor:EPS`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || {
            Error::InvalidConfig(format!(
                "unknown smoothing `{s}`, expected none or floor:EPS"
            ))
        };
        match s {
            "none" => Ok(Smoothing::None),
            "floor" => Ok(Smoothing::Floor(DEFAULT_FLOOR_EPSILON)),
            _ => {
                let eps: f64 = s
                    .strip_prefix("floor:")
                    .ok_or_else(bad)?
                    .parse()
                    .map_err(|_| bad())?;
                if eps > 0.0 && eps <= 1.0 {
                    Ok(Smoothing::Floor(eps))
                } else {
                    Err(Error::InvalidConfig(format!(
                        "smoothing epsilon must lie in (0, 1], got {eps}"
                    )))
                }
            }
        }
    }
}

impl fmt::Display for Smoothing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Smoothing::None => f.write_str("none"),
            Smoothing::Floor(eps) => write!(f, "floor:{eps}"),
        }
    }
}

/// Maximum n-gram order, geometric-mean weights, smoothing and metric kind.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricConfig {
    max_order: usize,
    weights: Vec<f64>,
    smoothing: Smoothing,
    metric: Metric,
}

impl Default for MetricConfig {
    fn default() -> Self {
        Self::with_order(DEFAULT_MAX_ORDER).expect("default order is valid")
    }
}

impl MetricConfig {
    /// Orders 1..=`max_order` with uniform weights.
    pub fn with_order(max_order: usize) -> Result<Self> {
        if max_order == 0 {
            return Err(Error::InvalidOrder(0));
        }
        Ok(Self {
            max_order,
            weights: vec![1.0 / max_order as f64; max_order],
            smoothing: Smoothing::None,
            metric: Metric::GleuPlus,
        })
    }

    /// One weight per order; weights must be non-negative and sum to 1.
    pub fn with_weights(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidOrder(0));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidConfig("weights must be non-negative".into()));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidConfig(format!("weights sum to {sum}, not 1")));
        }
        Ok(Self {
            max_order: weights.len(),
            weights,
            smoothing: Smoothing::None,
            metric: Metric::GleuPlus,
        })
    }

    pub fn smoothing(mut self, smoothing: Smoothing) -> Self {
        self.smoothing = smoothing;
        self
    }

    pub fn metric(mut self, metric: Metric) -> Self {
        self.metric = metric;
        self
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn smoothing_mode(&self) -> Smoothing {
        self.smoothing
    }

    pub fn metric_kind(&self) -> Metric {
        self.metric
    }

    /// Statistics for one sentence under the configured metric.
    pub fn sentence_stats(
        &self,
        candidate: &Sentence,
        source: &Sentence,
        reference: &Sentence,
    ) -> PrecisionStats {
        match self.metric {
            Metric::GleuPlus => gleu_precision_stats(candidate, source, reference, self),
            Metric::Bleu => bleu_precision_stats(candidate, reference, self),
        }
    }
}

/// Per-order numerator/denominator pairs plus candidate and reference lengths.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrecisionStats {
    pub numerators: Vec<i64>,
    pub denominators: Vec<u64>,
    pub cand_len: u64,
    pub ref_len: u64,
}

impl PrecisionStats {
    pub fn zeros(max_order: usize) -> Self {
        Self {
            numerators: vec![0; max_order],
            denominators: vec![0; max_order],
            cand_len: 0,
            ref_len: 0,
        }
    }

    pub fn max_order(&self) -> usize {
        self.numerators.len()
    }

    /// Precision at order `n` (1-based); `None` when the denominator is 0.
    pub fn precision(&self, n: usize) -> Option<f64> {
        let den = self.denominators[n - 1];
        (den > 0).then(|| self.numerators[n - 1] as f64 / den as f64)
    }
}

impl AddAssign<&PrecisionStats> for PrecisionStats {
    /// Panics if the orders differ; use [`sum_stats`] for a checked sum.
    fn add_assign(&mut self, rhs: &PrecisionStats) {
        assert_eq!(self.max_order(), rhs.max_order(), "order mismatch");
        for (a, b) in self.numerators.iter_mut().zip(&rhs.numerators) {
            *a += b;
        }
        for (a, b) in self.denominators.iter_mut().zip(&rhs.denominators) {
            *a += b;
        }
        self.cand_len += rhs.cand_len;
        self.ref_len += rhs.ref_len;
    }
}

fn precision_stats(
    candidate: &Sentence,
    source: Option<&Sentence>,
    reference: &Sentence,
    max_order: usize,
) -> PrecisionStats {
    let mut stats = PrecisionStats::zeros(max_order);
    stats.cand_len = candidate.len() as u64;
    stats.ref_len = reference.len() as u64;
    for n in 1..=max_order {
        let cand = window_counts(candidate.tokens(), n);
        if cand.is_empty() {
            continue;
        }
        let refs = window_counts(reference.tokens(), n);
        let srcs = source.map(|s| window_counts(s.tokens(), n));
        let mut matches = 0i64;
        let mut penalty = 0i64;
        let mut total = 0u64;
        for (gram, &c) in &cand {
            let c_r = c.min(refs.get(gram).copied().unwrap_or(0));
            matches += i64::from(c_r);
            total += u64::from(c);
            if let Some(srcs) = &srcs {
                let c_s = c.min(srcs.get(gram).copied().unwrap_or(0));
                penalty += i64::from(c_s.saturating_sub(c_r));
            }
        }
        stats.numerators[n - 1] = (matches - penalty).max(0);
        stats.denominators[n - 1] = total;
    }
    stats
}

/// GLEU+ statistics of `candidate` against one `reference`, penalising
/// n-grams kept from `source` that the reference changed.
pub fn gleu_precision_stats(
    candidate: &Sentence,
    source: &Sentence,
    reference: &Sentence,
    config: &MetricConfig,
) -> PrecisionStats {
    precision_stats(candidate, Some(source), reference, config.max_order)
}

/// BLEU clipped-match statistics of `candidate` against one `reference`.
pub fn bleu_precision_stats(
    candidate: &Sentence,
    reference: &Sentence,
    config: &MetricConfig,
) -> PrecisionStats {
    precision_stats(candidate, None, reference, config.max_order)
}

/// Componentwise sum. An empty input sums to zero stats of order
/// [`DEFAULT_MAX_ORDER`].
pub fn sum_stats<'a, I>(stats: I) -> Result<PrecisionStats>
where
    I: IntoIterator<Item = &'a PrecisionStats>,
{
    let mut iter = stats.into_iter();
    let Some(first) = iter.next() else {
        return Ok(PrecisionStats::zeros(DEFAULT_MAX_ORDER));
    };
    let mut total = first.clone();
    for s in iter {
        if s.max_order() != total.max_order() {
            return Err(Error::OrderMismatch {
                left: total.max_order(),
                right: s.max_order(),
            });
        }
        total += s;
    }
    Ok(total)
}

/// BLEU brevity penalty for candidate length `cand_len` against `ref_len`.
pub fn brevity_penalty(cand_len: u64, ref_len: u64) -> f64 {
    if cand_len >= ref_len {
        1.0
    } else if cand_len == 0 {
        0.0
    } else {
        (1.0 - ref_len as f64 / cand_len as f64).exp()
    }
}

/// Brevity penalty times the weighted geometric mean of the precisions.
///
/// Orders with a zero denominator count as zero precision. Under
/// [`Smoothing::None`] any zero precision yields 0; under
/// [`Smoothing::Floor`] it is replaced by epsilon. A corpus with no
/// candidate n-grams at all scores 0 either way.
pub fn compose_score(corpus_stats: &PrecisionStats, config: &MetricConfig) -> f64 {
    debug_assert_eq!(corpus_stats.max_order(), config.max_order);
    if corpus_stats.denominators.iter().all(|&d| d == 0) {
        return 0.0;
    }
    let mut log_mean = 0.0;
    for (n, &w) in (1..=config.max_order).zip(&config.weights) {
        let p = match corpus_stats.precision(n) {
            Some(p) if p > 0.0 => p,
            _ => match config.smoothing {
                Smoothing::None => return 0.0,
                Smoothing::Floor(eps) => eps,
            },
        };
        log_mean += w * p.ln();
    }
    let score = brevity_penalty(corpus_stats.cand_len, corpus_stats.ref_len) * log_mean.exp();
    score.clamp(0.0, 1.0)
}
