//! Whitespace tokenization and n-gram multisets.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::{Error, Result};

/// Tokenizer settings. Inputs are assumed pre-tokenized, so the only knob is
/// case folding, which is off by default.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TokenizeOptions {
    pub lowercase: bool,
}

/// An ordered sequence of whitespace-free tokens. May be empty.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Sentence {
    tokens: Vec<String>,
}

impl Sentence {
    /// Builds a sentence from tokens that already contain no whitespace.
    ///
    /// Tokens with embedded whitespace are re-split, so the no-whitespace
    /// invariant holds for every constructed value.
    pub fn from_tokens<I, S>(tokens: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let tokens = tokens
            .into_iter()
            .flat_map(|t| {
                t.as_ref()
                    .split_whitespace()
                    .map(str::to_owned)
                    .collect::<Vec<_>>()
            })
            .collect();
        Self { tokens }
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

impl fmt::Display for Sentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tokens.join(" "))
    }
}

/// Splits `raw_line` into its maximal non-whitespace runs.
pub fn tokenize(raw_line: &str, options: TokenizeOptions) -> Sentence {
    let tokens = raw_line
        .split_whitespace()
        .map(|t| {
            if options.lowercase {
                t.to_lowercase()
            } else {
                t.to_owned()
            }
        })
        .collect();
    Sentence { tokens }
}

/// A multiset of n-grams of a single order. Every stored count is at least 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NGramCounts {
    order: usize,
    counts: HashMap<Vec<String>, u32>,
}

impl NGramCounts {
    pub fn empty(order: usize) -> Result<Self> {
        check_order(order)?;
        Ok(Self {
            order,
            counts: HashMap::new(),
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Occurrences of `ngram`, 0 when absent.
    pub fn get<S: AsRef<str>>(&self, ngram: &[S]) -> u32 {
        let key: Vec<String> = ngram.iter().map(|s| s.as_ref().to_owned()).collect();
        self.counts.get(&key).copied().unwrap_or(0)
    }

    /// Sum of all counts.
    pub fn total(&self) -> u64 {
        self.counts.values().map(|&c| u64::from(c)).sum()
    }

    /// Number of distinct n-grams.
    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[String], u32)> {
        self.counts.iter().map(|(k, &v)| (k.as_slice(), v))
    }
}

fn check_order(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidOrder(n))
    } else {
        Ok(())
    }
}

/// Counts every contiguous window of length `n`.
pub fn extract_ngrams(sentence: &Sentence, n: usize) -> Result<NGramCounts> {
    check_order(n)?;
    let counts = window_counts(sentence.tokens(), n)
        .into_iter()
        .map(|(k, v)| (k.to_vec(), v))
        .collect();
    Ok(NGramCounts { order: n, counts })
}

/// Per-key minimum of two multisets of the same order.
pub fn clipped_count(a: &NGramCounts, b: &NGramCounts) -> Result<NGramCounts> {
    if a.order != b.order {
        return Err(Error::OrderMismatch {
            left: a.order,
            right: b.order,
        });
    }
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let counts = small
        .counts
        .iter()
        .filter_map(|(k, &v)| large.counts.get(k).map(|&w| (k.clone(), v.min(w))))
        .collect();
    Ok(NGramCounts {
        order: a.order,
        counts,
    })
}

/// Borrowed n-gram counting used on the scoring hot path. `n` must be >= 1.
pub(crate) fn window_counts(tokens: &[String], n: usize) -> HashMap<&[String], u32> {
    debug_assert!(n >= 1);
    let mut counts = HashMap::new();
    if tokens.len() >= n {
        for w in tokens.windows(n) {
            *counts.entry(w).or_insert(0) += 1;
        }
    }
    counts
}
