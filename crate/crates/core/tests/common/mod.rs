#![allow(dead_code)]

use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::Rng;

/// Table 1 rankings of the CoNLL-2014 systems, best first.
pub const HUMAN: [&str; 13] = [
    "CAMB", "AMU", "RAC", "CUUI", "source", "POST", "UFC", "SJTU", "IITB", "PKU", "UMC", "NTHU",
    "IPN",
];
pub const M2: [&str; 13] = [
    "CUUI", "CAMB", "AMU", "POST", "UMC", "NTHU", "PKU", "RAC", "SJTU", "UFC", "IPN", "IITB",
    "source",
];
pub const GLEU0: [&str; 13] = [
    "CUUI", "AMU", "UFC", "CAMB", "source", "IITB", "SJTU", "PKU", "UMC", "NTHU", "POST", "RAC",
    "IPN",
];
pub const GLEU_PLUS: [&str; 13] = [
    "CAMB", "CUUI", "AMU", "UMC", "PKU", "POST", "SJTU", "NTHU", "UFC", "IITB", "source", "RAC",
    "IPN",
];

/// Literal evaluation of the modified precision for one order, written
/// without hash maps: n-grams are enumerated as windows and counted by scan.
/// Returns the sentence-level clamped numerator and the denominator.
pub fn brute_force_precision(c: &[String], s: &[String], r: &[String], n: usize) -> (i64, u64) {
    fn windows(t: &[String], n: usize) -> Vec<Vec<String>> {
        if t.len() < n {
            return vec![];
        }
        (0..=t.len() - n).map(|i| t[i..i + n].to_vec()).collect()
    }
    fn occurrences(g: &[String], all: &[Vec<String>]) -> i64 {
        all.iter().filter(|w| w.as_slice() == g).count() as i64
    }
    let cw = windows(c, n);
    let sw = windows(s, n);
    let rw = windows(r, n);
    let mut distinct: Vec<Vec<String>> = Vec::new();
    for w in &cw {
        if !distinct.contains(w) {
            distinct.push(w.clone());
        }
    }
    let count_cr = |g: &[String]| occurrences(g, &cw).min(occurrences(g, &rw));
    let count_cs = |g: &[String]| occurrences(g, &cw).min(occurrences(g, &sw));
    let mut matched = 0;
    let mut penalty = 0;
    for g in &distinct {
        // g ∈ C∩R
        if occurrences(g, &rw) > 0 {
            matched += count_cr(g);
        }
        // g ∈ C∩S
        if occurrences(g, &sw) > 0 {
            penalty += 0.max(count_cs(g) - count_cr(g));
        }
    }
    let denominator: i64 = distinct.iter().map(|g| occurrences(g, &cw)).sum();
    ((matched - penalty).max(0), denominator as u64)
}

pub fn random_sentence<R: Rng>(rng: &mut R, alphabet: &[&str], max_len: usize) -> Vec<String> {
    let len = rng.gen_range(0..=max_len);
    (0..len)
        .map(|_| alphabet.choose(rng).unwrap().to_string())
        .collect()
}

/// A synthetic corpus: sources, one system output, and two references that
/// edit a few source tokens each.
pub fn synthetic_corpus<R: Rng>(
    rng: &mut R,
    sentences: usize,
) -> (Vec<String>, Vec<String>, Vec<Vec<String>>) {
    let vocab: Vec<String> = (0..200).map(|i| format!("w{i}")).collect();
    let edit = |rng: &mut R, toks: &[String]| -> String {
        toks.iter()
            .map(|t| {
                if rng.gen_bool(0.15) {
                    vocab.choose(rng).unwrap().clone()
                } else {
                    t.clone()
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    };
    let mut src = Vec::new();
    let mut hyp = Vec::new();
    let mut r1 = Vec::new();
    let mut r2 = Vec::new();
    for _ in 0..sentences {
        let len = rng.gen_range(5..40);
        let toks: Vec<String> = (0..len)
            .map(|_| vocab.choose(rng).unwrap().clone())
            .collect();
        src.push(toks.join(" "));
        hyp.push(edit(rng, &toks));
        r1.push(edit(rng, &toks));
        r2.push(edit(rng, &toks));
    }
    (src, hyp, vec![r1, r2])
}

pub fn write_lines(dir: &Path, name: &str, lines: &[String]) -> PathBuf {
    let path = dir.join(name);
    let mut body = lines.join("\n");
    body.push('\n');
    std::fs::write(&path, body).unwrap();
    path
}
