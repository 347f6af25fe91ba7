//! Loading one-sentence-per-line corpora and ranking files; rendering reports.
//!
//! TSV reports carry no header. Column orders:
//!
//! | report              | columns                                                   |
//! |---------------------|-----------------------------------------------------------|
//! | [`CorpusScore`]     | `mean  stdev  ci95_half_width  iterations  seed`           |
//! | [`RankingTable`]    | `rank  system  score` (one line per system)                |
//! | [`CorrelationReport`] | `pearson_r  spearman_rho  mean_rank_displacement`        |
//!
//! Reals are printed with 6 decimals; a missing value prints as `NA`.
//! JSON-lines output emits one object per record with the struct field names
//! as keys. Every line ends with `\n`.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::meta_eval::{rank_systems, CorrelationReport, RankingTable};
use crate::metric::MetricConfig;
use crate::sampler::{CorpusScore, EvalCorpus};
use crate::text::TokenizeOptions;
use crate::{Error, Result};

/// Reads a UTF-8 file as lines. A final trailing newline is optional and a
/// trailing `\r` on each line is dropped.
pub fn read_lines(path: &Path) -> Result<Vec<String>> {
    let bytes = fs::read(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })?;
    let text = String::from_utf8(bytes).map_err(|_| Error::InvalidUtf8 {
        path: path.to_owned(),
    })?;
    if text.is_empty() {
        return Ok(Vec::new());
    }
    let body = text.strip_suffix('\n').unwrap_or(&text);
    Ok(body
        .split('\n')
        .map(|l| l.strip_suffix('\r').unwrap_or(l).to_owned())
        .collect())
}

/// The file layout of an evaluation: one source file, one file per system,
/// one file per reference annotator, optionally a gold ranking.
#[derive(Clone, Debug, Default)]
pub struct ParallelCorpusFiles {
    pub source: PathBuf,
    pub hypotheses: Vec<PathBuf>,
    pub references: Vec<PathBuf>,
    pub human_ranking: Option<PathBuf>,
}

/// A system id and its corpus, ready for sampling.
#[derive(Clone, Debug)]
pub struct SystemCorpus {
    pub system: String,
    pub corpus: EvalCorpus,
}

/// System ids are file stems, or full paths when stems collide.
fn system_ids(paths: &[PathBuf]) -> Vec<String> {
    let stems: Vec<String> = paths
        .iter()
        .map(|p| {
            p.file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| p.display().to_string())
        })
        .collect();
    let mut sorted = stems.clone();
    sorted.sort();
    sorted.dedup();
    if sorted.len() == stems.len() {
        stems
    } else {
        paths.iter().map(|p| p.display().to_string()).collect()
    }
}

/// Loads and aligns all files, returning one corpus per hypothesis file.
pub fn load_parallel_corpus(
    files: &ParallelCorpusFiles,
    config: &MetricConfig,
    tokenize_options: TokenizeOptions,
) -> Result<Vec<SystemCorpus>> {
    let source = read_lines(&files.source)?;
    let expect = |path: &Path, lines: &[String]| -> Result<()> {
        if lines.len() != source.len() {
            return Err(Error::Alignment(format!(
                "{} has {} lines but {} has {}",
                files.source.display(),
                source.len(),
                path.display(),
                lines.len()
            )));
        }
        Ok(())
    };
    let mut references = Vec::with_capacity(files.references.len());
    for path in &files.references {
        let lines = read_lines(path)?;
        expect(path, &lines)?;
        references.push(lines);
    }
    let ids = system_ids(&files.hypotheses);
    let mut out = Vec::with_capacity(files.hypotheses.len());
    for (path, system) in files.hypotheses.iter().zip(ids) {
        let lines = read_lines(path)?;
        expect(path, &lines)?;
        let corpus = EvalCorpus::build(&source, &lines, &references, config, tokenize_options)?;
        out.push(SystemCorpus { system, corpus });
    }
    Ok(out)
}

fn parse_ranking_lines(path: &Path) -> Result<Vec<(usize, String, Option<f64>)>> {
    let mut rows = Vec::new();
    for (i, line) in read_lines(path)?.iter().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut cols = line.split('\t');
        let id = cols.next().unwrap_or_default().trim().to_owned();
        let score = match cols.next() {
            Some(s) => Some(s.trim().parse::<f64>().map_err(|_| Error::Parse {
                path: path.to_owned(),
                line: i + 1,
                message: format!("invalid score `{s}`"),
            })?),
            None => None,
        };
        if cols.next().is_some() {
            return Err(Error::Parse {
                path: path.to_owned(),
                line: i + 1,
                message: "expected `id` or `id<TAB>score`".into(),
            });
        }
        rows.push((i + 1, id, score));
    }
    if rows.is_empty() {
        return Err(Error::EmptyRanking);
    }
    Ok(rows)
}

/// Loads a ranking: one system id per line, best first, with an optional
/// tab-separated score column. With scores, ranks come from sorting them.
pub fn load_ranking(path: &Path) -> Result<RankingTable> {
    let rows = parse_ranking_lines(path)?;
    let scored = rows.iter().filter(|r| r.2.is_some()).count();
    if scored == 0 {
        return RankingTable::from_order(rows.into_iter().map(|r| r.1));
    }
    if let Some(row) = rows.iter().find(|r| r.2.is_none()) {
        return Err(Error::Parse {
            path: path.to_owned(),
            line: row.0,
            message: "missing score column (other lines have scores)".into(),
        });
    }
    reject_duplicates(&rows)?;
    rank_systems(rows.into_iter().map(|r| (r.1, r.2.unwrap())))
}

/// Loads an `id<TAB>score` file and ranks it.
pub fn load_scores(path: &Path) -> Result<RankingTable> {
    let rows = parse_ranking_lines(path)?;
    if let Some(row) = rows.iter().find(|r| r.2.is_none()) {
        return Err(Error::Parse {
            path: path.to_owned(),
            line: row.0,
            message: "expected `id<TAB>score`".into(),
        });
    }
    reject_duplicates(&rows)?;
    rank_systems(rows.into_iter().map(|r| (r.1, r.2.unwrap())))
}

fn reject_duplicates(rows: &[(usize, String, Option<f64>)]) -> Result<()> {
    let mut seen = std::collections::HashSet::new();
    for (_, id, _) in rows {
        if !seen.insert(id.as_str()) {
            return Err(Error::DuplicateId(id.clone()));
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    #[default]
    Tsv,
    #[value(name = "json-lines")]
    JsonLines,
}

/// A value that can be rendered as TSV records or JSON-lines objects.
pub trait Report {
    fn tsv_records(&self) -> Vec<String>;
    fn json_records(&self) -> Vec<String>;
}

/// Fixed 6-decimal formatting; negative zero prints as zero.
pub fn fmt_real(x: f64) -> String {
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        "0.000000".to_owned()
    } else {
        s
    }
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_real).unwrap_or_else(|| "NA".to_owned())
}

impl Report for CorpusScore {
    fn tsv_records(&self) -> Vec<String> {
        vec![format!(
            "{}\t{}\t{}\t{}\t{}",
            fmt_real(self.mean),
            fmt_real(self.stdev),
            fmt_real(self.ci95_half_width),
            self.iterations,
            self.seed
        )]
    }

    fn json_records(&self) -> Vec<String> {
        vec![serde_json::to_string(self).expect("serializable")]
    }
}

impl Report for RankingTable {
    fn tsv_records(&self) -> Vec<String> {
        self.entries()
            .iter()
            .map(|e| format!("{}\t{}\t{}", e.rank, e.system, fmt_opt(e.score)))
            .collect()
    }

    fn json_records(&self) -> Vec<String> {
        self.entries()
            .iter()
            .map(|e| serde_json::to_string(e).expect("serializable"))
            .collect()
    }
}

impl Report for CorrelationReport {
    fn tsv_records(&self) -> Vec<String> {
        vec![format!(
            "{}\t{}\t{}",
            fmt_opt(self.pearson_r),
            fmt_real(self.spearman_rho),
            fmt_real(self.mean_rank_displacement)
        )]
    }

    fn json_records(&self) -> Vec<String> {
        vec![serde_json::to_string(self).expect("serializable")]
    }
}

/// Renders `value` with one `\n`-terminated line per record.
pub fn emit_report<R: Report + ?Sized>(value: &R, format: Format) -> String {
    let lines = match format {
        Format::Tsv => value.tsv_records(),
        Format::JsonLines => value.json_records(),
    };
    let mut out = String::new();
    for line in lines {
        out.push_str(&line);
        out.push('\n');
    }
    out
}

/// Debug dump of every cached (sentence, reference) statistic:
/// `sentence  reference  cand_len  ref_len  num/den ...` per order.
pub fn emit_per_sentence(system: &str, corpus: &EvalCorpus) -> String {
    let mut out = String::new();
    for (i, k) in corpus.reference_counts().enumerate() {
        for r in 0..k {
            let st = corpus.stats(i, r);
            let _ = write!(out, "{system}\t{i}\t{r}\t{}\t{}", st.cand_len, st.ref_len);
            for (num, den) in st.numerators.iter().zip(&st.denominators) {
                let _ = write!(out, "\t{num}/{den}");
            }
            out.push('\n');
        }
    }
    out
}
