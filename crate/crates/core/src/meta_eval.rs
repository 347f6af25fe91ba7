//! Comparing metric rankings against a gold (human) ranking.

use std::collections::{BTreeSet, HashMap, HashSet};

use serde::Serialize;

use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RankedSystem {
    pub rank: usize,
    pub system: String,
    pub score: Option<f64>,
}

/// Systems ordered best first, ranked 1..n.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RankingTable {
    entries: Vec<RankedSystem>,
}

impl RankingTable {
    /// A ranking given directly by order, best first, without scores.
    pub fn from_order<I, S>(systems: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut seen = HashSet::new();
        let mut entries = Vec::new();
        for (i, id) in systems.into_iter().enumerate() {
            let id = id.into();
            if !seen.insert(id.clone()) {
                return Err(Error::DuplicateId(id));
            }
            entries.push(RankedSystem {
                rank: i + 1,
                system: id,
                score: None,
            });
        }
        if entries.is_empty() {
            return Err(Error::EmptyRanking);
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[RankedSystem] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn has_scores(&self) -> bool {
        self.entries.iter().all(|e| e.score.is_some())
    }

    pub fn rank_of(&self, system: &str) -> Option<usize> {
        self.entries
            .iter()
            .find(|e| e.system == system)
            .map(|e| e.rank)
    }

    fn rank_map(&self) -> HashMap<&str, usize> {
        self.entries
            .iter()
            .map(|e| (e.system.as_str(), e.rank))
            .collect()
    }

    /// Per-system value where larger is better: the score if every entry
    /// has one, otherwise the negated rank.
    fn merit_map(&self) -> HashMap<&str, f64> {
        let scored = self.has_scores();
        self.entries
            .iter()
            .map(|e| {
                let v = match e.score {
                    Some(s) if scored => s,
                    _ => -(e.rank as f64),
                };
                (e.system.as_str(), v)
            })
            .collect()
    }
}

/// Sorts systems by descending score; equal scores are ordered by ascending id.
pub fn rank_systems<I, S>(scores: I) -> Result<RankingTable>
where
    I: IntoIterator<Item = (S, f64)>,
    S: Into<String>,
{
    let mut pairs: Vec<(String, f64)> = scores.into_iter().map(|(k, v)| (k.into(), v)).collect();
    if pairs.is_empty() {
        return Err(Error::EmptyRanking);
    }
    pairs.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    let mut seen = HashSet::new();
    for (id, _) in &pairs {
        if !seen.insert(id.as_str()) {
            return Err(Error::DuplicateId(id.clone()));
        }
    }
    let entries = pairs
        .into_iter()
        .enumerate()
        .map(|(i, (system, score))| RankedSystem {
            rank: i + 1,
            system,
            score: Some(score),
        })
        .collect();
    Ok(RankingTable { entries })
}

fn check_pair(xs: &[f64], ys: &[f64]) -> Result<()> {
    if xs.len() != ys.len() {
        return Err(Error::LengthMismatch {
            left: xs.len(),
            right: ys.len(),
        });
    }
    if xs.len() < 2 {
        return Err(Error::TooFewValues(xs.len()));
    }
    Ok(())
}

/// Sample Pearson correlation. Errors when either input is constant.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<f64> {
    check_pair(xs, ys)?;
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::UndefinedCorrelation);
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// 1-based ranks in ascending order of value; ties share their average rank.
pub fn average_ranks(xs: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..xs.len()).collect();
    idx.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    let mut ranks = vec![0.0; xs.len()];
    let mut start = 0;
    while start < idx.len() {
        let mut end = start + 1;
        while end < idx.len() && xs[idx[end]] == xs[idx[start]] {
            end += 1;
        }
        // positions start..end hold ranks start+1..=end
        let avg = (start + 1 + end) as f64 / 2.0;
        for &i in &idx[start..end] {
            ranks[i] = avg;
        }
        start = end;
    }
    ranks
}

/// Spearman rank correlation with average ranks for ties.
pub fn spearman(xs: &[f64], ys: &[f64]) -> Result<f64> {
    check_pair(xs, ys)?;
    pearson(&average_ranks(xs), &average_ranks(ys))
}

fn check_same_ids(gold: &RankingTable, other: &RankingTable) -> Result<()> {
    let g: BTreeSet<&str> = gold.entries.iter().map(|e| e.system.as_str()).collect();
    let o: BTreeSet<&str> = other.entries.iter().map(|e| e.system.as_str()).collect();
    if g != o {
        return Err(Error::IdSetMismatch {
            missing: g.difference(&o).map(|s| s.to_string()).collect(),
            extra: o.difference(&g).map(|s| s.to_string()).collect(),
        });
    }
    Ok(())
}

/// Σ |gold rank − other rank| over all systems.
pub fn total_rank_displacement(gold: &RankingTable, other: &RankingTable) -> Result<usize> {
    check_same_ids(gold, other)?;
    let other_ranks = other.rank_map();
    Ok(gold
        .entries
        .iter()
        .map(|e| e.rank.abs_diff(other_ranks[e.system.as_str()]))
        .sum())
}

/// Mean absolute rank difference per system.
pub fn mean_rank_displacement(gold: &RankingTable, other: &RankingTable) -> Result<f64> {
    Ok(total_rank_displacement(gold, other)? as f64 / gold.len() as f64)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorrelationReport {
    pub pearson_r: Option<f64>,
    pub spearman_rho: f64,
    pub mean_rank_displacement: f64,
}

/// Correlates a metric ranking against a gold ranking.
///
/// Both sides are turned into "larger is better" vectors aligned by system
/// id: scores when every entry has one, negated ranks otherwise. Pearson is
/// reported only when the metric side carries scores.
pub fn correlate(gold: &RankingTable, other: &RankingTable) -> Result<CorrelationReport> {
    check_same_ids(gold, other)?;
    let gold_merit = gold.merit_map();
    let other_merit = other.merit_map();
    let systems: Vec<&str> = gold.entries.iter().map(|e| e.system.as_str()).collect();
    let gv: Vec<f64> = systems.iter().map(|s| gold_merit[s]).collect();
    let ov: Vec<f64> = systems.iter().map(|s| other_merit[s]).collect();
    let pearson_r = if other.has_scores() {
        Some(pearson(&ov, &gv)?)
    } else {
        None
    };
    Ok(CorrelationReport {
        pearson_r,
        spearman_rho: spearman(&ov, &gv)?,
        mean_rank_displacement: mean_rank_displacement(gold, other)?,
    })
}
