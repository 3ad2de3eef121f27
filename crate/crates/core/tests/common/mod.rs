//! Reference implementations used as oracles by the integration tests. They
//! are written independently of the library: brute force where possible.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use perfdisp::corpus::Corpus;
use perfdisp::WeightScheme;

pub fn toy_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join("toy")
}

pub fn golden_manifest() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("golden")
        .join("toy_manifest.json")
}

/// Mean absolute difference over all ordered pairs, relative to twice the mean.
pub fn pairwise_gini(v: &[f64]) -> Option<f64> {
    let n = v.len() as f64;
    let total: f64 = v.iter().sum();
    if total == 0.0 {
        return None;
    }
    let mut diff = 0.0;
    for a in v {
        for b in v {
            diff += (a - b).abs();
        }
    }
    Some(diff / (2.0 * n * total))
}

pub fn pairwise_gini_adjusted(v: &[f64]) -> Option<f64> {
    let n = v.len() as f64;
    pairwise_gini(v).map(|g| (g * n / (n - 1.0)).min(1.0))
}

/// 1 - 6 sum d^2 / (n (n^2 - 1)); valid only without ties.
pub fn rank_difference_spearman(x: &[f64], y: &[f64]) -> f64 {
    fn ranks(v: &[f64]) -> Vec<f64> {
        let mut r = vec![0.0; v.len()];
        for (i, a) in v.iter().enumerate() {
            r[i] = 1.0 + v.iter().filter(|b| *b < a).count() as f64;
        }
        r
    }
    let (rx, ry) = (ranks(x), ranks(y));
    let n = x.len() as f64;
    let d2: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - b) * (a - b)).sum();
    1.0 - 6.0 * d2 / (n * (n * n - 1.0))
}

/// Fractional publication count credited to each SDS, from the raw records.
pub fn fractional_totals(corpus: &Corpus, weights: WeightScheme) -> BTreeMap<String, f64> {
    let mut totals = BTreeMap::new();
    for p in corpus.publications() {
        for link in &p.author_links {
            let sds = &corpus.researcher(&link.researcher_id).unwrap().sds_id;
            let share = match weights {
                WeightScheme::Uniform => 1.0 / f64::from(p.total_coauthors),
                WeightScheme::Positional => link.weight,
            };
            *totals.entry(sds.clone()).or_insert(0.0) += share;
        }
    }
    totals
}
