//! Variability within versus between universities, rank correlation of
//! performance against concentration, and the stratified permutation test
//! comparing the concentration of top- and bottom-decile universities.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::concentration::{ConcentrationReport, Level};
use crate::describe;
use crate::error::StatsError;
use crate::scoring::{Indicator, ScoreTable};

pub const DEFAULT_PERMUTATIONS: usize = 10_000;
pub const MIN_PERMUTATIONS: usize = 100;

/// Coefficient of variation in percent, `100 * s / mean` with the sample
/// (n - 1) standard deviation. `None` when the mean is not positive.
pub fn coefficient_of_variation(values: &[f64]) -> Result<Option<f64>, StatsError> {
    if values.len() < 2 {
        return Err(StatsError::TooFew {
            needed: 2,
            got: values.len(),
        });
    }
    if let Some(index) = values.iter().position(|v| !v.is_finite()) {
        return Err(StatsError::InvalidValue {
            index,
            value: values[index],
        });
    }
    let mean = describe::mean(values).expect("non-empty");
    if mean <= 0.0 {
        return Ok(None);
    }
    let sd = describe::sample_std_dev(values).expect("n >= 2");
    Ok(Some(100.0 * sd / mean))
}

#[derive(Debug, Clone, PartialEq)]
pub struct VariabilitySummary {
    pub min: f64,
    pub max: f64,
    pub median: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VariabilityReport {
    pub uda_id: String,
    pub indicator: Indicator,
    /// CV of each qualifying university's researchers; `None` marks a zero mean.
    pub cv_within: BTreeMap<String, Option<f64>>,
    /// CV of the qualifying universities' UDA-level scores.
    pub cv_between: Option<f64>,
    pub summary: Option<VariabilitySummary>,
}

/// Within-university CVs use each researcher's score standardized by the
/// national mean of their SDS; the between-university CV uses the
/// universities' aggregated UDA scores. Universities with fewer than
/// `min_staff` researchers in the UDA are skipped.
pub fn variability_report(
    table: &ScoreTable,
    uda_id: &str,
    indicator: Indicator,
    min_staff: usize,
) -> Result<VariabilityReport, StatsError> {
    let standardized = table.standardized_researcher_values(indicator);
    let mut members: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
    for r in table.researchers.values().filter(|r| r.uda_id == uda_id) {
        members
            .entry(r.university_id.as_str())
            .or_default()
            .push(standardized[r.researcher_id.as_str()]);
    }
    let mut cv_within = BTreeMap::new();
    let mut between = Vec::new();
    for (uni, values) in members {
        if values.len() < min_staff.max(2) {
            continue;
        }
        cv_within.insert(uni.to_string(), coefficient_of_variation(&values)?);
        between.push(table.uda[&(uni.to_string(), uda_id.to_string())].value(indicator));
    }
    let cv_between = if between.len() >= 2 {
        coefficient_of_variation(&between)?
    } else {
        None
    };
    let defined: Vec<f64> = cv_within.values().flatten().copied().collect();
    let summary = describe::Descriptive::of(&defined).map(|d| VariabilitySummary {
        min: d.min,
        max: d.max,
        median: d.median,
    });
    Ok(VariabilityReport {
        uda_id: uda_id.to_string(),
        indicator,
        cv_within,
        cv_between,
        summary,
    })
}

/// Average ranks (1-based), ties sharing the mean of their positions.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = rank;
        }
        i = j + 1;
    }
    ranks
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spearman {
    pub rho: f64,
    /// Two-sided, from the Student t approximation with n - 2 degrees of freedom.
    pub p_value: f64,
    pub n: usize,
}

pub fn spearman(x: &[f64], y: &[f64]) -> Result<Spearman, StatsError> {
    if x.len() != y.len() {
        return Err(StatsError::LengthMismatch(x.len(), y.len()));
    }
    if x.len() < 5 {
        return Err(StatsError::TooFew {
            needed: 5,
            got: x.len(),
        });
    }
    if let Some(index) = x.iter().chain(y).position(|v| !v.is_finite()) {
        return Err(StatsError::InvalidValue {
            index: index % x.len(),
            value: if index < x.len() {
                x[index]
            } else {
                y[index - x.len()]
            },
        });
    }
    let rx = average_ranks(x);
    let ry = average_ranks(y);
    let n = x.len() as f64;
    let mean = (n + 1.0) / 2.0;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in rx.iter().zip(&ry) {
        let (da, db) = (a - mean, b - mean);
        sxy += da * db;
        sxx += da * da;
        syy += db * db;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(StatsError::Degenerate(
            "rank correlation of a constant sequence".into(),
        ));
    }
    let rho = (sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0);
    let df = n - 2.0;
    let p_value = if rho.abs() == 1.0 {
        0.0
    } else {
        let t = rho * (df / (1.0 - rho * rho)).sqrt();
        let dist = StudentsT::new(0.0, 1.0, df).expect("df > 0");
        (2.0 * (1.0 - dist.cdf(t.abs()))).clamp(0.0, 1.0)
    };
    Ok(Spearman {
        rho,
        p_value,
        n: x.len(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecileSplit {
    /// Best first.
    pub top: Vec<String>,
    /// Worst last.
    pub bottom: Vec<String>,
}

fn group_size(frac: f64, n: usize) -> usize {
    // 0.1 * 30 is 3.0000000000000004 in binary floating point
    ((frac * n as f64 - 1e-9).ceil() as usize).max(1)
}

/// Splits units into the best `ceil(top_frac * n)` and the worst
/// `ceil(bottom_frac * n)` by descending score, ties broken by ascending id.
pub fn decile_split(
    scores: &BTreeMap<String, f64>,
    top_frac: f64,
    bottom_frac: f64,
) -> Result<DecileSplit, StatsError> {
    let n = scores.len();
    if n < 2 {
        return Err(StatsError::TooFew { needed: 2, got: n });
    }
    if !(top_frac > 0.0 && top_frac <= 1.0 && bottom_frac > 0.0 && bottom_frac <= 1.0) {
        return Err(StatsError::Parameter("fractions must lie in (0, 1]".into()));
    }
    let (kt, kb) = (group_size(top_frac, n), group_size(bottom_frac, n));
    if kt + kb > n {
        return Err(StatsError::Parameter(format!(
            "top {kt} and bottom {kb} groups overlap among {n} units"
        )));
    }
    let mut ranked: Vec<(&String, f64)> = scores.iter().map(|(k, v)| (k, *v)).collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    Ok(DecileSplit {
        top: ranked[..kt].iter().map(|(k, _)| (*k).clone()).collect(),
        bottom: ranked[n - kb..].iter().map(|(k, _)| (*k).clone()).collect(),
    })
}

/// Gini values of the two groups within one stratum.
#[derive(Debug, Clone, PartialEq)]
pub struct StratumGroups {
    pub top: Vec<f64>,
    pub bottom: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NpcResult {
    pub per_stratum_p: BTreeMap<String, f64>,
    /// Observed `mean(bottom) - mean(top)` per stratum.
    pub per_stratum_statistic: BTreeMap<String, f64>,
    /// Fisher combination `-2 * sum(ln p)` of the observed partial p-values.
    pub combined_statistic: f64,
    pub combined_p: f64,
    pub permutations: usize,
    pub seed: u64,
}

/// Fisher's combining function.
pub fn fisher_statistic(p_values: impl IntoIterator<Item = f64>) -> f64 {
    -2.0 * p_values.into_iter().map(f64::ln).sum::<f64>()
}

fn sorted_sum(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    values.iter().sum()
}

/// `mean(bottom) - mean(top)` where `pooled[..n_top]` is the top group.
/// Sums run in sorted order so equal multisets give bit-equal statistics.
fn mean_difference(pooled: &mut [f64], n_top: usize) -> f64 {
    let n_bottom = pooled.len() - n_top;
    let (top, bottom) = pooled.split_at_mut(n_top);
    sorted_sum(bottom) / n_bottom as f64 - sorted_sum(top) / n_top as f64
}

/// Upper-tail significance of each entry of `dist` within `dist` itself:
/// `(1 + #greater + #ties / 2) / len`, where the entry counts once for itself
/// and ties with other entries count one half.
fn upper_tail_p(dist: &[f64]) -> Vec<f64> {
    let mut sorted = dist.to_vec();
    sorted.sort_by(f64::total_cmp);
    let len = dist.len() as f64;
    dist.iter()
        .map(|&t| {
            let below = sorted.partition_point(|&v| v < t);
            let not_above = sorted.partition_point(|&v| v <= t);
            let greater = (sorted.len() - not_above) as f64;
            let others_tied = (not_above - below - 1) as f64;
            (1.0 + greater + 0.5 * others_tied) / len
        })
        .collect()
}

/// Stratified permutation test of `H0: top and bottom groups share a
/// distribution` against `bottom > top`, combined across strata with Fisher's
/// function.
///
/// Each replicate relabels every stratum with a generator seeded by
/// `(seed, replicate)`, so strata are permuted in lockstep and the result is
/// independent of thread count. Partial p-values use the add-one estimator
/// over the observed plus permuted statistics; exact ties count one half.
pub fn npc_test(
    strata: &BTreeMap<String, StratumGroups>,
    permutations: usize,
    seed: u64,
) -> Result<NpcResult, StatsError> {
    if strata.is_empty() {
        return Err(StatsError::TooFew { needed: 1, got: 0 });
    }
    if permutations < MIN_PERMUTATIONS {
        return Err(StatsError::Parameter(format!(
            "need at least {MIN_PERMUTATIONS} permutations, got {permutations}"
        )));
    }
    for (name, g) in strata {
        if g.top.is_empty() || g.bottom.is_empty() {
            return Err(StatsError::Degenerate(format!(
                "stratum {name} has an empty group"
            )));
        }
        if let Some(index) = g.top.iter().chain(&g.bottom).position(|v| !v.is_finite()) {
            return Err(StatsError::InvalidValue {
                index,
                value: g
                    .top
                    .iter()
                    .chain(&g.bottom)
                    .nth(index)
                    .copied()
                    .unwrap_or(f64::NAN),
            });
        }
    }
    let pooled: Vec<(Vec<f64>, usize)> = strata
        .values()
        .map(|g| {
            (
                [g.top.as_slice(), g.bottom.as_slice()].concat(),
                g.top.len(),
            )
        })
        .collect();

    let observed: Vec<f64> = pooled
        .iter()
        .map(|(v, k)| mean_difference(&mut v.clone(), *k))
        .collect();
    let replicates: Vec<Vec<f64>> = (1..=permutations as u64)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b);
            pooled
                .iter()
                .map(|(v, k)| {
                    let mut v = v.clone();
                    v.shuffle(&mut rng);
                    mean_difference(&mut v, *k)
                })
                .collect()
        })
        .collect();

    // Row 0 is the observed labelling.
    let strata_p: Vec<Vec<f64>> = (0..pooled.len())
        .map(|s| {
            let dist: Vec<f64> = std::iter::once(observed[s])
                .chain(replicates.iter().map(|r| r[s]))
                .collect();
            upper_tail_p(&dist)
        })
        .collect();
    let combined: Vec<f64> = (0..=permutations)
        .map(|b| fisher_statistic(strata_p.iter().map(|p| p[b])))
        .collect();
    let combined_p = upper_tail_p(&combined)[0];

    Ok(NpcResult {
        per_stratum_p: strata
            .keys()
            .zip(&strata_p)
            .map(|(k, p)| (k.clone(), p[0]))
            .collect(),
        per_stratum_statistic: strata.keys().cloned().zip(observed).collect(),
        combined_statistic: combined[0],
        combined_p,
        permutations,
        seed,
    })
}

/// Top- versus bottom-decile universities of one UDA for one indicator.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupComparison {
    pub split: DecileSplit,
    pub top_ginis: Vec<f64>,
    pub bottom_ginis: Vec<f64>,
    pub top_mean: f64,
    pub bottom_mean: f64,
}

impl GroupComparison {
    pub fn groups(&self) -> StratumGroups {
        StratumGroups {
            top: self.top_ginis.clone(),
            bottom: self.bottom_ginis.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TopBottomRow {
    pub uda_id: String,
    pub by_indicator: BTreeMap<Indicator, GroupComparison>,
}

/// Universities of a UDA that have a defined UDA-level Gini, with their
/// aggregated score.
fn scored_ginis(
    table: &ScoreTable,
    report: &ConcentrationReport,
    uda_id: &str,
) -> BTreeMap<String, (f64, f64)> {
    report
        .university_ginis(uda_id)
        .into_iter()
        .map(|(uni, g)| {
            let score = table.uda[&(uni.clone(), uda_id.to_string())].value(report.indicator);
            (uni, (score, g))
        })
        .collect()
}

/// Mean Gini of the top and bottom 10% universities of each UDA, ranked by
/// the same indicator the Gini was measured on. `reports` must be UDA-level.
pub fn top_bottom_report(
    table: &ScoreTable,
    reports: &[&ConcentrationReport],
) -> Result<Vec<TopBottomRow>, StatsError> {
    if let Some(r) = reports.iter().find(|r| r.level != Level::Uda) {
        return Err(StatsError::Parameter(format!(
            "top/bottom comparison needs UDA-level reports, got {}",
            r.level
        )));
    }
    let mut rows = Vec::new();
    for uda in table.scheme.udas() {
        let mut by_indicator = BTreeMap::new();
        for report in reports {
            let units = scored_ginis(table, report, uda);
            let scores: BTreeMap<String, f64> =
                units.iter().map(|(k, (s, _))| (k.clone(), *s)).collect();
            let Ok(split) = decile_split(&scores, 0.1, 0.1) else {
                continue;
            };
            let ginis = |ids: &[String]| ids.iter().map(|u| units[u].1).collect::<Vec<_>>();
            let top_ginis = ginis(&split.top);
            let bottom_ginis = ginis(&split.bottom);
            by_indicator.insert(
                report.indicator,
                GroupComparison {
                    top_mean: describe::mean(&top_ginis).expect("non-empty"),
                    bottom_mean: describe::mean(&bottom_ginis).expect("non-empty"),
                    split,
                    top_ginis,
                    bottom_ginis,
                },
            );
        }
        if !by_indicator.is_empty() {
            rows.push(TopBottomRow {
                uda_id: uda.to_string(),
                by_indicator,
            });
        }
    }
    Ok(rows)
}

/// Key used for the pooled row of [`correlation_report`].
pub const ALL_UDAS: &str = "__all__";

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationRow {
    pub uda_id: String,
    pub indicator: Indicator,
    pub n: usize,
    /// `None` when fewer than 5 universities qualify or ranks are constant.
    pub spearman: Option<Spearman>,
}

/// Spearman correlation between universities' UDA-level score and their
/// UDA-level Gini, per UDA and pooled over all UDAs.
pub fn correlation_report(
    table: &ScoreTable,
    reports: &[&ConcentrationReport],
) -> Vec<CorrelationRow> {
    let mut rows = Vec::new();
    for report in reports {
        let mut all = (Vec::new(), Vec::new());
        for uda in table.scheme.udas() {
            let units = scored_ginis(table, report, uda);
            let (x, y): (Vec<f64>, Vec<f64>) = units.values().copied().unzip();
            all.0.extend(&x);
            all.1.extend(&y);
            rows.push(CorrelationRow {
                uda_id: uda.to_string(),
                indicator: report.indicator,
                n: x.len(),
                spearman: spearman(&x, &y).ok(),
            });
        }
        rows.push(CorrelationRow {
            uda_id: ALL_UDAS.to_string(),
            indicator: report.indicator,
            n: all.0.len(),
            spearman: spearman(&all.0, &all.1).ok(),
        });
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn cv_examples() {
        assert_eq!(
            coefficient_of_variation(&[4.0, 4.0, 4.0]).unwrap(),
            Some(0.0)
        );
        assert_eq!(
            coefficient_of_variation(&[2.0, 4.0, 6.0]).unwrap(),
            Some(50.0)
        );
        assert_eq!(coefficient_of_variation(&[0.0, 0.0, 0.0]).unwrap(), None);
        assert!(coefficient_of_variation(&[1.0]).is_err());
    }

    /// Textbook `1 - 6 sum d^2 / (n (n^2 - 1))`, valid without ties.
    fn rank_difference_rho(x: &[f64], y: &[f64]) -> f64 {
        let rank = |v: &[f64], i: usize| 1 + v.iter().filter(|&&w| w < v[i]).count();
        let n = x.len();
        let d2: usize = (0..n)
            .map(|i| {
                let d = rank(x, i) as i64 - rank(y, i) as i64;
                (d * d) as usize
            })
            .sum();
        1.0 - 6.0 * d2 as f64 / (n * (n * n - 1)) as f64
    }

    #[test]
    fn spearman_anchors() {
        let x = [1.0, 2.0, 3.0, 4.0, 5.0];
        assert_eq!(spearman(&x, &x).unwrap().rho, 1.0);
        let rev = [5.0, 4.0, 3.0, 2.0, 1.0];
        assert_eq!(spearman(&x, &rev).unwrap().rho, -1.0);

        // sum d^2 = 6
        let y = [2.0, 3.0, 1.0, 4.0, 5.0];
        assert_eq!(rank_difference_rho(&x, &y), 0.7);
        assert_eq!(spearman(&x, &y).unwrap().rho, 0.7);

        // sum d^2 = 4
        let y = [2.0, 1.0, 4.0, 3.0, 5.0];
        assert_eq!(rank_difference_rho(&x, &y), 0.8);
        assert_eq!(spearman(&x, &y).unwrap().rho, 0.8);
    }

    #[test]
    fn spearman_errors_and_p_value() {
        let x = [1.0, 2.0, 3.0, 4.0];
        assert!(matches!(spearman(&x, &x), Err(StatsError::TooFew { .. })));
        assert!(matches!(
            spearman(&[1.0; 5], &[1.0, 2.0, 3.0, 4.0, 5.0]),
            Err(StatsError::Degenerate(_))
        ));
        assert!(spearman(&[1.0; 5], &[1.0; 6]).is_err());
        // rho = 0.5, n = 10: t = 0.5 * sqrt(8 / 0.75) = 1.63299, two-sided p = 0.14144
        let x: Vec<f64> = (0..10).map(f64::from).collect();
        let y = [2.0, 0.0, 1.0, 7.0, 3.0, 9.0, 4.0, 5.0, 8.0, 6.0];
        let s = spearman(&x, &y).unwrap();
        let t = s.rho * (8.0 / (1.0 - s.rho * s.rho)).sqrt();
        let p = 2.0 * (1.0 - StudentsT::new(0.0, 1.0, 8.0).unwrap().cdf(t));
        assert!((s.p_value - p).abs() < 1e-15);
    }

    #[test]
    fn ties_get_average_ranks() {
        assert_eq!(
            average_ranks(&[10.0, 20.0, 10.0, 30.0]),
            vec![1.5, 3.0, 1.5, 4.0]
        );
    }

    fn units(n: usize) -> BTreeMap<String, f64> {
        (0..n).map(|i| (format!("u{i:02}"), i as f64)).collect()
    }

    #[test]
    fn decile_sizes() {
        let s = decile_split(&units(10), 0.1, 0.1).unwrap();
        assert_eq!((s.top, s.bottom), (vec!["u09".into()], vec!["u00".into()]));
        let s = decile_split(&units(42), 0.1, 0.1).unwrap();
        assert_eq!((s.top.len(), s.bottom.len()), (5, 5));
        assert_eq!(decile_split(&units(30), 0.1, 0.1).unwrap().top.len(), 3);
        let s = decile_split(&units(2), 0.1, 0.1).unwrap();
        assert_eq!((s.top, s.bottom), (vec!["u01".into()], vec!["u00".into()]));
        assert!(decile_split(&units(1), 0.1, 0.1).is_err());
        assert!(decile_split(&units(3), 0.5, 0.5).is_err());
    }

    #[test]
    fn decile_ties_by_id() {
        let scores: BTreeMap<String, f64> = [("b", 1.0), ("a", 1.0), ("c", 1.0)]
            .map(|(k, v)| (k.to_string(), v))
            .into();
        let s = decile_split(&scores, 0.1, 0.1).unwrap();
        assert_eq!((s.top, s.bottom), (vec!["a".into()], vec!["c".into()]));
    }

    #[test]
    fn fisher_values() {
        assert_eq!(fisher_statistic([1.0, 1.0, 1.0]), 0.0);
        assert!((fisher_statistic([0.05, 0.5]) - 7.377758908227871).abs() < 1e-12);
    }

    fn strata(groups: &[(&[f64], &[f64])]) -> BTreeMap<String, StratumGroups> {
        groups
            .iter()
            .enumerate()
            .map(|(i, (t, b))| {
                (
                    format!("s{i}"),
                    StratumGroups {
                        top: t.to_vec(),
                        bottom: b.to_vec(),
                    },
                )
            })
            .collect()
    }

    #[test]
    fn identical_groups_do_not_reject() {
        let g = strata(&[
            (&[0.3, 0.5, 0.7], &[0.3, 0.5, 0.7]),
            (&[0.4, 0.6], &[0.4, 0.6]),
            (&[0.5, 0.5], &[0.5, 0.5]),
        ]);
        let r = npc_test(&g, 2000, 11).unwrap();
        for p in r.per_stratum_p.values() {
            assert!((0.4..=0.8).contains(p), "{p}");
        }
        assert!((r.per_stratum_p["s2"] - 0.5).abs() < 1e-3);
        assert!(r.combined_p > 0.05);
    }

    #[test]
    fn separated_groups_reject() {
        let lo: Vec<f64> = (0..6).map(|i| 0.3 + 0.01 * i as f64).collect();
        let hi: Vec<f64> = (0..6).map(|i| 0.7 + 0.01 * i as f64).collect();
        let g = strata(&[(&lo, &hi), (&lo, &hi), (&lo, &hi)]);
        let r = npc_test(&g, 1000, 5).unwrap();
        // one split in C(12, 6) = 924 is at least as extreme
        for p in r.per_stratum_p.values() {
            assert!(*p < 0.01);
            assert!(*p >= 1.0 / 1001.0);
        }
        assert!(r.combined_p < 0.01);
        assert!(r.combined_statistic > 0.0);
    }

    #[test]
    fn npc_is_seed_reproducible() {
        let g = strata(&[
            (&[0.2, 0.5, 0.4], &[0.6, 0.3, 0.8]),
            (&[0.1, 0.9], &[0.5, 0.55]),
        ]);
        let a = npc_test(&g, 500, 7).unwrap();
        let b = npc_test(&g, 500, 7).unwrap();
        assert_eq!(a, b);
        let single = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        assert_eq!(single.install(|| npc_test(&g, 500, 7)).unwrap(), a);
    }

    #[test]
    fn npc_errors() {
        let g = strata(&[(&[0.2], &[])]);
        assert!(npc_test(&g, 500, 1).is_err());
        let g = strata(&[(&[0.2], &[0.3])]);
        assert!(npc_test(&g, 99, 1).is_err());
        assert!(npc_test(&BTreeMap::new(), 500, 1).is_err());
    }

    proptest! {
        #[test]
        fn cv_scale_invariant(v in prop::collection::vec(0.0f64..100.0, 2..30), c in 0.01f64..100.0) {
            prop_assume!(v.iter().sum::<f64>() > 0.0);
            let a = coefficient_of_variation(&v).unwrap().unwrap();
            let scaled: Vec<f64> = v.iter().map(|x| x * c).collect();
            let b = coefficient_of_variation(&scaled).unwrap().unwrap();
            prop_assert!((a - b).abs() <= 1e-12 * a.max(1.0));
        }

        #[test]
        fn split_is_disjoint(n in 2usize..200) {
            let s = decile_split(&units(n), 0.1, 0.1).unwrap();
            prop_assert!(s.top.iter().all(|t| !s.bottom.contains(t)));
        }
    }
}
