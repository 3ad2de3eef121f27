//! Productivity (P) and scientific strength (SS).
//!
//! Individual P is the fractional publication count per staff-year; SS
//! weights each publication by its field-standardized citations, i.e. the
//! citation count divided by the median of its (year, subject category)
//! cell. Institution-level scores follow the staff-normalized sums over
//! (university, SDS), then SDS-standardized and staff-weighted aggregation
//! to UDA and whole-university level.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::{ClassificationScheme, Corpus, PublicationRecord};
use crate::describe;

/// How author credit on a publication is split.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightScheme {
    /// Every co-author receives `1 / total_coauthors`.
    #[default]
    Uniform,
    /// Each author receives the weight supplied on the author link.
    Positional,
}

impl FromStr for WeightScheme {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "uniform" => Ok(WeightScheme::Uniform),
            "positional" => Ok(WeightScheme::Positional),
            other => Err(format!("unknown weight scheme `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Indicator {
    P,
    SS,
}

impl Indicator {
    pub const ALL: [Indicator; 2] = [Indicator::P, Indicator::SS];

    pub fn label(self) -> &'static str {
        match self {
            Indicator::P => "P",
            Indicator::SS => "SS",
        }
    }
}

impl fmt::Display for Indicator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Indicator {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "P" => Ok(Indicator::P),
            "SS" => Ok(Indicator::SS),
            other => Err(format!("unknown indicator `{other}`")),
        }
    }
}

/// Citation statistics of one (year, subject category) cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellStats {
    pub median: f64,
    pub mean: f64,
    pub count: usize,
}

impl CellStats {
    /// Citations relative to the cell baseline. A zero median falls back to
    /// the mean; an all-zero cell standardizes everything to 0.
    pub fn standardize(&self, citations: u64) -> f64 {
        let c = citations as f64;
        if self.median > 0.0 {
            c / self.median
        } else if self.mean > 0.0 {
            c / self.mean
        } else {
            0.0
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CellMedianTable {
    cells: BTreeMap<(i32, String), CellStats>,
}

impl CellMedianTable {
    pub fn get(&self, year: i32, category: &str) -> Option<&CellStats> {
        self.cells.get(&(year, category.to_string()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(i32, String), &CellStats)> {
        self.cells.iter()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    fn standardized(&self, p: &PublicationRecord) -> f64 {
        // Every publication's cell exists when the table was built from the
        // same corpus; Corpus is immutable so this cannot drift.
        self.get(p.year, &p.subject_category)
            .expect("cell table built from a different corpus")
            .standardize(p.citation_count)
    }
}

/// Median and mean citations per (year, subject category) over all corpus
/// publications, zero-cited ones included.
pub fn build_cell_medians(corpus: &Corpus) -> CellMedianTable {
    let mut groups: BTreeMap<(i32, String), Vec<f64>> = BTreeMap::new();
    for p in corpus.publications() {
        groups
            .entry((p.year, p.subject_category.clone()))
            .or_default()
            .push(p.citation_count as f64);
    }
    let cells = groups
        .into_iter()
        .map(|(key, cites)| {
            let stats = CellStats {
                median: describe::median(&cites).unwrap_or(0.0),
                mean: describe::mean(&cites).unwrap_or(0.0),
                count: cites.len(),
            };
            (key, stats)
        })
        .collect();
    CellMedianTable { cells }
}

fn share(p: &PublicationRecord, link_weight: f64, weights: WeightScheme) -> f64 {
    match weights {
        WeightScheme::Uniform => 1.0 / f64::from(p.total_coauthors),
        WeightScheme::Positional => link_weight,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResearcherScore {
    pub researcher_id: String,
    pub university_id: String,
    pub sds_id: String,
    pub uda_id: String,
    pub p: f64,
    pub ss: f64,
}

impl ResearcherScore {
    pub fn value(&self, indicator: Indicator) -> f64 {
        match indicator {
            Indicator::P => self.p,
            Indicator::SS => self.ss,
        }
    }
}

/// Annualized P and SS for every researcher, zero-output researchers included.
pub fn score_researchers(
    corpus: &Corpus,
    medians: &CellMedianTable,
    weights: WeightScheme,
) -> BTreeMap<String, ResearcherScore> {
    let mut sums: BTreeMap<&str, (f64, f64)> = corpus
        .researchers()
        .map(|r| (r.researcher_id.as_str(), (0.0, 0.0)))
        .collect();
    for p in corpus.publications() {
        let std_cites = medians.standardized(p);
        for link in &p.author_links {
            let s = share(p, link.weight, weights);
            let acc = sums
                .get_mut(link.researcher_id.as_str())
                .expect("validated corpus");
            acc.0 += s;
            acc.1 += std_cites * s;
        }
    }
    corpus
        .researchers()
        .map(|r| {
            let (p, ss) = sums[r.researcher_id.as_str()];
            let score = ResearcherScore {
                researcher_id: r.researcher_id.clone(),
                university_id: r.university_id.clone(),
                sds_id: r.sds_id.clone(),
                uda_id: corpus
                    .scheme()
                    .uda_of(&r.sds_id)
                    .expect("validated corpus")
                    .to_string(),
                p: p / r.staff_years,
                ss: ss / r.staff_years,
            };
            (r.researcher_id.clone(), score)
        })
        .collect()
}

/// P and SS of one institutional unit with its research staff.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitScore {
    pub staff: usize,
    pub p: f64,
    pub ss: f64,
}

impl UnitScore {
    pub fn value(&self, indicator: Indicator) -> f64 {
        match indicator {
            Indicator::P => self.p,
            Indicator::SS => self.ss,
        }
    }
}

/// Average (university, SDS) P and SS over the universities active in the SDS.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SdsMean {
    pub universities: usize,
    pub p: f64,
    pub ss: f64,
}

impl SdsMean {
    pub fn value(&self, indicator: Indicator) -> f64 {
        match indicator {
            Indicator::P => self.p,
            Indicator::SS => self.ss,
        }
    }

    /// `score / mean`, or 0 when the whole SDS produced nothing.
    pub fn normalize(&self, indicator: Indicator, score: f64) -> f64 {
        let m = self.value(indicator);
        if m > 0.0 {
            score / m
        } else {
            0.0
        }
    }
}

pub type SdsKey = (String, String);

/// (university, SDS) scores: staff-normalized sums of fractional author
/// credit belonging to the unit, plus the per-SDS means across universities.
pub fn score_sds(
    corpus: &Corpus,
    medians: &CellMedianTable,
    weights: WeightScheme,
) -> (BTreeMap<SdsKey, UnitScore>, BTreeMap<String, SdsMean>) {
    let mut units: BTreeMap<SdsKey, (usize, f64, f64)> = BTreeMap::new();
    for r in corpus.researchers() {
        units
            .entry((r.university_id.clone(), r.sds_id.clone()))
            .or_default()
            .0 += 1;
    }
    for p in corpus.publications() {
        let std_cites = medians.standardized(p);
        // Fraction of the publication's authors in each (university, SDS).
        let mut fractions: BTreeMap<(&str, &str), f64> = BTreeMap::new();
        for link in &p.author_links {
            let r = corpus
                .researcher(&link.researcher_id)
                .expect("validated corpus");
            *fractions
                .entry((r.university_id.as_str(), r.sds_id.as_str()))
                .or_default() += share(p, link.weight, weights);
        }
        for ((uni, sds), n) in fractions {
            let acc = units
                .get_mut(&(uni.to_string(), sds.to_string()))
                .expect("unit has staff");
            acc.1 += n;
            acc.2 += std_cites * n;
        }
    }

    let scores: BTreeMap<SdsKey, UnitScore> = units
        .into_iter()
        .map(|(k, (staff, p, ss))| {
            let rs = staff as f64;
            (
                k,
                UnitScore {
                    staff,
                    p: p / rs,
                    ss: ss / rs,
                },
            )
        })
        .collect();

    let mut acc: BTreeMap<&str, (usize, f64, f64)> = BTreeMap::new();
    for ((_, sds), s) in &scores {
        let a = acc.entry(sds.as_str()).or_default();
        a.0 += 1;
        a.1 += s.p;
        a.2 += s.ss;
    }
    let means = acc
        .into_iter()
        .map(|(sds, (n, p, ss))| {
            let k = n as f64;
            (
                sds.to_string(),
                SdsMean {
                    universities: n,
                    p: p / k,
                    ss: ss / k,
                },
            )
        })
        .collect();
    (scores, means)
}

/// Staff-weighted aggregation of SDS-standardized scores, grouped by `group`.
fn aggregate<'a>(
    sds_scores: &'a BTreeMap<SdsKey, UnitScore>,
    sds_means: &BTreeMap<String, SdsMean>,
    group: impl Fn(&'a str, &'a str) -> Option<(String, String)>,
) -> BTreeMap<SdsKey, UnitScore> {
    let mut acc: BTreeMap<SdsKey, (usize, f64, f64)> = BTreeMap::new();
    for ((uni, sds), s) in sds_scores {
        let Some(key) = group(uni, sds) else { continue };
        let mean = &sds_means[sds];
        let rs = s.staff as f64;
        let a = acc.entry(key).or_default();
        a.0 += s.staff;
        a.1 += mean.normalize(Indicator::P, s.p) * rs;
        a.2 += mean.normalize(Indicator::SS, s.ss) * rs;
    }
    acc.into_iter()
        .map(|(k, (staff, p, ss))| {
            let rs = staff as f64;
            (
                k,
                UnitScore {
                    staff,
                    p: p / rs,
                    ss: ss / rs,
                },
            )
        })
        .collect()
}

/// (university, UDA) scores. Universities with no SDS in a UDA get no row.
pub fn score_uda(
    sds_scores: &BTreeMap<SdsKey, UnitScore>,
    sds_means: &BTreeMap<String, SdsMean>,
    scheme: &ClassificationScheme,
) -> BTreeMap<SdsKey, UnitScore> {
    aggregate(sds_scores, sds_means, |uni, sds| {
        scheme
            .uda_of(sds)
            .map(|uda| (uni.to_string(), uda.to_string()))
    })
}

/// Whole-university scores across all SDSs the university is active in.
pub fn score_university(
    sds_scores: &BTreeMap<SdsKey, UnitScore>,
    sds_means: &BTreeMap<String, SdsMean>,
) -> BTreeMap<String, UnitScore> {
    aggregate(sds_scores, sds_means, |uni, _| {
        Some((uni.to_string(), String::new()))
    })
    .into_iter()
    .map(|((uni, _), s)| (uni, s))
    .collect()
}

/// Every score level computed from one corpus.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreTable {
    pub weights: WeightScheme,
    pub scheme: ClassificationScheme,
    pub researchers: BTreeMap<String, ResearcherScore>,
    pub sds: BTreeMap<SdsKey, UnitScore>,
    pub sds_means: BTreeMap<String, SdsMean>,
    /// Keyed by (university, UDA).
    pub uda: BTreeMap<SdsKey, UnitScore>,
    pub university: BTreeMap<String, UnitScore>,
}

pub fn score_corpus(corpus: &Corpus, weights: WeightScheme) -> ScoreTable {
    let medians = build_cell_medians(corpus);
    let researchers = score_researchers(corpus, &medians, weights);
    let (sds, sds_means) = score_sds(corpus, &medians, weights);
    let uda = score_uda(&sds, &sds_means, corpus.scheme());
    let university = score_university(&sds, &sds_means);
    ScoreTable {
        weights,
        scheme: corpus.scheme().clone(),
        researchers,
        sds,
        sds_means,
        uda,
        university,
    }
}

impl ScoreTable {
    /// Mean individual score per SDS over all its researchers.
    fn researcher_means(&self, indicator: Indicator) -> BTreeMap<&str, f64> {
        let mut acc: BTreeMap<&str, (f64, usize)> = BTreeMap::new();
        for r in self.researchers.values() {
            let a = acc.entry(r.sds_id.as_str()).or_default();
            a.0 += r.value(indicator);
            a.1 += 1;
        }
        acc.into_iter()
            .map(|(s, (sum, n))| (s, sum / n as f64))
            .collect()
    }

    /// Individual scores divided by the national researcher mean of their
    /// SDS, making researchers of different SDSs comparable inside a UDA.
    /// Researchers of an all-zero SDS get 0.
    pub fn standardized_researcher_values(&self, indicator: Indicator) -> BTreeMap<&str, f64> {
        let means = self.researcher_means(indicator);
        self.researchers
            .values()
            .map(|r| {
                let m = means[r.sds_id.as_str()];
                let v = if m > 0.0 { r.value(indicator) / m } else { 0.0 };
                (r.researcher_id.as_str(), v)
            })
            .collect()
    }

    /// P or SS divided by the SDS mean, as written to the SDS table.
    pub fn sds_normalized(&self, key: &SdsKey, indicator: Indicator) -> f64 {
        let s = &self.sds[key];
        self.sds_means[&key.1].normalize(indicator, s.value(indicator))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::fixtures::*;
    use crate::corpus::{AuthorLink, Corpus};

    fn assert_close(a: f64, b: f64) {
        assert!((a - b).abs() < 1e-12, "{a} vs {b}");
    }

    fn one_cell(cites: &[u64]) -> CellStats {
        let scheme = scheme(&[("S", "U")], &["C"], (2004, 2008));
        let pubs: Vec<_> = cites
            .iter()
            .enumerate()
            .map(|(i, &c)| publication(&format!("p{i}"), 2004, "C", c, 1, &[]))
            .collect();
        let c = Corpus::new(vec![], pubs, scheme).unwrap();
        let t = build_cell_medians(&c);
        assert_eq!(t.len(), 1);
        *t.get(2004, "C").unwrap()
    }

    #[test]
    fn cell_median_and_mean() {
        let c = one_cell(&[10, 0, 2]);
        assert_eq!((c.median, c.mean, c.count), (2.0, 4.0, 3));
        assert_eq!(one_cell(&[7]).median, 7.0);
        let c = one_cell(&[0, 0, 0, 8]);
        assert_eq!((c.median, c.mean), (0.0, 2.0));
        // zero median falls back to the mean
        assert_eq!(c.standardize(8), 4.0);
        assert_eq!(one_cell(&[0, 0]).standardize(0), 0.0);
        assert_eq!(one_cell(&[1, 4]).median, 2.5);
    }

    #[test]
    fn solo_publication_at_cell_median() {
        let scheme = scheme(&[("S", "U")], &["C"], (2004, 2008));
        let rs = vec![
            researcher("r", "u", "S", 1.0),
            researcher("z", "u", "S", 5.0),
        ];
        let pubs = vec![
            publication("p1", 2004, "C", 3, 1, &["r"]),
            publication("p2", 2004, "C", 1, 1, &[]),
            publication("p3", 2004, "C", 5, 1, &[]),
        ];
        let c = Corpus::new(rs, pubs, scheme).unwrap();
        let t = score_corpus(&c, WeightScheme::Uniform);
        assert_eq!((t.researchers["r"].p, t.researchers["r"].ss), (1.0, 1.0));
        assert_eq!((t.researchers["z"].p, t.researchers["z"].ss), (0.0, 0.0));
    }

    #[test]
    fn two_coauthored_publications_over_two_years() {
        // Cell A {4, 1, 2} -> median 2, target publication has 4 cites -> 2.0.
        // Cell B {0, 5, 5} -> median 5, target publication has 0 cites -> 0.0.
        let scheme = scheme(&[("S", "U")], &["A", "B"], (2004, 2008));
        let rs = vec![researcher("r", "u", "S", 2.0)];
        let pubs = vec![
            publication("a1", 2004, "A", 4, 4, &["r"]),
            publication("a2", 2004, "A", 1, 1, &[]),
            publication("a3", 2004, "A", 2, 1, &[]),
            publication("b1", 2005, "B", 0, 4, &["r"]),
            publication("b2", 2005, "B", 5, 1, &[]),
            publication("b3", 2005, "B", 5, 1, &[]),
        ];
        let c = Corpus::new(rs, pubs, scheme).unwrap();
        let t = score_corpus(&c, WeightScheme::Uniform);
        assert_close(t.researchers["r"].p, 0.25);
        assert_close(t.researchers["r"].ss, 0.25);
    }

    #[test]
    fn sds_level_fractional_sum() {
        let scheme = scheme(&[("S", "U")], &["C"], (2004, 2008));
        let rs = vec![
            researcher("a", "u", "S", 5.0),
            researcher("b", "u", "S", 5.0),
        ];
        let pubs = vec![
            publication("p1", 2004, "C", 1, 1, &["a"]),
            publication("p2", 2004, "C", 1, 2, &["b"]),
        ];
        let c = Corpus::new(rs, pubs, scheme).unwrap();
        let t = score_corpus(&c, WeightScheme::Uniform);
        let u = t.sds[&("u".to_string(), "S".to_string())];
        assert_eq!(u.staff, 2);
        assert_close(u.p, 0.75);
        // single university: the SDS mean is its own score
        assert_eq!(t.sds_means["S"].p, u.p);
        assert_close(t.uda[&("u".into(), "U".into())].p, 1.0);
        assert_close(t.university["u"].p, 1.0);
    }

    #[test]
    fn positional_weights_are_taken_from_links() {
        let scheme = scheme(&[("S", "U")], &["C"], (2004, 2008));
        let rs = vec![
            researcher("a", "u", "S", 1.0),
            researcher("b", "u", "S", 1.0),
        ];
        let mut p = publication("p", 2004, "C", 2, 3, &["a", "b"]);
        p.author_links = vec![
            AuthorLink {
                researcher_id: "a".into(),
                weight: 0.5,
            },
            AuthorLink {
                researcher_id: "b".into(),
                weight: 0.2,
            },
        ];
        let c = Corpus::new(rs, vec![p], scheme).unwrap();
        let t = score_corpus(&c, WeightScheme::Positional);
        assert_eq!(t.researchers["a"].p, 0.5);
        assert_eq!(t.researchers["b"].p, 0.2);
        let t = score_corpus(&c, WeightScheme::Uniform);
        assert_close(t.researchers["a"].p, 1.0 / 3.0);
    }

    fn unit(staff: usize, p: f64) -> UnitScore {
        UnitScore { staff, p, ss: p }
    }

    fn mean(p: f64) -> SdsMean {
        SdsMean {
            universities: 2,
            p,
            ss: p,
        }
    }

    #[test]
    fn uda_aggregation_is_staff_weighted() {
        let scheme = scheme(
            &[("S1", "U"), ("S2", "U"), ("S3", "V")],
            &["C"],
            (2004, 2008),
        );
        let mut sds = BTreeMap::new();
        sds.insert(("i".to_string(), "S1".to_string()), unit(3, 1.0));
        sds.insert(("i".to_string(), "S2".to_string()), unit(1, 4.0));
        sds.insert(("j".to_string(), "S3".to_string()), unit(2, 0.0));
        let mut means = BTreeMap::new();
        means.insert("S1".to_string(), mean(1.0));
        means.insert("S2".to_string(), mean(2.0));
        means.insert("S3".to_string(), mean(0.0));
        let uda = score_uda(&sds, &means, &scheme);
        let iu = uda[&("i".to_string(), "U".to_string())];
        assert_eq!(iu.staff, 4);
        assert_close(iu.p, 1.25);
        // j has nothing in U, and S3 has a zero mean
        assert!(!uda.contains_key(&("j".to_string(), "U".to_string())));
        assert_eq!(uda[&("j".to_string(), "V".to_string())].p, 0.0);
    }

    #[test]
    fn university_aggregation_spans_udas() {
        let mut sds = BTreeMap::new();
        sds.insert(("i".to_string(), "S1".to_string()), unit(2, 0.5));
        sds.insert(("i".to_string(), "S3".to_string()), unit(2, 3.0));
        let mut means = BTreeMap::new();
        means.insert("S1".to_string(), mean(1.0));
        means.insert("S3".to_string(), mean(2.0));
        assert_close(score_university(&sds, &means)["i"].p, 1.0);
    }

    #[test]
    fn parse_enums() {
        assert_eq!("ss".parse::<Indicator>().unwrap(), Indicator::SS);
        assert_eq!(
            "Positional".parse::<WeightScheme>().unwrap(),
            WeightScheme::Positional
        );
        assert!("x".parse::<Indicator>().is_err());
    }
}
