//! Data model, input parsing and population filters.
//!
//! A corpus is three flat files plus a JSON classification scheme:
//!
//! ```text
//! researchers.csv   researcher_id,university_id,sds_id,staff_years
//! publications.csv  publication_id,year,subject_category,citation_count,total_coauthors
//! author_links.csv  publication_id,researcher_id,weight
//! scheme.json       {"sds_to_uda": {..}, "subject_categories": [..], "window": [start, end]}
//! ```
//!
//! Records are assumed to be already disambiguated. A [`Corpus`] can only be
//! built through validation, so every value of the type satisfies the
//! cross-reference invariants.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::CorpusError;

/// Tolerance when checking that fractional author weights sum to at most one.
const WEIGHT_SUM_TOLERANCE: f64 = 1e-9;

pub const RESEARCHERS_FILE: &str = "researchers.csv";
pub const PUBLICATIONS_FILE: &str = "publications.csv";
pub const LINKS_FILE: &str = "author_links.csv";
pub const SCHEME_FILE: &str = "scheme.json";

#[derive(Debug, Clone, PartialEq)]
pub struct ResearcherRecord {
    pub researcher_id: String,
    pub university_id: String,
    pub sds_id: String,
    /// Years on staff inside the observation window.
    pub staff_years: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuthorLink {
    pub researcher_id: String,
    /// Fractional credit in (0, 1]; only consulted under positional weighting.
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PublicationRecord {
    pub publication_id: String,
    pub year: i32,
    pub subject_category: String,
    pub citation_count: u64,
    /// All co-authors, including those outside the corpus.
    pub total_coauthors: u32,
    pub author_links: Vec<AuthorLink>,
}

/// SDS to UDA hierarchy, subject categories and the observation window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationScheme {
    pub sds_to_uda: BTreeMap<String, String>,
    pub subject_categories: BTreeSet<String>,
    pub window: (i32, i32),
}

impl ClassificationScheme {
    pub fn uda_of(&self, sds_id: &str) -> Option<&str> {
        self.sds_to_uda.get(sds_id).map(String::as_str)
    }

    /// Window length in whole years, inclusive of both ends.
    pub fn window_years(&self) -> f64 {
        f64::from(self.window.1 - self.window.0 + 1)
    }

    /// All UDA ids, sorted.
    pub fn udas(&self) -> BTreeSet<&str> {
        self.sds_to_uda.values().map(String::as_str).collect()
    }

    /// The SDSs that make up one UDA, sorted.
    pub fn sds_in_uda<'a>(&'a self, uda_id: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        self.sds_to_uda
            .iter()
            .filter(move |(_, u)| u.as_str() == uda_id)
            .map(|(s, _)| s.as_str())
    }

    fn validate(&self) -> Result<(), CorpusError> {
        if self.window.0 > self.window.1 {
            return Err(CorpusError::Invalid(format!(
                "scheme window start {} is after end {}",
                self.window.0, self.window.1
            )));
        }
        Ok(())
    }
}

/// A validated publication corpus. Records are keyed and iterated by id.
#[derive(Debug, Clone, PartialEq)]
pub struct Corpus {
    researchers: BTreeMap<String, ResearcherRecord>,
    publications: BTreeMap<String, PublicationRecord>,
    scheme: ClassificationScheme,
}

impl Corpus {
    /// Validates the records against each other and the scheme.
    pub fn new(
        researchers: Vec<ResearcherRecord>,
        publications: Vec<PublicationRecord>,
        scheme: ClassificationScheme,
    ) -> Result<Self, CorpusError> {
        scheme.validate()?;
        let window_years = scheme.window_years();

        let mut by_id = BTreeMap::new();
        for r in researchers {
            if !(r.staff_years.is_finite() && r.staff_years > 0.0 && r.staff_years <= window_years)
            {
                return Err(CorpusError::Invalid(format!(
                    "researcher {}: staff_years {} not in (0, {}]",
                    r.researcher_id, r.staff_years, window_years
                )));
            }
            if !scheme.sds_to_uda.contains_key(&r.sds_id) {
                return Err(CorpusError::UnknownSds {
                    researcher_id: r.researcher_id,
                    sds_id: r.sds_id,
                });
            }
            if by_id.contains_key(&r.researcher_id) {
                return Err(CorpusError::Duplicate {
                    kind: "researcher",
                    id: r.researcher_id,
                });
            }
            by_id.insert(r.researcher_id.clone(), r);
        }

        let mut pubs = BTreeMap::new();
        for p in publications {
            validate_publication(&p, &scheme, &by_id)?;
            if pubs.contains_key(&p.publication_id) {
                return Err(CorpusError::Duplicate {
                    kind: "publication",
                    id: p.publication_id,
                });
            }
            pubs.insert(p.publication_id.clone(), p);
        }

        Ok(Corpus {
            researchers: by_id,
            publications: pubs,
            scheme,
        })
    }

    pub fn researchers(&self) -> impl ExactSizeIterator<Item = &ResearcherRecord> {
        self.researchers.values()
    }

    pub fn researcher(&self, id: &str) -> Option<&ResearcherRecord> {
        self.researchers.get(id)
    }

    pub fn publications(&self) -> impl ExactSizeIterator<Item = &PublicationRecord> {
        self.publications.values()
    }

    pub fn scheme(&self) -> &ClassificationScheme {
        &self.scheme
    }

    pub fn researcher_count(&self) -> usize {
        self.researchers.len()
    }

    pub fn publication_count(&self) -> usize {
        self.publications.len()
    }

    /// SDS ids that have at least one researcher, sorted.
    pub fn active_sds(&self) -> BTreeSet<&str> {
        self.researchers
            .values()
            .map(|r| r.sds_id.as_str())
            .collect()
    }

    pub fn universities(&self) -> BTreeSet<&str> {
        self.researchers
            .values()
            .map(|r| r.university_id.as_str())
            .collect()
    }

    /// Researchers with at least one attributed publication.
    pub fn publishing_researchers(&self) -> BTreeSet<&str> {
        self.publications
            .values()
            .flat_map(|p| p.author_links.iter().map(|l| l.researcher_id.as_str()))
            .collect()
    }

    /// Rebuilds the corpus keeping only researchers accepted by `keep`.
    /// Links to dropped researchers are removed; publications stay so that
    /// field citation baselines are unaffected.
    fn retain_researchers(&self, keep: impl Fn(&ResearcherRecord) -> bool) -> Corpus {
        let researchers: BTreeMap<_, _> = self
            .researchers
            .iter()
            .filter(|(_, r)| keep(r))
            .map(|(k, r)| (k.clone(), r.clone()))
            .collect();
        let publications = self
            .publications
            .iter()
            .map(|(k, p)| {
                let mut p = p.clone();
                p.author_links
                    .retain(|l| researchers.contains_key(&l.researcher_id));
                (k.clone(), p)
            })
            .collect();
        Corpus {
            researchers,
            publications,
            scheme: self.scheme.clone(),
        }
    }
}

fn validate_publication(
    p: &PublicationRecord,
    scheme: &ClassificationScheme,
    researchers: &BTreeMap<String, ResearcherRecord>,
) -> Result<(), CorpusError> {
    let (start, end) = scheme.window;
    if p.year < start || p.year > end {
        return Err(CorpusError::YearOutsideWindow {
            publication_id: p.publication_id.clone(),
            year: p.year,
            start,
            end,
        });
    }
    if !scheme.subject_categories.contains(&p.subject_category) {
        return Err(CorpusError::UnknownCategory {
            publication_id: p.publication_id.clone(),
            category: p.subject_category.clone(),
        });
    }
    if p.total_coauthors == 0 || (p.total_coauthors as usize) < p.author_links.len() {
        return Err(CorpusError::Invalid(format!(
            "publication {}: total_coauthors {} below {} attributed authors",
            p.publication_id,
            p.total_coauthors,
            p.author_links.len()
        )));
    }
    let mut seen = BTreeSet::new();
    let mut weight_sum = 0.0;
    for link in &p.author_links {
        if !researchers.contains_key(&link.researcher_id) {
            return Err(CorpusError::DanglingResearcher {
                publication_id: p.publication_id.clone(),
                researcher_id: link.researcher_id.clone(),
            });
        }
        if !seen.insert(link.researcher_id.as_str()) {
            return Err(CorpusError::Duplicate {
                kind: "author link",
                id: format!("{}/{}", p.publication_id, link.researcher_id),
            });
        }
        if !(link.weight > 0.0 && link.weight <= 1.0) {
            return Err(CorpusError::Invalid(format!(
                "publication {}: weight {} for {} not in (0, 1]",
                p.publication_id, link.weight, link.researcher_id
            )));
        }
        weight_sum += link.weight;
    }
    if weight_sum > 1.0 + WEIGHT_SUM_TOLERANCE {
        return Err(CorpusError::Invalid(format!(
            "publication {}: author weights sum to {weight_sum}",
            p.publication_id
        )));
    }
    Ok(())
}

/// Locations of the four corpus files.
#[derive(Debug, Clone)]
pub struct CorpusPaths {
    pub researchers: PathBuf,
    pub publications: PathBuf,
    pub links: PathBuf,
    pub scheme: PathBuf,
}

impl CorpusPaths {
    /// Conventional file names inside one directory.
    pub fn in_dir(dir: impl AsRef<Path>) -> Self {
        let dir = dir.as_ref();
        CorpusPaths {
            researchers: dir.join(RESEARCHERS_FILE),
            publications: dir.join(PUBLICATIONS_FILE),
            links: dir.join(LINKS_FILE),
            scheme: dir.join(SCHEME_FILE),
        }
    }
}

pub fn load_corpus(paths: &CorpusPaths) -> Result<Corpus, CorpusError> {
    let scheme = read_scheme(&paths.scheme)?;
    let researchers = read_researchers(&paths.researchers)?;
    let mut publications = read_publications(&paths.publications)?;
    let links = read_links(&paths.links)?;

    let index: BTreeMap<String, usize> = publications
        .iter()
        .enumerate()
        .map(|(i, p)| (p.publication_id.clone(), i))
        .collect();
    for (publication_id, link) in links {
        let &i = index
            .get(&publication_id)
            .ok_or(CorpusError::DanglingPublication(publication_id))?;
        publications[i].author_links.push(link);
    }
    Corpus::new(researchers, publications, scheme)
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CorpusError + '_ {
    move |source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn read_scheme(path: &Path) -> Result<ClassificationScheme, CorpusError> {
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    serde_json::from_str(&text).map_err(|e| CorpusError::Malformed {
        file: path.display().to_string(),
        line: e.line() as u64,
        field: "scheme".into(),
        message: e.to_string(),
    })
}

/// Iterates CSV rows after checking the header matches `expected` exactly.
fn csv_rows(path: &Path, expected: &[&str]) -> Result<Vec<(u64, csv::StringRecord)>, CorpusError> {
    let file = File::open(path).map_err(io_err(path))?;
    let name = path.display().to_string();
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(file);
    let header = reader.headers().map_err(|e| CorpusError::BadHeader {
        file: name.clone(),
        message: e.to_string(),
    })?;
    if header.iter().ne(expected.iter().copied()) {
        return Err(CorpusError::BadHeader {
            file: name,
            message: format!(
                "expected `{}`, found `{}`",
                expected.join(","),
                header.iter().collect::<Vec<_>>().join(",")
            ),
        });
    }
    let mut rows = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| CorpusError::Malformed {
            file: name.clone(),
            line: e.position().map_or(0, |p| p.line()),
            field: "*".into(),
            message: e.to_string(),
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        rows.push((line, rec));
    }
    Ok(rows)
}

struct Row<'a> {
    file: &'a str,
    line: u64,
    rec: &'a csv::StringRecord,
    header: &'a [&'a str],
}

impl Row<'_> {
    fn text(&self, col: usize) -> Result<String, CorpusError> {
        let v = self.rec.get(col).unwrap_or("");
        if v.is_empty() {
            return Err(self.bad(col, "empty value".into()));
        }
        Ok(v.to_string())
    }

    fn parse<T: std::str::FromStr>(&self, col: usize) -> Result<T, CorpusError>
    where
        T::Err: std::fmt::Display,
    {
        let v = self.rec.get(col).unwrap_or("");
        v.parse()
            .map_err(|e: T::Err| self.bad(col, format!("cannot parse `{v}`: {e}")))
    }

    fn bad(&self, col: usize, message: String) -> CorpusError {
        CorpusError::Malformed {
            file: self.file.to_string(),
            line: self.line,
            field: self.header[col].to_string(),
            message,
        }
    }
}

const RESEARCHER_HEADER: [&str; 4] = ["researcher_id", "university_id", "sds_id", "staff_years"];
const PUBLICATION_HEADER: [&str; 5] = [
    "publication_id",
    "year",
    "subject_category",
    "citation_count",
    "total_coauthors",
];
const LINK_HEADER: [&str; 3] = ["publication_id", "researcher_id", "weight"];

fn read_researchers(path: &Path) -> Result<Vec<ResearcherRecord>, CorpusError> {
    let file = path.display().to_string();
    csv_rows(path, &RESEARCHER_HEADER)?
        .iter()
        .map(|(line, rec)| {
            let row = Row {
                file: &file,
                line: *line,
                rec,
                header: &RESEARCHER_HEADER,
            };
            Ok(ResearcherRecord {
                researcher_id: row.text(0)?,
                university_id: row.text(1)?,
                sds_id: row.text(2)?,
                staff_years: row.parse(3)?,
            })
        })
        .collect()
}

fn read_publications(path: &Path) -> Result<Vec<PublicationRecord>, CorpusError> {
    let file = path.display().to_string();
    csv_rows(path, &PUBLICATION_HEADER)?
        .iter()
        .map(|(line, rec)| {
            let row = Row {
                file: &file,
                line: *line,
                rec,
                header: &PUBLICATION_HEADER,
            };
            Ok(PublicationRecord {
                publication_id: row.text(0)?,
                year: row.parse(1)?,
                subject_category: row.text(2)?,
                citation_count: row.parse(3)?,
                total_coauthors: row.parse(4)?,
                author_links: Vec::new(),
            })
        })
        .collect()
}

fn read_links(path: &Path) -> Result<Vec<(String, AuthorLink)>, CorpusError> {
    let file = path.display().to_string();
    csv_rows(path, &LINK_HEADER)?
        .iter()
        .map(|(line, rec)| {
            let row = Row {
                file: &file,
                line: *line,
                rec,
                header: &LINK_HEADER,
            };
            Ok((
                row.text(0)?,
                AuthorLink {
                    researcher_id: row.text(1)?,
                    weight: row.parse(2)?,
                },
            ))
        })
        .collect()
}

/// Writes the corpus in the same four-file layout [`load_corpus`] reads.
pub fn write_corpus(corpus: &Corpus, paths: &CorpusPaths) -> std::io::Result<()> {
    let mut w = BufWriter::new(File::create(&paths.researchers)?);
    writeln!(w, "{}", RESEARCHER_HEADER.join(","))?;
    for r in corpus.researchers() {
        writeln!(
            w,
            "{},{},{},{}",
            r.researcher_id, r.university_id, r.sds_id, r.staff_years
        )?;
    }
    w.flush()?;

    let mut w = BufWriter::new(File::create(&paths.publications)?);
    let mut l = BufWriter::new(File::create(&paths.links)?);
    writeln!(w, "{}", PUBLICATION_HEADER.join(","))?;
    writeln!(l, "{}", LINK_HEADER.join(","))?;
    for p in corpus.publications() {
        writeln!(
            w,
            "{},{},{},{},{}",
            p.publication_id, p.year, p.subject_category, p.citation_count, p.total_coauthors
        )?;
        for link in &p.author_links {
            writeln!(
                l,
                "{},{},{}",
                p.publication_id, link.researcher_id, link.weight
            )?;
        }
    }
    w.flush()?;
    l.flush()?;

    let json = serde_json::to_string_pretty(corpus.scheme()).map_err(std::io::Error::other)?;
    std::fs::write(&paths.scheme, json + "\n")
}

/// Publishing activity of one SDS.
#[derive(Debug, Clone, PartialEq)]
pub struct SdsActivity {
    pub sds_id: String,
    pub members: usize,
    pub publishing: usize,
    pub fraction: f64,
    pub kept: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ActiveSdsReport {
    pub threshold: f64,
    pub sds: Vec<SdsActivity>,
}

impl ActiveSdsReport {
    pub fn dropped(&self) -> impl Iterator<Item = &SdsActivity> {
        self.sds.iter().filter(|s| !s.kept)
    }
}

/// Keeps SDSs where at least `threshold` of member researchers have one or
/// more attributed publications.
pub fn filter_active_sds(
    corpus: &Corpus,
    threshold: f64,
) -> Result<(Corpus, ActiveSdsReport), CorpusError> {
    if !(0.0..=1.0).contains(&threshold) {
        return Err(CorpusError::Invalid(format!(
            "active-SDS threshold {threshold} not in [0, 1]"
        )));
    }
    let publishing = corpus.publishing_researchers();
    let mut counts: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
    for r in corpus.researchers() {
        let c = counts.entry(r.sds_id.as_str()).or_default();
        c.0 += 1;
        if publishing.contains(r.researcher_id.as_str()) {
            c.1 += 1;
        }
    }
    let sds: Vec<SdsActivity> = counts
        .into_iter()
        .map(|(sds_id, (members, publishing))| {
            let fraction = publishing as f64 / members as f64;
            SdsActivity {
                sds_id: sds_id.to_string(),
                members,
                publishing,
                fraction,
                kept: fraction >= threshold,
            }
        })
        .collect();
    let kept: BTreeSet<&str> = sds
        .iter()
        .filter(|s| s.kept)
        .map(|s| s.sds_id.as_str())
        .collect();
    let filtered = corpus.retain_researchers(|r| kept.contains(r.sds_id.as_str()));
    Ok((filtered, ActiveSdsReport { threshold, sds }))
}

/// Universities with at least `min_staff` researchers in the SDS.
pub fn filter_min_staff(
    corpus: &Corpus,
    sds_id: &str,
    min_staff: usize,
) -> Result<BTreeSet<String>, CorpusError> {
    if min_staff < 1 {
        return Err(CorpusError::Invalid("min_staff must be at least 1".into()));
    }
    if !corpus.scheme.sds_to_uda.contains_key(sds_id) {
        return Err(CorpusError::UnknownSds {
            researcher_id: String::new(),
            sds_id: sds_id.to_string(),
        });
    }
    let mut staff: BTreeMap<&str, usize> = BTreeMap::new();
    for r in corpus.researchers().filter(|r| r.sds_id == sds_id) {
        *staff.entry(&r.university_id).or_default() += 1;
    }
    Ok(staff
        .into_iter()
        .filter(|&(_, n)| n >= min_staff)
        .map(|(u, _)| u.to_string())
        .collect())
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn scheme(
        pairs: &[(&str, &str)],
        cats: &[&str],
        window: (i32, i32),
    ) -> ClassificationScheme {
        ClassificationScheme {
            sds_to_uda: pairs
                .iter()
                .map(|(s, u)| (s.to_string(), u.to_string()))
                .collect(),
            subject_categories: cats.iter().map(|c| c.to_string()).collect(),
            window,
        }
    }

    pub fn researcher(id: &str, uni: &str, sds: &str, years: f64) -> ResearcherRecord {
        ResearcherRecord {
            researcher_id: id.into(),
            university_id: uni.into(),
            sds_id: sds.into(),
            staff_years: years,
        }
    }

    /// Publication with uniform weights 1/total over the listed authors.
    pub fn publication(
        id: &str,
        year: i32,
        cat: &str,
        cites: u64,
        total: u32,
        authors: &[&str],
    ) -> PublicationRecord {
        PublicationRecord {
            publication_id: id.into(),
            year,
            subject_category: cat.into(),
            citation_count: cites,
            total_coauthors: total,
            author_links: authors
                .iter()
                .map(|a| AuthorLink {
                    researcher_id: a.to_string(),
                    weight: 1.0 / f64::from(total),
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    fn small() -> Corpus {
        let scheme = scheme(&[("S1", "U1"), ("S2", "U1")], &["C1"], (2004, 2008));
        let mut rs: Vec<_> = (0..10)
            .map(|i| researcher(&format!("a{i}"), "uniA", "S1", 5.0))
            .collect();
        rs.push(researcher("b0", "uniB", "S2", 5.0));
        let pubs = vec![
            publication("p1", 2004, "C1", 3, 2, &["a0", "a1"]),
            publication("p2", 2005, "C1", 0, 1, &["a2"]),
            publication("p3", 2006, "C1", 1, 3, &["a3", "b0"]),
        ];
        Corpus::new(rs, pubs, scheme).unwrap()
    }

    #[test]
    fn sds_below_threshold_is_dropped() {
        let (out, report) = filter_active_sds(&small(), 0.5).unwrap();
        let s1 = report.sds.iter().find(|s| s.sds_id == "S1").unwrap();
        assert_eq!((s1.members, s1.publishing), (10, 4));
        assert!(!s1.kept);
        assert_eq!(report.dropped().count(), 1);
        assert_eq!(out.researcher_count(), 1);
        // publications survive, links to dropped researchers do not
        assert_eq!(out.publication_count(), 3);
        assert!(out.publications().all(|p| p
            .author_links
            .iter()
            .all(|l| out.researcher(&l.researcher_id).is_some())));
    }

    #[test]
    fn zero_threshold_is_identity() {
        let c = small();
        let (out, _) = filter_active_sds(&c, 0.0).unwrap();
        assert_eq!(out, c);
    }

    #[test]
    fn threshold_out_of_range() {
        assert!(filter_active_sds(&small(), 1.5).is_err());
    }

    #[test]
    fn min_staff_boundary_inclusive() {
        let scheme = scheme(&[("S1", "U1")], &["C1"], (2004, 2008));
        let mut rs: Vec<_> = (0..5)
            .map(|i| researcher(&format!("a{i}"), "uniA", "S1", 5.0))
            .collect();
        rs.push(researcher("b0", "uniB", "S1", 5.0));
        let c = Corpus::new(rs, vec![], scheme).unwrap();
        let five = filter_min_staff(&c, "S1", 5).unwrap();
        assert_eq!(five.into_iter().collect::<Vec<_>>(), vec!["uniA"]);
        assert_eq!(filter_min_staff(&c, "S1", 1).unwrap().len(), 2);
        assert!(matches!(
            filter_min_staff(&c, "S9", 5),
            Err(CorpusError::UnknownSds { .. })
        ));
    }

    #[test]
    fn rejects_dangling_and_duplicate() {
        let scheme = scheme(&[("S1", "U1")], &["C1"], (2004, 2008));
        let rs = vec![researcher("a", "u", "S1", 5.0)];
        let err = Corpus::new(
            rs.clone(),
            vec![publication("p", 2004, "C1", 0, 1, &["r999"])],
            scheme.clone(),
        )
        .unwrap_err();
        assert!(err.to_string().contains("r999"));

        let err = Corpus::new(
            rs.clone(),
            vec![
                publication("p", 2004, "C1", 0, 1, &["a"]),
                publication("p", 2005, "C1", 0, 1, &["a"]),
            ],
            scheme.clone(),
        )
        .unwrap_err();
        assert!(matches!(
            err,
            CorpusError::Duplicate {
                kind: "publication",
                ..
            }
        ));

        let err = Corpus::new(vec![rs[0].clone(), rs[0].clone()], vec![], scheme).unwrap_err();
        assert!(matches!(
            err,
            CorpusError::Duplicate {
                kind: "researcher",
                ..
            }
        ));
    }

    #[test]
    fn rejects_out_of_window_and_unknown_codes() {
        let scheme = scheme(&[("S1", "U1")], &["C1"], (2004, 2008));
        let rs = vec![researcher("a", "u", "S1", 5.0)];
        let err = Corpus::new(
            rs.clone(),
            vec![publication("p", 2009, "C1", 0, 1, &["a"])],
            scheme.clone(),
        )
        .unwrap_err();
        assert!(matches!(
            err,
            CorpusError::YearOutsideWindow { year: 2009, .. }
        ));

        let err = Corpus::new(
            rs.clone(),
            vec![publication("p", 2004, "C9", 0, 1, &["a"])],
            scheme.clone(),
        )
        .unwrap_err();
        assert!(matches!(err, CorpusError::UnknownCategory { .. }));

        let err = Corpus::new(
            vec![researcher("a", "u", "S9", 5.0)],
            vec![],
            scheme.clone(),
        )
        .unwrap_err();
        assert!(matches!(err, CorpusError::UnknownSds { .. }));

        // 6 staff-years cannot fit in a 5-year window
        assert!(Corpus::new(
            vec![researcher("a", "u", "S1", 6.0)],
            vec![],
            scheme.clone()
        )
        .is_err());
        assert!(Corpus::new(vec![researcher("a", "u", "S1", 0.0)], vec![], scheme).is_err());
    }

    #[test]
    fn rejects_bad_coauthor_counts_and_weights() {
        let scheme = scheme(&[("S1", "U1")], &["C1"], (2004, 2008));
        let rs = vec![
            researcher("a", "u", "S1", 5.0),
            researcher("b", "u", "S1", 5.0),
        ];
        let mut p = publication("p", 2004, "C1", 0, 1, &["a", "b"]);
        assert!(Corpus::new(rs.clone(), vec![p.clone()], scheme.clone()).is_err());
        p.total_coauthors = 2;
        p.author_links[0].weight = 0.9;
        p.author_links[1].weight = 0.9;
        assert!(Corpus::new(rs.clone(), vec![p.clone()], scheme.clone()).is_err());
        p.author_links[1].weight = 0.1;
        assert!(Corpus::new(rs, vec![p], scheme).is_ok());
    }

    #[test]
    fn zero_output_researchers_are_kept() {
        let c = small();
        assert_eq!(c.researcher_count(), 11);
        assert_eq!(c.publishing_researchers().len(), 5);
    }
}
