mod common;

use std::fs;
use std::path::Path;

use perfdisp::corpus::{filter_active_sds, load_corpus, write_corpus, CorpusPaths};
use perfdisp::synth::{generate, SynthConfig};
use perfdisp::CorpusError;

const SCHEME: &str = r#"{"sds_to_uda": {"S1": "A", "S2": "A"}, "subject_categories": ["C1"], "window": [2004, 2008]}"#;
const RESEARCHERS: &str =
    "researcher_id,university_id,sds_id,staff_years\nr1,u1,S1,5\nr2,u1,S1,2.5\nr3,u2,S2,5\n";
const PUBLICATIONS: &str =
    "publication_id,year,subject_category,citation_count,total_coauthors\np1,2005,C1,4,2\np2,2006,C1,0,3\n";
const LINKS: &str = "publication_id,researcher_id,weight\np1,r1,0.5\np1,r3,0.5\np2,r2,0.4\n";

fn write_files(dir: &Path, researchers: &str, publications: &str, links: &str) -> CorpusPaths {
    let paths = CorpusPaths::in_dir(dir);
    fs::write(&paths.researchers, researchers).unwrap();
    fs::write(&paths.publications, publications).unwrap();
    fs::write(&paths.links, links).unwrap();
    fs::write(&paths.scheme, SCHEME).unwrap();
    paths
}

fn data_rows(path: &Path) -> usize {
    fs::read_to_string(path).unwrap().lines().count() - 1
}

#[test]
fn toy_corpus_counts_match_row_counts() {
    let paths = CorpusPaths::in_dir(common::toy_dir());
    let corpus = load_corpus(&paths).unwrap();
    assert_eq!(corpus.researcher_count(), data_rows(&paths.researchers));
    assert_eq!(corpus.publication_count(), data_rows(&paths.publications));
    let links: usize = corpus.publications().map(|p| p.author_links.len()).sum();
    assert_eq!(links, data_rows(&paths.links));
}

#[test]
fn small_corpus_loads_with_links_attached() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = load_corpus(&write_files(dir.path(), RESEARCHERS, PUBLICATIONS, LINKS)).unwrap();
    assert_eq!(corpus.researcher_count(), 3);
    let p1 = corpus.publications().next().unwrap();
    assert_eq!(p1.author_links.len(), 2);
    assert_eq!(corpus.researcher("r2").unwrap().staff_years, 2.5);
}

#[test]
fn unknown_researcher_is_named() {
    let dir = tempfile::tempdir().unwrap();
    let links = format!("{LINKS}p2,r999,0.2\n");
    let err = load_corpus(&write_files(dir.path(), RESEARCHERS, PUBLICATIONS, &links)).unwrap_err();
    assert!(
        matches!(&err, CorpusError::DanglingResearcher { researcher_id, .. } if researcher_id == "r999")
    );
    assert!(err.to_string().contains("r999"));
}

#[test]
fn empty_researchers_file_leaves_links_dangling() {
    let dir = tempfile::tempdir().unwrap();
    let err = load_corpus(&write_files(
        dir.path(),
        "researcher_id,university_id,sds_id,staff_years\n",
        PUBLICATIONS,
        LINKS,
    ))
    .unwrap_err();
    assert!(matches!(err, CorpusError::DanglingResearcher { .. }));
}

#[test]
fn malformed_row_reports_file_line_and_field() {
    let dir = tempfile::tempdir().unwrap();
    let bad = PUBLICATIONS.replace("p2,2006,C1,0,3", "p2,2006,C1,many,3");
    let err = load_corpus(&write_files(dir.path(), RESEARCHERS, &bad, LINKS)).unwrap_err();
    match &err {
        CorpusError::Malformed { line, field, .. } => {
            assert_eq!(*line, 3);
            assert_eq!(field, "citation_count");
        }
        other => panic!("unexpected {other:?}"),
    }
    assert!(err.to_string().contains("publications.csv"));
}

#[test]
fn wrong_header_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let bad = RESEARCHERS.replace("staff_years", "years");
    let err = load_corpus(&write_files(dir.path(), &bad, PUBLICATIONS, LINKS)).unwrap_err();
    assert!(matches!(err, CorpusError::BadHeader { .. }));
}

#[test]
fn year_outside_window_and_unknown_category() {
    let dir = tempfile::tempdir().unwrap();
    let late = PUBLICATIONS.replace("2006", "2011");
    let err = load_corpus(&write_files(dir.path(), RESEARCHERS, &late, LINKS)).unwrap_err();
    assert!(matches!(
        err,
        CorpusError::YearOutsideWindow { year: 2011, .. }
    ));

    let cat = PUBLICATIONS.replace("2006,C1", "2006,C9");
    let err = load_corpus(&write_files(dir.path(), RESEARCHERS, &cat, LINKS)).unwrap_err();
    assert!(
        matches!(err, CorpusError::UnknownCategory { .. }),
        "{err:?}"
    );
}

#[test]
fn missing_file_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let paths = write_files(dir.path(), RESEARCHERS, PUBLICATIONS, LINKS);
    fs::remove_file(&paths.links).unwrap();
    assert!(matches!(load_corpus(&paths), Err(CorpusError::Io { .. })));
}

#[test]
fn write_then_load_round_trips() {
    let corpus = generate(&SynthConfig {
        seed: 3,
        n_universities: 4,
        n_sds: 3,
        researchers_per_cell: (2, 4),
        ..SynthConfig::default()
    })
    .unwrap();
    let dir = tempfile::tempdir().unwrap();
    let paths = CorpusPaths::in_dir(dir.path());
    write_corpus(&corpus, &paths).unwrap();
    assert_eq!(load_corpus(&paths).unwrap(), corpus);

    let toy = load_corpus(&CorpusPaths::in_dir(common::toy_dir())).unwrap();
    write_corpus(&toy, &paths).unwrap();
    assert_eq!(load_corpus(&paths).unwrap(), toy);
}

#[test]
fn active_filter_is_idempotent_on_toy() {
    let toy = load_corpus(&CorpusPaths::in_dir(common::toy_dir())).unwrap();
    for threshold in [0.0, 0.5, 0.99, 1.0] {
        let (once, _) = filter_active_sds(&toy, threshold).unwrap();
        let (twice, _) = filter_active_sds(&once, threshold).unwrap();
        assert_eq!(once, twice);
    }
    let (same, report) = filter_active_sds(&toy, 0.0).unwrap();
    assert_eq!(same.active_sds(), toy.active_sds());
    assert_eq!(report.dropped().count(), 0);
}
