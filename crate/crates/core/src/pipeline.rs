//! End-to-end runs: validate, filter, score, then the concentration,
//! dispersion and counterfactual analyses, emitted as flat CSV tables.
//!
//! Every stage returns its files in memory; [`write_outputs`] writes them in
//! one pass and records a SHA-256 manifest, so a failing run leaves no
//! partial output behind and reruns with the same inputs are byte-identical.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::concentration::{concentration_report, ConcentrationReport, Level};
use crate::corpus::{filter_active_sds, load_corpus, ActiveSdsReport, Corpus, CorpusPaths};
use crate::counterfactual::{build_scenario, divergence_report};
use crate::dispersion::{
    correlation_report, npc_test, top_bottom_report, variability_report, VariabilityReport,
    DEFAULT_PERMUTATIONS,
};
use crate::error::{Error, Result};
use crate::scoring::{score_corpus, Indicator, ScoreTable, WeightScheme};

pub const MANIFEST_FILE: &str = "manifest.json";
pub const BETWEEN_ROW: &str = "__between__";
pub const COMBINED_ROW: &str = "__combined__";
pub const NATIONAL_ROW: &str = "__national__";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IndicatorSelection {
    P,
    SS,
    #[default]
    Both,
}

impl IndicatorSelection {
    pub fn indicators(self) -> Vec<Indicator> {
        match self {
            IndicatorSelection::P => vec![Indicator::P],
            IndicatorSelection::SS => vec![Indicator::SS],
            IndicatorSelection::Both => Indicator::ALL.to_vec(),
        }
    }

    /// Indicator used for the reallocation scenario: SS unless only P is selected.
    pub fn scenario_indicator(self) -> Indicator {
        match self {
            IndicatorSelection::P => Indicator::P,
            _ => Indicator::SS,
        }
    }
}

impl std::str::FromStr for IndicatorSelection {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "p" => Ok(IndicatorSelection::P),
            "ss" => Ok(IndicatorSelection::SS),
            "both" => Ok(IndicatorSelection::Both),
            other => Err(format!("unknown indicator selection `{other}`")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub inputs: CorpusPaths,
    pub out_dir: PathBuf,
    pub active_threshold: f64,
    pub min_staff: usize,
    pub indicators: IndicatorSelection,
    pub weights: WeightScheme,
    pub permutations: usize,
    pub seed: u64,
}

impl RunConfig {
    pub fn new(inputs: CorpusPaths, out_dir: impl Into<PathBuf>) -> Self {
        RunConfig {
            inputs,
            out_dir: out_dir.into(),
            active_threshold: 0.5,
            min_staff: 5,
            indicators: IndicatorSelection::Both,
            weights: WeightScheme::Uniform,
            permutations: DEFAULT_PERMUTATIONS,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.active_threshold) {
            return Err(Error::Config(format!(
                "active threshold {} not in [0, 1]",
                self.active_threshold
            )));
        }
        if self.min_staff < 1 {
            return Err(Error::Config("min_staff must be at least 1".into()));
        }
        if self.permutations < crate::dispersion::MIN_PERMUTATIONS {
            return Err(Error::Config(format!(
                "permutations must be at least {}",
                crate::dispersion::MIN_PERMUTATIONS
            )));
        }
        Ok(())
    }
}

/// One emitted file, path relative to the output directory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputFile {
    pub name: String,
    pub contents: Vec<u8>,
}

#[derive(Debug, Default)]
pub struct Outputs(BTreeMap<String, Vec<u8>>);

impl Outputs {
    fn add(&mut self, name: impl Into<String>, contents: String) {
        self.0.insert(name.into(), contents.into_bytes());
    }

    pub fn extend(&mut self, other: Outputs) {
        self.0.extend(other.0);
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.0.keys().map(String::as_str)
    }

    pub fn get(&self, name: &str) -> Option<&[u8]> {
        self.0.get(name).map(Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub seed: u64,
    pub permutations: usize,
    pub active_threshold: f64,
    pub min_staff: usize,
    pub weights: WeightScheme,
    pub indicators: IndicatorSelection,
    pub files: Vec<ManifestEntry>,
}

impl Manifest {
    pub fn digests(&self) -> BTreeMap<&str, &str> {
        self.files
            .iter()
            .map(|f| (f.path.as_str(), f.sha256.as_str()))
            .collect()
    }
}

fn num(x: f64) -> String {
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "NA".into(), num)
}

/// File-name safe form of an id (`FIS/01` becomes `FIS_01`).
pub fn file_key(id: &str) -> String {
    id.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

fn stats_err(stage: &'static str) -> impl Fn(crate::error::StatsError) -> Error {
    move |e| Error::stats(stage, e)
}

/// The validated, filtered and scored corpus every analysis starts from.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub corpus: Corpus,
    pub activity: ActiveSdsReport,
    pub scores: ScoreTable,
}

pub fn prepare(config: &RunConfig) -> Result<Prepared> {
    config.validate()?;
    let raw = load_corpus(&config.inputs)?;
    let (corpus, activity) = filter_active_sds(&raw, config.active_threshold)?;
    if corpus.researcher_count() == 0 {
        return Err(Error::Degenerate {
            stage: "filter",
            message: "no SDS passes the active-researcher threshold".into(),
        });
    }
    let scores = score_corpus(&corpus, config.weights);
    Ok(Prepared {
        corpus,
        activity,
        scores,
    })
}

/// Researchers, universities, publications per UDA and SDS filter results.
pub fn validate_outputs(p: &Prepared) -> Outputs {
    let mut out = Outputs::default();
    let mut s = String::from("uda_id,sds,universities,researchers,unproductive,publications\n");
    let scheme = p.corpus.scheme();
    let publishing = p.corpus.publishing_researchers();
    let mut pubs_by_uda: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    for pb in p.corpus.publications() {
        for l in &pb.author_links {
            let r = p.corpus.researcher(&l.researcher_id).expect("validated");
            pubs_by_uda
                .entry(scheme.uda_of(&r.sds_id).expect("validated"))
                .or_default()
                .insert(&pb.publication_id);
        }
    }
    for uda in scheme.udas() {
        let members: Vec<_> = p
            .corpus
            .researchers()
            .filter(|r| scheme.uda_of(&r.sds_id) == Some(uda))
            .collect();
        if members.is_empty() {
            continue;
        }
        let sds: BTreeSet<&str> = members.iter().map(|r| r.sds_id.as_str()).collect();
        let unis: BTreeSet<&str> = members.iter().map(|r| r.university_id.as_str()).collect();
        let idle = members
            .iter()
            .filter(|r| !publishing.contains(r.researcher_id.as_str()))
            .count();
        let _ = writeln!(
            s,
            "{uda},{},{},{},{idle},{}",
            sds.len(),
            unis.len(),
            members.len(),
            pubs_by_uda.get(uda).map_or(0, BTreeSet::len)
        );
    }
    out.add("dataset_summary.csv", s);

    let mut s = String::from("sds_id,members,publishing,fraction,kept\n");
    for a in &p.activity.sds {
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            a.sds_id,
            a.members,
            a.publishing,
            num(a.fraction),
            a.kept
        );
    }
    out.add("active_sds.csv", s);
    out
}

pub fn score_outputs(p: &Prepared) -> Outputs {
    let t = &p.scores;
    let mut out = Outputs::default();

    let mut s = String::from("researcher_id,p,ss\n");
    for r in t.researchers.values() {
        let _ = writeln!(s, "{},{},{}", r.researcher_id, num(r.p), num(r.ss));
    }
    out.add("researcher_scores.csv", s);

    let mut s = String::from("university_id,sds_id,staff,p,ss,p_norm,ss_norm\n");
    for (key, u) in &t.sds {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{}",
            key.0,
            key.1,
            u.staff,
            num(u.p),
            num(u.ss),
            num(t.sds_normalized(key, Indicator::P)),
            num(t.sds_normalized(key, Indicator::SS))
        );
    }
    out.add("sds_scores.csv", s);

    let mut s = String::from("university_id,uda_id,staff,p,ss\n");
    for ((uni, uda), u) in &t.uda {
        let _ = writeln!(s, "{uni},{uda},{},{},{}", u.staff, num(u.p), num(u.ss));
    }
    out.add("uda_scores.csv", s);

    let mut s = String::from("university_id,staff,p,ss\n");
    for (uni, u) in &t.university {
        let _ = writeln!(s, "{uni},{},{},{}", u.staff, num(u.p), num(u.ss));
    }
    out.add("university_scores.csv", s);
    out
}

/// Concentration reports for every level and selected indicator.
pub fn concentration_reports(p: &Prepared, config: &RunConfig) -> Result<Vec<ConcentrationReport>> {
    let mut reports = Vec::new();
    for level in Level::ALL {
        for ind in config.indicators.indicators() {
            reports.push(
                concentration_report(&p.scores, level, ind, config.min_staff)
                    .map_err(stats_err("concentration"))?,
            );
        }
    }
    Ok(reports)
}

fn find(
    reports: &[ConcentrationReport],
    level: Level,
    ind: Indicator,
) -> Option<&ConcentrationReport> {
    reports
        .iter()
        .find(|r| r.level == level && r.indicator == ind)
}

fn uda_gini_table(r: &ConcentrationReport) -> String {
    let mut s = String::from("uda_id,populations,weighted_mean_gini,min,max,median,std_dev\n");
    for u in &r.uda_stats {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{}",
            u.uda_id,
            u.stats.n,
            num(u.weighted_mean),
            num(u.stats.min),
            num(u.stats.max),
            num(u.stats.median),
            opt(u.stats.std_dev)
        );
    }
    s
}

pub fn concentration_outputs(p: &Prepared, reports: &[ConcentrationReport]) -> Outputs {
    let mut out = Outputs::default();
    for r in reports {
        let mut s = String::from("key,n,gini,ratio_b40_t20,class\n");
        for c in &r.summaries {
            let class = match (c.class, c.degenerate) {
                (Some(cl), _) => cl.label(),
                (None, true) => "degenerate",
                (None, false) => "NA",
            };
            let _ = writeln!(
                s,
                "{},{},{},{},{class}",
                c.key,
                c.n,
                opt(c.gini),
                opt(c.ratio_b40_t20)
            );
        }
        out.add(format!("concentration_{}_{}.csv", r.level, r.indicator), s);
        out.add(
            format!("uda_gini_{}_{}.csv", r.level, r.indicator),
            uda_gini_table(r),
        );
    }

    for national in reports.iter().filter(|r| r.level == Level::NationalSds) {
        let ind = national.indicator;
        for c in national.summaries.iter().filter(|c| !c.lorenz.is_empty()) {
            let mut s = String::from("pop_frac,score_frac\n");
            for pt in &c.lorenz {
                let _ = writeln!(s, "{},{}", num(pt.population), num(pt.share));
            }
            out.add(format!("lorenz_{}_{ind}.csv", file_key(&c.key)), s);
        }

        // Dot plot: university Ginis in each SDS against the national one.
        let Some(uni) = find(reports, Level::UniversitySds, ind) else {
            continue;
        };
        let mut classes = String::from("sds_id,university_id,gini,class,score,above_mean\n");
        for c in &national.summaries {
            let ginis = uni.university_ginis(&c.group_id);
            if ginis.is_empty() {
                continue;
            }
            let mut s = String::from("key,value\n");
            let _ = writeln!(s, "{NATIONAL_ROW},{}", opt(c.gini));
            for (u, g) in &ginis {
                let _ = writeln!(s, "{u},{}", num(*g));
            }
            out.add(
                format!("dotplot_gini_{ind}_{}.csv", file_key(&c.group_id)),
                s,
            );

            let score = |u: &str| p.scores.sds[&(u.to_string(), c.group_id.clone())].value(ind);
            let mean = ginis.keys().map(|u| score(u)).sum::<f64>() / ginis.len() as f64;
            for (u, g) in &ginis {
                let v = score(u);
                let _ = writeln!(
                    classes,
                    "{},{u},{},{},{},{}",
                    c.group_id,
                    num(*g),
                    crate::concentration::classify_inequality(*g),
                    num(v),
                    v > mean
                );
            }
        }
        out.add(format!("inequality_classes_{ind}.csv"), classes);
    }
    out
}

fn variability_reports(p: &Prepared, config: &RunConfig) -> Result<Vec<VariabilityReport>> {
    let mut reports = Vec::new();
    for ind in config.indicators.indicators() {
        for uda in p.scores.scheme.udas() {
            if !p.scores.uda.keys().any(|(_, u)| u == uda) {
                continue;
            }
            reports.push(
                variability_report(&p.scores, uda, ind, config.min_staff)
                    .map_err(stats_err("dispersion"))?,
            );
        }
    }
    Ok(reports)
}

fn variability_summary(reports: &[VariabilityReport]) -> Outputs {
    let mut out = Outputs::default();
    let mut by_ind: BTreeMap<Indicator, String> = BTreeMap::new();
    for v in reports {
        let s = by_ind.entry(v.indicator).or_insert_with(|| {
            String::from("uda_id,universities,min_within,max_within,median_within,between\n")
        });
        let _ = writeln!(
            s,
            "{},{},{},{},{},{}",
            v.uda_id,
            v.cv_within.len(),
            opt(v.summary.as_ref().map(|x| x.min)),
            opt(v.summary.as_ref().map(|x| x.max)),
            opt(v.summary.as_ref().map(|x| x.median)),
            opt(v.cv_between)
        );
    }
    for (ind, s) in by_ind {
        out.add(format!("variability_summary_{ind}.csv"), s);
    }
    out
}

pub fn dispersion_outputs(
    p: &Prepared,
    reports: &[ConcentrationReport],
    config: &RunConfig,
) -> Result<Outputs> {
    let mut out = Outputs::default();
    let variability = variability_reports(p, config)?;
    for v in &variability {
        let mut s = String::from("university_id,cv_within_pct\n");
        for (u, cv) in &v.cv_within {
            let _ = writeln!(s, "{u},{}", opt(*cv));
        }
        let _ = writeln!(s, "{BETWEEN_ROW},{}", opt(v.cv_between));
        out.add(
            format!("variability_{}_{}.csv", file_key(&v.uda_id), v.indicator),
            s,
        );
    }
    out.extend(variability_summary(&variability));

    let uda_reports: Vec<&ConcentrationReport> =
        reports.iter().filter(|r| r.level == Level::Uda).collect();

    let mut s = String::from("uda_id,indicator,n,rho,p\n");
    for row in correlation_report(&p.scores, &uda_reports) {
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            row.uda_id,
            row.indicator,
            row.n,
            opt(row.spearman.map(|x| x.rho)),
            opt(row.spearman.map(|x| x.p_value))
        );
    }
    out.add("correlation.csv", s);

    let rows = top_bottom_report(&p.scores, &uda_reports).map_err(stats_err("dispersion"))?;
    let mut s = String::from("uda_id,indicator,n_top,n_bottom,top_mean_gini,bottom_mean_gini\n");
    for row in &rows {
        for (ind, g) in &row.by_indicator {
            let _ = writeln!(
                s,
                "{},{ind},{},{},{},{}",
                row.uda_id,
                g.top_ginis.len(),
                g.bottom_ginis.len(),
                num(g.top_mean),
                num(g.bottom_mean)
            );
        }
    }
    out.add("top_bottom.csv", s);

    let mut npc: BTreeMap<Indicator, crate::dispersion::NpcResult> = BTreeMap::new();
    for ind in config.indicators.indicators() {
        let strata: BTreeMap<String, _> = rows
            .iter()
            .filter_map(|r| Some((r.uda_id.clone(), r.by_indicator.get(&ind)?.groups())))
            .collect();
        if strata.is_empty() {
            continue;
        }
        let res =
            npc_test(&strata, config.permutations, config.seed).map_err(stats_err("dispersion"))?;
        npc.insert(ind, res);
    }
    let p_of = |ind: Indicator, uda: &str| {
        opt(npc
            .get(&ind)
            .and_then(|r| r.per_stratum_p.get(uda).copied()))
    };
    let mut s = String::from("uda_id,p_P,p_SS\n");
    let udas: BTreeSet<&str> = npc
        .values()
        .flat_map(|r| r.per_stratum_p.keys().map(String::as_str))
        .collect();
    for uda in udas {
        let _ = writeln!(
            s,
            "{uda},{},{}",
            p_of(Indicator::P, uda),
            p_of(Indicator::SS, uda)
        );
    }
    let combined = |ind: Indicator| opt(npc.get(&ind).map(|r| r.combined_p));
    let _ = writeln!(
        s,
        "{COMBINED_ROW},{},{}",
        combined(Indicator::P),
        combined(Indicator::SS)
    );
    out.add("npc.csv", s);
    Ok(out)
}

pub fn counterfactual_outputs(
    p: &Prepared,
    reports: &[ConcentrationReport],
    config: &RunConfig,
) -> Result<Outputs> {
    let mut out = Outputs::default();
    let ind = config.indicators.scenario_indicator();
    let Some(uni_report) = find(reports, Level::UniversitySds, ind) else {
        return Ok(out);
    };
    for sds in p.scores.sds_means.keys() {
        let qualifying: BTreeSet<&str> = p
            .scores
            .sds
            .iter()
            .filter(|((_, s), u)| s == sds && u.staff >= config.min_staff)
            .map(|((u, _), _)| u.as_str())
            .collect();
        let k = qualifying.len();
        let scores: Vec<(String, f64)> = p
            .scores
            .researchers
            .values()
            .filter(|r| &r.sds_id == sds && qualifying.contains(r.university_id.as_str()))
            .map(|r| (r.researcher_id.clone(), r.value(ind)))
            .collect();
        if k < 2 || scores.len() < 2 * k {
            continue;
        }
        let scenario = build_scenario(sds, &scores, k).map_err(stats_err("counterfactual"))?;
        let mut s = String::from("group_index,size,gini\n");
        for (i, g) in scenario.groups.iter().enumerate() {
            let _ = writeln!(s, "{i},{},{}", g.members.len(), opt(g.gini));
        }
        out.add(format!("scenario_{}.csv", file_key(sds)), s);

        let observed = uni_report.university_ginis(sds);
        let Ok(rows) = divergence_report(&scenario, &observed) else {
            continue;
        };
        let mut s = String::from("university_id,observed_gini,reference,divergence\n");
        for r in rows {
            let _ = writeln!(
                s,
                "{},{},{},{}",
                r.university_id,
                num(r.observed_gini),
                num(r.reference),
                num(r.divergence)
            );
        }
        out.add(format!("divergence_{}.csv", file_key(sds)), s);
    }
    Ok(out)
}

/// Descriptive-statistics rollups only.
pub fn report_outputs(p: &Prepared, config: &RunConfig) -> Result<Outputs> {
    let mut out = Outputs::default();
    for r in concentration_reports(p, config)? {
        out.add(
            format!("uda_gini_{}_{}.csv", r.level, r.indicator),
            uda_gini_table(&r),
        );
    }
    out.extend(variability_summary(&variability_reports(p, config)?));
    Ok(out)
}

/// Writes every file plus a manifest. On failure, files written so far are
/// removed again.
pub fn write_outputs(config: &RunConfig, outputs: &Outputs) -> Result<Manifest> {
    let out_err = |path: &Path| {
        let path = path.to_path_buf();
        move |source| Error::Output { path, source }
    };
    std::fs::create_dir_all(&config.out_dir).map_err(out_err(&config.out_dir))?;
    let mut written: Vec<PathBuf> = Vec::new();
    let mut files = Vec::new();
    let result = (|| {
        for (name, bytes) in &outputs.0 {
            let path = config.out_dir.join(name);
            std::fs::write(&path, bytes).map_err(out_err(&path))?;
            written.push(path);
            files.push(ManifestEntry {
                path: name.clone(),
                sha256: hex::encode(Sha256::digest(bytes)),
                bytes: bytes.len() as u64,
            });
        }
        let manifest = Manifest {
            seed: config.seed,
            permutations: config.permutations,
            active_threshold: config.active_threshold,
            min_staff: config.min_staff,
            weights: config.weights,
            indicators: config.indicators,
            files: files.clone(),
        };
        let path = config.out_dir.join(MANIFEST_FILE);
        let json = serde_json::to_string_pretty(&manifest).expect("serializable") + "\n";
        std::fs::write(&path, json).map_err(out_err(&path))?;
        Ok(manifest)
    })();
    if result.is_err() {
        for path in written {
            let _ = std::fs::remove_file(path);
        }
    }
    result
}

/// Computes every table of a full run, without touching the filesystem
/// beyond reading the inputs.
pub fn build_all(config: &RunConfig) -> Result<Outputs> {
    let p = prepare(config)?;
    let reports = concentration_reports(&p, config)?;
    let mut out = validate_outputs(&p);
    out.extend(score_outputs(&p));
    out.extend(concentration_outputs(&p, &reports));
    out.extend(dispersion_outputs(&p, &reports, config)?);
    out.extend(counterfactual_outputs(&p, &reports, config)?);
    Ok(out)
}

/// Full pipeline: validate, filter, score, analyse, write.
pub fn run_pipeline(config: &RunConfig) -> Result<Manifest> {
    let outputs = build_all(config)?;
    write_outputs(config, &outputs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_keys_are_path_safe() {
        assert_eq!(file_key("FIS/01"), "FIS_01");
        assert_eq!(file_key("u1@S-02"), "u1_S-02");
    }

    #[test]
    fn numbers_never_print_negative_zero() {
        assert_eq!(num(-1e-12), "0.000000");
        assert_eq!(num(0.5), "0.500000");
        assert_eq!(opt(None), "NA");
    }

    #[test]
    fn config_ranges() {
        let mut c = RunConfig::new(CorpusPaths::in_dir("."), "out");
        assert!(c.validate().is_ok());
        c.active_threshold = 1.2;
        assert!(matches!(c.validate(), Err(Error::Config(_))));
        c.active_threshold = 0.5;
        c.permutations = 10;
        assert_eq!(c.validate().unwrap_err().exit_code(), 1);
    }
}
