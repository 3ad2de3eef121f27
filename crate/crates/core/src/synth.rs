//! Synthetic corpora with heavy-tailed productivity and tunable sorting of
//! researchers into universities.
//!
//! Generation order:
//!
//! 1. one latent publication rate per researcher, lognormal with sigma `skew`;
//! 2. publications per researcher from a Poisson count, citations from a
//!    gamma-Poisson (negative binomial) mixture whose shape is
//!    `citation_dispersion`;
//! 3. researchers scored once (individual scores do not depend on the
//!    university a researcher belongs to);
//! 4. within each SDS, researchers ordered by
//!    `s * rank_score + (1 - s) * uniform_noise` and dealt into the
//!    universities (sorted by id) in order, so `s = 1` places the best
//!    researchers together and `s = 0` is a random permutation.
//!
//! Each SDS draws from its own ChaCha stream, and assignment noise from
//! stream 0, so a seed fixes the corpus bit for bit.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, LogNormal, Poisson};
use serde::{Deserialize, Serialize};

use crate::corpus::{
    AuthorLink, ClassificationScheme, Corpus, PublicationRecord, ResearcherRecord,
};
use crate::error::{Error, Result};
use crate::scoring::{build_cell_medians, score_researchers, Indicator, WeightScheme};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SynthConfig {
    pub seed: u64,
    pub n_universities: usize,
    pub n_sds: usize,
    pub n_uda: usize,
    /// Inclusive range of researchers per (university, SDS).
    pub researchers_per_cell: (usize, usize),
    /// Lognormal sigma of the latent publication rate.
    pub skew: f64,
    /// 0 = random assignment, 1 = fully performance-sorted.
    pub sorting_strength: f64,
    /// Gamma shape of the citation mixture; smaller is more overdispersed.
    pub citation_dispersion: f64,
    pub window: (i32, i32),
    /// Mean publications per researcher-year.
    pub mean_rate: f64,
    /// Mean co-author count per publication (at least 1).
    pub mean_coauthors: f64,
    /// Chance that a publication has a second author from the same SDS.
    pub internal_coauthor_prob: f64,
    pub categories_per_sds: usize,
    /// Indicator the sorted assignment ranks researchers by.
    pub sort_indicator: Indicator,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            seed: 0,
            n_universities: 12,
            n_sds: 6,
            n_uda: 3,
            researchers_per_cell: (5, 12),
            skew: 1.0,
            sorting_strength: 0.0,
            citation_dispersion: 1.5,
            window: (2004, 2008),
            mean_rate: 6.0,
            mean_coauthors: 2.0,
            internal_coauthor_prob: 0.2,
            categories_per_sds: 2,
            sort_indicator: Indicator::SS,
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(format!("synth: {m}")));
        let (lo, hi) = self.researchers_per_cell;
        if self.n_universities == 0 || self.n_sds == 0 || self.n_uda == 0 {
            return bad("university, SDS and UDA counts must be positive");
        }
        if self.n_uda > self.n_sds {
            return bad("more UDAs than SDSs");
        }
        if lo == 0 || lo > hi {
            return bad("researchers_per_cell must be a non-empty range starting at 1 or more");
        }
        if !(self.skew > 0.0 && self.skew.is_finite()) {
            return bad("skew must be positive");
        }
        if !(0.0..=1.0).contains(&self.sorting_strength) {
            return bad("sorting_strength must lie in [0, 1]");
        }
        if !(self.citation_dispersion > 0.0 && self.citation_dispersion.is_finite()) {
            return bad("citation_dispersion must be positive");
        }
        if self.window.0 > self.window.1 {
            return bad("window start after end");
        }
        if !(self.mean_rate > 0.0 && self.mean_rate.is_finite()) {
            return bad("mean_rate must be positive");
        }
        if !(self.mean_coauthors >= 1.0 && self.mean_coauthors.is_finite()) {
            return bad("mean_coauthors must be at least 1");
        }
        if !(0.0..=1.0).contains(&self.internal_coauthor_prob) {
            return bad("internal_coauthor_prob must lie in [0, 1]");
        }
        if self.categories_per_sds == 0 {
            return bad("categories_per_sds must be positive");
        }
        Ok(())
    }

    fn sds_id(&self, s: usize) -> String {
        format!("S{s:02}")
    }

    fn uda_id(&self, s: usize) -> String {
        format!("A{}", s % self.n_uda)
    }

    fn university_id(&self, u: usize) -> String {
        format!("U{u:03}")
    }
}

fn poisson(rng: &mut ChaCha8Rng, mean: f64) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    Poisson::new(mean).expect("positive mean").sample(rng) as u64
}

struct Draft {
    researcher_id: String,
    sds: usize,
}

pub fn generate(config: &SynthConfig) -> Result<Corpus> {
    config.validate()?;
    let window_years = f64::from(config.window.1 - config.window.0 + 1);
    let n_categories = config.n_sds + config.categories_per_sds - 1;

    let mut scheme_rng = ChaCha8Rng::seed_from_u64(config.seed);
    scheme_rng.set_stream(u64::MAX);
    let intensity: Vec<f64> = (0..n_categories)
        .map(|_| 2.0 + 8.0 * scheme_rng.random::<f64>())
        .collect();
    let scheme = ClassificationScheme {
        sds_to_uda: (0..config.n_sds)
            .map(|s| (config.sds_id(s), config.uda_id(s)))
            .collect(),
        subject_categories: (0..n_categories).map(|c| format!("C{c:02}")).collect(),
        window: config.window,
    };

    let sigma = config.skew;
    let rate_dist = LogNormal::new(config.mean_rate.ln() - sigma * sigma / 2.0, sigma)
        .map_err(|e| Error::Config(format!("synth: {e}")))?;
    let quality_noise = LogNormal::new(-0.045, 0.3).expect("valid");

    let mut drafts: Vec<Draft> = Vec::new();
    let mut publications = Vec::new();
    let mut quotas: Vec<Vec<usize>> = Vec::with_capacity(config.n_sds);
    for s in 0..config.n_sds {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(s as u64 + 1);
        let (lo, hi) = config.researchers_per_cell;
        let quota: Vec<usize> = (0..config.n_universities)
            .map(|_| rng.random_range(lo..=hi))
            .collect();
        let n: usize = quota.iter().sum();
        let first = drafts.len();
        for i in 0..n {
            drafts.push(Draft {
                researcher_id: format!("{}-R{i:04}", config.sds_id(s)),
                sds: s,
            });
        }
        quotas.push(quota);

        for i in 0..n {
            let rate: f64 = rate_dist.sample(&mut rng);
            let quality = (rate / config.mean_rate).sqrt() * quality_noise.sample(&mut rng);
            let count = poisson(&mut rng, rate * window_years);
            for j in 0..count {
                let year = rng.random_range(config.window.0..=config.window.1);
                // neighbouring SDSs share categories
                let cat_index = (s + rng.random_range(0..config.categories_per_sds)) % n_categories;
                let age = f64::from(config.window.1 - year + 1) / window_years;
                let mean_cites = intensity[cat_index] * age * quality;
                let shape = config.citation_dispersion;
                let lambda = Gamma::new(shape, mean_cites / shape)
                    .map(|g| g.sample(&mut rng))
                    .unwrap_or(0.0);
                let citations = poisson(&mut rng, lambda);
                let total = 1 + poisson(&mut rng, config.mean_coauthors - 1.0) as u32;

                let mut authors = vec![first + i];
                if total >= 2 && n >= 2 && rng.random::<f64>() < config.internal_coauthor_prob {
                    let mut other = rng.random_range(0..n - 1);
                    if other >= i {
                        other += 1;
                    }
                    authors.push(first + other);
                }
                publications.push(PublicationRecord {
                    publication_id: format!("{}-P{i:04}-{j:03}", config.sds_id(s)),
                    year,
                    subject_category: format!("C{cat_index:02}"),
                    citation_count: citations,
                    total_coauthors: total,
                    author_links: authors
                        .into_iter()
                        .map(|a| AuthorLink {
                            researcher_id: drafts[a].researcher_id.clone(),
                            weight: 1.0 / f64::from(total),
                        })
                        .collect(),
                });
            }
        }
    }
    let provisional = Corpus::new(
        drafts
            .iter()
            .map(|d| ResearcherRecord {
                researcher_id: d.researcher_id.clone(),
                university_id: String::new(),
                sds_id: config.sds_id(d.sds),
                staff_years: window_years,
            })
            .collect(),
        publications,
        scheme,
    )?;
    let medians = build_cell_medians(&provisional);
    let scores = score_researchers(&provisional, &medians, WeightScheme::Uniform);

    let mut assign_rng = ChaCha8Rng::seed_from_u64(config.seed);
    assign_rng.set_stream(0);
    let strength = config.sorting_strength;
    let mut university_of: BTreeMap<String, String> = BTreeMap::new();
    for (s, quota) in quotas.iter().enumerate() {
        let sds = config.sds_id(s);
        let mut members: Vec<(&str, f64)> = scores
            .values()
            .filter(|r| r.sds_id == sds)
            .map(|r| (r.researcher_id.as_str(), r.value(config.sort_indicator)))
            .collect();
        members.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        let n = members.len() as f64;
        let mut keyed: Vec<(f64, &str)> = members
            .iter()
            .enumerate()
            .map(|(rank, (id, _))| {
                let noise: f64 = assign_rng.random();
                let merit = 1.0 - rank as f64 / n;
                (strength * merit + (1.0 - strength) * noise, *id)
            })
            .collect();
        keyed.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| a.1.cmp(b.1)));
        let mut order = keyed.into_iter();
        for (u, &size) in quota.iter().enumerate() {
            for (_, id) in order.by_ref().take(size) {
                university_of.insert(id.to_string(), config.university_id(u));
            }
        }
    }

    let researchers = provisional
        .researchers()
        .map(|r| ResearcherRecord {
            university_id: university_of[&r.researcher_id].clone(),
            ..r.clone()
        })
        .collect();
    let publications = provisional.publications().cloned().collect();
    Ok(Corpus::new(
        researchers,
        publications,
        provisional.scheme().clone(),
    )?)
}
