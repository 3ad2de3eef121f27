//! Concentration of a score population: small-sample adjusted Gini, Lorenz
//! curve, bottom/top quantile-share ratio and inequality classes.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::describe::Descriptive;
use crate::error::StatsError;
use crate::scoring::{Indicator, ScoreTable};

fn check_values(values: &[f64], needed: usize) -> Result<(), StatsError> {
    if values.len() < needed {
        return Err(StatsError::TooFew {
            needed,
            got: values.len(),
        });
    }
    match values.iter().position(|v| !(v.is_finite() && *v >= 0.0)) {
        Some(index) => Err(StatsError::InvalidValue {
            index,
            value: values[index],
        }),
        None => Ok(()),
    }
}

fn sorted(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

/// Sample Gini coefficient `sum_ij |x_i - x_j| / (2 n^2 mean)`, evaluated
/// through the sorted-rank identity. `None` when the total is zero.
pub fn gini_unadjusted(values: &[f64]) -> Result<Option<f64>, StatsError> {
    check_values(values, 1)?;
    let x = sorted(values);
    let total: f64 = x.iter().sum();
    if total == 0.0 {
        return Ok(None);
    }
    let n = x.len() as f64;
    let ranked: f64 = x.iter().enumerate().map(|(k, v)| (k + 1) as f64 * v).sum();
    Ok(Some(2.0 * ranked / (n * total) - (n + 1.0) / n))
}

/// Gini coefficient with the `n / (n - 1)` small-sample correction, clamped
/// to [0, 1]. `None` marks an all-zero population.
pub fn gini_adjusted(values: &[f64]) -> Result<Option<f64>, StatsError> {
    check_values(values, 2)?;
    let n = values.len() as f64;
    Ok(gini_unadjusted(values)?.map(|g| (g * n / (n - 1.0)).clamp(0.0, 1.0)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorenzPoint {
    /// Cumulative fraction of the population, poorest first.
    pub population: f64,
    /// Cumulative fraction of the total score held by that population.
    pub share: f64,
}

/// Lorenz curve with `n + 1` points from (0, 0) to (1, 1).
pub fn lorenz_curve(values: &[f64]) -> Result<Vec<LorenzPoint>, StatsError> {
    check_values(values, 1)?;
    let x = sorted(values);
    let total: f64 = x.iter().sum();
    if total == 0.0 {
        return Err(StatsError::Degenerate(
            "Lorenz curve of a zero total".into(),
        ));
    }
    let n = x.len();
    let mut points = Vec::with_capacity(n + 1);
    points.push(LorenzPoint {
        population: 0.0,
        share: 0.0,
    });
    let mut cum = 0.0;
    for (k, v) in x.iter().enumerate() {
        cum += v;
        points.push(LorenzPoint {
            population: (k + 1) as f64 / n as f64,
            share: if k + 1 == n { 1.0 } else { cum / total },
        });
    }
    Ok(points)
}

/// Score held by the first `persons` entries of `x`, interpolating linearly
/// inside the entry that straddles a fractional count.
fn mass(x: &[f64], persons: f64) -> f64 {
    // 0.4 * 100 is 40.00000000000001 in binary floating point.
    let persons = if (persons - persons.round()).abs() < 1e-9 {
        persons.round()
    } else {
        persons
    };
    let whole = (persons.floor() as usize).min(x.len());
    let head: f64 = x[..whole].iter().sum();
    let frac = persons - whole as f64;
    if frac > 0.0 && whole < x.len() {
        head + frac * x[whole]
    } else {
        head
    }
}

/// Cumulative score of the bottom `bottom` fraction of individuals over that
/// of the top `top` fraction. `None` when the top share is zero.
pub fn bottom_top_ratio(values: &[f64], bottom: f64, top: f64) -> Result<Option<f64>, StatsError> {
    check_values(values, 5)?;
    if !(bottom > 0.0 && top > 0.0 && bottom + top <= 1.0) {
        return Err(StatsError::Parameter(format!(
            "bottom {bottom} and top {top} must be positive with sum at most 1"
        )));
    }
    let asc = sorted(values);
    let desc: Vec<f64> = asc.iter().rev().copied().collect();
    let n = asc.len() as f64;
    let top_mass = mass(&desc, top * n);
    if top_mass == 0.0 {
        return Ok(None);
    }
    Ok(Some(mass(&asc, bottom * n) / top_mass))
}

/// Inequality bands; each band includes its lower bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum InequalityClass {
    Low,
    Moderate,
    High,
    VeryHigh,
}

impl InequalityClass {
    pub fn label(self) -> &'static str {
        match self {
            InequalityClass::Low => "low",
            InequalityClass::Moderate => "moderate",
            InequalityClass::High => "high",
            InequalityClass::VeryHigh => "very_high",
        }
    }
}

impl fmt::Display for InequalityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

pub fn classify_inequality(gini: f64) -> InequalityClass {
    if gini >= 0.70 {
        InequalityClass::VeryHigh
    } else if gini >= 0.60 {
        InequalityClass::High
    } else if gini >= 0.50 {
        InequalityClass::Moderate
    } else {
        InequalityClass::Low
    }
}

/// Staff-weighted mean of per-SDS Gini coefficients.
pub fn weighted_mean_gini(
    ginis: &BTreeMap<String, f64>,
    staff: &BTreeMap<String, usize>,
) -> Result<f64, StatsError> {
    if ginis.is_empty() {
        return Err(StatsError::TooFew { needed: 1, got: 0 });
    }
    if ginis.len() != staff.len() || ginis.keys().ne(staff.keys()) {
        return Err(StatsError::Parameter(
            "Gini and staff maps have different keys".into(),
        ));
    }
    let total: usize = staff.values().sum();
    if total == 0 {
        return Err(StatsError::Degenerate("total staff is zero".into()));
    }
    let weighted: f64 = ginis.iter().map(|(k, g)| g * staff[k] as f64).sum();
    Ok(weighted / total as f64)
}

/// Population grouping for a concentration report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Level {
    /// All researchers of an SDS nationwide.
    NationalSds,
    /// Researchers of one university in one SDS.
    UniversitySds,
    /// Researchers of one university across the SDSs of a UDA, each score
    /// standardized by its SDS's national researcher mean.
    Uda,
}

impl Level {
    pub const ALL: [Level; 3] = [Level::NationalSds, Level::UniversitySds, Level::Uda];

    pub fn label(self) -> &'static str {
        match self {
            Level::NationalSds => "national_sds",
            Level::UniversitySds => "university_sds",
            Level::Uda => "uda",
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Concentration of one population.
#[derive(Debug, Clone, PartialEq)]
pub struct ConcentrationSummary {
    /// SDS id, or `university@group` for university-level populations.
    pub key: String,
    pub university_id: Option<String>,
    /// SDS id (national and university-SDS levels) or UDA id.
    pub group_id: String,
    pub uda_id: String,
    pub n: usize,
    /// All members scored zero.
    pub degenerate: bool,
    /// Adjusted Gini; `None` when degenerate or `n < 2`.
    pub gini: Option<f64>,
    /// Bottom-40 / top-20 ratio; `None` when degenerate or `n < 5`.
    pub ratio_b40_t20: Option<f64>,
    pub class: Option<InequalityClass>,
    /// Empty when degenerate.
    pub lorenz: Vec<LorenzPoint>,
}

impl ConcentrationSummary {
    pub fn of(values: &[f64]) -> Result<Self, StatsError> {
        check_values(values, 1)?;
        let degenerate = values.iter().all(|&v| v == 0.0);
        let gini = if values.len() >= 2 {
            gini_adjusted(values)?
        } else {
            None
        };
        let ratio = if values.len() >= 5 {
            bottom_top_ratio(values, 0.4, 0.2)?
        } else {
            None
        };
        Ok(ConcentrationSummary {
            key: String::new(),
            university_id: None,
            group_id: String::new(),
            uda_id: String::new(),
            n: values.len(),
            degenerate,
            gini,
            ratio_b40_t20: ratio,
            class: gini.map(classify_inequality),
            lorenz: if degenerate {
                Vec::new()
            } else {
                lorenz_curve(values)?
            },
        })
    }
}

/// Gini statistics over the populations of one UDA.
#[derive(Debug, Clone, PartialEq)]
pub struct UdaGiniStats {
    pub uda_id: String,
    /// Mean Gini weighted by population size.
    pub weighted_mean: f64,
    pub stats: Descriptive,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConcentrationReport {
    pub level: Level,
    pub indicator: Indicator,
    pub summaries: Vec<ConcentrationSummary>,
    pub uda_stats: Vec<UdaGiniStats>,
}

impl ConcentrationReport {
    /// Defined Ginis of university-level populations of one group, keyed by university.
    pub fn university_ginis(&self, group_id: &str) -> BTreeMap<String, f64> {
        self.summaries
            .iter()
            .filter(|s| s.group_id == group_id)
            .filter_map(|s| Some((s.university_id.clone()?, s.gini?)))
            .collect()
    }

    pub fn get(&self, key: &str) -> Option<&ConcentrationSummary> {
        self.summaries.iter().find(|s| s.key == key)
    }
}

struct Population {
    university_id: Option<String>,
    group_id: String,
    uda_id: String,
    values: Vec<f64>,
}

/// (university, group) -> (UDA, values)
type PopulationMap<'a> = BTreeMap<(Option<&'a str>, &'a str), (&'a str, Vec<f64>)>;

/// UDA -> (Ginis, Gini by key, size by key)
type UdaGinis<'a> = BTreeMap<&'a str, (Vec<f64>, BTreeMap<String, f64>, BTreeMap<String, usize>)>;

fn populations(table: &ScoreTable, level: Level, indicator: Indicator) -> Vec<Population> {
    let standardized =
        (level == Level::Uda).then(|| table.standardized_researcher_values(indicator));
    let mut groups = PopulationMap::new();
    for r in table.researchers.values() {
        let (key, value) = match level {
            Level::NationalSds => ((None, r.sds_id.as_str()), r.value(indicator)),
            Level::UniversitySds => (
                (Some(r.university_id.as_str()), r.sds_id.as_str()),
                r.value(indicator),
            ),
            Level::Uda => (
                (Some(r.university_id.as_str()), r.uda_id.as_str()),
                standardized.as_ref().expect("built for Uda")[r.researcher_id.as_str()],
            ),
        };
        groups
            .entry(key)
            .or_insert_with(|| (r.uda_id.as_str(), Vec::new()))
            .1
            .push(value);
    }
    groups
        .into_iter()
        .map(|((uni, group), (uda, values))| Population {
            university_id: uni.map(str::to_string),
            group_id: group.to_string(),
            uda_id: uda.to_string(),
            values,
        })
        .collect()
}

/// One summary per population (university populations below `min_staff` are
/// left out), plus per-UDA descriptive statistics of the defined Ginis.
pub fn concentration_report(
    table: &ScoreTable,
    level: Level,
    indicator: Indicator,
    min_staff: usize,
) -> Result<ConcentrationReport, StatsError> {
    let pops: Vec<Population> = populations(table, level, indicator)
        .into_iter()
        .filter(|p| level == Level::NationalSds || p.values.len() >= min_staff)
        .collect();
    let summaries = pops
        .into_par_iter()
        .map(|p| {
            let mut s = ConcentrationSummary::of(&p.values)?;
            s.key = match &p.university_id {
                Some(u) => format!("{u}@{}", p.group_id),
                None => p.group_id.clone(),
            };
            s.university_id = p.university_id;
            s.group_id = p.group_id;
            s.uda_id = p.uda_id;
            Ok(s)
        })
        .collect::<Result<Vec<_>, StatsError>>()?;

    let mut by_uda = UdaGinis::new();
    for s in &summaries {
        if let Some(g) = s.gini {
            let e = by_uda.entry(s.uda_id.as_str()).or_default();
            e.0.push(g);
            e.1.insert(s.key.clone(), g);
            e.2.insert(s.key.clone(), s.n);
        }
    }
    let uda_stats = by_uda
        .into_iter()
        .map(|(uda, (ginis, keyed, staff))| {
            Ok(UdaGiniStats {
                uda_id: uda.to_string(),
                weighted_mean: weighted_mean_gini(&keyed, &staff)?,
                stats: Descriptive::of(&ginis).expect("non-empty"),
            })
        })
        .collect::<Result<Vec<_>, StatsError>>()?;

    Ok(ConcentrationReport {
        level,
        indicator,
        summaries,
        uda_stats,
    })
}
