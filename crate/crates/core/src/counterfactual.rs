//! Theoretical reallocation: all researchers of an SDS sorted by score and
//! dealt, best first, into `k` equal-size hypothetical universities. The
//! per-group Ginis of this allocation serve as a reference for the observed
//! within-university concentration.

use std::collections::BTreeMap;

use crate::concentration::gini_adjusted;
use crate::describe;
use crate::error::StatsError;

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioGroup {
    /// Researcher ids, best first.
    pub members: Vec<String>,
    pub scores: Vec<f64>,
    /// `None` when every member scored zero.
    pub gini: Option<f64>,
}

impl ScenarioGroup {
    pub fn degenerate(&self) -> bool {
        self.gini.is_none()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReallocationScenario {
    pub sds_id: String,
    pub groups: Vec<ScenarioGroup>,
    /// Adjusted Gini of the whole population; `None` if it is all zero.
    pub observed_national_gini: Option<f64>,
}

impl ReallocationScenario {
    pub fn k(&self) -> usize {
        self.groups.len()
    }

    /// Mean Gini over non-degenerate groups.
    pub fn mean_group_gini(&self) -> Option<f64> {
        let g: Vec<f64> = self.groups.iter().filter_map(|g| g.gini).collect();
        describe::mean(&g)
    }
}

/// Sorts `scores` descending (equal scores by ascending researcher id) and
/// cuts them into `k` consecutive groups whose sizes differ by at most one,
/// the first `n mod k` groups taking the extra member.
pub fn build_scenario(
    sds_id: &str,
    scores: &[(String, f64)],
    k: usize,
) -> Result<ReallocationScenario, StatsError> {
    if k < 2 {
        return Err(StatsError::Parameter(format!("need k >= 2, got {k}")));
    }
    let n = scores.len();
    if n < 2 * k {
        return Err(StatsError::TooFew {
            needed: 2 * k,
            got: n,
        });
    }
    let mut ranked: Vec<&(String, f64)> = scores.iter().collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));

    let (base, extra) = (n / k, n % k);
    let mut groups = Vec::with_capacity(k);
    let mut rest = ranked.as_slice();
    for g in 0..k {
        let size = base + usize::from(g < extra);
        let (head, tail) = rest.split_at(size);
        rest = tail;
        let values: Vec<f64> = head.iter().map(|(_, v)| *v).collect();
        groups.push(ScenarioGroup {
            members: head.iter().map(|(id, _)| id.clone()).collect(),
            gini: gini_adjusted(&values)?,
            scores: values,
        });
    }
    let all: Vec<f64> = scores.iter().map(|(_, v)| *v).collect();
    Ok(ReallocationScenario {
        sds_id: sds_id.to_string(),
        groups,
        observed_national_gini: gini_adjusted(&all)?,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DivergenceRow {
    pub university_id: String,
    pub observed_gini: f64,
    pub reference: f64,
    pub divergence: f64,
}

/// Observed Gini minus the scenario's mean group Gini, largest gap first.
pub fn divergence_report(
    scenario: &ReallocationScenario,
    observed: &BTreeMap<String, f64>,
) -> Result<Vec<DivergenceRow>, StatsError> {
    let reference = scenario.mean_group_gini().ok_or_else(|| {
        StatsError::Degenerate(format!(
            "every scenario group of {} scored zero",
            scenario.sds_id
        ))
    })?;
    let mut rows: Vec<DivergenceRow> = observed
        .iter()
        .map(|(uni, &g)| DivergenceRow {
            university_id: uni.clone(),
            observed_gini: g,
            reference,
            divergence: g - reference,
        })
        .collect();
    rows.sort_by(|a, b| {
        b.divergence
            .total_cmp(&a.divergence)
            .then_with(|| a.university_id.cmp(&b.university_id))
    });
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn named(values: &[f64]) -> Vec<(String, f64)> {
        values
            .iter()
            .enumerate()
            .map(|(i, v)| (format!("r{i:03}"), *v))
            .collect()
    }

    fn pairwise_adjusted(v: &[f64]) -> f64 {
        let n = v.len() as f64;
        let total: f64 = v.iter().sum();
        let diff: f64 = v
            .iter()
            .flat_map(|a| v.iter().map(move |b| (a - b).abs()))
            .sum();
        (diff / (2.0 * n * total)) * n / (n - 1.0)
    }

    #[test]
    fn one_to_forty_two_in_six_groups() {
        let values: Vec<f64> = (1..=42).map(f64::from).collect();
        let s = build_scenario("S", &named(&values), 6).unwrap();
        assert_eq!(s.k(), 6);
        let full = pairwise_adjusted(&values);
        for (g, group) in s.groups.iter().enumerate() {
            let top = 42 - 7 * g as i32;
            let expected: Vec<f64> = (0..7).map(|i| f64::from(top - i)).collect();
            assert_eq!(group.scores, expected);
            let gini = group.gini.unwrap();
            assert!((gini - pairwise_adjusted(&expected)).abs() < 1e-12);
            // Any run of consecutive integers has adjusted Gini 1/3, so the
            // bottom group ties the full population; unadjusted is strict.
            assert!(gini <= full + 1e-12);
            let unadjusted =
                |v: &[f64]| pairwise_adjusted(v) * (v.len() as f64 - 1.0) / v.len() as f64;
            assert!(unadjusted(&expected) < unadjusted(&values));
        }
        assert!((s.observed_national_gini.unwrap() - full).abs() < 1e-12);
    }

    #[test]
    fn remainder_goes_to_first_groups() {
        let s = build_scenario("S", &named(&[1.0; 11]), 3).unwrap();
        let sizes: Vec<_> = s.groups.iter().map(|g| g.members.len()).collect();
        assert_eq!(sizes, vec![4, 4, 3]);
        assert!(s.groups.iter().all(|g| g.gini == Some(0.0)));
    }

    #[test]
    fn zero_tail_groups_are_flagged_not_dropped() {
        let s = build_scenario("S", &named(&[5.0, 3.0, 0.0, 0.0, 0.0, 0.0]), 3).unwrap();
        assert_eq!(s.k(), 3);
        assert!(!s.groups[0].degenerate());
        assert!(s.groups[1].degenerate() && s.groups[2].degenerate());
        assert_eq!(s.mean_group_gini(), s.groups[0].gini);
    }

    #[test]
    fn ties_at_boundary_follow_id_order() {
        let scores = vec![
            ("b".to_string(), 1.0),
            ("a".to_string(), 1.0),
            ("d".to_string(), 1.0),
            ("c".to_string(), 1.0),
        ];
        let s = build_scenario("S", &scores, 2).unwrap();
        assert_eq!(s.groups[0].members, vec!["a", "b"]);
        assert_eq!(s.groups[1].members, vec!["c", "d"]);
    }

    #[test]
    fn tiny_groups_with_a_zero_tail_can_exceed_the_full_gini() {
        // Sorted grouping is not guaranteed to lower the mean Gini: the pair
        // {1.03, 0} has adjusted Gini 1.
        let s = build_scenario("S", &named(&[1.48, 1.35, 1.06, 1.03, 0.0]), 2).unwrap();
        assert_eq!(s.groups[1].gini, Some(1.0));
        assert!(s.mean_group_gini().unwrap() > s.observed_national_gini.unwrap());
    }

    #[test]
    fn too_few_researchers() {
        assert!(build_scenario("S", &named(&[1.0; 5]), 3).is_err());
        assert!(build_scenario("S", &named(&[1.0; 5]), 1).is_err());
    }

    #[test]
    fn divergence_examples() {
        let s = ReallocationScenario {
            sds_id: "S".into(),
            groups: vec![
                ScenarioGroup {
                    members: vec![],
                    scores: vec![],
                    gini: Some(0.04),
                },
                ScenarioGroup {
                    members: vec![],
                    scores: vec![],
                    gini: Some(0.06),
                },
            ],
            observed_national_gini: Some(0.6),
        };
        let observed: BTreeMap<String, f64> = [("u1", 0.05), ("u2", 0.70)]
            .map(|(k, v)| (k.to_string(), v))
            .into();
        let rows = divergence_report(&s, &observed).unwrap();
        assert_eq!(rows[0].university_id, "u2");
        assert!((rows[0].divergence - 0.65).abs() < 1e-12);
        assert!(rows[1].divergence.abs() < 1e-12);
    }
}
