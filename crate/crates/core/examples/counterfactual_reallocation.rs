//! Re-sort the researchers of each SDS into equal-size hypothetical
//! universities by descending SS and compare observed university Ginis with
//! that minimal-concentration benchmark.
//!
//!     cargo run --example counterfactual_reallocation

use perfdisp::concentration::{concentration_report, Level};
use perfdisp::corpus::{filter_min_staff, load_corpus, CorpusPaths};
use perfdisp::counterfactual::{build_scenario, divergence_report};
use perfdisp::{score_corpus, Indicator, WeightScheme};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let corpus = load_corpus(&CorpusPaths::in_dir(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/data/toy"
    )))?;
    let table = score_corpus(&corpus, WeightScheme::Uniform);
    let observed = concentration_report(&table, Level::UniversitySds, Indicator::SS, 5)?;

    let sds = "S00";
    let universities = filter_min_staff(&corpus, sds, 5)?;
    let scores: Vec<(String, f64)> = table
        .researchers
        .values()
        .filter(|r| r.sds_id == sds && universities.contains(&r.university_id))
        .map(|r| (r.researcher_id.clone(), r.ss))
        .collect();
    let scenario = build_scenario(sds, &scores, universities.len())?;
    println!(
        "{sds}: {} researchers in {} universities, national Gini {:.3}",
        scores.len(),
        scenario.k(),
        scenario.observed_national_gini.unwrap_or(f64::NAN)
    );
    for (i, g) in scenario.groups.iter().enumerate() {
        println!(
            "  group {i:>2}: {} members, Gini {}",
            g.members.len(),
            g.gini.map_or("degenerate".into(), |v| format!("{v:.3}"))
        );
    }
    println!("largest divergences from the sorted benchmark:");
    for row in divergence_report(&scenario, &observed.university_ginis(sds))?
        .iter()
        .take(5)
    {
        println!(
            "  {}: observed {:.3} vs {:.3} -> {:+.3}",
            row.university_id, row.observed_gini, row.reference, row.divergence
        );
    }
    Ok(())
}
