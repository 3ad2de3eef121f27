//! Load the bundled toy corpus, drop inactive SDSs and compute P and SS at
//! every level.
//!
//!     cargo run --example score_corpus [corpus_dir]

use perfdisp::corpus::{filter_active_sds, load_corpus, CorpusPaths};
use perfdisp::{score_corpus, Indicator, WeightScheme};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/toy").into());
    let raw = load_corpus(&CorpusPaths::in_dir(&dir))?;
    let (corpus, activity) = filter_active_sds(&raw, 0.5)?;
    println!(
        "{} researchers, {} publications",
        corpus.researcher_count(),
        corpus.publication_count()
    );
    for a in &activity.sds {
        println!(
            "  {}: {}/{} publishing ({:.0}%) {}",
            a.sds_id,
            a.publishing,
            a.members,
            a.fraction * 100.0,
            if a.kept { "kept" } else { "dropped" }
        );
    }

    let table = score_corpus(&corpus, WeightScheme::Uniform);
    let mut ranked: Vec<_> = table.university.iter().collect();
    ranked.sort_by(|a, b| b.1.ss.total_cmp(&a.1.ss));
    println!("\nuniversities by SS (normalized, staff-weighted):");
    for (uni, s) in ranked.iter().take(5) {
        println!("  {uni}: SS {:.3}  P {:.3}  staff {}", s.ss, s.p, s.staff);
    }

    let best = table
        .researchers
        .values()
        .max_by(|a, b| a.value(Indicator::SS).total_cmp(&b.value(Indicator::SS)))
        .expect("non-empty corpus");
    println!(
        "\nstrongest researcher: {} ({} / {}), SS {:.2} per year",
        best.researcher_id, best.university_id, best.sds_id, best.ss
    );
    Ok(())
}
