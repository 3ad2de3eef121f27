//! Does a stronger university concentrate its performance more? Spearman
//! correlation between university score and within-university Gini, then
//! the top and bottom deciles of universities.
//!
//!     cargo run --example spearman_deciles

use perfdisp::concentration::{concentration_report, Level};
use perfdisp::corpus::{load_corpus, CorpusPaths};
use perfdisp::dispersion::{correlation_report, decile_split, spearman};
use perfdisp::{score_corpus, Indicator, WeightScheme};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let x = [1.0, 2.0, 3.0, 4.0, 5.0];
    let s = spearman(&x, &[2.0, 3.0, 1.0, 4.0, 5.0])?;
    println!("worked case: rho {:.3}, p {:.3}", s.rho, s.p_value);

    let corpus = load_corpus(&CorpusPaths::in_dir(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/data/toy"
    )))?;
    let table = score_corpus(&corpus, WeightScheme::Uniform);
    let reports = Indicator::ALL
        .into_iter()
        .map(|ind| concentration_report(&table, Level::Uda, ind, 5))
        .collect::<Result<Vec<_>, _>>()?;
    let refs: Vec<_> = reports.iter().collect();
    for row in correlation_report(&table, &refs) {
        match row.spearman {
            Some(s) => println!(
                "{} {}: n {} rho {:+.3} p {:.3}",
                row.uda_id, row.indicator, row.n, s.rho, s.p_value
            ),
            None => println!("{} {}: too few universities", row.uda_id, row.indicator),
        }
    }

    let ss: std::collections::BTreeMap<String, f64> = table
        .uda
        .iter()
        .filter(|((_, uda), _)| uda == "A0")
        .map(|((uni, _), s)| (uni.clone(), s.ss))
        .collect();
    let split = decile_split(&ss, 0.1, 0.1)?;
    println!(
        "A0 top decile {:?}, bottom decile {:?}",
        split.top, split.bottom
    );
    Ok(())
}
