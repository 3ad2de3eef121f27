//! Within-university versus between-university coefficients of variation for
//! each UDA of the toy corpus.
//!
//!     cargo run --example within_between_cv

use perfdisp::corpus::{load_corpus, CorpusPaths};
use perfdisp::dispersion::variability_report;
use perfdisp::{score_corpus, Indicator, WeightScheme};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let corpus = load_corpus(&CorpusPaths::in_dir(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/data/toy"
    )))?;
    let table = score_corpus(&corpus, WeightScheme::Uniform);
    for ind in Indicator::ALL {
        for uda in table.scheme.udas() {
            let r = variability_report(&table, uda, ind, 5)?;
            let s = r.summary.expect("universities with staff");
            println!(
                "{ind:>2} {uda}: within CV min {:.1}% median {:.1}% max {:.1}% | between {:.1}%",
                s.min,
                s.median,
                s.max,
                r.cv_between.unwrap_or(f64::NAN)
            );
        }
    }
    Ok(())
}
