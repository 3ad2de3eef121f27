//! Concentration and dispersion of research performance inside and across
//! universities.
//!
//! A corpus of researchers, publications and authorship links is scored per
//! researcher (fractional output `P` and field-standardized impact `SS`),
//! aggregated to SDS, UDA and university level, then analysed with Gini
//! coefficients, Lorenz curves, coefficients of variation, rank correlations,
//! a permutation test and a theoretical reallocation scenario.
//!
//! ```
//! use perfdisp::concentration::{gini_adjusted, classify_inequality};
//!
//! let g = gini_adjusted(&[0.0, 0.0, 0.0, 10.0]).unwrap().unwrap();
//! assert!((g - 1.0).abs() < 1e-12);
//! assert_eq!(classify_inequality(g).label(), "very_high");
//! ```

pub mod concentration;
pub mod corpus;
pub mod counterfactual;
pub mod describe;
pub mod dispersion;
pub mod error;
pub mod pipeline;
pub mod scoring;
pub mod synth;

pub use concentration::{
    classify_inequality, concentration_report, gini_adjusted, gini_unadjusted, lorenz_curve,
    ConcentrationReport, InequalityClass, Level,
};
pub use corpus::{filter_active_sds, load_corpus, write_corpus, Corpus, CorpusPaths};
pub use counterfactual::{build_scenario, divergence_report, ReallocationScenario};
pub use dispersion::{coefficient_of_variation, npc_test, spearman, NpcResult, Spearman};
pub use error::{CorpusError, Error, Result, StatsError};
pub use pipeline::{run_pipeline, IndicatorSelection, Manifest, RunConfig};
pub use scoring::{score_corpus, Indicator, ScoreTable, WeightScheme};
pub use synth::{generate, SynthConfig};
