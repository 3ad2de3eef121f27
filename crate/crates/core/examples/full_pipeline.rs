//! The complete analysis on the toy corpus, writing every table and a
//! digest manifest.
//!
//!     cargo run --release --example full_pipeline [out_dir]

use perfdisp::corpus::CorpusPaths;
use perfdisp::pipeline::{run_pipeline, RunConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "perfdisp-out".into());
    let mut config = RunConfig::new(
        CorpusPaths::in_dir(concat!(env!("CARGO_MANIFEST_DIR"), "/data/toy")),
        &out,
    );
    config.seed = 7;
    let manifest = run_pipeline(&config)?;
    for f in &manifest.files {
        println!("{:<45} {:>7} bytes  {}", f.path, f.bytes, &f.sha256[..16]);
    }
    println!("{} files in {out}", manifest.files.len());
    Ok(())
}
