//! Gini, Lorenz curve, bottom-40/top-20 ratio and inequality classes on small
//! hand-made score vectors.
//!
//!     cargo run --example concentration_basics

use perfdisp::concentration::{bottom_top_ratio, classify_inequality, gini_adjusted, lorenz_curve};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let populations: [(&str, Vec<f64>); 4] = [
        ("equal", vec![5.0; 8]),
        ("one holds all", vec![0.0, 0.0, 0.0, 10.0]),
        ("linear", (1..=10).map(f64::from).collect()),
        (
            "skewed",
            vec![0.0, 0.1, 0.2, 0.2, 0.4, 0.5, 0.9, 1.5, 3.8, 12.0],
        ),
    ];
    for (name, values) in &populations {
        let gini = gini_adjusted(values)?.expect("not all zero");
        let ratio = if values.len() >= 5 {
            bottom_top_ratio(values, 0.4, 0.2)?.map_or("NA".into(), |r| format!("{r:.3}"))
        } else {
            "n<5".into()
        };
        println!(
            "{name:>14}: gini {gini:.3} ({}), bottom40/top20 {ratio}",
            classify_inequality(gini)
        );
    }

    println!("\nLorenz curve of the skewed population:");
    for p in lorenz_curve(&populations[3].1)? {
        let bar = "#".repeat((p.share * 40.0).round() as usize);
        println!("  {:>4.0}% {:>6.3} {bar}", p.population * 100.0, p.share);
    }
    Ok(())
}
