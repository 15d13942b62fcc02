//! The config-driven pipeline: every task type in one run, from CSV
//! ingestion to reports, records, curves and charts.
//!
//! Run with: cargo run -p cumcal --example full_pipeline

use std::path::Path;

use cumcal::pipeline::{parse_config, run};

fn main() {
    let fixtures = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let text = std::fs::read_to_string(fixtures.join("demo.conf")).unwrap();
    let config = parse_config(&text).unwrap();

    let out = std::env::temp_dir().join("cumcal_demo");
    let summary = run(&config, &fixtures, &out).unwrap();
    print!("{}", summary.report);

    println!("---");
    println!(
        "{} tasks, {} failed; artifacts in {}",
        summary.statuses.len(),
        summary.statuses.iter().filter(|s| !s.ok).count(),
        out.display()
    );
}
