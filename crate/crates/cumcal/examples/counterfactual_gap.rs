//! Counterfactual gap: how far observations drifted from the pre-break
//! relationship extended past the break.
//!
//! Run with: cargo run -p cumcal --example counterfactual_gap

use std::path::Path;

use cumcal::calibrate::{search, CalibrationConfig};
use cumcal::model::{counterfactual_gap, ResponseKind};
use cumcal::pipeline::load_csv;
use cumcal::series::{Frequency, Period};

fn main() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let lf = load_csv(&dir.join("labour_force.csv"), Frequency::Annual).unwrap();
    let u = load_csv(&dir.join("unemployment.csv"), Frequency::Annual).unwrap();
    let l = lf.log_growth_rate().unwrap();

    let fit = search(
        &CalibrationConfig::new(Period::Year(1991)),
        &l,
        &u,
        ResponseKind::Unemployment,
    )
    .unwrap();
    let model = fit.model.as_univariate().unwrap();
    println!(
        "fitted break {}, pre-break relation: slope {:.4}, intercept {:.4}",
        fit.break_year.map(|p| p.to_string()).unwrap_or_default(),
        model.segments()[0].slope,
        model.segments()[0].intercept
    );

    // apply the pre-break segment over the full span and average the gap
    let gap = counterfactual_gap(
        &u,
        &model.pre_break_only(),
        &l,
        (Period::Year(1990), Period::Year(2009)),
    )
    .unwrap();
    println!(
        "mean observed-minus-counterfactual unemployment 1990..2009: {:.4}",
        gap.window_mean
    );
    println!(
        "({} percentage points relative to the pre-break relationship)",
        (gap.window_mean * 100.0).round()
    );

    // before the break the gap is just fit noise
    let pre = gap.gap.window(gap.gap.start(), Period::Year(1989)).unwrap();
    let pre_mean = pre.values().iter().sum::<f64>() / pre.len() as f64;
    println!("pre-break mean gap (noise check): {pre_mean:.4}");
}
