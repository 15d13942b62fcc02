//! Series container and transforms: log growth rate, cumulative sum,
//! moving average, lagging, alignment, differencing.
//!
//! Run with: cargo run -p cumcal --example series_transforms

use std::path::Path;

use cumcal::pipeline::load_csv;
use cumcal::series::{Frequency, Series};

fn main() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let lf = load_csv(&dir.join("labour_force.csv"), Frequency::Annual).unwrap();
    println!(
        "labour force: {} levels from {} to {}",
        lf.len(),
        lf.start(),
        lf.end().unwrap()
    );

    // backward log difference, the model's sole driving variable
    let l = lf.log_growth_rate().unwrap();
    let ls = l.series();
    println!(
        "growth rate: {} values from {}, first {:.4}, mean {:.4}",
        ls.len(),
        ls.start(),
        ls.values()[0],
        ls.values().iter().sum::<f64>() / ls.len() as f64
    );

    // cumulative curve = the overall change in the level
    let cum = ls.cumulative_sum();
    println!(
        "cumulative growth at {}: {:.4} (direct log ratio {:.4})",
        cum.end().unwrap(),
        cum.values().last().unwrap(),
        (lf.values().last().unwrap() / lf.values()[0]).ln()
    );

    // trailing moving average never looks into the future
    let ma = ls.moving_average(3).unwrap();
    println!(
        "MA(3) starts {} ({} values, source started {})",
        ma.start(),
        ma.len(),
        ls.start()
    );

    // lagging re-dates values so that alignment pairs response at t with
    // the driver at t - k
    let lagged = ls.lag_shift(3);
    let (a, b) = Series::align(ls, &lagged).unwrap();
    println!(
        "lag 3: common span {}..{} ({} periods)",
        a.start(),
        a.end().unwrap(),
        b.len()
    );

    // first difference inverts the cumulative sum
    let diff = cum.first_difference().unwrap();
    let max_err = diff
        .values()
        .iter()
        .zip(&ls.values()[1..])
        .map(|(d, v)| (d - v).abs())
        .fold(0.0f64, f64::max);
    println!("diff(cumsum) round trip max error: {max_err:.2e}");
}
