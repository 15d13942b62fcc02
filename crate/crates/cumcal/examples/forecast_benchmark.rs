//! Forecast evaluation: the lagged-driver model against the naive
//! no-change benchmark at the horizon the lag creates.
//!
//! Run with: cargo run -p cumcal --example forecast_benchmark

use std::path::Path;

use cumcal::calibrate::{fit_cumulative_lsq, naive_forecast, rmsfe, ForecastEvaluation};
use cumcal::model::ResponseKind;
use cumcal::pipeline::load_csv;
use cumcal::series::Frequency;

fn main() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let lf = load_csv(&dir.join("labour_force.csv"), Frequency::Annual).unwrap();
    let cpi = load_csv(&dir.join("cpi.csv"), Frequency::Annual).unwrap();
    let l = lf.log_growth_rate().unwrap();

    // a three-year driver lag makes every prediction a true three-year
    // forecast: nothing after t - 3 is used
    let horizon = 3;
    let fit = fit_cumulative_lsq(&l, &cpi, None, horizon, ResponseKind::Inflation).unwrap();
    let predicted = fit.model.as_univariate().unwrap().predict_all(&l);
    let eval = ForecastEvaluation::compute(&cpi, &predicted, horizon).unwrap();
    println!(
        "horizon {}: model RMSFE {:.4} vs naive {:.4}",
        eval.horizon, eval.model_rmsfe, eval.naive_rmsfe
    );

    // the naive benchmark is a pure no-change rule
    let naive = naive_forecast(&cpi, horizon).unwrap();
    println!(
        "naive check: first forecast for {} equals the observation at {}",
        naive.start(),
        cpi.start()
    );
    assert_eq!(naive.values()[0], cpi.values()[0]);
    assert!((rmsfe(&cpi, &naive).unwrap() - eval.naive_rmsfe).abs() < 1e-15);

    if eval.model_rmsfe < eval.naive_rmsfe {
        println!("the labour-force model beats the naive forecast");
    } else {
        println!("the naive forecast wins on this sample");
    }
}
