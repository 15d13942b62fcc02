//! ADF, DF-GLS and Phillips-Perron tests on levels and first differences,
//! the usual order-of-integration table.
//!
//! Run with: cargo run -p cumcal --example unit_root_battery

use std::path::Path;

use cumcal::econometrics::{adf_test, dfgls_test, pp_test, TestReport, TrendSpec};
use cumcal::pipeline::load_csv;
use cumcal::series::{Frequency, Series};

fn show(report: &TestReport) {
    if report.is_degenerate() {
        println!("  {:<6} degenerate perfect fit", report.test_name);
        return;
    }
    let stat = report.primary().unwrap();
    let verdict = stat
        .reject_at
        .map(|l| format!("reject at {}", l.label()))
        .unwrap_or_else(|| "no rejection".into());
    println!(
        "  {:<6} {} = {:>6.2}  (1%: {:.2}, 5%: {:.2}, 10%: {:.2})  {verdict}",
        report.test_name,
        stat.name,
        stat.value,
        stat.critical_values.one_pct,
        stat.critical_values.five_pct,
        stat.critical_values.ten_pct,
    );
}

fn battery(name: &str, s: &Series) {
    println!("{name} ({} observations):", s.len());
    show(&adf_test(s, 2, TrendSpec::Constant).unwrap());
    show(&dfgls_test(s, 2, TrendSpec::ConstantAndTrend).unwrap());
    show(&pp_test(s, TrendSpec::Constant, None).unwrap());
}

fn main() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let dgdp = load_csv(&dir.join("dgdp.csv"), Frequency::Annual).unwrap();
    let lf = load_csv(&dir.join("labour_force.csv"), Frequency::Annual).unwrap();
    let l = lf.log_growth_rate().unwrap().into_series();

    battery("DGDP", &dgdp);
    battery("dDGDP", &dgdp.first_difference().unwrap());
    battery("dLF/LF", &l);
    battery("d(dLF/LF)", &l.first_difference().unwrap());
}
