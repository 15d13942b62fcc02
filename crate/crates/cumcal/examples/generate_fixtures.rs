//! Regenerates the bundled synthetic fixtures under `fixtures/`.
//!
//! Run with: cargo run -p cumcal --example generate_fixtures
//!
//! Everything is seeded (ChaCha8, seed 202), so the files are
//! byte-identical across runs and platforms. The annual set drives the
//! demo pipeline: a labour-force level series whose growth rate feeds the
//! unemployment relation (slopes -2.574 / -2.852, break 1990, lag 0), the
//! GDP-deflator relation (2.453 / 0.842, break 1990, lag 1) and the CPI
//! relation (2.682 / 0.625, break 1991, lag 3), each with measurement
//! noise of 0.003. The quarterly set uses the eight-quarter-lag deflator
//! relation (2.0 / 3.0, break 1989Q1).

use std::path::Path;

use cumcal::model::{PiecewiseLinearModel, ResponseKind};
use cumcal::pipeline::write_series_csv;
use cumcal::series::{GrowthRateSeries, Period, Series};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

const SEED: u64 = 202;
const NOISE_SD: f64 = 0.003;

fn add_noise(clean: &Series, rng: &mut ChaCha8Rng) -> Series {
    let normal = Normal::new(0.0, NOISE_SD).unwrap();
    Series::new(
        clean.start(),
        clean
            .values()
            .iter()
            .map(|v| v + normal.sample(rng))
            .collect(),
    )
    .unwrap()
}

fn main() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    std::fs::create_dir_all(&dir).expect("create fixtures dir");
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);

    // annual labour-force level, 1961..=2010, growth around 2% per year
    let mut lf = vec![12_000_000.0f64];
    let mut x = 0.0f64;
    for _ in 0..49 {
        x = 0.6 * x + rng.random_range(-1.0..1.0);
        let growth = 0.02 + 0.012 * x;
        lf.push(lf.last().unwrap() * growth.exp());
    }
    let lf = Series::annual(1961, lf).unwrap();
    write_series_csv(&lf, &dir.join("labour_force.csv")).unwrap();
    let l = lf.log_growth_rate().unwrap();

    let unemployment_model = PiecewiseLinearModel::with_break(
        ResponseKind::Unemployment,
        0,
        (-2.574, 0.155),
        Period::Year(1990),
        (-2.852, 0.122),
    );
    let u = add_noise(&unemployment_model.predict_all(&l), &mut rng);
    write_series_csv(&u, &dir.join("unemployment.csv")).unwrap();

    let dgdp_model = PiecewiseLinearModel::with_break(
        ResponseKind::Inflation,
        1,
        (2.453, 0.0052),
        Period::Year(1990),
        (0.842, -0.0085),
    );
    let dgdp = add_noise(&dgdp_model.predict_all(&l), &mut rng);
    write_series_csv(&dgdp, &dir.join("dgdp.csv")).unwrap();

    let cpi_model = PiecewiseLinearModel::with_break(
        ResponseKind::Inflation,
        3,
        (2.682, -0.0035),
        Period::Year(1991),
        (0.625, 0.0104),
    );
    let cpi = add_noise(&cpi_model.predict_all(&l), &mut rng);
    write_series_csv(&cpi, &dir.join("cpi.csv")).unwrap();

    // quarterly labour-force level, 1969Q1..=2010Q4; the growth rate is
    // annualized, so each quarterly log step is a quarter of it
    let mut lf_q = vec![13_000_000.0f64];
    let mut xq = 0.0f64;
    for _ in 0..(42 * 4 - 1) {
        xq = 0.8 * xq + rng.random_range(-1.0..1.0);
        let growth = 0.02 + 0.015 * xq;
        lf_q.push(lf_q.last().unwrap() * (growth / 4.0).exp());
    }
    let lf_q = Series::quarterly(1969, 1, lf_q).unwrap();
    write_series_csv(&lf_q, &dir.join("labour_force_q.csv")).unwrap();
    let l_q = lf_q.log_growth_rate().unwrap();

    let dgdp_q_model = PiecewiseLinearModel::with_break(
        ResponseKind::Inflation,
        8,
        (2.0, -0.0020),
        Period::quarter(1989, 1),
        (3.0, -0.0045),
    );
    let dgdp_q = add_noise(&dgdp_q_model.predict_all(&l_q), &mut rng);
    write_series_csv(&dgdp_q, &dir.join("dgdp_q.csv")).unwrap();

    // sanity: the written fixtures must round-trip and stay in realistic
    // macro ranges
    let check = GrowthRateSeries::from_rates(l.series().clone());
    assert!(check
        .series()
        .values()
        .iter()
        .all(|v| (-0.02..0.06).contains(v)));
    println!("fixtures written to {}", dir.display());
}
