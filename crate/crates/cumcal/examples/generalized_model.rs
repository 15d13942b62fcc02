//! The trivariate balance form: inflation from labour-force growth and
//! unemployment, one equation across the break.
//!
//! Run with: cargo run -p cumcal --example generalized_model

use std::path::Path;

use cumcal::calibrate::fit_generalized;
use cumcal::model::{balance_sum, PiecewiseLinearModel, ResponseKind};
use cumcal::pipeline::load_csv;
use cumcal::series::{Frequency, Period};

fn main() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let lf = load_csv(&dir.join("labour_force.csv"), Frequency::Annual).unwrap();
    let u = load_csv(&dir.join("unemployment.csv"), Frequency::Annual).unwrap();
    let dgdp = load_csv(&dir.join("dgdp.csv"), Frequency::Annual).unwrap();
    let l = lf.log_growth_rate().unwrap();

    let fit = fit_generalized(&l, &u, &dgdp, 1, 1).unwrap();
    let m = fit.model.as_generalized().unwrap();
    println!(
        "pi_t = {:.4} l_(t-1) + {:.4} u_(t-1) + {:.4}",
        m.c1, m.c2, m.c3
    );
    println!(
        "rms dynamic {:.4}, R2 dynamic {:.4}, R2 cumulative {:.4}",
        fit.rms_dynamic, fit.r2_dynamic, fit.r2_cumulative
    );

    // the balance of two individual relations: pi_t + u_t as one curve
    let m_pi = PiecewiseLinearModel::with_break(
        ResponseKind::Inflation,
        1,
        (2.453, 0.0052),
        Period::Year(1990),
        (0.842, -0.0085),
    );
    let m_u = PiecewiseLinearModel::with_break(
        ResponseKind::Unemployment,
        0,
        (-2.574, 0.155),
        Period::Year(1990),
        (-2.852, 0.122),
    );
    let balance = balance_sum(&m_pi, &m_u, &l).unwrap();
    println!(
        "balance pi + u over {}..{}: mean {:.4}",
        balance.start(),
        balance.end().unwrap(),
        balance.values().iter().sum::<f64>() / balance.len() as f64
    );
}
