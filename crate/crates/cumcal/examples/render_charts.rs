//! Curve CSVs and SVG line charts for a fitted model, the figure types of
//! the reporting pipeline.
//!
//! Run with: cargo run -p cumcal --example render_charts

use std::path::Path;

use cumcal::calibrate::{search, CalibrationConfig};
use cumcal::model::ResponseKind;
use cumcal::pipeline::{emit_curves, emit_svg, load_csv, Curve, CurveKind};
use cumcal::series::{Frequency, Period, Series};

fn main() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let out = std::env::temp_dir().join("cumcal_charts");
    std::fs::create_dir_all(&out).unwrap();

    let lf = load_csv(&dir.join("labour_force.csv"), Frequency::Annual).unwrap();
    let dgdp = load_csv(&dir.join("dgdp.csv"), Frequency::Annual).unwrap();
    let l = lf.log_growth_rate().unwrap();

    let fit = search(
        &CalibrationConfig::new(Period::Year(1991)),
        &l,
        &dgdp,
        ResponseKind::Inflation,
    )
    .unwrap();
    let (obs, _) = Series::align(&dgdp, &fit.residual_dynamic).unwrap();
    let predicted = obs.minus(&fit.residual_dynamic).unwrap();

    // one CSV and one chart per curve kind
    for kind in [CurveKind::Dynamic, CurveKind::Cumulative] {
        let csv = out.join(format!("dgdp_{kind}.csv"));
        emit_curves(&obs, &predicted, kind, &csv).unwrap();

        let (o, p) = match kind {
            CurveKind::Dynamic => (obs.clone(), predicted.clone()),
            CurveKind::Cumulative => (obs.cumulative_sum(), predicted.cumulative_sum()),
        };
        let svg = out.join(format!("dgdp_{kind}.svg"));
        emit_svg(
            &[
                Curve {
                    label: "observed".into(),
                    series: o,
                },
                Curve {
                    label: "predicted".into(),
                    series: p,
                },
            ],
            &format!("GDP deflator, {kind} curves"),
            &svg,
        )
        .unwrap();
        println!("wrote {} and {}", csv.display(), svg.display());
    }

    // smoothed variant, the way noisy curves are usually displayed
    let smoothed = obs.moving_average(3).unwrap();
    let svg = out.join("dgdp_ma3.svg");
    emit_svg(
        &[Curve {
            label: "observed MA(3)".into(),
            series: smoothed,
        }],
        "GDP deflator, MA(3)",
        &svg,
    )
    .unwrap();
    println!("wrote {}", svg.display());
}
