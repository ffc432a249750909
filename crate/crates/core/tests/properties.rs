//! Property tests over the forward model, metrics and file formats.

use proptest::prelude::*;

use hexwrench_core::decouple::Decoupler;
use hexwrench_core::eval::metrics;
use hexwrench_core::model::SensorModel;
use hexwrench_core::sim::{apply_hysteresis, SimLog, SimRow, WrenchSeries};
use hexwrench_core::Wrench;

fn wrench_strategy() -> impl Strategy<Value = Wrench> {
    (
        -50.0..50.0_f64,
        -50.0..50.0_f64,
        -50.0..50.0_f64,
        -1.0..1.0_f64,
        -1.0..1.0_f64,
        -1.0..1.0_f64,
    )
        .prop_map(|(fx, fy, fz, tx, ty, tz)| Wrench::new(fx, fy, fz, tx, ty, tz))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pressure_response_is_linear(a in wrench_strategy(), b in wrench_strategy(), s in -2.0..2.0_f64) {
        let model = SensorModel::reference();
        let lhs = model.delta_pressures(a * s + b);
        let rhs = model.delta_pressures(a) * s + model.delta_pressures(b);
        let scale = lhs.amax().max(rhs.amax()).max(1e-9);
        prop_assert!((lhs - rhs).amax() <= 1e-12 * scale);
    }

    #[test]
    fn lower_layer_is_blind_to_the_upper_group(
        fx in -50.0..50.0_f64,
        fy in -50.0..50.0_f64,
        tz in -1.0..1.0_f64,
    ) {
        let model = SensorModel::reference();
        let dp = model.delta_pressures(Wrench::new(fx, fy, 0.0, 0.0, 0.0, tz));
        for k in 0..8 {
            prop_assert_eq!(dp[k], 0.0);
        }
    }

    #[test]
    fn decoupling_is_linear_after_taring(
        w1 in wrench_strategy(),
        w2 in wrench_strategy(),
        a in -1.0..2.0_f64,
    ) {
        let model = SensorModel::reference();
        let scaled = model.scaled_sensitivities().unwrap();
        let k = hexwrench_core::calib::assemble_k_scaled(&scaled, &model.layout).unwrap();
        let mut d = Decoupler::from_matrix(&k);
        d.set_baseline(model.gas.p0);
        let p = model.absolute_pressures(w1);
        let q = model.absolute_pressures(w2);
        let mix: [f64; 16] = std::array::from_fn(|i| a * p[i] + (1.0 - a) * q[i]);
        let lhs = d.decouple(&mix).unwrap();
        let rhs = d.decouple(&p).unwrap() * a + d.decouple(&q).unwrap() * (1.0 - a);
        prop_assert!((lhs - rhs).max_abs() < 1e-6);
    }

    #[test]
    fn play_with_zero_width_is_identity(xs in prop::collection::vec(-10.0..10.0_f64, 1..200)) {
        prop_assert_eq!(apply_hysteresis(&xs, 0.0), xs);
    }

    #[test]
    fn play_output_stays_within_the_band(
        xs in prop::collection::vec(-10.0..10.0_f64, 1..200),
        play in 0.0..3.0_f64,
    ) {
        let ys = apply_hysteresis(&xs, play);
        for (x, y) in xs.iter().zip(&ys) {
            prop_assert!(*y >= x - play - 1e-12 && *y <= x + play + 1e-12);
        }
    }

    #[test]
    fn scale_invariance_of_deviation_and_nonlinearity(
        seed_vals in prop::collection::vec((0.1..40.0_f64, -0.5..0.5_f64), 8..60),
        c in 0.01..100.0_f64,
    ) {
        let reference: Vec<f64> = seed_vals.iter().map(|(r, _)| *r).collect();
        let meas: Vec<f64> = seed_vals.iter().map(|(r, e)| r * 1.01 + e).collect();
        let rs: Vec<f64> = reference.iter().map(|v| v * c).collect();
        let ms: Vec<f64> = meas.iter().map(|v| v * c).collect();

        let dev_a = metrics::e_dev(&meas, &reference).unwrap();
        let dev_b = metrics::e_dev(&ms, &rs).unwrap();
        prop_assert!((dev_a - dev_b).abs() <= 1e-9 * dev_a.max(1e-12));

        if let (Ok(nl_a), Ok(nl_b)) = (
            metrics::e_nlin(&meas, &reference),
            metrics::e_nlin(&ms, &rs),
        ) {
            prop_assert!((nl_a - nl_b).abs() <= 1e-9 * nl_a.max(1e-12));
        }
    }

    #[test]
    fn accuracy_dominates_its_components(
        rep in 0.0..0.2_f64,
        nlin in 0.0..0.2_f64,
        hys in 0.0..0.2_f64,
    ) {
        let acc = metrics::e_acc(rep, nlin, hys);
        prop_assert!(acc >= rep.max(nlin).max(hys) - 1e-15);
        prop_assert!(acc <= rep + nlin + hys + 1e-15);
    }

    #[test]
    fn pressure_log_csv_round_trips(
        times_and_rows in prop::collection::vec(
            (0.0..1.0_f64, prop::collection::vec(-1.0e6..1.0e6_f64, 22)),
            1..32,
        )
    ) {
        let mut t_acc = 0.0;
        let rows: Vec<SimRow> = times_and_rows
            .iter()
            .map(|(dt, vals)| {
                t_acc += dt + 1e-6;
                SimRow {
                    t: t_acc,
                    wrench: Wrench::new(vals[0], vals[1], vals[2], vals[3], vals[4], vals[5]),
                    pressures: std::array::from_fn(|k| vals[6 + k]),
                }
            })
            .collect();
        let log = SimLog { meta: None, rows };

        let dir = std::env::temp_dir().join(format!("hexwrench-prop-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let p1 = dir.join("a.csv");
        let p2 = dir.join("b.csv");
        log.write_csv(&p1).unwrap();
        let read = SimLog::read_csv(&p1).unwrap();
        read.write_csv(&p2).unwrap();
        prop_assert_eq!(std::fs::read(&p1).unwrap(), std::fs::read(&p2).unwrap());
        prop_assert_eq!(read.rows, log.rows);
    }

    #[test]
    fn wrench_series_csv_round_trips(
        vals in prop::collection::vec(prop::collection::vec(-1.0e3..1.0e3_f64, 6), 1..32)
    ) {
        let series = WrenchSeries {
            t: (0..vals.len()).map(|i| i as f64 / 1024.0).collect(),
            wrenches: vals
                .iter()
                .map(|v| Wrench::new(v[0], v[1], v[2], v[3], v[4], v[5]))
                .collect(),
        };
        let dir = std::env::temp_dir().join(format!("hexwrench-prop-w-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("w.csv");
        series.write_csv(&path).unwrap();
        let read = WrenchSeries::read_csv(&path).unwrap();
        prop_assert_eq!(read, series);
    }
}
