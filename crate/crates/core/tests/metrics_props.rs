use proptest::prelude::*;

use surgectl::error::Error;
use surgectl::metrics::{actuation_metrics, error_metrics, step_metrics, MetricsReport};
use surgectl::sim::SimTrace;

fn trace(r: Vec<f64>, y: Vec<f64>, u: Vec<f64>, dt: f64) -> SimTrace {
    let n = y.len();
    SimTrace {
        t: (0..n).map(|k| k as f64 * dt).collect(),
        r,
        ym: y.clone(),
        y,
        u,
        d: vec![0.0; n],
        dt,
        diverged: false,
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

fn signal() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-10.0..10.0f64, 2..400)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn actuation_scales_quadratically(u in signal(), c in -5.0..5.0f64, dt in 1e-3..0.1f64) {
        let n = u.len();
        let base = actuation_metrics(&trace(vec![1.0; n], vec![0.0; n], u.clone(), dt));
        let scaled = actuation_metrics(&trace(vec![1.0; n], vec![0.0; n], u.iter().map(|v| c * v).collect(), dt));
        prop_assert!((scaled.energy - c * c * base.energy).abs() <= 1e-12 * c * c * base.energy.max(1e-300));
        prop_assert!((scaled.activity - c * c * base.activity).abs() <= 1e-12 * (c * c * base.activity).max(1e-300));
    }

    #[test]
    fn offset_moves_energy_not_activity(u in signal(), k in 0.5..5.0f64, dt in 1e-3..0.1f64) {
        let n = u.len();
        let base = actuation_metrics(&trace(vec![1.0; n], vec![0.0; n], u.clone(), dt));
        let shifted = actuation_metrics(&trace(vec![1.0; n], vec![0.0; n], u.iter().map(|v| v + k).collect(), dt));
        prop_assert!(rel(shifted.activity, base.activity) <= 1e-9 || (shifted.activity - base.activity).abs() <= 1e-9);
        // sum of (u + k)^2 - u^2 over the left samples
        let delta: f64 = u[..n - 1].iter().map(|v| 2.0 * k * v + k * k).sum::<f64>() * dt;
        prop_assert!((shifted.energy - base.energy - delta).abs() <= 1e-9 * (base.energy + delta.abs()).max(1.0));
    }

    #[test]
    fn time_shift_keeps_iae_and_adds_to_itae(e in signal(), k in 1usize..50, dt in 1e-3..0.1f64) {
        let n = e.len();
        let base = error_metrics(&trace(e.clone(), vec![0.0; n], vec![0.0; n], dt));
        let mut shifted_e = vec![0.0; k];
        shifted_e.extend(&e);
        let m = shifted_e.len();
        let shifted = error_metrics(&trace(shifted_e, vec![0.0; m], vec![0.0; m], dt));
        prop_assert!(rel(shifted.iae, base.iae) <= 1e-12);
        let tau = k as f64 * dt;
        prop_assert!(rel(shifted.itae, base.itae + tau * base.iae) <= 1e-10);
    }

    #[test]
    fn monotone_response_has_no_overshoot(rate in 0.05..5.0f64, amp in 0.1..10.0f64, n in 50usize..2000) {
        let dt = 0.01;
        let y: Vec<f64> = (0..n).map(|k| amp * (1.0 - (-rate * k as f64 * dt).exp())).collect();
        let m = step_metrics(&trace(vec![amp; n], y, vec![0.0; n], dt)).unwrap();
        prop_assert_eq!(m.overshoot_pct, 0.0);
    }

    #[test]
    fn integrals_converge_under_refinement(f in 0.05..2.0f64, phase in 0.0..6.0f64, a in 0.5..3.0f64) {
        let sample = |dt: f64| {
            let n = (20.0 / dt).round() as usize + 1;
            let t: Vec<f64> = (0..n).map(|k| k as f64 * dt).collect();
            let u: Vec<f64> = t.iter().map(|t| a * (2.0 * std::f64::consts::PI * f * t + phase).sin() + 0.3).collect();
            let y: Vec<f64> = t.iter().map(|t| 1.0 - (-t).exp() * (3.0 * t + phase).cos()).collect();
            MetricsReport::from_trace(&trace(vec![1.0; n], y, u, dt)).unwrap()
        };
        let (coarse, fine) = (sample(0.01), sample(0.005));
        for (name, x, y) in [
            ("iae", coarse.iae, fine.iae),
            ("itae", coarse.itae, fine.itae),
            ("energy", coarse.energy, fine.energy),
            ("activity", coarse.activity, fine.activity),
        ] {
            prop_assert!(rel(x, y) < 0.01, "{name}: {x} vs {y}");
        }
    }
}

#[test]
fn closed_forms() {
    let dt = 1e-3;
    let n = 50_001;
    let t: Vec<f64> = (0..n).map(|k| k as f64 * dt).collect();
    let y: Vec<f64> = t.iter().map(|t| 1.0 - (-t).exp()).collect();
    let tr = trace(vec![1.0; n], y, vec![1.0; n], dt);
    let step = step_metrics(&tr).unwrap();
    assert!((step.rise_s - 9f64.ln()).abs() < 0.01);
    assert!(!step.not_risen);
    // 2 % band of 1 - e^-t is left at t = ln 50
    assert!((step.settle_s - 50f64.ln()).abs() < 0.01);
    let err = error_metrics(&tr);
    assert!((err.iae - 1.0).abs() < 1e-3);
    assert!((err.itae - 1.0).abs() < 1e-3);
    assert!((actuation_metrics(&tr).energy - 50.0).abs() < 1e-9);
}

#[test]
fn unreached_reference_reports_the_horizon() {
    let n = 101;
    let tr = trace(vec![2.0; n], vec![1.0; n], vec![0.0; n], 0.1);
    let m = step_metrics(&tr).unwrap();
    assert!(m.not_risen);
    assert_eq!(m.settle_s, 10.0);
    assert!(matches!(step_metrics(&trace(vec![0.0; n], vec![1.0; n], vec![0.0; n], 0.1)), Err(Error::ZeroReference)));
}

#[test]
fn diverged_trace_reports_infinite_metrics() {
    let mut tr = trace(vec![1.0; 3], vec![0.0, 1.0, 2e6], vec![0.0; 3], 0.1);
    tr.diverged = true;
    let m = MetricsReport::from_trace(&tr).unwrap();
    assert!(m.diverged);
    assert!(m.values().iter().all(|v| v.is_infinite()));
}
