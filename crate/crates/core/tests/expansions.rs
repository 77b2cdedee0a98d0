use renlab::geometry::Scheme;
use renlab::models::{boundary_data, horowitz_myers, hyperbolic3, DEFAULT_HM_THETA_PERIOD};
use renlab::series::{
    conformal_metric_expansion, levelset_h_series, potential_expansion, sample_points,
    LadderSpec,
};

fn hm() -> renlab::MetricModel {
    horowitz_myers(DEFAULT_HM_THETA_PERIOD, 2.0).unwrap()
}

#[test]
fn potential_series_hyperbolic() {
    let m = hyperbolic3();
    let pts = sample_points(&m, 3, 3);
    let r = potential_expansion(&m, 4, &LadderSpec::default(), &pts).unwrap();
    for p in 0..pts.len() {
        let c: Vec<f64> = (0..=4).map(|k| r.measured.get(k, p, 0)).collect();
        println!("{c:?}");
        assert!((c[3] + 0.25).abs() < 1e-8);
        assert!(c[2].abs() < 1e-8 && c[4].abs() < 1e-6);
    }
    assert!(r.discrepancy[..4].iter().all(|d| *d < 1e-8));
}

#[test]
fn potential_series_hm() {
    let m = hm();
    let pts = sample_points(&m, 2, 2);
    let r = potential_expansion(&m, 4, &LadderSpec::default(), &pts).unwrap();
    for p in 0..pts.len() {
        let c: Vec<f64> = (0..=4).map(|k| r.measured.get(k, p, 0)).collect();
        println!("{c:?}");
        // x(1 + x³/4)^{-2/3} = x − x⁴/6 + …
        assert!((c[4] + 1.0 / 6.0).abs() < 1e-6);
    }
    assert!(r.discrepancy.iter().all(|d| *d < 1e-6), "{:?}", r.discrepancy);
}

#[test]
fn metric_series_both_models() {
    for m in [hyperbolic3(), hm()] {
        let pts = sample_points(&m, 3, 2);
        let r = conformal_metric_expansion(&m, 3, &LadderSpec::default(), &pts).unwrap();
        println!("{} {:?}", m.name(), r.discrepancy);
        assert!(r.discrepancy.iter().all(|d| *d < 1e-8));
    }
}

#[test]
fn hm_neumann_data() {
    let d = boundary_data(&hm()).unwrap();
    let h3 = d.h3(0.3, 0.7);
    assert!((h3[0] + 2.0 / 3.0).abs() < 1e-12 && (h3[2] - 1.0 / 3.0).abs() < 1e-12);
    assert!((d.tr_h3(0.3, 0.7) + 1.0 / 3.0).abs() < 1e-12);
    assert!((d.mu(0.1, 0.2) + 1.0).abs() < 1e-12);
}

#[test]
fn levelset_series() {
    for (m, want) in [
        (hyperbolic3(), [-2.0, 0.0, -1.0, 0.0]),
        (hm(), [-2.0, 0.0, 0.0, -0.5]),
    ] {
        let pts = sample_points(&m, 2, 2);
        let r = levelset_h_series(&m, &LadderSpec::default(), &pts, Scheme::Exact).unwrap();
        for p in 0..pts.len() {
            for k in 0..4 {
                let c = r.measured.get(k, p, 0);
                assert!((c - want[k]).abs() < 1e-4, "{} k={k} c={c}", m.name());
            }
        }
    }
}
