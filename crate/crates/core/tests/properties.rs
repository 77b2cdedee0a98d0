use proptest::prelude::*;
use renlab::flow::Generator;
use renlab::io::fmt12;
use renlab::models::DEFAULT_HM_THETA_PERIOD;
use renlab::quadrature::{fit_powers, gauss_legendre};
use renlab::series::{series_arith, PowerSeries, SeriesOp};
use renlab::surface::{BoundaryCurve, Chart};
use renlab::{horowitz_myers, hyperbolic3_anchored, Geometry3};
use std::f64::consts::PI;

fn coeffs(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-2.0..2.0f64, n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn series_inverse_is_multiplicative_inverse(mut a in coeffs(6), lead in 0.5..3.0f64) {
        a[0] = lead;
        let s = PowerSeries::scalar(&a);
        let inv = series_arith(&s, None, SeriesOp::Invert).unwrap();
        let one = series_arith(&s, Some(&inv), SeriesOp::Mul).unwrap();
        prop_assert!((one.get(0, 0, 0) - 1.0).abs() < 1e-12);
        for k in 1..=5 {
            prop_assert!(one.get(k, 0, 0).abs() < 1e-9 * (1.0 + inv.get(k, 0, 0).abs()));
        }
    }

    #[test]
    fn series_power_composes(mut a in coeffs(5), lead in 0.5..2.0f64, q in -1.5..1.5f64) {
        a[0] = lead;
        let s = PowerSeries::scalar(&a);
        let p = series_arith(&s, None, SeriesOp::Power(q)).unwrap();
        let back = series_arith(&p, None, SeriesOp::Power(1.0 / q)).unwrap();
        prop_assume!(q.abs() > 0.2);
        for k in 0..=4 {
            prop_assert!((back.get(k, 0, 0) - a[k]).abs() < 1e-8 * (1.0 + a[k].abs()));
        }
    }

    #[test]
    fn series_addition_commutes(a in coeffs(5), b in coeffs(5)) {
        let (sa, sb) = (PowerSeries::scalar(&a), PowerSeries::scalar(&b));
        let ab = series_arith(&sa, Some(&sb), SeriesOp::Add).unwrap();
        let ba = series_arith(&sb, Some(&sa), SeriesOp::Add).unwrap();
        prop_assert_eq!(ab, ba);
    }

    #[test]
    fn gauss_legendre_exact_for_polynomials(n in 2usize..12, a in -2.0..0.0f64, b in 0.1..2.0f64) {
        let rule = gauss_legendre(n, a, b);
        let deg = 2 * n as i32 - 1;
        let v: f64 = rule.iter().map(|(x, w)| w * x.powi(deg)).sum();
        let exact = (b.powi(deg + 1) - a.powi(deg + 1)) / (deg + 1) as f64;
        prop_assert!((v - exact).abs() < 1e-11 * (1.0 + exact.abs()) * 4f64.powi(deg));
    }

    #[test]
    fn power_fit_recovers_cubic(c in coeffs(4)) {
        let xs: Vec<f64> = (0..7).map(|k| 0.1 * 0.6f64.powi(k)).collect();
        let ys: Vec<f64> = xs.iter().map(|x| c[0] + c[1] * x + c[2] * x * x + c[3] * x.powi(3)).collect();
        let (f, _) = fit_powers(&xs, &ys, &[0, 1, 2, 3]).unwrap();
        for k in 0..4 {
            prop_assert!((f[k] - c[k]).abs() < 1e-8 * 10f64.powi(k as i32));
        }
    }

    #[test]
    fn fmt12_keeps_twelve_digits(v in -1e6..1e6f64) {
        let back: f64 = fmt12(v).parse().unwrap();
        prop_assert!((back - v).abs() <= 1e-11 * v.abs());
    }

    #[test]
    fn static_generator_is_unity(phi in -10.0..10.0f64) {
        prop_assert_eq!(Generator::Static.psi(phi), 1.0);
    }

    #[test]
    fn general_generator_is_periodic(a0 in -1.0..1.0f64, c in coeffs(3), s in coeffs(2), phi in 0.0..6.3f64) {
        let g = Generator::General { a0, cos: c, sin: s };
        prop_assert!((g.psi(phi) - g.psi(phi + 2.0 * PI)).abs() < 1e-12);
    }

    #[test]
    fn curve_normal_is_unit_and_orthogonal(
        s0 in 0.0..2.0f64,
        delta in 0.0..0.2f64,
        mode in 1u32..4,
        theta in 0.0..4.0f64,
    ) {
        let model = horowitz_myers(DEFAULT_HM_THETA_PERIOD, 2.0).unwrap();
        let curve = BoundaryCurve::perturbed(s0, delta, mode, DEFAULT_HM_THETA_PERIOD);
        let h: [f64; 3] = model.h(theta, curve.s(theta));
        let n = curve.unit_normal(&model, theta);
        let t = [1.0, curve.ds(theta)];
        let ip = |a: [f64; 2], b: [f64; 2]| h[0] * a[0] * b[0] + h[1] * (a[0] * b[1] + a[1] * b[0]) + h[2] * a[1] * b[1];
        prop_assert!((ip(n, n) - 1.0).abs() < 1e-12);
        prop_assert!(ip(n, t).abs() < 1e-12);
        prop_assert!(n[1] > 0.0);
    }

    #[test]
    fn hemisphere_chart_matches_model_potential(
        anchor in 0.4..2.7f64,
        r in 0.0..0.95f64,
        phi in 0.0..6.2f64,
        z in -0.3..0.3f64,
    ) {
        let model = hyperbolic3_anchored(anchor);
        let chart = Chart::for_model(&model).unwrap();
        let q = [r * phi.cos(), r * phi.sin(), z];
        let fg = chart.to_fg(q);
        prop_assume!(fg[0] > 1e-3);
        let a: f64 = chart.inv_v(q);
        let b: f64 = model.inv_v(fg);
        prop_assert!((a - b).abs() < 1e-12, "{} vs {}", a, b);
    }

    #[test]
    fn collar_chart_matches_model_potential(r in 0.0..0.95f64, phi in 0.0..6.2f64, s in 0.0..2.0f64) {
        let model = horowitz_myers(DEFAULT_HM_THETA_PERIOD, 2.0).unwrap();
        let chart = Chart::for_model(&model).unwrap();
        let q = [r * phi.cos(), r * phi.sin(), s];
        let fg = chart.to_fg(q);
        prop_assume!(fg[0] > 1e-3);
        let a: f64 = chart.inv_v(q);
        let b: f64 = model.inv_v(fg);
        prop_assert!((a - b).abs() < 1e-12, "{} vs {}", a, b);
    }
}
