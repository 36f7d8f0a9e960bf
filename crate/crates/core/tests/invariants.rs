use proptest::prelude::*;
use rapidec::asymptotics::fit_exponent;
use rapidec::regular_sets::{affine_envelope, dominates, RegularSetSpec, SeqWindow, Window};
use rapidec::{EpsilonGrid, Family, FitConfig, GridPolicy, Net};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fitted_exponent_ignores_constant_factors(p in -2.0f64..6.0, c in 1e-6f64..1e6, wiggle in 0.0f64..0.3) {
        let grid = EpsilonGrid::default();
        let base: Vec<f64> = grid
            .values()
            .iter()
            .enumerate()
            .map(|(k, e)| e.powf(-p) * (1.0 + wiggle * (k as f64).sin()))
            .collect();
        let scaled: Vec<f64> = base.iter().map(|v| c * v).collect();
        let cfg = FitConfig::default();
        let a = fit_exponent(&base, &grid, &cfg).unwrap();
        let b = fit_exponent(&scaled, &grid, &cfg).unwrap();
        prop_assert!((a.exponent - b.exponent).abs() < 1e-9);
        prop_assert!((a.residual - b.residual).abs() < 1e-9);
    }

    #[test]
    fn affine_envelope_majorizes_and_scales(values in prop::collection::vec(0.01f64..50.0, 2..12), lambda in 0.1f64..10.0) {
        let w = SeqWindow::new(values.clone()).unwrap();
        let (a, b) = affine_envelope(&w);
        prop_assert!(values.iter().enumerate().all(|(m, &v)| a * m as f64 + b >= v));
        let scaled = SeqWindow::new(values.iter().map(|v| v * lambda).collect()).unwrap();
        let (a2, b2) = affine_envelope(&scaled);
        prop_assert!((a2 - lambda * a).abs() <= 1e-9 * (1.0 + lambda * a));
        prop_assert!((b2 - lambda * b).abs() <= 1e-9 * (1.0 + lambda * b));
    }

    #[test]
    fn domination_by_generators_is_downward_closed(
        gen in prop::collection::vec(0.0f64..10.0, 6),
        cut in prop::collection::vec(0.0f64..1.0, 6),
    ) {
        let generator = SeqWindow::new(gen.clone()).unwrap();
        let spec = RegularSetSpec::custom(vec![Window::Single(generator)], 2).unwrap();
        let below: Vec<f64> = gen.iter().zip(&cut).map(|(g, c)| g * c).collect();
        let r = dominates(&spec, &Window::Single(SeqWindow::new(below).unwrap())).unwrap();
        prop_assert!(r.feasible);
        let r = dominates(&spec, &Window::Single(SeqWindow::new(gen).unwrap())).unwrap();
        prop_assert!(r.feasible);
    }

    #[test]
    fn weighted_seminorms_interpolate(p in 0.0f64..3.0, d in 0u32..4, k in 0usize..16, beta in 0usize..3) {
        let eps = EpsilonGrid::default().value(k);
        let net = Net::on_real_line(Family::PolyWeight { p, d }).unwrap();
        let policy = GridPolicy::default();
        let grid = net.grid(eps, &policy, 0, 2 * beta).unwrap();
        let s = |b: usize| net.seminorm(eps, &[0], &[b], &grid, &policy).unwrap().value;
        let lhs = s(beta) * s(beta);
        let rhs = s(2 * beta) * s(0);
        prop_assert!(lhs <= rhs * (1.0 + 1e-12), "{lhs} > {rhs}");
    }
}
