use hyperwave_core::chaos::g_n_closed_1d;
use hyperwave_core::dmt::{Potential, PotentialSpec, TablePotential};
use hyperwave_core::greens::{GreenValue, Point};
use hyperwave_core::intermit::{assemble_log_series, mittag_leffler_log};
use hyperwave_core::mc::stream;
use hyperwave_core::varopt::{random_bumps, white_noise_sup_exact, Functional, GridFunction, GridSpec};
use hyperwave_core::wick::{
    hu_meyer, hu_meyer_eval, pair_partitions, strat_finite, GaussianVectorSpec, SymmetricTensor,
};
use hyperwave_core::{CovarianceModel, Dimension, GreenKernel};
use proptest::prelude::*;

fn density(k: &GreenKernel, t: f64, x: &Point) -> f64 {
    match k.eval(t, x).unwrap() {
        GreenValue::Density(v) => v,
        GreenValue::LightCone => f64::INFINITY,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn green_scaling_d1(t in 0.1f64..5.0, x in -6.0f64..6.0, c in 0.2f64..5.0) {
        let k = GreenKernel::new(Dimension::ONE);
        prop_assume!((x.abs() - t).abs() > 1e-9);
        prop_assert_eq!(density(&k, c * t, &[c * x, 0.0, 0.0]), density(&k, t, &[x, 0.0, 0.0]));
    }

    #[test]
    fn green_scaling_d2(t in 0.1f64..5.0, r in 0.0f64..0.99, phi in 0.0f64..std::f64::consts::TAU, c in 0.2f64..5.0) {
        let k = GreenKernel::new(Dimension::TWO);
        let x = [r * t * phi.cos(), r * t * phi.sin(), 0.0];
        let cx = [c * x[0], c * x[1], 0.0];
        let lhs = density(&k, c * t, &cx);
        let rhs = density(&k, t, &x) / c;
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs());
    }

    #[test]
    fn green_mass(t in 0.05f64..4.0, d in 1usize..=3) {
        let dim = Dimension::new(d).unwrap();
        let k = GreenKernel::new(dim);
        let m = k.pair(t, |_| 1.0).unwrap();
        prop_assert!((m - t).abs() < 1e-8 * t.max(1.0));
        prop_assert_eq!(k.mass(t), t);
    }

    #[test]
    fn riesz_homogeneity(alpha in 0.05f64..0.95, kappa in 0.1f64..3.0, x in 0.01f64..10.0, c in 0.1f64..10.0) {
        let m = CovarianceModel::riesz(Dimension::ONE, alpha, kappa).unwrap();
        let r = m.homogeneity_residual(c, &[x, 0.0, 0.0]).unwrap();
        let scale = m.gamma(&[c * x, 0.0, 0.0]).unwrap();
        prop_assert!(r <= 1e-12 * scale);
    }

    #[test]
    fn mollified_kernels_positive(alpha in 0.1f64..1.9, eps in 1e-3f64..2.0, r in 0.0f64..20.0, d in 2usize..=3) {
        let m = CovarianceModel::riesz(Dimension::new(d).unwrap(), alpha, 1.0).unwrap();
        let v = m.gamma_mollified(eps, &[r, 0.0, 0.0]).unwrap();
        prop_assert!(v > 0.0 && v.is_finite());
        let farther = m.gamma_mollified(eps, &[r + 0.5, 0.0, 0.0]).unwrap();
        prop_assert!(farther < v);
    }

    #[test]
    fn white_mollified_positive(eps in 1e-3f64..2.0, x in -10.0f64..10.0) {
        let v = CovarianceModel::white().gamma_mollified(eps, &[x, 0.0, 0.0]).unwrap();
        prop_assert!(v >= 0.0);
    }

    #[test]
    fn hu_meyer_identity(n in 1usize..=4, m in 1usize..=5, seed in any::<u64>()) {
        let mut rng = stream(seed, 0);
        let spec = GaussianVectorSpec::random(m, &mut rng);
        let f = SymmetricTensor::random(n, m, &mut rng);
        let terms = hu_meyer(&f, &spec).unwrap();
        for _ in 0..5 {
            let w = spec.sample(&mut rng);
            let lhs = strat_finite(&f, &w).unwrap();
            let rhs = hu_meyer_eval(&terms, &w, &spec).unwrap();
            prop_assert!((lhs - rhs).abs() < 1e-10 * lhs.abs().max(1.0), "{} vs {}", lhs, rhs);
        }
    }

    #[test]
    fn partitions_are_perfect_matchings(n in 1usize..=5) {
        for p in pair_partitions(n).unwrap() {
            let mut seen = vec![false; 2 * n];
            for (a, b) in &p.pairs {
                prop_assert!(a < b);
                prop_assert!(!seen[*a] && !seen[*b]);
                seen[*a] = true;
                seen[*b] = true;
            }
            prop_assert!(seen.iter().all(|s| *s));
        }
    }

    #[test]
    fn kernel_translation_1d(t in 0.1f64..3.0, a in -3.0f64..3.0, b in -3.0f64..3.0, c in -3.0f64..3.0, s in -4.0f64..4.0) {
        let g = g_n_closed_1d(3, t, 0.0, &[a, b, c]);
        prop_assert!(g >= 0.0);
        let moved = g_n_closed_1d(3, t, s, &[a + s, b + s, c + s]);
        prop_assert!((g - moved).abs() < 1e-12);
    }

    #[test]
    fn table_stays_within_data(x in 0.0f64..=2.0, y in 0.0f64..=1.0, vals in proptest::collection::vec(-5.0f64..5.0, 6)) {
        let mut rows = Vec::new();
        for (i, v) in vals.iter().enumerate() {
            rows.push(([(i % 3) as f64, (i / 3) as f64, 0.0], *v));
        }
        let tab = PotentialSpec::Table(TablePotential::from_rows(Dimension::TWO, &rows).unwrap());
        let f = tab.eval(&[x, y, 0.0]).unwrap();
        let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(f >= lo - 1e-12 && f <= hi + 1e-12);
    }

    #[test]
    fn functional_below_supremum(seed in any::<u64>()) {
        let spec = GridSpec::new(Dimension::ONE, 20.0, 0.1).unwrap();
        let f = Functional::new(&CovarianceModel::white(), spec).unwrap();
        let g = random_bumps(spec, &mut stream(seed, 0)).unwrap();
        prop_assert!((g.norm_l2() - 1.0).abs() < 1e-12);
        prop_assert!(f.eval(&g).unwrap() <= white_noise_sup_exact() + 1e-4);
    }

    #[test]
    fn narrow_profiles_lose(width in 0.01f64..0.05) {
        let spec = GridSpec::new(Dimension::ONE, 4.0, 0.002).unwrap();
        let f = Functional::new(&CovarianceModel::white(), spec).unwrap();
        let g = GridFunction::gaussian(spec, width).unwrap();
        prop_assert!(f.eval(&g).unwrap() < -0.25 / (width * width) * 0.5);
    }

    #[test]
    fn mittag_leffler_increasing(g in 0.5f64..3.0, b in 1.0f64..1e3) {
        let a = mittag_leffler_log(1.0, g, b).unwrap();
        let c = mittag_leffler_log(1.0, g, b * 1.5).unwrap();
        prop_assert!(c > a);
    }

    #[test]
    fn series_monotone_in_t(c1 in -8.0f64..0.0, c2 in -12.0f64..0.0, t in 0.1f64..3.0) {
        let a = assemble_log_series(&[0.0, c1, c2], t, 1.0).unwrap();
        let b = assemble_log_series(&[0.0, c1, c2], t * 1.1, 1.0).unwrap();
        prop_assert!(a.value >= 1.0);
        prop_assert!(b.value > a.value);
    }
}
