use proptest::prelude::*;

use rearrange_core::ball::{ball_sum_entropy, BallPair};
use rearrange_core::convolution::convolve;
use rearrange_core::rearrangement::{l1_distance, level_set_measure, majorizes};
use rearrange_core::verifier::{check_main_theorem_orders, check_rbll, eps_conv, random_indicator};
use rearrange_core::{rearrange_1d, renyi_entropy, Density, Grid1D, RenyiOrder};

/// Nonnegative cell values with a fair share of exact zeros.
fn cell_values(min: usize, max: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(prop_oneof![1 => Just(0.0), 3 => 0.0f64..1.0], min..max)
        .prop_filter("some positive mass", |v| v.iter().any(|&x| x > 1e-3))
}

fn density(values: Vec<f64>, x0: f64, dx: f64) -> Grid1D {
    Grid1D::new(x0, dx, values).unwrap().normalize().unwrap()
}

fn orders() -> [RenyiOrder; 5] {
    [RenyiOrder::Zero, RenyiOrder::General(0.5), RenyiOrder::One, RenyiOrder::General(2.0), RenyiOrder::Infinity]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn rearrangement_preserves_distribution(v in cell_values(2, 80), x0 in -3.0f64..3.0, dx in 0.01f64..0.5) {
        let f = density(v, x0, dx);
        let r = rearrange_1d(&f);
        prop_assert!((f.mass() - r.mass()).abs() < 1e-12);
        for order in orders() {
            let (a, b) = (renyi_entropy(&f, order).unwrap(), renyi_entropy(&r, order).unwrap());
            prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0), "{order}: {a} vs {b}");
        }
        for &t in f.values() {
            prop_assert!((level_set_measure(&f, t) - level_set_measure(&r, t)).abs() < 1e-12);
        }
    }

    #[test]
    fn rearrangement_is_symmetric_decreasing_and_idempotent(v in cell_values(2, 80)) {
        let r = rearrange_1d(&density(v, 0.0, 0.1));
        prop_assert!(r.is_symmetric(0.0));
        let vals = r.values();
        let mid = vals.len() / 2;
        prop_assert!(vals[mid..].windows(2).all(|w| w[0] >= w[1]));
        prop_assert_eq!(rearrange_1d(&r), r.refine(2));
    }

    #[test]
    fn rearrangement_ignores_translation(v in cell_values(2, 60), shift in -20i64..20) {
        let f = density(v, 0.0, 0.1);
        prop_assert_eq!(rearrange_1d(&f), rearrange_1d(&f.shift_cells(shift)));
    }

    #[test]
    fn majorization_preorder(v in cell_values(2, 60), w in cell_values(2, 60)) {
        let f = density(v, 0.0, 0.1);
        let g = density(w, -1.0, 0.1);
        let (fr, gr) = (rearrange_1d(&f), rearrange_1d(&g));
        prop_assert!(majorizes(&f, &f).unwrap().0);
        prop_assert!(majorizes(&f, &fr).unwrap().0 && majorizes(&fr, &f).unwrap().0);
        // Transitivity through the rearrangement.
        if majorizes(&f, &g).unwrap().0 {
            prop_assert!(majorizes(&fr, &gr).unwrap().0);
        }
    }

    #[test]
    fn l1_contraction(v in cell_values(40, 41), w in cell_values(40, 41)) {
        let f = density(v, 0.0, 0.05);
        let g = density(w, 0.0, 0.05);
        let lhs = l1_distance(&rearrange_1d(&f), &rearrange_1d(&g)).unwrap();
        prop_assert!(lhs <= l1_distance(&f, &g).unwrap() + 1e-12);
    }

    #[test]
    fn renyi_entropy_nonincreasing_in_order(v in cell_values(2, 80)) {
        let f = density(v, 0.0, 0.1);
        let ps = [0.0, 0.25, 0.5, 0.9, 1.0, 1.1, 2.0, 5.0, f64::INFINITY];
        let hs: Vec<f64> = ps.iter().map(|&p| renyi_entropy(&f, RenyiOrder::from_p(p).unwrap()).unwrap()).collect();
        prop_assert!(hs.windows(2).all(|w| w[1] <= w[0] + 1e-12), "{hs:?}");
    }

    #[test]
    fn convolution_entropy_dominates_rearranged(v in cell_values(8, 64), w in cell_values(8, 64)) {
        let f = density(v, -1.0, 0.05);
        let g = density(w, 0.5, 0.05);
        let reports = check_main_theorem_orders(&[f.clone(), g.clone()], &orders()).unwrap();
        for r in &reports {
            prop_assert!(r.pass, "{r:?}");
        }
        prop_assert!(check_rbll(&[f, g]).unwrap().pass);
    }

    #[test]
    fn convolution_commutes_and_keeps_mass(v in cell_values(2, 50), w in cell_values(2, 50)) {
        let f = density(v, -1.0, 0.1);
        let g = density(w, 2.0, 0.1);
        let fg = convolve(&f, &g).unwrap();
        let gf = convolve(&g, &f).unwrap();
        prop_assert!((fg.mass() - 1.0).abs() < 1e-9);
        prop_assert!(fg.values().iter().zip(gf.values()).all(|(a, b)| (a - b).abs() < 1e-12));
        prop_assert!((fg.mean() - f.mean() - g.mean()).abs() < 1e-9);
    }

    /// Among sets of given measures, intervals minimise the entropy of the
    /// sum of uniforms.
    #[test]
    fn ball_sum_is_entropy_minimiser(seed in 0u64..10_000) {
        let a = random_indicator(2 * seed, 400).unwrap();
        let b = random_indicator(2 * seed + 1, 400).unwrap();
        let h = renyi_entropy(&convolve(&a, &b).unwrap(), RenyiOrder::One).unwrap();
        let balls = BallPair::from_volumes(1, a.support_measure(), b.support_measure()).unwrap();
        let bound = ball_sum_entropy(balls);
        prop_assert!(h >= bound - eps_conv(a.dx(), 2), "{h} < {bound}");
    }
}
