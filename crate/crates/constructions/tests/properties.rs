use std::f64::consts::PI;

use chlab_constructions::*;
use proptest::prelude::*;

proptest! {
    #[test]
    fn chi_is_a_symmetric_cutoff(d1 in 0.001f64..0.2, frac in 0.05f64..0.95, x in -0.5f64..0.5) {
        let d2 = d1 + frac * (0.249 - d1);
        let spec = CutoffSpec::new(d1, d2).unwrap();
        let v = chi(x, spec);
        prop_assert!((0.0..=1.0).contains(&v));
        prop_assert!((v - chi(-x, spec)).abs() < 1e-12);
        if x.abs() <= 0.5 - d2 {
            prop_assert_eq!(v, 1.0);
        }
        if x.abs() >= 0.5 - d1 + 1e-12 {
            prop_assert_eq!(v, 0.0);
        }
    }

    #[test]
    fn f_is_monotone(a in 0.0f64..1.0, b in 0.0f64..1.0) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assert!(f_profile(lo) >= f_profile(hi));
    }

    #[test]
    fn partition_holds_at_random_points(n in 0usize..7, x in -0.5f64..0.5) {
        let p = BranchingParams::from_parts(0.1, 0.01, 0.1, 1u64 << (2 * n + 2), n, 2.0 * PI).unwrap();
        let z: Vec<f64> = (0..=n).map(|i| zeta(&p, i, x)).collect();
        let s: f64 = z.iter().map(|v| v * v).sum();
        prop_assert!(s <= 1.0 + 1e-12);
        if x.abs() <= 0.5 - p.delta_n() {
            prop_assert!((s - 1.0).abs() <= 1e-12);
        }
        for i in 0..=n {
            prop_assert_eq!(z[i], zeta(&p, i, -x));
            for j in i + 2..=n {
                prop_assert_eq!(z[i] * z[j], 0.0);
            }
        }
    }

    #[test]
    fn chosen_roll_wavenumber_is_minimal(nu in 1e-8f64..0.12, l1 in 0.1f64..10.0) {
        let p = choose_roll_params(nu, l1, 0.1).unwrap();
        let b = nu.powf(-0.5);
        prop_assert!(p.k > b);
        prop_assert!(p.k - 2.0 * PI / l1 <= b);
        prop_assert!(p.delta > 0.0 && p.delta < 0.25);
    }
}
