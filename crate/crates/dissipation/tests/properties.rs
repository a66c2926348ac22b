mod common;

use chlab_constructions::*;
use chlab_core::{Channel, VectorField};
use chlab_dissipation::*;
use common::*;
use proptest::prelude::*;
use std::sync::OnceLock;

const NU: f64 = 1e-3;

fn setup() -> &'static (Channel, VectorField) {
    static S: OnceLock<(Channel, VectorField)> = OnceLock::new();
    S.get_or_init(|| {
        let (p, ch) = roll_setup(NU, 0.1, 16, 16);
        let u = build_rolls(&p, &ch).unwrap();
        (ch, u)
    })
}

fn coeffs() -> impl Strategy<Value = Vec<(usize, f64, f64, i32)>> {
    prop::collection::vec((1usize..4, -1.0f64..1.0, 0.0f64..6.3, 0i32..3), 1..4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn functional_is_concave(c1 in coeffs(), c2 in coeffs(), lam in 0.0f64..1.0) {
        let (ch, u) = setup();
        let (v1, v2) = (smooth_test_field(ch, &c1), smooth_test_field(ch, &c2));
        let mut mix = v1.clone();
        mix.scale(lam);
        mix.axpy(1.0 - lam, &v2);
        let f = |v: &VectorField| functional_terms(ch, u, v, NU).unwrap().total;
        let (a, b, m) = (f(&v1), f(&v2), f(&mix));
        let chord = lam * a + (1.0 - lam) * b;
        prop_assert!(m >= chord - 1e-10 * (1.0 + chord.abs()), "{} < {}", m, chord);
    }

    #[test]
    fn terms_scale_linearly_and_quadratically(c in coeffs(), s in -3.0f64..3.0) {
        let (ch, u) = setup();
        let v = smooth_test_field(ch, &c);
        let mut w = v.clone();
        w.scale(s);
        let a = functional_terms(ch, u, &v, NU).unwrap();
        let b = functional_terms(ch, u, &w, NU).unwrap();
        let tol = 1e-12 * (1.0 + a.term_ii.abs() + a.term_iii.abs()) * (1.0 + s * s);
        prop_assert!((b.term_i - s * a.term_i).abs() <= tol);
        prop_assert!((b.term_ii - s * s * a.term_ii).abs() <= tol);
        prop_assert!((b.term_iii - s * s * a.term_iii).abs() <= tol);
        let e = dissipation_rate(ch, &v, NU).unwrap();
        prop_assert!((dissipation_rate(ch, &w, NU).unwrap() - s * s * e).abs() <= 1e-12 * e * (1.0 + s * s));
        prop_assert!((a.term_ii + e).abs() <= 1e-12 * e);
    }

    #[test]
    fn dirichlet_term_dominates_stokes(c in coeffs()) {
        let (ch, u) = setup();
        let v = smooth_test_field(ch, &c);
        let d = functional_terms(ch, u, &v, NU).unwrap();
        let s = functional_terms_stokes(ch, u, &v, NU).unwrap();
        prop_assert!(d.term_iii <= s.term_iii * (1.0 - 1e-12) + 1e-300);
    }

    #[test]
    fn upper_bound_is_monotone(e in 0.0f64..1e3, r in 0.0f64..2.0) {
        let b = 4.0 * e.cbrt();
        let c = upper_bound_check(e, b * r, 1e-6).unwrap();
        prop_assert_eq!(c.pass, r <= 1.0 + 1e-6);
    }
}
