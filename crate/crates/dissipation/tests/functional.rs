mod common;

use chlab_constructions::*;
use chlab_core::{BcTag, Channel, ChannelGrid, ScalarField, VectorField};
use chlab_dissipation::*;
use common::*;

/// `int_{-1/2}^{0}` of the x1-averaged `|grad U|^2` for rolls, in closed form.
fn roll_gradient_oracle(p: &RollParams) -> f64 {
    let d = p.delta;
    let cut = |x: f64, d1: f64, d2: f64| {
        let w = d2 - d1;
        let (f, f1, f2) = f_derivs((-0.5 + d2 - x) / w);
        (f, -f1 / w, f2 / (w * w))
    };
    let (a, k) = (p.amp, p.k);
    let density = |x: f64| {
        let (_, m1, _) = cut(x, d / 6.0, d / 5.0);
        let (xi, xi1, xi2) = cut(x, d / 2.0, d);
        let mean = (0.5 * m1).powi(2);
        let roll = 0.5
            * a
            * a
            * ((xi1 * xi1 + k * k * xi * xi)
                + ((xi2 / k - k * xi).powi(2) + 4.0 * xi1 * xi1)
                + k * k * xi * xi
                + (xi1 * xi1 + k * k * xi * xi));
        mean + roll
    };
    let pts = [-0.5, -0.5 + d / 6.0, -0.5 + d / 5.0, -0.5 + d / 2.0, -0.5 + d, 0.0];
    pts.windows(2).map(|w| simpson(&density, w[0], w[1], 1e-12)).sum()
}

#[test]
fn couette_and_zero_rates() {
    let ch = Channel::new(ChannelGrid::uniform(1.0, 8, 8, 2).unwrap());
    let c = VectorField::couette(ch.grid());
    for nu in [1.0, 1e-3] {
        assert!((dissipation_rate(&ch, &c, nu).unwrap() - nu).abs() < 1e-14);
        assert_eq!(dissipation_rate(&ch, &VectorField::zeros(ch.grid()), nu).unwrap(), 0.0);
    }
    assert!(dissipation_rate(&ch, &c, 0.0).is_err());
}

#[test]
fn roll_dissipation_matches_closed_form() {
    for nu in [1e-3, 1e-4] {
        let (p, ch) = roll_setup(nu, 0.1, 16, 24);
        let u = build_rolls(&p, &ch).unwrap();
        let eps = dissipation_rate(&ch, &u, nu).unwrap();
        let oracle = nu * 2.0 * roll_gradient_oracle(&p);
        assert!((eps / oracle - 1.0).abs() < 1e-6, "nu {nu}: {eps} vs {oracle}");
    }
}

#[test]
fn functional_of_zero_field() {
    let (p, ch) = roll_setup(1e-3, 0.1, 16, 16);
    let u = build_rolls(&p, &ch).unwrap();
    let f = functional_terms(&ch, &u, &VectorField::zeros(ch.grid()), 1e-3).unwrap();
    assert_eq!(f, FunctionalBreakdown::default());
}

#[test]
fn shear_flows_give_nonpositive_functional() {
    let ch = Channel::new(ChannelGrid::uniform(2.0, 16, 16, 4).unwrap());
    let v = smooth_test_field(&ch, &[(1, 1.0, 0.3, 0), (2, 0.5, 1.0, 1), (0, 0.0, 0.0, 0)]);
    let shear = VectorField::new(
        ScalarField::from_fn(ch.grid(), |_, x2| x2 + 0.3 * (std::f64::consts::PI * 2.0 * x2).sin()),
        ScalarField::zeros(ch.grid()),
        BcTag::Couette,
    );
    for u in [VectorField::couette(ch.grid()), shear] {
        let f = functional_terms(&ch, &u, &v, 0.01).unwrap();
        assert_eq!(f.term_i, 0.0);
        assert!(f.total <= 0.0);
        assert!(f.term_ii < 0.0 && f.term_iii <= 0.0);
    }
}

#[test]
fn roll_term_i_lower_bound_and_sum() {
    for nu in [1e-3, 1e-4] {
        let (p, ch) = roll_setup(nu, 0.1, 16, 24);
        let u = build_rolls(&p, &ch).unwrap();
        let v = build_roll_test(&p, &ch).unwrap();
        let f = functional_terms(&ch, &u, &v, nu).unwrap();
        assert!(f.term_i >= p.test_amp * p.amp / 2.0 - 1e-8, "{f:?}");
        assert_eq!(f.total, f.term_i + f.term_ii + f.term_iii);
        assert!(f.term_ii <= 0.0 && f.term_iii <= 0.0);
        // Dirichlet inversion after projection is never less negative than the Stokes response
        let s = functional_terms_stokes(&ch, &u, &v, nu).unwrap();
        assert_eq!(s.term_i, f.term_i);
        assert!(f.term_iii <= s.term_iii * (1.0 - 1e-3), "{} vs {}", f.term_iii, s.term_iii);
    }
}

#[test]
fn inadmissible_fields_are_rejected() {
    let (p, ch) = roll_setup(1e-3, 0.1, 16, 16);
    let u = build_rolls(&p, &ch).unwrap();
    let g = ch.grid();
    let bump = VectorField::new(
        ScalarField::from_fn(g, |x1, _| (x1 * 32.0).sin()),
        ScalarField::zeros(g),
        BcTag::None,
    );
    assert!(matches!(functional_terms(&ch, &u, &bump, 1e-3), Err(DissipationError::Inadmissible(_))));
    let compressive = VectorField::new(
        ScalarField::zeros(g),
        ScalarField::from_fn(g, |_, x2| 0.25 - x2 * x2),
        BcTag::None,
    );
    assert!(matches!(functional_terms(&ch, &u, &compressive, 1e-3), Err(DissipationError::Inadmissible(_))));
    assert!(functional_terms(&ch, &u, &VectorField::zeros(g), -1.0).is_err());
}
