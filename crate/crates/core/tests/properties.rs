use std::f64::consts::PI;

use chlab_core::{BcTag, Channel, ChannelGrid, ScalarField, VectorField};
use proptest::prelude::*;

// low-order trigonometric-polynomial fields with random coefficients
fn field(ch: &Channel, c: &[f64]) -> ScalarField {
    let l1 = ch.grid().l1();
    ScalarField::from_fn(ch.grid(), |x, y| {
        let t = 2.0 * PI * x / l1;
        c[0] + c[1] * t.sin() * (2.0 * y).cos() + c[2] * (2.0 * t).cos() * y.powi(3) + c[3] * (3.0 * y).sin()
            + c[4] * (t + y).cos()
    })
}

fn channel() -> Channel {
    Channel::new(ChannelGrid::uniform(1.5, 16, 10, 3).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn leray_is_idempotent(c in prop::collection::vec(-2.0f64..2.0, 10)) {
        let ch = channel();
        let v = VectorField::new(field(&ch, &c[..5]), field(&ch, &c[5..]), BcTag::None);
        let p1 = ch.leray_project(&v);
        let p2 = ch.leray_project(&p1);
        let scale = 1.0 + p1.u1.max_abs().max(p1.u2.max_abs());
        let d1 = p1.u1.zip_map(&p2.u1, |a, b| (a - b).abs()).max_abs();
        let d2 = p1.u2.zip_map(&p2.u2, |a, b| (a - b).abs()).max_abs();
        prop_assert!(d1.max(d2) <= 1e-10 * scale);
    }

    #[test]
    fn divergence_of_perp_gradient_vanishes(c in prop::collection::vec(-2.0f64..2.0, 5)) {
        let ch = channel();
        let psi = field(&ch, &c);
        prop_assert!(ch.divergence(&ch.perp_gradient(&psi)).max_abs() <= 1e-8 * (1.0 + psi.max_abs()));
    }

    #[test]
    fn mean_of_x1_derivative_is_zero(c in prop::collection::vec(-2.0f64..2.0, 5)) {
        let ch = channel();
        prop_assert!(ch.average(&ch.dx1(&field(&ch, &c))).abs() < 1e-12);
    }

    #[test]
    fn inverse_laplacian_is_linear(c in prop::collection::vec(-2.0f64..2.0, 10), a in -3.0f64..3.0) {
        let ch = channel();
        let (f, g) = (field(&ch, &c[..5]), field(&ch, &c[5..]));
        let mut h = f.clone();
        h.axpy(a, &g);
        let mut lhs = ch.inverse_laplacian_dirichlet(&f);
        lhs.axpy(a, &ch.inverse_laplacian_dirichlet(&g));
        let rhs = ch.inverse_laplacian_dirichlet(&h);
        prop_assert!(lhs.zip_map(&rhs, |x, y| (x - y).abs()).max_abs() < 1e-11);
    }
}
