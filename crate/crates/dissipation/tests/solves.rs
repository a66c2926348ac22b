mod common;

use chlab_constructions::*;
use chlab_core::{Channel, ChannelGrid, VectorField};
use chlab_dissipation::*;
use common::*;

const NU: f64 = 1e-2;

fn tight() -> SolveOptions {
    SolveOptions {
        tol: 1e-10,
        ..SolveOptions::default()
    }
}

#[test]
fn couette_advection_leaves_couette() {
    let ch = Channel::new(ChannelGrid::uniform(1.0, 8, 12, 3).unwrap());
    let u = VectorField::couette(ch.grid());
    let s = solve_steady_passive_vector(&ch, &u, 0.1, &tight()).unwrap();
    assert!(s.v.u1.max_abs() < 1e-10 && s.v.u2.max_abs() < 1e-10);
    assert!((dissipation_rate(&ch, &s.u, 0.1).unwrap() - 0.1).abs() < 1e-12);
    let fl = momentum_flux_profile(&ch, &u, &s.u, 0.1).unwrap();
    assert!(fl.values.iter().all(|j| (j - 0.1).abs() < 1e-10));
    let w = wall_layer_decomposition(&ch, &u, &s.u, 0.1, 0.2).unwrap();
    assert!((w.diffusive - 0.1).abs() < 1e-10 && w.advective.abs() < 1e-12);
    let full = wall_layer_decomposition(&ch, &u, &s.u, 0.1, 1.0).unwrap();
    assert!((full.sum - 0.1).abs() < 1e-10);
}

#[test]
fn roll_steady_solution_identities() {
    let (p, ch) = roll_setup(NU, 0.1, 16, 28);
    let u = build_rolls(&p, &ch).unwrap();
    let s = solve_steady_passive_vector(&ch, &u, NU, &tight()).unwrap();
    assert!(s.residual <= 1e-10);
    assert!(s.divergence < 1e-8);
    assert!(s.v.wall_defect() < 1e-12);

    // independent PDE check: nu Delta v - grad p = U2 e1 + U . grad v
    let mut w = Advector::new(&ch, &u).unwrap().normal_forcing();
    w.axpy(1.0, &Advector::new(&ch, &u).unwrap().apply(&s.v));
    let sol = ch.stokes_solve(&w, NU).unwrap();
    let diff = sol.velocity.u1.zip_map(&s.v.u1, |a, b| a - b).max_abs();
    assert!(diff < 1e-8 * s.v.u1.max_abs().max(1e-3), "{diff}");

    let eps_u = dissipation_rate(&ch, &s.u, NU).unwrap();
    let eps_big = dissipation_rate(&ch, &u, NU).unwrap();
    // energy identity: <|grad v|^2> nu = -<U2 v1>
    let lhs = dissipation_rate(&ch, &s.v, NU).unwrap();
    let rhs = -ch.inner(&u.u2, &s.v.u1);
    assert!((lhs - rhs).abs() <= 1e-8 * eps_u, "{lhs} {rhs}");
    assert!((eps_u - (NU + lhs)).abs() <= 1e-8 * eps_u);
    assert!(eps_u >= NU);

    let ws = wall_stress_dissipation(&ch, &s.u, NU).unwrap();
    assert!((ws / eps_u - 1.0).abs() < 1e-7, "{ws} {eps_u}");
    let fl = momentum_flux_profile(&ch, &u, &s.u, NU).unwrap();
    assert!(fl.relstd < 1e-7 && (fl.mean / eps_u - 1.0).abs() < 1e-7);
    for delta in [1.0, 0.3, p.delta, proof_layer_thickness(ch.grid(), eps_big, NU)] {
        let wl = wall_layer_decomposition(&ch, &u, &s.u, NU, delta).unwrap();
        assert!((wl.sum / eps_u - 1.0).abs() < 1e-6, "delta {delta}: {wl:?}");
    }
    assert!(upper_bound_check(eps_big, eps_u, 1e-6).unwrap().pass);

    // lower bound from the test field
    let v = build_roll_test(&p, &ch).unwrap();
    let ft = functional_terms(&ch, &u, &v, NU).unwrap().total;
    assert!(eps_u >= NU + ft - 1e-8);
}

#[test]
fn pair_orthogonality_and_reconstruction() {
    let (p, ch) = roll_setup(NU, 0.1, 16, 28);
    let u = build_rolls(&p, &ch).unwrap();
    let s = solve_steady_passive_vector(&ch, &u, NU, &tight()).unwrap();
    let pair = solve_symmetrized_pair(&ch, &u, NU, &tight()).unwrap();
    let (vt, vb) = (&pair.v_tilde, &pair.v_bar);
    let gt = ch.velocity_gradient(vt);
    let gb = ch.velocity_gradient(vb);
    let scale = ch.inner_tensor(&gt, &gt).max(ch.inner_tensor(&gb, &gb));
    assert!(ch.inner_tensor(&gt, &gb).abs() <= 1e-8 * scale);
    assert!(ch.inner(&u.u2, &vb.u1).abs() <= 1e-8 * ch.inner(&u.u2, &vt.u1).abs());
    let mut recon = vt.clone();
    recon.axpy(1.0, vb);
    recon.axpy(-1.0, &s.v);
    let err = recon.u1.max_abs().max(recon.u2.max_abs());
    assert!(err <= 1e-7 * s.v.u1.max_abs().max(s.v.u2.max_abs()), "{err}");
    // the functional at vt equals the dissipation excess
    let f = functional_terms_stokes(&ch, &u, vt, NU).unwrap();
    let excess = dissipation_rate(&ch, &s.u, NU).unwrap() - NU;
    assert!((f.total / excess - 1.0).abs() < 1e-6, "{} vs {excess}", f.total);
}

#[test]
fn maximizer_properties() {
    let (p, ch) = roll_setup(NU, 0.1, 16, 28);
    let u = build_rolls(&p, &ch).unwrap();
    let v = build_roll_test(&p, &ch).unwrap();
    let out = maximize_f(&ch, &u, NU, Some(&v), &MaximizeOptions::default()).unwrap();
    assert!(out.converged, "{}", out.el_residual);
    assert!(out.f_history.windows(2).all(|w| w[1] >= w[0] - 1e-14 * w[0].abs().max(1.0)));
    let ft = functional_terms(&ch, &u, &v, NU).unwrap().total;
    assert!(out.f_max >= ft - 1e-8 * ft.abs().max(1.0));
    let s = solve_steady_passive_vector(&ch, &u, NU, &tight()).unwrap();
    let eps_u = dissipation_rate(&ch, &s.u, NU).unwrap();
    let gap = (eps_u - NU) - out.f_max;
    assert!(gap >= -1e-6 * eps_u, "gap {gap}");
    assert!(out.f_max > 0.0);
    assert_eq!(out.breakdown.total, out.f_max);
}

#[test]
fn maximizer_without_normal_velocity_returns_zero() {
    let ch = Channel::new(ChannelGrid::uniform(1.0, 8, 12, 2).unwrap());
    let u = VectorField::couette(ch.grid());
    let out = maximize_f(&ch, &u, 0.1, None, &MaximizeOptions::default()).unwrap();
    assert!(out.f_max.abs() < 1e-12);
    assert!(out.v_tilde.u1.max_abs() < 1e-12);
}

#[test]
fn verify_report_on_rolls() {
    let (p, ch) = roll_setup(NU, 0.1, 16, 28);
    let u = build_rolls(&p, &ch).unwrap();
    let v = build_roll_test(&p, &ch).unwrap();
    let r = verify(&ch, &u, &v, NU, &VerifyOptions::default()).unwrap();
    assert!(r.hard_failures().is_empty(), "{:?}", r.hard_failures());
    assert!(r.check("energy_identity").unwrap().pass);
    let json = serde_json::to_value(&r).unwrap();
    for key in ["eps_U", "eps_u", "F_test", "F_max", "checks"] {
        assert!(json.get(key).is_some(), "{key}");
    }
}

#[test]
fn rate_helpers() {
    let ok = upper_bound_check(8.0, 7.9, 0.0).unwrap();
    assert!(ok.pass && (ok.bound - 8.0).abs() < 1e-12);
    assert!(!upper_bound_check(1.0, 4.1, 1e-6).unwrap().pass);
    assert!(upper_bound_check(-1.0, 1.0, 0.0).is_err());
    let r = log_law_comparison(0.042, (-1.0f64).exp()).unwrap();
    assert!((r - 1.0).abs() < 1e-12);
    assert!(log_law_comparison(1.0, 1.0).is_err());
}

#[test]
fn plateau_gradient_bound_matches_quadrature() {
    for delta in [0.25, 0.1, 0.05, 0.01] {
        let br = plateau_breakpoints(delta, 4);
        let ch = Channel::new(ChannelGrid::new(1.0, 4, 40, br).unwrap());
        let val = lemma_gradient_bound(&ch, delta).unwrap();
        let pts = [-0.5, -0.5 + delta, 0.5 - delta, 0.5];
        let f = |x: f64| plateau_profile(delta, x);
        let mean: f64 = pts.windows(2).map(|w| simpson(&f, w[0], w[1], 1e-12)).sum();
        let g = |x: f64| (plateau_profile(delta, x) - mean).powi(2);
        let oracle: f64 = pts.windows(2).map(|w| simpson(&g, w[0], w[1], 1e-12)).sum();
        assert!((val - oracle).abs() < 1e-8, "delta {delta}: {val} vs {oracle}");
        assert!(val <= 6.0 * delta, "delta {delta}: {val}");
    }
    let ch = Channel::new(ChannelGrid::uniform(1.0, 4, 8, 2).unwrap());
    assert!(lemma_gradient_bound(&ch, 0.3).is_err());
}
