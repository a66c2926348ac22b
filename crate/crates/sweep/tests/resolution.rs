use std::f64::consts::PI;

use chlab_constructions::BranchingParams;
use chlab_sweep::*;
use proptest::prelude::*;

fn rolls(nu: f64) -> FlowParams {
    FlowParams::choose(FlowFamily::Rolls, nu, 2.0 * PI, 0.1).unwrap()
}

#[test]
fn roll_policy_resolves_the_roll_wavenumber() {
    let p = rolls(1e-4);
    let k = p.max_wavenumber().unwrap();
    assert!((k - 101.0).abs() < 1e-9);
    let pol = ResolutionPolicy {
        sublattice: false,
        rho_x: 8.0,
        ..Default::default()
    };
    let r = resolution_policy(&p, 2.0 * PI, &pol).unwrap();
    assert_eq!(r.max_mode, 101);
    assert!(r.nx as f64 >= 8.0 * 101.0);
    assert_eq!(r.nx, next_efficient_size(808));
    // sub-lattice: one wavelength per period
    let r = resolution_policy(&p, 2.0 * PI, &ResolutionPolicy::default()).unwrap();
    assert_eq!(r.max_mode, 1);
    assert!((r.l1 - 2.0 * PI / 101.0).abs() < 1e-15);
    assert_eq!(r.nx, 16);
    assert_eq!(r.ny, (r.breaks.len() - 1) * r.p + 1);
    assert!(r.layout.band_split * r.p >= 64);
}

#[test]
fn single_layer_branching_uses_the_roll_rule() {
    let b = FlowParams::Branching(BranchingParams::from_parts(0.1, 0.01, 0.1, 16, 0, 2.0 * PI).unwrap());
    let mut r = rolls(1e-3);
    if let FlowParams::Rolls(p) = &mut r {
        p.k_index = 16;
        p.k = 16.0;
    }
    for sub in [true, false] {
        let pol = ResolutionPolicy {
            sublattice: sub,
            ..Default::default()
        };
        let rb = resolution_policy(&b, 2.0 * PI, &pol).unwrap();
        let rr = resolution_policy(&r, 2.0 * PI, &pol).unwrap();
        assert_eq!((rb.nx, rb.max_mode), (rr.nx, rr.max_mode));
        assert_eq!(rb.layout, rr.layout);
    }
}

#[test]
fn refinement_doubles_both_directions() {
    let p = FlowParams::choose(FlowFamily::Branching, 2f64.powi(-12), 2.0 * PI, 0.1).unwrap();
    let pol = ResolutionPolicy::default();
    let a = resolution_policy(&p, 2.0 * PI, &pol).unwrap();
    let b = resolution_policy(&p, 2.0 * PI, &pol.refined()).unwrap();
    assert_eq!(b.nx, 2 * a.nx);
    assert_eq!(b.layout.band_split, 2 * a.layout.band_split);
    assert!(b.ny > a.ny);
}

#[test]
fn cap_breach_is_infeasible() {
    let pol = ResolutionPolicy {
        ny_max: 500,
        ..Default::default()
    };
    let e = resolution_policy(&rolls(1e-4), 2.0 * PI, &pol).unwrap_err();
    assert!(matches!(e, SweepError::Infeasible(_)));
    let pol = ResolutionPolicy {
        nx_max: 64,
        sublattice: false,
        ..Default::default()
    };
    assert!(matches!(resolution_policy(&rolls(1e-4), 2.0 * PI, &pol), Err(SweepError::Infeasible(_))));
}

#[test]
fn requested_ny_raises_the_degree() {
    let pol = ResolutionPolicy {
        ny: Some(2000),
        ..Default::default()
    };
    let r = resolution_policy(&rolls(1e-3), 2.0 * PI, &pol).unwrap();
    assert!(r.ny >= 2000 && r.p > pol.p);
}

#[test]
fn setup_builds_consistent_fields() {
    let s = FlowSetup::build(rolls(1e-3), 2.0 * PI, &ResolutionPolicy::default()).unwrap();
    assert_eq!(s.channel.grid().ny(), s.resolution.ny);
    let v2 = s.test_field(0.05).unwrap();
    let ratio = v2.u1.max_abs() / s.v_test.u1.max_abs();
    assert!((ratio - 0.5).abs() < 1e-12);
}

proptest! {
    #[test]
    fn efficient_sizes(n in 1usize..5000) {
        let m = next_efficient_size(n);
        prop_assert!(m >= n);
        let smooth = |mut x: usize| { for f in [2, 3, 5] { while x % f == 0 { x /= f; } } x == 1 };
        prop_assert!(smooth(m));
        prop_assert!((n..m).all(|x| !smooth(x)));
    }
}
