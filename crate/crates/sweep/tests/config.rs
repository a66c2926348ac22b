use chlab_sweep::*;

#[test]
fn defaults_are_valid_and_round_trip_through_toml() {
    let c = SweepConfig::default();
    c.validate().unwrap();
    let s = c.to_toml_string().unwrap();
    assert_eq!(SweepConfig::from_toml_str(&s).unwrap(), c);
}

#[test]
fn partial_file_fills_defaults() {
    let c = SweepConfig::from_toml_str(
        r#"
        flow = "branching"
        nu_list = [0.0009765625, 0.00048828125]
        [resolution]
        p = 16
        "#,
    )
    .unwrap();
    assert_eq!(c.flow, FlowFamily::Branching);
    assert_eq!(c.resolution.p, 16);
    assert_eq!(c.resolution.rho_x, ResolutionPolicy::default().rho_x);
    c.validate().unwrap();
    assert_eq!(c.direct_min_nu(), 2f64.powi(-12));
}

#[test]
fn unknown_keys_are_configuration_errors() {
    let e = SweepConfig::from_toml_str("flw = \"rolls\"").unwrap_err();
    assert!(matches!(e, SweepError::Config(_)));
    assert_eq!(e.exit_code(), 2);
    let mut c = SweepConfig::default();
    assert!(c.set("resolution.nope", "1").is_err());
    assert!(c.set("flow.x", "1").is_err());
}

#[test]
fn dotted_overrides() {
    let mut c = SweepConfig::default();
    c.set("resolution.p", "32").unwrap();
    c.set("resolution.rho_x", "20").unwrap();
    c.set("tolerances.solve_tol", "1e-8").unwrap();
    c.set("toggles.direct_min_nu", "2^-11").unwrap();
    c.set("resolution.nx", "64").unwrap();
    c.set("nu_list", "1e-3, 1e-4,2^-14").unwrap();
    c.set("flow", "branching").unwrap();
    c.set("output.dir", "somewhere").unwrap();
    assert_eq!(c.resolution.p, 32);
    assert_eq!(c.resolution.rho_x, 20.0);
    assert_eq!(c.tolerances.solve_tol, 1e-8);
    assert_eq!(c.toggles.direct_min_nu, Some(2f64.powi(-11)));
    assert_eq!(c.resolution.nx, Some(64));
    assert_eq!(c.nu_list, vec![1e-3, 1e-4, 2f64.powi(-14)]);
    assert_eq!(c.flow, FlowFamily::Branching);
    assert_eq!(c.output.dir, std::path::PathBuf::from("somewhere"));
    assert!(c.set("flow", "pipe").is_err());
}

#[test]
fn validation_rules() {
    let base = SweepConfig::default();
    let check = |f: &dyn Fn(&mut SweepConfig)| {
        let mut c = base.clone();
        f(&mut c);
        c.validate()
    };
    assert!(check(&|c| c.nu_list = vec![]).is_err());
    assert!(check(&|c| c.nu_list = vec![1e-4, 1e-3]).is_err());
    assert!(check(&|c| c.nu_list = vec![1e-3, 1e-3]).is_err());
    assert!(check(&|c| c.nu_list = vec![-1e-3]).is_err());
    assert!(check(&|c| c.nu_list = vec![0.2]).is_err());
    assert!(check(&|c| {
        c.flow = FlowFamily::Branching;
        c.nu_list = vec![1e-2];
    })
    .is_err());
    assert!(check(&|c| {
        c.flow = FlowFamily::Couette;
        c.nu_list = vec![1.0, 0.5];
    })
    .is_ok());
    assert!(check(&|c| c.resolution.rho_x = 4.0).is_err());
    assert!(check(&|c| c.resolution.rho_y = 7.9).is_err());
    assert!(check(&|c| c.resolution.ny_max = 10).is_err());
    assert!(check(&|c| c.resolution.nx_max = 8).is_err());
    assert!(check(&|c| c.workers = 0).is_err());
    assert!(check(&|c| c.frak_c = 0.0).is_err());
    assert!(check(&|c| c.tolerances.gap = f64::NAN).is_err());
}

#[test]
fn viscosity_lists() {
    assert_eq!(parse_nu_list("1e-3,2^-10, 0.5").unwrap(), vec![1e-3, 2f64.powi(-10), 0.5]);
    assert!(parse_nu_list("1e-3,abc").is_err());
    assert_eq!(parse_nu("10^-3.5").unwrap(), 10f64.powf(-3.5));
}
