//! Sweep configuration: TOML file, dotted-key overrides and validation.

use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::SweepError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FlowFamily {
    Couette,
    Rolls,
    Branching,
}

impl FlowFamily {
    /// Open upper end of the admissible viscosity range.
    pub fn max_nu(self) -> f64 {
        match self {
            FlowFamily::Couette => f64::INFINITY,
            FlowFamily::Rolls => 0.125,
            FlowFamily::Branching => 1.0 / 500.0,
        }
    }

    /// Smallest viscosity at which direct solves run by default.
    pub fn default_direct_min_nu(self) -> f64 {
        match self {
            FlowFamily::Couette => 0.0,
            FlowFamily::Rolls => 1e-5,
            FlowFamily::Branching => 2f64.powi(-12),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FlowFamily::Couette => "couette",
            FlowFamily::Rolls => "rolls",
            FlowFamily::Branching => "branching",
        }
    }
}

impl FromStr for FlowFamily {
    type Err = SweepError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "couette" => Ok(Self::Couette),
            "rolls" => Ok(Self::Rolls),
            "branching" => Ok(Self::Branching),
            other => Err(SweepError::Config(format!("unknown flow '{other}', expected couette, rolls or branching"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ResolutionPolicy {
    /// Chebyshev degree per x2 element.
    pub p: usize,
    /// Fourier points per wavelength of the finest mode.
    pub rho_x: f64,
    /// x2 nodes across the thinnest transition band.
    pub rho_y: f64,
    /// Largest x2 element in units of the local wavelength.
    pub elem_wavelengths: f64,
    pub nx_min: usize,
    pub nx_max: usize,
    pub ny_max: usize,
    /// Compute on the shortest period of the construction instead of `L1`.
    pub sublattice: bool,
    /// Fixed Nx, bypassing `rho_x`.
    pub nx: Option<usize>,
    /// Minimum Ny; the degree is raised to reach it.
    pub ny: Option<usize>,
}

impl Default for ResolutionPolicy {
    fn default() -> Self {
        Self {
            p: 32,
            rho_x: 16.0,
            rho_y: 64.0,
            elem_wavelengths: 0.25,
            nx_min: 16,
            nx_max: 4096,
            ny_max: 32768,
            sublattice: true,
            nx: None,
            ny: None,
        }
    }
}

impl ResolutionPolicy {
    /// Twice the points per wavelength and per band, half the element length.
    pub fn refined(&self) -> Self {
        Self {
            rho_x: 2.0 * self.rho_x,
            rho_y: 2.0 * self.rho_y,
            elem_wavelengths: 0.5 * self.elem_wavelengths,
            nx: self.nx.map(|n| 2 * n),
            ny: self.ny.map(|n| 2 * n),
            ..self.clone()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Toggles {
    pub run_direct_solve: bool,
    pub run_pair: bool,
    pub run_maximizer: bool,
    /// Direct solves, pair solves and the maximizer run only for `nu` at or
    /// above this; the family default applies when absent.
    pub direct_min_nu: Option<f64>,
    /// Lower `frak_c` by bisection until the test functional is positive at every point.
    pub frak_c_search: bool,
}

impl Default for Toggles {
    fn default() -> Self {
        Self {
            run_direct_solve: true,
            run_pair: true,
            run_maximizer: true,
            direct_min_nu: None,
            frak_c_search: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub solve_tol: f64,
    pub solve_max_iter: usize,
    pub solve_restart: usize,
    pub maximizer_tol: f64,
    pub maximizer_max_iter: usize,
    pub energy: f64,
    pub identity: f64,
    pub orthogonality: f64,
    pub upper_bound: f64,
    pub lower_bound: f64,
    pub gap: f64,
    pub pair: f64,
    /// Slack of the term-I floor `a A / 2` for rolls.
    pub term_i: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        let v = chlab_dissipation::VerifyOptions::default();
        Self {
            solve_tol: v.solve.tol,
            solve_max_iter: v.solve.max_iter,
            solve_restart: v.solve.restart,
            maximizer_tol: v.maximize.tol,
            maximizer_max_iter: v.maximize.max_iter,
            energy: v.energy_tol,
            identity: v.identity_tol,
            orthogonality: v.ortho_tol,
            upper_bound: v.bound_tol,
            lower_bound: v.lower_tol,
            gap: v.gap_tol,
            pair: v.pair_tol,
            term_i: 1e-8,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: PathBuf,
    pub prefix: String,
    /// Store wall-clock times in the records; off keeps output byte-identical across runs.
    pub record_timing: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("chlab-out"),
            prefix: "sweep".into(),
            record_timing: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub flow: FlowFamily,
    /// Strictly descending.
    pub nu_list: Vec<f64>,
    #[serde(rename = "L1")]
    pub l1: f64,
    pub frak_c: f64,
    pub workers: usize,
    pub resolution: ResolutionPolicy,
    pub toggles: Toggles,
    pub tolerances: Tolerances,
    pub output: OutputConfig,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            flow: FlowFamily::Rolls,
            nu_list: vec![1e-3],
            l1: 2.0 * std::f64::consts::PI,
            frak_c: chlab_constructions::DEFAULT_FRAK_C,
            workers: 1,
            resolution: ResolutionPolicy::default(),
            toggles: Toggles::default(),
            tolerances: Tolerances::default(),
            output: OutputConfig::default(),
        }
    }
}

fn cfg_err(e: impl std::fmt::Display) -> SweepError {
    SweepError::Config(e.to_string())
}

fn set_path(node: &mut toml::Value, parts: &[&str], key: &str, raw: &str) -> Result<(), SweepError> {
    let table = node
        .as_table_mut()
        .ok_or_else(|| SweepError::Config(format!("'{key}' does not name a configuration key")))?;
    let part = parts[0];
    if parts.len() > 1 {
        let child = table
            .entry(part.to_string())
            .or_insert_with(|| toml::Value::Table(Default::default()));
        return set_path(child, &parts[1..], key, raw);
    }
    let mut value = parse_value(raw);
    // absent optional keys and float slots accept integers and `a^b`
    let numeric_slot = matches!(table.get(part), None | Some(toml::Value::Float(_)));
    if numeric_slot {
        match &value {
            toml::Value::Integer(n) if table.get(part).is_some() => value = toml::Value::Float(*n as f64),
            toml::Value::String(s) => {
                if let Ok(x) = parse_nu(s) {
                    value = toml::Value::Float(x);
                }
            }
            _ => {}
        }
    }
    if part == "nu_list" {
        value = match value {
            toml::Value::String(s) => toml::Value::Array(parse_nu_list(&s)?.into_iter().map(toml::Value::Float).collect()),
            toml::Value::Float(x) => toml::Value::Array(vec![toml::Value::Float(x)]),
            toml::Value::Integer(n) => toml::Value::Array(vec![toml::Value::Float(n as f64)]),
            other => other,
        };
    }
    table.insert(part.to_string(), value);
    Ok(())
}

/// Parses an override value as a TOML literal, falling back to a bare string.
fn parse_value(raw: &str) -> toml::Value {
    let doc = format!("v = {raw}");
    match doc.parse::<toml::Table>() {
        Ok(mut t) => t.remove("v").unwrap_or_else(|| toml::Value::String(raw.into())),
        Err(_) => toml::Value::String(raw.into()),
    }
}

impl SweepConfig {
    pub fn from_toml_str(s: &str) -> Result<Self, SweepError> {
        toml::from_str(s).map_err(cfg_err)
    }

    pub fn load(path: &std::path::Path) -> Result<Self, SweepError> {
        let s = std::fs::read_to_string(path).map_err(|e| SweepError::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&s)
    }

    pub fn to_toml_string(&self) -> Result<String, SweepError> {
        toml::to_string(self).map_err(cfg_err)
    }

    /// Sets a dotted key such as `resolution.p` from its textual value.
    pub fn set(&mut self, key: &str, raw: &str) -> Result<(), SweepError> {
        let mut root = toml::Value::try_from(&*self).map_err(cfg_err)?;
        let parts: Vec<&str> = key.split('.').collect();
        set_path(&mut root, &parts, key, raw)?;
        *self = root.try_into().map_err(|e| SweepError::Config(format!("{key} = {raw}: {e}")))?;
        Ok(())
    }

    pub fn direct_min_nu(&self) -> f64 {
        self.toggles.direct_min_nu.unwrap_or_else(|| self.flow.default_direct_min_nu())
    }

    pub fn validate(&self) -> Result<(), SweepError> {
        let bad = |m: String| Err(SweepError::Config(m));
        if self.nu_list.is_empty() {
            return bad("nu_list is empty".into());
        }
        for &nu in &self.nu_list {
            if !(nu.is_finite() && nu > 0.0) {
                return bad(format!("viscosity {nu} is not positive"));
            }
            if nu >= self.flow.max_nu() {
                return bad(format!("{} needs nu < {}, got {nu}", self.flow.name(), self.flow.max_nu()));
            }
        }
        if self.nu_list.windows(2).any(|w| w[1] >= w[0]) {
            return bad("nu_list must be strictly descending".into());
        }
        if !(self.l1.is_finite() && self.l1 > 0.0) {
            return bad(format!("L1 must be positive, got {}", self.l1));
        }
        if !(self.frak_c.is_finite() && self.frak_c > 0.0) {
            return bad(format!("frak_c must be positive, got {}", self.frak_c));
        }
        if self.workers == 0 {
            return bad("workers must be at least 1".into());
        }
        let r = &self.resolution;
        if !(r.rho_x >= 8.0 && r.rho_y >= 8.0) {
            return bad(format!("rho_x and rho_y must be at least 8, got {} and {}", r.rho_x, r.rho_y));
        }
        if r.p < 4 {
            return bad(format!("degree p must be at least 4, got {}", r.p));
        }
        if !(r.elem_wavelengths > 0.0) {
            return bad("elem_wavelengths must be positive".into());
        }
        if r.nx_max < r.nx_min.max(4) || r.ny_max < r.p + 1 {
            return bad(format!("caps Nx_max = {}, Ny_max = {} are below the minimum resolution", r.nx_max, r.ny_max));
        }
        if let Some(nx) = r.nx {
            if nx < 4 || nx > r.nx_max {
                return bad(format!("fixed Nx = {nx} outside [4, {}]", r.nx_max));
            }
        }
        let t = &self.tolerances;
        for (name, v) in [
            ("solve_tol", t.solve_tol),
            ("maximizer_tol", t.maximizer_tol),
            ("energy", t.energy),
            ("identity", t.identity),
            ("orthogonality", t.orthogonality),
            ("upper_bound", t.upper_bound),
            ("lower_bound", t.lower_bound),
            ("gap", t.gap),
            ("pair", t.pair),
            ("term_i", t.term_i),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return bad(format!("tolerance {name} must be non-negative, got {v}"));
            }
        }
        Ok(())
    }

    pub fn verify_options(&self, direct: bool) -> chlab_dissipation::VerifyOptions {
        let t = &self.tolerances;
        let mut v = chlab_dissipation::VerifyOptions::default();
        v.solve.tol = t.solve_tol;
        v.solve.max_iter = t.solve_max_iter;
        v.solve.restart = t.solve_restart;
        v.maximize.tol = t.maximizer_tol;
        v.maximize.max_iter = t.maximizer_max_iter;
        v.run_direct = direct && self.toggles.run_direct_solve;
        v.run_pair = direct && self.toggles.run_pair;
        v.run_maximizer = direct && self.toggles.run_maximizer;
        v.energy_tol = t.energy;
        v.identity_tol = t.identity;
        v.ortho_tol = t.orthogonality;
        v.bound_tol = t.upper_bound;
        v.lower_tol = t.lower_bound;
        v.gap_tol = t.gap;
        v.pair_tol = t.pair;
        v
    }
}

/// Comma-separated viscosities; `a^b` is accepted for powers, e.g. `2^-10`.
pub fn parse_nu_list(s: &str) -> Result<Vec<f64>, SweepError> {
    s.split(',')
        .map(|t| t.trim())
        .filter(|t| !t.is_empty())
        .map(parse_nu)
        .collect()
}

pub fn parse_nu(t: &str) -> Result<f64, SweepError> {
    let t = t.trim();
    let bad = || SweepError::Config(format!("cannot parse viscosity '{t}'"));
    if let Some((b, e)) = t.split_once('^') {
        let b: f64 = b.trim().parse().map_err(|_| bad())?;
        let e: f64 = e.trim().parse().map_err(|_| bad())?;
        return Ok(b.powf(e));
    }
    t.parse().map_err(|_| bad())
}
