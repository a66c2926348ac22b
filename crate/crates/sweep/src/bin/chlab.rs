use std::path::{Path, PathBuf};
use std::process::ExitCode;

use chlab_core::io::{dump_field, load_field, FieldFormat};
use chlab_core::{Channel, ChannelGrid, VectorField};
use chlab_dissipation::{dissipation_rate, functional_terms, solve_steady_passive_vector, verify};
use chlab_sweep::*;
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

#[derive(Parser)]
#[command(name = "chlab", about = "Dissipation laboratory for advected plane Couette flow")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Common {
    /// TOML configuration file; any key can also be set with `--section.key value`.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    flow: Option<String>,
    /// Single viscosity, e.g. `1e-4` or `2^-12`.
    #[arg(long, global = true)]
    nu: Option<String>,
    /// Comma-separated viscosities in descending order.
    #[arg(long = "nu-list", global = true)]
    nu_list: Option<String>,
    #[arg(long = "L1", global = true)]
    l1: Option<f64>,
    #[arg(long = "frak-c", global = true)]
    frak_c: Option<f64>,
    #[arg(long, global = true)]
    nx: Option<usize>,
    /// Minimum Ny; the element degree is raised to reach it.
    #[arg(long, global = true)]
    ny: Option<usize>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Field dump format, `csv` or `bin`.
    #[arg(long, global = true, default_value = "bin")]
    format: String,
    #[arg(long, global = true)]
    workers: Option<usize>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parameters and resolution chosen for one viscosity.
    Params,
    /// Build the advecting and test fields and dump them with their grid.
    Construct,
    /// Dissipation rate of the named flow or of a dumped field.
    Dissipation(FieldArgs),
    /// The three terms of the functional for the test field or a dumped field.
    Functional(FieldArgs),
    /// Direct steady solve.
    Solve,
    /// Full identity and bound suite.
    Verify,
    /// End-to-end sweep with report files.
    Sweep,
    /// Scaling fits of a JSON-lines record file.
    Fit(FitArgs),
}

#[derive(Args)]
struct FieldArgs {
    /// Field dump to evaluate instead of the named construction.
    #[arg(long)]
    field: Option<PathBuf>,
    /// Grid description written by `construct`; defaults to `grid.json` beside the field.
    #[arg(long)]
    grid: Option<PathBuf>,
}

#[derive(Args)]
struct FitArgs {
    /// Record file; defaults to `<out>/<prefix>.jsonl`.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, default_value = "power")]
    model: String,
    /// eps_U, eps_u, eps_u_excess, F_test or F_max.
    #[arg(long, default_value = "eps_U")]
    quantity: String,
}

#[derive(Serialize, Deserialize)]
struct GridSpec {
    #[serde(rename = "L1")]
    l1: f64,
    nx: usize,
    p: usize,
    breaks: Vec<f64>,
}

impl GridSpec {
    fn channel(&self) -> Result<Channel, SweepError> {
        Ok(Channel::new(ChannelGrid::new(self.l1, self.nx, self.p, self.breaks.clone())?))
    }
}

/// Pulls `--a.b value` and `--a.b=value` pairs out of the argument list.
fn split_overrides(args: Vec<String>) -> Result<(Vec<String>, Vec<(String, String)>), SweepError> {
    let mut rest = Vec::new();
    let mut overrides = Vec::new();
    let mut it = args.into_iter();
    while let Some(a) = it.next() {
        let dotted = a.strip_prefix("--").filter(|k| k.split('=').next().is_some_and(|n| n.contains('.')));
        match dotted {
            Some(k) => match k.split_once('=') {
                Some((k, v)) => overrides.push((k.to_string(), v.to_string())),
                None => {
                    let v = it
                        .next()
                        .ok_or_else(|| SweepError::Config(format!("--{k} needs a value")))?;
                    overrides.push((k.to_string(), v));
                }
            },
            None => rest.push(a),
        }
    }
    Ok((rest, overrides))
}

fn build_config(c: &Common, overrides: &[(String, String)]) -> Result<SweepConfig, SweepError> {
    let mut cfg = match &c.config {
        Some(p) => SweepConfig::load(p)?,
        None => SweepConfig::default(),
    };
    if let Some(f) = &c.flow {
        cfg.flow = f.parse()?;
    }
    if let Some(l) = &c.nu_list {
        cfg.nu_list = parse_nu_list(l)?;
    }
    if let Some(n) = &c.nu {
        cfg.nu_list = vec![parse_nu(n)?];
    }
    if let Some(l1) = c.l1 {
        cfg.l1 = l1;
    }
    if let Some(fc) = c.frak_c {
        cfg.frak_c = fc;
    }
    if c.nx.is_some() {
        cfg.resolution.nx = c.nx;
    }
    if c.ny.is_some() {
        cfg.resolution.ny = c.ny;
    }
    if let Some(o) = &c.out {
        cfg.output.dir = o.clone();
    }
    if let Some(w) = c.workers {
        cfg.workers = w;
    }
    for (k, v) in overrides {
        cfg.set(k, v)?;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn single_setup(cfg: &SweepConfig) -> Result<(f64, FlowSetup), SweepError> {
    let nu = cfg.nu_list[0];
    let params = FlowParams::choose(cfg.flow, nu, cfg.l1, cfg.frak_c)?;
    Ok((nu, FlowSetup::build(params, cfg.l1, &cfg.resolution)?))
}

fn print_json<T: Serialize>(v: &T) -> Result<(), SweepError> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn load_dump(field: &Path, grid: Option<&PathBuf>) -> Result<(Channel, VectorField), SweepError> {
    let gpath = grid.cloned().unwrap_or_else(|| field.with_file_name("grid.json"));
    let spec: GridSpec = serde_json::from_str(&std::fs::read_to_string(&gpath)?)?;
    let ch = spec.channel()?;
    let v = load_field(field, ch.grid())?;
    Ok((ch, v))
}

fn run(cmd: Cmd, common: &Common, overrides: &[(String, String)]) -> Result<i32, SweepError> {
    let cfg = build_config(common, overrides)?;
    let format: FieldFormat = common.format.parse().map_err(SweepError::Config)?;
    match cmd {
        Cmd::Params => {
            let (nu, s) = single_setup(&cfg)?;
            print_json(&serde_json::json!({
                "flow": cfg.flow,
                "nu": nu,
                "params": s.params,
                "resolution": s.resolution,
            }))?;
        }
        Cmd::Construct => {
            let (nu, s) = single_setup(&cfg)?;
            let dir = &cfg.output.dir;
            std::fs::create_dir_all(dir)?;
            let ext = if format == FieldFormat::Csv { "csv" } else { "bin" };
            let g = s.channel.grid();
            dump_field(&dir.join(format!("U.{ext}")), g, &s.u, format)?;
            dump_field(&dir.join(format!("v_test.{ext}")), g, &s.v_test, format)?;
            let spec = GridSpec {
                l1: g.l1(),
                nx: g.nx(),
                p: g.p(),
                breaks: g.breaks().to_vec(),
            };
            std::fs::write(dir.join("grid.json"), serde_json::to_string_pretty(&spec)?)?;
            std::fs::write(
                dir.join("params.json"),
                serde_json::to_string_pretty(&serde_json::json!({"flow": cfg.flow, "nu": nu, "params": s.params}))?,
            )?;
            println!("wrote U.{ext}, v_test.{ext}, grid.json, params.json to {}", dir.display());
        }
        Cmd::Dissipation(f) => {
            let nu = cfg.nu_list[0];
            let eps = match &f.field {
                Some(path) => {
                    let (ch, v) = load_dump(path, f.grid.as_ref())?;
                    dissipation_rate(&ch, &v, nu)?
                }
                None => {
                    let (_, s) = single_setup(&cfg)?;
                    dissipation_rate(&s.channel, &s.u, nu)?
                }
            };
            print_json(&serde_json::json!({"nu": nu, "eps": eps}))?;
        }
        Cmd::Functional(f) => {
            let (nu, s) = single_setup(&cfg)?;
            let v = match &f.field {
                Some(path) => load_dump(path, f.grid.as_ref())?.1,
                None => s.v_test.clone(),
            };
            print_json(&functional_terms(&s.channel, &s.u, &v, nu)?)?;
        }
        Cmd::Solve => {
            let (nu, s) = single_setup(&cfg)?;
            let opts = cfg.verify_options(true).solve;
            let sol = solve_steady_passive_vector(&s.channel, &s.u, nu, &opts)?;
            let eps_u = dissipation_rate(&s.channel, &sol.u, nu)?;
            let eps_big = dissipation_rate(&s.channel, &s.u, nu)?;
            print_json(&serde_json::json!({
                "nu": nu,
                "eps_U": eps_big,
                "eps_u": eps_u,
                "upper_bound": 4.0 * eps_big.cbrt(),
                "iterations": sol.iterations,
                "residual": sol.residual,
                "divergence": sol.divergence,
            }))?;
        }
        Cmd::Verify => {
            let (nu, s) = single_setup(&cfg)?;
            let report = verify(&s.channel, &s.u, &s.v_test, nu, &cfg.verify_options(true))?;
            print_json(&report)?;
            for c in report.hard_failures() {
                eprintln!("FAIL {}: {:e} vs limit {:e}", c.name, c.value, c.limit);
            }
            if !report.hard_failures().is_empty() {
                return Ok(1);
            }
        }
        Cmd::Sweep => {
            let mut cfg = cfg;
            if cfg.toggles.frak_c_search {
                let found = bisect_frak_c(&cfg, 0.5, 1e-2)?;
                eprintln!("frak_c = {:e} (threshold {:e})", found.frak_c, found.threshold);
                cfg.frak_c = found.frak_c;
            }
            let records = run_sweep(&cfg)?;
            let mut fits = Vec::new();
            for q in [Quantity::EpsBig, Quantity::EpsU, Quantity::FTest, Quantity::FMax] {
                for m in [FitModel::Power, FitModel::LogPower] {
                    if let Ok(fit) = fit_records(&records, q, m) {
                        fits.push(NamedFit { quantity: q, fit });
                    }
                }
            }
            let files = emit_report(&records, &fits, &cfg.output.dir, &cfg.output.prefix)?;
            let mut bad = false;
            for r in &records {
                let status = serde_json::to_value(r.status)?;
                eprintln!(
                    "nu {:.4e} {} eps_U {} eps_u {} F_test {} hard_pass {}",
                    r.nu,
                    status.as_str().unwrap_or_default(),
                    r.eps_big().map_or("-".into(), |v| format!("{v:.6e}")),
                    r.eps_u().map_or("-".into(), |v| format!("{v:.6e}")),
                    r.f_test().map_or("-".into(), |v| format!("{v:.6e}")),
                    r.hard_pass
                );
                bad |= r.status == PointStatus::Failed || (r.status == PointStatus::Ok && !r.hard_pass);
            }
            println!("{}", files.jsonl.display());
            if bad {
                return Ok(1);
            }
        }
        Cmd::Fit(a) => {
            let input = a
                .input
                .unwrap_or_else(|| cfg.output.dir.join(format!("{}.jsonl", cfg.output.prefix)));
            let records = load_records(&input)?;
            let quantity: Quantity = serde_json::from_value(serde_json::Value::String(a.quantity.clone()))
                .map_err(|_| SweepError::Config(format!("unknown quantity '{}'", a.quantity)))?;
            let fit = fit_records(&records, quantity, a.model.parse()?)?;
            print_json(&NamedFit { quantity, fit })?;
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let (args, overrides) = match split_overrides(std::env::args().collect()) {
        Ok(x) => x,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let cli = Cli::parse_from(args);
    match run(cli.cmd, &cli.common, &overrides) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
