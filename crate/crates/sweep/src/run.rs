//! Sweeps over viscosity.

use std::time::Instant;

use chlab_dissipation::{functional_terms, verify, Check};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::SweepConfig;
use crate::error::SweepError;
use crate::record::{PointStatus, SweepRecord};
use crate::resolution::{FlowParams, FlowSetup};

fn blank(config: &SweepConfig, nu: f64) -> SweepRecord {
    SweepRecord {
        flow: config.flow,
        nu,
        status: PointStatus::Failed,
        message: None,
        frak_c: config.frak_c,
        l1: config.l1,
        params: None,
        l1_computational: None,
        nx: None,
        ny: None,
        p: None,
        direct: false,
        term_i_floor: None,
        eps_big_nu13: None,
        eps_big_log2sq: None,
        report: None,
        hard_pass: false,
        wall_time_s: None,
    }
}

/// Builds the construction at `nu` and runs every check the configuration asks for.
pub fn run_point(config: &SweepConfig, nu: f64) -> SweepRecord {
    let start = Instant::now();
    let mut rec = blank(config, nu);
    let params = match FlowParams::choose(config.flow, nu, config.l1, config.frak_c) {
        Ok(p) => p,
        Err(e) => {
            rec.message = Some(e.to_string());
            return rec;
        }
    };
    rec.term_i_floor = params.term_i_floor();
    rec.params = Some(params.clone());
    let setup = match FlowSetup::build(params, config.l1, &config.resolution) {
        Ok(s) => s,
        Err(e) => {
            rec.status = if matches!(e, SweepError::Infeasible(_)) {
                PointStatus::Infeasible
            } else {
                PointStatus::Failed
            };
            rec.message = Some(e.to_string());
            return rec;
        }
    };
    let r = &setup.resolution;
    rec.l1_computational = Some(r.l1);
    (rec.nx, rec.ny, rec.p) = (Some(r.nx), Some(r.ny), Some(r.p));
    rec.direct = config.toggles.run_direct_solve && nu >= config.direct_min_nu();
    let opts = config.verify_options(rec.direct);
    match verify(&setup.channel, &setup.u, &setup.v_test, nu, &opts) {
        Ok(mut report) => {
            if let Some(floor) = rec.term_i_floor {
                let t = config.tolerances.term_i;
                report.checks.push(Check {
                    name: "term_i_floor".into(),
                    value: report.f_test_breakdown.term_i,
                    limit: floor - t,
                    pass: report.f_test_breakdown.term_i >= floor - t,
                    hard: true,
                });
            }
            rec.eps_big_nu13 = Some(report.eps_big * nu.powf(-1.0 / 3.0));
            rec.eps_big_log2sq = (nu < 1.0).then(|| report.eps_big * (1.0 / nu).log2().powi(2));
            rec.hard_pass = report.hard_failures().is_empty();
            rec.status = PointStatus::Ok;
            rec.report = Some(report);
        }
        Err(e) => rec.message = Some(e.to_string()),
    }
    if config.output.record_timing {
        rec.wall_time_s = Some(start.elapsed().as_secs_f64());
    }
    rec
}

fn pool(workers: usize) -> Result<rayon::ThreadPool, SweepError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| SweepError::Config(format!("cannot start {workers} workers: {e}")))
}

/// One record per viscosity, sorted by descending `nu` whatever the scheduling.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<SweepRecord>, SweepError> {
    config.validate()?;
    let mut records: Vec<SweepRecord> =
        pool(config.workers)?.install(|| config.nu_list.par_iter().map(|&nu| run_point(config, nu)).collect());
    records.sort_by(|a, b| b.nu.total_cmp(&a.nu));
    Ok(records)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrakCSearch {
    pub frak_c: f64,
    /// Largest value found with every test functional positive.
    pub threshold: f64,
    /// `F(test)` at the returned `frak_c`, one per viscosity.
    pub f_test: Vec<f64>,
    pub evaluations: usize,
}

/// Lowers `frak_c` from the configured value until `F(test) > 0` at every
/// viscosity of the sweep, refines the threshold by bisection to relative
/// precision `rel_tol`, and returns `margin` times it.
pub fn bisect_frak_c(config: &SweepConfig, margin: f64, rel_tol: f64) -> Result<FrakCSearch, SweepError> {
    config.validate()?;
    if !(margin > 0.0 && margin <= 1.0) {
        return Err(SweepError::Config(format!("margin must lie in (0, 1], got {margin}")));
    }
    // F is c T1 + c^2 (II + III) in frak_c, so one evaluation per point fixes it
    let coeffs: Vec<(f64, f64)> = pool(config.workers)?.install(|| {
        config
            .nu_list
            .par_iter()
            .map(|&nu| {
                let params = FlowParams::choose(config.flow, nu, config.l1, config.frak_c)?;
                let s = FlowSetup::build(params, config.l1, &config.resolution)?;
                let t = functional_terms(&s.channel, &s.u, &s.v_test, nu)?;
                let c = config.frak_c;
                Ok((t.term_i / c, (t.term_ii + t.term_iii) / (c * c)))
            })
            .collect::<Result<Vec<_>, SweepError>>()
    })?;
    let mut evaluations = 0;
    let mut eval = |c: f64| -> Result<Vec<f64>, SweepError> {
        evaluations += 1;
        Ok(coeffs.iter().map(|&(lin, quad)| c * lin + c * c * quad).collect())
    };
    let positive = |f: &[f64]| f.iter().all(|&x| x > 0.0);
    let mut hi = config.frak_c;
    let mut lo = hi;
    let mut f_lo = eval(lo)?;
    let mut halvings = 0;
    while !positive(&f_lo) {
        hi = lo;
        lo *= 0.5;
        halvings += 1;
        if halvings > 200 {
            return Err(SweepError::Config("test functional stays non-positive for every frak_c".into()));
        }
        f_lo = eval(lo)?;
    }
    if hi > lo {
        while hi - lo > rel_tol * lo {
            let mid = 0.5 * (lo + hi);
            let f = eval(mid)?;
            if positive(&f) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }
    let frak_c = margin * lo;
    let f_test = eval(frak_c)?;
    Ok(FrakCSearch {
        frak_c,
        threshold: lo,
        f_test,
        evaluations,
    })
}
