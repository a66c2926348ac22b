//! Least-squares scaling fits `eps ~ C nu^alpha (log2 1/nu)^beta`.

use serde::{Deserialize, Serialize};

use crate::error::SweepError;
use crate::record::{PointStatus, SweepRecord};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FitModel {
    /// `C nu^alpha`.
    Power,
    /// `C (log2 1/nu)^beta`, `alpha` pinned to 0.
    LogPower,
    /// `C nu^alpha (log2 1/nu)^beta`.
    PowerLog,
}

impl std::str::FromStr for FitModel {
    type Err = SweepError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "power" => Ok(Self::Power),
            "log-power" => Ok(Self::LogPower),
            "power-log" => Ok(Self::PowerLog),
            other => Err(SweepError::Config(format!("unknown fit model '{other}', expected power, log-power or power-log"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Quantity {
    #[serde(rename = "eps_U")]
    EpsBig,
    #[serde(rename = "eps_u")]
    EpsU,
    /// `eps_u - nu`.
    #[serde(rename = "eps_u_excess")]
    EpsUExcess,
    #[serde(rename = "F_test")]
    FTest,
    #[serde(rename = "F_max")]
    FMax,
}

impl Quantity {
    pub fn of(self, r: &SweepRecord) -> Option<f64> {
        match self {
            Quantity::EpsBig => r.eps_big(),
            Quantity::EpsU => r.eps_u(),
            Quantity::EpsUExcess => r.eps_u().map(|e| e - r.nu),
            Quantity::FTest => r.f_test(),
            Quantity::FMax => r.f_max(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub model: FitModel,
    pub alpha: f64,
    pub beta: Option<f64>,
    pub prefactor: f64,
    /// Euclidean norm of the residuals of `ln eps`.
    pub residual_norm: f64,
    /// Largest change of `alpha` over leave-one-out refits.
    pub alpha_halfwidth: f64,
    pub beta_halfwidth: Option<f64>,
    pub n_points: usize,
}

/// Solves the normal equations of a small dense least-squares problem.
fn least_squares(rows: &[Vec<f64>], rhs: &[f64]) -> Option<Vec<f64>> {
    let m = rows[0].len();
    let mut a = vec![vec![0.0; m + 1]; m];
    for (r, &b) in rows.iter().zip(rhs) {
        for i in 0..m {
            for j in 0..m {
                a[i][j] += r[i] * r[j];
            }
            a[i][m] += r[i] * b;
        }
    }
    // Gaussian elimination with partial pivoting
    for c in 0..m {
        let piv = (c..m).max_by(|&x, &y| a[x][c].abs().total_cmp(&a[y][c].abs()))?;
        a.swap(c, piv);
        if a[c][c].abs() < 1e-300 {
            return None;
        }
        for r in c + 1..m {
            let f = a[r][c] / a[c][c];
            for k in c..=m {
                a[r][k] -= f * a[c][k];
            }
        }
    }
    let mut x = vec![0.0; m];
    for c in (0..m).rev() {
        let s: f64 = (c + 1..m).map(|k| a[c][k] * x[k]).sum();
        x[c] = (a[c][m] - s) / a[c][c];
    }
    Some(x)
}

fn design(model: FitModel, nu: f64) -> Vec<f64> {
    let lnu = nu.ln();
    let llog = (1.0 / nu).log2().ln();
    match model {
        FitModel::Power => vec![1.0, lnu],
        FitModel::LogPower => vec![1.0, llog],
        FitModel::PowerLog => vec![1.0, lnu, llog],
    }
}

/// (ln C, alpha, beta)
fn solve(model: FitModel, nu: &[f64], eps: &[f64]) -> Result<(f64, f64, Option<f64>), SweepError> {
    let rows: Vec<Vec<f64>> = nu.iter().map(|&n| design(model, n)).collect();
    let rhs: Vec<f64> = eps.iter().map(|e| e.ln()).collect();
    let x = least_squares(&rows, &rhs)
        .ok_or_else(|| SweepError::Config("scaling fit is degenerate for these viscosities".into()))?;
    Ok(match model {
        FitModel::Power => (x[0], x[1], None),
        FitModel::LogPower => (x[0], 0.0, Some(x[1])),
        FitModel::PowerLog => (x[0], x[1], Some(x[2])),
    })
}

/// Fits `eps` against `nu`; every `eps` must be positive and every `nu` in (0, 1).
pub fn fit_scaling(nu: &[f64], eps: &[f64], model: FitModel) -> Result<ScalingFit, SweepError> {
    if nu.len() != eps.len() {
        return Err(SweepError::Config("viscosity and value lists differ in length".into()));
    }
    let min_points = if model == FitModel::PowerLog { 5 } else { 4 };
    if nu.len() < min_points {
        return Err(SweepError::TooFewRecords(nu.len()));
    }
    if let Some(bad) = nu.iter().zip(eps).find(|(n, e)| !(**n > 0.0 && **n < 1.0 && **e > 0.0 && e.is_finite())) {
        return Err(SweepError::Config(format!("cannot fit point nu = {}, value = {}", bad.0, bad.1)));
    }
    let (lc, alpha, beta) = solve(model, nu, eps)?;
    let residual_norm = nu
        .iter()
        .zip(eps)
        .map(|(&n, e)| {
            let d = design(model, n);
            let pred = lc + alpha * n.ln() + beta.map_or(0.0, |b| b * d[d.len() - 1]);
            (e.ln() - pred).powi(2)
        })
        .sum::<f64>()
        .sqrt();
    let (mut ha, mut hb) = (0.0f64, 0.0f64);
    for skip in 0..nu.len() {
        let n: Vec<f64> = nu.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, v)| *v).collect();
        let e: Vec<f64> = eps.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, v)| *v).collect();
        let (_, a, b) = solve(model, &n, &e)?;
        ha = ha.max((a - alpha).abs());
        if let (Some(b), Some(b0)) = (b, beta) {
            hb = hb.max((b - b0).abs());
        }
    }
    Ok(ScalingFit {
        model,
        alpha,
        beta,
        prefactor: lc.exp(),
        residual_norm,
        alpha_halfwidth: ha,
        beta_halfwidth: beta.map(|_| hb),
        n_points: nu.len(),
    })
}

/// Fits `quantity` over the records where it is available and positive.
pub fn fit_records(records: &[SweepRecord], quantity: Quantity, model: FitModel) -> Result<ScalingFit, SweepError> {
    let (nu, eps): (Vec<f64>, Vec<f64>) = records
        .iter()
        .filter(|r| r.status == PointStatus::Ok)
        .filter_map(|r| quantity.of(r).filter(|v| *v > 0.0 && v.is_finite()).map(|v| (r.nu, v)))
        .unzip();
    fit_scaling(&nu, &eps, model)
}
