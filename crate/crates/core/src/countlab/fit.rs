//! Least-squares growth fits in log coordinates.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum GrowthModel {
    /// N = C T^a.
    Power,
    /// N = C T^a (log T)^{b-1}; with `a` given only b and C are fitted.
    PowerLog {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        a: Option<f64>,
    },
    /// N = C e^{rate R}, with the abscissa read as R.
    Exponential,
}

impl std::str::FromStr for GrowthModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "power" => Ok(GrowthModel::Power),
            "power_log" => Ok(GrowthModel::PowerLog { a: None }),
            "exponential" => Ok(GrowthModel::Exponential),
            _ => Err(Error::Parse(format!("unknown growth model {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthFit {
    pub model: GrowthModel,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a_stderr: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b_stderr: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rate: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rate_stderr: Option<f64>,
    pub log_constant: f64,
    pub log_constant_stderr: f64,
    pub residual_rms: f64,
    pub n_points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesPoint {
    #[serde(rename = "T")]
    pub t: f64,
    #[serde(rename = "N")]
    pub n: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountSeries {
    pub points: Vec<SeriesPoint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fit: Option<GrowthFit>,
}

impl CountSeries {
    pub fn new(points: Vec<(f64, u64)>) -> Self {
        CountSeries { points: points.into_iter().map(|(t, n)| SeriesPoint { t, n }).collect(), fit: None }
    }

    pub fn is_nondecreasing(&self) -> bool {
        self.points.windows(2).all(|w| w[0].n <= w[1].n)
    }
}

struct Ols {
    beta: Vec<f64>,
    stderr: Vec<f64>,
    rms: f64,
}

/// Ordinary least squares through modified Gram-Schmidt QR.
fn ols(cols: &[Vec<f64>], y: &[f64]) -> Result<Ols> {
    let n = y.len();
    let p = cols.len();
    let mut q: Vec<Vec<f64>> = cols.to_vec();
    let mut r = vec![vec![0.0; p]; p];
    for j in 0..p {
        for i in 0..j {
            let dot: f64 = (0..n).map(|k| q[i][k] * q[j][k]).sum();
            r[i][j] = dot;
            for k in 0..n {
                q[j][k] -= dot * q[i][k];
            }
        }
        let norm = q[j].iter().map(|x| x * x).sum::<f64>().sqrt();
        let scale = cols[j].iter().map(|x| x * x).sum::<f64>().sqrt();
        if !(norm > 1e-12 * scale.max(1.0)) {
            return Err(Error::Fit("design matrix is rank deficient".into()));
        }
        r[j][j] = norm;
        for k in 0..n {
            q[j][k] /= norm;
        }
    }
    let qty: Vec<f64> = (0..p).map(|j| (0..n).map(|k| q[j][k] * y[k]).sum()).collect();
    let mut beta = vec![0.0; p];
    for j in (0..p).rev() {
        let s: f64 = (j + 1..p).map(|i| r[j][i] * beta[i]).sum();
        beta[j] = (qty[j] - s) / r[j][j];
    }
    let rss: f64 = (0..n)
        .map(|k| {
            let fit: f64 = (0..p).map(|j| cols[j][k] * beta[j]).sum();
            (y[k] - fit).powi(2)
        })
        .sum();
    let dof = n.saturating_sub(p).max(1) as f64;
    let sigma2 = rss / dof;
    // Rinv columns give (X^T X)^{-1} = Rinv Rinv^T.
    let mut rinv = vec![vec![0.0; p]; p];
    for c in 0..p {
        for j in (0..p).rev() {
            let rhs = if j == c { 1.0 } else { 0.0 };
            let s: f64 = (j + 1..p).map(|i| r[j][i] * rinv[i][c]).sum();
            rinv[j][c] = (rhs - s) / r[j][j];
        }
    }
    let stderr = (0..p)
        .map(|j| (sigma2 * (0..p).map(|c| rinv[j][c] * rinv[j][c]).sum::<f64>()).sqrt())
        .collect();
    Ok(Ols { beta, stderr, rms: (rss / n as f64).sqrt() })
}

/// Fits real-valued (T, N) pairs.
pub fn fit_points(points: &[(f64, f64)], model: GrowthModel) -> Result<GrowthFit> {
    if points.len() < 5 {
        return Err(Error::Fit(format!("need at least 5 points, got {}", points.len())));
    }
    if points.windows(2).any(|w| !(w[1].0 > w[0].0)) {
        return Err(Error::Fit("abscissae must be strictly increasing".into()));
    }
    if points.iter().any(|p| !(p.1 > 0.0) || !p.1.is_finite()) {
        return Err(Error::Fit("counts must be positive".into()));
    }
    let ln_n: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let ones = vec![1.0; points.len()];
    let needs_log_t = !matches!(model, GrowthModel::Exponential);
    if needs_log_t && points.iter().any(|p| !(p.0 > 0.0)) {
        return Err(Error::Fit("T must be positive".into()));
    }
    let ln_t: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let mut fit = GrowthFit {
        model,
        a: None,
        a_stderr: None,
        b: None,
        b_stderr: None,
        rate: None,
        rate_stderr: None,
        log_constant: 0.0,
        log_constant_stderr: 0.0,
        residual_rms: 0.0,
        n_points: points.len(),
    };
    let res = match model {
        GrowthModel::Power => {
            let o = ols(&[ones, ln_t], &ln_n)?;
            fit.a = Some(o.beta[1]);
            fit.a_stderr = Some(o.stderr[1]);
            o
        }
        GrowthModel::Exponential => {
            let r: Vec<f64> = points.iter().map(|p| p.0).collect();
            let o = ols(&[ones, r], &ln_n)?;
            fit.rate = Some(o.beta[1]);
            fit.rate_stderr = Some(o.stderr[1]);
            o
        }
        GrowthModel::PowerLog { a } => {
            if points.iter().any(|p| !(p.0 > 1.0)) {
                return Err(Error::Fit("power_log needs T > 1".into()));
            }
            let lnln: Vec<f64> = ln_t.iter().map(|x| x.ln()).collect();
            match a {
                Some(a) => {
                    // b from the residual log(N / T^a) against log log T.
                    let resid: Vec<f64> = ln_n.iter().zip(&ln_t).map(|(y, x)| y - a * x).collect();
                    let o = ols(&[ones, lnln], &resid)?;
                    fit.a = Some(a);
                    fit.a_stderr = Some(0.0);
                    fit.b = Some(1.0 + o.beta[1]);
                    fit.b_stderr = Some(o.stderr[1]);
                    o
                }
                None => {
                    let o = ols(&[ones, ln_t, lnln], &ln_n)?;
                    fit.a = Some(o.beta[1]);
                    fit.a_stderr = Some(o.stderr[1]);
                    fit.b = Some(1.0 + o.beta[2]);
                    fit.b_stderr = Some(o.stderr[2]);
                    o
                }
            }
        }
    };
    fit.log_constant = res.beta[0];
    fit.log_constant_stderr = res.stderr[0];
    fit.residual_rms = res.rms;
    Ok(fit)
}

pub fn fit_growth(series: &CountSeries, model: GrowthModel) -> Result<GrowthFit> {
    let pts: Vec<(f64, f64)> = series.points.iter().map(|p| (p.t, p.n as f64)).collect();
    if series.points.iter().any(|p| p.n == 0) {
        return Err(Error::Fit("zero counts cannot be fitted in log space".into()));
    }
    fit_points(&pts, model)
}

/// T = 2^lo, ..., 2^hi.
pub fn dyadic_grid(lo: i32, hi: i32) -> Vec<f64> {
    (lo..=hi).map(|k| 2f64.powi(k)).collect()
}
