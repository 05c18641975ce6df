//! Dyadic-shell decomposition of sum over coprime (c, d) mod +-1 of
//! (c^2 + d^2)^{-s}, the SL_2 model of the height series at the identity.

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct XiShell {
    /// Shell 2^n <= c^2 + d^2 < 2^{n+1}.
    pub n: u32,
    pub count: u64,
    pub mass: f64,
    /// count * 2^{-sn}, which dominates the mass.
    pub bound: f64,
    pub cumulative: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum XiStatus {
    Converges,
    NotDecaying,
    DivergenceExpected,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct XiReport {
    pub s: f64,
    pub q_max: u64,
    pub shells: Vec<XiShell>,
    pub status: XiStatus,
    /// Fitted ratio of successive shell masses over the upper half of the shells.
    pub decay_ratio: f64,
    /// 2^{1-s}, the ratio expected from shell counts growing like 2^n.
    pub expected_ratio: f64,
}

impl XiReport {
    pub fn total(&self) -> f64 {
        self.shells.last().map_or(0.0, |s| s.cumulative)
    }

    /// Mass beyond shell `n`: the observed shells plus a geometric
    /// continuation at the fitted ratio. Infinite when not converging.
    pub fn tail_after(&self, n: u32) -> f64 {
        if self.status != XiStatus::Converges {
            return f64::INFINITY;
        }
        let observed: f64 = self.shells.iter().filter(|s| s.n > n).map(|s| s.mass).sum();
        let last = self.shells.last().map_or(0.0, |s| s.mass);
        let r = self.decay_ratio;
        observed + last * r / (1.0 - r)
    }
}

pub fn xi_tail_check(s: f64, q_max: u64) -> Result<XiReport> {
    if !s.is_finite() {
        return invalid("s must be finite");
    }
    if q_max < 2 {
        return invalid("Q_max must be at least 2");
    }
    let b = (q_max as u128 * q_max as u128) as u64;
    // Complete shells: 2^{n+1} - 1 <= Q_max^2.
    let mut n_shells = 0u32;
    while (1u64 << (n_shells + 1)) - 1 <= b {
        n_shells += 1;
    }
    let limit = (1u64 << n_shells) - 1;
    let qm = q_max as i64;
    // Canonical representatives: c > 0, or (0, 1).
    let per_c: Vec<(Vec<u64>, Vec<f64>)> = (0..=qm)
        .into_par_iter()
        .map(|c| {
            let mut counts = vec![0u64; n_shells as usize];
            let mut mass = vec![0f64; n_shells as usize];
            let mut add = |n2: u64| {
                if n2 <= limit {
                    let k = 63 - n2.leading_zeros() as usize;
                    counts[k] += 1;
                    mass[k] += (n2 as f64).powf(-s);
                }
            };
            if c == 0 {
                add(1);
            } else {
                for d in -qm..=qm {
                    if c.gcd(&d) == 1 {
                        add((c * c + d * d) as u64);
                    }
                }
            }
            (counts, mass)
        })
        .collect();
    let mut shells = Vec::with_capacity(n_shells as usize);
    let mut cumulative = 0.0;
    for n in 0..n_shells as usize {
        let count: u64 = per_c.iter().map(|p| p.0[n]).sum();
        let mass: f64 = per_c.iter().map(|p| p.1[n]).sum();
        cumulative += mass;
        shells.push(XiShell { n: n as u32, count, mass, bound: count as f64 * 2f64.powf(-s * n as f64), cumulative });
    }
    let decay_ratio = fitted_ratio(&shells);
    let status = if s <= 1.0 {
        XiStatus::DivergenceExpected
    } else if decay_ratio < 1.0 {
        XiStatus::Converges
    } else {
        XiStatus::NotDecaying
    };
    Ok(XiReport { s, q_max, shells, status, decay_ratio, expected_ratio: 2f64.powf(1.0 - s) })
}

/// exp of the least-squares slope of log mass against n on the upper half.
fn fitted_ratio(shells: &[XiShell]) -> f64 {
    let tail: Vec<(f64, f64)> =
        shells[shells.len() / 2..].iter().filter(|s| s.mass > 0.0).map(|s| (s.n as f64, s.mass.ln())).collect();
    if tail.len() < 2 {
        return f64::NAN;
    }
    let k = tail.len() as f64;
    let mx = tail.iter().map(|p| p.0).sum::<f64>() / k;
    let my = tail.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = tail.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = tail.iter().map(|p| (p.0 - mx).powi(2)).sum();
    (sxy / sxx).exp()
}
