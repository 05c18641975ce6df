//! Growth of int exp(sum m_a x_a) over {x >= y, sum c_a x_a <= log T}.
//!
//! With u_a = c_a (x_a - y_a) and r_a = m_a / c_a the region becomes the
//! simplex {u >= 0, sum u <= L}, L = log T - l_c(y), and
//!
//!   value = e^{l_m(y)} / prod(c) * int_simplex e^{<r, u>} du.
//!
//! Both estimators work with the integrand scaled by e^{-r_max L}.

use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::countlab::{fit_points, GrowthFit, GrowthModel};
use crate::error::{Error, Result};
use crate::parallel::{block_rng, map_blocks, Moments, SAMPLE_BLOCK};
use crate::rational::{serde_q, Q};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum RegionMode {
    Grid,
    MonteCarlo { samples: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionEstimate {
    pub m: Vec<u64>,
    pub c: Vec<u64>,
    pub y: Vec<f64>,
    #[serde(rename = "T")]
    pub t: f64,
    pub mode: RegionMode,
    pub value: f64,
    pub stderr: f64,
    pub ln_value: f64,
    #[serde(with = "serde_q")]
    pub predicted_a: Q,
    pub predicted_b: usize,
    /// Integrand evaluations (grid) or accepted samples (Monte Carlo).
    pub work: u64,
}

/// a = max m_a / c_a and b = number of indices attaining it.
pub fn predicted_shape(m: &[u64], c: &[u64]) -> (Q, usize) {
    let ratios: Vec<Q> = m
        .iter()
        .zip(c)
        .map(|(&mi, &ci)| Q::new((mi as i64).into(), (ci as i64).into()))
        .collect();
    let a = ratios.iter().max().cloned().unwrap_or_else(Q::zero);
    let b = ratios.iter().filter(|r| **r == a).count();
    (a, b)
}

fn validate(m: &[u64], c: &[u64], y: &[f64]) -> Result<()> {
    if m.is_empty() || m.len() != c.len() {
        return Err(Error::Validation("m and c must be nonempty and of equal length".into()));
    }
    if y.len() != m.len() {
        return Err(Error::Dimension { expected: m.len(), got: y.len() });
    }
    if m.iter().chain(c).any(|&v| v == 0) {
        return Err(Error::Validation("coefficients m and c must be positive integers".into()));
    }
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::Validation("shift must be finite".into()));
    }
    Ok(())
}

/// Nested composite trapezoid on the simplex, integrand e^{<r,u> - top}.
fn trapezoid(r: &[f64], l: f64, n: usize, top: f64, evals: &mut u64) -> f64 {
    fn go(r: &[f64], rem: f64, acc: f64, n: usize, top: f64, evals: &mut u64) -> f64 {
        if r.is_empty() {
            *evals += 1;
            return (acc - top).exp();
        }
        if rem <= 0.0 {
            return 0.0;
        }
        let h = rem / n as f64;
        let mut sum = 0.0;
        for i in 0..=n {
            let u = i as f64 * h;
            let w = if i == 0 || i == n { 0.5 } else { 1.0 };
            sum += w * go(&r[1..], rem - u, acc + r[0] * u, n, top, evals);
        }
        sum * h
    }
    go(r, l, 0.0, n, top, evals)
}

const GRID_TOL: f64 = 1e-4;
const GRID_MAX_EVALS: u64 = 1 << 27;

fn grid_scaled(r: &[f64], l: f64, top: f64) -> (f64, f64, u64) {
    let k = r.len() as u32;
    let mut evals = 0u64;
    let mut n = 8usize;
    let mut prev_trap = trapezoid(r, l, n, top, &mut evals);
    let mut prev_rich: Option<f64> = None;
    loop {
        let next_n = 2 * n;
        if ((next_n + 1) as u64).pow(k) + evals > GRID_MAX_EVALS {
            let est = prev_rich.unwrap_or(prev_trap);
            log::warn!("grid refinement stopped at n = {n} before reaching tolerance");
            return (est, (est - prev_trap).abs(), evals);
        }
        let trap = trapezoid(r, l, next_n, top, &mut evals);
        let rich = (4.0 * trap - prev_trap) / 3.0;
        if let Some(p) = prev_rich {
            let change = (rich - p).abs();
            if change <= GRID_TOL * rich.abs() {
                return (rich, change, evals);
            }
        }
        prev_trap = trap;
        prev_rich = Some(rich);
        n = next_n;
    }
}

/// e^{-aL} int_0^L s^j e^{as} ds.
fn power_exp_scaled(j: usize, a: f64, l: f64) -> f64 {
    let al = a * l;
    if al > 10.0 + 2.0 * j as f64 {
        // K_j = L^j / a - (j / a) K_{j-1}, stable once aL exceeds j.
        let mut k = -(-al).exp_m1() / a;
        for i in 1..=j {
            k = l.powi(i as i32) / a - i as f64 / a * k;
        }
        k
    } else {
        // e^{-aL} L^{j+1} sum_i (aL)^i / (i! (i + j + 1)), all terms positive.
        let mut term = 1.0;
        let mut sum = 0.0;
        let mut i = 0.0;
        loop {
            let t = term / (i + j as f64 + 1.0);
            sum += t;
            if t < 1e-17 * sum {
                break;
            }
            i += 1.0;
            term *= al / i;
        }
        (-al).exp() * l.powi(j as i32 + 1) * sum
    }
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// Importance sampling with density proportional to e^{r_max sum u}.
///
/// s = sum u has density s^{k-1} e^{r_max s} on [0, L]; w = L - s is drawn
/// from the truncated exponential and accepted with probability
/// ((L - w)/L)^{k-1}. Given s, the point is uniform on the slice.
fn monte_carlo_scaled(r: &[f64], l: f64, samples: u64, seed: u64) -> (f64, f64, u64) {
    let k = r.len();
    let a = r.iter().cloned().fold(f64::MIN, f64::max);
    let z = power_exp_scaled(k - 1, a, l) / factorial(k - 1);
    let trunc = -(-a * l).exp_m1();
    let parts = map_blocks(samples as usize, SAMPLE_BLOCK, |b, range| {
        let mut rng = block_rng(seed, b as u64);
        let mut mom = Moments::default();
        let mut e = vec![0.0; k];
        for _ in range {
            let s = loop {
                let w = -(1.0 - rng.gen::<f64>() * trunc).ln() / a;
                let s = l - w;
                if s < 0.0 {
                    continue;
                }
                if k == 1 || rng.gen::<f64>() < (s / l).powi(k as i32 - 1) {
                    break s;
                }
            };
            let mut total = 0.0;
            for ei in e.iter_mut() {
                *ei = -(1.0 - rng.gen::<f64>()).ln();
                total += *ei;
            }
            let ru: f64 = r.iter().zip(&e).map(|(ri, ei)| ri * s * ei / total).sum();
            mom.push((ru - a * s).exp());
        }
        mom
    });
    let mom = Moments::merge_all(&parts);
    (z * mom.mean(), z * mom.stderr(), mom.n)
}

pub fn cone_region_estimate(m: &[u64], c: &[u64], y: &[f64], t: f64, mode: RegionMode) -> Result<RegionEstimate> {
    validate(m, c, y)?;
    if !t.is_finite() {
        return Err(Error::Validation("T must be finite".into()));
    }
    let (predicted_a, predicted_b) = predicted_shape(m, c);
    let r: Vec<f64> = m.iter().zip(c).map(|(&mi, &ci)| mi as f64 / ci as f64).collect();
    let l_m: f64 = m.iter().zip(y).map(|(&mi, yi)| mi as f64 * yi).sum();
    let l_c: f64 = c.iter().zip(y).map(|(&ci, yi)| ci as f64 * yi).sum();
    let big_l = if t > 0.0 { t.ln() - l_c } else { f64::NEG_INFINITY };
    let mut est = RegionEstimate {
        m: m.to_vec(),
        c: c.to_vec(),
        y: y.to_vec(),
        t,
        mode,
        value: 0.0,
        stderr: 0.0,
        ln_value: f64::NEG_INFINITY,
        predicted_a,
        predicted_b,
        work: 0,
    };
    if t <= 1.0 || big_l <= 0.0 {
        return Ok(est);
    }
    let top = r.iter().cloned().fold(f64::MIN, f64::max) * big_l;
    let (scaled, err, work) = match mode {
        RegionMode::Grid => grid_scaled(&r, big_l, top),
        RegionMode::MonteCarlo { samples, seed } => {
            if samples < 2 {
                return Err(Error::Validation("Monte Carlo needs at least 2 samples".into()));
            }
            monte_carlo_scaled(&r, big_l, samples, seed)
        }
    };
    let ln_c: f64 = c.iter().map(|&ci| (ci as f64).ln()).sum();
    let ln_factor = l_m + top - ln_c;
    est.ln_value = ln_factor + scaled.ln();
    est.value = est.ln_value.exp();
    est.stderr = err * ln_factor.exp();
    est.work = work;
    Ok(est)
}

/// Closed form of int_{u >= 0, sum u <= L} e^{<r,u>} du for distinct
/// nonzero r, as the divided difference of t -> e^{Lt} at {0, r_1..r_k}.
pub fn simplex_exponential_integral(r: &[f64], l: f64) -> f64 {
    let nodes: Vec<f64> = std::iter::once(0.0).chain(r.iter().cloned()).collect();
    nodes
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let denom: f64 = nodes.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, &y)| x - y).product();
            (l * x).exp() / denom
        })
        .sum()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionSweep {
    pub estimates: Vec<RegionEstimate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fit: Option<GrowthFit>,
}

/// Estimates over a grid of T and fits T^a (log T)^{b-1} to the values.
pub fn region_sweep(m: &[u64], c: &[u64], y: &[f64], ts: &[f64], mode: RegionMode) -> Result<RegionSweep> {
    if ts.is_empty() {
        return Err(Error::Validation("empty T grid".into()));
    }
    let estimates: Vec<RegionEstimate> =
        ts.iter().map(|&t| cone_region_estimate(m, c, y, t, mode)).collect::<Result<_>>()?;
    let points: Vec<(f64, f64)> = estimates.iter().filter(|e| e.value > 0.0).map(|e| (e.t, e.value)).collect();
    let fit = if points.len() >= 5 {
        let (a, b) = predicted_shape(m, c);
        let model = if b == 1 {
            GrowthModel::Power
        } else {
            GrowthModel::PowerLog { a: Some(a.to_f64().unwrap_or(f64::NAN)) }
        };
        fit_points(&points, model).ok()
    } else {
        None
    };
    Ok(RegionSweep { estimates, fit })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    /// Divided differences with repeated nodes (Hermite table) of e^{Lt}.
    fn confluent_dd(nodes: &mut [f64], l: f64) -> f64 {
        nodes.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let n = nodes.len();
        let fact = |k: usize| (1..=k).map(|i| i as f64).product::<f64>();
        let mut table: Vec<f64> = nodes.iter().map(|&x| (l * x).exp()).collect();
        for order in 1..n {
            for i in (order..n).rev() {
                let (xi, xj) = (nodes[i], nodes[i - order]);
                table[i] = if xi == xj {
                    l.powi(order as i32) * (l * xi).exp() / fact(order)
                } else {
                    (table[i] - table[i - 1]) / (xi - xj)
                };
            }
        }
        table[n - 1]
    }

    fn oracle(m: &[u64], c: &[u64], t: f64) -> f64 {
        let mut nodes: Vec<f64> = std::iter::once(0.0)
            .chain(m.iter().zip(c).map(|(&a, &b)| a as f64 / b as f64))
            .collect();
        let pc: f64 = c.iter().map(|&x| x as f64).product();
        confluent_dd(&mut nodes, t.ln()) / pc
    }

    #[test]
    fn one_dimensional_closed_form() {
        let t = 50.0;
        let e = cone_region_estimate(&[2], &[1], &[0.0], t, RegionMode::Grid).unwrap();
        let want = (t * t - 1.0) / 2.0;
        assert!(((e.value - want) / want).abs() < 1e-5, "{} vs {want}", e.value);
        assert_eq!(e.predicted_a, q(2));
        assert_eq!(e.predicted_b, 1);
    }

    #[test]
    fn grid_matches_divided_differences() {
        let cases: [(&[u64], &[u64]); 4] = [(&[2, 2], &[2, 2]), (&[2, 2], &[1, 2]), (&[3, 1], &[1, 1]), (&[2, 3, 2], &[1, 2, 2])];
        for (m, c) in cases {
            for &t in &[10.0, 1e4] {
                let e = cone_region_estimate(m, c, &vec![0.0; m.len()], t, RegionMode::Grid).unwrap();
                let want = oracle(m, c, t);
                assert!(((e.value - want) / want).abs() < 5e-4, "m={m:?} c={c:?} T={t}: {} vs {want}", e.value);
            }
        }
    }

    #[test]
    fn distinct_node_formula() {
        let l = 3.0;
        let r = [0.5, 2.0];
        let mut nodes = [0.0, 0.5, 2.0];
        assert!((simplex_exponential_integral(&r, l) - confluent_dd(&mut nodes, l)).abs() < 1e-10);
    }

    #[test]
    fn monte_carlo_agrees_with_grid() {
        let cases: [(&[u64], &[u64], &[f64]); 3] =
            [(&[2, 2], &[2, 2], &[0.0, 0.0]), (&[2, 2], &[1, 2], &[0.3, -0.2]), (&[2, 3, 2], &[1, 2, 2], &[0.0, 0.0, 0.0])];
        for (m, c, y) in cases {
            let g = cone_region_estimate(m, c, y, 1e3, RegionMode::Grid).unwrap();
            let mc = cone_region_estimate(m, c, y, 1e3, RegionMode::MonteCarlo { samples: 40_000, seed: 3 }).unwrap();
            let se = (g.stderr.powi(2) + mc.stderr.powi(2)).sqrt();
            assert!((g.value - mc.value).abs() < 3.0 * se, "m={m:?} c={c:?}: {} vs {} (se {se})", g.value, mc.value);
        }
    }

    #[test]
    fn monte_carlo_is_reproducible() {
        let mode = RegionMode::MonteCarlo { samples: 5000, seed: 11 };
        let a = cone_region_estimate(&[2, 2], &[1, 1], &[0.0, 0.0], 100.0, mode).unwrap();
        let b = crate::parallel::with_jobs(3, || cone_region_estimate(&[2, 2], &[1, 1], &[0.0, 0.0], 100.0, mode).unwrap());
        assert_eq!(a.value.to_bits(), b.value.to_bits());
    }

    #[test]
    fn shift_rescales_leading_constant() {
        // b = 1 case: the shifted/unshifted ratio tends to e^{l_m(y) - a l_c(y)}.
        let (m, c) = ([3u64, 1], [1u64, 1]);
        let y = [0.4, -0.3];
        let t = 1e6;
        let base = cone_region_estimate(&m, &c, &[0.0, 0.0], t, RegionMode::Grid).unwrap();
        let shifted = cone_region_estimate(&m, &c, &y, t, RegionMode::Grid).unwrap();
        let (lm, lc): (f64, f64) = (3.0 * 0.4 - 0.3, 0.4 - 0.3);
        let want = (lm - 3.0 * lc).exp();
        let got = shifted.value / base.value;
        assert!(((got - want) / want).abs() < 0.01, "{got} vs {want}");
    }

    #[test]
    fn empty_region() {
        let e = cone_region_estimate(&[2], &[1], &[0.0], 1.0, RegionMode::Grid).unwrap();
        assert_eq!(e.value, 0.0);
        let e = cone_region_estimate(&[2], &[1], &[5.0], 10.0, RegionMode::Grid).unwrap();
        assert_eq!(e.value, 0.0);
        assert!(cone_region_estimate(&[0], &[1], &[0.0], 10.0, RegionMode::Grid).is_err());
    }

    #[test]
    fn anticanonical_sweep_shape() {
        let ts: Vec<f64> = (4..=12).map(|k| 10f64.powi(k)).collect();
        let s = region_sweep(&[2, 2], &[2, 2], &[0.0, 0.0], &ts, RegionMode::Grid).unwrap();
        let fit = s.fit.unwrap();
        assert!((fit.b.unwrap() - 2.0).abs() < 0.15, "{fit:?}");
    }

    #[test]
    fn power_exp_branches_agree() {
        for j in 0..4 {
            for &(a, l) in &[(1.0, 12.0), (2.0, 8.0), (1.0, 20.0)] {
                let s = {
                    let mut term = 1.0;
                    let mut sum = 0.0;
                    for i in 0..400 {
                        sum += term / (i as f64 + j as f64 + 1.0);
                        term *= a * l / (i as f64 + 1.0);
                    }
                    (-a * l).exp() * l.powi(j as i32 + 1) * sum
                };
                let got = power_exp_scaled(j, a, l);
                assert!(((got - s) / s).abs() < 1e-10, "j={j} a={a} l={l}: {got} vs {s}");
            }
        }
    }
}
