//! Translates a_t u Z^3 of the closed U-orbit in SL_3(R) / SL_3(Z), with
//! a_t = exp(t theta) and u uniform over the unit cube of upper-triangular
//! unipotent coordinates.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::lattice::{ball_volume, LatticeSample, UNIPOTENT_BITS};
use crate::error::{invalid, Error, Result};
use crate::parallel::{block_rng, map_blocks, Moments, SAMPLE_BLOCK};
use crate::rational::to_f64;
use crate::regimes::VerdictKind;
use crate::rootsys::CochVec;

/// Trace-zero float coordinates of an A_2 cocharacter.
pub fn theta_coords(theta: &CochVec) -> Result<[f64; 3]> {
    if theta.coords.len() != 3 {
        return Err(Error::Dimension { expected: 3, got: theta.coords.len() });
    }
    let v: Vec<f64> = theta.coords.iter().map(to_f64).collect();
    let mean = v.iter().sum::<f64>() / 3.0;
    Ok([v[0] - mean, v[1] - mean, v[2] - mean])
}

/// Diagonal of a_t = exp(t theta).
pub fn translate_diagonal(theta: [f64; 3], t: f64) -> [f64; 3] {
    theta.map(|x| (t * x).exp())
}

pub fn sample_translate_lattices_sl3(theta: &CochVec, t: f64, n: usize, seed: u64) -> Result<Vec<LatticeSample>> {
    sample_along(theta_coords(theta)?, t, n, seed)
}

fn sample_along(th: [f64; 3], t: f64, n: usize, seed: u64) -> Result<Vec<LatticeSample>> {
    if !t.is_finite() {
        return invalid("t must be finite");
    }
    if n == 0 {
        return invalid("N must be at least 1");
    }
    let a = translate_diagonal(th, t);
    let blocks = map_blocks(n, SAMPLE_BLOCK, |b, range| {
        let mut rng = block_rng(seed, b as u64);
        let mut draw = || rng.gen::<u64>() >> (64 - UNIPOTENT_BITS);
        range
            .map(|_| {
                let k = [draw(), draw(), draw()];
                LatticeSample::unipotent_translate(a, k)
            })
            .collect::<Result<Vec<_>>>()
    });
    let mut out = Vec::with_capacity(n);
    for b in blocks {
        out.extend(b?);
    }
    Ok(out)
}

pub fn escape_fraction(samples: &[LatticeSample], eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps < 1.0) {
        return invalid(format!("eps must lie in (0, 1), got {eps}"));
    }
    if samples.is_empty() {
        return invalid("no samples");
    }
    Ok(samples.iter().filter(|s| s.lambda1 < eps).count() as f64 / samples.len() as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SiegelStatistic {
    pub r: f64,
    #[serde(rename = "N")]
    pub n: u64,
    pub mean: f64,
    pub stderr: f64,
    /// Haar average of the count, equal to the ball volume.
    pub haar_reference: f64,
    pub oracle: String,
}

impl SiegelStatistic {
    pub fn relative_deviation(&self) -> f64 {
        (self.mean - self.haar_reference) / self.haar_reference
    }
}

pub fn siegel_statistic(samples: &[LatticeSample], r: f64) -> Result<SiegelStatistic> {
    if samples.is_empty() {
        return invalid("no samples");
    }
    let parts = map_blocks(samples.len(), SAMPLE_BLOCK, |_, range| {
        let mut m = Moments::default();
        for s in &samples[range] {
            m.push(s.count_in_ball(r)? as f64);
        }
        Ok(m)
    });
    let parts = parts.into_iter().collect::<Result<Vec<Moments>>>()?;
    let m = Moments::merge_all(&parts);
    Ok(SiegelStatistic {
        r,
        n: m.n,
        mean: m.mean(),
        stderr: m.stderr(),
        haar_reference: ball_volume(r),
        oracle: "Siegel mean value theorem (Haar average equals ball volume)".into(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EmpiricalOutcome {
    /// Most samples have a vector shorter than eps.
    Escapes,
    /// Siegel mean within tolerance of the ball volume.
    HaarLike,
    /// Neither escaping nor Haar-like.
    Intermediate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeSettings {
    pub t: f64,
    #[serde(rename = "N")]
    pub n: usize,
    pub r: f64,
    pub eps: f64,
    /// Escape fraction at or above which the ray counts as diverging.
    pub escape_threshold: f64,
    /// Relative Siegel deviation at or below which the ray counts as Haar.
    pub haar_tolerance: f64,
}

impl Default for ProbeSettings {
    fn default() -> Self {
        ProbeSettings { t: 10.0, n: 4000, r: 1.337, eps: 0.1, escape_threshold: 0.5, haar_tolerance: 0.03 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RayProbe {
    pub theta: [f64; 3],
    pub escape_fraction: f64,
    /// Skipped for escaping rays, whose short vectors make the count explode.
    pub siegel: Option<SiegelStatistic>,
    pub mean_lambda1: f64,
    pub outcome: EmpiricalOutcome,
}

/// Samples the ray through theta at time t after rescaling theta to
/// max |theta_i| = 1 (trace-zero part), so every ray moves at unit speed.
pub fn probe_ray(theta: &CochVec, settings: &ProbeSettings, seed: u64) -> Result<RayProbe> {
    let th = theta_coords(theta)?;
    let top = th.iter().fold(0f64, |m, x| m.max(x.abs()));
    if top == 0.0 {
        return invalid("theta must have a nonzero trace-zero part");
    }
    let unit = th.map(|x| x / top);
    let samples = sample_along(unit, settings.t, settings.n, seed)?;
    let escape = escape_fraction(&samples, settings.eps)?;
    let mean_lambda1 = samples.iter().map(|s| s.lambda1).sum::<f64>() / samples.len() as f64;
    let (siegel, outcome) = if escape >= settings.escape_threshold {
        (None, EmpiricalOutcome::Escapes)
    } else {
        let s = siegel_statistic(&samples, settings.r)?;
        let o = if s.relative_deviation().abs() <= settings.haar_tolerance {
            EmpiricalOutcome::HaarLike
        } else {
            EmpiricalOutcome::Intermediate
        };
        (Some(s), o)
    };
    Ok(RayProbe { theta: unit, escape_fraction: escape, siegel, mean_lambda1, outcome })
}

/// Whether an empirical outcome is the one a verdict predicts.
pub fn concordant(verdict: &VerdictKind, outcome: EmpiricalOutcome) -> bool {
    matches!(
        (verdict, outcome),
        (VerdictKind::Diverges, EmpiricalOutcome::Escapes)
            | (VerdictKind::Haar, EmpiricalOutcome::HaarLike)
            | (VerdictKind::ConvergesTo(_), EmpiricalOutcome::Intermediate)
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qvec;

    fn theta(v: &[i64]) -> CochVec {
        CochVec { coords: qvec(v) }
    }

    #[test]
    fn zero_time_contains_e1() {
        let s = sample_translate_lattices_sl3(&theta(&[1, 0, -1]), 0.0, 50, 1).unwrap();
        assert!(s.iter().all(|l| (l.lambda1 - 1.0).abs() < 1e-12 || l.lambda1 < 1.0));
        assert_eq!(LatticeSample::standard().lambda1, 1.0);
        assert_eq!(escape_fraction(&[LatticeSample::standard()], 0.5).unwrap(), 0.0);
        assert!(escape_fraction(&[LatticeSample::standard()], 1.5).is_err());
    }

    #[test]
    fn sampling_is_reproducible_across_thread_counts() {
        let th = theta(&[2, -1, -1]);
        let a = sample_translate_lattices_sl3(&th, 3.0, 3000, 9).unwrap();
        let b = crate::parallel::with_jobs(2, || sample_translate_lattices_sl3(&th, 3.0, 3000, 9).unwrap());
        assert_eq!(a, b);
        let c = sample_translate_lattices_sl3(&th, 3.0, 3000, 10).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn diverging_ray_escapes() {
        let s = sample_translate_lattices_sl3(&theta(&[-1, 0, 1]), 10.0, 500, 1).unwrap();
        assert!(escape_fraction(&s, 0.1).unwrap() >= 0.95);
    }

    #[test]
    fn haar_ray_matches_siegel() {
        let s = sample_translate_lattices_sl3(&theta(&[1, 0, -1]), 10.0, 4000, 42).unwrap();
        let st = siegel_statistic(&s, 1.337).unwrap();
        assert!(st.relative_deviation().abs() < 0.05, "{st:?}");
        assert!(escape_fraction(&s, 0.1).unwrap() < 0.01);
    }

    #[test]
    fn siegel_bound_is_enforced() {
        let s = vec![LatticeSample::standard()];
        assert!(matches!(siegel_statistic(&s, 7.0), Err(Error::Bound(_))));
        assert_eq!(siegel_statistic(&s, 1.1).unwrap().mean, 6.0);
    }
}
