//! Lifts of the closed horocycle {x + i} of SL_2(Z) \ H^2 passing near i.
//!
//! The lifts are the line y = 1 and, for each coprime p/q with q >= 1, the
//! horocycle tangent to R at p/q with Euclidean diameter 1/q^2. The signed
//! distance from z = x + iy to the horocycle at xi of diameter h is
//! ln(|z - xi|^2 / (y h)), which at z = i is ln(p^2 + q^2) >= 0. So the lift
//! at p/q meets the closed ball B(i, R) iff p^2 + q^2 <= e^R.

use serde::{Deserialize, Serialize};

use super::arith::{coprime_in_range, isqrt, signed_divisors, Sieve};
use super::fit::CountSeries;
use crate::error::{invalid, Result};

/// Hyperbolic distance (curvature -1) from z = x + iy to the horocycle
/// tangent at `xi` with Euclidean diameter `h`.
pub fn distance_to_horocycle(x: f64, y: f64, xi: f64, h: f64) -> f64 {
    (((x - xi).powi(2) + y * y) / (y * h)).ln().abs()
}

/// Largest integer at most e^R, corrected against rounding in exp.
fn exp_floor(r: f64) -> u64 {
    let mut b = r.exp().floor() as u64;
    while b > 0 && (b as f64).ln() > r {
        b -= 1;
    }
    while ((b + 1) as f64).ln() <= r {
        b += 1;
    }
    b
}

pub fn count_horocycle_lifts(r: f64) -> Result<u64> {
    if !(r >= 0.0) || !r.is_finite() {
        return invalid(format!("radius must be a finite nonnegative number, got {r}"));
    }
    let b = exp_floor(r);
    let qmax = isqrt(b);
    let sieve = Sieve::new(qmax as usize + 1);
    let mut total = 1u64;
    for q in 1..=qmax {
        let pmax = isqrt(b - q * q) as i64;
        let n = if q == 1 {
            2 * pmax + 1
        } else {
            coprime_in_range(-pmax, pmax, &signed_divisors(&sieve.primes_of(q as usize)))
        };
        total += n as u64;
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HorocycleSeries {
    #[serde(flatten)]
    pub series: CountSeries,
    /// N(R) e^{-R} for each point.
    pub normalized: Vec<f64>,
}

/// N(R) on R = r_min, r_min + step, ..., up to r_max.
pub fn horocycle_series(r_min: f64, r_max: f64, step: f64) -> Result<HorocycleSeries> {
    if !(step > 0.0) || !(r_max >= r_min) {
        return invalid("need step > 0 and Rmax >= Rmin");
    }
    let n = ((r_max - r_min) / step + 1e-9).floor() as usize;
    let mut pts = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let r = r_min + i as f64 * step;
        pts.push((r, count_horocycle_lifts(r)?));
    }
    let normalized = pts.iter().map(|&(r, c)| c as f64 * (-r).exp()).collect();
    Ok(HorocycleSeries { series: CountSeries::new(pts), normalized })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::countlab::fit::{fit_growth, GrowthModel};
    use num_integer::Integer;

    #[test]
    fn two_lifts_through_base_point() {
        assert_eq!(count_horocycle_lifts(0.0).unwrap(), 2);
        assert!(distance_to_horocycle(0.0, 1.0, 0.0, 1.0).abs() < 1e-15);
        assert!(count_horocycle_lifts(-1.0).is_err());
    }

    #[test]
    fn closed_form_distance_matches_enumeration() {
        for &r in &[0.5, 1.7, 3.0, 5.5] {
            let mut direct = 1;
            for q in 1i64..40 {
                for p in -60i64..=60 {
                    if p.gcd(&q) == 1 {
                        let d = distance_to_horocycle(0.0, 1.0, p as f64 / q as f64, 1.0 / (q * q) as f64);
                        if d <= r {
                            direct += 1;
                        }
                    }
                }
            }
            assert_eq!(count_horocycle_lifts(r).unwrap(), direct, "R={r}");
        }
    }

    #[test]
    fn monotone_and_exponential() {
        let s = horocycle_series(8.0, 14.0, 0.5).unwrap();
        assert!(s.series.is_nondecreasing());
        let f = fit_growth(&s.series, GrowthModel::Exponential).unwrap();
        assert!((f.rate.unwrap() - 1.0).abs() < 0.05, "{f:?}");
        // The limit is 3/pi for the count of coprime pairs in a half disc.
        let last = *s.normalized.last().unwrap();
        assert!((last - 3.0 / std::f64::consts::PI).abs() < 0.01, "{last}");
    }
}
