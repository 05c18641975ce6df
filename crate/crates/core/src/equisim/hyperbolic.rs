//! Closed horocycles of SL_2(Z) \ H^2 and their reduction to the standard
//! fundamental domain.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

const BOUNDARY_TOL: f64 = 1e-12;
const MAX_STEPS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HPoint {
    pub x: f64,
    pub y: f64,
    pub reduced: bool,
}

impl HPoint {
    pub fn in_fundamental_domain(x: f64, y: f64) -> bool {
        x.abs() <= 0.5 + BOUNDARY_TOL && x * x + y * y >= 1.0 - BOUNDARY_TOL
    }
}

/// Moves x + iy into |x| <= 1/2, |z| >= 1 by translations and z -> -1/z.
pub fn reduce_point(mut x: f64, mut y: f64) -> Result<HPoint> {
    if !(y > 0.0) || !x.is_finite() || !y.is_finite() {
        return invalid(format!("not a point of the upper half-plane: {x} + {y}i"));
    }
    for _ in 0..MAX_STEPS {
        x -= x.round();
        let r2 = x * x + y * y;
        if r2 >= 1.0 - BOUNDARY_TOL {
            return Ok(HPoint { x, y, reduced: true });
        }
        x = -x / r2;
        y /= r2;
    }
    Err(Error::Bound(format!("reduction did not terminate for {x} + {y}i")))
}

/// The N points k/N + i y0 of the closed horocycle at height y0, reduced.
pub fn sample_horocycle_sl2(y0: f64, n: usize) -> Result<Vec<HPoint>> {
    if !(y0 > 0.0) || !y0.is_finite() {
        return invalid(format!("y0 must be positive, got {y0}"));
    }
    if n == 0 {
        return invalid("N must be at least 1");
    }
    (0..n).into_par_iter().map(|k| reduce_point(k as f64 / n as f64, y0)).collect()
}

/// Fraction of points above height h.
pub fn cusp_mass(points: &[HPoint], h: f64) -> Result<f64> {
    if !(h >= 1.0) {
        return invalid(format!("cusp height must be at least 1, got {h}"));
    }
    if points.is_empty() {
        return invalid("no points");
    }
    if let Some(p) = points.iter().find(|p| !p.reduced) {
        return invalid(format!("point {} + {}i is not reduced", p.x, p.y));
    }
    Ok(points.iter().filter(|p| p.y > h).count() as f64 / points.len() as f64)
}

/// Haar mass of {Im z > h} in the fundamental domain: (1/h) / (pi/3).
pub fn cusp_area_fraction(h: f64) -> f64 {
    3.0 / (PI * h)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CuspReport {
    pub y0: f64,
    #[serde(rename = "N")]
    pub n: usize,
    pub h: f64,
    pub fraction: f64,
    /// Binomial standard error of the fraction.
    pub stderr: f64,
    pub target: f64,
    pub oracle: String,
}

pub fn cusp_report(y0: f64, n: usize, h: f64) -> Result<CuspReport> {
    let pts = sample_horocycle_sl2(y0, n)?;
    let fraction = cusp_mass(&pts, h)?;
    Ok(CuspReport {
        y0,
        n,
        h,
        fraction,
        stderr: (fraction * (1.0 - fraction) / n as f64).sqrt(),
        target: cusp_area_fraction(h),
        oracle: "hyperbolic cusp area 3/(pi h)".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn trivial_samples() {
        let one = sample_horocycle_sl2(1.0, 1).unwrap();
        assert_eq!(one, vec![HPoint { x: 0.0, y: 1.0, reduced: true }]);
        let two = sample_horocycle_sl2(1.0, 2).unwrap();
        assert!(two.iter().all(|p| p.reduced && HPoint::in_fundamental_domain(p.x, p.y)));
        assert_eq!(cusp_mass(&vec![one[0]; 5], 2.0).unwrap(), 0.0);
        assert!(cusp_mass(&one, 0.5).is_err());
        assert!(sample_horocycle_sl2(0.0, 3).is_err());
    }

    #[test]
    fn deep_horocycle_fills_cusp_by_area() {
        let pts = sample_horocycle_sl2((-10f64).exp(), 100_000).unwrap();
        let f2 = cusp_mass(&pts, 2.0).unwrap();
        assert!((f2 - cusp_area_fraction(2.0)).abs() < 0.01, "{f2}");
        let f4 = cusp_mass(&pts, 4.0).unwrap();
        assert!((f2 / f4 - 2.0).abs() < 0.15, "{f2} {f4}");
    }

    #[test]
    fn high_horocycle_stays_in_cusp() {
        // Above height 1 nothing moves: all mass sits at y0.
        let pts = sample_horocycle_sl2(3.0, 100).unwrap();
        assert_eq!(cusp_mass(&pts, 2.0).unwrap(), 1.0);
    }

    /// Moebius action of [[a, b], [c, d]].
    fn act(m: [i64; 4], x: f64, y: f64) -> (f64, f64) {
        let [a, b, c, d] = m.map(|v| v as f64);
        let den = (c * x + d).powi(2) + (c * y).powi(2);
        (((a * x + b) * (c * x + d) + a * c * y * y) / den, y / den)
    }

    proptest! {
        #[test]
        fn reduction_is_idempotent(x in -5.0f64..5.0, ly in -6.0f64..2.0) {
            let p = reduce_point(x, ly.exp()).unwrap();
            prop_assert!(HPoint::in_fundamental_domain(p.x, p.y));
            let q = reduce_point(p.x, p.y).unwrap();
            prop_assert!((q.x - p.x).abs() < 1e-12 && (q.y - p.y).abs() < 1e-12 * p.y);
        }

        #[test]
        fn reduction_is_orbit_invariant(x in -0.5f64..0.5, y in 1.2f64..4.0, k in -3i64..3) {
            // Interior points of the domain come back to themselves from an orbit point.
            prop_assume!(x * x + y * y > 1.05 && x.abs() < 0.49);
            let (gx, gy) = act([k, -1, 1, 0], x, y);
            let p = reduce_point(gx, gy).unwrap();
            prop_assert!((p.x - x).abs() < 1e-9 && (p.y - y).abs() < 1e-9, "{:?} vs {} {}", p, x, y);
        }
    }
}
