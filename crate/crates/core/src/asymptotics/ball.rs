//! Integrals of e^{<v0, x>} over balls and over cone-restricted balls.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::asymptotics::bessel::bessel_i_scaled;
use crate::asymptotics::gm::ln_g_m;
use crate::asymptotics::quad::adaptive_simpson;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BallIntegral {
    pub n: usize,
    pub v0: Vec<f64>,
    #[serde(rename = "R")]
    pub r: f64,
    pub exact: f64,
    pub asymptote: f64,
    pub ratio: f64,
    pub ln_exact: f64,
    pub ln_asymptote: f64,
}

/// Volume of the unit ball in R^k.
pub fn unit_ball_volume(k: usize) -> f64 {
    let (mut v, mut j) = if k % 2 == 0 { (1.0, 0) } else { (2.0, 1) };
    while j < k {
        j += 2;
        v *= 2.0 * PI / j as f64;
    }
    v
}

/// int_{|x| <= R} e^{<v0, x>} dx in R^n.
///
/// Slicing perpendicular to v0 gives nu_{n-1} R^n g_{n-1}(|v0| R); the
/// leading term is (2 pi R / |v0|)^{(n-1)/2} e^{|v0| R} / |v0|.
pub fn ball_exponential_integral(v0: &[f64], n: usize, r: f64) -> Result<BallIntegral> {
    if v0.len() != n {
        return Err(Error::Dimension { expected: n, got: v0.len() });
    }
    if n == 0 {
        return Err(Error::Domain("dimension must be positive".into()));
    }
    let v = v0.iter().map(|x| x * x).sum::<f64>().sqrt();
    if !(v > 0.0) || !v.is_finite() {
        return Err(Error::Domain("v0 must be a nonzero finite vector".into()));
    }
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::Domain(format!("radius must be positive, got {r}")));
    }
    let x = v * r;
    let ln_exact = unit_ball_volume(n - 1).ln() + n as f64 * r.ln() + ln_g_m(n as i64 - 1, x)?;
    let half = (n as f64 - 1.0) / 2.0;
    let ln_asymptote = half * (2.0 * PI * r / v).ln() + x - v.ln();
    Ok(BallIntegral {
        n,
        v0: v0.to_vec(),
        r,
        exact: ln_exact.exp(),
        asymptote: ln_asymptote.exp(),
        ratio: (ln_exact - ln_asymptote).exp(),
        ln_exact,
        ln_asymptote,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShiftedConeBall {
    #[serde(rename = "R")]
    pub r: f64,
    /// Both integrals carry the factor e^{-|v0| R}.
    pub cone_scaled: f64,
    pub ball_scaled: f64,
    pub ratio: f64,
}

/// int_0^L e^{a(rho - L)} rho d rho.
fn radial(a: f64, l: f64) -> f64 {
    let al = a * l;
    if al.abs() < 0.5 {
        // sum_k (-a)^k / k! * L^{k+2} / ((k+1)(k+2))
        let mut term = l * l;
        let mut sum = 0.0;
        for k in 0..30 {
            let kf = k as f64;
            sum += term / ((kf + 1.0) * (kf + 2.0));
            term *= -al / (kf + 1.0);
        }
        sum
    } else {
        l / a + (-al).exp_m1() / (a * a)
    }
}

/// The planar integral of e^{<v0, x>} over B(0, R) intersected with the
/// cone of half-angle `half_angle` around v0 with apex `apex` (|apex| < R),
/// compared with the integral over the whole disc.
pub fn shifted_cone_ball_2d(v0: [f64; 2], apex: [f64; 2], half_angle: f64, r: f64) -> Result<ShiftedConeBall> {
    let v = v0[0].hypot(v0[1]);
    if !(v > 0.0) {
        return Err(Error::Domain("v0 must be nonzero".into()));
    }
    let p2 = apex[0] * apex[0] + apex[1] * apex[1];
    if p2 >= r * r {
        return Err(Error::Domain("cone apex must lie inside the ball".into()));
    }
    if !(half_angle > 0.0 && half_angle < PI) {
        return Err(Error::Domain("half angle must be in (0, pi)".into()));
    }
    let axis = v0[1].atan2(v0[0]);
    let vp = v0[0] * apex[0] + v0[1] * apex[1];
    let integrand = |psi: f64| {
        let u = [psi.cos(), psi.sin()];
        let pu = apex[0] * u[0] + apex[1] * u[1];
        let len = -pu + (pu * pu - p2 + r * r).sqrt();
        let a = v0[0] * u[0] + v0[1] * u[1];
        // e^{<v0, apex + len u> - |v0| R} <= 1.
        (vp + a * len - v * r).exp() * radial(a, len)
    };
    let cone_scaled = adaptive_simpson(integrand, axis - half_angle, axis + half_angle, 1e-11);
    let ball_scaled = 2.0 * PI * r * bessel_i_scaled(1, v * r) / v;
    Ok(ShiftedConeBall { r, cone_scaled, ball_scaled, ratio: cone_scaled / ball_scaled })
}
