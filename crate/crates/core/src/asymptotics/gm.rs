//! g_m(x) = int_{-1}^{1} (1 - s^2)^{m/2} e^{xs} ds for m >= -1, x > 0.
//!
//! Base cases are closed forms (g_{-1} = pi I0, g_0 = 2 sinh x / x,
//! g_1 = pi I1 / x, g_2 = 4 cosh x / x^2 - 4 sinh x / x^3) and higher m use
//!
//!   x^2 g_m = -m(m-1) g_{m-2} + m(m-2) g_{m-4}.
//!
//! The right-hand side cancels heavily when x is small compared with m, so
//! below `series_cutoff(m)` we sum the even power series
//!
//!   g_m(x) = sum_k x^{2k}/(2k)! B(k + 1/2, m/2 + 1),
//!
//! whose terms are all positive. Everything is computed scaled by e^{-x}.

use std::f64::consts::PI;

use crate::asymptotics::bessel::bessel_i_scaled;
use crate::error::{Error, Result};

/// Recursion is used for x >= this value.
pub fn series_cutoff(m: i64) -> f64 {
    if m <= 1 {
        0.0
    } else {
        (2.0 * m as f64).max(8.0)
    }
}

fn check(m: i64, x: f64) -> Result<()> {
    if m < -1 {
        return Err(Error::Domain(format!("g_m needs m >= -1, got {m}")));
    }
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("g_m needs finite x > 0, got {x}")));
    }
    Ok(())
}

/// g_m(0) = int (1 - s^2)^{m/2} ds, via g_m(0) = m/(m+1) g_{m-2}(0).
fn g_at_zero(m: i64) -> f64 {
    let mut k = if m % 2 == 0 { 0 } else { -1 };
    let mut v = if k == 0 { 2.0 } else { PI };
    while k < m {
        k += 2;
        v *= k as f64 / (k + 1) as f64;
    }
    v
}

/// e^{-x} g_m(x) from the power series.
pub fn g_m_series_scaled(m: i64, x: f64) -> f64 {
    let x2 = x * x;
    let half = m as f64 / 2.0;
    let mut term = g_at_zero(m) * (-x).exp();
    let mut sum = term;
    let mut k = 0.0;
    loop {
        term *= x2 / (4.0 * (k + 1.0) * (k + half + 1.5));
        k += 1.0;
        sum += term;
        if term < sum * 1e-17 {
            return sum;
        }
    }
}

fn base_scaled(m: i64, x: f64) -> f64 {
    // e^{-2x} is harmless to underflow here.
    let em = (-2.0 * x).exp();
    match m {
        -1 => PI * bessel_i_scaled(0, x),
        0 => (1.0 - em) / x,
        1 => PI * bessel_i_scaled(1, x) / x,
        2 => 2.0 * (1.0 + em) / (x * x) - 2.0 * (1.0 - em) / (x * x * x),
        _ => unreachable!(),
    }
}

fn recursion_scaled(m: i64, x: f64) -> f64 {
    // vals[j] holds g_{m0 + 2j}; keep the last two of each parity chain.
    let start = if m % 2 == 0 { 0 } else { -1 };
    let mut prev2 = base_scaled(start, x);
    let mut prev = base_scaled(start + 2, x);
    if m == start {
        return prev2;
    }
    let x2 = x * x;
    let mut k = start + 2;
    while k < m {
        k += 2;
        let kf = k as f64;
        let next = (-kf * (kf - 1.0) * prev + kf * (kf - 2.0) * prev2) / x2;
        prev2 = prev;
        prev = next;
    }
    prev
}

/// e^{-x} g_m(x).
pub fn g_m_scaled(m: i64, x: f64) -> Result<f64> {
    check(m, x)?;
    if m <= 2 && !(m == 2 && x < series_cutoff(2)) {
        return Ok(base_scaled(m, x));
    }
    if x < series_cutoff(m) {
        Ok(g_m_series_scaled(m, x))
    } else {
        Ok(recursion_scaled(m, x))
    }
}

pub fn g_m(m: i64, x: f64) -> Result<f64> {
    Ok(g_m_scaled(m, x)? * x.exp())
}

/// log g_m(x), finite for arbitrarily large x.
pub fn ln_g_m(m: i64, x: f64) -> Result<f64> {
    Ok(x + g_m_scaled(m, x)?.ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotics::bessel::bessel_i1;
    use crate::asymptotics::quad::adaptive_simpson;

    /// s = sin(phi) turns the integral into int cos^{m+1}(phi) e^{x sin phi}.
    fn quad_scaled(m: i64, x: f64) -> f64 {
        let f = |p: f64| p.cos().powi((m + 1) as i32) * (x * (p.sin() - 1.0)).exp();
        adaptive_simpson(f, -PI / 2.0, PI / 2.0, 1e-14)
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn g0_closed_form() {
        assert!((g_m(0, 1.0).unwrap() - 2.0 * 1f64.sinh()).abs() < 1e-14);
    }

    #[test]
    fn g1_is_pi_i1_over_x() {
        for &x in &[0.1, 1.0, 7.5, 15.0, 29.0] {
            assert!(rel(g_m(1, x).unwrap(), PI * bessel_i1(x) / x) < 1e-13);
        }
    }

    #[test]
    fn matches_quadrature() {
        for m in -1..=10 {
            for &x in &[0.05, 0.5, 1.0, 2.0, 5.0, 10.0, 12.5, 19.9, 20.0, 25.0, 30.0] {
                let got = g_m_scaled(m, x).unwrap();
                let want = quad_scaled(m, x);
                assert!(rel(got, want) < 1e-10, "m={m} x={x}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn recursion_residual_at_listed_points() {
        for &x in &[0.5, 2.0, 10.0] {
            let lhs = x * x * g_m(3, x).unwrap() + 6.0 * g_m(1, x).unwrap() - 3.0 * g_m(-1, x).unwrap();
            assert!(lhs.abs() < 1e-9 * x * x * g_m(3, x).unwrap(), "x={x}: {lhs}");
        }
    }

    #[test]
    fn log_variant_survives_overflow() {
        // Laplace at s = 1: g_m(x) ~ 2^{m/2} Gamma(m/2 + 1) x^{-m/2-1} e^x.
        let l = ln_g_m(4, 2000.0).unwrap();
        let want = 2000.0 + 8f64.ln() - 3.0 * 2000f64.ln();
        assert!((l - want).abs() < 1e-2, "{l} vs {want}");
        assert!(g_m(4, 2000.0).unwrap().is_infinite());
    }

    #[test]
    fn domain_errors() {
        assert!(g_m(-2, 1.0).is_err());
        assert!(g_m(3, 0.0).is_err());
        assert!(g_m(3, f64::NAN).is_err());
    }

    #[test]
    fn g_at_zero_values() {
        assert!((g_at_zero(2) - 4.0 / 3.0).abs() < 1e-15);
        assert!((g_at_zero(1) - PI / 2.0).abs() < 1e-15);
    }
}
