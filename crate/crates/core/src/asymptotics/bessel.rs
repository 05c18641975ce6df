//! Modified Bessel functions I0 and I1 for real x >= 0.
//!
//! Below `CROSSOVER` the ascending series is summed directly (all terms are
//! positive, so there is no cancellation). Above it the Hankel expansion is
//! truncated at its smallest term, which at x = 15 is already below 1e-13.

use std::f64::consts::PI;

pub const CROSSOVER: f64 = 15.0;

fn series(nu: u32, x: f64) -> f64 {
    let h = 0.5 * x;
    let h2 = h * h;
    let mut term = if nu == 0 { 1.0 } else { h };
    let mut sum = term;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= h2 / (k * (k + nu as f64));
        sum += term;
        if term <= sum * 1e-17 {
            return sum;
        }
    }
}

/// Sum of the Hankel expansion; I_nu(x) ~ e^x / sqrt(2 pi x) * sum.
fn hankel_sum(nu: u32, x: f64) -> f64 {
    let mu = 4.0 * (nu * nu) as f64;
    let mut term = 1.0f64;
    let mut sum = 1.0;
    for k in 1..60 {
        let odd = (2 * k - 1) as f64;
        let next = -term * (mu - odd * odd) / (k as f64 * 8.0 * x);
        if next.abs() >= term.abs() {
            break;
        }
        term = next;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// e^{-x} I_nu(x) for nu in {0, 1}.
pub fn bessel_i_scaled(nu: u32, x: f64) -> f64 {
    debug_assert!(nu <= 1);
    let x = x.abs();
    if x < CROSSOVER {
        series(nu, x) * (-x).exp()
    } else {
        hankel_sum(nu, x) / (2.0 * PI * x).sqrt()
    }
}

pub fn bessel_i0(x: f64) -> f64 {
    let x = x.abs();
    if x < CROSSOVER {
        series(0, x)
    } else {
        bessel_i_scaled(0, x) * x.exp()
    }
}

pub fn bessel_i1(x: f64) -> f64 {
    let s = x.signum();
    let x = x.abs();
    s * if x < CROSSOVER { series(1, x) } else { bessel_i_scaled(1, x) * x.exp() }
}

pub fn ln_bessel_i(nu: u32, x: f64) -> f64 {
    x.abs() + bessel_i_scaled(nu, x).ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotics::quad::adaptive_simpson;

    /// I_nu(x) = (1/pi) int_0^pi e^{x cos t} cos(nu t) dt.
    fn quad_scaled(nu: u32, x: f64) -> f64 {
        let f = |t: f64| (x * (t.cos() - 1.0)).exp() * (nu as f64 * t).cos();
        adaptive_simpson(f, 0.0, PI, 1e-14) / PI
    }

    #[test]
    fn both_branches_match_quadrature() {
        for &x in &[1e-3, 0.5, 1.0, 5.0, 10.0, 14.9, 15.0, 15.1, 20.0, 30.0, 80.0] {
            for nu in 0..=1 {
                let got = bessel_i_scaled(nu, x);
                let want = quad_scaled(nu, x);
                assert!(((got - want) / want).abs() < 1e-11, "nu={nu} x={x}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn known_values() {
        assert!((bessel_i0(1.0) - 1.266_065_877_752_008_4).abs() < 1e-15);
        assert!((bessel_i1(1.0) - 0.565_159_103_992_485_0).abs() < 1e-15);
        assert_eq!(bessel_i0(0.0), 1.0);
        assert_eq!(bessel_i1(0.0), 0.0);
    }

    #[test]
    fn branches_agree_at_crossover() {
        for nu in 0..=1 {
            let a = series(nu, CROSSOVER) * (-CROSSOVER).exp();
            let b = hankel_sum(nu, CROSSOVER) / (2.0 * PI * CROSSOVER).sqrt();
            assert!(((a - b) / a).abs() < 1e-12);
        }
    }
}
