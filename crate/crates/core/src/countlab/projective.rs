//! Rational points of P^{n-1}(Q) of Euclidean height at most T.

use rayon::prelude::*;

use super::arith::{coprime_in_range, isqrt, signed_divisors, squared_bound, Sieve};
use super::fit::CountSeries;
use crate::error::{invalid, Result};

fn gcd(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}

/// Counts z in [-zmax, zmax] with gcd(g, z) = 1.
fn last_coordinate(g: u64, zmax: u64, sieve: &Sieve) -> u64 {
    match g {
        0 => {
            if zmax >= 1 {
                2
            } else {
                0
            }
        }
        1 => 2 * zmax + 1,
        _ => {
            let divs = signed_divisors(&sieve.primes_of(g as usize));
            coprime_in_range(-(zmax as i64), zmax as i64, &divs) as u64
        }
    }
}

fn count_rec(dims_left: usize, rem: u64, g: u64, sieve: &Sieve) -> u64 {
    let r = isqrt(rem);
    if dims_left == 1 {
        return last_coordinate(g, r, sieve);
    }
    // x and -x give the same gcd and remainder.
    let mut total = count_rec(dims_left - 1, rem, g, sieve);
    for x in 1..=r {
        total += 2 * count_rec(dims_left - 1, rem - x * x, gcd(g, x), sieve);
    }
    total
}

/// #{primitive v in Z^n : |v| <= T} / {+-1}, by enumeration with a gcd filter.
pub fn count_projective(n: usize, t: f64) -> Result<u64> {
    if n < 2 {
        return invalid("projective counts need n >= 2");
    }
    if !(t >= 1.0) {
        return Ok(0);
    }
    let b = squared_bound(t);
    let r = isqrt(b);
    let sieve = Sieve::new(r as usize + 1);
    let total: u64 = (0..=r)
        .into_par_iter()
        .map(|x| {
            let w = if x == 0 { 1 } else { 2 };
            w * count_rec(n - 1, b - x * x, x, &sieve)
        })
        .sum();
    Ok(total / 2)
}

/// #{v in Z^n : 0 < |v|^2 <= b}.
fn nonzero_lattice_points(n: usize, b: u64) -> u64 {
    fn all(n: usize, b: u64) -> u64 {
        let r = isqrt(b);
        if n == 1 {
            return 2 * r + 1;
        }
        (1..=r).map(|x| 2 * all(n - 1, b - x * x)).sum::<u64>() + all(n - 1, b)
    }
    all(n, b) - 1
}

/// The same count through Moebius inversion over plain lattice counts.
pub fn count_projective_mobius(n: usize, t: f64) -> Result<u64> {
    if n < 2 {
        return invalid("projective counts need n >= 2");
    }
    if !(t >= 1.0) {
        return Ok(0);
    }
    let b = squared_bound(t);
    let r = isqrt(b);
    let sieve = Sieve::new(r as usize + 1);
    let total: i64 = (1..=r)
        .into_par_iter()
        .map(|d| {
            let mu = sieve.mobius(d as usize);
            if mu == 0 {
                0
            } else {
                mu * nonzero_lattice_points(n, b / (d * d)) as i64
            }
        })
        .sum();
    Ok(total as u64 / 2)
}

pub fn projective_series(n: usize, ts: &[f64]) -> Result<CountSeries> {
    let pts = ts.iter().map(|&t| Ok((t, count_projective(n, t)?))).collect::<Result<Vec<_>>>()?;
    Ok(CountSeries::new(pts))
}
