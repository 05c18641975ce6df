//! Rational points on the full flag variety of SL_3 with anticanonical-type
//! heights.
//!
//! A flag (line in plane) in Q^3 is a pair of primitive vectors v, w modulo
//! signs with v.w = 0: v spans the line and w is the normal of the plane
//! (its Pluecker coordinates). The height attached to c1 lambda_1 + c2 lambda_2
//! is |v|^{c1} |w|^{c2}, which is compared through the exact integer test
//! N_v^{c1} N_w^{c2} <= floor(T^2) with N = squared norm.
//!
//! For fixed v, the admissible w are the primitive vectors of the rank-2
//! lattice v^perp (determinant N_v) in a disc, counted row by row in a
//! Gauss-reduced basis with Moebius inclusion-exclusion along each row. Both
//! loop orders are available, and the default splits the sum hyperbola-style
//! at N_v^{c1} ~ T so that each side only visits short outer vectors.

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::arith::{coprime_in_range, iroot, pow_sat, signed_divisors, squared_bound, Sieve};
use super::fit::CountSeries;
use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FlagOrder {
    /// Line outer for short lines, plane outer for the rest.
    Split,
    /// Every line in the outer loop.
    LineOuter,
    /// Every plane normal in the outer loop.
    PlaneOuter,
}

type V3 = [i128; 3];

fn dot(a: &V3, b: &V3) -> i128 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Gauss-reduced basis (u1, u2) of v^perp for primitive v; returns the
/// form coefficients (A, B, C) of |x u1 + y u2|^2 = A x^2 + 2Bxy + C y^2.
fn perp_form(v: &[i64; 3]) -> (i128, i128, i128) {
    let (a, b, c) = (v[0] as i128, v[1] as i128, v[2] as i128);
    let (mut u1, mut u2): (V3, V3) = if a == 0 && b == 0 {
        ([1, 0, 0], [0, 1, 0])
    } else {
        let eg = a.extended_gcd(&b);
        let (g, s, t) = (eg.gcd, eg.x, eg.y);
        ([b / g, -a / g, 0], [-c * s, -c * t, g])
    };
    loop {
        if dot(&u2, &u2) < dot(&u1, &u1) {
            std::mem::swap(&mut u1, &mut u2);
        }
        let n1 = dot(&u1, &u1);
        let m = round_div(dot(&u1, &u2), n1);
        if m == 0 {
            break;
        }
        for i in 0..3 {
            u2[i] -= m * u1[i];
        }
        if dot(&u2, &u2) >= n1 {
            break;
        }
    }
    (dot(&u1, &u1), dot(&u1, &u2), dot(&u2, &u2))
}

/// Nearest integer to p/q for q > 0.
fn round_div(p: i128, q: i128) -> i128 {
    Integer::div_floor(&(2 * p + q), &(2 * q))
}

fn isqrt_u128(n: u128) -> u128 {
    iroot(n, 2)
}

/// Primitive vectors of v^perp modulo sign with squared norm at most `w`.
fn count_perp(form: (i128, i128, i128), det: i128, w: u128, sieve: &Sieve) -> u64 {
    let (a, b, c) = form;
    let w = w as i128;
    if w < a {
        return 0;
    }
    let q = |x: i128, y: i128| a * x * x + 2 * b * x * y + c * y * y;
    // The row y carries points iff det y^2 <= A W.
    let aw = a * w;
    let mut ymax = isqrt_u128((aw / det) as u128) as i128;
    while det * (ymax + 1) * (ymax + 1) <= aw {
        ymax += 1;
    }
    while ymax > 0 && det * ymax * ymax > aw {
        ymax -= 1;
    }
    // (1, 0) represents the class of +-u1.
    let mut total: u64 = 1;
    for y in 1..=ymax {
        let disc = (aw - det * y * y) as f64;
        let centre = -(b * y) as f64 / a as f64;
        let half = disc.sqrt() / a as f64;
        let mut lo = (centre - half).ceil() as i128;
        let mut hi = (centre + half).floor() as i128;
        while q(lo - 1, y) <= w {
            lo -= 1;
        }
        while lo <= hi && q(lo, y) > w {
            lo += 1;
        }
        while q(hi + 1, y) <= w {
            hi += 1;
        }
        while hi >= lo && q(hi, y) > w {
            hi -= 1;
        }
        if hi < lo {
            continue;
        }
        let n = if y == 1 {
            hi - lo + 1
        } else {
            let divs = signed_divisors(&sieve.primes_of(y as usize));
            coprime_in_range(lo as i64, hi as i64, &divs) as i128
        };
        total += n as u64;
    }
    total
}

struct Counter {
    b: u128,
    sieve: Sieve,
}

impl Counter {
    fn new(t: f64, c1: u32, c2: u32) -> Self {
        let b = squared_bound(t) as u128;
        let wmax = iroot(b, c1.min(c2)) as f64;
        let limit = (1.2 * wmax).sqrt() as usize + 2;
        Counter { b, sieve: Sieve::new(limit) }
    }

    /// Sum over canonical primitive outer vectors u with N_u <= max_outer of
    /// #{inner primitive in u^perp : lo < N <= W(u)}, where W(u) is the largest
    /// N with N_u^{c_out} N^{c_in} <= B.
    fn sweep(&self, max_outer: u128, c_out: u32, c_in: u32, lo: u128) -> u64 {
        if max_outer == 0 {
            return 0;
        }
        let r = isqrt_u128(max_outer) as i64;
        (0..=r)
            .into_par_iter()
            .map(|x| {
                let mut acc = 0u64;
                let rx = max_outer - (x * x) as u128;
                let ry = isqrt_u128(rx) as i64;
                let ylo = if x == 0 { 0 } else { -ry };
                for y in ylo..=ry {
                    let rz = isqrt_u128(rx - (y * y) as u128) as i64;
                    // (0, 0, z) is primitive and canonical only for z = 1.
                    let (zlo, zhi) = if x == 0 && y == 0 { (1, 1.min(rz)) } else { (-rz, rz) };
                    for z in zlo..=zhi {
                        if x.gcd(&y).gcd(&z) != 1 {
                            continue;
                        }
                        let v = [x, y, z];
                        let nv = (x * x + y * y + z * z) as u128;
                        let outer = pow_sat(nv, c_out);
                        if outer > self.b {
                            continue;
                        }
                        let w = iroot(self.b / outer, c_in);
                        if w <= lo {
                            continue;
                        }
                        let form = perp_form(&v);
                        let det = nv as i128;
                        let hi_count = count_perp(form, det, w, &self.sieve);
                        let lo_count = if lo == 0 { 0 } else { count_perp(form, det, lo, &self.sieve) };
                        acc += hi_count - lo_count;
                    }
                }
                acc
            })
            .sum()
    }
}

pub fn count_flags_sl3_with(c1: u32, c2: u32, t: f64, order: FlagOrder) -> Result<u64> {
    if c1 == 0 || c2 == 0 {
        return invalid("height exponents must be positive");
    }
    if !(t >= 1.0) {
        return Ok(0);
    }
    let counter = Counter::new(t, c1, c2);
    let b = counter.b;
    let all_lines = iroot(b, c1);
    let v0 = match order {
        FlagOrder::LineOuter => all_lines,
        FlagOrder::PlaneOuter => 0,
        FlagOrder::Split => iroot(isqrt_u128(b), c1),
    };
    // Pairs with N_v <= v0, lines outer.
    let first = counter.sweep(v0, c1, c2, 0);
    // Pairs with N_v > v0, planes outer.
    let second = if v0 >= all_lines {
        0
    } else {
        let max_w = iroot(b / pow_sat(v0 + 1, c1), c2);
        counter.sweep(max_w, c2, c1, v0)
    };
    Ok(first + second)
}

/// #{flags with H(line)^{c1} H(plane)^{c2} <= T}.
pub fn count_flags_sl3(c1: u32, c2: u32, t: f64) -> Result<u64> {
    count_flags_sl3_with(c1, c2, t, FlagOrder::Split)
}

pub fn flags_series(c1: u32, c2: u32, ts: &[f64]) -> Result<CountSeries> {
    let pts = ts.iter().map(|&t| Ok((t, count_flags_sl3(c1, c2, t)?))).collect::<Result<Vec<_>>>()?;
    Ok(CountSeries::new(pts))
}
