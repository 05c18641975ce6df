//! Small arithmetic helpers for the enumerations.

use num_integer::{Integer, Roots};

/// Smallest-prime-factor table on 0..=n.
pub struct Sieve {
    spf: Vec<u32>,
}

impl Sieve {
    pub fn new(n: usize) -> Self {
        let mut spf = vec![0u32; n + 1];
        for i in 2..=n {
            if spf[i] == 0 {
                let mut j = i;
                while j <= n {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
        }
        Sieve { spf }
    }

    /// Distinct prime factors of 1 <= n <= limit.
    pub fn primes_of(&self, mut n: usize) -> Vec<u64> {
        let mut out = Vec::new();
        while n > 1 {
            let p = self.spf[n] as usize;
            out.push(p as u64);
            while n % p == 0 {
                n /= p;
            }
        }
        out
    }

    pub fn mobius(&self, n: usize) -> i64 {
        let mut m = n;
        let mut sign = 1;
        while m > 1 {
            let p = self.spf[m] as usize;
            m /= p;
            if m % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        sign
    }
}

/// Squarefree divisors d of a number with the given distinct primes, with mu(d).
pub fn signed_divisors(primes: &[u64]) -> Vec<(i64, i64)> {
    let mut out = vec![(1i64, 1i64)];
    for &p in primes {
        let cur = out.len();
        for i in 0..cur {
            let (d, mu) = out[i];
            out.push((d * p as i64, -mu));
        }
    }
    out
}

/// floor(n / d) for d > 0, rounding toward minus infinity.
fn floor_div(n: i64, d: i64) -> i64 {
    Integer::div_floor(&n, &d)
}

/// Number of x in [lo, hi] with gcd(x, g) = 1, given the signed divisors of g.
pub fn coprime_in_range(lo: i64, hi: i64, divisors: &[(i64, i64)]) -> i64 {
    if hi < lo {
        return 0;
    }
    divisors
        .iter()
        .map(|&(d, mu)| mu * (floor_div(hi, d) - floor_div(lo - 1, d)))
        .sum()
}

/// Largest k with k^e <= n.
pub fn iroot(n: u128, e: u32) -> u128 {
    if e == 1 {
        return n;
    }
    let mut k = (n as f64).powf(1.0 / e as f64) as u128;
    while k > 0 && pow_sat(k, e) > n {
        k -= 1;
    }
    while pow_sat(k + 1, e) <= n {
        k += 1;
    }
    k
}

/// k^e, saturating at u128::MAX.
pub fn pow_sat(k: u128, e: u32) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..e {
        acc = acc.saturating_mul(k);
    }
    acc
}

/// floor(T^2) as an integer bound on squared norms.
pub fn squared_bound(t: f64) -> u64 {
    if !(t >= 0.0) {
        return 0;
    }
    (t * t).floor() as u64
}

pub fn isqrt(n: u64) -> u64 {
    n.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coprime_counts_by_brute_force() {
        let s = Sieve::new(100);
        for g in 1..=60usize {
            let divs = signed_divisors(&s.primes_of(g));
            for (lo, hi) in [(-17, 23), (0, 0), (5, 4), (-3, -1), (1, 1)] {
                let want = (lo..=hi).filter(|x: &i64| x.gcd(&(g as i64)) == 1).count() as i64;
                assert_eq!(coprime_in_range(lo, hi, &divs), want, "g={g} [{lo},{hi}]");
            }
        }
    }

    #[test]
    fn mobius_values() {
        let s = Sieve::new(30);
        let mu: Vec<i64> = (1..=10).map(|n| s.mobius(n)).collect();
        assert_eq!(mu, vec![1, -1, -1, 0, -1, 1, -1, 0, 0, 1]);
    }

    #[test]
    fn integer_roots() {
        assert_eq!(iroot(1_000_000, 2), 1000);
        assert_eq!(iroot(999_999, 2), 999);
        assert_eq!(iroot(27, 3), 3);
        assert_eq!(iroot(26, 3), 2);
        assert_eq!(iroot(5, 1), 5);
        assert_eq!(iroot(0, 2), 0);
        assert_eq!(squared_bound(1.5), 2);
        assert_eq!(squared_bound(0.5), 0);
    }
}
