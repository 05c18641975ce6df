//! Standard realizations of the split irreducible types.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{q, zeros, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    G,
}

/// A split Cartan type such as `A4` or `G2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CartanType {
    pub family: Family,
    pub rank: usize,
}

impl CartanType {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let ok = match family {
            Family::A | Family::B | Family::C => rank >= 1,
            Family::D => rank >= 2,
            Family::G => rank == 2,
        };
        if !ok {
            return Err(Error::Validation(format!("no split type {family:?}{rank}")));
        }
        Ok(CartanType { family, rank })
    }

    /// Every type exercised by the positivity sweep.
    pub fn small_types() -> Vec<CartanType> {
        use Family::*;
        [(A, 1), (A, 2), (A, 3), (A, 4), (B, 2), (C, 3), (D, 4), (G, 2)]
            .into_iter()
            .map(|(f, r)| CartanType { family: f, rank: r })
            .collect()
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.family, self.rank)
    }
}

impl FromStr for CartanType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let family = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Family::A,
            Some('B') => Family::B,
            Some('C') => Family::C,
            Some('D') => Family::D,
            Some('G') => Family::G,
            _ => return Err(Error::Parse(format!("unknown Cartan type {s:?}"))),
        };
        let rest = chars.as_str().trim_start_matches('_');
        let rank: usize = rest
            .parse()
            .map_err(|_| Error::Parse(format!("bad rank in Cartan type {s:?}")))?;
        CartanType::new(family, rank)
    }
}

impl Serialize for CartanType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for CartanType {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn e(dim: usize, i: usize) -> Vec<Q> {
    let mut v = zeros(dim);
    v[i] = q(1);
    v
}

fn comb(dim: usize, terms: &[(usize, i64)]) -> Vec<Q> {
    let mut v = zeros(dim);
    for &(i, c) in terms {
        v[i] += q(c);
    }
    v
}

/// Ambient dimension, simple roots and positive roots of the standard model.
pub(crate) fn realize(t: CartanType) -> (usize, Vec<Vec<Q>>, Vec<Vec<Q>>) {
    let n = t.rank;
    match t.family {
        Family::A => {
            let dim = n + 1;
            let simple = (0..n).map(|i| comb(dim, &[(i, 1), (i + 1, -1)])).collect();
            let mut pos = Vec::new();
            for i in 0..dim {
                for j in i + 1..dim {
                    pos.push(comb(dim, &[(i, 1), (j, -1)]));
                }
            }
            (dim, simple, pos)
        }
        Family::B | Family::C | Family::D => {
            let dim = n;
            let mut simple: Vec<Vec<Q>> =
                (0..n - 1).map(|i| comb(dim, &[(i, 1), (i + 1, -1)])).collect();
            simple.push(match t.family {
                Family::B => e(dim, n - 1),
                Family::C => comb(dim, &[(n - 1, 2)]),
                _ => comb(dim, &[(n - 2, 1), (n - 1, 1)]),
            });
            let mut pos = Vec::new();
            for i in 0..dim {
                for j in i + 1..dim {
                    pos.push(comb(dim, &[(i, 1), (j, -1)]));
                    pos.push(comb(dim, &[(i, 1), (j, 1)]));
                }
            }
            for i in 0..dim {
                match t.family {
                    Family::B => pos.push(e(dim, i)),
                    Family::C => pos.push(comb(dim, &[(i, 2)])),
                    _ => {}
                }
            }
            (dim, simple, pos)
        }
        Family::G => {
            // Inside the plane x + y + z = 0; a1 short, a2 long.
            let v = |a: i64, b: i64, c: i64| comb(3, &[(0, a), (1, b), (2, c)]);
            let simple = vec![v(1, -1, 0), v(-2, 1, 1)];
            let pos = vec![
                v(1, -1, 0),
                v(-2, 1, 1),
                v(-1, 0, 1),
                v(0, -1, 1),
                v(1, -2, 1),
                v(-1, -1, 2),
            ];
            (3, simple, pos)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_counts() {
        let count = |s: &str| realize(s.parse().unwrap()).2.len();
        assert_eq!(count("A4"), 10);
        assert_eq!(count("B2"), 4);
        assert_eq!(count("C3"), 9);
        assert_eq!(count("D4"), 12);
        assert_eq!(count("G2"), 6);
    }

    #[test]
    fn parse_and_display() {
        let t: CartanType = "a_3".parse().unwrap();
        assert_eq!(t.to_string(), "A3");
        assert!("G3".parse::<CartanType>().is_err());
        assert!("D1".parse::<CartanType>().is_err());
        assert!("X2".parse::<CartanType>().is_err());
    }
}
