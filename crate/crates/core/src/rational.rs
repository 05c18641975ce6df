//! Exact rational scalars, vectors and small dense matrices.
//!
//! Everything in the root-datum layer is computed over `BigRational` so that
//! sign tests and integrality checks never need a tolerance.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serializer};

use crate::error::{Error, Result};

/// Exact rational scalar.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qvec(xs: &[i64]) -> Vec<Q> {
    xs.iter().map(|&x| q(x)).collect()
}

/// Parses `"p/q"`, `"p"` or a finite decimal such as `"-0.25"`.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Q::new(n, d));
    }
    if let Some((int, dec)) = s.split_once('.') {
        if dec.is_empty() || !dec.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = int.starts_with('-');
        let int_part: BigInt = match int.trim_start_matches(['-', '+']) {
            "" => BigInt::zero(),
            digits => digits.parse().map_err(|_| bad())?,
        };
        let scale = BigInt::from(10u32).pow(dec.len() as u32);
        let frac_part: BigInt = dec.parse().map_err(|_| bad())?;
        let mag = Q::new(int_part * &scale + frac_part, scale);
        return Ok(if neg { -mag } else { mag });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Q::from_integer(n))
}

/// Parses a comma separated list of rationals, e.g. `"6,7,-12,9,-10"`.
pub fn parse_qlist(s: &str) -> Result<Vec<Q>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(parse_q).collect()
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub fn is_integer(x: &Q) -> bool {
    x.denom().is_one()
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

/// `a^T G b`.
pub fn bilinear(a: &[Q], gram: &[Vec<Q>], b: &[Q]) -> Q {
    let mut acc = Q::zero();
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_zero() {
                acc += ai * &gram[i][j] * bj;
            }
        }
    }
    acc
}

pub fn add(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(c: &Q, a: &[Q]) -> Vec<Q> {
    a.iter().map(|x| c * x).collect()
}

pub fn zeros(n: usize) -> Vec<Q> {
    vec![Q::zero(); n]
}

pub fn is_zero_vec(a: &[Q]) -> bool {
    a.iter().all(Zero::is_zero)
}

pub fn identity(n: usize) -> Vec<Vec<Q>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
        .collect()
}

pub fn mat_mul(a: &[Vec<Q>], b: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(Q::zero(), |acc, k| acc + &row[k] * &b[k][j]))
                .collect()
        })
        .collect()
}

pub fn transpose(a: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let cols = a.first().map_or(0, Vec::len);
    (0..cols).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect()
}

/// Determinant by Gaussian elimination over Q.
pub fn det(a: &[Vec<Q>]) -> Q {
    let n = a.len();
    let mut m: Vec<Vec<Q>> = a.to_vec();
    let mut det = Q::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Q::zero();
        };
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        let pivot = m[col][col].clone();
        det *= &pivot;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] / &pivot;
            for c in col..n {
                let delta = &f * &m[col][c];
                m[r][c] -= delta;
            }
        }
    }
    det
}

/// Solves `A X = B` for square `A`; `None` when `A` is singular.
pub fn solve(a: &[Vec<Q>], b: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = a.len();
    let k = b.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<Q>> = a
        .iter()
        .zip(b)
        .map(|(ar, br)| ar.iter().chain(br.iter()).cloned().collect())
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(p, col);
        let pivot = m[col][col].clone();
        for c in col..n + k {
            m[col][c] = &m[col][c] / &pivot;
        }
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            for c in col..n + k {
                let delta = &f * &m[col][c];
                m[r][c] -= delta;
            }
        }
    }
    Some(m.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn inverse(a: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    solve(a, &identity(a.len()))
}

/// Sylvester's criterion on leading principal minors.
pub fn is_positive_definite(a: &[Vec<Q>]) -> bool {
    (1..=a.len()).all(|k| {
        let minor: Vec<Vec<Q>> = a[..k].iter().map(|row| row[..k].to_vec()).collect();
        det(&minor).is_positive()
    })
}

pub fn is_symmetric(a: &[Vec<Q>]) -> bool {
    let n = a.len();
    a.iter().all(|row| row.len() == n) && (0..n).all(|i| (0..i).all(|j| a[i][j] == a[j][i]))
}

pub fn fmt_vec(v: &[Q]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

/// Serde adapters writing rationals as `"p/q"` strings.
pub mod serde_q {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
        let raw = QRepr::deserialize(d)?;
        raw.into_q().map_err(serde::de::Error::custom)
    }

    /// Accepts strings and plain JSON integers.
    #[derive(Deserialize)]
    #[serde(untagged)]
    pub(crate) enum QRepr {
        Str(String),
        Int(i64),
    }

    impl QRepr {
        pub(crate) fn into_q(self) -> Result<Q> {
            match self {
                QRepr::Str(s) => parse_q(&s),
                QRepr::Int(n) => Ok(q(n)),
            }
        }
    }
}

pub mod serde_qvec {
    use super::serde_q::QRepr;
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(v: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for x in v {
            seq.serialize_element(&x.to_string())?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Q>, D::Error> {
        let raw = Vec::<QRepr>::deserialize(d)?;
        raw.into_iter()
            .map(|r| r.into_q().map_err(serde::de::Error::custom))
            .collect()
    }
}

pub mod serde_qmat {
    use super::serde_q::QRepr;
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(m: &[Vec<Q>], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(m.len()))?;
        for row in m {
            let strs: Vec<String> = row.iter().map(ToString::to_string).collect();
            seq.serialize_element(&strs)?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<Vec<Q>>, D::Error> {
        let raw = Vec::<Vec<QRepr>>::deserialize(d)?;
        raw.into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|r| r.into_q().map_err(serde::de::Error::custom))
                    .collect()
            })
            .collect()
    }
}
