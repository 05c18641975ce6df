use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::rational::{serde_q, serde_qvec, Q};
use crate::rootsys::{rho_prime, ParabolicIndex, RootDatum};

/// chi = sum over a outside E of c_a lambda_a, with c listed in increasing
/// root order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineBundleChar {
    #[serde(rename = "E")]
    pub e: ParabolicIndex,
    pub c: Vec<u64>,
}

impl LineBundleChar {
    pub fn new(e: ParabolicIndex, c: Vec<u64>) -> Self {
        LineBundleChar { e, c }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountingExponents {
    #[serde(with = "serde_q")]
    pub a: Q,
    #[serde(rename = "F_chi")]
    pub f_chi: ParabolicIndex,
    pub b: usize,
    /// m_a for the roots outside E, in the same order as `c`.
    #[serde(with = "serde_qvec")]
    pub m: Vec<Q>,
}

/// a = max m_a / c_a over a outside E, F_chi = E plus the maximizers,
/// b = |F_chi \ E|.
pub fn counting_exponents(datum: &RootDatum, bundle: &LineBundleChar) -> Result<CountingExponents> {
    bundle.e.check(datum.rank)?;
    if bundle.e.len() == datum.rank {
        return invalid("E must be a proper subset of the simple roots");
    }
    let outside: Vec<usize> = bundle.e.complement(datum.rank).iter().collect();
    if bundle.c.len() != outside.len() {
        return invalid(format!(
            "expected {} coefficients c_a (one per simple root outside E), got {}",
            outside.len(),
            bundle.c.len()
        ));
    }
    if bundle.c.iter().any(|&c| c == 0) {
        return invalid("coefficients c_a must be positive integers");
    }
    let rho = rho_prime(datum, &bundle.e)?;
    let fw = rho.fw_coords.expect("rho_prime returns coordinates");
    let m: Vec<Q> = outside.iter().map(|&a| fw[a].clone()).collect();
    let ratios: Vec<Q> = m.iter().zip(&bundle.c).map(|(mi, &ci)| mi / Q::from_integer((ci as i64).into())).collect();
    let a = ratios.iter().max().cloned().unwrap_or_else(Q::zero);
    let f_chi: ParabolicIndex = bundle
        .e
        .iter()
        .chain(outside.iter().zip(&ratios).filter(|(_, r)| **r == a).map(|(&i, _)| i))
        .collect();
    let b = f_chi.len() - bundle.e.len();
    Ok(CountingExponents { a, f_chi, b, m })
}
