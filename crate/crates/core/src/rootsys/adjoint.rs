//! The functions d_a(g) = |wedge^l Ad(g) v_a| on SL_2 and SL_3.
//!
//! For the maximal parabolic attached to the i-th simple root, u_a is spanned
//! by the elementary matrices E_ab with a <= i < b, and v_a is the wedge of
//! that orthonormal family. Since Ad(g)E_ab = col_a(g) (x) row_b(g^-1), the
//! Frobenius Gram matrix of the image family factors into two dot products and
//! the wedge norm is the square root of its determinant.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{det, dot, inverse, to_f64, Q};

fn check_sl(g: &[Vec<Q>]) -> Result<usize> {
    let n = g.len();
    if !(2..=3).contains(&n) {
        return Err(Error::Unsupported(format!("d_alpha is implemented for n in {{2,3}}, got {n}")));
    }
    if g.iter().any(|row| row.len() != n) {
        return Err(Error::Validation("matrix is not square".into()));
    }
    if !det(g).is_one() {
        return Err(Error::Validation("matrix does not have determinant 1".into()));
    }
    Ok(n)
}

/// Index pairs (a, b) spanning u_a for the simple root with index `alpha`.
pub fn unipotent_pairs(n: usize, alpha: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for a in 0..=alpha {
        for b in alpha + 1..n {
            out.push((a, b));
        }
    }
    out
}

fn column(g: &[Vec<Q>], a: usize) -> Vec<Q> {
    g.iter().map(|row| row[a].clone()).collect()
}

/// Exact squared norm of wedge^l Ad(g) v_a.
pub fn d_alpha_squared(g: &[Vec<Q>], alpha: usize) -> Result<Q> {
    let n = check_sl(g)?;
    if alpha + 1 >= n {
        return Err(Error::Validation(format!("simple root index {alpha} out of range for SL_{n}")));
    }
    let ginv = inverse(g).expect("determinant one");
    let pairs = unipotent_pairs(n, alpha);
    let cols: Vec<Vec<Q>> = pairs.iter().map(|&(a, _)| column(g, a)).collect();
    let rows: Vec<&Vec<Q>> = pairs.iter().map(|&(_, b)| &ginv[b]).collect();
    let gram: Vec<Vec<Q>> = (0..pairs.len())
        .map(|i| {
            (0..pairs.len())
                .map(|j| dot(&cols[i], &cols[j]) * dot(rows[i], rows[j]))
                .collect()
        })
        .collect();
    Ok(det(&gram))
}

pub fn d_alpha(g: &[Vec<Q>], alpha: usize) -> Result<f64> {
    Ok(to_f64(&d_alpha_squared(g, alpha)?).sqrt())
}

/// Matrix of Ad(g) on gl_n in the basis E_ab (row-major index a*n + b).
pub fn adjoint_matrix(g: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let n = g.len();
    let ginv = inverse(g).expect("invertible matrix");
    let mut m = vec![vec![Q::zero(); n * n]; n * n];
    for a in 0..n {
        for b in 0..n {
            // Column (a,b) holds the entries of g E_ab g^-1.
            for r in 0..n {
                for c in 0..n {
                    m[r * n + c][a * n + b] = &g[r][a] * &ginv[b][c];
                }
            }
        }
    }
    m
}

fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// Squared Frobenius norm of wedge^l M, as the sum of the l x l principal
/// minors of M^T M.
pub fn wedge_frobenius_squared(m: &[Vec<Q>], l: usize) -> Q {
    let dim = m.len();
    let mtm: Vec<Vec<Q>> = (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| (0..dim).fold(Q::zero(), |acc, k| acc + &m[k][i] * &m[k][j]))
                .collect()
        })
        .collect();
    k_subsets(dim, l)
        .into_iter()
        .map(|idx| {
            let minor: Vec<Vec<Q>> = idx
                .iter()
                .map(|&i| idx.iter().map(|&j| mtm[i][j].clone()).collect())
                .collect();
            det(&minor)
        })
        .fold(Q::zero(), |acc, x| acc + x)
}

/// Lower bound 1/|wedge^l Ad(g^-1)|_F valid for d_a(g gamma), gamma in SL_n(Z).
///
/// The Frobenius norm dominates the operator norm, so this is slightly weaker
/// than the sharp bound but stays exact up to the final square root.
pub fn integral_lower_bound(g: &[Vec<Q>], alpha: usize) -> Result<f64> {
    let n = check_sl(g)?;
    if alpha + 1 >= n {
        return Err(Error::Validation(format!("simple root index {alpha} out of range for SL_{n}")));
    }
    let ginv = inverse(g).expect("determinant one");
    let l = unipotent_pairs(n, alpha).len();
    let sq = wedge_frobenius_squared(&adjoint_matrix(&ginv), l);
    debug_assert!(sq.is_positive());
    Ok(1.0 / to_f64(&sq).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, identity, mat_mul, q, qvec};
    use proptest::prelude::*;

    fn diag(xs: &[Q]) -> Vec<Vec<Q>> {
        let n = xs.len();
        (0..n)
            .map(|i| (0..n).map(|j| if i == j { xs[i].clone() } else { Q::zero() }).collect())
            .collect()
    }

    #[test]
    fn identity_gives_one() {
        for n in 2..=3 {
            for a in 0..n - 1 {
                assert_eq!(d_alpha(&identity(n), a).unwrap(), 1.0);
            }
        }
    }

    #[test]
    fn sl2_diagonal_is_u_squared() {
        let u = frac(7, 3);
        let g = diag(&[u.clone(), Q::one() / &u]);
        assert_eq!(d_alpha_squared(&g, 0).unwrap(), (&u * &u) * (&u * &u));
    }

    #[test]
    fn sl3_diagonal_matches_weight_power() {
        // lambda_1(a) = a1, lambda_2(a) = a1 a2, and k = 3 for both.
        let (a1, a2) = (frac(2, 1), frac(5, 3));
        let a3 = Q::one() / (&a1 * &a2);
        let g = diag(&[a1.clone(), a2.clone(), a3]);
        let lam = [a1.clone(), &a1 * &a2];
        for (i, l) in lam.iter().enumerate() {
            let want = num_traits::pow(l.clone(), 6);
            assert_eq!(d_alpha_squared(&g, i).unwrap(), want);
        }
    }

    #[test]
    fn rejects_bad_input() {
        let g = diag(&[q(2), q(1)]);
        assert!(matches!(d_alpha(&g, 0), Err(Error::Validation(_))));
        assert!(matches!(d_alpha(&identity(4), 0), Err(Error::Unsupported(_))));
    }

    /// Oracle: sum of squares of all l x l minors of M (Cauchy-Binet).
    fn wedge_norm_by_minors(m: &[Vec<Q>], l: usize) -> Q {
        let dim = m.len();
        let mut acc = Q::zero();
        for rows in k_subsets(dim, l) {
            for cols in k_subsets(dim, l) {
                let minor: Vec<Vec<Q>> = rows
                    .iter()
                    .map(|&r| cols.iter().map(|&c| m[r][c].clone()).collect())
                    .collect();
                let d = det(&minor);
                acc += &d * &d;
            }
        }
        acc
    }

    #[test]
    fn principal_minor_formula_matches_all_minors() {
        let g = vec![qvec(&[1, 2, 0]), qvec(&[0, 1, 3]), qvec(&[1, 2, 1])];
        let m = adjoint_matrix(&g);
        assert_eq!(wedge_frobenius_squared(&m, 2), wedge_norm_by_minors(&m, 2));
    }

    fn elementary(n: usize, i: usize, j: usize, k: i64) -> Vec<Vec<Q>> {
        let mut m = identity(n);
        m[i][j] = q(k);
        m
    }

    fn sl3z() -> impl Strategy<Value = Vec<Vec<Q>>> {
        prop::collection::vec((0usize..3, 0usize..3, -3i64..=3), 1..6).prop_map(|ops| {
            ops.into_iter()
                .filter(|(i, j, _)| i != j)
                .fold(identity(3), |acc, (i, j, k)| mat_mul(&acc, &elementary(3, i, j, k)))
        })
    }

    proptest! {
        #[test]
        fn integral_matrices_have_d_at_least_one(g in sl3z(), a in 0usize..2) {
            let d2 = d_alpha_squared(&g, a).unwrap();
            prop_assert!(d2 >= Q::one());
        }

        #[test]
        fn lower_bound_holds(gamma in sl3z(), a in 0usize..2, t in 1i64..5, s in 1i64..5) {
            let c = vec![
                vec![frac(t, s), frac(1, 2), Q::zero()],
                vec![Q::zero(), frac(s, t), frac(-2, 3)],
                vec![Q::zero(), Q::zero(), Q::one()],
            ];
            let bound = integral_lower_bound(&c, a).unwrap();
            let d = d_alpha(&mat_mul(&c, &gamma), a).unwrap();
            prop_assert!(d >= bound * (1.0 - 1e-12));
        }
    }
}
