//! Unimodular lattices in R^3: greedy reduction and short-vector counts.
//!
//! In dimension 3 the greedy algorithm (sort, Lagrange-reduce the first two
//! vectors, replace the third by its distance to the closest point of the
//! plane lattice, repeat) ends in a Minkowski-reduced basis, whose first
//! vector realizes the minimum.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

pub type V3 = [f64; 3];

fn dot(a: &V3, b: &V3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn det3(b: &[V3; 3]) -> f64 {
    let [x, y, z] = b;
    x[0] * (y[1] * z[2] - y[2] * z[1]) - x[1] * (y[0] * z[2] - y[2] * z[0]) + x[2] * (y[0] * z[1] - y[1] * z[0])
}

/// Integer coefficient vector of a lattice element in the input basis.
type Coeffs = [i128; 3];

/// Lattice vectors tracked by exact integer coordinates together with their
/// embedding, so reduction never accumulates rounding in the lattice itself.
struct Tracked<'a> {
    embed: &'a dyn Fn(&Coeffs) -> Option<V3>,
}

#[derive(Clone, Copy)]
struct Elem {
    m: Coeffs,
    v: V3,
}

impl Tracked<'_> {
    fn elem(&self, m: Coeffs) -> Result<Elem> {
        let v = (self.embed)(&m).ok_or_else(|| Error::Bound("lattice coordinates overflow exact arithmetic".into()))?;
        Ok(Elem { m, v })
    }

    /// a - c b.
    fn sub(&self, a: &Elem, c: i128, b: &Elem) -> Result<Elem> {
        let mut m = [0i128; 3];
        for i in 0..3 {
            m[i] = c
                .checked_mul(b.m[i])
                .and_then(|x| a.m[i].checked_sub(x))
                .ok_or_else(|| Error::Bound("lattice coordinates overflow exact arithmetic".into()))?;
        }
        self.elem(m)
    }

    /// Lagrange reduction of a plane basis.
    fn gauss2(&self, mut a: Elem, mut b: Elem) -> Result<(Elem, Elem)> {
        loop {
            if dot(&b.v, &b.v) < dot(&a.v, &a.v) {
                std::mem::swap(&mut a, &mut b);
            }
            let m = (dot(&a.v, &b.v) / dot(&a.v, &a.v)).round();
            if m == 0.0 || !m.is_finite() {
                return Ok((a, b));
            }
            let c = self.sub(&b, m as i128, &a)?;
            if dot(&c.v, &c.v) >= dot(&b.v, &b.v) {
                return Ok((a, b));
            }
            b = c;
        }
    }

    /// c minus its closest point in the lattice spanned by the reduced pair (a, b).
    fn reduce_against_plane(&self, a: &Elem, b: &Elem, c: &Elem) -> Result<Elem> {
        let (aa, ab, bb) = (dot(&a.v, &a.v), dot(&a.v, &b.v), dot(&b.v, &b.v));
        let (ca, cb) = (dot(&c.v, &a.v), dot(&c.v, &b.v));
        let det = aa * bb - ab * ab;
        let x = (ca * bb - cb * ab) / det;
        let y = (cb * aa - ca * ab) / det;
        let mut best = *c;
        let mut best_n = dot(&c.v, &c.v);
        for i in (x.floor() as i128 - 1)..=(x.ceil() as i128 + 1) {
            for j in (y.floor() as i128 - 1)..=(y.ceil() as i128 + 1) {
                let e = self.sub(&self.sub(c, i, a)?, j, b)?;
                let n = dot(&e.v, &e.v);
                if n < best_n {
                    best = e;
                    best_n = n;
                }
            }
        }
        Ok(best)
    }

    /// Greedy reduction of the lattice generated by the unit coefficient vectors.
    fn reduce(&self) -> Result<[V3; 3]> {
        let mut b = [self.elem([1, 0, 0])?, self.elem([0, 1, 0])?, self.elem([0, 0, 1])?];
        let orientation = det3(&b.map(|e| e.v)).signum();
        let norm = |e: &Elem| dot(&e.v, &e.v);
        for _ in 0..10_000 {
            b.sort_by(|u, v| norm(u).total_cmp(&norm(v)));
            let (b1, b2) = self.gauss2(b[0], b[1])?;
            let b3 = self.reduce_against_plane(&b1, &b2, &b[2])?;
            let improved = norm(&b3) < norm(&b[2]) * (1.0 - 1e-12);
            b = [b1, b2, b3];
            if !improved {
                break;
            }
        }
        b.sort_by(|u, v| norm(u).total_cmp(&norm(v)));
        let mut out = b.map(|e| e.v);
        if det3(&out).signum() != orientation {
            out[2] = out[2].map(|x| -x);
        }
        Ok(out)
    }
}

/// Greedy reduction of a real basis; the output is sorted by length and
/// keeps orientation.
pub fn reduce3(basis: &[V3; 3]) -> Result<[V3; 3]> {
    let embed = |m: &Coeffs| -> Option<V3> {
        Some(std::array::from_fn(|k| (0..3).map(|i| m[i] as f64 * basis[i][k]).sum()))
    };
    Tracked { embed: &embed }.reduce()
}

/// Scale of the dyadic grid on which unipotent coordinates are drawn.
pub const UNIPOTENT_BITS: u32 = 53;

/// Columns of diag(a) u with u12, u13, u23 = k / 2^53, reduced with exact
/// integer arithmetic for the unipotent part.
fn reduce_translate(a: [f64; 3], k: [u64; 3]) -> Result<[V3; 3]> {
    let one = 1i128 << UNIPOTENT_BITS;
    let scale = 1.0 / one as f64;
    let k = k.map(|x| x as i128);
    let embed = |m: &Coeffs| -> Option<V3> {
        // u m = (m1 + u12 m2 + u13 m3, m2 + u23 m3, m3), numerators exact.
        let r0 = m[0].checked_mul(one)?.checked_add(k[0].checked_mul(m[1])?)?.checked_add(k[1].checked_mul(m[2])?)?;
        let r1 = m[1].checked_mul(one)?.checked_add(k[2].checked_mul(m[2])?)?;
        Some([a[0] * (r0 as f64 * scale), a[1] * (r1 as f64 * scale), a[2] * m[2] as f64])
    };
    Tracked { embed: &embed }.reduce()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeSample {
    pub basis: [V3; 3],
    pub reduced_basis: [V3; 3],
    pub lambda1: f64,
}

impl LatticeSample {
    /// Lattice spanned by the three given vectors, which must have covolume 1.
    pub fn new(basis: [V3; 3]) -> Result<Self> {
        if basis.iter().flatten().any(|x| !x.is_finite()) {
            return invalid("basis has non-finite entries");
        }
        let reduced_basis = reduce3(&basis)?;
        Self::from_parts(basis, reduced_basis)
    }

    /// The lattice diag(a) u Z^3 with u12, u13, u23 = k / 2^53; a must have
    /// product 1.
    pub fn unipotent_translate(a: [f64; 3], k: [u64; 3]) -> Result<Self> {
        if a.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
            return invalid("diagonal entries must be positive and finite");
        }
        if k.iter().any(|&x| x >> UNIPOTENT_BITS != 0) {
            return invalid("unipotent numerators must be below 2^53");
        }
        let u = k.map(|x| x as f64 / (1u64 << UNIPOTENT_BITS) as f64);
        let basis = [[a[0], 0.0, 0.0], [a[0] * u[0], a[1], 0.0], [a[0] * u[1], a[1] * u[2], a[2]]];
        Self::from_parts(basis, reduce_translate(a, k)?)
    }

    fn from_parts(basis: [V3; 3], reduced_basis: [V3; 3]) -> Result<Self> {
        let det = det3(&reduced_basis);
        if (det - 1.0).abs() >= 1e-9 {
            return invalid(format!("basis must have determinant 1, got {det}"));
        }
        let lambda1 = dot(&reduced_basis[0], &reduced_basis[0]).sqrt();
        Ok(LatticeSample { basis, reduced_basis, lambda1 })
    }

    pub fn standard() -> Self {
        Self::new([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]).expect("Z^3 is unimodular")
    }

    /// #{v in L \ 0 : |v| <= r}.
    pub fn count_in_ball(&self, r: f64) -> Result<u64> {
        count_in_ball(&self.reduced_basis, r)
    }
}

pub fn ball_volume(r: f64) -> f64 {
    4.0 / 3.0 * PI * r * r * r
}

/// Largest expected count (ball volume) accepted by the enumeration.
pub const MAX_BALL_VOLUME: f64 = 1e3;
/// Largest number of enumeration nodes per lattice.
const MAX_NODES: f64 = 1e7;

/// Fincke-Pohst enumeration of nonzero vectors of norm at most r.
pub fn count_in_ball(basis: &[V3; 3], r: f64) -> Result<u64> {
    if !(r > 0.0) || !r.is_finite() {
        return invalid(format!("radius must be positive, got {r}"));
    }
    if ball_volume(r) > MAX_BALL_VOLUME {
        return Err(Error::Bound(format!("ball volume {:.1} exceeds {MAX_BALL_VOLUME}", ball_volume(r))));
    }
    // |sum x_i b_i|^2 = sum_i q_ii (x_i + sum_{j>i} q_ij x_j)^2 from the Gram matrix.
    let mut q = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            q[i][j] = dot(&basis[i], &basis[j]);
        }
    }
    for i in 0..3 {
        for j in i + 1..3 {
            q[j][i] = q[i][j];
            q[i][j] /= q[i][i];
        }
        for k in i + 1..3 {
            for l in k..3 {
                q[k][l] -= q[k][i] * q[i][l];
            }
        }
    }
    let r2 = r * r;
    let slack = 1e-9 * r2;
    let span = |i: usize| 2.0 * (r2 / q[i][i]).sqrt() + 1.0;
    if span(0) * span(1) * span(2) > MAX_NODES {
        return Err(Error::Bound("lattice too degenerate for ball enumeration".into()));
    }
    let mut count = 0u64;
    let h3 = ((r2 + slack) / q[2][2]).sqrt();
    for x3 in (-h3.floor() as i64)..=(h3.floor() as i64) {
        let x3f = x3 as f64;
        let rem3 = r2 + slack - q[2][2] * x3f * x3f;
        if rem3 < 0.0 {
            continue;
        }
        let c2 = -q[1][2] * x3f;
        let h2 = (rem3 / q[1][1]).sqrt();
        for x2 in (c2 - h2).ceil() as i64..=(c2 + h2).floor() as i64 {
            let x2f = x2 as f64;
            let rem2 = rem3 - q[1][1] * (x2f - c2).powi(2);
            if rem2 < 0.0 {
                continue;
            }
            let c1 = -q[0][1] * x2f - q[0][2] * x3f;
            let h1 = (rem2 / q[0][0]).sqrt();
            for x1 in (c1 - h1).ceil() as i64..=(c1 + h1).floor() as i64 {
                if x1 == 0 && x2 == 0 && x3 == 0 {
                    continue;
                }
                let v: V3 = std::array::from_fn(|k| {
                    x1 as f64 * basis[0][k] + x2f * basis[1][k] + x3f * basis[2][k]
                });
                if dot(&v, &v) <= r2 {
                    count += 1;
                }
            }
        }
    }
    Ok(count)
}
