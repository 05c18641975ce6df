//! Exact root data: simple roots, coroots, reflections, fundamental weights,
//! the parabolic characters rho'_F and the pairing with cocharacters.

mod adjoint;
mod split;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::rational::{
    self, bilinear, inverse, is_integer, is_positive_definite, is_symmetric, q, serde_q,
    serde_qmat, serde_qvec, solve, sub, Q,
};

pub use adjoint::{
    adjoint_matrix, d_alpha, d_alpha_squared, integral_lower_bound, unipotent_pairs,
    wedge_frobenius_squared,
};
pub use split::{CartanType, Family};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositiveRoot {
    #[serde(with = "serde_qvec")]
    pub v: Vec<Q>,
    pub mult: u32,
    /// Coefficients in the simple-root basis (nonnegative integers).
    #[serde(with = "serde_qvec", default, skip_deserializing)]
    pub simple_coords: Vec<Q>,
}

impl PositiveRoot {
    pub fn support(&self) -> BTreeSet<usize> {
        self.simple_coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| i)
            .collect()
    }
}

/// Relative root data supplied directly, e.g. for non-split groups.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExplicitData {
    #[serde(with = "serde_qmat")]
    pub simple_roots: Vec<Vec<Q>>,
    pub positive_roots: Vec<PositiveRoot>,
    #[serde(with = "serde_qmat")]
    pub gram: Vec<Vec<Q>>,
    #[serde(with = "serde_qvec")]
    pub ratios: Vec<Q>,
    /// Optional; validated against the duality relation when given.
    #[serde(with = "opt_qmat", default, skip_serializing_if = "Option::is_none")]
    pub fundamental_weights: Option<Vec<Vec<Q>>>,
}

mod opt_qmat {
    use super::*;

    pub fn serialize<S: serde::Serializer>(
        m: &Option<Vec<Vec<Q>>>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        match m {
            Some(m) => serde_qmat::serialize(m, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: serde::Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Option<Vec<Vec<Q>>>, D::Error> {
        #[derive(Deserialize)]
        struct Wrap(#[serde(with = "serde_qmat")] Vec<Vec<Q>>);
        Ok(Option::<Wrap>::deserialize(d)?.map(|w| w.0))
    }
}

#[derive(Debug, Clone)]
pub enum DatumSpec {
    Split(CartanType),
    Explicit(ExplicitData),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RootDatum {
    pub label: String,
    pub split: bool,
    pub rank: usize,
    pub ambient_dim: usize,
    #[serde(with = "serde_qmat")]
    pub simple_roots: Vec<Vec<Q>>,
    pub positive_roots: Vec<PositiveRoot>,
    #[serde(with = "serde_qmat")]
    pub gram: Vec<Vec<Q>>,
    #[serde(with = "serde_qmat")]
    pub fundamental_weights: Vec<Vec<Q>>,
    #[serde(with = "serde_qvec")]
    pub duality_ratios: Vec<Q>,
    /// Positive factor applied to the gram form when measuring lengths; it
    /// never enters the pairing.
    #[serde(with = "serde_q")]
    pub metric_scale: Q,
}

/// A character, optionally with its fundamental-weight coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharVec {
    #[serde(with = "serde_qvec")]
    pub coords: Vec<Q>,
    #[serde(with = "opt_qvec", default, skip_serializing_if = "Option::is_none")]
    pub fw_coords: Option<Vec<Q>>,
}

mod opt_qvec {
    use super::*;

    pub fn serialize<S: serde::Serializer>(
        v: &Option<Vec<Q>>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        match v {
            Some(v) => serde_qvec::serialize(v, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: serde::Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Option<Vec<Q>>, D::Error> {
        #[derive(Deserialize)]
        struct Wrap(#[serde(with = "serde_qvec")] Vec<Q>);
        Ok(Option::<Wrap>::deserialize(d)?.map(|w| w.0))
    }
}

impl CharVec {
    pub fn new(coords: Vec<Q>) -> Self {
        CharVec { coords, fw_coords: None }
    }
}

/// A cocharacter, identified with the ambient space through the gram form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CochVec {
    #[serde(with = "serde_qvec")]
    pub coords: Vec<Q>,
}

impl CochVec {
    pub fn new(coords: Vec<Q>) -> Self {
        CochVec { coords }
    }

    pub fn scaled(&self, c: &Q) -> Self {
        CochVec { coords: rational::scale(c, &self.coords) }
    }
}

/// A set of simple-root indices (0-based internally, 1-based in text and JSON).
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParabolicIndex {
    pub subset: BTreeSet<usize>,
}

impl ParabolicIndex {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn full(rank: usize) -> Self {
        (0..rank).collect()
    }

    pub fn contains(&self, a: usize) -> bool {
        self.subset.contains(&a)
    }

    pub fn len(&self) -> usize {
        self.subset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subset.is_empty()
    }

    pub fn is_subset(&self, other: &ParabolicIndex) -> bool {
        self.subset.is_subset(&other.subset)
    }

    pub fn complement(&self, rank: usize) -> ParabolicIndex {
        (0..rank).filter(|a| !self.contains(*a)).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.subset.iter().copied()
    }

    pub fn check(&self, rank: usize) -> Result<()> {
        match self.subset.iter().find(|&&a| a >= rank) {
            Some(a) => invalid(format!("simple root {} does not exist in rank {rank}", a + 1)),
            None => Ok(()),
        }
    }

    /// Every subset of {0..rank}.
    pub fn all(rank: usize) -> Vec<ParabolicIndex> {
        (0u32..1 << rank)
            .map(|mask| (0..rank).filter(|i| mask >> i & 1 == 1).collect())
            .collect()
    }
}

impl FromIterator<usize> for ParabolicIndex {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        ParabolicIndex { subset: iter.into_iter().collect() }
    }
}

impl fmt::Display for ParabolicIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.subset.iter().map(|a| format!("a{}", a + 1)).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Accepts `""`, `"1,3"` or `"a1,a3"`.
impl FromStr for ParabolicIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('{').trim_end_matches('}');
        s.split(',')
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .map(|p| {
                let digits = p.trim_start_matches(['a', 'A']);
                match digits.parse::<usize>() {
                    Ok(k) if k >= 1 => Ok(k - 1),
                    _ => Err(Error::Parse(format!("bad simple root label {p:?}"))),
                }
            })
            .collect()
    }
}

impl Serialize for ParabolicIndex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let labels: Vec<usize> = self.subset.iter().map(|a| a + 1).collect();
        labels.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ParabolicIndex {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let labels = Vec::<usize>::deserialize(d)?;
        if labels.contains(&0) {
            return Err(serde::de::Error::custom("simple root labels start at 1"));
        }
        Ok(labels.into_iter().map(|a| a - 1).collect())
    }
}

pub fn build_root_datum(spec: &DatumSpec) -> Result<RootDatum> {
    match spec {
        DatumSpec::Split(t) => build_split(*t),
        DatumSpec::Explicit(data) => build_explicit(data),
    }
}

pub fn split_datum(t: CartanType) -> RootDatum {
    build_split(t).expect("standard realizations are valid")
}

/// Convenience for tests and the CLI: `"A4"`, `"G2"`, ...
pub fn datum(label: &str) -> Result<RootDatum> {
    build_split(label.parse()?)
}

fn build_split(t: CartanType) -> Result<RootDatum> {
    let (dim, simple, pos) = split::realize(t);
    let gram = rational::identity(dim);
    let ratios = vec![Q::one(); t.rank];
    let positive = pos
        .into_iter()
        .map(|v| PositiveRoot { v, mult: 1, simple_coords: Vec::new() })
        .collect();
    assemble(t.to_string(), true, simple, positive, gram, ratios, None)
}

fn build_explicit(data: &ExplicitData) -> Result<RootDatum> {
    assemble(
        "explicit".into(),
        false,
        data.simple_roots.clone(),
        data.positive_roots.clone(),
        data.gram.clone(),
        data.ratios.clone(),
        data.fundamental_weights.clone(),
    )
}

fn assemble(
    label: String,
    split: bool,
    simple: Vec<Vec<Q>>,
    mut positive: Vec<PositiveRoot>,
    gram: Vec<Vec<Q>>,
    ratios: Vec<Q>,
    given_weights: Option<Vec<Vec<Q>>>,
) -> Result<RootDatum> {
    let rank = simple.len();
    if rank == 0 {
        return invalid("at least one simple root is required");
    }
    let dim = gram.len();
    if !is_symmetric(&gram) {
        return invalid("gram matrix is not square and symmetric");
    }
    if !is_positive_definite(&gram) {
        return invalid("gram matrix is not positive definite");
    }
    if let Some(v) = simple.iter().chain(positive.iter().map(|p| &p.v)).find(|v| v.len() != dim) {
        return Err(Error::Dimension { expected: dim, got: v.len() });
    }
    if ratios.len() != rank {
        return invalid(format!("expected {rank} duality ratios, got {}", ratios.len()));
    }
    if ratios.iter().any(|r| !r.is_positive()) {
        return invalid("duality ratios must be positive");
    }

    let ip = |a: &[Q], b: &[Q]| bilinear(a, &gram, b);
    // Gram matrix of the simple roots; invertible iff they are independent.
    let sg: Vec<Vec<Q>> = simple.iter().map(|a| simple.iter().map(|b| ip(a, b)).collect()).collect();
    if inverse(&sg).is_none() {
        return invalid("simple roots are linearly dependent");
    }

    for p in positive.iter_mut() {
        if p.mult == 0 {
            return invalid("root multiplicities must be positive");
        }
        if !ip(&p.v, &p.v).is_positive() {
            return invalid("every root must have positive length");
        }
        let rhs: Vec<Vec<Q>> = simple.iter().map(|a| vec![ip(a, &p.v)]).collect();
        let coeffs: Vec<Q> = solve(&sg, &rhs).expect("checked invertible").into_iter().map(|r| r[0].clone()).collect();
        let recon = simple
            .iter()
            .zip(&coeffs)
            .fold(rational::zeros(dim), |acc, (a, c)| rational::add(&acc, &rational::scale(c, a)));
        if recon != p.v {
            return invalid(format!("root {} is not in the span of the simple roots", rational::fmt_vec(&p.v)));
        }
        if coeffs.iter().any(|c| c.is_negative() || !is_integer(c)) {
            return invalid(format!(
                "root {} is not a nonnegative integer combination of simple roots",
                rational::fmt_vec(&p.v)
            ));
        }
        p.simple_coords = coeffs;
    }
    for (i, a) in simple.iter().enumerate() {
        if !positive.iter().any(|p| &p.v == a) {
            return invalid(format!("simple root {} is missing from the positive roots", i + 1));
        }
    }
    for (i, p) in positive.iter().enumerate() {
        if positive[..i].iter().any(|o| o.v == p.v) {
            return invalid(format!("positive root {} listed twice", rational::fmt_vec(&p.v)));
        }
    }

    // (a, b^vee) for simple roots, then lambda = diag(ratios) C^-1 in the simple basis.
    let cartan: Vec<Vec<Q>> = (0..rank)
        .map(|i| (0..rank).map(|j| q(2) * &sg[i][j] / &sg[j][j]).collect())
        .collect();
    let cinv = inverse(&cartan).ok_or_else(|| Error::Validation("singular Cartan matrix".into()))?;
    let weights: Vec<Vec<Q>> = (0..rank)
        .map(|a| {
            (0..rank).fold(rational::zeros(dim), |acc, b| {
                let c = &ratios[a] * &cinv[a][b];
                rational::add(&acc, &rational::scale(&c, &simple[b]))
            })
        })
        .collect();

    let datum = RootDatum {
        label,
        split,
        rank,
        ambient_dim: dim,
        simple_roots: simple,
        positive_roots: positive,
        gram,
        fundamental_weights: weights,
        duality_ratios: ratios,
        metric_scale: Q::one(),
    };

    if let Some(given) = given_weights {
        if given.len() != rank || given.iter().any(|w| w.len() != dim) {
            return invalid("fundamental weights have the wrong shape");
        }
        for (a, w) in given.iter().enumerate() {
            for b in 0..rank {
                let want = if a == b { datum.duality_ratios[a].clone() } else { Q::zero() };
                if datum.pair_raw(w, &datum.coroot(b)) != want {
                    return invalid(format!(
                        "duality relation (lambda_{}, a{}^vee) = {} fails",
                        a + 1,
                        b + 1,
                        want
                    ));
                }
            }
        }
    }
    datum.check_reflections()?;
    Ok(datum)
}

impl RootDatum {
    pub fn with_metric_scale(mut self, s: Q) -> Result<Self> {
        if !s.is_positive() {
            return invalid("metric scale must be positive");
        }
        self.metric_scale = s;
        Ok(self)
    }

    fn pair_raw(&self, a: &[Q], b: &[Q]) -> Q {
        bilinear(a, &self.gram, b)
    }

    /// The gram form (., .) on ambient vectors.
    pub fn inner(&self, a: &[Q], b: &[Q]) -> Q {
        self.pair_raw(a, b)
    }

    /// Euclidean length under the scaled metric.
    pub fn norm(&self, v: &[Q]) -> f64 {
        rational::to_f64(&(&self.metric_scale * self.pair_raw(v, v))).sqrt()
    }

    pub fn coroot(&self, a: usize) -> Vec<Q> {
        let alpha = &self.simple_roots[a];
        let c = q(2) / self.pair_raw(alpha, alpha);
        rational::scale(&c, alpha)
    }

    pub fn coroot_of(&self, v: &[Q]) -> Vec<Q> {
        let c = q(2) / self.pair_raw(v, v);
        rational::scale(&c, v)
    }

    pub fn fundamental_weight(&self, a: usize) -> CharVec {
        let mut fw = vec![Q::zero(); self.rank];
        fw[a] = Q::one();
        CharVec { coords: self.fundamental_weights[a].clone(), fw_coords: Some(fw) }
    }

    pub fn simple_root(&self, a: usize) -> CharVec {
        CharVec::new(self.simple_roots[a].clone())
    }

    /// Expands `sum_a c_a lambda_a`.
    pub fn from_fw_coords(&self, c: &[Q]) -> Result<CharVec> {
        if c.len() != self.rank {
            return Err(Error::Dimension { expected: self.rank, got: c.len() });
        }
        let coords = c.iter().zip(&self.fundamental_weights).fold(
            rational::zeros(self.ambient_dim),
            |acc, (ci, w)| rational::add(&acc, &rational::scale(ci, w)),
        );
        Ok(CharVec { coords, fw_coords: Some(c.to_vec()) })
    }

    /// Coefficients of `w` along the fundamental weights, `(w, a^vee)/ratio_a`.
    pub fn fw_coords_of(&self, w: &[Q]) -> Vec<Q> {
        (0..self.rank)
            .map(|a| self.pair_raw(w, &self.coroot(a)) / &self.duality_ratios[a])
            .collect()
    }

    /// Connected components of the Dynkin diagram restricted to `f`.
    pub fn components(&self, f: &ParabolicIndex) -> Vec<ParabolicIndex> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for start in f.iter() {
            if !seen.insert(start) {
                continue;
            }
            let mut comp = vec![start];
            let mut stack = vec![start];
            while let Some(a) = stack.pop() {
                for b in f.iter() {
                    if !seen.contains(&b)
                        && !self.pair_raw(&self.simple_roots[a], &self.simple_roots[b]).is_zero()
                    {
                        seen.insert(b);
                        comp.push(b);
                        stack.push(b);
                    }
                }
            }
            out.push(comp.into_iter().collect());
        }
        out
    }

    /// Positive roots whose support lies inside `f`.
    pub fn roots_in_span<'a>(&'a self, f: &'a ParabolicIndex) -> impl Iterator<Item = &'a PositiveRoot> {
        self.positive_roots.iter().filter(move |p| p.support().is_subset(&f.subset))
    }

    /// Positive roots not in the span of `f` (the roots of the unipotent radical).
    pub fn roots_outside<'a>(&'a self, f: &'a ParabolicIndex) -> impl Iterator<Item = &'a PositiveRoot> {
        self.positive_roots.iter().filter(move |p| !p.support().is_subset(&f.subset))
    }

    pub fn is_root(&self, v: &[Q]) -> bool {
        let neg: Vec<Q> = v.iter().map(|x| -x).collect();
        self.positive_roots.iter().any(|p| p.v == v || p.v == neg)
    }

    fn check_reflections(&self) -> Result<()> {
        for b in 0..self.rank {
            for p in &self.positive_roots {
                // Skip positive multiples of beta (beta itself, or 2 beta in BC).
                if p.support().iter().all(|&s| s == b) {
                    continue;
                }
                let image = reflect_vec(self, &p.v, b);
                match self.positive_roots.iter().find(|o| o.v == image) {
                    Some(o) if o.mult == p.mult => {}
                    _ => {
                        return invalid(format!(
                            "reflection in a{} does not permute the positive roots (image of {})",
                            b + 1,
                            rational::fmt_vec(&p.v)
                        ))
                    }
                }
            }
        }
        Ok(())
    }
}

pub fn fundamental_weights(datum: &RootDatum) -> Vec<CharVec> {
    (0..datum.rank).map(|a| datum.fundamental_weight(a)).collect()
}

/// The matrix ((lambda_a, b^vee)); equals diag(ratios) for a valid datum.
pub fn duality_matrix(datum: &RootDatum) -> Vec<Vec<Q>> {
    (0..datum.rank)
        .map(|a| {
            (0..datum.rank)
                .map(|b| datum.pair_raw(&datum.fundamental_weights[a], &datum.coroot(b)))
                .collect()
        })
        .collect()
}

/// Sum of the roots of the unipotent radical of P_F with multiplicity,
/// expanded along the fundamental weights.
pub fn rho_prime(datum: &RootDatum, f: &ParabolicIndex) -> Result<CharVec> {
    f.check(datum.rank)?;
    let coords = datum
        .roots_outside(f)
        .fold(rational::zeros(datum.ambient_dim), |acc, p| {
            rational::add(&acc, &rational::scale(&q(p.mult as i64), &p.v))
        });
    let m = datum.fw_coords_of(&coords);
    for (a, c) in m.iter().enumerate() {
        if f.contains(a) {
            if !c.is_zero() {
                return invalid(format!("rho' has nonzero coefficient {c} on a{} in F", a + 1));
            }
        } else if !is_integer(c) || !c.is_positive() {
            return invalid(format!("rho' coefficient {c} on a{} is not a positive integer", a + 1));
        }
    }
    Ok(CharVec { coords, fw_coords: Some(m) })
}

/// The integer k_a with rho'_{Delta minus a} = k_a lambda_a.
pub fn k_alpha(datum: &RootDatum, a: usize) -> Result<Q> {
    let f = ParabolicIndex::full(datum.rank).complement_of(a);
    let rho = rho_prime(datum, &f)?;
    Ok(rho.fw_coords.expect("rho_prime fills fw_coords")[a].clone())
}

impl ParabolicIndex {
    fn complement_of(mut self, a: usize) -> Self {
        self.subset.remove(&a);
        self
    }
}

pub fn pair(datum: &RootDatum, chi: &CharVec, theta: &CochVec) -> Result<Q> {
    let d = datum.ambient_dim;
    for len in [chi.coords.len(), theta.coords.len()] {
        if len != d {
            return Err(Error::Dimension { expected: d, got: len });
        }
    }
    Ok(datum.pair_raw(&chi.coords, &theta.coords))
}

fn reflect_vec(datum: &RootDatum, w: &[Q], b: usize) -> Vec<Q> {
    let beta = &datum.simple_roots[b];
    let c = datum.pair_raw(w, &datum.coroot(b));
    sub(w, &rational::scale(&c, beta))
}

pub fn reflect(datum: &RootDatum, w: &CharVec, b: usize) -> Result<CharVec> {
    if w.coords.len() != datum.ambient_dim {
        return Err(Error::Dimension { expected: datum.ambient_dim, got: w.coords.len() });
    }
    if b >= datum.rank {
        return invalid(format!("simple root {} does not exist", b + 1));
    }
    Ok(CharVec::new(reflect_vec(datum, &w.coords, b)))
}

/// theta = theta_F + theta_rest, with theta_F in the coroot span of F and
/// (lambda_a, theta_rest) = 0 for a in F.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FProjection {
    pub theta_f: CochVec,
    pub theta_rest: CochVec,
    /// (lambda_a, theta) for every simple root.
    #[serde(with = "serde_qvec")]
    pub lambda_coords: Vec<Q>,
}

pub fn f_projection(datum: &RootDatum, f: &ParabolicIndex, theta: &CochVec) -> Result<FProjection> {
    f.check(datum.rank)?;
    let lambda_coords: Vec<Q> = (0..datum.rank)
        .map(|a| pair(datum, &datum.fundamental_weight(a), theta))
        .collect::<Result<_>>()?;
    let theta_f = f.iter().fold(rational::zeros(datum.ambient_dim), |acc, a| {
        let c = &lambda_coords[a] / &datum.duality_ratios[a];
        rational::add(&acc, &rational::scale(&c, &datum.coroot(a)))
    });
    let theta_rest = sub(&theta.coords, &theta_f);
    Ok(FProjection {
        theta_f: CochVec::new(theta_f),
        theta_rest: CochVec::new(theta_rest),
        lambda_coords,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, qvec};
    use proptest::prelude::*;

    fn a(label: &str) -> RootDatum {
        datum(label).unwrap()
    }

    #[test]
    fn a2_weights_by_hand() {
        // Cartan matrix [[2,-1],[-1,2]] has inverse (1/3)[[2,1],[1,2]].
        let d = a("A2");
        assert_eq!(d.fundamental_weights[0], vec![frac(2, 3), frac(-1, 3), frac(-1, 3)]);
        assert_eq!(d.fundamental_weights[1], vec![frac(1, 3), frac(1, 3), frac(-2, 3)]);
    }

    #[test]
    fn a1_weight_is_half_root() {
        let d = a("A1");
        assert_eq!(d.fundamental_weights[0], rational::scale(&frac(1, 2), &d.simple_roots[0]));
    }

    #[test]
    fn duality_is_diagonal_for_every_small_type() {
        for t in CartanType::small_types() {
            let d = split_datum(t);
            assert_eq!(duality_matrix(&d), rational::identity(d.rank), "{t}");
        }
    }

    #[test]
    fn a4_pairings() {
        let d = a("A4");
        let theta = CochVec::new(qvec(&[6, 7, -12, 9, -10]));
        let got: Vec<Q> = fundamental_weights(&d).iter().map(|l| pair(&d, l, &theta).unwrap()).collect();
        assert_eq!(got, qvec(&[6, 13, 1, 10]));
    }

    /// Root-sum oracle: add up the listed roots by hand.
    #[test]
    fn rho_prime_a2() {
        let d = a("A2");
        let full = rho_prime(&d, &ParabolicIndex::empty()).unwrap();
        assert_eq!(full.fw_coords.unwrap(), qvec(&[2, 2]));
        assert_eq!(full.coords, qvec(&[2, 0, -2]));

        let r = rho_prime(&d, &"1".parse().unwrap()).unwrap();
        // e1-e3 and e2-e3
        assert_eq!(r.coords, qvec(&[1, 1, -2]));
        assert_eq!(r.fw_coords.unwrap(), qvec(&[0, 3]));

        let all = rho_prime(&d, &ParabolicIndex::full(2)).unwrap();
        assert!(rational::is_zero_vec(&all.coords));
    }

    #[test]
    fn rho_prime_a1_is_two_lambda() {
        let d = a("A1");
        let r = rho_prime(&d, &ParabolicIndex::empty()).unwrap();
        assert_eq!(r.fw_coords.unwrap(), qvec(&[2]));
    }

    #[test]
    fn k_alpha_type_a_is_n() {
        for n in 2..=5 {
            let d = a(&format!("A{}", n - 1));
            for i in 0..d.rank {
                assert_eq!(k_alpha(&d, i).unwrap(), q(n as i64));
            }
        }
    }

    #[test]
    fn reflection_permutes_a2_roots() {
        let d = a("A2");
        let mut images: Vec<Vec<Q>> = d
            .positive_roots
            .iter()
            .filter(|p| p.v != d.simple_roots[0])
            .map(|p| reflect(&d, &CharVec::new(p.v.clone()), 0).unwrap().coords)
            .collect();
        images.sort();
        let mut want = vec![qvec(&[0, 1, -1]), qvec(&[1, 0, -1])];
        want.sort();
        assert_eq!(images, want);
        let alpha = d.simple_root(0);
        assert_eq!(reflect(&d, &alpha, 0).unwrap().coords, rational::scale(&q(-1), &alpha.coords));
    }

    #[test]
    fn explicit_bad_weights_rejected() {
        let good = ExplicitData {
            simple_roots: vec![qvec(&[1, -1])],
            positive_roots: vec![PositiveRoot { v: qvec(&[1, -1]), mult: 1, simple_coords: vec![] }],
            gram: rational::identity(2),
            ratios: vec![q(1)],
            fundamental_weights: Some(vec![vec![frac(1, 2), frac(-1, 2)]]),
        };
        assert!(build_root_datum(&DatumSpec::Explicit(good.clone())).is_ok());
        let mut bad = good.clone();
        bad.fundamental_weights = Some(vec![qvec(&[1, -1])]);
        let err = build_root_datum(&DatumSpec::Explicit(bad)).unwrap_err();
        assert!(err.to_string().contains("duality"), "{err}");
        let mut nonpd = good;
        nonpd.gram = vec![qvec(&[1, 2]), qvec(&[2, 1])];
        assert!(build_root_datum(&DatumSpec::Explicit(nonpd)).is_err());
    }

    #[test]
    fn explicit_bc1_with_multiplicities() {
        // Relative root system of SU(2,1): roots a (mult 2) and 2a (mult 1).
        let json = r#"{
            "simple_roots": [["1"]],
            "positive_roots": [{"v": ["1"], "mult": 2}, {"v": ["2"], "mult": 1}],
            "gram": [["1"]],
            "ratios": ["1"]
        }"#;
        let data: ExplicitData = serde_json::from_str(json).unwrap();
        let d = build_root_datum(&DatumSpec::Explicit(data)).unwrap();
        let r = rho_prime(&d, &ParabolicIndex::empty()).unwrap();
        // 2a + 2a = 4a = 8 lambda since lambda = a/2.
        assert_eq!(r.fw_coords.unwrap(), qvec(&[8]));
    }

    #[test]
    fn explicit_roundtrip_json() {
        let d = a("B2");
        let data = ExplicitData {
            simple_roots: d.simple_roots.clone(),
            positive_roots: d.positive_roots.clone(),
            gram: d.gram.clone(),
            ratios: d.duality_ratios.clone(),
            fundamental_weights: None,
        };
        let text = serde_json::to_string(&data).unwrap();
        let back: ExplicitData = serde_json::from_str(&text).unwrap();
        let rebuilt = build_root_datum(&DatumSpec::Explicit(back)).unwrap();
        assert_eq!(rebuilt.fundamental_weights, d.fundamental_weights);
    }

    #[test]
    fn parabolic_parsing() {
        let f: ParabolicIndex = "a1, 3".parse().unwrap();
        assert_eq!(f.subset, [0, 2].into_iter().collect());
        assert_eq!(f.to_string(), "{a1,a3}");
        assert!("".parse::<ParabolicIndex>().unwrap().is_empty());
        assert!("0".parse::<ParabolicIndex>().is_err());
        assert_eq!(serde_json::to_string(&f).unwrap(), "[1,3]");
    }

    #[test]
    fn projection_splits_theta() {
        let d = a("A4");
        let theta = CochVec::new(qvec(&[6, 7, -12, 9, -10]));
        let f: ParabolicIndex = "2,3".parse().unwrap();
        let p = f_projection(&d, &f, &theta).unwrap();
        assert_eq!(rational::add(&p.theta_f.coords, &p.theta_rest.coords), theta.coords);
        for a in 0..4 {
            let on_f = pair(&d, &d.fundamental_weight(a), &p.theta_f).unwrap();
            let want = if f.contains(a) { p.lambda_coords[a].clone() } else { Q::zero() };
            assert_eq!(on_f, want);
        }
    }

    #[test]
    fn metric_scale_only_affects_norms() {
        let d = a("A2").with_metric_scale(q(4)).unwrap();
        assert_eq!(d.norm(&qvec(&[1, -1, 0])), 8f64.sqrt());
        let theta = CochVec::new(qvec(&[1, 0, -1]));
        assert_eq!(pair(&d, &d.fundamental_weight(0), &theta).unwrap(), q(1));
    }

    fn small_type() -> impl Strategy<Value = RootDatum> {
        prop::sample::select(CartanType::small_types()).prop_map(split_datum)
    }

    fn rational_vec(dim: usize) -> impl Strategy<Value = Vec<Q>> {
        prop::collection::vec((-20i64..=20, 1i64..=6), dim)
            .prop_map(|v| v.into_iter().map(|(n, d)| frac(n, d)).collect())
    }

    proptest! {
        #[test]
        fn reflection_is_isometric_involution(
            (d, w, b) in small_type().prop_flat_map(|d| {
                let dim = d.ambient_dim;
                let rank = d.rank;
                (Just(d), rational_vec(dim), 0..rank)
            })
        ) {
            let wv = CharVec::new(w.clone());
            let once = reflect(&d, &wv, b).unwrap();
            let twice = reflect(&d, &once, b).unwrap();
            prop_assert_eq!(&twice.coords, &w);
            prop_assert_eq!(d.inner(&once.coords, &once.coords), d.inner(&w, &w));
        }

        #[test]
        fn rho_prime_positive_on_complement(
            (d, mask) in small_type().prop_flat_map(|d| {
                let n = 1u32 << d.rank;
                (Just(d), 0..n)
            })
        ) {
            let f: ParabolicIndex = (0..d.rank).filter(|i| mask >> i & 1 == 1).collect();
            let r = rho_prime(&d, &f).unwrap();
            let m = r.fw_coords.clone().unwrap();
            for a in 0..d.rank {
                prop_assert_eq!(f.contains(a), m[a].is_zero());
            }
            // fw coordinates reproduce the vector.
            prop_assert_eq!(d.from_fw_coords(&m).unwrap().coords, r.coords);
        }

        /// The positive Weyl chamber sits inside the dual cone.
        #[test]
        fn chamber_inside_dual_cone(
            (d, theta) in small_type().prop_flat_map(|d| {
                let dim = d.ambient_dim;
                (Just(d), rational_vec(dim))
            })
        ) {
            let th = CochVec::new(theta);
            let in_chamber = (0..d.rank).all(|a| !pair(&d, &d.simple_root(a), &th).unwrap().is_negative());
            if in_chamber {
                for a in 0..d.rank {
                    prop_assert!(!pair(&d, &d.fundamental_weight(a), &th).unwrap().is_negative());
                }
            }
        }

        #[test]
        fn pairing_is_bilinear(
            x in rational_vec(5), y in rational_vec(5), t in rational_vec(5), c in -5i64..5
        ) {
            let d = a("A4");
            let th = CochVec::new(t);
            let lhs = pair(&d, &CharVec::new(rational::add(&x, &rational::scale(&q(c), &y))), &th).unwrap();
            let rhs = pair(&d, &CharVec::new(x), &th).unwrap() + q(c) * pair(&d, &CharVec::new(y), &th).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
