//! Decision procedure for the limit of translated measures a_n mu_{Q_E}:
//! divergence, convergence to mu_{Q_F}, Haar, or not covered by the decision rules.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::rational::{is_zero_vec, serde_qvec, Q};
use crate::rootsys::{pair, CochVec, ParabolicIndex, RootDatum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Behavior {
    ToZero,
    One,
    BoundedBelowAwayFromZero,
    ToInfinity,
}

/// Behavior of lambda_a(a_n) for each simple root outside E.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceBehavior {
    pub per_root: BTreeMap<usize, Behavior>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "F", rename_all = "snake_case")]
pub enum VerdictKind {
    Diverges,
    ConvergesTo(ParabolicIndex),
    Haar,
    NotCovered,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "position", content = "facets", rename_all = "snake_case")]
pub enum ConePosition {
    /// All (a, theta) > 0; a refinement of `DualConeInterior`.
    WeylChamberInterior,
    DualConeInterior,
    /// All (lambda_a, theta) >= 0; the facets listed are those with equality.
    DualConeBoundary(ParabolicIndex),
    OutsideDualCone,
}

impl ConePosition {
    pub fn in_dual_interior(&self) -> bool {
        matches!(self, ConePosition::WeylChamberInterior | ConePosition::DualConeInterior)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    /// 1-based simple root label.
    pub root: usize,
    #[serde(with = "opt_q", default, skip_serializing_if = "Option::is_none")]
    pub pairing: Option<Q>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub behavior: Option<Behavior>,
}

mod opt_q {
    use super::*;
    use crate::rational::serde_q;

    pub fn serialize<S: serde::Serializer>(v: &Option<Q>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match v {
            Some(v) => serde_q::serialize(v, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Option<Q>, D::Error> {
        #[derive(Deserialize)]
        struct Wrap(#[serde(with = "serde_q")] Q);
        Ok(Option::<Wrap>::deserialize(d)?.map(|w| w.0))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeVerdict {
    pub verdict: VerdictKind,
    pub witnesses: Vec<Witness>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cone_position: Option<ConePosition>,
    /// (lambda_a, theta) for every simple root (ray verdicts only).
    #[serde(with = "serde_qvec", default, skip_serializing_if = "Vec::is_empty")]
    pub weight_pairings: Vec<Q>,
    /// (a, theta) for every simple root (ray verdicts only).
    #[serde(with = "serde_qvec", default, skip_serializing_if = "Vec::is_empty")]
    pub root_pairings: Vec<Q>,
    /// Simple roots with (a, theta) < 0: theta leaves the Weyl chamber there.
    #[serde(default)]
    pub weyl_violations: ParabolicIndex,
}

fn verdict_for(rank: usize, f: ParabolicIndex) -> VerdictKind {
    if f.len() == rank {
        VerdictKind::Haar
    } else {
        VerdictKind::ConvergesTo(f)
    }
}

fn check_theta(datum: &RootDatum, theta: &CochVec) -> Result<()> {
    if theta.coords.len() != datum.ambient_dim {
        return Err(Error::Dimension { expected: datum.ambient_dim, got: theta.coords.len() });
    }
    Ok(())
}

pub fn cone_position(datum: &RootDatum, theta: &CochVec) -> Result<ConePosition> {
    check_theta(datum, theta)?;
    let weights: Vec<Q> = (0..datum.rank)
        .map(|a| pair(datum, &datum.fundamental_weight(a), theta))
        .collect::<Result<_>>()?;
    let roots: Vec<Q> = (0..datum.rank)
        .map(|a| pair(datum, &datum.simple_root(a), theta))
        .collect::<Result<_>>()?;
    Ok(position_from(&weights, &roots))
}

fn position_from(weights: &[Q], roots: &[Q]) -> ConePosition {
    if roots.iter().all(Signed::is_positive) {
        ConePosition::WeylChamberInterior
    } else if weights.iter().all(Signed::is_positive) {
        ConePosition::DualConeInterior
    } else if weights.iter().all(|w| !w.is_negative()) {
        ConePosition::DualConeBoundary(
            weights.iter().enumerate().filter(|(_, w)| w.is_zero()).map(|(a, _)| a).collect(),
        )
    } else {
        ConePosition::OutsideDualCone
    }
}

/// Verdict for the ray a_t = theta(e^t), t -> infinity.
pub fn classify_ray(datum: &RootDatum, e: &ParabolicIndex, theta: &CochVec) -> Result<RegimeVerdict> {
    check_theta(datum, theta)?;
    e.check(datum.rank)?;
    if is_zero_vec(&theta.coords) {
        return invalid("theta must be nonzero");
    }
    let weights: Vec<Q> = (0..datum.rank)
        .map(|a| pair(datum, &datum.fundamental_weight(a), theta))
        .collect::<Result<_>>()?;
    let roots: Vec<Q> = (0..datum.rank)
        .map(|a| pair(datum, &datum.simple_root(a), theta))
        .collect::<Result<_>>()?;

    let outside: Vec<usize> = (0..datum.rank).filter(|a| !e.contains(*a)).collect();
    let negative: Vec<usize> = outside.iter().copied().filter(|&a| weights[a].is_negative()).collect();
    let (verdict, witness_roots) = if !negative.is_empty() {
        (VerdictKind::Diverges, negative)
    } else {
        let f: ParabolicIndex = e
            .iter()
            .chain(outside.iter().copied().filter(|&a| weights[a].is_positive()))
            .collect();
        (verdict_for(datum.rank, f), outside)
    };
    let witnesses = witness_roots
        .into_iter()
        .map(|a| Witness { root: a + 1, pairing: Some(weights[a].clone()), behavior: None })
        .collect();
    let weyl_violations = roots.iter().enumerate().filter(|(_, r)| r.is_negative()).map(|(a, _)| a).collect();
    Ok(RegimeVerdict {
        verdict,
        witnesses,
        cone_position: Some(position_from(&weights, &roots)),
        weight_pairings: weights,
        root_pairings: roots,
        weyl_violations,
    })
}

/// Behavior profile a ray induces on the simple roots outside E.
pub fn behavior_of_ray(datum: &RootDatum, e: &ParabolicIndex, theta: &CochVec) -> Result<SequenceBehavior> {
    check_theta(datum, theta)?;
    let mut per_root = BTreeMap::new();
    for a in (0..datum.rank).filter(|a| !e.contains(*a)) {
        let p = pair(datum, &datum.fundamental_weight(a), theta)?;
        let b = if p.is_positive() {
            Behavior::ToInfinity
        } else if p.is_zero() {
            Behavior::One
        } else {
            Behavior::ToZero
        };
        per_root.insert(a, b);
    }
    Ok(SequenceBehavior { per_root })
}

pub fn classify_sequence(datum: &RootDatum, e: &ParabolicIndex, b: &SequenceBehavior) -> Result<RegimeVerdict> {
    e.check(datum.rank)?;
    let expected: Vec<usize> = (0..datum.rank).filter(|a| !e.contains(*a)).collect();
    let given: Vec<usize> = b.per_root.keys().copied().collect();
    if given != expected {
        return invalid("sequence behavior must cover exactly the simple roots outside E");
    }
    let witness = |a: usize, beh: Behavior| Witness { root: a + 1, pairing: None, behavior: Some(beh) };
    let zeros: Vec<Witness> = b
        .per_root
        .iter()
        .filter(|(_, &beh)| beh == Behavior::ToZero)
        .map(|(&a, &beh)| witness(a, beh))
        .collect();
    let all: Vec<Witness> = b.per_root.iter().map(|(&a, &beh)| witness(a, beh)).collect();
    let verdict = if !zeros.is_empty() {
        return Ok(RegimeVerdict {
            verdict: VerdictKind::Diverges,
            witnesses: zeros,
            cone_position: None,
            weight_pairings: Vec::new(),
            root_pairings: Vec::new(),
            weyl_violations: ParabolicIndex::empty(),
        });
    } else if b.per_root.values().any(|&beh| beh == Behavior::BoundedBelowAwayFromZero) {
        VerdictKind::NotCovered
    } else {
        let f: ParabolicIndex = e
            .iter()
            .chain(b.per_root.iter().filter(|(_, &beh)| beh == Behavior::ToInfinity).map(|(&a, _)| a))
            .collect();
        verdict_for(datum.rank, f)
    };
    Ok(RegimeVerdict {
        verdict,
        witnesses: all,
        cone_position: None,
        weight_pairings: Vec::new(),
        root_pairings: Vec::new(),
        weyl_violations: ParabolicIndex::empty(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    NotCheckable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CondReport {
    pub status: CheckStatus,
    pub details: Vec<String>,
}

impl CondReport {
    fn from_failures(details: Vec<String>, passes: Vec<String>) -> Self {
        if details.is_empty() {
            CondReport { status: CheckStatus::Pass, details: passes }
        } else {
            CondReport { status: CheckStatus::Fail, details }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbsContChecklist {
    pub cond_a: CondReport,
    pub cond_b: CondReport,
    pub cond_c: CondReport,
    pub cond_d: CondReport,
}

/// Checkable conditions for an absolutely continuous limit of a_n mu_{Q_E}
/// along theta, with target parabolic F.
///
/// Condition (a) asks that the derived Levi of Q_F fixes no vector of
/// Lie R_u(Q_F). Root spaces there are one-dimensional, and X_phi is fixed
/// exactly when phi + b and phi - b are both non-roots for every b in F.
pub fn abs_cont_check(
    datum: &RootDatum,
    e: &ParabolicIndex,
    f: &ParabolicIndex,
    theta: &CochVec,
) -> Result<AbsContChecklist> {
    if !datum.split {
        return Err(Error::Unsupported("abs_cont_check needs split root data".into()));
    }
    check_theta(datum, theta)?;
    e.check(datum.rank)?;
    f.check(datum.rank)?;
    if !e.is_subset(f) {
        return invalid("E must be contained in F");
    }

    let mut fixed = Vec::new();
    for phi in datum.roots_outside(f) {
        let moved = f.iter().any(|b| {
            let beta = &datum.simple_roots[b];
            let plus: Vec<Q> = phi.v.iter().zip(beta).map(|(x, y)| x + y).collect();
            let minus: Vec<Q> = phi.v.iter().zip(beta).map(|(x, y)| x - y).collect();
            datum.is_root(&plus) || datum.is_root(&minus)
        });
        if !moved {
            fixed.push(format!("root space of {} is Levi-fixed", crate::rational::fmt_vec(&phi.v)));
        }
    }
    let cond_a = CondReport::from_failures(fixed, Vec::new());

    let mut bad_c = Vec::new();
    for a in 0..datum.rank {
        let p = pair(datum, &datum.fundamental_weight(a), theta)?;
        if !f.contains(a) && !p.is_zero() {
            bad_c.push(format!("(lambda_{}, theta) = {p}, expected 0", a + 1));
        } else if f.contains(a) && !e.contains(a) && !p.is_positive() {
            bad_c.push(format!("(lambda_{}, theta) = {p}, expected > 0", a + 1));
        }
    }
    let cond_c = CondReport::from_failures(bad_c, Vec::new());

    let mut bad_d = Vec::new();
    let mut sums = Vec::new();
    for comp in datum.components(f) {
        let total = datum
            .roots_in_span(&comp)
            .map(|phi| datum.inner(&phi.v, &theta.coords) * Q::from_integer(phi.mult.into()))
            .fold(Q::zero(), |acc, x| acc + x);
        let line = format!("component {comp}: sum of (phi, theta) = {total}");
        if total.is_positive() {
            sums.push(line);
        } else {
            bad_d.push(line);
        }
    }
    let cond_d = CondReport::from_failures(bad_d, sums);

    let cond_b = CondReport {
        status: CheckStatus::NotCheckable,
        details: vec!["invariance under anisotropic factors is not decidable from root data".into()],
    };
    Ok(AbsContChecklist { cond_a, cond_b, cond_c, cond_d })
}
