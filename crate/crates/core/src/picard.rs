//! Divisor classes on the model curve.
//!
//! On an elliptic curve a line bundle is determined up to isomorphism by its
//! degree and the group sum of the points of any divisor representing it, so a
//! class is stored as exactly that pair. Pulling back along the translation
//! `y -> y + t` sends `O(q)` to `O(q - t)`, hence subtracts `degree * t` from the sum.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{Group, GroupElement, GroupError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PicardError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("collinearity needs a degree-3 embedding class, got degree {0}")]
    InvalidEmbedding(i64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DivisorClass {
    pub degree: i64,
    pub sum: GroupElement,
}

impl DivisorClass {
    pub fn new(degree: i64, sum: GroupElement) -> Self {
        DivisorClass { degree, sum }
    }

    pub fn trivial(group: &Group) -> Self {
        DivisorClass::new(0, group.identity())
    }

    pub fn is_trivial(&self, group: &Group) -> bool {
        self.degree == 0 && group.is_identity(&self.sum)
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.degree, self.sum)
    }
}

/// Translation `y -> y + t` of the curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Translation(pub GroupElement);

impl Translation {
    pub fn point(&self) -> GroupElement {
        self.0
    }

    /// `k`-th power of the translation, i.e. translation by `k * t`.
    pub fn pow(&self, group: &Group, k: i64) -> Result<Translation, GroupError> {
        Ok(Translation(group.scalar_mul(k, &self.0)?))
    }

    pub fn order(&self, group: &Group) -> Result<u64, GroupError> {
        group.element_order(&self.0)
    }
}

pub fn class_add(
    group: &Group,
    c1: &DivisorClass,
    c2: &DivisorClass,
) -> Result<DivisorClass, GroupError> {
    Ok(DivisorClass::new(c1.degree + c2.degree, group.add(&c1.sum, &c2.sum)?))
}

pub fn class_sub(
    group: &Group,
    c1: &DivisorClass,
    c2: &DivisorClass,
) -> Result<DivisorClass, GroupError> {
    Ok(DivisorClass::new(c1.degree - c2.degree, group.sub(&c1.sum, &c2.sum)?))
}

pub fn class_scale(group: &Group, k: i64, c: &DivisorClass) -> Result<DivisorClass, GroupError> {
    Ok(DivisorClass::new(k * c.degree, group.scalar_mul(k, &c.sum)?))
}

pub fn point_class(group: &Group, p: &GroupElement) -> Result<DivisorClass, GroupError> {
    group.check(p)?;
    Ok(DivisorClass::new(1, *p))
}

/// Class of the effective divisor `p_1 + ... + p_k`.
pub fn divisor_class<'a, I>(group: &Group, points: I) -> Result<DivisorClass, GroupError>
where
    I: IntoIterator<Item = &'a GroupElement>,
{
    points.into_iter().try_fold(DivisorClass::trivial(group), |acc, p| {
        class_add(group, &acc, &point_class(group, p)?)
    })
}

/// `tau^k` applied to the point `p`: `p + k * t`.
pub fn apply_translation(
    group: &Group,
    tr: &Translation,
    k: i64,
    p: &GroupElement,
) -> Result<GroupElement, GroupError> {
    group.add(p, &group.scalar_mul(k, &tr.0)?)
}

pub fn pullback(
    group: &Group,
    tr: &Translation,
    c: &DivisorClass,
) -> Result<DivisorClass, GroupError> {
    let shift = group.scalar_mul(c.degree, &tr.0)?;
    Ok(DivisorClass::new(c.degree, group.sub(&c.sum, &shift)?))
}

/// Pullback along `tr^k`.
pub fn pullback_pow(
    group: &Group,
    tr: &Translation,
    k: i64,
    c: &DivisorClass,
) -> Result<DivisorClass, GroupError> {
    pullback(group, &tr.pow(group, k)?, c)
}

/// Degree-zero class `N` with `tr^* M = M + deg(M) * N`.
pub fn n_class(group: &Group, tr: &Translation) -> Result<DivisorClass, GroupError> {
    Ok(DivisorClass::new(0, group.neg(&tr.0)?))
}

/// Dimension of global sections (Riemann-Roch on a genus-one curve).
pub fn h0(group: &Group, c: &DivisorClass) -> u64 {
    match c.degree {
        d if d > 0 => d as u64,
        0 if c.is_trivial(group) => 1,
        _ => 0,
    }
}

/// Whether `p, q, r` lie on a line of the embedding given by `l`.
pub fn collinear(
    group: &Group,
    p: &GroupElement,
    q: &GroupElement,
    r: &GroupElement,
    l: &DivisorClass,
) -> Result<bool, PicardError> {
    if l.degree != 3 {
        return Err(PicardError::InvalidEmbedding(l.degree));
    }
    Ok(divisor_class(group, [p, q, r])? == *l)
}

/// Whether `p - q` lies in the subgroup generated by `tau`.
pub fn same_tau_orbit(
    group: &Group,
    p: &GroupElement,
    q: &GroupElement,
    tau: &Translation,
) -> Result<bool, GroupError> {
    let diff = group.sub(p, q)?;
    let order = tau.order(group)?;
    let mut multiple = group.identity();
    for _ in 0..order {
        if multiple == diff {
            return Ok(true);
        }
        multiple = group.add(&multiple, &tau.0)?;
    }
    Ok(false)
}
