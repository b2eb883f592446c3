//! Point and counting layer of the I-basis of a quadratic Sklyanin algebra.
//!
//! A monomial `g = x^alpha y^beta z^lambda` moves the three base points
//! `o_1, o_2, o_3 = psi p, psi q, psi r` by powers of `psi`, and the basis element
//! attached to `g` vanishes on runs of `tau`-translates of `p`, `q` and `r`.
//! Admissibility compares those runs with the blown-up points `d_0, ..., d_{h-1}`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{Group, GroupElement, GroupError};
use crate::picard::{apply_translation, same_tau_orbit, Translation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IbasisError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("base points {first} and {second} lie in the same tau-orbit")]
    SameTauOrbit {
        first: &'static str,
        second: &'static str,
    },
    #[error("the closed form is only valid for a <= 0, got a = {a}")]
    OutsideClosedFormDomain { a: i64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Monomial {
    pub alpha: u64,
    pub beta: u64,
    pub lambda: u64,
}

impl Monomial {
    pub const ONE: Monomial = Monomial::new(0, 0, 0);

    pub const fn new(alpha: u64, beta: u64, lambda: u64) -> Self {
        Monomial {
            alpha,
            beta,
            lambda,
        }
    }

    pub fn degree(&self) -> u64 {
        self.alpha + self.beta + self.lambda
    }

    pub fn times_x(self) -> Self {
        Monomial { alpha: self.alpha + 1, ..self }
    }

    pub fn times_y(self) -> Self {
        Monomial { beta: self.beta + 1, ..self }
    }

    pub fn times_z(self) -> Self {
        Monomial { lambda: self.lambda + 1, ..self }
    }

    /// All monomials of total degree `n`, in lexicographic exponent order.
    pub fn of_degree(n: u64) -> impl Iterator<Item = Monomial> {
        (0..=n).flat_map(move |a| (0..=n - a).map(move |b| Monomial::new(a, b, n - a - b)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasePoints {
    pub p: GroupElement,
    pub q: GroupElement,
    pub r: GroupElement,
    pub psi: Translation,
}

impl BasePoints {
    /// Base points with `p, q, r` in pairwise different `tau`-orbits, `tau = psi^3`.
    pub fn new(
        group: &Group,
        p: GroupElement,
        q: GroupElement,
        r: GroupElement,
        psi: Translation,
    ) -> Result<Self, IbasisError> {
        let base = BasePoints { p, q, r, psi };
        for x in [&p, &q, &r, &psi.0] {
            group.check(x)?;
        }
        let tau = base.tau(group)?;
        let named = [("p", &p), ("q", &q), ("r", &r)];
        for (k, (first, a)) in named.iter().enumerate() {
            for (second, b) in &named[k + 1..] {
                if same_tau_orbit(group, a, b, &tau)? {
                    return Err(IbasisError::SameTauOrbit { first, second });
                }
            }
        }
        Ok(base)
    }

    pub fn tau(&self, group: &Group) -> Result<Translation, GroupError> {
        self.psi.pow(group, 3)
    }

    /// `(o_1, o_2, o_3) = (psi p, psi q, psi r)`.
    pub fn o(&self, group: &Group) -> Result<[GroupElement; 3], GroupError> {
        Ok([
            apply_translation(group, &self.psi, 1, &self.p)?,
            apply_translation(group, &self.psi, 1, &self.q)?,
            apply_translation(group, &self.psi, 1, &self.r)?,
        ])
    }
}

/// The `psi`-exponents `(alpha - 2beta - 2lambda, beta - 2alpha - 2lambda, lambda - 2alpha - 2beta)`.
pub fn obar_exponents(g: &Monomial) -> [i64; 3] {
    let (a, b, l) = (g.alpha as i64, g.beta as i64, g.lambda as i64);
    [a - 2 * b - 2 * l, b - 2 * a - 2 * l, l - 2 * a - 2 * b]
}

/// Action of `g` on the base points `o_1, o_2, o_3`.
pub fn obar(group: &Group, g: &Monomial, o: &[GroupElement; 3], psi: &Translation) -> Result<[GroupElement; 3], GroupError> {
    let e = obar_exponents(g);
    Ok([
        apply_translation(group, psi, e[0], &o[0])?,
        apply_translation(group, psi, e[1], &o[1])?,
        apply_translation(group, psi, e[2], &o[2])?,
    ])
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VanishingDivisor {
    pub p: Vec<GroupElement>,
    pub q: Vec<GroupElement>,
    pub r: Vec<GroupElement>,
}

/// `tau`-runs `x, tau^{-1} x, ..., tau^{-(len-1)} x`.
fn run(group: &Group, tau: &Translation, x: &GroupElement, len: u64) -> Result<Vec<GroupElement>, GroupError> {
    (0..len as i64).map(|k| apply_translation(group, tau, -k, x)).collect()
}

/// Points on which the basis element of `g` vanishes, runs of lengths
/// `(beta + lambda, alpha + lambda, alpha + beta)`.
pub fn vanishing_divisor(group: &Group, g: &Monomial, base: &BasePoints) -> Result<VanishingDivisor, GroupError> {
    let tau = base.tau(group)?;
    Ok(VanishingDivisor {
        p: run(group, &tau, &base.p, g.beta + g.lambda)?,
        q: run(group, &tau, &base.q, g.alpha + g.lambda)?,
        r: run(group, &tau, &base.r, g.alpha + g.beta)?,
    })
}

/// Whether the basis element of `g` lies in the ideal of `d_0, ..., d_{h-1}`.
pub fn admissible(g: &Monomial, h: u64) -> bool {
    h.div_ceil(2) <= g.beta + g.lambda && h / 2 <= g.alpha + g.lambda
}

/// Point-level version of [`admissible`]: every `d_k`, `k < h`, occurs in the vanishing divisor
/// with at least its multiplicity among the `d`'s.
pub fn vanishes_on_base_divisors(
    group: &Group,
    g: &Monomial,
    base: &BasePoints,
    h: u64,
) -> Result<bool, GroupError> {
    let tau = base.tau(group)?;
    let div = vanishing_divisor(group, g, base)?;
    let mut pool: Vec<GroupElement> = div.p.into_iter().chain(div.q).chain(div.r).collect();
    for k in 0..h as i64 {
        let point = if k % 2 == 0 { &base.p } else { &base.q };
        let d = apply_translation(group, &tau, -(k / 2), point)?;
        match pool.iter().position(|x| *x == d) {
            Some(at) => {
                pool.swap_remove(at);
            }
            None => return Ok(false),
        }
    }
    Ok(true)
}

/// Exhaustive count of `(alpha, beta, lambda)` with sum `a + b`,
/// `alpha <= a + b - ceil(b/2)` and `beta <= a + b - floor(b/2)`.
pub fn count_admissible(a: i64, b: u64) -> u64 {
    let n = a + b as i64;
    if n < 0 {
        return 0;
    }
    let (alpha_max, beta_max) = (n - b.div_ceil(2) as i64, n - (b / 2) as i64);
    let mut count = 0;
    for alpha in 0..=n {
        for beta in 0..=n - alpha {
            if alpha <= alpha_max && beta <= beta_max {
                count += 1;
            }
        }
    }
    count
}

fn triangle(n: i64) -> u64 {
    if n < 0 {
        0
    } else {
        let n = n as u64;
        (n + 1) * (n + 2) / 2
    }
}

/// Inclusion-exclusion evaluation of [`count_admissible`], valid for every `a`.
pub fn inclusion_exclusion_count(a: i64, b: u64) -> u64 {
    let n = a + b as i64;
    if n < 0 {
        return 0;
    }
    let m1 = (n + 1 - b.div_ceil(2) as i64).max(0);
    let m2 = (n + 1 - (b / 2) as i64).max(0);
    (triangle(n) + triangle(n - m1 - m2)) - triangle(n - m1) - triangle(n - m2)
}

/// `(a+r+1)^2` for `b = 2r` and `(a+r+1)(a+r+2)` for `b = 2r+1`, zero when `2a + b < 0`.
///
/// These equal the admissible count only for `a <= 0`; e.g. `(a, b) = (1, 0)` counts 3, not 4.
pub fn closed_form_count(a: i64, b: u64) -> Result<u64, IbasisError> {
    if a > 0 {
        return Err(IbasisError::OutsideClosedFormDomain { a });
    }
    let b = b as i64;
    if 2 * a + b < 0 {
        return Ok(0);
    }
    let k = (a + b / 2 + 1) as u64;
    let value = if b % 2 == 0 { k * k } else { k * (k + 1) };
    debug_assert_eq!(value, inclusion_exclusion_count(a, b as u64));
    Ok(value)
}

/// Exhaustive count of degree-`n` monomials admissible for `h`.
pub fn dim_m(n: u64, h: u64) -> u64 {
    Monomial::of_degree(n).filter(|g| admissible(g, h)).count() as u64
}

/// Closed form of [`dim_m`] for `n >= h - 1`; `None` below that range.
///
/// Even `h = 2a`: `T(n) - a(a+1)`. Odd `h = 2a+1`: `T(n) - a(a+1)/2 - (a+1)(a+2)/2`.
pub fn dim_m_closed(n: u64, h: u64) -> Option<u64> {
    if n + 1 < h {
        return None;
    }
    let a = h / 2;
    let t = triangle(n as i64);
    Some(if h.is_multiple_of(2) {
        t - a * (a + 1)
    } else {
        t - a * (a + 1) / 2 - (a + 1) * (a + 2) / 2
    })
}
