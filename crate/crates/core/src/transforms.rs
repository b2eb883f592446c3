//! Blow-ups, blow-downs and the Cremona transform at the level of helix classes.
//!
//! Blowing up two points `p, q` of a quadratic helix `(L, psi)` gives the cubic helix
//! `G_i = psi^{i*} L - d_i` with `d_{2j} = tau^{-j} p` and `d_{2j+1} = tau^{-j} q`.
//! Blowing down a point `p` of a cubic helix gives `G_i = L_{2i} + L_{2i+1} - tau^{-i} p`.
//! Both targets depend on `tau` only, so the class computations are root-free; the
//! strict entry points additionally realize `alpha` or `psi'` in the group.

use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{Group, GroupElement, GroupError};
use crate::helix::{
    CubicHelixSpec, Helix, HelixData, HelixError, HelixKind, HelixWindow, QuadraticHelixSpec,
};
use crate::picard::{
    apply_translation, class_add, class_sub, collinear, point_class, same_tau_orbit,
    DivisorClass, PicardError, Translation,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Helix(#[from] HelixError),
    #[error(transparent)]
    Picard(#[from] PicardError),
    #[error("tau is the identity; the transform needs tau != Id")]
    TrivialTau,
    #[error("{host} helix expected as host, got a {found} helix")]
    HostKind { host: HelixKind, found: HelixKind },
    #[error("tau-orbit rule: base points {first} and {second} lie in the same tau-orbit")]
    SameTauOrbit {
        first: &'static str,
        second: &'static str,
    },
    #[error("collinearity rule: p, q, r lie on a line of the embedding")]
    Collinear,
    #[error("splitting rule: p = tau^{shift} q")]
    Msplits { shift: i64 },
    #[error("no square root: 2x = {target} has no solution, so alpha does not exist in this group")]
    NoSquareRoot { target: GroupElement },
    #[error("no cube root: 3x = {target} has no solution, so psi' does not exist in this group")]
    NoCubeRoot { target: GroupElement },
}

/// The blow-up point `d_i` of position `i`.
pub fn base_divisor(
    group: &Group,
    tau: &Translation,
    p: &GroupElement,
    q: &GroupElement,
    i: i64,
) -> Result<GroupElement, GroupError> {
    let point = if i.rem_euclid(2) == 0 { p } else { q };
    apply_translation(group, tau, -i.div_euclid(2), point)
}

fn require_kind<H: Helix + ?Sized>(host: &H, kind: HelixKind) -> Result<(), TransformError> {
    if host.kind() != kind {
        return Err(TransformError::HostKind {
            host: kind,
            found: host.kind(),
        });
    }
    Ok(())
}

/// `[G_i] = [psi^{i*} L] - d_i` for a quadratic host.
pub fn blow_up_class<H: Helix + ?Sized>(
    group: &Group,
    host: &H,
    p: &GroupElement,
    q: &GroupElement,
    i: i64,
) -> Result<DivisorClass, TransformError> {
    require_kind(host, HelixKind::Quadratic)?;
    let tau = host.tau(group)?;
    let d = base_divisor(group, &tau, p, q, i)?;
    Ok(class_sub(group, &host.class(group, i)?, &point_class(group, &d)?)?)
}

/// `[G_i] = [L_{2i}] + [L_{2i+1}] - tau^{-i} p` for a cubic host.
pub fn blow_down_class<H: Helix + ?Sized>(
    group: &Group,
    host: &H,
    p: &GroupElement,
    i: i64,
) -> Result<DivisorClass, TransformError> {
    require_kind(host, HelixKind::Cubic)?;
    let tau = host.tau(group)?;
    let pair = class_add(group, &host.class(group, 2 * i)?, &host.class(group, 2 * i + 1)?)?;
    let point = apply_translation(group, &tau, -i, p)?;
    Ok(class_sub(group, &pair, &point_class(group, &point)?)?)
}

/// Root-free cubic helix produced by blowing up `p, q`.
pub fn blow_up_data<H: Helix + ?Sized>(
    group: &Group,
    host: &H,
    p: &GroupElement,
    q: &GroupElement,
) -> Result<HelixData, TransformError> {
    Ok(HelixData::Cubic {
        l0: blow_up_class(group, host, p, q, 0)?,
        l1: blow_up_class(group, host, p, q, 1)?,
        tau: host.tau(group)?,
    })
}

/// Root-free quadratic helix produced by blowing down `p`.
pub fn blow_down_data<H: Helix + ?Sized>(
    group: &Group,
    host: &H,
    p: &GroupElement,
) -> Result<HelixData, TransformError> {
    Ok(HelixData::Quadratic {
        l: blow_down_class(group, host, p, 0)?,
        tau: host.tau(group)?,
    })
}

fn check_tau(group: &Group, tau: &Translation) -> Result<(), TransformError> {
    if group.is_identity(&tau.0) {
        return Err(TransformError::TrivialTau);
    }
    Ok(())
}

fn check_orbits(
    group: &Group,
    tau: &Translation,
    named: &[(&'static str, &GroupElement)],
) -> Result<(), TransformError> {
    for (k, (first, a)) in named.iter().enumerate() {
        for (second, b) in &named[k + 1..] {
            if same_tau_orbit(group, a, b, tau)? {
                return Err(TransformError::SameTauOrbit { first, second });
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlowUpSpec {
    pub host: QuadraticHelixSpec,
    pub p: GroupElement,
    pub q: GroupElement,
}

impl BlowUpSpec {
    pub fn new(
        group: &Group,
        host: QuadraticHelixSpec,
        p: GroupElement,
        q: GroupElement,
    ) -> Result<Self, TransformError> {
        let spec = BlowUpSpec { host, p, q };
        spec.validate(group)?;
        Ok(spec)
    }

    /// Full validation, including the orbit hypothesis.
    pub fn validate(&self, group: &Group) -> Result<(), TransformError> {
        self.validate_structure(group)?;
        let tau = self.host.tau(group)?;
        check_orbits(group, &tau, &[("p", &self.p), ("q", &self.q)])
    }

    /// Membership, degrees and `tau != Id`; the orbit hypothesis is not checked.
    pub fn validate_structure(&self, group: &Group) -> Result<(), TransformError> {
        QuadraticHelixSpec::new(group, self.host.l, self.host.psi)?;
        group.check(&self.p)?;
        group.check(&self.q)?;
        check_tau(group, &self.host.tau(group)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlowDownSpec {
    pub host: CubicHelixSpec,
    pub p: GroupElement,
}

impl BlowDownSpec {
    pub fn new(group: &Group, host: CubicHelixSpec, p: GroupElement) -> Result<Self, TransformError> {
        let spec = BlowDownSpec { host, p };
        spec.validate(group)?;
        Ok(spec)
    }

    pub fn validate(&self, group: &Group) -> Result<(), TransformError> {
        CubicHelixSpec::new(group, self.host.l0, self.host.l1, self.host.alpha)?;
        group.check(&self.p)?;
        check_tau(group, &self.host.tau(group)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlowUpOutput {
    pub target: CubicHelixSpec,
    pub alpha_roots: Vec<GroupElement>,
    pub window: HelixWindow,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlowDownOutput {
    pub target: QuadraticHelixSpec,
    pub psi_roots: Vec<GroupElement>,
    pub window: HelixWindow,
}

/// Blow-up packaged as a cubic helix spec with `alpha` the first solution of `2x = t_tau`.
pub fn blow_up(
    group: &Group,
    spec: &BlowUpSpec,
    window: RangeInclusive<i64>,
) -> Result<BlowUpOutput, TransformError> {
    spec.validate(group)?;
    let data = blow_up_data(group, &spec.host, &spec.p, &spec.q)?;
    let tau = data.tau_point();
    let alpha_roots = group.solve_division(2, &tau)?;
    let alpha = *alpha_roots
        .first()
        .ok_or(TransformError::NoSquareRoot { target: tau })?;
    let HelixData::Cubic { l0, l1, .. } = data else {
        unreachable!("blow-up data is cubic")
    };
    let target = CubicHelixSpec::new(group, l0, l1, Translation(alpha))?;
    Ok(BlowUpOutput {
        window: data.window(group, window)?,
        target,
        alpha_roots,
    })
}

/// Blow-down packaged as a quadratic helix spec with `psi'` the first solution of `3x = t_tau`.
pub fn blow_down(
    group: &Group,
    spec: &BlowDownSpec,
    window: RangeInclusive<i64>,
) -> Result<BlowDownOutput, TransformError> {
    spec.validate(group)?;
    let data = blow_down_data(group, &spec.host, &spec.p)?;
    let tau = data.tau_point();
    let psi_roots = group.solve_division(3, &tau)?;
    let psi = *psi_roots
        .first()
        .ok_or(TransformError::NoCubeRoot { target: tau })?;
    let HelixData::Quadratic { l, .. } = data else {
        unreachable!("blow-down data is quadratic")
    };
    let target = QuadraticHelixSpec::new(group, l, Translation(psi))?;
    Ok(BlowDownOutput {
        window: data.window(group, window)?,
        target,
        psi_roots,
    })
}

/// `p'` with `p + q + tau p' = [L_0]`.
pub fn inverse_point_blow_up(
    group: &Group,
    l_sum: &GroupElement,
    tau: &Translation,
    p: &GroupElement,
    q: &GroupElement,
) -> Result<GroupElement, GroupError> {
    let rest = group.sub(&group.sub(l_sum, p)?, q)?;
    apply_translation(group, tau, -1, &rest)
}

/// `(p', q')` with `p + tau q' = [L_0]` and `p + p' = [L_1]`.
pub fn inverse_points_blow_down(
    group: &Group,
    l0_sum: &GroupElement,
    l1_sum: &GroupElement,
    tau: &Translation,
    p: &GroupElement,
) -> Result<(GroupElement, GroupElement), GroupError> {
    let q_prime = apply_translation(group, tau, -1, &group.sub(l0_sum, p)?)?;
    let p_prime = group.sub(l1_sum, p)?;
    Ok((p_prime, q_prime))
}

/// Exhaustive solutions `x` of `p + q + tau x = l_sum`.
pub fn solve_inverse_blow_up(
    group: &Group,
    l_sum: &GroupElement,
    tau: &Translation,
    p: &GroupElement,
    q: &GroupElement,
) -> Result<Vec<GroupElement>, GroupError> {
    let mut out = Vec::new();
    for x in group.elements()? {
        let moved = apply_translation(group, tau, 1, x)?;
        if group.sum([p, q, &moved])? == *l_sum {
            out.push(*x);
        }
    }
    Ok(out)
}

/// Exhaustive solutions of `p + tau q' = l0_sum` and of `p + p' = l1_sum`, as `(p' set, q' set)`.
pub fn solve_inverse_blow_down(
    group: &Group,
    l0_sum: &GroupElement,
    l1_sum: &GroupElement,
    tau: &Translation,
    p: &GroupElement,
) -> Result<(Vec<GroupElement>, Vec<GroupElement>), GroupError> {
    let (mut ps, mut qs) = (Vec::new(), Vec::new());
    for x in group.elements()? {
        if group.add(p, x)? == *l1_sum {
            ps.push(*x);
        }
        if group.add(p, &apply_translation(group, tau, 1, x)?)? == *l0_sum {
            qs.push(*x);
        }
    }
    Ok((ps, qs))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvertedBlowUp {
    pub p_prime: GroupElement,
    /// The cubic helix of the blow-up, which hosts the inverse blow-down.
    pub target: HelixData,
    /// Present when `alpha` exists in the group.
    pub spec: Option<BlowDownSpec>,
    pub alpha_roots: Vec<GroupElement>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvertedBlowDown {
    pub p_prime: GroupElement,
    pub q_prime: GroupElement,
    /// The quadratic helix of the blow-down, which hosts the inverse blow-up.
    pub target: HelixData,
    /// Present when `psi'` exists in the group. Built without the orbit check.
    pub spec: Option<BlowUpSpec>,
    pub psi_roots: Vec<GroupElement>,
    /// Whether `p'` and `q'` lie in different tau-orbits.
    pub orbits_separated: bool,
}

pub fn invert_blow_up(group: &Group, spec: &BlowUpSpec) -> Result<InvertedBlowUp, TransformError> {
    spec.validate_structure(group)?;
    let tau = spec.host.tau(group)?;
    let target = blow_up_data(group, &spec.host, &spec.p, &spec.q)?;
    let p_prime = inverse_point_blow_up(group, &spec.host.l.sum, &tau, &spec.p, &spec.q)?;
    let alpha_roots = group.solve_division(2, &tau.0)?;
    let spec = match (alpha_roots.first(), target) {
        (Some(alpha), HelixData::Cubic { l0, l1, .. }) => Some(BlowDownSpec {
            host: CubicHelixSpec::new(group, l0, l1, Translation(*alpha))?,
            p: p_prime,
        }),
        _ => None,
    };
    Ok(InvertedBlowUp {
        p_prime,
        target,
        spec,
        alpha_roots,
    })
}

pub fn invert_blow_down(
    group: &Group,
    spec: &BlowDownSpec,
) -> Result<InvertedBlowDown, TransformError> {
    spec.validate(group)?;
    let tau = spec.host.tau(group)?;
    let target = blow_down_data(group, &spec.host, &spec.p)?;
    let (p_prime, q_prime) =
        inverse_points_blow_down(group, &spec.host.l0.sum, &spec.host.l1.sum, &tau, &spec.p)?;
    let psi_roots = group.solve_division(3, &tau.0)?;
    let spec = match (psi_roots.first(), target) {
        (Some(psi), HelixData::Quadratic { l, .. }) => Some(BlowUpSpec {
            host: QuadraticHelixSpec::new(group, l, Translation(*psi))?,
            p: p_prime,
            q: q_prime,
        }),
        _ => None,
    };
    Ok(InvertedBlowDown {
        p_prime,
        q_prime,
        target,
        spec,
        psi_roots,
        orbits_separated: !same_tau_orbit(group, &p_prime, &q_prime, &tau)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "start", rename_all = "lowercase")]
pub enum RoundTripStart {
    BlowUp(BlowUpSpec),
    BlowDown(BlowDownSpec),
}

impl RoundTripStart {
    pub fn validate(&self, group: &Group) -> Result<(), TransformError> {
        match self {
            RoundTripStart::BlowUp(s) => s.validate(group),
            RoundTripStart::BlowDown(s) => s.validate(group),
        }
    }

    pub fn validate_structure(&self, group: &Group) -> Result<(), TransformError> {
        match self {
            RoundTripStart::BlowUp(s) => s.validate_structure(group),
            RoundTripStart::BlowDown(s) => s.validate(group),
        }
    }

    /// Inverse base points from the closed forms: `[p']` or `[p', q']`.
    pub fn inverse_points(&self, group: &Group) -> Result<Vec<GroupElement>, TransformError> {
        match self {
            RoundTripStart::BlowUp(s) => {
                let tau = s.host.tau(group)?;
                Ok(vec![inverse_point_blow_up(group, &s.host.l.sum, &tau, &s.p, &s.q)?])
            }
            RoundTripStart::BlowDown(s) => {
                let tau = s.host.tau(group)?;
                let (p1, q1) =
                    inverse_points_blow_down(group, &s.host.l0.sum, &s.host.l1.sum, &tau, &s.p)?;
                Ok(vec![p1, q1])
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub what: String,
    pub index: Option<i64>,
    pub expected: String,
    pub found: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundTripReport {
    /// `[p']` for a blow-up start, `[p', q']` for a blow-down start.
    pub inverse_points: Vec<GroupElement>,
    /// `[p'', q'']` for a blow-up start, `[p'']` for a blow-down start.
    pub recovered_points: Vec<GroupElement>,
    pub recovered_helix_window: HelixWindow,
    pub matches: bool,
    pub mismatches: Vec<Mismatch>,
    pub notes: Vec<String>,
}

fn compare_point(out: &mut Vec<Mismatch>, what: &str, expected: &GroupElement, found: &GroupElement) {
    if expected != found {
        out.push(Mismatch {
            what: what.to_string(),
            index: None,
            expected: expected.to_string(),
            found: found.to_string(),
        });
    }
}

fn root_note(name: &str, equation: &str, roots: &[GroupElement]) -> String {
    match roots.first() {
        None => format!("{name}: {equation} has no solution in the group; class identities are checked without it"),
        Some(first) => format!("{name}: {} solution(s) of {equation}, canonical {first}", roots.len()),
    }
}

/// Forward transform, inverse, and forward again, comparing recovered data with the start.
pub fn verify_roundtrip(
    group: &Group,
    start: &RoundTripStart,
    window: RangeInclusive<i64>,
) -> Result<RoundTripReport, TransformError> {
    let inverse = start.inverse_points(group)?;
    verify_roundtrip_with(group, start, window, &inverse)
}

/// As [`verify_roundtrip`], with the inverse base points supplied by the caller.
pub fn verify_roundtrip_with(
    group: &Group,
    start: &RoundTripStart,
    window: RangeInclusive<i64>,
    inverse: &[GroupElement],
) -> Result<RoundTripReport, TransformError> {
    start.validate_structure(group)?;
    for x in inverse {
        group.check(x)?;
    }
    let mut mismatches = Vec::new();
    let mut notes = Vec::new();
    let (recovered_points, recovered, original) = match start {
        RoundTripStart::BlowUp(s) => {
            let [p1] = inverse else {
                return Err(GroupError::InvalidArgument("blow-up round trip needs one inverse point".into()).into());
            };
            let tau = s.host.tau(group)?;
            if same_tau_orbit(group, &s.p, &s.q, &tau)? {
                notes.push("p and q share a tau-orbit; identities are checked at class level".into());
            }
            let cubic = blow_up_data(group, &s.host, &s.p, &s.q)?;
            let brute = solve_inverse_blow_up(group, &s.host.l.sum, &tau, &s.p, &s.q)?;
            if brute != [*p1] {
                mismatches.push(Mismatch {
                    what: "p'".into(),
                    index: None,
                    expected: format!("{brute:?}"),
                    found: p1.to_string(),
                });
            }
            notes.push(root_note("alpha", "2x = t_tau", &group.solve_division(2, &tau.0)?));
            let recovered = blow_down_data(group, &cubic, p1)?;
            let HelixData::Cubic { l0, l1, .. } = cubic else { unreachable!() };
            // inverting the blow-down at p' returns the original blow-up points
            let (p2, q2) = inverse_points_blow_down(group, &l0.sum, &l1.sum, &tau, p1)?;
            compare_point(&mut mismatches, "p''", &s.p, &p2);
            compare_point(&mut mismatches, "q''", &s.q, &q2);
            (vec![p2, q2], recovered, s.host.data(group)?)
        }
        RoundTripStart::BlowDown(s) => {
            let [p1, q1] = inverse else {
                return Err(GroupError::InvalidArgument("blow-down round trip needs two inverse points".into()).into());
            };
            let tau = s.host.tau(group)?;
            let quad = blow_down_data(group, &s.host, &s.p)?;
            let (brute_p, brute_q) =
                solve_inverse_blow_down(group, &s.host.l0.sum, &s.host.l1.sum, &tau, &s.p)?;
            if brute_p != [*p1] {
                mismatches.push(Mismatch {
                    what: "p'".into(),
                    index: None,
                    expected: format!("{brute_p:?}"),
                    found: p1.to_string(),
                });
            }
            if brute_q != [*q1] {
                mismatches.push(Mismatch {
                    what: "q'".into(),
                    index: None,
                    expected: format!("{brute_q:?}"),
                    found: q1.to_string(),
                });
            }
            notes.push(root_note("psi'", "3x = t_tau", &group.solve_division(3, &tau.0)?));
            if same_tau_orbit(group, p1, q1, &tau)? {
                notes.push("p' and q' share a tau-orbit; the inverse blow-up is used at class level only".into());
            }
            let recovered = blow_up_data(group, &quad, p1, q1)?;
            let HelixData::Quadratic { l, .. } = quad else { unreachable!() };
            let p2 = inverse_point_blow_up(group, &l.sum, &tau, p1, q1)?;
            compare_point(&mut mismatches, "p''", &s.p, &p2);
            (vec![p2], recovered, s.host.data(group)?)
        }
    };
    let recovered_helix_window = recovered.window(group, window)?;
    for (i, c) in recovered_helix_window.indexed() {
        let expected = original.class(group, i)?;
        if *c != expected {
            mismatches.push(Mismatch {
                what: "L''".into(),
                index: Some(i),
                expected: expected.to_string(),
                found: c.to_string(),
            });
        }
    }
    Ok(RoundTripReport {
        inverse_points: inverse.to_vec(),
        recovered_points,
        recovered_helix_window,
        matches: mismatches.is_empty(),
        mismatches,
        notes,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrivialityFailure {
    pub i: i64,
    pub j: i64,
    pub class: DivisorClass,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrivialityReport {
    pub cells_checked: usize,
    pub failures: Vec<TrivialityFailure>,
}

impl TrivialityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// The section class at cell `(i, j)`, which must be trivial.
///
/// Quadratic host: `[L_{i+j}] - d_j - d_{j+1} - tau^{1-i} p'`.
/// Cubic host: `[L_{i+2j}] - tau^{-j} p - d'_{i-1}` with `d'` built from `(p', q')`.
pub fn section_class(
    group: &Group,
    start: &RoundTripStart,
    inverse: &[GroupElement],
    i: i64,
    j: i64,
) -> Result<DivisorClass, TransformError> {
    let subtract = |c: DivisorClass, pts: &[GroupElement]| -> Result<DivisorClass, GroupError> {
        pts.iter()
            .try_fold(c, |acc, x| class_sub(group, &acc, &point_class(group, x)?))
    };
    match (start, inverse) {
        (RoundTripStart::BlowUp(s), [p1]) => {
            let tau = s.host.tau(group)?;
            let pts = [
                base_divisor(group, &tau, &s.p, &s.q, j)?,
                base_divisor(group, &tau, &s.p, &s.q, j + 1)?,
                apply_translation(group, &tau, 1 - i, p1)?,
            ];
            Ok(subtract(s.host.class(group, i + j)?, &pts)?)
        }
        (RoundTripStart::BlowDown(s), [p1, q1]) => {
            let tau = s.host.tau(group)?;
            let pts = [
                apply_translation(group, &tau, -j, &s.p)?,
                base_divisor(group, &tau, p1, q1, i - 1)?,
            ];
            Ok(subtract(s.host.class(group, i + 2 * j)?, &pts)?)
        }
        _ => Err(GroupError::InvalidArgument("wrong number of inverse points".into()).into()),
    }
}

pub fn section_triviality_check(
    group: &Group,
    start: &RoundTripStart,
    inverse: &[GroupElement],
    window: RangeInclusive<i64>,
) -> Result<TrivialityReport, TransformError> {
    let mut failures = Vec::new();
    let mut cells_checked = 0;
    for i in window.clone() {
        for j in window.clone() {
            cells_checked += 1;
            let class = section_class(group, start, inverse, i, j)?;
            if !class.is_trivial(group) {
                failures.push(TrivialityFailure { i, j, class });
            }
        }
    }
    Ok(TrivialityReport {
        cells_checked,
        failures,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CremonaSpec {
    pub host: QuadraticHelixSpec,
    pub p: GroupElement,
    pub q: GroupElement,
    pub r: GroupElement,
}

impl CremonaSpec {
    pub fn new(
        group: &Group,
        host: QuadraticHelixSpec,
        p: GroupElement,
        q: GroupElement,
        r: GroupElement,
    ) -> Result<Self, TransformError> {
        let spec = CremonaSpec { host, p, q, r };
        spec.validate(group)?;
        Ok(spec)
    }

    pub fn validate(&self, group: &Group) -> Result<(), TransformError> {
        QuadraticHelixSpec::new(group, self.host.l, self.host.psi)?;
        for x in [&self.p, &self.q, &self.r] {
            group.check(x)?;
        }
        let tau = self.host.tau(group)?;
        check_tau(group, &tau)?;
        check_orbits(group, &tau, &[("p", &self.p), ("q", &self.q), ("r", &self.r)])?;
        if collinear(group, &self.p, &self.q, &self.r, &self.host.l)? {
            return Err(TransformError::Collinear);
        }
        for shift in [-1, 0, 1] {
            if self.p == apply_translation(group, &tau, shift, &self.q)? {
                return Err(TransformError::Msplits { shift });
            }
        }
        Ok(())
    }
}

/// `[L_{2i}] + [L_{2i+1}] - tau^{-i}(p + q + r)`, the Cremona helix read directly off the host.
pub fn cremona_direct_class(group: &Group, spec: &CremonaSpec, i: i64) -> Result<DivisorClass, TransformError> {
    let tau = spec.host.tau(group)?;
    let mut c = class_add(
        group,
        &spec.host.class(group, 2 * i)?,
        &spec.host.class(group, 2 * i + 1)?,
    )?;
    for x in [&spec.p, &spec.q, &spec.r] {
        c = class_sub(group, &c, &point_class(group, &apply_translation(group, &tau, -i, x)?)?)?;
    }
    Ok(c)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CremonaComparison {
    pub i: i64,
    pub direct: DivisorClass,
    pub composed: DivisorClass,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CremonaFactorization {
    /// Blow-up of `p, q`.
    pub gamma2: BlowUpSpec,
    /// Blow-down of `r` on the blow-up; absent when `alpha` does not exist in the group.
    pub gamma1: Option<BlowDownSpec>,
    pub intermediate: HelixData,
    pub alpha_roots: Vec<GroupElement>,
    pub comparisons: Vec<CremonaComparison>,
    pub matches: bool,
}

pub fn cremona_factor(
    group: &Group,
    spec: &CremonaSpec,
    window: RangeInclusive<i64>,
) -> Result<CremonaFactorization, TransformError> {
    spec.validate(group)?;
    let gamma2 = BlowUpSpec::new(group, spec.host, spec.p, spec.q)?;
    let intermediate = blow_up_data(group, &spec.host, &spec.p, &spec.q)?;
    let tau = intermediate.tau_point();
    let alpha_roots = group.solve_division(2, &tau)?;
    let gamma1 = match (alpha_roots.first(), intermediate) {
        (Some(alpha), HelixData::Cubic { l0, l1, .. }) => Some(BlowDownSpec::new(
            group,
            CubicHelixSpec::new(group, l0, l1, Translation(*alpha))?,
            spec.r,
        )?),
        _ => None,
    };
    let mut comparisons = Vec::new();
    for i in window {
        comparisons.push(CremonaComparison {
            i,
            direct: cremona_direct_class(group, spec, i)?,
            composed: blow_down_class(group, &intermediate, &spec.r, i)?,
        });
    }
    let matches = comparisons.iter().all(|c| c.direct == c.composed);
    Ok(CremonaFactorization {
        gamma2,
        gamma1,
        intermediate,
        alpha_roots,
        comparisons,
        matches,
    })
}

/// `s(G_{i+1}) - s(G_i)` over the window.
pub fn sum_differences<H: Helix + ?Sized>(
    group: &Group,
    helix: &H,
    window: RangeInclusive<i64>,
) -> Result<Vec<GroupElement>, GroupError> {
    window
        .map(|i| group.sub(&helix.class(group, i + 1)?.sum, &helix.class(group, i)?.sum))
        .collect()
}

/// Whether consecutive classes differ by one fixed translation, i.e. the helix is 1-periodic.
pub fn is_one_periodic<H: Helix + ?Sized>(
    group: &Group,
    helix: &H,
    window: RangeInclusive<i64>,
) -> Result<bool, GroupError> {
    let diffs = sum_differences(group, helix, window)?;
    Ok(diffs.windows(2).all(|w| w[0] == w[1]))
}

/// Whether `q = p + t_sigma` for a translation with `sigma^2 = psi^{-3}`, i.e. `2(q - p) = -t_tau`.
pub fn sigma_compatible(
    group: &Group,
    tau: &Translation,
    p: &GroupElement,
    q: &GroupElement,
) -> Result<bool, GroupError> {
    let d = group.sub(q, p)?;
    Ok(group.add(&d, &d)? == group.neg(&tau.0)?)
}
