//! Elliptic helices: sequences of line-bundle classes `(L_i)` on the curve.
//!
//! A quadratic helix is `L_i = psi^{i*} L` with `deg L = 3`. A cubic helix is
//! generated by two degree-2 classes with `L_{i+2} = alpha^* L_i`. In both cases
//! the whole sequence depends only on the starting classes and on
//! `tau = psi^3 = alpha^2`, so [`HelixData`] stores exactly that and never needs
//! a cube or square root to exist in the finite group.

use std::fmt;
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{Group, GroupElement, GroupError};
use crate::picard::{class_add, class_sub, h0, pullback, DivisorClass, Translation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HelixError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("{role} must have degree {expected}, got {found}")]
    Degree {
        role: &'static str,
        expected: i64,
        found: i64,
    },
    #[error("helix window needs at least {needed} classes, got {got}")]
    WindowTooShort { needed: usize, got: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HelixKind {
    Quadratic,
    Cubic,
}

impl fmt::Display for HelixKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HelixKind::Quadratic => "quadratic",
            HelixKind::Cubic => "cubic",
        })
    }
}

/// Anything that produces the classes `L_i` of a helix.
pub trait Helix {
    fn kind(&self) -> HelixKind;
    fn class(&self, group: &Group, i: i64) -> Result<DivisorClass, GroupError>;
    /// `tau = psi^3` for quadratic helices, `tau = alpha^2` for cubic ones.
    fn tau(&self, group: &Group) -> Result<Translation, GroupError>;

    fn window(&self, group: &Group, range: RangeInclusive<i64>) -> Result<HelixWindow, GroupError> {
        let start = *range.start();
        let classes = range.map(|i| self.class(group, i)).collect::<Result<_, _>>()?;
        Ok(HelixWindow { start, classes })
    }
}

fn check_degree(role: &'static str, c: &DivisorClass, expected: i64) -> Result<(), HelixError> {
    if c.degree != expected {
        return Err(HelixError::Degree {
            role,
            expected,
            found: c.degree,
        });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadraticHelixSpec {
    #[serde(rename = "L")]
    pub l: DivisorClass,
    pub psi: Translation,
}

impl QuadraticHelixSpec {
    pub fn new(group: &Group, l: DivisorClass, psi: Translation) -> Result<Self, HelixError> {
        group.check(&l.sum)?;
        group.check(&psi.0)?;
        check_degree("L", &l, 3)?;
        Ok(QuadraticHelixSpec { l, psi })
    }

    pub fn data(&self, group: &Group) -> Result<HelixData, GroupError> {
        Ok(HelixData::Quadratic {
            l: self.l,
            tau: self.tau(group)?,
        })
    }
}

impl Helix for QuadraticHelixSpec {
    fn kind(&self) -> HelixKind {
        HelixKind::Quadratic
    }

    fn class(&self, group: &Group, i: i64) -> Result<DivisorClass, GroupError> {
        pullback(group, &self.psi.pow(group, i)?, &self.l)
    }

    fn tau(&self, group: &Group) -> Result<Translation, GroupError> {
        self.psi.pow(group, 3)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubicHelixSpec {
    #[serde(rename = "L0")]
    pub l0: DivisorClass,
    #[serde(rename = "L1")]
    pub l1: DivisorClass,
    pub alpha: Translation,
}

impl CubicHelixSpec {
    pub fn new(
        group: &Group,
        l0: DivisorClass,
        l1: DivisorClass,
        alpha: Translation,
    ) -> Result<Self, HelixError> {
        group.check(&l0.sum)?;
        group.check(&l1.sum)?;
        group.check(&alpha.0)?;
        check_degree("L0", &l0, 2)?;
        check_degree("L1", &l1, 2)?;
        Ok(CubicHelixSpec { l0, l1, alpha })
    }

    pub fn data(&self, group: &Group) -> Result<HelixData, GroupError> {
        Ok(HelixData::Cubic {
            l0: self.l0,
            l1: self.l1,
            tau: self.tau(group)?,
        })
    }
}

impl Helix for CubicHelixSpec {
    fn kind(&self) -> HelixKind {
        HelixKind::Cubic
    }

    fn class(&self, group: &Group, i: i64) -> Result<DivisorClass, GroupError> {
        let base = if i.rem_euclid(2) == 0 { &self.l0 } else { &self.l1 };
        pullback(group, &self.alpha.pow(group, i.div_euclid(2))?, base)
    }

    fn tau(&self, group: &Group) -> Result<Translation, GroupError> {
        self.alpha.pow(group, 2)
    }
}

/// Root-free description of a helix through its starting classes and `tau`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum HelixData {
    Quadratic {
        #[serde(rename = "L")]
        l: DivisorClass,
        tau: Translation,
    },
    Cubic {
        #[serde(rename = "L0")]
        l0: DivisorClass,
        #[serde(rename = "L1")]
        l1: DivisorClass,
        tau: Translation,
    },
}

impl HelixData {
    /// Quadratic data whose `L_0, L_1` are the given classes; `tau` is read off their difference.
    pub fn quadratic_from_pair(
        group: &Group,
        g0: DivisorClass,
        g1: DivisorClass,
    ) -> Result<HelixData, GroupError> {
        Ok(HelixData::Quadratic {
            l: g0,
            tau: Translation(group.sub(&g0.sum, &g1.sum)?),
        })
    }

    pub fn tau_point(&self) -> GroupElement {
        match self {
            HelixData::Quadratic { tau, .. } | HelixData::Cubic { tau, .. } => tau.0,
        }
    }
}

impl Helix for HelixData {
    fn kind(&self) -> HelixKind {
        match self {
            HelixData::Quadratic { .. } => HelixKind::Quadratic,
            HelixData::Cubic { .. } => HelixKind::Cubic,
        }
    }

    fn class(&self, group: &Group, i: i64) -> Result<DivisorClass, GroupError> {
        match self {
            // psi^{i*} shifts a degree-3 sum by 3i * t_psi = i * t_tau
            HelixData::Quadratic { l, tau } => Ok(DivisorClass::new(
                l.degree,
                group.sub(&l.sum, &group.scalar_mul(i, &tau.0)?)?,
            )),
            HelixData::Cubic { l0, l1, tau } => {
                let base = if i.rem_euclid(2) == 0 { l0 } else { l1 };
                let k = i.div_euclid(2);
                Ok(DivisorClass::new(
                    base.degree,
                    group.sub(&base.sum, &group.scalar_mul(k, &tau.0)?)?,
                ))
            }
        }
    }

    fn tau(&self, _group: &Group) -> Result<Translation, GroupError> {
        Ok(Translation(self.tau_point()))
    }
}

/// Consecutive classes `G_start, G_{start+1}, ...`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HelixWindow {
    pub start: i64,
    pub classes: Vec<DivisorClass>,
}

impl HelixWindow {
    pub fn end(&self) -> i64 {
        self.start + self.classes.len() as i64 - 1
    }

    pub fn get(&self, i: i64) -> Option<&DivisorClass> {
        let offset = i.checked_sub(self.start)?;
        usize::try_from(offset).ok().and_then(|k| self.classes.get(k))
    }

    pub fn indexed(&self) -> impl Iterator<Item = (i64, &DivisorClass)> {
        (self.start..).zip(self.classes.iter())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AxiomStatus {
    Pass,
    Fail,
    /// The class identity is consistent but the finite group lacks the required root.
    Unrealizable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomCheck {
    pub name: String,
    pub status: AxiomStatus,
    pub details: String,
}

impl AxiomCheck {
    fn new(name: &str, status: AxiomStatus, details: impl Into<String>) -> Self {
        AxiomCheck {
            name: name.to_string(),
            status,
            details: details.into(),
        }
    }

    fn from_failures(name: &str, failures: &[String], what: &str) -> Self {
        if failures.is_empty() {
            AxiomCheck::new(name, AxiomStatus::Pass, what)
        } else {
            let shown: Vec<&str> = failures.iter().take(5).map(String::as_str).collect();
            AxiomCheck::new(
                name,
                AxiomStatus::Fail,
                format!("{what}: {} violation(s), e.g. {}", failures.len(), shown.join("; ")),
            )
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HelixValidation {
    pub kind: HelixKind,
    pub checks: Vec<AxiomCheck>,
    /// Every translation realizing the shift axiom (empty when none exists).
    pub shift_roots: Vec<GroupElement>,
    /// Order of `tau` as read off the window; small orders are degenerate for the geometry.
    pub tau_order: Option<u64>,
}

impl HelixValidation {
    /// No axiom failed; an unrealizable shift does not count as a failure.
    pub fn consistent(&self) -> bool {
        self.checks.iter().all(|c| c.status != AxiomStatus::Fail)
    }

    /// Every axiom passed, including the existence of the shift translation.
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.status == AxiomStatus::Pass)
    }

    pub fn check(&self, name: &str) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn degree_check(window: &HelixWindow, expected: i64) -> AxiomCheck {
    let failures: Vec<String> = window
        .indexed()
        .filter(|(_, c)| c.degree != expected)
        .map(|(i, c)| format!("deg G_{i} = {}", c.degree))
        .collect();
    AxiomCheck::from_failures("degree", &failures, &format!("all classes have degree {expected}"))
}

/// Checks that `G_i - G_{i+step}` is one constant `c` and that some translation `x` with `k x = c`
/// pulls `G_i` back to `G_{i+step}`. With `given` the supplied translation is tested instead.
fn shift_check(
    group: &Group,
    window: &HelixWindow,
    name: &str,
    step: usize,
    k: u64,
    given: Option<&Translation>,
) -> Result<(AxiomCheck, Vec<GroupElement>), GroupError> {
    let pairs: Vec<(i64, &DivisorClass, &DivisorClass)> = window
        .indexed()
        .zip(window.classes.iter().skip(step))
        .map(|((i, a), b)| (i, a, b))
        .collect();
    if let Some(tr) = given {
        let mut failures = Vec::new();
        for (i, a, b) in &pairs {
            if pullback(group, tr, a)? != **b {
                failures.push(format!("pullback of G_{i} != G_{}", i + step as i64));
            }
        }
        let check = AxiomCheck::from_failures(
            name,
            &failures,
            &format!("supplied translation {} shifts G_i to G_(i+{step})", tr.0),
        );
        return Ok((check, vec![tr.0]));
    }
    let Some((_, a0, b0)) = pairs.first() else {
        return Ok((AxiomCheck::new(name, AxiomStatus::Pass, "window too short to test"), vec![]));
    };
    let required = group.sub(&a0.sum, &b0.sum)?;
    let mut failures = Vec::new();
    for (i, a, b) in &pairs {
        if a.degree != b.degree || group.sub(&a.sum, &b.sum)? != required {
            failures.push(format!("G_{i} - G_{} differs from the first shift", i + step as i64));
        }
    }
    if !failures.is_empty() {
        return Ok((AxiomCheck::from_failures(name, &failures, "constant shift"), vec![]));
    }
    // a pullback by x moves a degree-d sum by -d x, and the shift is applied k / d times
    let roots = group.solve_division(k, &required)?;
    let check = if roots.is_empty() {
        AxiomCheck::new(
            name,
            AxiomStatus::Unrealizable,
            format!("no x with {k}x = {required} in the group"),
        )
    } else {
        AxiomCheck::new(
            name,
            AxiomStatus::Pass,
            format!("{} translation(s) with {k}x = {required}", roots.len()),
        )
    };
    Ok((check, roots))
}

fn window_tau_order(
    group: &Group,
    window: &HelixWindow,
    step: usize,
) -> Result<Option<u64>, GroupError> {
    match (window.classes.first(), window.classes.get(step)) {
        (Some(a), Some(b)) => Ok(Some(group.element_order(&group.sub(&a.sum, &b.sum)?)?)),
        _ => Ok(None),
    }
}

/// Validates a quadratic helix window: degree 3, `G_0 != G_1`, trivial second differences and
/// the existence of `psi` with `psi^* G_i = G_{i+1}` (tested directly when `psi` is supplied).
pub fn validate_quadratic_helix(
    group: &Group,
    window: &HelixWindow,
    psi: Option<&Translation>,
) -> Result<HelixValidation, HelixError> {
    let n = window.classes.len();
    if n < 3 {
        return Err(HelixError::WindowTooShort { needed: 3, got: n });
    }
    let mut checks = vec![degree_check(window, 3)];

    let (g0, g1) = (&window.classes[0], &window.classes[1]);
    checks.push(if g0 == g1 {
        AxiomCheck::new("noncongruent", AxiomStatus::Fail, format!("G_0 = G_1 = {g0}"))
    } else {
        AxiomCheck::new("noncongruent", AxiomStatus::Pass, "G_0 != G_1")
    });

    let mut failures = Vec::new();
    for (k, i) in (0..n - 2).zip(window.start..) {
        let c = &window.classes;
        let twice = class_add(group, &c[k + 1], &c[k + 1])?;
        let rel = class_add(group, &class_sub(group, &c[k], &twice)?, &c[k + 2])?;
        if !rel.is_trivial(group) {
            failures.push(format!("G_{i} - 2G_{} + G_{} = {rel}", i + 1, i + 2));
        }
    }
    checks.push(AxiomCheck::from_failures(
        "relation",
        &failures,
        "G_i - 2G_(i+1) + G_(i+2) is trivial",
    ));

    let (shift, shift_roots) = shift_check(group, window, "shift", 1, 3, psi)?;
    checks.push(shift);
    Ok(HelixValidation {
        kind: HelixKind::Quadratic,
        checks,
        shift_roots,
        tau_order: window_tau_order(group, window, 1)?,
    })
}

/// Validates a cubic helix window: degree 2, `G_0 != G_2`, trivial alternating sums
/// `G_i - G_{i+1} - G_{i+2} + G_{i+3}` and the existence of `alpha` with `alpha^* G_i = G_{i+2}`.
pub fn validate_cubic_helix(
    group: &Group,
    window: &HelixWindow,
    alpha: Option<&Translation>,
) -> Result<HelixValidation, HelixError> {
    let n = window.classes.len();
    if n < 4 {
        return Err(HelixError::WindowTooShort { needed: 4, got: n });
    }
    let mut checks = vec![degree_check(window, 2)];

    let (g0, g2) = (&window.classes[0], &window.classes[2]);
    checks.push(if g0 == g2 {
        AxiomCheck::new("noncongruent", AxiomStatus::Fail, format!("G_0 = G_2 = {g0}"))
    } else {
        AxiomCheck::new("noncongruent", AxiomStatus::Pass, "G_0 != G_2")
    });

    let mut failures = Vec::new();
    for (k, i) in (0..n - 3).zip(window.start..) {
        let c = &window.classes;
        let rel = class_sub(group, &c[k], &c[k + 1])?;
        let rel = class_sub(group, &rel, &c[k + 2])?;
        let rel = class_add(group, &rel, &c[k + 3])?;
        if !rel.is_trivial(group) {
            failures.push(format!("alternating sum at G_{i} = {rel}"));
        }
    }
    checks.push(AxiomCheck::from_failures(
        "relation",
        &failures,
        "G_i - G_(i+1) - G_(i+2) + G_(i+3) is trivial",
    ));

    let (shift, shift_roots) = shift_check(group, window, "shift", 2, 2, alpha)?;
    checks.push(shift);
    Ok(HelixValidation {
        kind: HelixKind::Cubic,
        checks,
        shift_roots,
        tau_order: window_tau_order(group, window, 2)?,
    })
}

pub fn validate_helix(
    group: &Group,
    kind: HelixKind,
    window: &HelixWindow,
    shift: Option<&Translation>,
) -> Result<HelixValidation, HelixError> {
    match kind {
        HelixKind::Quadratic => validate_quadratic_helix(group, window, shift),
        HelixKind::Cubic => validate_cubic_helix(group, window, shift),
    }
}

/// `dim B_{i,j} = h0(L_i + ... + L_{j-1})` of the twisted homogeneous coordinate ring.
pub fn thcr_dim<H: Helix + ?Sized>(
    helix: &H,
    group: &Group,
    i: i64,
    j: i64,
) -> Result<u64, GroupError> {
    if i > j {
        return Ok(0);
    }
    let mut total = DivisorClass::trivial(group);
    for k in i..j {
        total = class_add(group, &total, &helix.class(group, k)?)?;
    }
    Ok(h0(group, &total))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: u64) -> GroupElement {
        GroupElement::Residue(v)
    }

    fn cls(d: i64, s: u64) -> DivisorClass {
        DivisorClass::new(d, r(s))
    }

    fn z(n: u64) -> Group {
        Group::cyclic(n).unwrap()
    }

    fn quad30() -> QuadraticHelixSpec {
        QuadraticHelixSpec::new(&z(30), cls(3, 0), Translation(r(1))).unwrap()
    }

    fn cubic30() -> CubicHelixSpec {
        CubicHelixSpec::new(&z(30), cls(2, 0), cls(2, 1), Translation(r(2))).unwrap()
    }

    #[test]
    fn helix_class_examples() {
        let g = z(30);
        assert_eq!(quad30().class(&g, 2).unwrap(), cls(3, 24));
        assert_eq!(quad30().class(&g, 0).unwrap(), cls(3, 0));
        assert_eq!(cubic30().class(&g, 3).unwrap(), cls(2, 27));
        assert_eq!(cubic30().class(&g, 0).unwrap(), cls(2, 0));
        assert_eq!(cubic30().class(&g, -1).unwrap(), cls(2, 5));
    }

    #[test]
    fn root_free_data_agrees_with_specs() {
        let g = z(30);
        let (q, c) = (quad30(), cubic30());
        for i in -12..=12 {
            assert_eq!(q.data(&g).unwrap().class(&g, i).unwrap(), q.class(&g, i).unwrap());
            assert_eq!(c.data(&g).unwrap().class(&g, i).unwrap(), c.class(&g, i).unwrap());
        }
    }

    #[test]
    fn constructors_check_degrees() {
        let g = z(30);
        assert!(matches!(
            QuadraticHelixSpec::new(&g, cls(2, 0), Translation(r(1))),
            Err(HelixError::Degree { expected: 3, found: 2, .. })
        ));
        assert!(CubicHelixSpec::new(&g, cls(2, 0), cls(3, 1), Translation(r(1))).is_err());
        assert!(QuadraticHelixSpec::new(&g, cls(3, 31), Translation(r(1))).is_err());
    }

    #[test]
    fn quadratic_validation_examples() {
        let g = z(30);
        let spec = quad30();
        let w = spec.window(&g, -5..=5).unwrap();
        let v = validate_quadratic_helix(&g, &w, Some(&spec.psi)).unwrap();
        assert!(v.all_pass(), "{v:?}");

        let mut broken = w.clone();
        broken.classes[1] = broken.classes[0];
        let v = validate_quadratic_helix(&g, &broken, None).unwrap();
        assert_eq!(v.check("noncongruent").unwrap().status, AxiomStatus::Fail);

        let small = HelixWindow { start: 0, classes: vec![cls(3, 0), cls(3, 27), cls(3, 24)] };
        let v = validate_quadratic_helix(&g, &small, None).unwrap();
        assert_eq!(v.check("relation").unwrap().status, AxiomStatus::Pass);
        // 3x = 3 in Z/30 has three solutions
        assert_eq!(v.shift_roots, vec![r(1), r(11), r(21)]);

        let short = HelixWindow { start: 0, classes: vec![cls(3, 0)] };
        assert!(matches!(
            validate_quadratic_helix(&g, &short, None),
            Err(HelixError::WindowTooShort { needed: 3, got: 1 })
        ));
    }

    #[test]
    fn cubic_validation_examples() {
        let g = z(30);
        let spec = cubic30();
        let w = spec.window(&g, -6..=6).unwrap();
        assert!(validate_cubic_helix(&g, &w, Some(&spec.alpha)).unwrap().all_pass());
        assert!(validate_cubic_helix(&g, &w, None).unwrap().all_pass());

        let mut broken = w.clone();
        broken.classes[3] = cls(3, broken.classes[3].sum.residue_value());
        let v = validate_cubic_helix(&g, &broken, None).unwrap();
        assert_eq!(v.check("degree").unwrap().status, AxiomStatus::Fail);

        let small = HelixWindow {
            start: 0,
            classes: vec![cls(2, 0), cls(2, 1), cls(2, 26), cls(2, 27)],
        };
        let v = validate_cubic_helix(&g, &small, None).unwrap();
        assert_eq!(v.check("relation").unwrap().status, AxiomStatus::Pass);
        // shift 4 needs 2x = 4: x in {2, 17}
        assert_eq!(v.shift_roots, vec![r(2), r(17)]);
    }

    #[test]
    fn missing_root_is_unrealizable_not_failure() {
        let g = z(30);
        // tau shift 3 with no square root in Z/30
        let data = HelixData::Cubic { l0: cls(2, 28), l1: cls(2, 22), tau: Translation(r(3)) };
        let w = data.window(&g, -4..=4).unwrap();
        let v = validate_cubic_helix(&g, &w, None).unwrap();
        assert!(v.consistent());
        assert!(!v.all_pass());
        assert_eq!(v.check("shift").unwrap().status, AxiomStatus::Unrealizable);
    }

    #[test]
    fn thcr_examples() {
        let g = z(30);
        assert_eq!(thcr_dim(&quad30(), &g, 0, 2).unwrap(), 6);
        assert_eq!(thcr_dim(&quad30(), &g, 5, 5).unwrap(), 1);
        assert_eq!(thcr_dim(&cubic30(), &g, 0, 3).unwrap(), 6);
        assert_eq!(thcr_dim(&cubic30(), &g, 4, 1).unwrap(), 0);
    }

    trait ResidueValue {
        fn residue_value(&self) -> u64;
    }

    impl ResidueValue for GroupElement {
        fn residue_value(&self) -> u64 {
            match self {
                GroupElement::Residue(v) => *v,
                _ => unreachable!(),
            }
        }
    }
}
