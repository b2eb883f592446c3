#![allow(dead_code)]

use helixforge_core::group::{Group, GroupElement};
use helixforge_core::instances::TEST_CURVES;
use proptest::prelude::*;

pub fn curve(k: usize) -> Group {
    let (p, a, b) = TEST_CURVES[k % TEST_CURVES.len()];
    Group::weierstrass(p, a, b).unwrap()
}

pub fn curves() -> Vec<Group> {
    (0..TEST_CURVES.len()).map(curve).collect()
}

/// Picks an element by index, so strategies can stay backend-agnostic.
pub fn pick(group: &Group, index: u64) -> GroupElement {
    let all = group.elements().unwrap();
    all[(index % all.len() as u64) as usize]
}

/// A cyclic group of order 13..=1000 or one of the test curves.
pub fn any_group() -> impl Strategy<Value = Group> {
    prop_oneof![
        (13u64..=1000).prop_map(|n| Group::cyclic(n).unwrap()),
        (0usize..TEST_CURVES.len()).prop_map(curve),
    ]
}

pub fn r(v: u64) -> GroupElement {
    GroupElement::Residue(v)
}

/// Independent curve-equation check on raw coordinates.
pub fn on_curve(p: u64, a: i64, b: i64, e: &GroupElement) -> bool {
    match *e {
        GroupElement::Infinity => true,
        GroupElement::Point { x, y } => {
            let (p, x, y) = (p as i128, x as i128, y as i128);
            let rhs = (x * x * x + a as i128 * x + b as i128).rem_euclid(p);
            (y * y).rem_euclid(p) == rhs
        }
        GroupElement::Residue(_) => false,
    }
}
