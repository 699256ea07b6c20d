//! Built-in coset systems used throughout the test and verification suites.

use std::sync::Arc;

use crate::group::{Group, Subgroup};
use crate::perm::Perm;
use crate::transversal::{build_coset_system, CosetSystem};

fn s3_with_transversal(m: &[&str]) -> CosetSystem {
    let group = Arc::new(Group::symmetric(3));
    let g = Subgroup::generated(&group, &[group.parse_elem("(12)").unwrap()]);
    let m: Vec<usize> = m.iter().map(|s| group.parse_elem(s).unwrap()).collect();
    build_coset_system(&group, g, m).unwrap()
}

/// `S3`, `G = {e,(12)}`, `M = {(12),(13),(23)}`: the transversal avoiding
/// the identity. `(M,.)` has left and right division but no right identity.
pub fn s3_transpositions() -> CosetSystem {
    s3_with_transversal(&["(12)", "(13)", "(23)"])
}

/// `S3`, `G = {e,(12)}`, `M = {e,(13),(23)}`: a two-sided identity but no
/// left division.
pub fn s3_mixed() -> CosetSystem {
    s3_with_transversal(&["e", "(13)", "(23)"])
}

/// `S3`, `G = {e,(12)}`, `M = {e,(123),(132)}`: here `M` is a subgroup and
/// the cocycle is trivial.
pub fn s3_cyclic() -> CosetSystem {
    s3_with_transversal(&["e", "(123)", "(132)"])
}

/// The dihedral group of order 12 on 6 points, `G` the normal subgroup of
/// order 6 generated by the square of the rotation and the reflection,
/// `M = {e, x}` with `x` the rotation. The cocycle is non-trivial
/// (`tau(x,x) = x^2`) while `<|` is trivial.
pub fn d6() -> CosetSystem {
    let group = Arc::new(Group::dihedral(6).unwrap());
    let x = group.parse_elem("(123456)").unwrap();
    let y = group
        .elem_index(&Perm::from_images(vec![0, 5, 4, 3, 2, 1]).unwrap())
        .unwrap();
    let g = Subgroup::generated(&group, &[group.mul(x, x), y]);
    build_coset_system(&group, g, vec![group.identity(), x]).unwrap()
}

/// `S5` with `G` the stabiliser of the point 1 and the five-element
/// transversal `{e, (12)(354), (14253), (15234), (13245)}`; `(M,.)` has
/// two-sided division and identity without being a group.
pub fn s5_stabilizer() -> CosetSystem {
    let group = Arc::new(Group::symmetric(5));
    let g = Subgroup::stabilizer(&group, 0);
    let m: Vec<usize> = ["e", "(12)(354)", "(14253)", "(15234)", "(13245)"]
        .iter()
        .map(|s| group.parse_elem(s).unwrap())
        .collect();
    build_coset_system(&group, g, m).unwrap()
}

/// All five built-in systems, smallest first.
pub fn all() -> Vec<CosetSystem> {
    vec![
        s3_transpositions(),
        s3_mixed(),
        s3_cyclic(),
        d6(),
        s5_stabilizer(),
    ]
}

/// Looks up a named preset: `s3a`, `s3b`, `s3c`, `d6` or `s5`.
pub fn by_name(name: &str) -> Option<CosetSystem> {
    match name {
        "s3a" => Some(s3_transpositions()),
        "s3b" => Some(s3_mixed()),
        "s3c" => Some(s3_cyclic()),
        "d6" => Some(d6()),
        "s5" => Some(s5_stabilizer()),
        _ => None,
    }
}

pub const PRESET_NAMES: [&str; 5] = ["s3a", "s3b", "s3c", "d6", "s5"];
