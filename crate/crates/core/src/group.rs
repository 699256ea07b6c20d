//! Finite permutation groups with dense multiplication tables.
//!
//! Groups are fully enumerated: the element list is sorted lexicographically
//! by image array (so the identity is always index 0), and all higher layers
//! refer to elements by their index in that list. This keeps every
//! verification sweep a matter of table lookups.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::Perm;

/// A fully enumerated permutation group.
#[derive(Debug, Clone)]
pub struct Group {
    degree: usize,
    elements: Vec<Perm>,
    index: HashMap<Vec<usize>, usize>,
    mul: Vec<usize>,
    inv: Vec<usize>,
}

impl Group {
    /// Smallest group containing `generators`, all of the given degree.
    /// An empty generator list yields the trivial group.
    pub fn closure(generators: &[Perm], degree: usize) -> Result<Self> {
        for g in generators {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch(g.degree(), degree));
            }
        }
        let mut elements = vec![Perm::identity(degree)];
        let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
        seen.insert(elements[0].images().to_vec(), 0);
        let mut frontier = 0;
        while frontier < elements.len() {
            let current = elements[frontier].clone();
            for g in generators {
                let next = current.compose(g);
                if !seen.contains_key(next.images()) {
                    seen.insert(next.images().to_vec(), elements.len());
                    elements.push(next);
                }
            }
            frontier += 1;
        }
        elements.sort();
        Ok(Group::from_sorted_elements(degree, elements))
    }

    /// The symmetric group on `n` points.
    pub fn symmetric(n: usize) -> Self {
        let mut gens = Vec::new();
        if n >= 2 {
            gens.push(Perm::from_cycles(n, &[vec![0, 1]]).unwrap());
            gens.push(Perm::from_cycles(n, &[(0..n).collect()]).unwrap());
        }
        Group::closure(&gens, n.max(1)).unwrap()
    }

    /// The dihedral group of order `2n` acting on `n` points (`n >= 3`):
    /// generated by the rotation `i -> i+1` and the reflection `i -> -i`.
    pub fn dihedral(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::Unsupported(
                "dihedral(n) requires n >= 3 on this representation".into(),
            ));
        }
        let rotation = Perm::from_cycles(n, &[(0..n).collect()]).unwrap();
        let reflection =
            Perm::from_images((0..n).map(|i| (n - i) % n).collect()).unwrap();
        Group::closure(&[rotation, reflection], n)
    }

    fn from_sorted_elements(degree: usize, elements: Vec<Perm>) -> Self {
        let n = elements.len();
        let index: HashMap<Vec<usize>, usize> = elements
            .iter()
            .enumerate()
            .map(|(i, p)| (p.images().to_vec(), i))
            .collect();
        let mut mul = vec![0usize; n * n];
        for i in 0..n {
            for j in 0..n {
                let prod = elements[i].compose(&elements[j]);
                mul[i * n + j] = index[prod.images()];
            }
        }
        let mut inv = vec![0usize; n];
        for i in 0..n {
            inv[i] = index[elements[i].inverse().images()];
        }
        debug_assert!(elements[0].is_identity());
        Group {
            degree,
            elements,
            index,
            mul,
            inv,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn perm(&self, i: usize) -> &Perm {
        &self.elements[i]
    }

    /// Index of the identity; always 0 by the sorted element order.
    pub fn identity(&self) -> usize {
        0
    }

    pub fn elem_index(&self, p: &Perm) -> Option<usize> {
        self.index.get(p.images()).copied()
    }

    /// `mul(i, j)` is `elements[i] ∘ elements[j]` (apply `j` first).
    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.mul[i * self.elements.len() + j]
    }

    pub fn inv(&self, i: usize) -> usize {
        self.inv[i]
    }

    /// Product of a word of element indices, left to right: `w[0] w[1] ...`
    /// (so `w[last]` is applied first as a function).
    pub fn word(&self, w: &[usize]) -> usize {
        w.iter()
            .copied()
            .reduce(|a, b| self.mul(a, b))
            .unwrap_or(0)
    }

    pub fn parse_elem(&self, text: &str) -> Result<usize> {
        let p = Perm::parse(text, self.degree)?;
        self.elem_index(&p).ok_or_else(|| {
            Error::Parse(format!("{p} is not an element of this group"))
        })
    }

    pub fn name_of(&self, i: usize) -> String {
        self.elements[i].to_string()
    }
}

/// A subgroup of an ambient [`Group`], stored as a sorted list of element
/// indices together with a membership/position map.
#[derive(Debug, Clone)]
pub struct Subgroup {
    members: Vec<usize>,
    pos: Vec<Option<usize>>,
}

impl Subgroup {
    /// Closure of the given element indices inside `group`.
    pub fn generated(group: &Group, generators: &[usize]) -> Self {
        let mut in_set = vec![false; group.order()];
        in_set[group.identity()] = true;
        let mut members = vec![group.identity()];
        let mut frontier = 0;
        while frontier < members.len() {
            let current = members[frontier];
            for &g in generators {
                let next = group.mul(current, g);
                if !in_set[next] {
                    in_set[next] = true;
                    members.push(next);
                }
            }
            frontier += 1;
        }
        members.sort_unstable();
        Subgroup::from_sorted_members(group, members)
    }

    /// Checks the given element indices form a subgroup and builds it.
    pub fn from_members(group: &Group, members: &[usize]) -> Result<Self> {
        let mut sorted = members.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let mut in_set = vec![false; group.order()];
        for &m in &sorted {
            in_set[m] = true;
        }
        if !in_set[group.identity()] {
            return Err(Error::NotSubgroup("identity missing".into()));
        }
        for &a in &sorted {
            if !in_set[group.inv(a)] {
                return Err(Error::NotSubgroup(format!(
                    "inverse of {} missing",
                    group.name_of(a)
                )));
            }
            for &b in &sorted {
                if !in_set[group.mul(a, b)] {
                    return Err(Error::NotSubgroup(format!(
                        "product {} * {} escapes the set",
                        group.name_of(a),
                        group.name_of(b)
                    )));
                }
            }
        }
        Ok(Subgroup::from_sorted_members(group, sorted))
    }

    /// The stabilizer of a 0-based point.
    pub fn stabilizer(group: &Group, point: usize) -> Self {
        let members: Vec<usize> = (0..group.order())
            .filter(|&i| group.perm(i).apply(point) == point)
            .collect();
        Subgroup::from_sorted_members(group, members)
    }

    fn from_sorted_members(group: &Group, members: Vec<usize>) -> Self {
        let mut pos = vec![None; group.order()];
        for (k, &m) in members.iter().enumerate() {
            pos[m] = Some(k);
        }
        Subgroup { members, pos }
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    /// Element indices into the ambient group, in canonical order.
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    /// Ambient index of the subgroup element at position `k`.
    pub fn elem(&self, k: usize) -> usize {
        self.members[k]
    }

    pub fn contains(&self, ambient: usize) -> bool {
        self.pos[ambient].is_some()
    }

    /// Position within the subgroup of an ambient element, if a member.
    pub fn pos_of(&self, ambient: usize) -> Option<usize> {
        self.pos[ambient]
    }
}

/// The unique factorisation `x = u s` of a group element across a
/// subgroup/transversal pair: `u` is a position in `G`, `s` a position in `M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Factorization {
    pub u: usize,
    pub s: usize,
}

/// Factorises `x` as `u s` with `u` in `G` and `s` in `M`, scanning all of
/// `M`. Fails when the factorisation is missing or ambiguous, which is
/// exactly the failure of `M` to be a transversal at `x`.
pub fn factorize(group: &Group, g: &Subgroup, m: &[usize], x: usize) -> Result<Factorization> {
    let mut found = None;
    for (spos, &s) in m.iter().enumerate() {
        let u = group.mul(x, group.inv(s));
        if let Some(upos) = g.pos_of(u) {
            if let Some(prev) = found {
                let Factorization { u: pu, s: ps } = prev;
                return Err(Error::NotTransversal(format!(
                    "{} factorises both as {}*{} and as {}*{}",
                    group.name_of(x),
                    group.name_of(g.elem(pu)),
                    group.name_of(m[ps]),
                    group.name_of(u),
                    group.name_of(m[spos]),
                )));
            }
            found = Some(Factorization { u: upos, s: spos });
        }
    }
    found.ok_or_else(|| {
        Error::NotTransversal(format!("{} has no factorisation", group.name_of(x)))
    })
}

/// Checks that `m` meets every left coset `G s` exactly once. On failure the
/// diagnostic names a violating element.
pub fn is_transversal(group: &Group, g: &Subgroup, m: &[usize]) -> std::result::Result<(), String> {
    let mut hits = vec![0usize; group.order()];
    for &upos in g.members() {
        for &s in m {
            hits[group.mul(upos, s)] += 1;
        }
    }
    for (x, &count) in hits.iter().enumerate() {
        if count == 0 {
            return Err(format!(
                "coset of {} has no representative",
                group.name_of(x)
            ));
        }
        if count > 1 {
            return Err(format!(
                "{} factorises {} times; coset has multiple representatives",
                group.name_of(x),
                count
            ));
        }
    }
    Ok(())
}

/// Serialisable description of a group, matching the JSON interface
/// (`{"type":"symmetric","n":3}` and friends).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum GroupSpec {
    Symmetric { n: usize },
    Dihedral { n: usize },
    Permutations {
        degree: usize,
        generators: Vec<Vec<usize>>,
    },
}

impl GroupSpec {
    pub fn build(&self) -> Result<Group> {
        match self {
            GroupSpec::Symmetric { n } => Ok(Group::symmetric(*n)),
            GroupSpec::Dihedral { n } => Group::dihedral(*n),
            GroupSpec::Permutations { degree, generators } => {
                let gens: Result<Vec<Perm>> = generators
                    .iter()
                    .map(|imgs| Perm::from_images(imgs.clone()))
                    .collect();
                Group::closure(&gens?, *degree)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s3_has_order_six() {
        let g = Group::closure(
            &[
                Perm::parse("(12)", 3).unwrap(),
                Perm::parse("(123)", 3).unwrap(),
            ],
            3,
        )
        .unwrap();
        assert_eq!(g.order(), 6);
        assert!(g.perm(0).is_identity());
    }

    #[test]
    fn empty_generators_give_trivial_group() {
        let g = Group::closure(&[], 4).unwrap();
        assert_eq!(g.order(), 1);
    }

    #[test]
    fn dihedral_six_has_order_twelve() {
        let g = Group::dihedral(6).unwrap();
        assert_eq!(g.order(), 12);
        // x y = y x^5 with x the rotation and y the reflection
        let x = g.parse_elem("(123456)").unwrap();
        let y = g.elem_index(
            &Perm::from_images(vec![0, 5, 4, 3, 2, 1]).unwrap(),
        )
        .unwrap();
        let x5 = g.word(&[x, x, x, x, x]);
        assert_eq!(g.mul(x, y), g.mul(y, x5));
    }

    #[test]
    fn mul_table_matches_composition() {
        let g = Group::symmetric(4);
        for i in (0..g.order()).step_by(5) {
            for j in (0..g.order()).step_by(7) {
                let direct = g.perm(i).compose(g.perm(j));
                assert_eq!(g.elem_index(&direct), Some(g.mul(i, j)));
            }
        }
    }

    #[test]
    fn group_laws_hold_on_the_full_table() {
        let g = Group::symmetric(4);
        let n = g.order();
        let e = g.identity();
        for i in 0..n {
            assert_eq!(g.mul(e, i), i);
            assert_eq!(g.mul(i, e), i);
            assert_eq!(g.mul(i, g.inv(i)), e);
            assert_eq!(g.mul(g.inv(i), i), e);
            for j in 0..n {
                for k in 0..n {
                    assert_eq!(g.mul(g.mul(i, j), k), g.mul(i, g.mul(j, k)));
                }
            }
        }
    }

    #[test]
    fn rebuilding_gives_identical_indices() {
        let gens = [
            Perm::parse("(12)", 5).unwrap(),
            Perm::parse("(12345)", 5).unwrap(),
        ];
        let a = Group::closure(&gens, 5).unwrap();
        let b = Group::closure(&gens, 5).unwrap();
        assert_eq!(a.elements(), b.elements());
    }

    #[test]
    fn stabilizer_of_point() {
        let g = Group::symmetric(5);
        let stab = Subgroup::stabilizer(&g, 0);
        assert_eq!(stab.order(), 24);
        assert!(stab.contains(g.identity()));
    }

    #[test]
    fn factorize_in_s3() {
        let x = Group::symmetric(3);
        let g = Subgroup::generated(&x, &[x.parse_elem("(12)").unwrap()]);

        // M = {(12),(13),(23)}: e factorises as (12)*(12).
        let m: Vec<usize> = ["(12)", "(13)", "(23)"]
            .iter()
            .map(|s| x.parse_elem(s).unwrap())
            .collect();
        let f = factorize(&x, &g, &m, x.identity()).unwrap();
        assert_eq!(x.name_of(g.elem(f.u)), "(12)");
        assert_eq!(x.name_of(m[f.s]), "(12)");

        // Members of M factorise with trivial subgroup part.
        for (spos, &s) in m.iter().enumerate() {
            let f = factorize(&x, &g, &m, s).unwrap();
            assert_eq!(f.u, g.pos_of(x.identity()).unwrap());
            assert_eq!(f.s, spos);
        }

        // M = {e,(13),(23)}: (123) factorises as u*s with u*s = (123).
        let m2: Vec<usize> = ["e", "(13)", "(23)"]
            .iter()
            .map(|s| x.parse_elem(s).unwrap())
            .collect();
        let y = x.parse_elem("(123)").unwrap();
        let f = factorize(&x, &g, &m2, y).unwrap();
        assert_eq!(x.mul(g.elem(f.u), m2[f.s]), y);
        // brute force: the factorisation is unique over the 2x3 products
        let mut count = 0;
        for &u in g.members() {
            for &s in &m2 {
                if x.mul(u, s) == y {
                    count += 1;
                }
            }
        }
        assert_eq!(count, 1);
    }

    #[test]
    fn transversal_diagnostics() {
        let x = Group::symmetric(3);
        let g = Subgroup::generated(&x, &[x.parse_elem("(12)").unwrap()]);
        let good: Vec<usize> = ["(12)", "(13)", "(23)"]
            .iter()
            .map(|s| x.parse_elem(s).unwrap())
            .collect();
        assert!(is_transversal(&x, &g, &good).is_ok());

        let bad: Vec<usize> = ["e", "(12)", "(13)"]
            .iter()
            .map(|s| x.parse_elem(s).unwrap())
            .collect();
        assert!(is_transversal(&x, &g, &bad).is_err());
    }

    #[test]
    fn s5_transversal_from_text() {
        let x = Group::symmetric(5);
        let g = Subgroup::stabilizer(&x, 0);
        let m: Vec<usize> = ["e", "(12)(354)", "(14253)", "(15234)", "(13245)"]
            .iter()
            .map(|s| x.parse_elem(s).unwrap())
            .collect();
        assert!(is_transversal(&x, &g, &m).is_ok());
    }
}
