//! Tensor products, the associator, unit maps, and the coherence checks.
//!
//! The tensor product of graded modules twists the left factor's action by
//! the grade of the right factor, and rebracketing is never implicit: the
//! associator `(A @ B) @ C -> A @ (B @ C)` acts on the left factor by the
//! cocycle of the other two grades. Pair basis `(i, j)` is flattened as
//! `i * dim(B) + j`, which makes the flat index independent of bracketing
//! for a fixed factor order.

use crate::linalg::{LinMap, SparseVec};
use crate::module::{is_morphism, CObject};
use crate::report::Report;
use crate::transversal::CosetSystem;

/// Flattened outer product of two sparse vectors.
pub fn outer(a: &SparseVec, b: &SparseVec, b_dim: usize) -> SparseVec {
    let mut terms = Vec::with_capacity(a.terms().len() * b.terms().len());
    for &(i, c) in a.terms() {
        for &(j, d) in b.terms() {
            terms.push((i * b_dim + j, c * d));
        }
    }
    SparseVec::from_terms(terms)
}

/// `f (x) g` on pair bases.
pub fn tensor_map(f: &LinMap, g: &LinMap) -> LinMap {
    let cols = (0..f.source_dim())
        .flat_map(|i| {
            (0..g.source_dim()).map(move |j| outer(f.col(i), g.col(j), g.target_dim))
        })
        .collect();
    LinMap::from_cols(f.target_dim * g.target_dim, cols)
}

/// `f (x) id` on a right factor of the given dimension.
pub fn extend_right(f: &LinMap, right_dim: usize) -> LinMap {
    tensor_map(f, &LinMap::identity(right_dim))
}

/// `id (x) f` on a left factor of the given dimension.
pub fn extend_left(left_dim: usize, f: &LinMap) -> LinMap {
    tensor_map(&LinMap::identity(left_dim), f)
}

/// The tensor product object: `<xi (x) eta> = <xi> . <eta>` and
/// `(xi (x) eta) <| u = xi <| (<eta> |> u) (x) eta <| u`.
pub fn tensor_c(cs: &CosetSystem, a: &CObject, b: &CObject) -> CObject {
    let (ad, bd) = (a.dim(), b.dim());
    let grade = (0..ad)
        .flat_map(|i| (0..bd).map(move |j| (i, j)))
        .map(|(i, j)| cs.dot(a.grade[i], b.grade[j]))
        .collect();
    let action = (0..cs.g_len())
        .map(|u| {
            let cols = (0..ad)
                .flat_map(|i| {
                    (0..bd).map(move |j| {
                        let twisted = a.act_basis(cs.lact(b.grade[j], u), i);
                        outer(twisted, b.act_basis(u, j), bd)
                    })
                })
                .collect();
            LinMap::from_cols(ad * bd, cols)
        })
        .collect();
    CObject {
        grade,
        action,
        label: format!("({}*{})", a.label, b.label),
    }
}

/// The associator `(A @ B) @ C -> A @ (B @ C)`: the first factor moves by
/// the cocycle of the grades of the other two.
pub fn associator(cs: &CosetSystem, a: &CObject, b: &CObject, c: &CObject) -> LinMap {
    assoc_impl(cs, a, b, c, false)
}

/// Its inverse `A @ (B @ C) -> (A @ B) @ C`.
pub fn associator_inv(cs: &CosetSystem, a: &CObject, b: &CObject, c: &CObject) -> LinMap {
    assoc_impl(cs, a, b, c, true)
}

fn assoc_impl(cs: &CosetSystem, a: &CObject, b: &CObject, c: &CObject, inv: bool) -> LinMap {
    let (ad, bd, cd) = (a.dim(), b.dim(), c.dim());
    let dim = ad * bd * cd;
    let mut cols = Vec::with_capacity(dim);
    for i in 0..ad {
        for j in 0..bd {
            for k in 0..cd {
                let mut twist = cs.tau(b.grade[j], c.grade[k]);
                if inv {
                    twist = cs.ginv(twist);
                }
                let image = a.act_basis(twist, i);
                cols.push(outer(image, &SparseVec::unit(j * cd + k), bd * cd));
            }
        }
    }
    LinMap::from_cols(dim, cols)
}

/// `l_V : V -> V @ k`, `xi -> xi <| f_m^-1 (x) 1`, with inverse.
pub fn left_unit(cs: &CosetSystem, v: &CObject) -> LinMap {
    v.action[cs.ginv(cs.fm())].clone()
}

pub fn left_unit_inv(cs: &CosetSystem, v: &CObject) -> LinMap {
    v.action[cs.fm()].clone()
}

/// `r_V : V -> k @ V`, plain insertion `xi -> 1 (x) xi`.
pub fn right_unit(_cs: &CosetSystem, v: &CObject) -> LinMap {
    LinMap::identity(v.dim())
}

/// Pentagon coherence for the quadruple `(V, W, Z, U)`: the two rebracketing
/// routes `((VW)Z)U -> V(W(ZU))` agree exactly.
pub fn verify_pentagon(
    cs: &CosetSystem,
    v: &CObject,
    w: &CObject,
    z: &CObject,
    u: &CObject,
) -> Report {
    let mut report = Report::new();
    let vw = tensor_c(cs, v, w);
    let wz = tensor_c(cs, w, z);
    let zu = tensor_c(cs, z, u);

    let route_a = associator(cs, &vw, z, u).then(&associator(cs, v, w, &zu));
    let route_b = extend_right(&associator(cs, v, w, z), u.dim())
        .then(&associator(cs, v, &wz, u))
        .then(&extend_left(v.dim(), &associator(cs, w, z, u)));

    let name = format!(
        "pentagon[{},{},{},{}]",
        v.label, w.label, z.label, u.label
    );
    let witness = first_col_mismatch(&route_a, &route_b);
    report.record(&name, witness);
    report
}

/// Triangle coherence: `id (x) r = Phi o (l (x) id)` on `V @ W`.
pub fn verify_triangle(cs: &CosetSystem, v: &CObject, w: &CObject) -> Report {
    let mut report = Report::new();
    let k = crate::module::unit_object(cs);
    let lhs = extend_left(v.dim(), &right_unit(cs, w));
    let rhs = extend_right(&left_unit(cs, v), w.dim()).then(&associator(cs, v, &k, w));
    let name = format!("triangle[{},{}]", v.label, w.label);
    report.record(&name, first_col_mismatch(&lhs, &rhs));
    report
}

/// Naturality of the associator against the given morphisms
/// `f : U -> U`, `g : V -> V`, `h : W -> W` (endomorphisms suffice to
/// exercise the square).
pub fn verify_associator_naturality(
    cs: &CosetSystem,
    u: &CObject,
    v: &CObject,
    w: &CObject,
    f: &LinMap,
    g: &LinMap,
    h: &LinMap,
) -> Report {
    let mut report = Report::new();
    debug_assert!(is_morphism(cs, u, u, f).is_ok());
    debug_assert!(is_morphism(cs, v, v, g).is_ok());
    debug_assert!(is_morphism(cs, w, w, h).is_ok());
    let phi = associator(cs, u, v, w);
    let lhs = tensor_map(&tensor_map(f, g), h).then(&phi);
    let rhs = phi.then(&tensor_map(f, &tensor_map(g, h)));
    let name = format!("naturality[{},{},{}]", u.label, v.label, w.label);
    report.record(&name, first_col_mismatch(&lhs, &rhs));
    report
}

/// Basic sanity of the structural maps as morphisms, plus invertibility.
pub fn verify_structural_morphisms(cs: &CosetSystem, v: &CObject, w: &CObject) -> Report {
    let mut report = Report::new();
    let k = crate::module::unit_object(cs);
    let vw = tensor_c(cs, v, w);
    let vk = tensor_c(cs, v, &k);
    let kv = tensor_c(cs, &k, v);

    let l = left_unit(cs, v);
    let r = right_unit(cs, v);
    report.record(
        &format!("unit_maps[{}].left_is_morphism", v.label),
        is_morphism(cs, v, &vk, &l).err(),
    );
    report.record(
        &format!("unit_maps[{}].right_is_morphism", v.label),
        is_morphism(cs, v, &kv, &r).err(),
    );
    report.record(
        &format!("unit_maps[{}].left_invertible", v.label),
        if l.then(&left_unit_inv(cs, v)).is_identity() {
            None
        } else {
            Some("l^-1 o l != id".into())
        },
    );

    let wk = tensor_c(cs, w, &k);
    let phi = associator(cs, v, w, &k);
    let phi_inv = associator_inv(cs, v, w, &k);
    report.record(
        &format!("associator[{},{},k].is_morphism", v.label, w.label),
        is_morphism(cs, &tensor_c(cs, &vw, &k), &tensor_c(cs, v, &wk), &phi).err(),
    );
    report.record(
        &format!("associator[{},{},k].invertible", v.label, w.label),
        if phi.then(&phi_inv).is_identity() && phi_inv.then(&phi).is_identity() {
            None
        } else {
            Some("Phi^-1 o Phi != id".into())
        },
    );
    report
}

pub(crate) fn first_col_mismatch(a: &LinMap, b: &LinMap) -> Option<String> {
    if a.source_dim() != b.source_dim() {
        return Some(format!(
            "source dimensions differ: {} vs {}",
            a.source_dim(),
            b.source_dim()
        ));
    }
    (0..a.source_dim())
        .find(|&j| a.col(j) != b.col(j))
        .map(|j| format!("composites differ at basis index {j}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::{m_regular_object, unit_object, validate_object};
    use crate::presets;

    #[test]
    fn tensor_grades_follow_the_dot_table() {
        let cs = presets::s3_transpositions();
        let v = m_regular_object(&cs);
        let t = tensor_c(&cs, &v, &v);
        let g = cs.group();
        let s13 = cs.m_pos_of(g.parse_elem("(13)").unwrap()).unwrap();
        let s12 = cs.m_pos_of(g.parse_elem("(12)").unwrap()).unwrap();
        let s23 = cs.m_pos_of(g.parse_elem("(23)").unwrap()).unwrap();
        assert_eq!(t.grade[s13 * 3 + s12], s23);
        assert!(validate_object(&cs, &t).ok());
    }

    #[test]
    fn tensor_with_unit_matches_plain_action() {
        let cs = presets::s3_mixed();
        let v = m_regular_object(&cs);
        let k = unit_object(&cs);
        let kv = tensor_c(&cs, &k, &v);
        for u in 0..cs.g_len() {
            for i in 0..v.dim() {
                assert_eq!(kv.act_basis(u, i), v.act_basis(u, i));
            }
        }
    }

    #[test]
    fn associator_is_identity_when_cocycle_is_trivial() {
        let cs = presets::s3_cyclic();
        let v = m_regular_object(&cs);
        assert!(associator(&cs, &v, &v, &v).is_identity());
    }

    #[test]
    fn associator_twists_by_the_constant_cocycle() {
        let cs = presets::s3_transpositions();
        let v = m_regular_object(&cs);
        let phi = associator(&cs, &v, &v, &v);
        let u12 = cs.g_pos_of(cs.group().parse_elem("(12)").unwrap()).unwrap();
        for j in 0..3 {
            for k in 0..3 {
                for i in 0..3 {
                    let expect = outer(
                        v.act_basis(u12, i),
                        &SparseVec::unit(j * 3 + k),
                        9,
                    );
                    assert_eq!(phi.col((i * 3 + j) * 3 + k), &expect);
                }
            }
        }
        assert!(phi.then(&associator_inv(&cs, &v, &v, &v)).is_identity());
    }

    #[test]
    fn unit_maps_on_mixed_and_shifted_identities() {
        // f_m = e: plain insertion on both sides.
        let cs = presets::s3_mixed();
        let v = m_regular_object(&cs);
        assert!(left_unit(&cs, &v).is_identity());
        assert!(right_unit(&cs, &v).is_identity());

        // f_m = (12): the left unit shifts by the action of (12).
        let cs = presets::s3_transpositions();
        let v = m_regular_object(&cs);
        let fm = cs.fm();
        for s in 0..v.dim() {
            let expect = SparseVec::unit(cs.ract(s, cs.ginv(fm)));
            assert_eq!(left_unit(&cs, &v).col(s), &expect);
        }
    }

    #[test]
    fn small_coherence_sweeps() {
        for cs in [
            presets::s3_transpositions(),
            presets::s3_mixed(),
            presets::s3_cyclic(),
            presets::d6(),
        ] {
            let v = m_regular_object(&cs);
            assert!(verify_pentagon(&cs, &v, &v, &v, &v).ok());
            assert!(verify_triangle(&cs, &v, &v).ok());
            assert!(verify_structural_morphisms(&cs, &v, &v).ok());
        }
    }

    #[test]
    fn corrupted_cocycle_breaks_the_pentagon() {
        let mut cs = presets::s3_transpositions();
        cs.poison_tau(1, 1, cs.g_identity());
        let v = m_regular_object(&cs);
        let report = verify_pentagon(&cs, &v, &v, &v, &v);
        assert!(!report.ok());
    }
}
