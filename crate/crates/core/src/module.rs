//! `M`-graded right `G`-modules: the objects of the tensor category.
//!
//! An object is a based rational vector space in which every basis vector
//! carries a grade in `M`, together with a right action of `G` compatible
//! with the grading: the grade of `xi <| u` is `<xi> <| u`. Morphisms are
//! linear maps preserving grades and commuting with the action.
//!
//! Matrix convention: actions are stored column-wise per group element, and
//! `action(uv)` equals "apply `action(u)`, then `action(v)`" — the right
//! action law. [`validate_object`] asserts this representation law
//! exhaustively, so a transposition slip cannot survive construction.

use rand::Rng;

use crate::linalg::{rat, LinMap, Rat, SparseVec};
use crate::report::Report;
use crate::transversal::CosetSystem;

/// An object of the category: graded basis plus one action map per element
/// of `G` (indexed by `G` position).
#[derive(Debug, Clone)]
pub struct CObject {
    pub grade: Vec<usize>,
    pub action: Vec<LinMap>,
    pub label: String,
}

impl CObject {
    pub fn dim(&self) -> usize {
        self.grade.len()
    }

    pub fn act_basis(&self, u: usize, i: usize) -> &SparseVec {
        self.action[u].col(i)
    }

    pub fn act(&self, u: usize, v: &SparseVec) -> SparseVec {
        self.action[u].apply(v)
    }

    /// The common grade of all terms of `v`, if `v` is non-zero and
    /// homogeneous.
    pub fn grade_of(&self, v: &SparseVec) -> Option<usize> {
        let mut grade = None;
        for &(i, _) in v.terms() {
            match grade {
                None => grade = Some(self.grade[i]),
                Some(g) if g == self.grade[i] => {}
                Some(_) => return None,
            }
        }
        grade
    }
}

/// The unit object `k`: one-dimensional, grade `e_m`, trivial action.
pub fn unit_object(cs: &CosetSystem) -> CObject {
    CObject {
        grade: vec![cs.em()],
        action: vec![LinMap::identity(1); cs.g_len()],
        label: "k".into(),
    }
}

/// The permutation object on the basis `{v_s : s in M}`: `v_s` has grade
/// `s` and `v_s <| u = v_{s <| u}`.
pub fn m_regular_object(cs: &CosetSystem) -> CObject {
    let ml = cs.m_len();
    let action = (0..cs.g_len())
        .map(|u| {
            LinMap::from_cols(
                ml,
                (0..ml).map(|s| SparseVec::unit(cs.ract(s, u))).collect(),
            )
        })
        .collect();
    CObject {
        grade: (0..ml).collect(),
        action,
        label: "M".into(),
    }
}

/// Exhaustive check of the object invariants: action shapes, identity acts
/// trivially, the right-action law over all pairs of group elements, and
/// grade compatibility of every action image.
pub fn validate_object(cs: &CosetSystem, v: &CObject) -> Report {
    let mut report = Report::new();
    let dim = v.dim();
    let gl = cs.g_len();

    let mut w = None;
    if v.action.len() != gl {
        w = Some(format!("{} action maps for |G| = {}", v.action.len(), gl));
    } else if let Some(u) = (0..gl)
        .find(|&u| v.action[u].source_dim() != dim || v.action[u].target_dim != dim)
    {
        w = Some(format!("action of {} is not {dim}x{dim}", cs.g_name(u)));
    }
    report.record(&format!("object[{}].shape", v.label), w);
    if !report.ok() {
        return report;
    }

    let e = cs.g_identity();
    let w = if v.action[e].is_identity() {
        None
    } else {
        Some("action of e is not the identity".into())
    };
    report.record(&format!("object[{}].identity_action", v.label), w);

    let mut w = None;
    'law: for u in 0..gl {
        for t in 0..gl {
            let ut = cs.gmul(u, t);
            for i in 0..dim {
                let step = v.act(t, v.act_basis(u, i));
                if &step != v.act_basis(ut, i) {
                    w = Some(format!(
                        "basis {i}, u={}, v={}",
                        cs.g_name(u),
                        cs.g_name(t)
                    ));
                    break 'law;
                }
            }
        }
    }
    report.record(&format!("object[{}].action_law", v.label), w);

    let mut w = None;
    'grade: for u in 0..gl {
        for i in 0..dim {
            let expect = cs.ract(v.grade[i], u);
            for &(j, _) in v.act_basis(u, i).terms() {
                if v.grade[j] != expect {
                    w = Some(format!(
                        "basis {i} of grade {} under u={} lands in grade {}",
                        cs.m_name(v.grade[i]),
                        cs.g_name(u),
                        cs.m_name(v.grade[j])
                    ));
                    break 'grade;
                }
            }
        }
    }
    report.record(&format!("object[{}].grade_compatibility", v.label), w);

    report
}

/// Checks that `f : v -> w` preserves grades and commutes with every group
/// element; returns the first counterexample.
pub fn is_morphism(
    cs: &CosetSystem,
    v: &CObject,
    w: &CObject,
    f: &LinMap,
) -> Result<(), String> {
    if f.source_dim() != v.dim() || f.target_dim != w.dim() {
        return Err(format!(
            "map is {}x{}, objects are {} -> {}",
            f.target_dim,
            f.source_dim(),
            v.dim(),
            w.dim()
        ));
    }
    for i in 0..v.dim() {
        for &(j, _) in f.col(i).terms() {
            if w.grade[j] != v.grade[i] {
                return Err(format!(
                    "grade broken at basis {i}: {} -> {}",
                    cs.m_name(v.grade[i]),
                    cs.m_name(w.grade[j])
                ));
            }
        }
    }
    for u in 0..cs.g_len() {
        for i in 0..v.dim() {
            let lhs = f.apply(v.act_basis(u, i));
            let rhs = w.act(u, f.col(i));
            if lhs != rhs {
                return Err(format!(
                    "does not commute with u={} at basis {i}",
                    cs.g_name(u)
                ));
            }
        }
    }
    Ok(())
}

/// A random grade-preserving equivariant endomorphism, built by averaging a
/// random grade-preserving map over the group action. Used for naturality
/// spot checks.
pub fn random_equivariant_endo<R: Rng>(cs: &CosetSystem, v: &CObject, rng: &mut R) -> LinMap {
    let dim = v.dim();
    let raw: Vec<Vec<(usize, Rat)>> = (0..dim)
        .map(|i| {
            (0..dim)
                .filter(|&j| v.grade[j] == v.grade[i])
                .map(|j| (j, rat(rng.gen_range(-3i64..=3))))
                .collect()
        })
        .collect();
    let raw = LinMap::from_cols(dim, raw.into_iter().map(SparseVec::from_terms).collect());

    let mut cols = vec![SparseVec::zero(); dim];
    for u in 0..cs.g_len() {
        let ui = cs.ginv(u);
        for (i, col) in cols.iter_mut().enumerate() {
            let moved = v.act(ui, &raw.apply(v.act_basis(u, i)));
            *col = col.add(&moved);
        }
    }
    LinMap::from_cols(dim, cols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;
    use rand::SeedableRng;

    #[test]
    fn m_regular_is_valid_everywhere() {
        for cs in presets::all() {
            let v = m_regular_object(&cs);
            let report = validate_object(&cs, &v);
            assert!(report.ok(), "{}", report.render());
            assert!(validate_object(&cs, &unit_object(&cs)).ok());
        }
    }

    #[test]
    fn m_regular_grades_and_action() {
        let cs = presets::s3_transpositions();
        let v = m_regular_object(&cs);
        let s13 = cs.m_pos_of(cs.group().parse_elem("(13)").unwrap()).unwrap();
        assert_eq!(v.grade[s13], s13);

        let cs = presets::s3_mixed();
        let v = m_regular_object(&cs);
        let s13 = cs.m_pos_of(cs.group().parse_elem("(13)").unwrap()).unwrap();
        let s23 = cs.m_pos_of(cs.group().parse_elem("(23)").unwrap()).unwrap();
        let u12 = cs.g_pos_of(cs.group().parse_elem("(12)").unwrap()).unwrap();
        assert_eq!(v.act_basis(u12, s13), &SparseVec::unit(s23));
        assert!(v.action[cs.g_identity()].is_identity());
    }

    #[test]
    fn identity_is_a_morphism_and_scrambles_are_not() {
        let cs = presets::s3_mixed();
        let v = m_regular_object(&cs);
        assert!(is_morphism(&cs, &v, &v, &LinMap::identity(v.dim())).is_ok());

        // a permutation matrix that mixes grades
        let swap = LinMap::from_cols(
            3,
            vec![SparseVec::unit(1), SparseVec::unit(0), SparseVec::unit(2)],
        );
        assert!(is_morphism(&cs, &v, &v, &swap).is_err());
    }

    #[test]
    fn averaged_endos_are_morphisms() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for cs in [presets::s3_transpositions(), presets::d6()] {
            let v = m_regular_object(&cs);
            for _ in 0..5 {
                let f = random_equivariant_endo(&cs, &v, &mut rng);
                assert!(is_morphism(&cs, &v, &v, &f).is_ok());
            }
        }
    }
}
