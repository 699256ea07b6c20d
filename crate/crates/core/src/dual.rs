//! Duals, evaluation and coevaluation, and the snake identities.
//!
//! Duality needs the group identity in the transversal and a right inverse
//! `s^R` (some `p` with `s . p = e`) for every `s`; both are checked up
//! front. The dual of a basis vector of grade `s` has grade `s^L`, the
//! pairing is the Kronecker one, and the dual action is read off from
//! invariance of the pairing, which threads the cocycle through both
//! inverses.

use crate::error::{Error, Result};
use crate::linalg::{LinMap, Rat, SparseVec};
use crate::module::{is_morphism, unit_object, CObject};
use crate::report::Report;
use crate::tensor::{associator, associator_inv, first_col_mismatch, tensor_c};
use crate::transversal::CosetSystem;

/// Checks `e` lies in `M` and that every element has a right inverse.
pub fn dual_preconditions(cs: &CosetSystem) -> Result<()> {
    if cs.m_pos_of(cs.group().identity()).is_none() {
        return Err(Error::Precondition(
            "duals need the group identity in the transversal".into(),
        ));
    }
    for s in 0..cs.m_len() {
        if cs.right_inverse(s).is_none() {
            return Err(Error::Precondition(format!(
                "duals need a right inverse; {} has none",
                cs.m_name(s)
            )));
        }
    }
    Ok(())
}

/// The dual object: the dual basis vector of `xi` (same index) has grade
/// `<xi>^L`, and the action is the unique one making evaluation invariant.
pub fn dual_object(cs: &CosetSystem, v: &CObject) -> Result<CObject> {
    dual_preconditions(cs)?;
    let dim = v.dim();
    let grade: Vec<usize> = (0..dim).map(|i| cs.left_inverse(v.grade[i])).collect();

    let action = (0..cs.g_len())
        .map(|u| {
            let ui = cs.ginv(u);
            let mut cols: Vec<Vec<(usize, Rat)>> = vec![Vec::new(); dim];
            for j in 0..dim {
                let sl = cs.left_inverse(v.grade[j]);
                let sl_ui = cs.ract(sl, ui);
                let g = cs.gword(&[
                    cs.ginv(cs.tau(sl, v.grade[j])),
                    cs.lact(sl, ui),
                    cs.tau(sl_ui, cs.right_inverse(sl_ui).expect("right inverse checked")),
                ]);
                for &(i, c) in v.act_basis(g, j).terms() {
                    cols[i].push((j, c));
                }
            }
            LinMap::from_cols(dim, cols.into_iter().map(SparseVec::from_terms).collect())
        })
        .collect();

    Ok(CObject {
        grade,
        action,
        label: format!("{}'", v.label),
    })
}

/// Evaluation `V' @ V -> k`, the Kronecker pairing on matching indices.
pub fn eval_map(v: &CObject) -> LinMap {
    let d = v.dim();
    let cols = (0..d)
        .flat_map(|i| {
            (0..d).map(move |j| {
                if i == j {
                    SparseVec::unit(0)
                } else {
                    SparseVec::zero()
                }
            })
        })
        .collect();
    LinMap::from_cols(1, cols)
}

/// Coevaluation image `coev(1)` in `V @ V'`: each basis vector, moved by
/// the inverse cocycle of its left inverse against itself, paired with its
/// dual.
pub fn coev_vec(cs: &CosetSystem, v: &CObject) -> SparseVec {
    let d = v.dim();
    let mut terms = Vec::new();
    for i in 0..d {
        let s = v.grade[i];
        let g = cs.ginv(cs.tau(cs.left_inverse(s), s));
        for &(k, c) in v.act_basis(g, i).terms() {
            terms.push((k * d + i, c));
        }
    }
    SparseVec::from_terms(terms)
}

/// Both snake composites, plus the morphism properties of evaluation and
/// coevaluation.
pub fn verify_snake(cs: &CosetSystem, v: &CObject) -> Report {
    let mut report = Report::new();
    let name = |part: &str| format!("snake[{}].{}", v.label, part);
    let dual = match dual_object(cs, v) {
        Ok(d) => d,
        Err(e) => {
            report.skip(&name("all"), e.to_string());
            return report;
        }
    };
    let d = v.dim();
    let k = unit_object(cs);

    report.record(
        &name("dual_is_object"),
        crate::module::validate_object(cs, &dual)
            .first_failure()
            .map(|c| c.name.clone()),
    );

    let vd = tensor_c(cs, v, &dual);
    let dv = tensor_c(cs, &dual, v);
    report.record(
        &name("eval_is_morphism"),
        is_morphism(cs, &dv, &k, &eval_map(v)).err(),
    );

    let coev = coev_vec(cs, v);
    let em = cs.em();
    let mut w = None;
    for &(p, _) in coev.terms() {
        if vd.grade[p] != em {
            w = Some(format!("summand at pair index {p} has non-unit grade"));
            break;
        }
    }
    report.record(&name("coev_grade_e"), w);

    let mut w = None;
    for u in 0..cs.g_len() {
        if vd.act(u, &coev) != coev {
            w = Some(format!("coev(1) moves under u={}", cs.g_name(u)));
            break;
        }
    }
    report.record(&name("coev_invariant"), w);

    // (I (x) eval) o Phi o (coev (x) I) = id on V.
    let coev_i = LinMap::from_cols(
        d * d * d,
        (0..d)
            .map(|j| {
                SparseVec::from_terms(
                    coev.terms().iter().map(|&(p, c)| (p * d + j, c)).collect(),
                )
            })
            .collect(),
    );
    let phi = associator(cs, v, &dual, v);
    let i_eval = LinMap::from_cols(
        d,
        (0..d)
            .flat_map(|a| {
                (0..d * d).map(move |ij| {
                    if ij / d == ij % d {
                        SparseVec::unit(a)
                    } else {
                        SparseVec::zero()
                    }
                })
            })
            .collect(),
    );
    let snake_v = coev_i.then(&phi).then(&i_eval);
    report.record(
        &name("on_object"),
        first_col_mismatch(&snake_v, &LinMap::identity(d)),
    );

    // (eval (x) I) o Phi^-1 o (I (x) coev) = id on V'.
    let i_coev = LinMap::from_cols(
        d * d * d,
        (0..d)
            .map(|j| {
                SparseVec::from_terms(
                    coev.terms()
                        .iter()
                        .map(|&(p, c)| (j * d * d + p, c))
                        .collect(),
                )
            })
            .collect(),
    );
    let phi_inv = associator_inv(cs, &dual, v, &dual);
    let eval_i = LinMap::from_cols(
        d,
        (0..d * d)
            .flat_map(|ij| {
                (0..d).map(move |b| {
                    if ij / d == ij % d {
                        SparseVec::unit(b)
                    } else {
                        SparseVec::zero()
                    }
                })
            })
            .collect(),
    );
    let snake_dual = i_coev.then(&phi_inv).then(&eval_i);
    report.record(
        &name("on_dual"),
        first_col_mismatch(&snake_dual, &LinMap::identity(d)),
    );

    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::m_regular_object;
    use crate::presets;

    #[test]
    fn dual_grade_uses_the_left_inverse() {
        let cs = presets::s3_mixed();
        let v = m_regular_object(&cs);
        let dual = dual_object(&cs, &v).unwrap();
        let s13 = cs.m_pos_of(cs.group().parse_elem("(13)").unwrap()).unwrap();
        // (13)^L solves p . (13) = e, and the table gives p = (13)
        assert_eq!(cs.left_inverse(s13), s13);
        assert_eq!(dual.grade[s13], s13);
    }

    #[test]
    fn duals_are_blocked_without_identity_in_m() {
        let cs = presets::s3_transpositions();
        let v = m_regular_object(&cs);
        assert!(dual_object(&cs, &v).is_err());
    }

    #[test]
    fn eval_pairs_matching_indices() {
        let cs = presets::s3_mixed();
        let v = m_regular_object(&cs);
        let ev = eval_map(&v);
        assert_eq!(ev.col(0), &SparseVec::unit(0));
        assert_eq!(ev.col(1), &SparseVec::zero());
    }

    #[test]
    fn coev_has_three_terms_on_the_regular_object() {
        let cs = presets::s3_mixed();
        let v = m_regular_object(&cs);
        let coev = coev_vec(&cs, &v);
        assert_eq!(coev.terms().len(), 3);
    }

    #[test]
    fn snakes_pass_where_duals_exist() {
        for cs in [presets::s3_mixed(), presets::s3_cyclic(), presets::d6()] {
            let v = m_regular_object(&cs);
            let report = verify_snake(&cs, &v);
            assert!(report.ok(), "{}", report.render());
        }
    }
}
