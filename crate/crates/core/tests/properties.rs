//! Property tests for the algebraic invariants: random permutations,
//! random small groups, random subgroups and random transversal choices.

use std::sync::Arc;

use proptest::prelude::*;

use cosetcat::group::{Group, Subgroup};
use cosetcat::perm::Perm;
use cosetcat::transversal::{
    build_coset_system, classify, reconstruct_group, verify_matched_pair, CosetSystem,
};

fn arb_perm(degree: usize) -> impl Strategy<Value = Perm> {
    Just((0..degree).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|imgs| Perm::from_images(imgs).unwrap())
}

/// A random coset system inside a small symmetric group: a subgroup from
/// random generators and a transversal picked by per-coset choice indices.
fn arb_system(degree: usize) -> impl Strategy<Value = CosetSystem> {
    (
        proptest::collection::vec(arb_perm(degree), 0..3),
        proptest::collection::vec(0..24usize, 1..30),
    )
        .prop_map(move |(gens, picks)| {
            let group = Arc::new(Group::symmetric(degree));
            let gen_ids: Vec<usize> = gens
                .iter()
                .map(|p| group.elem_index(p).unwrap())
                .collect();
            let g = Subgroup::generated(&group, &gen_ids);

            // deterministic coset decomposition, then pick one element per
            // coset using the choice stream
            let mut assigned = vec![false; group.order()];
            let mut m = Vec::new();
            let mut pick_at = 0usize;
            for x in 0..group.order() {
                if assigned[x] {
                    continue;
                }
                let mut coset: Vec<usize> =
                    g.members().iter().map(|&u| group.mul(u, x)).collect();
                coset.sort_unstable();
                for &y in &coset {
                    assigned[y] = true;
                }
                let pick = picks[pick_at % picks.len()] % coset.len();
                pick_at += 1;
                m.push(coset[pick]);
            }
            build_coset_system(&group, g, m).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn compose_is_associative(a in arb_perm(6), b in arb_perm(6), c in arb_perm(6)) {
        prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
    }

    #[test]
    fn inverse_cancels(a in arb_perm(7)) {
        prop_assert!(a.compose(&a.inverse()).is_identity());
        prop_assert!(a.inverse().compose(&a).is_identity());
    }

    #[test]
    fn cycle_notation_round_trips(a in arb_perm(9)) {
        let text = a.to_string();
        prop_assert_eq!(Perm::parse(&text, 9).unwrap(), a);
    }

    #[test]
    fn cycle_notation_round_trips_wide(a in arb_perm(12)) {
        let text = a.to_string();
        prop_assert_eq!(Perm::parse(&text, 12).unwrap(), a);
    }

    #[test]
    fn matched_pair_identities_hold_on_random_systems(cs in arb_system(4)) {
        let report = verify_matched_pair(&cs);
        prop_assert!(report.ok(), "{}", report.render());
    }

    #[test]
    fn classification_redundancies_hold(cs in arb_system(4)) {
        let r = classify(&cs);
        prop_assert!(r.has_right_division);
        prop_assert_eq!(r.is_subgroup, r.contains_group_identity && r.tau_trivial);
        prop_assert_eq!(r.g_is_normal, r.ract_trivial);
    }

    #[test]
    fn reconstruction_is_isomorphic_on_random_systems(cs in arb_system(4)) {
        let (pairs, report) = reconstruct_group(&cs);
        prop_assert!(report.ok(), "{}", report.render());
        prop_assert_eq!(pairs.to_x.len(), cs.x_len());
    }

    #[test]
    fn factorization_round_trips(cs in arb_system(4)) {
        let group = cs.group().clone();
        for x in 0..group.order() {
            let (u, s) = cs.factorization(x);
            prop_assert_eq!(group.mul(cs.g_x(u), cs.m_x(s)), x);
        }
    }

    #[test]
    fn h_grades_multiply_where_h_exists(cs in arb_system(4)) {
        let r = classify(&cs);
        if r.contains_group_identity && r.has_left_division {
            let h = cosetcat::algebra::build_h(&cs).unwrap();
            let d = h.dim();
            for i in 0..d {
                for j in 0..d {
                    if let Some(k) = h.product(&cs, i, j) {
                        prop_assert_eq!(
                            h.object.grade[k],
                            cs.dot(h.object.grade[i], h.object.grade[j])
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn double_norms_multiply_where_d_exists(cs in arb_system(3)) {
        let ds = cosetcat::double::build_double(&cs);
        if let Ok(d) = cosetcat::hopf::build_d(&ds) {
            let n = cs.x_len();
            for i in 0..d.dim() {
                let (y, x) = (i / n, i % n);
                prop_assert_eq!(ds.circ(y, d.ynorm[i]), ds.conj(y, x));
            }
        }
    }
}
