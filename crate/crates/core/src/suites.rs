//! Named verification suites over a coset system.
//!
//! Each suite gates on its preconditions and reports skips rather than
//! failures when a construction is unavailable (no identity in the
//! transversal, no left division). Sweeps whose cost grows with a power of
//! the object dimension are size-gated; the gate is reported as a skip
//! with the dimension in the reason.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{build_h, h_preconditions, verify_h};
use crate::braided::{verify_braided, verify_hat_action};
use crate::double::{build_double, verify_double};
use crate::hopf::{build_d, verify_hopf, verify_hopf_spot};
use crate::module::{m_regular_object, random_equivariant_endo, unit_object, validate_object};
use crate::report::Report;
use crate::tensor::{
    verify_associator_naturality, verify_pentagon, verify_structural_morphisms, verify_triangle,
};
use crate::transversal::{cayley_embed, classify, reconstruct_group, verify_matched_pair, CosetSystem};

/// Upper bound on materialised tensor dimensions in the category suites.
const TENSOR_CELL_CAP: usize = 60_000;
/// Upper bound on the Hopf-object dimension for the exhaustive sweeps.
const EXHAUSTIVE_D_CAP: usize = 400;

pub fn suite_transversal(cs: &CosetSystem) -> Report {
    let mut report = verify_matched_pair(cs);

    let r = classify(cs);
    report.record(
        "classify.right_division_always",
        (!r.has_right_division).then(|| "right division fails".into()),
    );
    report.record(
        "classify.subgroup_iff_unit_and_trivial_cocycle",
        (r.is_subgroup != (r.contains_group_identity && r.tau_trivial))
            .then(|| "subgroup flag disagrees with e-in-M + trivial cocycle".into()),
    );
    report.record(
        "classify.normal_iff_trivial_ract",
        (r.g_is_normal != r.ract_trivial)
            .then(|| "normality disagrees with triviality of <|".into()),
    );

    let (_, rec) = reconstruct_group(cs);
    report.merge(rec);

    match cayley_embed(&cs.abstract_dot_table()) {
        Ok(embed) => {
            report.record(
                "cayley.round_trip",
                (embed.system.abstract_dot_table() != cs.abstract_dot_table())
                    .then(|| "re-embedded dot table differs".into()),
            );
        }
        Err(e) => report.skip("cayley.round_trip", e.to_string()),
    }

    report
}

pub fn suite_cat_c(cs: &CosetSystem, seed: u64) -> Report {
    let mut report = Report::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let reg = m_regular_object(cs);
    report.merge(validate_object(cs, &reg));
    report.merge(validate_object(cs, &unit_object(cs)));

    // object pool: the regular object, H when it exists, the dual of the
    // regular object when duals exist
    let mut pool = vec![reg.clone()];
    if let Ok(h) = build_h(cs) {
        report.merge(validate_object(cs, &h.object));
        pool.push(h.object);
    }
    match crate::dual::dual_object(cs, &reg) {
        Ok(dual) => pool.push(dual),
        Err(e) => report.skip("catC.dual_objects", e.to_string()),
    }

    let cell = |dims: &[usize]| dims.iter().product::<usize>();

    for v in &pool {
        for w in &pool {
            if cell(&[v.dim(), w.dim(), v.dim(), w.dim()]) <= TENSOR_CELL_CAP {
                report.merge(verify_pentagon(cs, v, w, v, w));
            }
            if cell(&[v.dim(), w.dim()]) <= TENSOR_CELL_CAP {
                report.merge(verify_triangle(cs, v, w));
                report.merge(verify_structural_morphisms(cs, v, w));
            }
        }
    }
    if pool.len() > 1 && cell(&[pool[0].dim(), pool[1].dim(), pool[1].dim(), pool[0].dim()]) <= TENSOR_CELL_CAP
    {
        report.merge(verify_pentagon(cs, &pool[0], &pool[1], &pool[1], &pool[0]));
    }

    for v in &pool {
        if cell(&[v.dim(); 3]) > TENSOR_CELL_CAP {
            report.skip(
                &format!("naturality[{}]", v.label),
                format!("dimension {} exceeds the sweep gate", v.dim()),
            );
            continue;
        }
        let f = random_equivariant_endo(cs, v, &mut rng);
        let g = random_equivariant_endo(cs, v, &mut rng);
        report.merge(verify_associator_naturality(cs, v, v, v, &f, &g, &f));
    }

    for v in &pool {
        if cell(&[v.dim(); 3]) > TENSOR_CELL_CAP {
            report.skip(
                &format!("snake[{}]", v.label),
                format!("dimension {} exceeds the sweep gate", v.dim()),
            );
            continue;
        }
        report.merge(crate::dual::verify_snake(cs, v));
    }

    report
}

pub fn suite_h(cs: &CosetSystem) -> Report {
    let mut report = Report::new();
    match h_preconditions(cs) {
        Err(e) => report.skip("h.suite", e.to_string()),
        Ok(()) => {
            let h = build_h(cs).expect("preconditions checked");
            report.merge(verify_h(cs, &h));
        }
    }
    report
}

pub fn suite_double(cs: &CosetSystem) -> Report {
    let ds = build_double(cs);
    let mut report = verify_double(&ds);
    match build_d(&ds) {
        Ok(d) => {
            let stride = if d.dim() <= EXHAUSTIVE_D_CAP {
                1
            } else {
                d.dim().div_ceil(100)
            };
            report.merge(verify_hat_action(&ds, &d.object, stride));
        }
        Err(e) => report.skip("hat_action[D]", e.to_string()),
    }
    report
}

pub fn suite_cat_d(cs: &CosetSystem) -> Report {
    suite_cat_d_with_objects(cs, "D,D,D").expect("default object list parses")
}

/// The braided suite with a chosen object triple for the hexagon and
/// associator sweeps; tokens are `D` and `k`.
pub fn suite_cat_d_with_objects(cs: &CosetSystem, objects: &str) -> crate::error::Result<Report> {
    let tokens: Vec<String> = objects
        .split(',')
        .map(|t| t.trim().to_string())
        .filter(|t| !t.is_empty())
        .collect();
    if tokens.len() != 3 || tokens.iter().any(|t| t != "D" && t != "k") {
        return Err(crate::error::Error::Parse(format!(
            "object list {objects:?} should be three comma-separated tokens from D, k"
        )));
    }

    let mut report = Report::new();
    let ds = build_double(cs);
    match build_d(&ds) {
        Err(e) => report.skip("catD.suite", e.to_string()),
        Ok(d) if d.dim() > EXHAUSTIVE_D_CAP => {
            report.skip(
                "catD.suite",
                format!(
                    "object dimension {} exceeds the exhaustive-sweep gate",
                    d.dim()
                ),
            );
        }
        Ok(d) => {
            report.merge(verify_braided(&ds, &d.object));
            if tokens.iter().any(|t| t == "k") {
                use crate::braided::{
                    hexagon_backward_witness, hexagon_forward_witness, tensor_d, unit_dobject,
                };
                let k = unit_dobject(cs);
                let pick = |t: &str| if t == "D" { &d.object } else { &k };
                let (v, w, z) = (pick(&tokens[0]), pick(&tokens[1]), pick(&tokens[2]));
                let wz = tensor_d(&ds, w, z);
                let name = format!("hexagon[{}]", tokens.join(","));
                report.record(
                    &format!("{name}.forward"),
                    hexagon_forward_witness(&ds, v, w, z, &wz),
                );
                report.record(
                    &format!("{name}.backward"),
                    hexagon_backward_witness(&ds, v, w, z),
                );
            }
        }
    }
    Ok(report)
}

pub fn suite_hopf(cs: &CosetSystem, budget: Option<usize>, seed: u64) -> Report {
    let mut report = Report::new();
    let ds = build_double(cs);
    match build_d(&ds) {
        Err(e) => report.skip("hopf.suite", e.to_string()),
        Ok(d) if d.dim() > EXHAUSTIVE_D_CAP => {
            report.merge(verify_hopf_spot(&ds, &d, 100, seed));
        }
        Ok(d) => report.merge(verify_hopf(&ds, &d, budget)),
    }
    report
}

/// Every suite in order, with the shared seed and budget.
pub fn suite_all(cs: &CosetSystem, budget: Option<usize>, seed: u64) -> Report {
    let mut report = Report::new();
    report.merge(suite_transversal(cs));
    report.merge(suite_cat_c(cs, seed));
    report.merge(suite_h(cs));
    report.merge(suite_double(cs));
    report.merge(suite_cat_d(cs));
    report.merge(suite_hopf(cs, budget, seed));
    report
}

/// Parses a suite name from the command line.
pub fn run_suite(
    cs: &CosetSystem,
    name: &str,
    budget: Option<usize>,
    seed: u64,
) -> crate::error::Result<Report> {
    Ok(match name {
        "transversal" => suite_transversal(cs),
        "catC" => suite_cat_c(cs, seed),
        "H" => suite_h(cs),
        "double" => suite_double(cs),
        "catD" => suite_cat_d(cs),
        "hopf" => suite_hopf(cs, budget, seed),
        "all" => suite_all(cs, budget, seed),
        other => {
            return Err(crate::error::Error::Parse(format!(
                "unknown suite {other:?}; expected transversal, catC, H, double, catD, hopf or all"
            )))
        }
    })
}
