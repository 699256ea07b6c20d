//! The algebra `H` on the basis `{delta_s (x) u : s in M, u in G}`.
//!
//! `H` packages the grading and the group action into a single algebra
//! acting on every object: `xi <| (delta_s (x) u)` projects onto grade `s`
//! and then acts by `u`. The grade of a basis element solves
//! `s . <delta_s (x) u> = s <| u`, which needs left division in `(M, .)`,
//! and the product is associative only through the associator`.`

use serde_json::json;

use crate::error::{Error, Result};
use crate::linalg::{LinMap, SparseVec};
use crate::module::{is_morphism, m_regular_object, unit_object, CObject};
use crate::report::Report;
use crate::tensor::tensor_c;
use crate::transversal::{classify, CosetSystem};

/// `H` as an object of the category, with sparse structure constants.
/// Basis index `s * |G| + u` (transversal-major).
#[derive(Debug, Clone)]
pub struct AlgebraH {
    pub object: CObject,
    /// Position of `e` in `M`.
    e_m: usize,
}

/// Builds `H`, failing when `e` is missing from `M` or when some grade
/// equation `s . a = s <| u` has no unique solution.
pub fn build_h(cs: &CosetSystem) -> Result<AlgebraH> {
    let ml = cs.m_len();
    let gl = cs.g_len();
    let e_m = cs.m_pos_of(cs.group().identity()).ok_or_else(|| {
        Error::Precondition("H needs the group identity in the transversal".into())
    })?;

    let mut left_div = vec![usize::MAX; ml * ml];
    for s in 0..ml {
        for p in 0..ml {
            let t = cs.dot(s, p);
            if left_div[s * ml + t] != usize::MAX {
                // name a basis label whose grade equation is unsolvable
                let (fs, fu) = (0..ml)
                    .flat_map(|s2| (0..gl).map(move |u| (s2, u)))
                    .find(|&(s2, u)| {
                        let target = cs.ract(s2, u);
                        (0..ml).filter(|&a| cs.dot(s2, a) == target).count() != 1
                    })
                    .unwrap_or((s, 0));
                return Err(Error::Precondition(format!(
                    "H needs left division; the grade of (s={}, u={}) is not uniquely solvable",
                    cs.m_name(fs),
                    cs.g_name(fu)
                )));
            }
            left_div[s * ml + t] = p;
        }
    }

    let grade: Vec<usize> = (0..ml * gl)
        .map(|i| {
            let (s, u) = (i / gl, i % gl);
            left_div[s * ml + cs.ract(s, u)]
        })
        .collect();

    // (delta_s (x) u) <| v = delta_{s <| (a |> v)} (x) (a |> v)^-1 u v
    let action = (0..gl)
        .map(|v| {
            let cols = (0..ml * gl)
                .map(|i| {
                    let (s, u) = (i / gl, i % gl);
                    let av = cs.lact(grade[i], v);
                    let s2 = cs.ract(s, av);
                    let u2 = cs.gword(&[cs.ginv(av), u, v]);
                    SparseVec::unit(s2 * gl + u2)
                })
                .collect();
            LinMap::from_cols(ml * gl, cols)
        })
        .collect();

    Ok(AlgebraH {
        object: CObject {
            grade,
            action,
            label: "H".into(),
        },
        e_m,
    })
}

impl AlgebraH {
    pub fn dim(&self) -> usize {
        self.object.dim()
    }

    pub fn basis_index(&self, cs: &CosetSystem, s: usize, u: usize) -> usize {
        s * cs.g_len() + u
    }

    pub fn basis_labels(&self, cs: &CosetSystem, i: usize) -> (usize, usize) {
        (i / cs.g_len(), i % cs.g_len())
    }

    /// `(delta_s (x) u)(delta_t (x) v)`, at most one term with coefficient 1.
    pub fn product(&self, cs: &CosetSystem, i: usize, j: usize) -> Option<usize> {
        let gl = cs.g_len();
        let (s, u) = (i / gl, i % gl);
        let (t, v) = (j / gl, j % gl);
        if t != cs.ract(s, u) {
            return None;
        }
        let (a, b) = (self.object.grade[i], self.object.grade[j]);
        let tab = cs.tau(a, b);
        Some(cs.ract(s, tab) * gl + cs.gword(&[cs.ginv(tab), u, v]))
    }

    pub fn product_vec(&self, cs: &CosetSystem, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let mut terms = Vec::new();
        for &(i, c) in x.terms() {
            for &(j, d) in y.terms() {
                if let Some(k) = self.product(cs, i, j) {
                    terms.push((k, c * d));
                }
            }
        }
        SparseVec::from_terms(terms)
    }

    /// `I = sum_t delta_t (x) e`.
    pub fn unit_vec(&self, cs: &CosetSystem) -> SparseVec {
        let gl = cs.g_len();
        let e = cs.g_identity();
        SparseVec::from_terms((0..cs.m_len()).map(|t| (t * gl + e, 1.into())).collect())
    }

    /// `eps(delta_s (x) u) = [s = e]`.
    pub fn counit(&self, cs: &CosetSystem, i: usize) -> bool {
        i / cs.g_len() == self.e_m
    }

    pub fn counit_vec(&self, cs: &CosetSystem, x: &SparseVec) -> crate::linalg::Rat {
        x.terms()
            .iter()
            .filter(|&&(i, _)| self.counit(cs, i))
            .map(|&(_, c)| c)
            .sum()
    }

    /// The product as one linear map `H (x) H -> H`.
    pub fn mu_map(&self, cs: &CosetSystem) -> LinMap {
        let d = self.dim();
        let cols = (0..d)
            .flat_map(|i| {
                (0..d).map(move |j| match self.product(cs, i, j) {
                    Some(k) => SparseVec::unit(k),
                    None => SparseVec::zero(),
                })
            })
            .collect();
        LinMap::from_cols(d, cols)
    }
}

/// Action of an `H`-element on an object: grade projection then the group
/// action, extended bilinearly.
pub fn act_via_h(cs: &CosetSystem, v: &CObject, xi: &SparseVec, h: &SparseVec) -> SparseVec {
    let gl = cs.g_len();
    let mut out = SparseVec::zero();
    for &(hi, c) in h.terms() {
        let (s, u) = (hi / gl, hi % gl);
        for &(vi, d) in xi.terms() {
            if v.grade[vi] == s {
                out = out.add(&v.act_basis(u, vi).scale(c * d));
            }
        }
    }
    out
}

/// The full `H` verification sweep: object validity, grade
/// multiplicativity, the product as a morphism, associativity through the
/// associator (exhaustive over basis triples), the defining action
/// equation on the regular object, and the unit/counit laws.
pub fn verify_h(cs: &CosetSystem, h: &AlgebraH) -> Report {
    let mut report = Report::new();
    let d = h.dim();
    let gl = cs.g_len();

    report.merge(crate::module::validate_object(cs, &h.object));

    // grade equation s . a = s <| u, uniqueness already enforced at build
    let mut w = None;
    for i in 0..d {
        let (s, u) = (i / gl, i % gl);
        if cs.dot(s, h.object.grade[i]) != cs.ract(s, u) {
            w = Some(format!("basis ({}, {})", cs.m_name(s), cs.g_name(u)));
            break;
        }
    }
    report.record("h.grade_equation", w);

    // <h1 h2> = <h1> . <h2> on non-zero products
    let mut w = None;
    'grades: for i in 0..d {
        for j in 0..d {
            if let Some(k) = h.product(cs, i, j) {
                if h.object.grade[k] != cs.dot(h.object.grade[i], h.object.grade[j]) {
                    w = Some(format!("basis pair ({i}, {j})"));
                    break 'grades;
                }
            }
        }
    }
    report.record("h.grade_multiplicative", w);

    let hh = tensor_c(cs, &h.object, &h.object);
    report.record(
        "h.mu_is_morphism",
        is_morphism(cs, &hh, &h.object, &h.mu_map(cs)).err(),
    );

    // mu(mu (x) I) = mu(I (x) mu) Phi over all basis triples
    let mut w = None;
    'assoc: for i in 0..d {
        for j in 0..d {
            let b = h.object.grade[j];
            for k in 0..d {
                let c = h.object.grade[k];
                let lhs = h.product(cs, i, j).and_then(|ij| h.product(cs, ij, k));
                let (i2, _) = h
                    .object
                    .act_basis(cs.tau(b, c), i)
                    .as_monomial()
                    .expect("monomial action");
                let rhs = h.product(cs, j, k).and_then(|jk| h.product(cs, i2, jk));
                if lhs != rhs {
                    w = Some(format!("basis triple ({i}, {j}, {k})"));
                    break 'assoc;
                }
            }
        }
    }
    report.record("h.twisted_associativity", w);

    // the action V (x) H -> V is itself a morphism on the regular object
    let reg = m_regular_object(cs);
    {
        let vh = tensor_c(cs, &reg, &h.object);
        let mut cols = Vec::with_capacity(reg.dim() * d);
        for x in 0..reg.dim() {
            for i in 0..d {
                cols.push(act_via_h(cs, &reg, &SparseVec::unit(x), &SparseVec::unit(i)));
            }
        }
        let act = LinMap::from_cols(reg.dim(), cols);
        report.record(
            "h.action_is_morphism",
            is_morphism(cs, &vh, &reg, &act).err(),
        );
    }

    // action equation: (xi <| h1) <| h2 = (xi <| tau(a,b)) <| (h1 h2)
    let mut w = None;
    'action_eq: for x in 0..reg.dim() {
        let xi = SparseVec::unit(x);
        for i in 0..d {
            let hi = SparseVec::unit(i);
            let step = act_via_h(cs, &reg, &xi, &hi);
            for j in 0..d {
                let hj = SparseVec::unit(j);
                let lhs = act_via_h(cs, &reg, &step, &hj);
                let twist = reg.act(
                    cs.tau(h.object.grade[i], h.object.grade[j]),
                    &xi,
                );
                let prod = match h.product(cs, i, j) {
                    Some(k) => SparseVec::unit(k),
                    None => SparseVec::zero(),
                };
                let rhs = act_via_h(cs, &reg, &twist, &prod);
                if lhs != rhs {
                    w = Some(format!("basis {x}, pair ({i}, {j})"));
                    break 'action_eq;
                }
            }
        }
    }
    report.record("h.defining_action_equation", w);

    // unit and counit laws
    let unit = h.unit_vec(cs);
    let mut w = None;
    for i in 0..d {
        let hi = SparseVec::unit(i);
        if h.product_vec(cs, &unit, &hi) != hi || h.product_vec(cs, &hi, &unit) != hi {
            w = Some(format!("basis {i}"));
            break;
        }
    }
    report.record("h.unit_two_sided", w);

    let mut w = None;
    if h.counit_vec(cs, &unit) != 1.into() {
        w = Some("counit of I is not 1".into());
    }
    'eps: for i in 0..d {
        for j in 0..d {
            let prod = match h.product(cs, i, j) {
                Some(k) => h.counit(cs, k) as i64,
                None => 0,
            };
            let split = (h.counit(cs, i) && h.counit(cs, j)) as i64;
            if prod != split {
                w = Some(format!("counit not multiplicative at ({i}, {j})"));
                break 'eps;
            }
        }
    }
    report.record("h.counit_algebra_map", w);

    let mut w = None;
    for x in 0..reg.dim() {
        let xi = SparseVec::unit(x);
        if act_via_h(cs, &reg, &xi, &unit) != xi {
            w = Some(format!("I moves basis {x} of the regular object"));
            break;
        }
    }
    report.record("h.unit_acts_trivially", w);

    let k = unit_object(cs);
    let mut w = None;
    for i in 0..d {
        let hi = SparseVec::unit(i);
        let acted = act_via_h(cs, &k, &SparseVec::unit(0), &hi);
        let expect = if h.counit(cs, i) {
            SparseVec::unit(0)
        } else {
            SparseVec::zero()
        };
        if acted != expect {
            w = Some(format!("basis {i} acts on k unlike its counit"));
            break;
        }
    }
    report.record("h.action_on_k_is_counit", w);

    report
}

/// Whether the twisted associativity law degenerates to the plain one
/// (true exactly when the cocycle is trivial on the support of products).
pub fn untwisted_associativity_holds(cs: &CosetSystem, h: &AlgebraH) -> bool {
    let d = h.dim();
    (0..d).all(|i| {
        (0..d).all(|j| {
            (0..d).all(|k| {
                let lhs = h.product(cs, i, j).and_then(|ij| h.product(cs, ij, k));
                let rhs = h.product(cs, j, k).and_then(|jk| h.product(cs, i, jk));
                lhs == rhs
            })
        })
    })
}

/// Structure constants as JSON: basis labels, grades, and the non-zero
/// products (all coefficients are 1).
pub fn h_json(cs: &CosetSystem, h: &AlgebraH) -> serde_json::Value {
    let d = h.dim();
    let gl = cs.g_len();
    let basis: Vec<[String; 2]> = (0..d)
        .map(|i| [cs.m_name(i / gl), cs.g_name(i % gl)])
        .collect();
    let grade: Vec<String> = (0..d).map(|i| cs.m_name(h.object.grade[i])).collect();
    let mut mu = Vec::new();
    for i in 0..d {
        for j in 0..d {
            if let Some(k) = h.product(cs, i, j) {
                mu.push([i, j, k]);
            }
        }
    }
    json!({ "basis": basis, "grade": grade, "mu": mu })
}

/// Convenience gate used by the verification suites.
pub fn h_preconditions(cs: &CosetSystem) -> Result<()> {
    let r = classify(cs);
    if !r.contains_group_identity {
        return Err(Error::Precondition(
            "H needs the group identity in the transversal".into(),
        ));
    }
    if !r.has_left_division {
        return Err(Error::Precondition("H needs left division".into()));
    }
    Ok(())
}
