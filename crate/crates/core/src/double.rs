//! The double: a second copy of `X` with the product `(us) o (vt) = vust`.
//!
//! The set `Y` is `X` itself. Factorising both arguments gives a binary
//! operation `o` with left identity `e` and right division, a conjugation
//! action `y <~ x = x^-1 y x`, a cross map `y ~> x` defined through the
//! factorisation of the conjugate, and a cocycle `tau~(y, z)` that only
//! sees the transversal parts. These satisfy the same six matched-pair
//! identities as the base system, with `X` in the role of the subgroup,
//! which is what makes the doubly graded category braided.

use rayon::prelude::*;
use serde_json::json;

use crate::report::Report;
use crate::transversal::CosetSystem;

/// The double of a coset system. All elements of `Y` and of the acting
/// copy of `X` are ambient element indices of the base group.
#[derive(Debug, Clone)]
pub struct DoubleSystem {
    cs: CosetSystem,
    circ: Vec<usize>,
    /// `circ_left_div[y * n + c]` solves `y o a = c`; present only when the
    /// base transversal has left division (rows of `o` are then bijective).
    circ_left_div: Option<Vec<usize>>,
    tlact: Vec<usize>,
    ey: usize,
    fy: usize,
}

/// Builds the full table set of the double. Never fails: the left-division
/// table is simply absent when `(M, .)` lacks left division.
pub fn build_double(cs: &CosetSystem) -> DoubleSystem {
    let group = cs.group().clone();
    let n = group.order();

    let mut circ = vec![0usize; n * n];
    for y1 in 0..n {
        for y2 in 0..n {
            let (v, t) = cs.factorization(y2);
            // (us) o (vt) = v (us) t
            circ[y1 * n + y2] = group.mul(group.mul(cs.g_x(v), y1), cs.m_x(t));
        }
    }

    let mut left_div = vec![usize::MAX; n * n];
    let mut has_left_div = true;
    'rows: for y in 0..n {
        for a in 0..n {
            let c = circ[y * n + a];
            if left_div[y * n + c] != usize::MAX {
                has_left_div = false;
                break 'rows;
            }
            left_div[y * n + c] = a;
        }
    }

    let mut tlact = vec![0usize; n * n];
    for y in 0..n {
        let (v, _) = cs.factorization(y);
        let v_x = cs.g_x(v);
        for x in 0..n {
            let conj = group.mul(group.mul(group.inv(x), y), x);
            let (v2, _) = cs.factorization(conj);
            // y ~> x = v^-1 x v'  with y = v t and y <~ x = v' t'
            tlact[y * n + x] = group.mul(group.mul(group.inv(v_x), x), cs.g_x(v2));
        }
    }

    let ey = group.identity();
    let fy = cs.m_x(cs.em());
    DoubleSystem {
        cs: cs.clone(),
        circ,
        circ_left_div: has_left_div.then_some(left_div),
        tlact,
        ey,
        fy,
    }
}

impl DoubleSystem {
    pub fn base(&self) -> &CosetSystem {
        &self.cs
    }

    /// Number of elements of `Y` (the order of the base group).
    pub fn order(&self) -> usize {
        self.cs.x_len()
    }

    /// `y o z`.
    pub fn circ(&self, y: usize, z: usize) -> usize {
        self.circ[y * self.order() + z]
    }

    /// `y <~ x = x^-1 y x`.
    pub fn conj(&self, y: usize, x: usize) -> usize {
        let g = self.cs.group();
        g.mul(g.mul(g.inv(x), y), x)
    }

    /// `y ~> x`.
    pub fn tlact(&self, y: usize, x: usize) -> usize {
        self.tlact[y * self.order() + x]
    }

    /// `tau~(y, z)`: the base cocycle of the two transversal parts.
    pub fn tau(&self, y: usize, z: usize) -> usize {
        let (_, t) = self.cs.factorization(y);
        let (_, p) = self.cs.factorization(z);
        self.cs.g_x(self.cs.tau(t, p))
    }

    /// Left identity of `(Y, o)`; the group identity.
    pub fn ey(&self) -> usize {
        self.ey
    }

    /// The counterpart of `f_m` for the double.
    pub fn fy(&self) -> usize {
        self.fy
    }

    /// Splits `y = u s` into the pair (`|y|`, `<y>`) = (`u^-1`, `s`), so
    /// that `y = |y|^-1 <y>`.
    pub fn y_factorize(&self, y: usize) -> (usize, usize) {
        let (u, s) = self.cs.factorization(y);
        (self.cs.group().inv(self.cs.g_x(u)), self.cs.m_x(s))
    }

    /// Solves `y o a = c` for `a`; requires left division in the base.
    pub fn solve_norm(&self, y: usize, c: usize) -> Option<usize> {
        self.circ_left_div
            .as_ref()
            .map(|ld| ld[y * self.order() + c])
    }

    /// The left inverse `(vt)^L = v^-1 t^-1` in `(Y, o)`.
    pub fn circ_left_inverse(&self, y: usize) -> usize {
        let g = self.cs.group();
        let (v, t) = self.cs.factorization(y);
        g.mul(g.inv(self.cs.g_x(v)), g.inv(self.cs.m_x(t)))
    }

    pub fn name(&self, y: usize) -> String {
        self.cs.group().name_of(y)
    }

    pub fn circ_json(&self) -> serde_json::Value {
        let n = self.order();
        let names: Vec<String> = (0..n).map(|y| self.name(y)).collect();
        let table: Vec<Vec<String>> = (0..n)
            .map(|y| (0..n).map(|z| self.name(self.circ(y, z))).collect())
            .collect();
        json!({ "elements": names, "circ": table })
    }
}

fn par_find<F>(total: usize, f: F) -> Option<String>
where
    F: Fn(usize) -> Option<String> + Sync + Send,
{
    (0..total).into_par_iter().find_map_first(f)
}

/// Exhaustively checks the six matched-pair identities for
/// `(Y, o, <~, ~>, tau~)` with `X` acting, the identity laws around
/// `(e_y, f_y)`, right division, the left-inverse formula, and the
/// agreement of the two defining forms of `~>`.
pub fn verify_double(ds: &DoubleSystem) -> Report {
    let mut report = Report::new();
    let n = ds.order();
    let g = ds.base().group().clone();

    // both forms of ~>: v^-1 x v' and t x t'^-1
    let w = par_find(n * n, |idx| {
        let (y, x) = (idx / n, idx % n);
        let (_, t) = ds.base().factorization(y);
        let conj = ds.conj(y, x);
        let (_, t2) = ds.base().factorization(conj);
        let alt = g.mul(
            g.mul(ds.base().m_x(t), x),
            g.inv(ds.base().m_x(t2)),
        );
        (ds.tlact(y, x) != alt).then(|| format!("y={}, x={}", ds.name(y), ds.name(x)))
    });
    report.record("double.tlact_two_forms", w);

    // e o y = y
    let w = (0..n)
        .find(|&y| ds.circ(ds.ey(), y) != y)
        .map(|y| format!("y={}", ds.name(y)));
    report.record("double.left_identity", w);

    // right division: columns of o are bijections
    let mut w = None;
    'cols: for s in 0..n {
        let mut seen = vec![false; n];
        for p in 0..n {
            let t = ds.circ(p, s);
            if std::mem::replace(&mut seen[t], true) {
                w = Some(format!("column {} repeats {}", ds.name(s), ds.name(t)));
                break 'cols;
            }
        }
    }
    report.record("double.right_division", w);

    // (v^-1 t^-1) o (vt) = e
    let w = (0..n)
        .find(|&y| ds.circ(ds.circ_left_inverse(y), y) != ds.ey())
        .map(|y| format!("y={}", ds.name(y)));
    report.record("double.left_inverse_formula", w);

    // (1) s ~> (t ~> u) = tau~(s,t) ((s o t) ~> u) tau~(s <~ (t~>u), t <~ u)^-1
    let w = par_find(n * n * n, |idx| {
        let (s, rest) = (idx / (n * n), idx % (n * n));
        let (t, u) = (rest / n, rest % n);
        let tu = ds.tlact(t, u);
        let lhs = ds.tlact(s, tu);
        let rhs = g.word(&[
            ds.tau(s, t),
            ds.tlact(ds.circ(s, t), u),
            g.inv(ds.tau(ds.conj(s, tu), ds.conj(t, u))),
        ]);
        (lhs != rhs).then(|| {
            format!("s={}, t={}, u={}", ds.name(s), ds.name(t), ds.name(u))
        })
    });
    report.record("double.matched_pair.1", w);

    // (2) (s o t) <~ u = (s <~ (t ~> u)) o (t <~ u)
    let w = par_find(n * n * n, |idx| {
        let (s, rest) = (idx / (n * n), idx % (n * n));
        let (t, u) = (rest / n, rest % n);
        let lhs = ds.conj(ds.circ(s, t), u);
        let rhs = ds.circ(ds.conj(s, ds.tlact(t, u)), ds.conj(t, u));
        (lhs != rhs).then(|| {
            format!("s={}, t={}, u={}", ds.name(s), ds.name(t), ds.name(u))
        })
    });
    report.record("double.matched_pair.2", w);

    // (3) s ~> uv = (s ~> u)((s <~ u) ~> v)
    let w = par_find(n * n * n, |idx| {
        let (s, rest) = (idx / (n * n), idx % (n * n));
        let (u, v) = (rest / n, rest % n);
        let lhs = ds.tlact(s, g.mul(u, v));
        let rhs = g.mul(ds.tlact(s, u), ds.tlact(ds.conj(s, u), v));
        (lhs != rhs).then(|| {
            format!("s={}, u={}, v={}", ds.name(s), ds.name(u), ds.name(v))
        })
    });
    report.record("double.matched_pair.3", w);

    // (4) s <~ uv = (s <~ u) <~ v
    let w = par_find(n * n * n, |idx| {
        let (s, rest) = (idx / (n * n), idx % (n * n));
        let (u, v) = (rest / n, rest % n);
        let lhs = ds.conj(s, g.mul(u, v));
        let rhs = ds.conj(ds.conj(s, u), v);
        (lhs != rhs).then(|| {
            format!("s={}, u={}, v={}", ds.name(s), ds.name(u), ds.name(v))
        })
    });
    report.record("double.matched_pair.4", w);

    // (5) tau~(p,s) tau~(p o s, t) = (p ~> tau~(s,t)) tau~(p <~ tau~(s,t), s o t)
    let w = par_find(n * n * n, |idx| {
        let (p, rest) = (idx / (n * n), idx % (n * n));
        let (s, t) = (rest / n, rest % n);
        let tst = ds.tau(s, t);
        let lhs = g.mul(ds.tau(p, s), ds.tau(ds.circ(p, s), t));
        let rhs = g.mul(
            ds.tlact(p, tst),
            ds.tau(ds.conj(p, tst), ds.circ(s, t)),
        );
        (lhs != rhs).then(|| {
            format!("p={}, s={}, t={}", ds.name(p), ds.name(s), ds.name(t))
        })
    });
    report.record("double.matched_pair.5", w);

    // (6) (p <~ tau~(s,t)) o (s o t) = (p o s) o t
    let w = par_find(n * n * n, |idx| {
        let (p, rest) = (idx / (n * n), idx % (n * n));
        let (s, t) = (rest / n, rest % n);
        let lhs = ds.circ(ds.conj(p, ds.tau(s, t)), ds.circ(s, t));
        let rhs = ds.circ(ds.circ(p, s), t);
        (lhs != rhs).then(|| {
            format!("p={}, s={}, t={}", ds.name(p), ds.name(s), ds.name(t))
        })
    });
    report.record("double.matched_pair.6", w);

    // identity laws around e_y and f_y
    let fy = ds.fy();
    let fyi = g.inv(fy);

    let w = (0..n)
        .find(|&x| ds.conj(ds.ey(), x) != ds.ey())
        .map(|x| format!("x={}", ds.name(x)));
    report.record("double.unit_laws.1_ey_conj_fixed", w);

    let w = (0..n)
        .find(|&x| ds.tlact(ds.ey(), x) != g.word(&[fy, x, fyi]))
        .map(|x| format!("x={}", ds.name(x)));
    report.record("double.unit_laws.2_ey_tlact_conjugation", w);

    let w = (0..n)
        .find(|&y| ds.tlact(y, ds.ey()) != ds.ey())
        .map(|y| format!("y={}", ds.name(y)));
    report.record("double.unit_laws.3_tlact_by_e", w);

    let w = (0..n)
        .find(|&y| ds.conj(y, ds.ey()) != y)
        .map(|y| format!("y={}", ds.name(y)));
    report.record("double.unit_laws.4_conj_by_e", w);

    let w = (0..n)
        .find(|&y| ds.tau(ds.ey(), y) != fy)
        .map(|y| format!("y={}", ds.name(y)));
    report.record("double.unit_laws.5_tau_ey", w);

    let w = (0..n)
        .find(|&y| ds.tlact(y, fyi) != g.inv(ds.tau(ds.conj(y, fyi), ds.ey())))
        .map(|y| format!("y={}", ds.name(y)));
    report.record("double.unit_laws.6_tlact_fy_inverse", w);

    let w = (0..n)
        .find(|&y| ds.circ(ds.conj(y, fyi), ds.ey()) != y)
        .map(|y| format!("y={}", ds.name(y)));
    report.record("double.unit_laws.7_conj_fy_circ_ey", w);

    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    #[test]
    fn d6_circ_and_tau_examples() {
        let cs = presets::d6();
        let ds = build_double(&cs);
        let g = cs.group();
        let x = g.parse_elem("(123456)").unwrap();
        let x2 = g.mul(x, x);
        assert_eq!(ds.circ(x, x), x2);

        // factorisations (y x, x): tau~ = tau(x, x) = x^2
        let y = g
            .elem_index(&crate::perm::Perm::from_images(vec![0, 5, 4, 3, 2, 1]).unwrap())
            .unwrap();
        let yx = g.mul(y, x);
        assert_eq!(ds.tau(yx, x), x2);
    }

    #[test]
    fn conjugation_fixes_commuting_elements() {
        let cs = presets::d6();
        let ds = build_double(&cs);
        let g = cs.group();
        let x = g.parse_elem("(123456)").unwrap();
        let x2 = g.mul(x, x);
        assert_eq!(ds.conj(x2, x), x2);
    }

    #[test]
    fn y_factorize_splits_correctly() {
        for cs in [presets::s3_mixed(), presets::d6()] {
            let ds = build_double(&cs);
            let g = cs.group().clone();
            assert_eq!(ds.y_factorize(g.identity()), (g.identity(), g.identity()));
            for s in 0..cs.m_len() {
                assert_eq!(ds.y_factorize(cs.m_x(s)), (g.identity(), cs.m_x(s)));
            }
            // y = |y|^-1 <y> for every y
            for y in 0..g.order() {
                let (gy, my) = ds.y_factorize(y);
                assert_eq!(g.mul(g.inv(gy), my), y);
            }
        }
    }

    #[test]
    fn verify_double_passes_on_small_presets() {
        for cs in [presets::s3_mixed(), presets::s3_cyclic(), presets::d6()] {
            let ds = build_double(&cs);
            let report = verify_double(&ds);
            assert!(report.ok(), "{}", report.render());
        }
    }

    #[test]
    fn corrupted_circ_table_is_caught() {
        let cs = presets::s3_cyclic();
        let mut ds = build_double(&cs);
        ds.circ[7] = ds.circ[7] ^ 1; // swap one entry to a different element
        let report = verify_double(&ds);
        assert!(!report.ok());
    }

    #[test]
    fn norm_solving_matches_definition() {
        let cs = presets::s3_cyclic();
        let ds = build_double(&cs);
        for y in 0..ds.order() {
            for x in 0..ds.order() {
                let a = ds.solve_norm(y, ds.conj(y, x)).unwrap();
                assert_eq!(ds.circ(y, a), ds.conj(y, x));
            }
        }
        // without left division the table is absent
        let ds = build_double(&presets::s3_mixed());
        assert!(ds.solve_norm(0, 0).is_none());
    }
}
