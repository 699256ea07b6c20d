//! The algebra of a left-coset transversal.
//!
//! Given a group `X`, a subgroup `G` and a transversal `M` (one
//! representative per left coset `Gs`), every `x` factorises uniquely as
//! `x = u s` with `u` in `G`, `s` in `M`. Factorising products yields four
//! tables:
//!
//! * `s t   = tau(s,t) (s . t)` — the binary operation `.` on `M` and the
//!   `G`-valued cocycle `tau` measuring its failure to close in `M`;
//! * `s u   = (s |> u)(s <| u)` — the action-like maps `|> : M x G -> G`
//!   and `<| : M x G -> M`.
//!
//! Everything downstream (the tensor categories, the algebra on `M x G`,
//! the double, the Hopf algebra) is built from these tables, so this module
//! also houses the exhaustive verifier for the six matched-pair identities
//! and the seven left-identity laws they satisfy.
//!
//! Convention: in all tables the row is the first argument and the column
//! the second, and `s . t` means "the representative of the coset of `s t`".

use std::sync::Arc;

use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::group::{factorize, is_transversal, Group, Subgroup};
use crate::perm::Perm;
use crate::report::Report;

/// A transversal together with its factorisation tables.
///
/// Elements of `M` and `G` are addressed by *position* (`0..m_len()`,
/// `0..g_len()`); positions translate to ambient element indices through
/// [`CosetSystem::m_x`] and [`CosetSystem::g_x`].
#[derive(Debug, Clone)]
pub struct CosetSystem {
    group: Arc<Group>,
    g: Subgroup,
    m: Vec<usize>,
    m_pos: Vec<Option<usize>>,
    dot: Vec<usize>,
    tau: Vec<usize>,
    ract: Vec<usize>,
    lact: Vec<usize>,
    fact: Vec<(usize, usize)>,
    em: usize,
    fm: usize,
    left_inv: Vec<usize>,
    right_div: Vec<usize>,
}

/// Builds the full table set for `(X, G, M)`. Fails if `M` is not a
/// transversal of `G` in `X`.
pub fn build_coset_system(
    group: &Arc<Group>,
    g: Subgroup,
    m: Vec<usize>,
) -> Result<CosetSystem> {
    is_transversal(group, &g, &m).map_err(Error::NotTransversal)?;
    let n = group.order();
    let ml = m.len();
    let gl = g.order();

    let mut m_pos = vec![None; n];
    for (k, &s) in m.iter().enumerate() {
        m_pos[s] = Some(k);
    }

    let mut fact = vec![(usize::MAX, usize::MAX); n];
    for (x, slot) in fact.iter_mut().enumerate() {
        let f = factorize(group, &g, &m, x)?;
        *slot = (f.u, f.s);
    }

    let mut dot = vec![0; ml * ml];
    let mut tau = vec![0; ml * ml];
    for s in 0..ml {
        for t in 0..ml {
            let (u, st) = fact[group.mul(m[s], m[t])];
            tau[s * ml + t] = u;
            dot[s * ml + t] = st;
        }
    }

    let mut ract = vec![0; ml * gl];
    let mut lact = vec![0; ml * gl];
    for s in 0..ml {
        for u in 0..gl {
            let (lu, rs) = fact[group.mul(m[s], g.elem(u))];
            lact[s * gl + u] = lu;
            ract[s * gl + u] = rs;
        }
    }

    let em = fact[group.identity()].1;
    let fm = g
        .pos_of(m[em])
        .ok_or_else(|| Error::NotTransversal("left identity of M does not lie in G".into()))?;

    // Right division: the column maps p -> p . s are bijections of M.
    let mut right_div = vec![usize::MAX; ml * ml];
    for s in 0..ml {
        for p in 0..ml {
            let t = dot[p * ml + s];
            if right_div[t * ml + s] != usize::MAX {
                return Err(Error::NotTransversal(format!(
                    "column {} of the dot table is not a bijection",
                    group.name_of(m[s])
                )));
            }
            right_div[t * ml + s] = p;
        }
    }
    let left_inv = (0..ml).map(|t| right_div[em * ml + t]).collect();

    Ok(CosetSystem {
        group: Arc::clone(group),
        g,
        m,
        m_pos,
        dot,
        tau,
        ract,
        lact,
        fact,
        em,
        fm,
        left_inv,
        right_div,
    })
}

impl CosetSystem {
    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.g
    }

    pub fn x_len(&self) -> usize {
        self.group.order()
    }

    pub fn m_len(&self) -> usize {
        self.m.len()
    }

    pub fn g_len(&self) -> usize {
        self.g.order()
    }

    /// Ambient element index of the transversal member at position `s`.
    pub fn m_x(&self, s: usize) -> usize {
        self.m[s]
    }

    /// Ambient element index of the subgroup member at position `u`.
    pub fn g_x(&self, u: usize) -> usize {
        self.g.elem(u)
    }

    pub fn m_pos_of(&self, x: usize) -> Option<usize> {
        self.m_pos[x]
    }

    pub fn g_pos_of(&self, x: usize) -> Option<usize> {
        self.g.pos_of(x)
    }

    /// `s . t` as a position in `M`.
    pub fn dot(&self, s: usize, t: usize) -> usize {
        self.dot[s * self.m.len() + t]
    }

    /// `tau(s, t)` as a position in `G`.
    pub fn tau(&self, s: usize, t: usize) -> usize {
        self.tau[s * self.m.len() + t]
    }

    /// `s <| u` as a position in `M`.
    pub fn ract(&self, s: usize, u: usize) -> usize {
        self.ract[s * self.g.order() + u]
    }

    /// `s |> u` as a position in `G`.
    pub fn lact(&self, s: usize, u: usize) -> usize {
        self.lact[s * self.g.order() + u]
    }

    /// Factorisation `x = u s` as `(G position, M position)`.
    pub fn factorization(&self, x: usize) -> (usize, usize) {
        self.fact[x]
    }

    /// Position in `M` of the left identity `e_m`.
    pub fn em(&self) -> usize {
        self.em
    }

    /// Position in `G` of `e_m` (the same ambient element, viewed in `G`).
    pub fn fm(&self) -> usize {
        self.fm
    }

    pub fn gmul(&self, u: usize, v: usize) -> usize {
        self.g
            .pos_of(self.group.mul(self.g.elem(u), self.g.elem(v)))
            .expect("subgroup closed under multiplication")
    }

    pub fn ginv(&self, u: usize) -> usize {
        self.g
            .pos_of(self.group.inv(self.g.elem(u)))
            .expect("subgroup closed under inverse")
    }

    pub fn g_identity(&self) -> usize {
        self.g.pos_of(self.group.identity()).expect("identity in subgroup")
    }

    /// Product of a word of `G` positions, left to right.
    pub fn gword(&self, w: &[usize]) -> usize {
        w.iter()
            .copied()
            .reduce(|a, b| self.gmul(a, b))
            .unwrap_or_else(|| self.g_identity())
    }

    /// The unique `p` with `p . t = e_m` (the left inverse `t^L`).
    pub fn left_inverse(&self, t: usize) -> usize {
        self.left_inv[t]
    }

    /// The unique `p` with `p . s = t`.
    pub fn right_divide(&self, t: usize, s: usize) -> usize {
        self.right_div[t * self.m.len() + s]
    }

    /// The first `p` in transversal order with `s . p = t`, if any. A row
    /// of the dot table need not be a bijection, so the solution may be
    /// missing, and callers that rely on uniqueness must check
    /// [`classify`] first.
    pub fn left_divide(&self, s: usize, t: usize) -> Option<usize> {
        (0..self.m.len()).find(|&p| self.dot(s, p) == t)
    }

    /// The first `p` with `s . p = e`, when the group identity lies in `M`.
    pub fn right_inverse(&self, s: usize) -> Option<usize> {
        let e = self.m_pos[self.group.identity()]?;
        self.left_divide(s, e)
    }

    pub fn m_name(&self, s: usize) -> String {
        self.group.name_of(self.m[s])
    }

    pub fn g_name(&self, u: usize) -> String {
        self.group.name_of(self.g.elem(u))
    }

    /// Overwrites one cocycle entry; fault injection for the coherence
    /// tests.
    #[cfg(test)]
    pub(crate) fn poison_tau(&mut self, s: usize, t: usize, u: usize) {
        let ml = self.m.len();
        self.tau[s * ml + t] = u;
    }

    /// Dot table as positions, row = first argument. Feeding this back to
    /// [`cayley_embed`] reproduces the system up to relabelling.
    pub fn abstract_dot_table(&self) -> Vec<Vec<usize>> {
        (0..self.m.len())
            .map(|s| (0..self.m.len()).map(|t| self.dot(s, t)).collect())
            .collect()
    }
}

/// Structural flags of `(M, .)` and of the pair `(X, G)`. Every flag is
/// computed by an independent exhaustive scan; the redundancies between
/// them (e.g. `is_subgroup` versus `contains_group_identity && tau_trivial`)
/// are asserted by tests, not assumed here.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub has_right_division: bool,
    pub has_left_division: bool,
    pub has_two_sided_identity: bool,
    pub contains_group_identity: bool,
    pub is_subgroup: bool,
    pub g_is_normal: bool,
    pub tau_trivial: bool,
    pub ract_trivial: bool,
}

pub fn classify(cs: &CosetSystem) -> StructureReport {
    let ml = cs.m_len();
    let group = cs.group();

    let has_right_division = (0..ml).all(|s| {
        let mut seen = vec![false; ml];
        (0..ml).all(|p| !std::mem::replace(&mut seen[cs.dot(p, s)], true))
    });
    let has_left_division = (0..ml).all(|s| {
        let mut seen = vec![false; ml];
        (0..ml).all(|p| !std::mem::replace(&mut seen[cs.dot(s, p)], true))
    });
    let has_two_sided_identity = (0..ml).all(|t| cs.dot(t, cs.em()) == t);
    let contains_group_identity = cs.m_pos_of(group.identity()).is_some();

    let is_subgroup = {
        let closed_mul = (0..ml).all(|s| {
            (0..ml).all(|t| {
                cs.m_pos_of(group.mul(cs.m_x(s), cs.m_x(t))).is_some()
            })
        });
        let closed_inv = (0..ml).all(|s| cs.m_pos_of(group.inv(cs.m_x(s))).is_some());
        closed_mul && closed_inv
    };

    let g_is_normal = (0..group.order()).all(|x| {
        (0..cs.g_len()).all(|u| {
            let conj = group.mul(group.mul(x, cs.g_x(u)), group.inv(x));
            cs.g_pos_of(conj).is_some()
        })
    });

    let e_g = cs.g_identity();
    let tau_trivial = (0..ml).all(|s| (0..ml).all(|t| cs.tau(s, t) == e_g));
    let ract_trivial = (0..ml).all(|s| (0..cs.g_len()).all(|u| cs.ract(s, u) == s));

    StructureReport {
        has_right_division,
        has_left_division,
        has_two_sided_identity,
        contains_group_identity,
        is_subgroup,
        g_is_normal,
        tau_trivial,
        ract_trivial,
    }
}

/// Exhaustively checks the six matched-pair identities relating the dot
/// operation, the cocycle and the two actions, plus the seven laws tying
/// the left identity `e_m` and its copy `f_m` in `G` to the tables, plus
/// right division and the factorisation round trip.
pub fn verify_matched_pair(cs: &CosetSystem) -> Report {
    let mut report = Report::new();
    let ml = cs.m_len();
    let gl = cs.g_len();
    let group = cs.group();

    // x -> (u, s) -> u s recovers x.
    let mut witness = None;
    for x in 0..group.order() {
        let (u, s) = cs.factorization(x);
        if group.mul(cs.g_x(u), cs.m_x(s)) != x {
            witness = Some(format!("x={}", group.name_of(x)));
            break;
        }
    }
    report.record("factorization.round_trip", witness);

    let mut witness = None;
    'rd: for s in 0..ml {
        let mut seen = vec![false; ml];
        for p in 0..ml {
            let t = cs.dot(p, s);
            if seen[t] {
                witness = Some(format!(
                    "column s={} repeats value {}",
                    cs.m_name(s),
                    cs.m_name(t)
                ));
                break 'rd;
            }
            seen[t] = true;
        }
    }
    report.record("right_division.columns_latin", witness);

    // (1) s |> (t |> u) = tau(s,t) ((s.t) |> u) tau(s <| (t|>u), t <| u)^-1
    let mut w1 = None;
    // (2) (s.t) <| u = (s <| (t|>u)) . (t <| u)
    let mut w2 = None;
    'outer12: for s in 0..ml {
        for t in 0..ml {
            for u in 0..gl {
                let tu = cs.lact(t, u);
                let lhs1 = cs.lact(s, tu);
                let rhs1 = cs.gword(&[
                    cs.tau(s, t),
                    cs.lact(cs.dot(s, t), u),
                    cs.ginv(cs.tau(cs.ract(s, tu), cs.ract(t, u))),
                ]);
                if lhs1 != rhs1 && w1.is_none() {
                    w1 = Some(format!(
                        "s={}, t={}, u={}: lhs={}, rhs={}",
                        cs.m_name(s),
                        cs.m_name(t),
                        cs.g_name(u),
                        cs.g_name(lhs1),
                        cs.g_name(rhs1)
                    ));
                }
                let lhs2 = cs.ract(cs.dot(s, t), u);
                let rhs2 = cs.dot(cs.ract(s, tu), cs.ract(t, u));
                if lhs2 != rhs2 && w2.is_none() {
                    w2 = Some(format!(
                        "s={}, t={}, u={}: lhs={}, rhs={}",
                        cs.m_name(s),
                        cs.m_name(t),
                        cs.g_name(u),
                        cs.m_name(lhs2),
                        cs.m_name(rhs2)
                    ));
                }
                if w1.is_some() && w2.is_some() {
                    break 'outer12;
                }
            }
        }
    }
    report.record("matched_pair.1_lact_of_lact", w1);
    report.record("matched_pair.2_ract_of_dot", w2);

    // (3) s |> uv = (s |> u)((s <| u) |> v)   (4) s <| uv = (s <| u) <| v
    let mut w3 = None;
    let mut w4 = None;
    'outer34: for s in 0..ml {
        for u in 0..gl {
            for v in 0..gl {
                let uv = cs.gmul(u, v);
                let lhs3 = cs.lact(s, uv);
                let rhs3 = cs.gmul(cs.lact(s, u), cs.lact(cs.ract(s, u), v));
                if lhs3 != rhs3 && w3.is_none() {
                    w3 = Some(format!(
                        "s={}, u={}, v={}",
                        cs.m_name(s),
                        cs.g_name(u),
                        cs.g_name(v)
                    ));
                }
                let lhs4 = cs.ract(s, uv);
                let rhs4 = cs.ract(cs.ract(s, u), v);
                if lhs4 != rhs4 && w4.is_none() {
                    w4 = Some(format!(
                        "s={}, u={}, v={}",
                        cs.m_name(s),
                        cs.g_name(u),
                        cs.g_name(v)
                    ));
                }
                if w3.is_some() && w4.is_some() {
                    break 'outer34;
                }
            }
        }
    }
    report.record("matched_pair.3_lact_multiplicative", w3);
    report.record("matched_pair.4_ract_multiplicative", w4);

    // (5) tau(p,s) tau(p.s, t) = (p |> tau(s,t)) tau(p <| tau(s,t), s.t)
    // (6) (p <| tau(s,t)) . (s.t) = (p.s) . t
    let mut w5 = None;
    let mut w6 = None;
    'outer56: for p in 0..ml {
        for s in 0..ml {
            for t in 0..ml {
                let tst = cs.tau(s, t);
                let lhs5 = cs.gmul(cs.tau(p, s), cs.tau(cs.dot(p, s), t));
                let rhs5 = cs.gmul(
                    cs.lact(p, tst),
                    cs.tau(cs.ract(p, tst), cs.dot(s, t)),
                );
                if lhs5 != rhs5 && w5.is_none() {
                    w5 = Some(format!(
                        "p={}, s={}, t={}: lhs={}, rhs={}",
                        cs.m_name(p),
                        cs.m_name(s),
                        cs.m_name(t),
                        cs.g_name(lhs5),
                        cs.g_name(rhs5)
                    ));
                }
                let lhs6 = cs.dot(cs.ract(p, tst), cs.dot(s, t));
                let rhs6 = cs.dot(cs.dot(p, s), t);
                if lhs6 != rhs6 && w6.is_none() {
                    w6 = Some(format!(
                        "p={}, s={}, t={}",
                        cs.m_name(p),
                        cs.m_name(s),
                        cs.m_name(t)
                    ));
                }
                if w5.is_some() && w6.is_some() {
                    break 'outer56;
                }
            }
        }
    }
    report.record("matched_pair.5_cocycle", w5);
    report.record("matched_pair.6_twisted_associativity", w6);

    // The seven identity laws around e_m and f_m.
    let em = cs.em();
    let fm = cs.fm();
    let e_g = cs.g_identity();

    let mut w = None;
    for v in 0..gl {
        if cs.ract(em, v) != em {
            w = Some(format!("v={}", cs.g_name(v)));
            break;
        }
    }
    report.record("unit_laws.1_em_ract_fixed", w);

    let mut w = None;
    for v in 0..gl {
        let rhs = cs.gword(&[fm, v, cs.ginv(fm)]);
        if cs.lact(em, v) != rhs {
            w = Some(format!("v={}", cs.g_name(v)));
            break;
        }
    }
    report.record("unit_laws.2_em_lact_conjugation", w);

    let mut w = None;
    for t in 0..ml {
        if cs.lact(t, e_g) != e_g {
            w = Some(format!("t={}", cs.m_name(t)));
            break;
        }
    }
    report.record("unit_laws.3_lact_by_e", w);

    let mut w = None;
    for t in 0..ml {
        if cs.ract(t, e_g) != t {
            w = Some(format!("t={}", cs.m_name(t)));
            break;
        }
    }
    report.record("unit_laws.4_ract_by_e", w);

    let mut w = None;
    for t in 0..ml {
        if cs.tau(em, t) != fm {
            w = Some(format!("t={}", cs.m_name(t)));
            break;
        }
    }
    report.record("unit_laws.5_tau_em", w);

    let fmi = cs.ginv(fm);
    let mut w = None;
    for t in 0..ml {
        let lhs = cs.lact(t, fmi);
        let rhs = cs.ginv(cs.tau(cs.ract(t, fmi), em));
        if lhs != rhs {
            w = Some(format!("t={}", cs.m_name(t)));
            break;
        }
    }
    report.record("unit_laws.6_lact_fm_inverse", w);

    let mut w = None;
    for t in 0..ml {
        if cs.dot(cs.ract(t, fmi), em) != t {
            w = Some(format!("t={}", cs.m_name(t)));
            break;
        }
    }
    report.record("unit_laws.7_ract_fm_dot_em", w);

    report
}

/// Result of the Cayley-style embedding of an abstract table.
pub struct CayleyEmbedding {
    /// The symmetric group on the carrier set.
    pub system: CosetSystem,
    /// `sigma[g]` is the permutation assigned to carrier element `g`; it is
    /// also `M[g]` of the embedded system, so positions in `M` match
    /// carrier indices.
    pub sigma: Vec<Perm>,
}

/// Embeds a finite binary operation with a left identity and right division
/// as a transversal of a point stabiliser inside the full symmetric group
/// on its carrier. `sigma(g)` is defined by `sigma(g)(f * g) = f`.
pub fn cayley_embed(table: &[Vec<usize>]) -> Result<CayleyEmbedding> {
    let n = table.len();
    if n == 0 {
        return Err(Error::Precondition("empty operation table".into()));
    }
    if n > 6 {
        return Err(Error::Unsupported(format!(
            "carrier of size {n} would need the symmetric group of order {n}!, too large to enumerate"
        )));
    }
    for row in table {
        if row.len() != n || row.iter().any(|&v| v >= n) {
            return Err(Error::Precondition("operation table is not square over 0..n".into()));
        }
    }

    // Right division: each column f -> f * g must be a bijection.
    let mut sigma = Vec::with_capacity(n);
    for g in 0..n {
        let mut images = vec![usize::MAX; n];
        for (f, row) in table.iter().enumerate() {
            let fg = row[g];
            if images[fg] != usize::MAX {
                return Err(Error::Precondition(format!(
                    "column {g} of the operation table is not a bijection (no right division)"
                )));
            }
            images[fg] = f;
        }
        sigma.push(Perm::from_images(images)?);
    }

    let e_f = (0..n)
        .find(|&e| (0..n).all(|f| table[e][f] == f))
        .ok_or_else(|| Error::Precondition("operation table has no left identity".into()))?;

    let group = Arc::new(Group::symmetric(n));
    let stab = Subgroup::stabilizer(&group, e_f);
    let m: Vec<usize> = sigma
        .iter()
        .map(|p| group.elem_index(p).expect("sigma lands in the symmetric group"))
        .collect();
    let system = build_coset_system(&group, stab, m)?;
    Ok(CayleyEmbedding { system, sigma })
}

/// The group structure rebuilt on `G x M` from the tables alone, plus the
/// check that `(u, s) -> u s` is an isomorphism onto `X`.
pub struct PairGroup {
    /// Pair index = `u * m_len + s`.
    pub mul: Vec<usize>,
    pub identity: usize,
    /// Pair index -> ambient element of `X` under `(u,s) -> u s`.
    pub to_x: Vec<usize>,
}

pub fn reconstruct_group(cs: &CosetSystem) -> (PairGroup, Report) {
    let mut report = Report::new();
    let ml = cs.m_len();
    let gl = cs.g_len();
    let n = gl * ml;
    let group = cs.group();

    let pair = |u: usize, s: usize| u * ml + s;
    let product = |u: usize, s: usize, v: usize, t: usize| -> (usize, usize) {
        // (u,s)(v,t) = (u (s|>v) tau(s<|v, t), (s<|v) . t)
        let sv = cs.ract(s, v);
        (
            cs.gword(&[u, cs.lact(s, v), cs.tau(sv, t)]),
            cs.dot(sv, t),
        )
    };

    let mut mul = vec![0usize; n * n];
    for u in 0..gl {
        for s in 0..ml {
            for v in 0..gl {
                for t in 0..ml {
                    let (w, p) = product(u, s, v, t);
                    mul[pair(u, s) * n + pair(v, t)] = pair(w, p);
                }
            }
        }
    }

    let identity = pair(cs.ginv(cs.fm()), cs.em());
    let to_x: Vec<usize> = (0..n)
        .map(|i| group.mul(cs.g_x(i / ml), cs.m_x(i % ml)))
        .collect();

    // (u,s) -> u s is a bijection onto X.
    let mut w = None;
    let mut seen = vec![false; group.order()];
    for &x in &to_x {
        if std::mem::replace(&mut seen[x], true) {
            w = Some(format!("{} hit twice", group.name_of(x)));
            break;
        }
    }
    report.record("reconstruction.bijective", w);

    // Multiplicativity, exhaustively over all pairs of pairs.
    let mut w = None;
    'mult: for i in 0..n {
        for j in 0..n {
            if to_x[mul[i * n + j]] != group.mul(to_x[i], to_x[j]) {
                w = Some(format!(
                    "pair product at {} * {}",
                    group.name_of(to_x[i]),
                    group.name_of(to_x[j])
                ));
                break 'mult;
            }
        }
    }
    report.record("reconstruction.multiplicative", w);

    // Two-sided identity law for (f_m^-1, e_m).
    let mut w = None;
    for i in 0..n {
        if mul[identity * n + i] != i || mul[i * n + identity] != i {
            w = Some(format!("element {}", group.name_of(to_x[i])));
            break;
        }
    }
    report.record("reconstruction.identity_two_sided", w);

    // Left inverse formula (v,t)^L = (f_m^-1 tau(t^L,t)^-1 (t^L |> v^-1), t^L <| v^-1).
    let mut w = None;
    'inv: for v in 0..gl {
        for t in 0..ml {
            let tl = cs.left_inverse(t);
            let vi = cs.ginv(v);
            let left = pair(
                cs.gword(&[cs.ginv(cs.fm()), cs.ginv(cs.tau(tl, t)), cs.lact(tl, vi)]),
                cs.ract(tl, vi),
            );
            if mul[left * n + pair(v, t)] != identity {
                w = Some(format!("(v,t)=({}, {})", cs.g_name(v), cs.m_name(t)));
                break 'inv;
            }
        }
    }
    report.record("reconstruction.left_inverse_formula", w);

    (PairGroup { mul, identity, to_x }, report)
}

/// Named structural requirements for transversal searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StructureFlag {
    RightDivision,
    LeftDivision,
    TwoSidedIdentity,
    ContainsE,
    Subgroup,
    Normal,
    TauTrivial,
    RactTrivial,
}

impl StructureFlag {
    pub fn parse(name: &str) -> Result<StructureFlag> {
        Ok(match name {
            "right_division" => StructureFlag::RightDivision,
            "left_division" => StructureFlag::LeftDivision,
            "two_sided_identity" => StructureFlag::TwoSidedIdentity,
            "contains_e" => StructureFlag::ContainsE,
            "subgroup" => StructureFlag::Subgroup,
            "normal" => StructureFlag::Normal,
            "tau_trivial" => StructureFlag::TauTrivial,
            "ract_trivial" => StructureFlag::RactTrivial,
            other => {
                return Err(Error::Parse(format!("unknown structure flag {other:?}")));
            }
        })
    }

    pub fn read(self, r: &StructureReport) -> bool {
        match self {
            StructureFlag::RightDivision => r.has_right_division,
            StructureFlag::LeftDivision => r.has_left_division,
            StructureFlag::TwoSidedIdentity => r.has_two_sided_identity,
            StructureFlag::ContainsE => r.contains_group_identity,
            StructureFlag::Subgroup => r.is_subgroup,
            StructureFlag::Normal => r.g_is_normal,
            StructureFlag::TauTrivial => r.tau_trivial,
            StructureFlag::RactTrivial => r.ract_trivial,
        }
    }
}

/// Conjunction of (possibly negated) structure flags; parsed from a comma
/// list such as `contains_e,left_division,!tau_trivial`.
#[derive(Debug, Clone, Default)]
pub struct TransversalFilter {
    pub require: Vec<(StructureFlag, bool)>,
}

impl TransversalFilter {
    pub fn parse(text: &str) -> Result<Self> {
        let mut require = Vec::new();
        for raw in text.split(',') {
            let tok = raw.trim();
            if tok.is_empty() {
                continue;
            }
            let (name, wanted) = match tok.strip_prefix('!') {
                Some(rest) => (rest, false),
                None => (tok, true),
            };
            require.push((StructureFlag::parse(name)?, wanted));
        }
        Ok(TransversalFilter { require })
    }

    pub fn matches(&self, report: &StructureReport) -> bool {
        self.require.iter().all(|&(f, want)| f.read(report) == want)
    }
}

pub struct SearchOutcome {
    pub systems: Vec<CosetSystem>,
    pub examined: u64,
    /// False when the enumeration stopped early on the budget.
    pub exhausted: bool,
}

/// Deterministic enumeration of transversals of `g` in `group`, filtered by
/// `filter`. Cosets are ordered by their minimal element (the coset of the
/// identity first), candidates within a coset by element index, and choices
/// are enumerated lexicographically with the last coset varying fastest.
pub fn search_transversals(
    group: &Arc<Group>,
    g: &Subgroup,
    filter: &TransversalFilter,
    limit: usize,
    budget: u64,
) -> SearchOutcome {
    let n = group.order();
    let mut assigned = vec![false; n];
    let mut cosets: Vec<Vec<usize>> = Vec::new();
    for x in 0..n {
        if assigned[x] {
            continue;
        }
        let mut coset: Vec<usize> = g.members().iter().map(|&u| group.mul(u, x)).collect();
        coset.sort_unstable();
        for &y in &coset {
            assigned[y] = true;
        }
        cosets.push(coset);
    }
    cosets.sort_by_key(|c| c[0]);

    let mut systems = Vec::new();
    let mut examined = 0u64;
    let mut exhausted = true;
    let mut choice = vec![0usize; cosets.len()];
    'all: loop {
        if examined >= budget {
            exhausted = false;
            break;
        }
        examined += 1;
        let m: Vec<usize> = cosets
            .iter()
            .zip(&choice)
            .map(|(coset, &k)| coset[k])
            .collect();
        let cs = build_coset_system(group, g.clone(), m)
            .expect("one representative per coset is a transversal");
        if filter.matches(&classify(&cs)) {
            systems.push(cs);
            if systems.len() >= limit {
                exhausted = false;
                break;
            }
        }
        // advance the odometer, last position fastest
        for k in (0..choice.len()).rev() {
            choice[k] += 1;
            if choice[k] < cosets[k].len() {
                continue 'all;
            }
            choice[k] = 0;
        }
        break;
    }
    SearchOutcome {
        systems,
        examined,
        exhausted,
    }
}

/// All four tables as cycle-notation strings, row = first argument.
#[derive(Debug, Clone, Serialize)]
pub struct TableSet {
    pub m: Vec<String>,
    pub g: Vec<String>,
    pub dot: Vec<Vec<String>>,
    pub tau: Vec<Vec<String>>,
    pub ract: Vec<Vec<String>>,
    pub lact: Vec<Vec<String>>,
}

pub fn tables(cs: &CosetSystem) -> TableSet {
    let ml = cs.m_len();
    let gl = cs.g_len();
    TableSet {
        m: (0..ml).map(|s| cs.m_name(s)).collect(),
        g: (0..gl).map(|u| cs.g_name(u)).collect(),
        dot: (0..ml)
            .map(|s| (0..ml).map(|t| cs.m_name(cs.dot(s, t))).collect())
            .collect(),
        tau: (0..ml)
            .map(|s| (0..ml).map(|t| cs.g_name(cs.tau(s, t))).collect())
            .collect(),
        ract: (0..ml)
            .map(|s| (0..gl).map(|u| cs.m_name(cs.ract(s, u))).collect())
            .collect(),
        lact: (0..ml)
            .map(|s| (0..gl).map(|u| cs.g_name(cs.lact(s, u))).collect())
            .collect(),
    }
}

pub fn tables_json(cs: &CosetSystem) -> serde_json::Value {
    let t = tables(cs);
    json!({
        "group": {
            "type": "permutations",
            "degree": cs.group().degree(),
            "generators": cs.group().elements().iter()
                .map(|p| p.images().to_vec()).collect::<Vec<_>>(),
        },
        "subgroup": cs.g.members().iter()
            .map(|&u| cs.group().perm(u).images().to_vec()).collect::<Vec<_>>(),
        "M": t.m,
        "G": t.g,
        "dot": t.dot,
        "tau": t.tau,
        "ract": t.ract,
        "lact": t.lact,
    })
}

/// Rebuilds a system from exported JSON, trusting the tables as given
/// rather than refactorising, so that externally produced (or corrupted)
/// tables can be fed to the identity sweeps.
pub fn import_tables_json(value: &serde_json::Value) -> Result<CosetSystem> {
    let bad = |what: &str| Error::Parse(format!("table import: missing or malformed {what}"));

    let group_spec: crate::group::GroupSpec =
        serde_json::from_value(value.get("group").cloned().ok_or_else(|| bad("group"))?)
            .map_err(|e| Error::Parse(format!("table import: group: {e}")))?;
    let group = Arc::new(group_spec.build()?);

    let sub_images: Vec<Vec<usize>> =
        serde_json::from_value(value.get("subgroup").cloned().ok_or_else(|| bad("subgroup"))?)
            .map_err(|e| Error::Parse(format!("table import: subgroup: {e}")))?;
    let members: Result<Vec<usize>> = sub_images
        .iter()
        .map(|imgs| {
            let p = Perm::from_images(imgs.clone())?;
            group
                .elem_index(&p)
                .ok_or_else(|| Error::Parse(format!("{p} is not in the imported group")))
        })
        .collect();
    let g = Subgroup::from_members(&group, &members?)?;

    let parse_names = |key: &str| -> Result<Vec<String>> {
        serde_json::from_value(value.get(key).cloned().ok_or_else(|| bad(key))?)
            .map_err(|e| Error::Parse(format!("table import: {key}: {e}")))
    };
    let m_names = parse_names("M")?;
    let m: Result<Vec<usize>> = m_names.iter().map(|s| group.parse_elem(s)).collect();
    let m = m?;
    is_transversal(&group, &g, &m).map_err(Error::NotTransversal)?;

    let parse_table = |key: &str, lookup: &dyn Fn(&str) -> Result<usize>| -> Result<Vec<usize>> {
        let rows: Vec<Vec<String>> =
            serde_json::from_value(value.get(key).cloned().ok_or_else(|| bad(key))?)
                .map_err(|e| Error::Parse(format!("table import: {key}: {e}")))?;
        let mut out = Vec::new();
        for row in &rows {
            for cell in row {
                out.push(lookup(cell)?);
            }
        }
        Ok(out)
    };
    let ml = m.len();
    let gl = g.order();
    let m_lookup = |s: &str| -> Result<usize> {
        let x = group.parse_elem(s)?;
        m.iter()
            .position(|&mm| mm == x)
            .ok_or_else(|| Error::Parse(format!("table entry {s} is not in M")))
    };
    let g_lookup = |s: &str| -> Result<usize> {
        let x = group.parse_elem(s)?;
        g.pos_of(x)
            .ok_or_else(|| Error::Parse(format!("table entry {s} is not in G")))
    };
    let dot = parse_table("dot", &m_lookup)?;
    let tau = parse_table("tau", &g_lookup)?;
    let ract = parse_table("ract", &m_lookup)?;
    let lact = parse_table("lact", &g_lookup)?;
    if dot.len() != ml * ml || tau.len() != ml * ml || ract.len() != ml * gl || lact.len() != ml * gl
    {
        return Err(bad("table shape"));
    }

    let mut m_pos = vec![None; group.order()];
    for (k, &s) in m.iter().enumerate() {
        m_pos[s] = Some(k);
    }
    let mut fact = vec![(usize::MAX, usize::MAX); group.order()];
    for (x, slot) in fact.iter_mut().enumerate() {
        let f = factorize(&group, &g, &m, x)?;
        *slot = (f.u, f.s);
    }
    let em = fact[group.identity()].1;
    let fm = g
        .pos_of(m[em])
        .ok_or_else(|| Error::NotTransversal("left identity of M does not lie in G".into()))?;

    // best-effort division tables: corrupt imports keep MAX entries, which
    // only the identity sweeps (not construction) will flag
    let mut right_div = vec![usize::MAX; ml * ml];
    for s in 0..ml {
        for p in 0..ml {
            let t = dot[p * ml + s];
            if right_div[t * ml + s] == usize::MAX {
                right_div[t * ml + s] = p;
            }
        }
    }
    let left_inv = (0..ml)
        .map(|t| {
            let p = right_div[em * ml + t];
            if p == usize::MAX {
                0
            } else {
                p
            }
        })
        .collect();

    Ok(CosetSystem {
        group,
        g,
        m,
        m_pos,
        dot,
        tau,
        ract,
        lact,
        fact,
        em,
        fm,
        left_inv,
        right_div,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    #[test]
    fn s3_transposition_tables_match_expected() {
        let cs = presets::s3_transpositions();
        let t = tables(&cs);
        assert_eq!(t.m, ["(12)", "(13)", "(23)"]);
        assert_eq!(
            t.dot,
            [
                ["(12)", "(13)", "(23)"],
                ["(23)", "(12)", "(13)"],
                ["(13)", "(23)", "(12)"],
            ]
        );
        for row in &t.tau {
            for entry in row {
                assert_eq!(entry, "(12)");
            }
        }
        assert_eq!(cs.m_name(cs.em()), "(12)");
        assert_eq!(cs.g_name(cs.fm()), "(12)");
    }

    #[test]
    fn s3_mixed_tables_match_expected() {
        let cs = presets::s3_mixed();
        let t = tables(&cs);
        assert_eq!(t.m, ["e", "(13)", "(23)"]);
        assert_eq!(
            t.dot,
            [
                ["e", "(13)", "(23)"],
                ["(13)", "e", "(13)"],
                ["(23)", "(23)", "e"],
            ]
        );
        assert_eq!(
            t.tau,
            [["e", "e", "e"], ["e", "e", "(12)"], ["e", "(12)", "e"]]
        );
    }

    #[test]
    fn d6_tables_match_expected() {
        let cs = presets::d6();
        let x = cs.group().parse_elem("(123456)").unwrap();
        let xx = cs.group().mul(x, x);
        let sx = cs.m_pos_of(x).unwrap();
        let se = cs.m_pos_of(cs.group().identity()).unwrap();

        // dot: e two-sided identity, x.x = e; tau(x,x) = x^2, others e.
        assert_eq!(cs.dot(sx, sx), se);
        assert_eq!(cs.dot(se, sx), sx);
        assert_eq!(cs.dot(sx, se), sx);
        assert_eq!(cs.g_x(cs.tau(sx, sx)), xx);
        assert_eq!(cs.tau(se, se), cs.g_identity());
        assert_eq!(cs.tau(se, sx), cs.g_identity());
        assert_eq!(cs.tau(sx, se), cs.g_identity());

        // ract trivial; x |> is the 3-cycle on the reflections.
        let report = classify(&cs);
        assert!(report.ract_trivial);
        let g = cs.group();
        let y = g
            .elem_index(&Perm::from_images(vec![0, 5, 4, 3, 2, 1]).unwrap())
            .unwrap();
        let x4 = g.word(&[x, x, x, x]);
        let x2 = xx;
        let yx4 = g.mul(y, x4);
        let yx2 = g.mul(y, x2);
        let lact_x = |v: usize| cs.g_x(cs.lact(sx, cs.g_pos_of(v).unwrap()));
        assert_eq!(lact_x(y), yx4);
        assert_eq!(lact_x(yx4), yx2);
        assert_eq!(lact_x(yx2), y);
        assert_eq!(lact_x(x2), x2);
        assert_eq!(lact_x(x4), x4);
    }

    #[test]
    fn s5_tables_match_expected() {
        let cs = presets::s5_stabilizer();
        let t = tables(&cs);
        assert_eq!(t.m, ["e", "(12)(354)", "(14253)", "(15234)", "(13245)"]);
        let label = |name: &str| match name {
            "e" => "e",
            "(12)(354)" => "a",
            "(14253)" => "b",
            "(15234)" => "c",
            "(13245)" => "d",
            other => panic!("unexpected element {other}"),
        };
        let dot: Vec<Vec<&str>> = t
            .dot
            .iter()
            .map(|row| row.iter().map(|e| label(e)).collect())
            .collect();
        assert_eq!(
            dot,
            [
                ["e", "a", "b", "c", "d"],
                ["a", "e", "c", "d", "b"],
                ["b", "c", "d", "a", "e"],
                ["c", "d", "e", "b", "a"],
                ["d", "b", "a", "e", "c"],
            ]
        );
        // Spot-checked by hand: b b = (12345) = (243) d, so the (b, b)
        // entry is (243); see also the cocycle identity sweep.
        assert_eq!(
            t.tau,
            [
                ["e", "e", "e", "e", "e"],
                ["e", "(345)", "(2534)", "(2345)", "(2453)"],
                ["e", "(34)", "(243)", "(2345)", "(354)"],
                ["e", "(45)", "(354)", "(254)", "(2453)"],
                ["e", "(35)", "(2534)", "(354)", "(235)"],
            ]
        );
    }

    #[test]
    fn matched_pair_passes_on_presets() {
        for cs in presets::all() {
            let report = verify_matched_pair(&cs);
            assert!(report.ok(), "{}", report.render());
        }
    }

    #[test]
    fn classification_matches_prose() {
        let r = classify(&presets::s3_transpositions());
        assert!(r.has_right_division && r.has_left_division);
        assert!(!r.has_two_sided_identity);
        assert!(!r.is_subgroup && !r.contains_group_identity);

        let r = classify(&presets::s3_mixed());
        assert!(!r.has_left_division);
        assert!(r.has_two_sided_identity && r.contains_group_identity);
        assert!(!r.is_subgroup);

        let r = classify(&presets::s3_cyclic());
        assert!(r.is_subgroup && r.tau_trivial && r.contains_group_identity);

        let r = classify(&presets::s5_stabilizer());
        assert!(r.has_right_division && r.has_left_division);
        assert!(r.has_two_sided_identity && !r.is_subgroup);

        let r = classify(&presets::d6());
        assert!(r.g_is_normal && r.ract_trivial && !r.tau_trivial);
    }

    #[test]
    fn classification_redundancies() {
        for cs in presets::all() {
            let r = classify(&cs);
            assert!(r.has_right_division);
            assert_eq!(
                r.is_subgroup,
                r.contains_group_identity && r.tau_trivial
            );
            assert_eq!(r.g_is_normal, r.ract_trivial);
            if r.is_subgroup {
                assert!(r.contains_group_identity && r.tau_trivial);
            }
        }
    }

    #[test]
    fn division_helpers() {
        let cs = presets::s3_transpositions();
        let s13 = cs.m_pos_of(cs.group().parse_elem("(13)").unwrap()).unwrap();
        // scan of column (13): the left inverse of (13) is (13)
        assert_eq!(cs.left_inverse(s13), s13);
        for t in 0..cs.m_len() {
            assert_eq!(cs.dot(cs.left_inverse(t), t), cs.em());
            for s in 0..cs.m_len() {
                assert_eq!(cs.dot(cs.right_divide(t, s), s), t);
            }
        }
        assert!(cs.right_inverse(s13).is_none()); // e not in M

        let cs = presets::s3_mixed();
        let s13 = cs.m_pos_of(cs.group().parse_elem("(13)").unwrap()).unwrap();
        let s23 = cs.m_pos_of(cs.group().parse_elem("(23)").unwrap()).unwrap();
        assert_eq!(cs.right_inverse(s13), Some(s13));
        assert_eq!(cs.left_divide(s13, s23), None);
        assert_eq!(cs.dot(s13, cs.left_divide(s13, s13).unwrap()), s13);
    }

    #[test]
    fn corrupted_table_fails_verification() {
        let mut cs = presets::s3_transpositions();
        cs.tau[4] = cs.g_identity(); // poison one cocycle entry
        let report = verify_matched_pair(&cs);
        assert!(!report.ok());
        let failed = report.first_failure().unwrap();
        assert!(failed.name.starts_with("matched_pair") || failed.name.starts_with("unit_laws"));
    }

    #[test]
    fn cayley_round_trip_on_abstract_tables() {
        let cs = presets::s3_transpositions();
        let table = cs.abstract_dot_table();
        let embed = cayley_embed(&table).unwrap();
        assert_eq!(embed.system.abstract_dot_table(), table);
        assert!(verify_matched_pair(&embed.system).ok());

        // A 2-element group table embeds as a genuine subgroup.
        let z2 = vec![vec![0, 1], vec![1, 0]];
        let embed = cayley_embed(&z2).unwrap();
        assert_eq!(embed.system.abstract_dot_table(), z2);
        assert!(classify(&embed.system).is_subgroup);

        // Non-bijective column: no right division.
        let bad = vec![vec![0, 0], vec![1, 1]];
        assert!(cayley_embed(&bad).is_err());
        // Bijective columns but no left identity row.
        let bad = vec![vec![1, 1], vec![0, 0]];
        assert!(cayley_embed(&bad).is_err());
    }

    #[test]
    fn s5_transversal_is_its_own_cayley_image() {
        // the five-element system arises from the general construction:
        // sigma of its abstract dot table reproduces the transversal
        // permutations element for element
        let cs = presets::s5_stabilizer();
        let embed = cayley_embed(&cs.abstract_dot_table()).unwrap();
        for (i, sigma) in embed.sigma.iter().enumerate() {
            assert_eq!(sigma, cs.group().perm(cs.m_x(i)));
        }
        assert_eq!(
            embed.system.abstract_dot_table(),
            cs.abstract_dot_table()
        );
    }

    #[test]
    fn reconstruction_is_isomorphic() {
        for cs in presets::all() {
            let (pairs, report) = reconstruct_group(&cs);
            assert!(report.ok(), "{}", report.render());
            assert_eq!(pairs.to_x.len(), cs.x_len());
        }
    }

    #[test]
    fn search_finds_the_expected_transversals() {
        let group = Arc::new(Group::symmetric(3));
        let g = Subgroup::generated(&group, &[group.parse_elem("(12)").unwrap()]);
        let all = search_transversals(&group, &g, &TransversalFilter::default(), 100, 1000);
        assert_eq!(all.systems.len(), 8);
        assert!(all.exhausted);

        let filter = TransversalFilter::parse("contains_e,left_division").unwrap();
        let found = search_transversals(&group, &g, &filter, 100, 1000);
        let cyclic = presets::s3_cyclic();
        assert!(found
            .systems
            .iter()
            .any(|cs| cs.abstract_dot_table() == cyclic.abstract_dot_table()
                && (0..cs.m_len()).all(|s| cs.m_x(s) == cyclic.m_x(s))));

        let budgeted = search_transversals(&group, &g, &TransversalFilter::default(), 100, 3);
        assert_eq!(budgeted.examined, 3);
        assert!(!budgeted.exhausted);
    }

    #[test]
    fn d6_search_includes_the_standard_transversal() {
        let cs = presets::d6();
        let filter = TransversalFilter::parse("contains_e,!tau_trivial").unwrap();
        let found = search_transversals(cs.group(), cs.subgroup(), &filter, 100, 10_000);
        assert!(found
            .systems
            .iter()
            .any(|c| (0..c.m_len()).map(|s| c.m_x(s)).collect::<Vec<_>>()
                == (0..cs.m_len()).map(|s| cs.m_x(s)).collect::<Vec<_>>()));
    }
}
