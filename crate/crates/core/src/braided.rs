//! Doubly graded modules and the braided structure.
//!
//! An object here is a graded `G`-module with two extra pieces: a `G`-grade
//! `|xi|` and an operation `|>_ : M x V -> V`. Five families of conditions
//! tie the four pieces together; [`validate_dobject`] checks them all
//! exhaustively. The product of the two grades, `||xi|| = |xi|^-1 <xi>`,
//! lives in the double `(Y, o)` and is multiplicative over tensor products.
//!
//! The braiding is `Psi(xi (x) eta) = <xi> |>_ eta (x) xi <|_ |eta|`, with
//! inverse expressed through the right `X`-action `^h<|` obtained by glueing
//! the `G`-action and the `M`-operation along the factorisation of `X`.

use rayon::prelude::*;

use crate::double::DoubleSystem;
use crate::linalg::{LinMap, Rat, SparseVec};
use crate::module::{is_morphism, unit_object, CObject};
use crate::report::Report;
use crate::tensor::{outer, tensor_c};
use crate::transversal::CosetSystem;

/// A doubly graded module: the base carries the `M`-grade and `G`-action;
/// `ggrade` is the `G`-grade per basis vector and `mact` the `M`-operation,
/// one map per transversal position.
#[derive(Debug, Clone)]
pub struct DObject {
    pub base: CObject,
    pub ggrade: Vec<usize>,
    pub mact: Vec<LinMap>,
}

impl DObject {
    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn label(&self) -> &str {
        &self.base.label
    }

    /// `G`-grade of a non-zero homogeneous vector.
    pub fn ggrade_of(&self, v: &SparseVec) -> Option<usize> {
        let mut grade = None;
        for &(i, _) in v.terms() {
            match grade {
                None => grade = Some(self.ggrade[i]),
                Some(g) if g == self.ggrade[i] => {}
                Some(_) => return None,
            }
        }
        grade
    }

    /// `||xi_i|| = |xi_i|^-1 <xi_i>` as an element of `Y`.
    pub fn ynorm(&self, cs: &CosetSystem, i: usize) -> usize {
        let g = cs.group();
        g.mul(
            g.inv(cs.g_x(self.ggrade[i])),
            cs.m_x(self.base.grade[i]),
        )
    }
}

/// The unit object: trivial grades, trivial actions.
pub fn unit_dobject(cs: &CosetSystem) -> DObject {
    DObject {
        base: unit_object(cs),
        ggrade: vec![cs.g_identity()],
        mact: vec![LinMap::identity(1); cs.m_len()],
    }
}

/// `p |>_ (xi_i (x) eta_j)` on a tensor pair, computed leaf-wise: the acting
/// label is first pulled back through the cocycle relabelling (the right
/// action of a fixed group element on `M` is a bijection), then the
/// displayed twist is applied to the left factor.
pub fn dtensor_mact(
    ds: &DoubleSystem,
    a: &DObject,
    b: &DObject,
    p: usize,
    i: usize,
    j: usize,
) -> SparseVec {
    let cs = ds.base();
    let ga = a.base.grade[i];
    let gb = b.base.grade[j];
    let s = cs.ract(p, cs.ginv(cs.tau(ga, gb)));
    let m1 = cs.ract(s, a.ggrade[i]);
    let bvec = b.mact[m1].col(j);
    let n = match b.base.grade_of(bvec) {
        Some(n) => n,
        None => return SparseVec::zero(),
    };
    let twist = cs.gmul(
        cs.tau(m1, gb),
        cs.ginv(cs.tau(n, cs.ract(m1, b.ggrade[j]))),
    );
    let avec = a.base.act(twist, a.mact[s].col(i));
    outer(&avec, bvec, b.dim())
}

/// The tensor product in the braided category: the base tensor plus
/// `|xi (x) eta| = tau(<xi>, <eta>)^-1 |xi| |eta|` and the leaf-wise
/// `M`-operation above.
pub fn tensor_d(ds: &DoubleSystem, a: &DObject, b: &DObject) -> DObject {
    let cs = ds.base();
    let base = tensor_c(cs, &a.base, &b.base);
    let (ad, bd) = (a.dim(), b.dim());
    let ggrade = (0..ad)
        .flat_map(|i| {
            (0..bd).map(move |j| {
                cs.gword(&[
                    cs.ginv(cs.tau(a.base.grade[i], b.base.grade[j])),
                    a.ggrade[i],
                    b.ggrade[j],
                ])
            })
        })
        .collect();
    let mact = (0..cs.m_len())
        .map(|p| {
            let cols = (0..ad)
                .flat_map(|i| (0..bd).map(move |j| dtensor_mact(ds, a, b, p, i, j)))
                .collect();
            LinMap::from_cols(ad * bd, cols)
        })
        .collect();
    DObject { base, ggrade, mact }
}

/// Exhaustive check of all structure conditions on a doubly graded module.
pub fn validate_dobject(ds: &DoubleSystem, v: &DObject) -> Report {
    let cs = ds.base();
    let mut report = crate::module::validate_object(cs, &v.base);
    let dim = v.dim();
    let label = v.label().to_string();
    let name = |part: &str| format!("dobject[{label}].{part}");

    let mut w = None;
    if v.ggrade.len() != dim || v.mact.len() != cs.m_len() {
        w = Some("grade or action table shapes are off".into());
    } else if let Some(t) = (0..cs.m_len())
        .find(|&t| v.mact[t].source_dim() != dim || v.mact[t].target_dim != dim)
    {
        w = Some(format!("operation of {} is not square", cs.m_name(t)));
    }
    report.record(&name("shape"), w);
    if !report.ok() {
        return report;
    }

    // |eta <| u| = (<eta> |> u)^-1 |eta| u
    let mut w = None;
    'c1: for u in 0..cs.g_len() {
        for i in 0..dim {
            let img = v.base.act_basis(u, i);
            if img.is_zero() {
                continue;
            }
            let got = match v.ggrade_of(img) {
                Some(g) => g,
                None => {
                    w = Some(format!("basis {i} under u={} is inhomogeneous", cs.g_name(u)));
                    break 'c1;
                }
            };
            let want = cs.gword(&[
                cs.ginv(cs.lact(v.base.grade[i], u)),
                v.ggrade[i],
                u,
            ]);
            if got != want {
                w = Some(format!("basis {i}, u={}", cs.g_name(u)));
                break 'c1;
            }
        }
    }
    report.record(&name("connect_g_grade"), w);

    // s . <eta> = <s |>_ eta> . (s <| |eta|)  and the cocycle twin
    let mut w2 = None;
    let mut w3 = None;
    let mut w_hom = None;
    for t in 0..cs.m_len() {
        for i in 0..dim {
            let img = v.mact[t].col(i);
            if img.is_zero() {
                if w_hom.is_none() {
                    w_hom = Some(format!("{} |>_ kills basis {i}", cs.m_name(t)));
                }
                continue;
            }
            let (mg, gg) = match (v.base.grade_of(img), v.ggrade_of(img)) {
                (Some(m), Some(g)) => (m, g),
                _ => {
                    if w_hom.is_none() {
                        w_hom = Some(format!(
                            "{} |>_ basis {i} is inhomogeneous",
                            cs.m_name(t)
                        ));
                    }
                    continue;
                }
            };
            let se = cs.ract(t, v.ggrade[i]);
            if w2.is_none() && cs.dot(t, v.base.grade[i]) != cs.dot(mg, se) {
                w2 = Some(format!("basis {i}, s={}", cs.m_name(t)));
            }
            let lhs = cs.gmul(
                cs.ginv(cs.tau(t, v.base.grade[i])),
                cs.lact(t, v.ggrade[i]),
            );
            let rhs = cs.gmul(cs.ginv(cs.tau(mg, se)), gg);
            if w3.is_none() && lhs != rhs {
                w3 = Some(format!("basis {i}, s={}", cs.m_name(t)));
            }
        }
    }
    report.record(&name("mact_homogeneous"), w_hom);
    report.record(&name("connect_m_grade"), w2);
    report.record(&name("connect_cocycle"), w3);

    // the twisted M-action law
    let ml = cs.m_len();
    let w = par_witness(ml * ml * dim, |idx| {
        let p = idx / (ml * dim);
        let t = (idx / dim) % ml;
        let i = idx % dim;
        let tk = v.mact[t].col(i);
        let lhs = v.mact[p].apply(tk);
        // inhomogeneous images are reported by the homogeneity check
        let nk = v.base.grade_of(tk)?;
        v.ggrade_of(tk)?;
        let p1 = cs.ract(
            p,
            cs.gmul(
                cs.tau(nk, cs.ract(t, v.ggrade[i])),
                cs.ginv(cs.tau(t, v.base.grade[i])),
            ),
        );
        let twist = cs.ginv(cs.tau(
            cs.ract(p1, cs.lact(t, v.ggrade[i])),
            cs.ract(t, v.ggrade[i]),
        ));
        let rhs = v.base.act(twist, v.mact[cs.dot(p1, t)].col(i));
        (lhs != rhs).then(|| {
            format!(
                "basis {i}, p={}, t={}",
                cs.m_name(p),
                cs.m_name(t)
            )
        })
    });
    report.record(&name("mact_twisted_action_law"), w);

    // cross relation between the two actions
    let gl = cs.g_len();
    let w = par_witness(ml * gl * dim, |idx| {
        let s = idx / (gl * dim);
        let u = (idx / dim) % gl;
        let i = idx % dim;
        let left = v.base.act(
            cs.lact(cs.ract(s, v.ggrade[i]), u),
            v.mact[s].col(i),
        );
        let right = v.mact[cs.ract(s, cs.lact(v.base.grade[i], u))]
            .apply(v.base.act_basis(u, i));
        (left != right).then(|| {
            format!("basis {i}, s={}, u={}", cs.m_name(s), cs.g_name(u))
        })
    });
    report.record(&name("cross_relation"), w);

    // ||s |>_ eta|| = ||eta|| conjugated by (s <| |eta|)
    let mut w = None;
    'gra: for t in 0..cs.m_len() {
        for i in 0..dim {
            let img = v.mact[t].col(i);
            if img.is_zero() {
                continue;
            }
            let (mg, gg) = match (v.base.grade_of(img), v.ggrade_of(img)) {
                (Some(m), Some(g)) => (m, g),
                _ => continue,
            };
            let g = cs.group();
            let lhs = g.mul(g.inv(cs.g_x(gg)), cs.m_x(mg));
            let c = cs.m_x(cs.ract(t, v.ggrade[i]));
            let rhs = g.word(&[
                c,
                g.inv(cs.g_x(v.ggrade[i])),
                cs.m_x(v.base.grade[i]),
                g.inv(c),
            ]);
            if lhs != rhs {
                w = Some(format!("basis {i}, s={}", cs.m_name(t)));
                break 'gra;
            }
        }
    }
    report.record(&name("norm_conjugation"), w);

    report
}

/// Morphism test in the braided category: both gradings preserved, both
/// actions intertwined.
pub fn is_dmorphism(
    ds: &DoubleSystem,
    v: &DObject,
    w: &DObject,
    f: &LinMap,
) -> Result<(), String> {
    let cs = ds.base();
    is_morphism(cs, &v.base, &w.base, f)?;
    for i in 0..v.dim() {
        for &(j, _) in f.col(i).terms() {
            if w.ggrade[j] != v.ggrade[i] {
                return Err(format!("groupwise grade broken at basis {i}"));
            }
        }
    }
    for t in 0..cs.m_len() {
        for i in 0..v.dim() {
            let lhs = f.apply(v.mact[t].col(i));
            let rhs = w.mact[t].apply(f.col(i));
            if lhs != rhs {
                return Err(format!(
                    "does not commute with {} |>_ at basis {i}",
                    cs.m_name(t)
                ));
            }
        }
    }
    Ok(())
}

/// The braiding `Psi : A (x) B -> B (x) A` as a materialised map.
pub fn psi_map(_ds: &DoubleSystem, a: &DObject, b: &DObject) -> LinMap {
    let (ad, bd) = (a.dim(), b.dim());
    let cols = (0..ad)
        .flat_map(|i| {
            (0..bd).map(move |j| {
                let bvec = b.mact[a.base.grade[i]].col(j);
                let avec = a.base.act_basis(b.ggrade[j], i);
                outer(bvec, avec, ad)
            })
        })
        .collect();
    LinMap::from_cols(ad * bd, cols)
}

/// The inverse braiding `B (x) A -> A (x) B`, defined through the right
/// `X`-action.
pub fn psi_inv_map(ds: &DoubleSystem, a: &DObject, b: &DObject) -> LinMap {
    let cs = ds.base();
    let g = cs.group().clone();
    let (ad, bd) = (a.dim(), b.dim());
    let cols = (0..bd)
        .flat_map(|i| {
            let g = g.clone();
            (0..ad).map(move |j| {
                // xi' = basis i of B, eta' = basis j of A
                let second = hat_action_basis(ds, b, i, cs.m_x(a.base.grade[j]));
                let gg = match b.ggrade_of(&second) {
                    Some(gg) => gg,
                    None => return SparseVec::zero(),
                };
                let first = hat_act(ds, a, &SparseVec::unit(j), g.inv(cs.g_x(gg)));
                outer(&first, &second, bd)
            })
        })
        .collect();
    LinMap::from_cols(ad * bd, cols)
}

/// The right `X`-action on a doubly graded module: factorise `x = u s`,
/// apply the `G`-action for `u`, then the `M`-part through the left
/// inverse: `xi ^h<| s = ((s^L <| |xi|^-1) |>_ xi) <|_ tau(s^L, s)`.
pub fn hat_action_basis(ds: &DoubleSystem, v: &DObject, i: usize, x: usize) -> SparseVec {
    let cs = ds.base();
    let (u, s) = cs.factorization(x);
    hat_m_part(ds, v, v.base.act_basis(u, i), s)
}

pub fn hat_act(ds: &DoubleSystem, v: &DObject, xi: &SparseVec, x: usize) -> SparseVec {
    let cs = ds.base();
    let (u, s) = cs.factorization(x);
    hat_m_part(ds, v, &v.base.act(u, xi), s)
}

fn hat_m_part(ds: &DoubleSystem, v: &DObject, xi: &SparseVec, s: usize) -> SparseVec {
    let cs = ds.base();
    let sl = cs.left_inverse(s);
    let twist = cs.tau(sl, s);
    let mut out = SparseVec::zero();
    for &(m, c) in xi.terms() {
        let t0 = cs.ract(sl, cs.ginv(v.ggrade[m]));
        let moved = v.base.act(twist, v.mact[t0].col(m));
        out = out.add(&moved.scale(c));
    }
    out
}

/// Checks that `^h<|` is a right action of the whole group, restricts to
/// the `G`-action, fixes nothing under the identity, and transforms the
/// `Y`-grade by conjugation. The optional `sample` keeps only every
/// `stride`-th basis vector in the quadratic action-law sweep.
pub fn verify_hat_action(ds: &DoubleSystem, v: &DObject, stride: usize) -> Report {
    let cs = ds.base();
    let g = cs.group().clone();
    let mut report = Report::new();
    let dim = v.dim();
    let n = g.order();
    let label = v.label().to_string();
    let name = |part: &str| format!("hat_action[{label}].{part}");

    let w = (0..dim)
        .find(|&i| hat_action_basis(ds, v, i, g.identity()) != SparseVec::unit(i))
        .map(|i| format!("basis {i}"));
    report.record(&name("identity"), w);

    let mut w = None;
    'g: for u in 0..cs.g_len() {
        for i in 0..dim {
            if &hat_action_basis(ds, v, i, cs.g_x(u)) != v.base.act_basis(u, i) {
                w = Some(format!("basis {i}, u={}", cs.g_name(u)));
                break 'g;
            }
        }
    }
    report.record(&name("restricts_to_g"), w);

    // ||xi ^h<| x|| = ||xi|| <~ x
    let w = par_witness(dim * n, |idx| {
        let (i, x) = (idx / n, idx % n);
        let moved = hat_action_basis(ds, v, i, x);
        let mut norm = None;
        for &(m, _) in moved.terms() {
            let nm = v.ynorm(cs, m);
            match norm {
                None => norm = Some(nm),
                Some(p) if p == nm => {}
                _ => return Some(format!("basis {i}, x={} inhomogeneous", ds.name(x))),
            }
        }
        let want = ds.conj(v.ynorm(cs, i), x);
        (norm != Some(want)).then(|| format!("basis {i}, x={}", ds.name(x)))
    });
    report.record(&name("norm_equivariant"), w);

    let checked: Vec<usize> = (0..dim).step_by(stride.max(1)).collect();
    let w = checked
        .par_iter()
        .find_map_first(|&i| {
            for x1 in 0..n {
                let step = hat_action_basis(ds, v, i, x1);
                for x2 in 0..n {
                    let lhs = hat_act(ds, v, &step, x2);
                    let rhs = hat_action_basis(ds, v, i, g.mul(x1, x2));
                    if lhs != rhs {
                        return Some(format!(
                            "basis {i}, x1={}, x2={}",
                            ds.name(x1),
                            ds.name(x2)
                        ));
                    }
                }
            }
            None
        });
    let law_name = if stride > 1 {
        format!("hat_action[{label}].group_law_sampled_1_in_{stride}")
    } else {
        name("group_law")
    };
    report.record(&law_name, w);

    report
}

type State = (Rat, [usize; 3]);

fn apply_factor(states: Vec<State>, slot: usize, map: impl Fn(usize) -> SparseVec) -> Vec<State> {
    let mut out = Vec::with_capacity(states.len());
    for (c, idx) in states {
        for &(i2, d) in map(idx[slot]).terms() {
            let mut idx2 = idx;
            idx2[slot] = i2;
            out.push((c * d, idx2));
        }
    }
    out
}

fn collect_states(states: Vec<State>, dims: [usize; 3]) -> SparseVec {
    SparseVec::from_terms(
        states
            .into_iter()
            .map(|(c, [a, b, d])| ((a * dims[1] + b) * dims[2] + d, c))
            .collect(),
    )
}

/// First hexagon: `(V (x) W) (x) Z -> W (x) (Z (x) V)` along
/// `Phi; Psi_{V, W(x)Z}; Phi` versus `Psi (x) I; Phi; I (x) Psi`.
/// Streams over basis triples; `wz` must be the materialised `W (x) Z`.
pub fn hexagon_forward_witness(
    ds: &DoubleSystem,
    v: &DObject,
    w: &DObject,
    z: &DObject,
    wz: &DObject,
) -> Option<String> {
    let cs = ds.base();
    let (vd, wd, zd) = (v.dim(), w.dim(), z.dim());
    par_witness(vd * wd * zd, |idx| {
        let i = idx / (wd * zd);
        let j = (idx / zd) % wd;
        let k = idx % zd;

        // route A: Phi, then Psi_{V, WZ}, then Phi
        let start = vec![(Rat::from_integer(1), [i, j, k])];
        let a1 = apply_factor(start, 0, |a| {
            v.base
                .act_basis(cs.tau(w.base.grade[j], z.base.grade[k]), a)
                .clone()
        });
        // Psi: (a, (j,k)) -> <a> |>_ (j,k) (x) a <|_ |j (x) k|
        let mut a2: Vec<State> = Vec::new();
        for (c, [a, jj, kk]) in a1 {
            let pair = dtensor_mact(ds, w, z, v.base.grade[a], jj, kk);
            let gjk = wz.ggrade[jj * zd + kk];
            let avec = v.base.act_basis(gjk, a);
            for &(p2, d) in pair.terms() {
                for &(a2i, e) in avec.terms() {
                    a2.push((c * d * e, [p2 / zd, p2 % zd, a2i]));
                }
            }
        }
        // order (W, Z, V); the final Phi twist depends on the other two
        // factors, so apply it statefully
        let mut route_a: Vec<State> = Vec::new();
        for (c, [b, kk, aa]) in a2 {
            let twist = cs.tau(z.base.grade[kk], v.base.grade[aa]);
            for &(b2, d) in w.base.act_basis(twist, b).terms() {
                route_a.push((c * d, [b2, kk, aa]));
            }
        }

        // route B: Psi (x) I, then Phi, then I (x) Psi
        let mut b1: Vec<State> = Vec::new();
        {
            let bvec = w.mact[v.base.grade[i]].col(j);
            let avec = v.base.act_basis(w.ggrade[j], i);
            for &(jj, d) in bvec.terms() {
                for &(ii, e) in avec.terms() {
                    b1.push((d * e, [jj, ii, k]));
                }
            }
        }
        // order (W, V, Z); Phi twists W by tau(<V>, <Z>)
        let mut b2: Vec<State> = Vec::new();
        for (c, [b, a, kk]) in b1 {
            let twist = cs.tau(v.base.grade[a], z.base.grade[kk]);
            for &(b2i, d) in w.base.act_basis(twist, b).terms() {
                b2.push((c * d, [b2i, a, kk]));
            }
        }
        // I (x) Psi_{V,Z}
        let mut route_b: Vec<State> = Vec::new();
        for (c, [b, a, kk]) in b2 {
            let zvec = z.mact[v.base.grade[a]].col(kk);
            let avec = v.base.act_basis(z.ggrade[kk], a);
            for &(k2, d) in zvec.terms() {
                for &(a2, e) in avec.terms() {
                    route_b.push((c * d * e, [b, k2, a2]));
                }
            }
        }

        let lhs = collect_states(route_a, [wd, zd, vd]);
        let rhs = collect_states(route_b, [wd, zd, vd]);
        (lhs != rhs).then(|| format!("basis triple ({i}, {j}, {k})"))
    })
}

/// Second hexagon (the inverse-associator direction):
/// `V (x) (W (x) Z) -> (Z (x) V) (x) W` along
/// `I (x) Psi; Phi^-1; Psi (x) I` versus `Phi^-1; Psi_{VW, Z}; Phi^-1`.
pub fn hexagon_backward_witness(
    ds: &DoubleSystem,
    v: &DObject,
    w: &DObject,
    z: &DObject,
) -> Option<String> {
    let cs = ds.base();
    let (vd, wd, zd) = (v.dim(), w.dim(), z.dim());
    par_witness(vd * wd * zd, |idx| {
        let i = idx / (wd * zd);
        let j = (idx / zd) % wd;
        let k = idx % zd;

        // route A: I (x) Psi_{W,Z}, Phi^-1, Psi_{V,Z} (x) I
        let mut a1: Vec<State> = Vec::new();
        {
            let zvec = z.mact[w.base.grade[j]].col(k);
            let wvec = w.base.act_basis(z.ggrade[k], j);
            for &(k2, d) in zvec.terms() {
                for &(j2, e) in wvec.terms() {
                    a1.push((d * e, [i, k2, j2]));
                }
            }
        }
        // order (V, Z, W); Phi^-1 twists V by tau(<Z>, <W>)^-1
        let mut a2: Vec<State> = Vec::new();
        for (c, [a, kk, jj]) in a1 {
            let twist = cs.ginv(cs.tau(z.base.grade[kk], w.base.grade[jj]));
            for &(a2i, d) in v.base.act_basis(twist, a).terms() {
                a2.push((c * d, [a2i, kk, jj]));
            }
        }
        // Psi_{V,Z} on the first two factors
        let mut route_a: Vec<State> = Vec::new();
        for (c, [a, kk, jj]) in a2 {
            let zvec = z.mact[v.base.grade[a]].col(kk);
            let avec = v.base.act_basis(z.ggrade[kk], a);
            for &(k2, d) in zvec.terms() {
                for &(a2, e) in avec.terms() {
                    route_a.push((c * d * e, [k2, a2, jj]));
                }
            }
        }

        // route B: Phi^-1, Psi_{V (x) W, Z}, Phi^-1
        let start = vec![(Rat::from_integer(1), [i, j, k])];
        let b1 = apply_factor(start, 0, |a| {
            v.base
                .act_basis(
                    cs.ginv(cs.tau(w.base.grade[j], z.base.grade[k])),
                    a,
                )
                .clone()
        });
        // Psi_{VW, Z}: <pair> |>_ k (x) pair <|_ |k|, with the pair acting
        // leaf-wise under the G-action twist
        let mut b2: Vec<State> = Vec::new();
        for (c, [a, jj, kk]) in b1 {
            let pair_grade = cs.dot(v.base.grade[a], w.base.grade[jj]);
            let zvec = z.mact[pair_grade].col(kk);
            let u = z.ggrade[kk];
            let avec = v.base.act_basis(cs.lact(w.base.grade[jj], u), a);
            let wvec = w.base.act_basis(u, jj);
            for &(k2, d) in zvec.terms() {
                for &(a2, e) in avec.terms() {
                    for &(j2, f) in wvec.terms() {
                        b2.push((c * d * e * f, [k2, a2, j2]));
                    }
                }
            }
        }
        // order (Z, V, W); Phi^-1 twists Z by tau(<V>, <W>)^-1
        let mut route_b: Vec<State> = Vec::new();
        for (c, [kk, a, jj]) in b2 {
            let twist = cs.ginv(cs.tau(v.base.grade[a], w.base.grade[jj]));
            for &(k2, d) in z.base.act_basis(twist, kk).terms() {
                route_b.push((c * d, [k2, a, jj]));
            }
        }

        let lhs = collect_states(route_a, [zd, vd, wd]);
        let rhs = collect_states(route_b, [zd, vd, wd]);
        (lhs != rhs).then(|| format!("basis triple ({i}, {j}, {k})"))
    })
}

/// Naturality of the braiding against itself: for `theta = Psi_{V,V}` on
/// the pair object, `(I (x) theta) Psi_{VV, V} = Psi_{VV, V} (theta (x) I)`.
fn psi_naturality_witness(ds: &DoubleSystem, v: &DObject, vv: &DObject) -> Option<String> {
    let theta = psi_map(ds, v, v);
    let (pd, vd) = (vv.dim(), v.dim());
    par_witness(pd * vd, |idx| {
        let (p, k) = (idx / vd, idx % vd);
        // Psi_{VV,V}(pair (x) k) = <pair> |>_ k (x) pair <|_ |k|
        let psi_big = |pvec: &SparseVec, k: usize| -> SparseVec {
            let mut out = Vec::new();
            for &(pi, c) in pvec.terms() {
                let zvec = v.mact[vv.base.grade[pi]].col(k);
                let avec = vv.base.act_basis(v.ggrade[k], pi);
                for &(k2, d) in zvec.terms() {
                    for &(p2, e) in avec.terms() {
                        out.push((k2 * pd + p2, c * d * e));
                    }
                }
            }
            SparseVec::from_terms(out)
        };
        let lhs = {
            let moved = psi_big(&SparseVec::unit(p), k);
            // apply I (x) theta on V (x) VV
            let mut out = Vec::new();
            for &(t, c) in moved.terms() {
                let (k2, p2) = (t / pd, t % pd);
                for &(p3, d) in theta.col(p2).terms() {
                    out.push((k2 * pd + p3, c * d));
                }
            }
            SparseVec::from_terms(out)
        };
        let rhs = psi_big(theta.col(p), k);
        (lhs != rhs).then(|| format!("pair {p}, basis {k}"))
    })
}

/// The braided-coherence sweep on a single object `d` (typically the Hopf
/// object): structure conditions on `d` and `d (x) d`, norm
/// multiplicativity, the braiding as an invertible morphism, agreement of
/// the braiding with its `X`-action form, the tensor rule for the
/// `X`-action, naturality, and both hexagons.
pub fn verify_braided(ds: &DoubleSystem, d: &DObject) -> Report {
    let cs = ds.base();
    let mut report = Report::new();

    report.merge(validate_dobject(ds, d));
    let dd = tensor_d(ds, d, d);
    report.merge(validate_dobject(ds, &dd));

    let dim = d.dim();
    let w = par_witness(dim * dim, |idx| {
        let (i, j) = (idx / dim, idx % dim);
        let lhs = dd.ynorm(cs, i * dim + j);
        let rhs = ds.circ(d.ynorm(cs, i), d.ynorm(cs, j));
        (lhs != rhs).then(|| format!("pair ({i}, {j})"))
    });
    report.record("tensor.norm_multiplicative", w);

    let psi = psi_map(ds, d, d);
    let psi_inv = psi_inv_map(ds, d, d);
    report.record(
        "braiding.is_morphism",
        is_dmorphism(ds, &dd, &dd, &psi).err(),
    );
    report.record(
        "braiding.inverse_is_morphism",
        is_dmorphism(ds, &dd, &dd, &psi_inv).err(),
    );
    report.record(
        "braiding.mutually_inverse",
        if psi.then(&psi_inv).is_identity() && psi_inv.then(&psi).is_identity() {
            None
        } else {
            Some("Psi^-1 is not a two-sided inverse".into())
        },
    );

    // Psi through the X-action: Psi(xi (x) eta) =
    //   eta ^h<| (<xi> <| |eta|)^-1 (x) xi ^h<| |eta|
    let g = cs.group().clone();
    let w = par_witness(dim * dim, |idx| {
        let (i, j) = (idx / dim, idx % dim);
        let s = cs.ract(d.base.grade[i], d.ggrade[j]);
        let first = hat_action_basis(ds, d, j, g.inv(cs.m_x(s)));
        let second = hat_action_basis(ds, d, i, cs.g_x(d.ggrade[j]));
        let expect = outer(&first, &second, dim);
        (psi.col(i * dim + j) != &expect).then(|| format!("pair ({i}, {j})"))
    });
    report.record("braiding.hat_action_form", w);

    // (xi (x) eta) ^h<| x = xi ^h<| (||eta|| ~> x) (x) eta ^h<| x
    let n = g.order();
    let w = par_witness(dim * dim * n, |idx| {
        let i = idx / (dim * n);
        let j = (idx / n) % dim;
        let x = idx % n;
        let lhs = hat_action_basis(ds, &dd, i * dim + j, x);
        let first = hat_action_basis(ds, d, i, ds.tlact(d.ynorm(cs, j), x));
        let second = hat_action_basis(ds, d, j, x);
        let rhs = outer(&first, &second, dim);
        (lhs != rhs).then(|| format!("pair ({i}, {j}), x={}", ds.name(x)))
    });
    report.record("hat_action.tensor_rule", w);

    report.record(
        "braiding.naturality_via_psi",
        psi_naturality_witness(ds, d, &dd),
    );

    report.record(
        "hexagon.forward",
        hexagon_forward_witness(ds, d, d, d, &dd),
    );
    report.record(
        "hexagon.backward",
        hexagon_backward_witness(ds, d, d, d),
    );

    // unit maps and the associator remain morphisms here
    let k = unit_dobject(cs);
    let dk = tensor_d(ds, d, &k);
    let l = crate::tensor::left_unit(cs, &d.base);
    report.record("unit_maps.left_is_dmorphism", is_dmorphism(ds, d, &dk, &l).err());
    let kd = tensor_d(ds, &k, d);
    let r = crate::tensor::right_unit(cs, &d.base);
    report.record("unit_maps.right_is_dmorphism", is_dmorphism(ds, d, &kd, &r).err());

    let w = phi_dmorphism_witness(ds, d, d, d, &dd);
    report.record("associator.is_dmorphism", w);

    report
}

/// The associator on `(V (x) W) (x) Z` preserves both gradings and both
/// actions; streamed per basis triple and per acting element.
pub fn phi_dmorphism_witness(
    ds: &DoubleSystem,
    v: &DObject,
    w: &DObject,
    z: &DObject,
    vw: &DObject,
) -> Option<String> {
    let cs = ds.base();
    let (vd, wd, zd) = (v.dim(), w.dim(), z.dim());
    let wz = tensor_d(ds, w, z);

    let phi = |i: usize, j: usize, k: usize| -> Vec<State> {
        v.base
            .act_basis(cs.tau(w.base.grade[j], z.base.grade[k]), i)
            .terms()
            .iter()
            .map(|&(i2, c)| (c, [i2, j, k]))
            .collect()
    };

    par_witness(vd * wd * zd, |idx| {
        let i = idx / (wd * zd);
        let j = (idx / zd) % wd;
        let k = idx % zd;
        let image = phi(i, j, k);

        // gradings
        let src_m = cs.dot(cs.dot(v.base.grade[i], w.base.grade[j]), z.base.grade[k]);
        let src_g = cs.gword(&[
            cs.ginv(cs.tau(cs.dot(v.base.grade[i], w.base.grade[j]), z.base.grade[k])),
            vw.ggrade[i * wd + j],
            z.ggrade[k],
        ]);
        for &(_, [a, b, c]) in &image {
            let tgt_m = cs.dot(v.base.grade[a], cs.dot(w.base.grade[b], z.base.grade[c]));
            if tgt_m != src_m {
                return Some(format!("M-grade broken at ({i},{j},{k})"));
            }
            let tgt_g = cs.gword(&[
                cs.ginv(cs.tau(v.base.grade[a], cs.dot(w.base.grade[b], z.base.grade[c]))),
                v.ggrade[a],
                wz.ggrade[b * zd + c],
            ]);
            if tgt_g != src_g {
                return Some(format!("G-grade broken at ({i},{j},{k})"));
            }
        }

        // G-action equivariance
        for u in 0..cs.g_len() {
            // action on ((V W) Z): leaf-wise twists
            let u_pair = cs.lact(z.base.grade[k], u);
            let u_w = cs.lact(w.base.grade[j], u_pair);
            let mut lhs: Vec<State> = Vec::new();
            for &(i2, c) in v.base.act_basis(u_w, i).terms() {
                for &(j2, d) in w.base.act_basis(u_pair, j).terms() {
                    for &(k2, e) in z.base.act_basis(u, k).terms() {
                        lhs.extend(
                            phi(i2, j2, k2)
                                .into_iter()
                                .map(|(f, t)| (c * d * e * f, t)),
                        );
                    }
                }
            }
            // action on (V (W Z)) after Phi
            let mut rhs: Vec<State> = Vec::new();
            for &(c, [a, b, cc]) in &image {
                let u_wz = cs.lact(cs.dot(w.base.grade[b], z.base.grade[cc]), u);
                let u_w2 = cs.lact(z.base.grade[cc], u);
                for &(a2, d) in v.base.act_basis(u_wz, a).terms() {
                    for &(b2, e) in w.base.act_basis(u_w2, b).terms() {
                        for &(c2, f) in z.base.act_basis(u, cc).terms() {
                            rhs.push((c * d * e * f, [a2, b2, c2]));
                        }
                    }
                }
            }
            let dims = [vd, wd, zd];
            if collect_states(lhs, dims) != collect_states(rhs, dims) {
                return Some(format!("G-equivariance broken at ({i},{j},{k}), u={}", cs.g_name(u)));
            }
        }

        // M-action equivariance
        for p in 0..cs.m_len() {
            // p |>_ on ((V W) Z) with the pair treated as one leaf
            let mut lhs: Vec<State> = Vec::new();
            for &(pr, c) in dtensor_mact(ds, vw, z, p, i * wd + j, k).terms() {
                let (pair, k2) = (pr / zd, pr % zd);
                lhs.extend(
                    phi(pair / wd, pair % wd, k2)
                        .into_iter()
                        .map(|(d, t)| (c * d, t)),
                );
            }
            let mut rhs: Vec<State> = Vec::new();
            for &(c, [a, b, cc]) in &image {
                for &(pr, d) in dtensor_mact(ds, v, &wz, p, a, b * zd + cc).terms() {
                    let (a2, rest) = (pr / (wd * zd), pr % (wd * zd));
                    rhs.push((c * d, [a2, rest / zd, rest % zd]));
                }
            }
            let dims = [vd, wd, zd];
            if collect_states(lhs, dims) != collect_states(rhs, dims) {
                return Some(format!(
                    "M-equivariance broken at ({i},{j},{k}), p={}",
                    cs.m_name(p)
                ));
            }
        }
        None
    })
}

fn par_witness<F>(total: usize, f: F) -> Option<String>
where
    F: Fn(usize) -> Option<String> + Sync + Send,
{
    (0..total).into_par_iter().find_map_first(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::double::build_double;
    use crate::presets;

    #[test]
    fn unit_dobject_is_valid() {
        for cs in [presets::s3_mixed(), presets::s3_cyclic(), presets::d6()] {
            let ds = build_double(&cs);
            let k = unit_dobject(&cs);
            let report = validate_dobject(&ds, &k);
            assert!(report.ok(), "{}", report.render());
        }
    }

    #[test]
    fn corrupted_g_grade_is_caught() {
        let cs = presets::d6();
        let ds = build_double(&cs);
        let d = crate::hopf::build_d(&ds).unwrap();
        let mut bad = d.object.clone();
        bad.ggrade[5] = (bad.ggrade[5] + 1) % cs.g_len();
        let report = validate_dobject(&ds, &bad);
        assert!(!report.ok());
    }

    #[test]
    fn corrupted_mact_breaks_a_hexagon() {
        let cs = presets::s3_cyclic();
        let ds = build_double(&cs);
        let d = crate::hopf::build_d(&ds).unwrap();
        let mut bad = d.object.clone();
        // swap two columns of one M-operation
        let col0 = bad.mact[1].col(0).clone();
        let col1 = bad.mact[1].col(1).clone();
        bad.mact[1].cols[0] = col1;
        bad.mact[1].cols[1] = col0;
        let wz = tensor_d(&ds, &bad, &bad);
        let fwd = hexagon_forward_witness(&ds, &bad, &bad, &bad, &wz);
        let bwd = hexagon_backward_witness(&ds, &bad, &bad, &bad);
        assert!(fwd.is_some() || bwd.is_some());
    }

    #[test]
    fn hexagons_hold_with_unit_slots() {
        let cs = presets::s3_cyclic();
        let ds = build_double(&cs);
        let d = crate::hopf::build_d(&ds).unwrap();
        let k = unit_dobject(&cs);
        let kd = tensor_d(&ds, &k, &d.object);
        let dd = tensor_d(&ds, &d.object, &d.object);
        assert!(hexagon_forward_witness(&ds, &k, &d.object, &d.object, &dd).is_none());
        assert!(hexagon_forward_witness(&ds, &d.object, &k, &d.object, &kd).is_none());
        assert!(hexagon_backward_witness(&ds, &d.object, &d.object, &k).is_none());
        assert!(hexagon_backward_witness(&ds, &k, &d.object, &k).is_none());
    }

    #[test]
    fn trivial_grades_braid_by_transposition() {
        let cs = presets::d6();
        let ds = build_double(&cs);
        let d = crate::hopf::build_d(&ds).unwrap();
        let psi = psi_map(&ds, &d.object, &d.object);
        let dim = d.dim();
        let em = cs.m_pos_of(cs.group().identity()).unwrap();
        let eg = cs.g_identity();
        let mut seen = 0;
        for i in 0..dim {
            if d.object.base.grade[i] != em {
                continue;
            }
            for j in 0..dim {
                if d.object.ggrade[j] != eg {
                    continue;
                }
                seen += 1;
                assert_eq!(
                    psi.col(i * dim + j),
                    &SparseVec::unit(j * dim + i),
                    "pair ({i}, {j})"
                );
            }
        }
        assert!(seen > 0);
    }
}
