use crate::iso::{for_each_isomorphism, is_isomorphism};

use super::McSystem;

/// A skeleton isomorphism plus one block isomorphism per skeleton element;
/// `block_maps[x]` maps `L_x` onto `L'_{skeleton_map[x]}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct McsIsomorphism {
    pub skeleton_map: Vec<usize>,
    pub block_maps: Vec<Vec<usize>>,
}

impl McsIsomorphism {
    pub fn identity(c: &McSystem) -> Self {
        McsIsomorphism {
            skeleton_map: (0..c.skeleton().size()).collect(),
            block_maps: c.blocks().iter().map(|l| (0..l.size()).collect()).collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IsoClause {
    Shape,
    SkeletonOrder,
    Gamma,
    BlockOrder,
    Filter,
    Ideal,
    Commute,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoViolation {
    pub clause: IsoClause,
    pub witness: Vec<usize>,
}

/// Exhaustively checks a candidate witness; empty result iff valid.
pub fn verify_mcs_isomorphism(
    c1: &McSystem,
    c2: &McSystem,
    iso: &McsIsomorphism,
) -> Vec<IsoViolation> {
    let mut out = Vec::new();
    let n = c1.skeleton().size();
    let sm = &iso.skeleton_map;
    if sm.len() != n || iso.block_maps.len() != n || c2.skeleton().size() != n {
        out.push(IsoViolation {
            clause: IsoClause::Shape,
            witness: vec![],
        });
        return out;
    }
    if !is_isomorphism(c1.skeleton(), c2.skeleton(), sm) {
        out.push(IsoViolation {
            clause: IsoClause::SkeletonOrder,
            witness: vec![],
        });
        return out;
    }
    for x in 0..n {
        for y in 0..n {
            if c1.related(x, y) != c2.related(sm[x], sm[y]) {
                out.push(IsoViolation {
                    clause: IsoClause::Gamma,
                    witness: vec![x, y],
                });
            }
        }
    }
    for (x, (&sx, map)) in sm.iter().zip(&iso.block_maps).enumerate() {
        if !is_isomorphism(c1.block(x), c2.block(sx), map) {
            out.push(IsoViolation {
                clause: IsoClause::BlockOrder,
                witness: vec![x],
            });
        }
    }
    if !out.is_empty() {
        return out;
    }
    for k in c1.connections() {
        let (x, y) = (k.lower, k.upper);
        let Some(k2) = c2.connection(sm[x], sm[y]) else {
            out.push(IsoViolation {
                clause: IsoClause::Gamma,
                witness: vec![x, y],
            });
            continue;
        };
        let (bx, by) = (&iso.block_maps[x], &iso.block_maps[y]);
        if bx[k.filter_min] != k2.filter_min {
            out.push(IsoViolation {
                clause: IsoClause::Filter,
                witness: vec![x, y],
            });
        }
        if by[k.ideal_max] != k2.ideal_max {
            out.push(IsoViolation {
                clause: IsoClause::Ideal,
                witness: vec![x, y],
            });
        }
        for &(a, b) in k.pairs() {
            if k2.phi(bx[a]) != Some(by[b]) {
                out.push(IsoViolation {
                    clause: IsoClause::Commute,
                    witness: vec![x, y, a],
                });
            }
        }
    }
    out
}

/// Backtracking search: skeleton isomorphisms preserving γ, then block
/// isomorphisms chosen in skeleton order with entries forced by the
/// commuting squares to already chosen neighbours.
pub fn mcs_isomorphic(c1: &McSystem, c2: &McSystem) -> Option<McsIsomorphism> {
    let n = c1.skeleton().size();
    if n != c2.skeleton().size() {
        return None;
    }
    let mut s1: Vec<usize> = c1.blocks().iter().map(|l| l.size()).collect();
    let mut s2: Vec<usize> = c2.blocks().iter().map(|l| l.size()).collect();
    s1.sort_unstable();
    s2.sort_unstable();
    if s1 != s2 {
        return None;
    }
    let mut found = None;
    for_each_isomorphism(c1.skeleton(), c2.skeleton(), &vec![None; n], &mut |sm| {
        let gamma_ok = (0..n).all(|x| (0..n).all(|y| c1.related(x, y) == c2.related(sm[x], sm[y])));
        if gamma_ok {
            let mut maps: Vec<Option<Vec<usize>>> = vec![None; n];
            let mut order: Vec<usize> = (0..n).collect();
            let ranks = c1.skeleton().ranks();
            order.sort_by_key(|&x| (ranks[x], x));
            found = assign_blocks(c1, c2, sm, &order, 0, &mut maps);
        }
        found.is_none()
    });
    found
}

fn assign_blocks(
    c1: &McSystem,
    c2: &McSystem,
    sm: &[usize],
    order: &[usize],
    depth: usize,
    maps: &mut Vec<Option<Vec<usize>>>,
) -> Option<McsIsomorphism> {
    if depth == order.len() {
        let iso = McsIsomorphism {
            skeleton_map: sm.to_vec(),
            block_maps: maps.iter().map(|m| m.clone().unwrap()).collect(),
        };
        return verify_mcs_isomorphism(c1, c2, &iso)
            .is_empty()
            .then_some(iso);
    }
    let x = order[depth];
    let (l1, l2) = (c1.block(x), c2.block(sm[x]));
    if l1.size() != l2.size() {
        return None;
    }
    let mut fixed: Vec<Option<usize>> = vec![None; l1.size()];
    let mut force = |a: usize, t: Option<usize>| -> bool {
        match (t, fixed[a]) {
            (None, _) => false,
            (Some(t), Some(prev)) => prev == t,
            (Some(t), None) => {
                fixed[a] = Some(t);
                true
            }
        }
    };
    for k in c1.connections() {
        let (u, v) = (k.lower, k.upper);
        if u == v {
            continue;
        }
        let k2 = c2.connection(sm[u], sm[v])?;
        if u == x {
            if let Some(bv) = &maps[v] {
                // beta_x(a) = phi'^{-1}(beta_v(phi(a)))
                for &(a, b) in k.pairs() {
                    if !force(a, k2.phi_inv(bv[b])) {
                        return None;
                    }
                }
            }
        } else if v == x {
            if let Some(bu) = &maps[u] {
                // beta_x(b) = phi'(beta_u(a)) for b = phi(a)
                for &(a, b) in k.pairs() {
                    if !force(b, k2.phi(bu[a])) {
                        return None;
                    }
                }
            }
        }
    }
    let mut result = None;
    for_each_isomorphism(l1, l2, &fixed, &mut |m| {
        maps[x] = Some(m.to_vec());
        result = assign_blocks(c1, c2, sm, order, depth + 1, maps);
        maps[x] = None;
        result.is_none()
    });
    result
}
