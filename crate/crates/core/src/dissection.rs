//! Dissection of a finite modular lattice into its maximal complemented
//! intervals (blocks) and the system they induce.
//!
//! Blocks are the intervals `[x, x*]` with `(x*)_* = x`. Skeleton element `i`
//! is the block with the `i`-th smallest minimum id; the skeleton is ordered
//! by block minima.

use crate::error::{Error, Result};
use crate::lattice::{FiniteLattice, Interval};
use crate::mcs::{Connection, McSystem};
use crate::tolerance::{Relation, Tolerance};

/// Join of the upper covers, or the top itself.
pub fn upper_star(l: &FiniteLattice, a: usize) -> usize {
    if a == l.top() {
        a
    } else {
        l.join_all(l.upper_covers(a).iter().copied())
    }
}

/// Meet of the lower covers, or the bottom itself.
pub fn lower_star(l: &FiniteLattice, a: usize) -> usize {
    if a == l.bottom() {
        a
    } else {
        l.meet_all(l.lower_covers(a).iter().copied())
    }
}

/// `(a_*, a*)`.
pub fn stars(l: &FiniteLattice, a: usize) -> (usize, usize) {
    (lower_star(l, a), upper_star(l, a))
}

#[derive(Clone, Debug)]
pub struct Dissection<'a> {
    host: &'a FiniteLattice,
    blocks: Vec<Interval>,
    /// Per block, local id to host id (ascending).
    embeddings: Vec<Vec<usize>>,
    /// Per block, host id to local id.
    local: Vec<Vec<Option<usize>>>,
    block_of_min: Vec<Option<usize>>,
    mcs: McSystem,
}

pub fn dissect(l: &FiniteLattice) -> Result<Dissection<'_>> {
    if let Some((a, b, c)) = l.modular_violation() {
        return Err(Error::NotModular(a, b, c));
    }
    let n = l.size();
    let blocks: Vec<Interval> = (0..n)
        .filter_map(|x| {
            let t = upper_star(l, x);
            (lower_star(l, t) == x).then_some(Interval::new(x, t))
        })
        .collect();
    let k = blocks.len();
    let mut block_of_min = vec![None; n];
    for (i, b) in blocks.iter().enumerate() {
        block_of_min[b.lo] = Some(i);
    }

    let internal = |what: &str, e: Error| Error::InternalTheoremViolation(format!("{what}: {e}"));
    let skeleton = FiniteLattice::from_order(k, |i, j| l.leq(blocks[i].lo, blocks[j].lo))
        .map_err(|e| internal("block minima do not form a lattice", e))?;
    let overlap = |i: usize, j: usize| {
        let (bi, bj) = (blocks[i], blocks[j]);
        l.leq(l.join(bi.lo, bj.lo), l.meet(bi.hi, bj.hi))
    };
    let gamma = Tolerance::new(&skeleton, Relation::from_fn(k, overlap))
        .map_err(|e| internal("block overlap is not a tolerance", e))?;

    let mut embeddings = Vec::with_capacity(k);
    let mut lattices = Vec::with_capacity(k);
    let mut local = Vec::with_capacity(k);
    for b in &blocks {
        let (lat, emb) = l.interval(b.lo, b.hi)?;
        let mut loc = vec![None; n];
        for (i, &e) in emb.iter().enumerate() {
            loc[e] = Some(i);
        }
        lattices.push(lat);
        embeddings.push(emb);
        local.push(loc);
    }

    let mut connections = Vec::new();
    for x in 0..k {
        for y in 0..k {
            if !gamma.leq_gamma(&skeleton, x, y) {
                continue;
            }
            let shared = Interval::new(blocks[y].lo, blocks[x].hi);
            let mut pairs = Vec::new();
            for e in shared.members(l) {
                match (local[x][e], local[y][e]) {
                    (Some(a), Some(b)) => pairs.push((a, b)),
                    _ => {
                        return Err(Error::InternalTheoremViolation(format!(
                            "overlap of blocks {x}, {y} is not [0_y, 1_x]"
                        )))
                    }
                }
            }
            let fmin = local[x][blocks[y].lo];
            let imax = local[y][blocks[x].hi];
            let (Some(fmin), Some(imax)) = (fmin, imax) else {
                return Err(Error::InternalTheoremViolation(format!(
                    "overlap of blocks {x}, {y} is not [0_y, 1_x]"
                )));
            };
            connections.push(Connection::new(x, y, fmin, imax, pairs));
        }
    }
    let mcs = McSystem::new(skeleton, gamma, lattices, connections)
        .map_err(|e| internal("induced system", e))?;
    let report = mcs.validate();
    if !report.is_valid() || !report.is_monotone() {
        return Err(Error::InternalTheoremViolation(format!(
            "induced system fails the axioms:\n{report}"
        )));
    }
    Ok(Dissection {
        host: l,
        blocks,
        embeddings,
        local,
        block_of_min,
        mcs,
    })
}

impl<'a> Dissection<'a> {
    pub fn host(&self) -> &'a FiniteLattice {
        self.host
    }

    pub fn blocks(&self) -> &[Interval] {
        &self.blocks
    }

    pub fn block(&self, x: usize) -> Interval {
        self.blocks[x]
    }

    pub fn skeleton(&self) -> &FiniteLattice {
        self.mcs.skeleton()
    }

    pub fn gamma(&self) -> &Tolerance {
        self.mcs.gamma()
    }

    pub fn mcs(&self) -> &McSystem {
        &self.mcs
    }

    pub fn into_mcs(self) -> McSystem {
        self.mcs
    }

    /// Host id of local element `a` of block `x`.
    pub fn embed(&self, x: usize, a: usize) -> usize {
        self.embeddings[x][a]
    }

    pub fn embedding(&self, x: usize) -> &[usize] {
        &self.embeddings[x]
    }

    /// Local id in block `x` of host element `e`, if it lies in the block.
    pub fn local_id(&self, x: usize, e: usize) -> Option<usize> {
        self.local[x][e]
    }

    /// The block whose minimum is `e`.
    pub fn block_with_min(&self, e: usize) -> Option<usize> {
        self.block_of_min[e]
    }

    /// Lowest block containing `a`: the one with minimum `a_*`.
    pub fn nabla(&self, a: usize) -> usize {
        self.block_of_min[lower_star(self.host, a)].expect("a_* is a block minimum")
    }

    /// Highest block containing `a`: the one with minimum `(a*)_*`.
    pub fn delta(&self, a: usize) -> usize {
        let m = lower_star(self.host, upper_star(self.host, a));
        self.block_of_min[m].expect("(a*)_* is a block minimum")
    }

    /// `(∇_a, Δ_a, blocks containing a)`; the list is in skeleton id order.
    pub fn element_blocks(&self, a: usize) -> (usize, usize, Vec<usize>) {
        let containing = (0..self.blocks.len())
            .filter(|&x| self.blocks[x].contains(self.host, a))
            .collect();
        (self.nabla(a), self.delta(a), containing)
    }
}

/// A failed structural check on a dissection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DissectionFailure {
    pub check: &'static str,
    pub witness: Vec<usize>,
}

/// The ten star identities; first counterexample per clause.
pub fn check_star_props(l: &FiniteLattice) -> Vec<DissectionFailure> {
    let n = l.size();
    let up = |a| upper_star(l, a);
    let lo = |a| lower_star(l, a);
    let mut out: Vec<DissectionFailure> = Vec::new();
    let mut fail = |check: &'static str, witness: Vec<usize>| {
        if !out.iter().any(|f| f.check == check) {
            out.push(DissectionFailure { check, witness });
        }
    };
    for a in 0..n {
        if !(l.leq(a, up(lo(a))) && l.leq(up(lo(a)), up(a))) {
            fail("b", vec![a]);
        }
        if !(l.leq(lo(a), lo(up(a))) && l.leq(lo(up(a)), a)) {
            fail("b-dual", vec![a]);
        }
        if up(lo(up(a))) != up(a) {
            fail("c", vec![a]);
        }
        if lo(up(lo(a))) != lo(a) {
            fail("c-dual", vec![a]);
        }
        for b in 0..n {
            if l.leq(a, b) && !l.leq(up(a), up(b)) {
                fail("a", vec![a, b]);
            }
            if l.leq(a, b) && !l.leq(lo(a), lo(b)) {
                fail("a-dual", vec![a, b]);
            }
            if a == lo(up(a)) && b == lo(up(b)) {
                let j = l.join(a, b);
                if j != lo(up(j)) {
                    fail("d", vec![a, b]);
                }
            }
            if a == up(lo(a)) && b == up(lo(b)) {
                let m = l.meet(a, b);
                if m != up(lo(m)) {
                    fail("d-dual", vec![a, b]);
                }
            }
            if l.join(lo(a), lo(b)) != lo(l.join(a, b)) {
                fail("e", vec![a, b]);
            }
            if l.meet(up(a), up(b)) != up(l.meet(a, b)) {
                fail("e-dual", vec![a, b]);
            }
        }
    }
    out
}

/// Blocks found by brute force: maximal complemented intervals.
pub fn maximal_complemented_intervals(l: &FiniteLattice) -> Vec<Interval> {
    let n = l.size();
    let complemented = |lo: usize, hi: usize| {
        let members = Interval::new(lo, hi).members(l);
        members.iter().all(|&a| {
            members
                .iter()
                .any(|&b| l.join(a, b) == hi && l.meet(a, b) == lo)
        })
    };
    let ivs: Vec<Interval> = (0..n)
        .flat_map(|lo| (0..n).map(move |hi| Interval::new(lo, hi)))
        .filter(|iv| l.leq(iv.lo, iv.hi) && complemented(iv.lo, iv.hi))
        .collect();
    let inside = |a: &Interval, b: &Interval| l.leq(b.lo, a.lo) && l.leq(a.hi, b.hi);
    let mut out: Vec<Interval> = ivs
        .iter()
        .filter(|a| !ivs.iter().any(|b| b != *a && inside(a, b)))
        .copied()
        .collect();
    out.sort();
    out
}

/// Exhaustive structural checks of a dissection.
pub fn check_dissection(d: &Dissection) -> Vec<DissectionFailure> {
    let l = d.host();
    let s = d.skeleton();
    let n = l.size();
    let k = d.blocks().len();
    let bl = d.blocks();
    let mut out = Vec::new();
    let mut fail =
        |check: &'static str, witness: Vec<usize>| out.push(DissectionFailure { check, witness });

    // [x, y] is a block iff x* = y and y_* = x, against brute force.
    let brute = maximal_complemented_intervals(l);
    for x in 0..n {
        for y in 0..n {
            if !l.leq(x, y) {
                continue;
            }
            let by_stars = upper_star(l, x) == y && lower_star(l, y) == x;
            if by_stars != brute.contains(&Interval::new(x, y)) {
                fail("block iff stars", vec![x, y]);
            }
        }
    }
    if brute.len() != k {
        fail("block count", vec![brute.len(), k]);
    }

    for x in 0..k {
        let lat = d.mcs().block(x);
        if !lat.complemented_profile().all() {
            fail("block profile", vec![x]);
        }
        for y in 0..k {
            if x != y && (bl[x].lo == bl[y].lo || bl[x].hi == bl[y].hi) {
                fail("distinct extremes", vec![x, y]);
            }
            let inter = |a: usize| bl[x].contains(l, a) && bl[y].contains(l, a);
            let (j, m) = (s.join(x, y), s.meet(x, y));
            // skeleton join and meet in terms of host minima
            if bl[j].lo != l.join(bl[x].lo, bl[y].lo) {
                fail("skeleton join", vec![x, y]);
            }
            if bl[m].lo != lower_star(l, upper_star(l, l.meet(bl[x].lo, bl[y].lo))) {
                fail("skeleton meet", vec![x, y]);
            }
            if bl[m].hi != l.meet(bl[x].hi, bl[y].hi) {
                fail("skeleton meet on maxima", vec![x, y]);
            }
            let meets = (0..n).any(inter);
            if meets != d.gamma().related(x, y) {
                fail("tolerance is overlap", vec![x, y]);
            }
            // X ∩ Y = (X ∧ Y) ∩ (X ∨ Y)
            if (0..n).any(|a| inter(a) != (bl[m].contains(l, a) && bl[j].contains(l, a))) {
                fail("overlap via meet and join", vec![x, y]);
            }
            if s.leq(x, y) && meets {
                let shared = Interval::new(bl[y].lo, bl[x].hi);
                if (0..n).any(|a| inter(a) != shared.contains(l, a)) {
                    fail("overlap interval", vec![x, y]);
                }
            }
            if s.is_cover(x, y) {
                let sub =
                    |p: usize, q: usize| l.leq(bl[q].lo, bl[p].lo) && l.leq(bl[p].hi, bl[q].hi);
                if !meets || sub(x, y) || sub(y, x) {
                    fail("covering blocks", vec![x, y]);
                }
            }
            for (z, bz) in bl.iter().enumerate() {
                if s.leq(x, z) && s.leq(z, y) {
                    let in_z = |a: usize| bz.contains(l, a);
                    if (0..n).any(|a| inter(a) && !in_z(a)) {
                        fail("middle block contains overlap", vec![x, z, y]);
                    }
                }
            }
        }
    }

    for a in 0..n {
        let (nab, del, containing) = d.element_blocks(a);
        if containing.is_empty() {
            fail("element covered", vec![a]);
            continue;
        }
        let interval: Vec<usize> = (0..k).filter(|&x| s.leq(nab, x) && s.leq(x, del)).collect();
        if interval != containing {
            fail("blocks containing an element", vec![a]);
        }
    }

    let has_min =
        |lat: &FiniteLattice| (0..lat.size()).any(|a| (0..lat.size()).all(|b| lat.leq(a, b)));
    if has_min(l) != has_min(s) {
        fail("minimum", vec![]);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{boolean, chain, stacked};

    #[test]
    fn stars_on_small_lattices() {
        assert_eq!(stars(&chain(5), 2), (1, 3));
        let b = boolean(2);
        assert_eq!(stars(&b, 0), (0, 3));
        assert_eq!(upper_star(&b, 3), 3);
    }

    #[test]
    fn chain_four() {
        let l = chain(4);
        let d = dissect(&l).unwrap();
        assert_eq!(
            d.blocks(),
            &[
                Interval::new(0, 1),
                Interval::new(1, 2),
                Interval::new(2, 3)
            ]
        );
        assert_eq!(d.skeleton().covers(), &[(0, 1), (1, 2)]);
        assert_eq!(d.element_blocks(0), (0, 0, vec![0]));
        assert_eq!(d.element_blocks(1), (0, 1, vec![0, 1]));
        assert!(check_dissection(&d).is_empty());
    }

    #[test]
    fn boolean_is_one_block() {
        let l = boolean(3);
        let d = dissect(&l).unwrap();
        assert_eq!(d.blocks(), &[Interval::new(0, 7)]);
        assert_eq!(d.element_blocks(5), (0, 0, vec![0]));
    }

    #[test]
    fn stacked_diamonds() {
        let l = stacked(&[3, 3]);
        let d = dissect(&l).unwrap();
        assert_eq!(d.blocks(), &[Interval::new(0, 4), Interval::new(4, 8)]);
        assert!(d.gamma().related(0, 1));
        let k = d.mcs().connection(0, 1).unwrap();
        assert_eq!(k.pairs(), &[(4, 0)]);
    }

    #[test]
    fn refuses_non_modular() {
        let n5 = FiniteLattice::from_covers(5, &[(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)]).unwrap();
        assert!(matches!(dissect(&n5), Err(Error::NotModular(..))));
    }
}
