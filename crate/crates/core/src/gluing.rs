//! The sum lattice of a system: tagged elements `(x, a)` modulo the
//! gluing relation, ordered by the closure of the block orders.
//!
//! Sum element ids follow the order of each class's lexicographically
//! smallest tagged element.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::lattice::{FiniteLattice, Interval};
use crate::mcs::{McSystem, McsReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TaggedElement {
    pub block: usize,
    pub value: usize,
}

impl TaggedElement {
    pub fn new(block: usize, value: usize) -> Self {
        TaggedElement { block, value }
    }
}

#[derive(Clone, Debug)]
pub struct GluedSum<'a> {
    system: &'a McSystem,
    report: McsReport,
    lattice: FiniteLattice,
    offsets: Vec<usize>,
    class: Vec<usize>,
    reps: Vec<TaggedElement>,
    pi_inv: Vec<Vec<Option<usize>>>,
    lambda: Vec<Interval>,
}

/// `(x, a) ~ (y, b)` computed straight from the definition.
pub fn glue_related(c: &McSystem, p: TaggedElement, q: TaggedElement) -> bool {
    let (x, y) = (p.block, q.block);
    if !c.related(x, y) {
        return false;
    }
    let j = c.skeleton().join(x, y);
    c.in_filter(x, j, p.value)
        && c.in_filter(y, j, q.value)
        && c.phi(x, j, p.value) == c.phi(y, j, q.value)
}

pub fn glue(c: &McSystem) -> Result<GluedSum<'_>> {
    let report = c.validate();
    if !report.is_valid() {
        return Err(Error::InvalidSystem(Box::new(report)));
    }
    let k = c.skeleton().size();
    let mut offsets = Vec::with_capacity(k + 1);
    let mut tagged = Vec::new();
    for x in 0..k {
        offsets.push(tagged.len());
        tagged.extend((0..c.block(x).size()).map(|a| TaggedElement::new(x, a)));
    }
    offsets.push(tagged.len());
    let t = tagged.len();

    let mut sim = vec![false; t * t];
    for i in 0..t {
        for j in 0..t {
            sim[i * t + j] = glue_related(c, tagged[i], tagged[j]);
        }
    }
    let mut class = vec![usize::MAX; t];
    let mut reps = Vec::new();
    for i in 0..t {
        if class[i] != usize::MAX {
            continue;
        }
        for j in i..t {
            if sim[i * t + j] && class[j] == usize::MAX {
                class[j] = reps.len();
            }
        }
        if class[i] == usize::MAX {
            return Err(Error::InternalTheoremViolation(format!(
                "gluing relation not reflexive at {:?}",
                tagged[i]
            )));
        }
        reps.push(tagged[i]);
    }
    for i in 0..t {
        for j in 0..t {
            if sim[i * t + j] != (class[i] == class[j]) {
                return Err(Error::InternalTheoremViolation(format!(
                    "gluing relation is not an equivalence at {:?}, {:?}",
                    tagged[i], tagged[j]
                )));
            }
        }
    }

    let n = reps.len();
    let mut leq = vec![false; n * n];
    for x in 0..k {
        let lx = c.block(x);
        for a in 0..lx.size() {
            for b in 0..lx.size() {
                if lx.leq(a, b) {
                    leq[class[offsets[x] + a] * n + class[offsets[x] + b]] = true;
                }
            }
        }
    }
    for m in 0..n {
        for i in 0..n {
            if leq[i * n + m] {
                for j in 0..n {
                    if leq[m * n + j] {
                        leq[i * n + j] = true;
                    }
                }
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if leq[i * n + j] && leq[j * n + i] {
                return Err(Error::InternalTheoremViolation(format!(
                    "sum order is not antisymmetric at {i}, {j}"
                )));
            }
        }
    }
    let lattice = FiniteLattice::from_order(n, |i, j| leq[i * n + j])
        .map_err(|e| Error::InternalTheoremViolation(format!("sum is not a lattice: {e}")))?;
    if let Some((a, b, d)) = lattice.modular_violation() {
        return Err(Error::InternalTheoremViolation(format!(
            "sum is not modular at {a}, {b}, {d}"
        )));
    }

    let mut pi_inv = vec![vec![None; n]; k];
    let mut lambda = Vec::with_capacity(k);
    for x in 0..k {
        let lx = c.block(x);
        for a in 0..lx.size() {
            pi_inv[x][class[offsets[x] + a]] = Some(a);
        }
        lambda.push(Interval::new(
            class[offsets[x] + lx.bottom()],
            class[offsets[x] + lx.top()],
        ));
    }
    Ok(GluedSum {
        system: c,
        report,
        lattice,
        offsets,
        class,
        reps,
        pi_inv,
        lambda,
    })
}

impl<'a> GluedSum<'a> {
    pub fn system(&self) -> &'a McSystem {
        self.system
    }

    pub fn lattice(&self) -> &FiniteLattice {
        &self.lattice
    }

    pub fn into_lattice(self) -> FiniteLattice {
        self.lattice
    }

    pub fn is_monotone(&self) -> bool {
        self.report.is_monotone()
    }

    /// All tagged elements in lexicographic order.
    pub fn tagged_elements(&self) -> impl Iterator<Item = TaggedElement> + '_ {
        (0..self.system.skeleton().size()).flat_map(move |x| {
            (0..self.system.block(x).size()).map(move |a| TaggedElement::new(x, a))
        })
    }

    pub fn class_of(&self, p: TaggedElement) -> usize {
        self.class[self.offsets[p.block] + p.value]
    }

    /// `π_x(a)`.
    pub fn pi(&self, x: usize, a: usize) -> usize {
        self.class_of(TaggedElement::new(x, a))
    }

    /// `π_x⁻¹(e)` when `e ∈ Λ_x`.
    pub fn pi_inv(&self, x: usize, e: usize) -> Option<usize> {
        self.pi_inv[x][e]
    }

    pub fn representative(&self, e: usize) -> TaggedElement {
        self.reps[e]
    }

    /// `Λ_x = [0_x, 1_x]`.
    pub fn lambda(&self, x: usize) -> Interval {
        self.lambda[x]
    }

    pub fn in_lambda(&self, x: usize, e: usize) -> bool {
        self.pi_inv[x][e].is_some()
    }

    /// `Π_e`: skeleton elements whose block image contains `e`.
    pub fn pi_set(&self, e: usize) -> Vec<usize> {
        (0..self.system.skeleton().size())
            .filter(|&x| self.in_lambda(x, e))
            .collect()
    }

    /// `Π_e` as a skeleton interval, if it is one.
    pub fn pi_interval(&self, e: usize) -> Option<Interval> {
        let s = self.system.skeleton();
        let set = self.pi_set(e);
        let lo = *set.iter().find(|&&x| set.iter().all(|&y| s.leq(x, y)))?;
        let hi = *set.iter().find(|&&x| set.iter().all(|&y| s.leq(y, x)))?;
        (Interval::new(lo, hi).members(s) == set).then_some(Interval::new(lo, hi))
    }

    fn phi_hat(&self, x: usize, y: usize, a: usize) -> usize {
        self.system.phi_hat(x, y, a).expect("valid system")
    }

    fn psi_hat(&self, x: usize, y: usize, b: usize) -> usize {
        self.system.psi_hat(x, y, b).expect("valid system")
    }

    /// `π_x c <= π_y d` via the join-side adjoint formula.
    pub fn leq_closed_form(&self, p: TaggedElement, q: TaggedElement) -> bool {
        let c = self.system;
        let (x, y) = (p.block, q.block);
        let j = c.skeleton().join(x, y);
        if !c.related(j, y) || !c.in_filter(y, j, q.value) {
            return false;
        }
        let lhs = self.phi_hat(x, j, p.value);
        let rhs = c.phi(y, j, q.value).expect("filter element is mapped");
        c.block(j).leq(lhs, rhs)
    }

    /// `π_x c <= π_y d` via the meet-side adjoint formula.
    pub fn leq_closed_form_dual(&self, p: TaggedElement, q: TaggedElement) -> bool {
        let c = self.system;
        let (x, y) = (p.block, q.block);
        let m = c.skeleton().meet(x, y);
        if !c.related(m, x) || !c.in_ideal(m, x, p.value) {
            return false;
        }
        let lhs = c.phi_inv(m, x, p.value).expect("ideal element is mapped");
        let rhs = self.psi_hat(m, y, q.value);
        c.block(m).leq(lhs, rhs)
    }

    /// `(π_x c ∨ π_y d, π_x c ∧ π_y d)` by the adjoint formulas at the skeleton
    /// join and meet.
    pub fn join_meet_tagged(&self, p: TaggedElement, q: TaggedElement) -> (usize, usize) {
        let c = self.system;
        let s = c.skeleton();
        let (x, y) = (p.block, q.block);
        let (j, m) = (s.join(x, y), s.meet(x, y));
        let jv = c
            .block(j)
            .join(self.phi_hat(x, j, p.value), self.phi_hat(y, j, q.value));
        let mv = c
            .block(m)
            .meet(self.psi_hat(m, x, p.value), self.psi_hat(m, y, q.value));
        (self.pi(j, jv), self.pi(m, mv))
    }

    /// Closed-form join and meet of two sum elements through their representatives.
    pub fn sum_join_meet(&self, e1: usize, e2: usize) -> (usize, usize) {
        self.join_meet_tagged(self.reps[e1], self.reps[e2])
    }

    /// For `x <= y`: `(π_x c ∨ π_y d, π_x c ∧ π_y d)` computed in `L_y` and `L_x`.
    pub fn join_meet_along(
        &self,
        x: usize,
        c_: usize,
        y: usize,
        d: usize,
    ) -> Result<(usize, usize)> {
        let c = self.system;
        let jv = c.block(y).join(c.phi_hat(x, y, c_)?, d);
        let mv = c.block(x).meet(c_, c.psi_hat(x, y, d)?);
        Ok((self.pi(y, jv), self.pi(x, mv)))
    }

    /// A witness `a = a_0 <= ... <= a_n = b` with weakly increasing blocks,
    /// or `None` when no such sequence exists.
    pub fn ascending_witness(&self, a: usize, b: usize) -> Option<AscendingSequence> {
        let c = self.system;
        let s = c.skeleton();
        let k = s.size();
        let n = self.lattice.size();
        // states (block of the last step, current element)
        let mut prev: Vec<Option<(usize, usize)>> = vec![None; k * n];
        let mut queue = VecDeque::new();
        for x in 0..k {
            if self.in_lambda(x, a) {
                prev[x * n + a] = Some((usize::MAX, usize::MAX));
                queue.push_back((x, a));
            }
        }
        while let Some((x, e)) = queue.pop_front() {
            if e == b {
                let (mut blocks, mut elems) = (Vec::new(), vec![b]);
                let (mut cx, mut ce) = (x, e);
                while let Some((px, pe)) = prev[cx * n + ce] {
                    if px == usize::MAX {
                        break;
                    }
                    blocks.push(cx);
                    elems.push(pe);
                    (cx, ce) = (px, pe);
                }
                blocks.reverse();
                elems.reverse();
                return Some(AscendingSequence {
                    blocks,
                    elements: elems,
                });
            }
            for y in 0..k {
                if !s.leq(x, y) {
                    continue;
                }
                let Some(u) = self.pi_inv(y, e) else { continue };
                let ly = c.block(y);
                for v in 0..ly.size() {
                    let f = self.pi(y, v);
                    if ly.leq(u, v) && prev[y * n + f].is_none() {
                        prev[y * n + f] = Some((x, e));
                        queue.push_back((y, f));
                    }
                }
            }
        }
        None
    }

    pub fn sum_extremes(&self) -> SumExtremes {
        let l = &self.lattice;
        let s = self.system.skeleton();
        let k = s.size();
        let minimum =
            |lat: &FiniteLattice| (0..lat.size()).find(|&a| (0..lat.size()).all(|b| lat.leq(a, b)));
        let maximum =
            |lat: &FiniteLattice| (0..lat.size()).find(|&a| (0..lat.size()).all(|b| lat.leq(b, a)));
        let zeros: Vec<usize> = self.lambda.iter().map(|iv| iv.lo).collect();
        let ones: Vec<usize> = self.lambda.iter().map(|iv| iv.hi).collect();
        let pi_intervals = (0..l.size()).map(|e| self.pi_interval(e)).collect();
        let bottom = minimum(l);
        let top = maximum(l);

        let monotone = self.is_monotone().then(|| {
            let mut failures = Vec::new();
            let mut fail = |check: &'static str, witness: Vec<usize>| {
                failures.push(MonotoneFailure { check, witness })
            };
            if bottom.is_some() != minimum(s).is_some() {
                fail("minimum iff skeleton minimum", vec![]);
            }
            if top.is_some() != maximum(s).is_some() {
                fail("maximum iff skeleton maximum", vec![]);
            }
            for x in 0..k {
                for y in 0..k {
                    if x != y && zeros[x] == zeros[y] {
                        fail("zeros injective", vec![x, y]);
                    }
                    if x != y && ones[x] == ones[y] {
                        fail("ones injective", vec![x, y]);
                    }
                    let xy = s.lt(x, y);
                    if xy != l.lt(zeros[x], zeros[y]) || xy != l.lt(ones[x], ones[y]) {
                        fail("strict order of extremes", vec![x, y]);
                    }
                    if s.leq(x, y) != l.leq(zeros[x], zeros[y])
                        || s.leq(x, y) != l.leq(ones[x], ones[y])
                    {
                        fail("order of extremes", vec![x, y]);
                    }
                    let inc = |lat: &FiniteLattice, a, b| !lat.comparable(a, b);
                    if inc(s, x, y) != inc(l, zeros[x], zeros[y])
                        || inc(s, x, y) != inc(l, ones[x], ones[y])
                    {
                        fail("incomparability of extremes", vec![x, y]);
                    }
                    if x != y
                        && (0..l.size()).all(|e| !self.in_lambda(x, e) || self.in_lambda(y, e))
                    {
                        fail("block image not contained in another", vec![x, y]);
                    }
                }
                let p0 = self.pi_set(zeros[x]);
                if !p0.iter().all(|&z| s.leq(z, x)) {
                    fail("x is the maximum of Π at 0_x", vec![x]);
                }
                let p1 = self.pi_set(ones[x]);
                if !p1.iter().all(|&z| s.leq(x, z)) {
                    fail("x is the minimum of Π at 1_x", vec![x]);
                }
            }
            for e in 0..l.size() {
                if self.pi_interval(e).is_none() {
                    fail("Π is an interval", vec![e]);
                }
            }
            MonotoneDiagnostics { failures }
        });
        SumExtremes {
            bottom,
            top,
            zeros,
            ones,
            pi_intervals,
            monotone,
        }
    }

    /// Exhaustive checks of the block-image lemmas that hold without
    /// monotony. Returns descriptions of failures.
    pub fn check_lambda_lemmas(&self) -> Vec<(&'static str, Vec<usize>)> {
        let c = self.system;
        let s = c.skeleton();
        let l = &self.lattice;
        let k = s.size();
        let n = l.size();
        let mut out = Vec::new();
        for x in 0..k {
            let lx = c.block(x);
            // π_x is a lattice isomorphism onto the interval Λ_x
            let image: Vec<usize> = (0..lx.size()).map(|a| self.pi(x, a)).collect();
            let mut sorted = image.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != lx.size() || sorted != self.lambda[x].members(l) {
                out.push(("block image is the interval", vec![x]));
            }
            for a in 0..lx.size() {
                for b in 0..lx.size() {
                    if l.join(image[a], image[b]) != image[lx.join(a, b)]
                        || l.meet(image[a], image[b]) != image[lx.meet(a, b)]
                    {
                        out.push(("block injection is a lattice map", vec![x, a, b]));
                    }
                }
            }
            for y in 0..k {
                let both: Vec<usize> = (0..n)
                    .filter(|&e| self.in_lambda(x, e) && self.in_lambda(y, e))
                    .collect();
                if both.is_empty() == c.related(x, y) {
                    out.push(("images meet iff related", vec![x, y]));
                }
                let (j, m) = (s.join(x, y), s.meet(x, y));
                let via: Vec<usize> = (0..n)
                    .filter(|&e| self.in_lambda(j, e) && self.in_lambda(m, e))
                    .collect();
                if both != via {
                    out.push(("overlap via join and meet", vec![x, y]));
                }
                if l.join(self.lambda[x].lo, self.lambda[y].lo) != self.lambda[j].lo {
                    out.push(("join of zeros", vec![x, y]));
                }
                if l.meet(self.lambda[x].hi, self.lambda[y].hi) != self.lambda[m].hi {
                    out.push(("meet of ones", vec![x, y]));
                }
                if c.leq_gamma(x, y) {
                    let mut from_filter: Vec<usize> = (0..lx.size())
                        .filter(|&a| c.in_filter(x, y, a))
                        .map(|a| self.pi(x, a))
                        .collect();
                    let mut from_ideal: Vec<usize> = (0..c.block(y).size())
                        .filter(|&b| c.in_ideal(x, y, b))
                        .map(|b| self.pi(y, b))
                        .collect();
                    from_filter.sort_unstable();
                    from_ideal.sort_unstable();
                    if from_filter != both || from_ideal != both {
                        out.push(("overlap is filter and ideal image", vec![x, y]));
                    }
                }
            }
            for a in 0..n {
                for b in 0..n {
                    if self.in_lambda(x, a)
                        && self.in_lambda(x, b)
                        && l.leq(a, b)
                        && (0..n).any(|e| l.leq(a, e) && l.leq(e, b) && !self.in_lambda(x, e))
                    {
                        out.push(("block image convex", vec![x, a, b]));
                    }
                }
            }
        }
        out
    }
}

/// `elements[i-1] <= elements[i]` inside block `blocks[i-1]`, blocks weakly
/// increasing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AscendingSequence {
    pub blocks: Vec<usize>,
    pub elements: Vec<usize>,
}

impl AscendingSequence {
    pub fn is_valid(&self, sum: &GluedSum) -> bool {
        let c = sum.system();
        if self.elements.len() != self.blocks.len() + 1 {
            return false;
        }
        if self
            .blocks
            .windows(2)
            .any(|w| !c.skeleton().leq(w[0], w[1]))
        {
            return false;
        }
        self.blocks.iter().enumerate().all(|(i, &x)| {
            match (
                sum.pi_inv(x, self.elements[i]),
                sum.pi_inv(x, self.elements[i + 1]),
            ) {
                (Some(u), Some(v)) => c.block(x).leq(u, v),
                _ => false,
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotoneFailure {
    pub check: &'static str,
    pub witness: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotoneDiagnostics {
    pub failures: Vec<MonotoneFailure>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumExtremes {
    pub bottom: Option<usize>,
    pub top: Option<usize>,
    /// `0_x` per skeleton element.
    pub zeros: Vec<usize>,
    /// `1_x` per skeleton element.
    pub ones: Vec<usize>,
    /// `Π_e` per sum element, when it is a skeleton interval.
    pub pi_intervals: Vec<Option<Interval>>,
    /// Monotone-only checks; `None` when the system is not monotone.
    pub monotone: Option<MonotoneDiagnostics>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{chain, diamond, nonmonotone_example};
    use crate::mcs::Connection;
    use crate::tolerance::{Relation, Tolerance};

    fn two_diamonds() -> McSystem {
        let s = chain(2);
        let g = Tolerance::new(&s, Relation::full(2)).unwrap();
        let m3 = diamond(3);
        let ks = vec![
            Connection::identity(0, &m3),
            Connection::identity(1, &m3),
            Connection::new(0, 1, 4, 0, vec![(4, 0)]),
        ];
        McSystem::new(s, g, vec![m3.clone(), m3], ks).unwrap()
    }

    #[test]
    fn two_diamonds_share_one_class() {
        let c = two_diamonds();
        let g = glue(&c).unwrap();
        assert_eq!(g.lattice().size(), 9);
        assert_eq!(g.pi(0, 4), g.pi(1, 0));
        assert_eq!(g.representative(g.pi(1, 0)), TaggedElement::new(0, 4));
        let ex = g.sum_extremes();
        assert_eq!(ex.bottom, Some(g.pi(0, 0)));
        assert!(ex.monotone.unwrap().failures.is_empty());
        assert!(g.check_lambda_lemmas().is_empty());
    }

    #[test]
    fn closed_forms_on_two_diamonds() {
        let c = two_diamonds();
        let g = glue(&c).unwrap();
        let l = g.lattice();
        let all: Vec<_> = g.tagged_elements().collect();
        for &p in &all {
            for &q in &all {
                let truth = l.leq(g.class_of(p), g.class_of(q));
                assert_eq!(g.leq_closed_form(p, q), truth, "{p:?} {q:?}");
                assert_eq!(g.leq_closed_form_dual(p, q), truth, "{p:?} {q:?}");
                let (a, b) = (g.class_of(p), g.class_of(q));
                assert_eq!(g.join_meet_tagged(p, q), (l.join(a, b), l.meet(a, b)));
            }
        }
        assert_eq!(g.sum_join_meet(g.pi(0, 0), g.pi(1, 0)).0, g.pi(1, 0));
    }

    #[test]
    fn ascending_witnesses() {
        let c = two_diamonds();
        let g = glue(&c).unwrap();
        let l = g.lattice();
        for a in 0..l.size() {
            for b in 0..l.size() {
                let w = g.ascending_witness(a, b);
                assert_eq!(w.is_some(), l.leq(a, b));
                if let Some(w) = w {
                    assert!(w.is_valid(&g));
                }
            }
        }
    }

    #[test]
    fn nonmonotone_sum_is_m3() {
        let c = nonmonotone_example();
        let g = glue(&c).unwrap();
        assert_eq!(g.lattice().size(), 5);
        assert!(g.lattice().is_modular());
        assert!(g.sum_extremes().monotone.is_none());
    }

    #[test]
    fn invalid_system_is_rejected() {
        let s = chain(1);
        let g = Tolerance::new(&s, Relation::full(1)).unwrap();
        let l = chain(3);
        let c = McSystem::new(s, g, vec![l.clone()], vec![Connection::identity(0, &l)]).unwrap();
        assert!(matches!(glue(&c), Err(Error::InvalidSystem(_))));
    }
}
