//! Tolerances: reflexive, symmetric relations compatible with meet and join.

use crate::error::{Error, Result};
use crate::lattice::FiniteLattice;

/// A dense binary relation on `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    n: usize,
    bits: Vec<bool>,
}

impl Relation {
    pub fn empty(n: usize) -> Self {
        Relation {
            n,
            bits: vec![false; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut r = Self::empty(n);
        for a in 0..n {
            r.set(a, a, true);
        }
        r
    }

    pub fn full(n: usize) -> Self {
        Relation {
            n,
            bits: vec![true; n * n],
        }
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let mut r = Self::empty(n);
        for a in 0..n {
            for b in 0..n {
                r.set(a, b, f(a, b));
            }
        }
        r
    }

    /// Reflexive and symmetric closure of the given pairs.
    pub fn symmetric_from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut r = Self::identity(n);
        for &(a, b) in pairs {
            for x in [a, b] {
                if x >= n {
                    return Err(Error::IndexOutOfRange { index: x, size: n });
                }
            }
            r.set(a, b, true);
            r.set(b, a, true);
        }
        Ok(r)
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, a: usize, b: usize) -> bool {
        self.bits[a * self.n + b]
    }

    pub fn set(&mut self, a: usize, b: usize, v: bool) {
        self.bits[a * self.n + b] = v;
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n;
        (0..n * n)
            .filter(|&i| self.bits[i])
            .map(move |i| (i / n, i % n))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ToleranceClause {
    Reflexive,
    Symmetric,
    JoinCompatible,
    MeetCompatible,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToleranceViolation {
    pub clause: ToleranceClause,
    pub witness: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ToleranceReport {
    pub violations: Vec<ToleranceViolation>,
}

impl ToleranceReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Lists every violated clause with its witness. Compatibility witnesses are
/// `[a, b, c, d]` with `a ~ b`, `c ~ d` and the combined pair unrelated.
pub fn validate_tolerance(l: &FiniteLattice, rel: &Relation) -> Result<ToleranceReport> {
    let n = l.size();
    if rel.size() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: rel.size(),
        });
    }
    let mut out = Vec::new();
    for a in 0..n {
        if !rel.get(a, a) {
            out.push(ToleranceViolation {
                clause: ToleranceClause::Reflexive,
                witness: vec![a],
            });
        }
    }
    for (a, b) in rel.pairs() {
        if !rel.get(b, a) {
            out.push(ToleranceViolation {
                clause: ToleranceClause::Symmetric,
                witness: vec![a, b],
            });
        }
    }
    let pairs: Vec<(usize, usize)> = rel.pairs().collect();
    for &(a, b) in &pairs {
        for &(c, d) in &pairs {
            if !rel.get(l.join(a, c), l.join(b, d)) {
                out.push(ToleranceViolation {
                    clause: ToleranceClause::JoinCompatible,
                    witness: vec![a, b, c, d],
                });
            }
            if !rel.get(l.meet(a, c), l.meet(b, d)) {
                out.push(ToleranceViolation {
                    clause: ToleranceClause::MeetCompatible,
                    witness: vec![a, b, c, d],
                });
            }
        }
    }
    Ok(ToleranceReport { violations: out })
}

/// A relation checked to be a tolerance of some lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tolerance {
    rel: Relation,
}

impl Tolerance {
    pub fn new(l: &FiniteLattice, rel: Relation) -> Result<Self> {
        let report = validate_tolerance(l, &rel)?;
        if !report.is_valid() {
            return Err(Error::NotATolerance(report));
        }
        Ok(Tolerance { rel })
    }

    pub fn size(&self) -> usize {
        self.rel.size()
    }

    pub fn related(&self, a: usize, b: usize) -> bool {
        self.rel.get(a, b)
    }

    /// `a <= b` in `l` and `a ~ b`.
    pub fn leq_gamma(&self, l: &FiniteLattice, a: usize, b: usize) -> bool {
        l.leq(a, b) && self.related(a, b)
    }

    pub fn relation(&self) -> &Relation {
        &self.rel
    }

    /// Pairs `a < b` that are related.
    pub fn strict_pairs<'a>(
        &'a self,
        l: &'a FiniteLattice,
    ) -> impl Iterator<Item = (usize, usize)> + 'a {
        self.rel
            .pairs()
            .filter(move |&(a, b)| a != b && l.leq(a, b))
    }
}

/// A counterexample to one of the six standard tolerance consequences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaFailure {
    pub item: u8,
    pub witness: Vec<usize>,
}

/// Checks the six consequences of the tolerance axioms; returns the first
/// counterexample found for each item that fails.
///
/// 1. `x ~ z`, `x <= y <= z` gives `x ~ y` and `y ~ z`.
/// 2. `x ~ y` iff `x ∨ y ~ x ∧ y`.
/// 3. `t ~ x`, `t ~ y`, `t <= x ∧ y` gives `t ~ x ∨ y`.
/// 4. dual of 3.
/// 5. `x ~ x ∨ y` and `y ~ x ∨ y` relate all of `x, y, x ∨ y, x ∧ y`.
/// 6. dual of 5.
pub fn check_tolerance_lemma(l: &FiniteLattice, rel: &Relation) -> Vec<LemmaFailure> {
    let n = l.size();
    let r = |a: usize, b: usize| rel.get(a, b);
    let mut out: Vec<LemmaFailure> = Vec::new();
    let mut fail = |item: u8, witness: Vec<usize>| {
        if !out.iter().any(|f| f.item == item) {
            out.push(LemmaFailure { item, witness });
        }
    };
    for x in 0..n {
        for y in 0..n {
            let (j, m) = (l.join(x, y), l.meet(x, y));
            if r(x, y) != r(j, m) {
                fail(2, vec![x, y]);
            }
            if r(x, j) && r(y, j) {
                let four = [x, y, j, m];
                if !four.iter().all(|&p| four.iter().all(|&q| r(p, q))) {
                    fail(5, vec![x, y]);
                }
            }
            if r(x, m) && r(y, m) {
                let four = [x, y, j, m];
                if !four.iter().all(|&p| four.iter().all(|&q| r(p, q))) {
                    fail(6, vec![x, y]);
                }
            }
            for z in 0..n {
                if r(x, z) && l.leq(x, y) && l.leq(y, z) && !(r(x, y) && r(y, z)) {
                    fail(1, vec![x, y, z]);
                }
                let t = z;
                if r(t, x) && r(t, y) && l.leq(t, m) && !r(t, j) {
                    fail(3, vec![t, x, y]);
                }
                if r(t, x) && r(t, y) && l.leq(j, t) && !r(t, m) {
                    fail(4, vec![t, x, y]);
                }
            }
        }
    }
    out.sort_by_key(|f| f.item);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(n: usize) -> FiniteLattice {
        let covers: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        FiniteLattice::from_covers(n, &covers).unwrap()
    }

    #[test]
    fn full_and_identity_are_tolerances() {
        let l = chain(4);
        assert!(Tolerance::new(&l, Relation::full(4)).is_ok());
        assert!(Tolerance::new(&l, Relation::identity(4)).is_ok());
    }

    #[test]
    fn neighbours_on_a_chain() {
        // |a - b| <= 1 on a chain is a tolerance but not transitive.
        let l = chain(4);
        let rel = Relation::from_fn(4, |a, b| a.abs_diff(b) <= 1);
        let t = Tolerance::new(&l, rel).unwrap();
        assert!(t.leq_gamma(&l, 0, 1) && t.leq_gamma(&l, 1, 2));
        assert!(!t.leq_gamma(&l, 0, 2));
    }

    #[test]
    fn reports_each_clause() {
        let l = chain(3);
        let mut rel = Relation::identity(3);
        rel.set(0, 2, true);
        let rep = validate_tolerance(&l, &rel).unwrap();
        let has = |c| rep.violations.iter().any(|v| v.clause == c);
        assert!(!has(ToleranceClause::Reflexive));
        assert!(has(ToleranceClause::Symmetric));
        // 0 ~ 2 and 1 ~ 1 but 0 ∨ 1 = 1 is not related to 2 ∨ 1 = 2
        assert!(rep.violations.contains(&ToleranceViolation {
            clause: ToleranceClause::JoinCompatible,
            witness: vec![0, 2, 1, 1],
        }));
        rel.set(1, 1, false);
        let rep = validate_tolerance(&l, &rel).unwrap();
        assert!(rep
            .violations
            .iter()
            .any(|v| v.clause == ToleranceClause::Reflexive));
        assert!(matches!(
            validate_tolerance(&l, &Relation::identity(2)),
            Err(Error::DimensionMismatch {
                expected: 3,
                found: 2
            })
        ));
    }

    #[test]
    fn lemma_holds_on_full_relation() {
        let l = chain(3);
        assert!(check_tolerance_lemma(&l, &Relation::full(3)).is_empty());
    }
}
