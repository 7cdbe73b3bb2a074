//! Finite lattices given by their cover relation.
//!
//! Elements are `0..n`. Construction computes the full order plus meet and
//! join tables once; every query afterwards is a table lookup.

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteLattice {
    n: usize,
    leq: Vec<bool>,
    covers: Vec<(usize, usize)>,
    upper: Vec<Vec<usize>>,
    lower: Vec<Vec<usize>>,
    meet: Vec<usize>,
    join: Vec<usize>,
    bottom: usize,
    top: usize,
}

/// A closed interval `[lo, hi]` of some lattice, by element ids.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval {
    pub lo: usize,
    pub hi: usize,
}

impl Interval {
    pub fn new(lo: usize, hi: usize) -> Self {
        Interval { lo, hi }
    }

    pub fn contains(&self, l: &FiniteLattice, e: usize) -> bool {
        l.leq(self.lo, e) && l.leq(e, self.hi)
    }

    /// Members in ascending id order.
    pub fn members(&self, l: &FiniteLattice) -> Vec<usize> {
        (0..l.size()).filter(|&e| self.contains(l, e)).collect()
    }
}

/// The six complementation conditions, each computed independently.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ComplementedProfile {
    pub top_is_join_of_atoms: bool,
    pub bottom_is_meet_of_coatoms: bool,
    pub complemented: bool,
    pub relatively_complemented: bool,
    pub atomistic: bool,
    pub coatomistic: bool,
}

impl ComplementedProfile {
    pub fn all(&self) -> bool {
        self.top_is_join_of_atoms
            && self.bottom_is_meet_of_coatoms
            && self.complemented
            && self.relatively_complemented
            && self.atomistic
            && self.coatomistic
    }

    pub fn all_equal(&self) -> bool {
        let v = [
            self.top_is_join_of_atoms,
            self.bottom_is_meet_of_coatoms,
            self.complemented,
            self.relatively_complemented,
            self.atomistic,
            self.coatomistic,
        ];
        v.iter().all(|&b| b == v[0])
    }
}

impl FiniteLattice {
    /// Builds a lattice from `n` elements and its cover pairs `(lower, upper)`.
    pub fn from_covers(n: usize, covers: &[(usize, usize)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyLattice("a lattice needs at least one element"));
        }
        let mut cov: Vec<(usize, usize)> = Vec::with_capacity(covers.len());
        for &(a, b) in covers {
            for x in [a, b] {
                if x >= n {
                    return Err(Error::IndexOutOfRange { index: x, size: n });
                }
            }
            if a == b {
                return Err(Error::CycleDetected(a));
            }
            cov.push((a, b));
        }
        cov.sort_unstable();
        cov.dedup();

        let mut upper = vec![Vec::new(); n];
        let mut lower = vec![Vec::new(); n];
        for &(a, b) in &cov {
            upper[a].push(b);
            lower[b].push(a);
        }

        // Kahn's algorithm from the minimal elements.
        let mut indeg: Vec<usize> = lower.iter().map(|l| l.len()).collect();
        let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut topo = Vec::with_capacity(n);
        while let Some(v) = stack.pop() {
            topo.push(v);
            for &w in &upper[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    stack.push(w);
                }
            }
        }
        if topo.len() < n {
            let v = (0..n).find(|&v| indeg[v] > 0).unwrap();
            return Err(Error::CycleDetected(v));
        }

        let mut leq = vec![false; n * n];
        for &v in topo.iter().rev() {
            leq[v * n + v] = true;
            for &w in &upper[v] {
                for u in 0..n {
                    if leq[w * n + u] {
                        leq[v * n + u] = true;
                    }
                }
            }
        }

        for &(a, b) in &cov {
            if let Some(c) = (0..n).find(|&c| c != a && c != b && leq[a * n + c] && leq[c * n + b])
            {
                return Err(Error::NotCovers {
                    lower: a,
                    upper: b,
                    via: c,
                });
            }
        }

        let up_count: Vec<usize> = (0..n)
            .map(|v| (0..n).filter(|&u| leq[v * n + u]).count())
            .collect();
        let down_count: Vec<usize> = (0..n)
            .map(|v| (0..n).filter(|&u| leq[u * n + v]).count())
            .collect();

        let mut join = vec![0; n * n];
        let mut meet = vec![0; n * n];
        let mut bounds = Vec::with_capacity(n);
        for a in 0..n {
            for b in a..n {
                bounds.clear();
                bounds.extend((0..n).filter(|&c| leq[a * n + c] && leq[b * n + c]));
                let j =
                    least(&bounds, &up_count, |x, y| leq[x * n + y]).ok_or(Error::NotALattice {
                        a,
                        b,
                        which: "join",
                    })?;
                bounds.clear();
                bounds.extend((0..n).filter(|&c| leq[c * n + a] && leq[c * n + b]));
                let m = least(&bounds, &down_count, |x, y| leq[y * n + x]).ok_or(
                    Error::NotALattice {
                        a,
                        b,
                        which: "meet",
                    },
                )?;
                join[a * n + b] = j;
                join[b * n + a] = j;
                meet[a * n + b] = m;
                meet[b * n + a] = m;
            }
        }

        let bottom = (0..n).find(|&v| lower[v].is_empty()).unwrap();
        let top = (0..n).find(|&v| upper[v].is_empty()).unwrap();
        // A lattice has exactly one minimal and one maximal element.
        if let Some(v) = (0..n).find(|&v| !leq[bottom * n + v]) {
            return Err(Error::NotALattice {
                a: bottom,
                b: v,
                which: "meet",
            });
        }
        if let Some(v) = (0..n).find(|&v| !leq[v * n + top]) {
            return Err(Error::NotALattice {
                a: top,
                b: v,
                which: "join",
            });
        }

        Ok(FiniteLattice {
            n,
            leq,
            covers: cov,
            upper,
            lower,
            meet,
            join,
            bottom,
            top,
        })
    }

    /// Builds a lattice from a full order relation given as a predicate.
    pub fn from_order(n: usize, leq: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let mut covers = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a != b
                    && leq(a, b)
                    && !(0..n).any(|c| c != a && c != b && leq(a, c) && leq(c, b))
                {
                    covers.push((a, b));
                }
            }
        }
        Self::from_covers(n, &covers)
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.n + b]
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.leq(a, b) || self.leq(b, a)
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.n + b]
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.n + b]
    }

    /// Join of a set; the empty join is the bottom.
    pub fn join_all(&self, it: impl IntoIterator<Item = usize>) -> usize {
        it.into_iter().fold(self.bottom, |acc, x| self.join(acc, x))
    }

    /// Meet of a set; the empty meet is the top.
    pub fn meet_all(&self, it: impl IntoIterator<Item = usize>) -> usize {
        it.into_iter().fold(self.top, |acc, x| self.meet(acc, x))
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    /// Cover pairs `(lower, upper)`, sorted.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn is_cover(&self, a: usize, b: usize) -> bool {
        self.covers.binary_search(&(a, b)).is_ok()
    }

    pub fn upper_covers(&self, a: usize) -> &[usize] {
        &self.upper[a]
    }

    pub fn lower_covers(&self, a: usize) -> &[usize] {
        &self.lower[a]
    }

    pub fn atoms(&self) -> &[usize] {
        &self.upper[self.bottom]
    }

    pub fn coatoms(&self) -> &[usize] {
        &self.lower[self.top]
    }

    /// Length of the longest chain from the bottom to `a`.
    pub fn ranks(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by_key(|&v| (0..self.n).filter(|&u| self.leq(u, v)).count());
        let mut rank = vec![0; self.n];
        for &v in &order {
            rank[v] = self.lower[v]
                .iter()
                .map(|&u| rank[u] + 1)
                .max()
                .unwrap_or(0);
        }
        rank
    }

    /// First triple `(a, b, c)` with `a <= b` and `a ∨ (c ∧ b) != (a ∨ c) ∧ b`.
    pub fn modular_violation(&self) -> Option<(usize, usize, usize)> {
        for a in 0..self.n {
            for b in 0..self.n {
                if !self.leq(a, b) || a == b {
                    continue;
                }
                for c in 0..self.n {
                    if self.join(a, self.meet(c, b)) != self.meet(self.join(a, c), b) {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    pub fn is_modular(&self) -> bool {
        self.modular_violation().is_none()
    }

    pub fn is_distributive(&self) -> bool {
        (0..self.n).all(|a| {
            (0..self.n).all(|b| {
                (0..self.n).all(|c| {
                    self.meet(a, self.join(b, c)) == self.join(self.meet(a, b), self.meet(a, c))
                })
            })
        })
    }

    pub fn complemented_profile(&self) -> ComplementedProfile {
        let n = self.n;
        let atoms = self.atoms();
        let coatoms = self.coatoms();
        let top_is_join_of_atoms = self.join_all(atoms.iter().copied()) == self.top;
        let bottom_is_meet_of_coatoms = self.meet_all(coatoms.iter().copied()) == self.bottom;
        let complemented = (0..n)
            .all(|a| (0..n).any(|b| self.join(a, b) == self.top && self.meet(a, b) == self.bottom));
        let relatively_complemented = (0..n).all(|u| {
            (0..n).filter(|&v| self.leq(u, v)).all(|v| {
                let inside: Vec<usize> = (0..n)
                    .filter(|&e| self.leq(u, e) && self.leq(e, v))
                    .collect();
                inside.iter().all(|&a| {
                    inside
                        .iter()
                        .any(|&b| self.join(a, b) == v && self.meet(a, b) == u)
                })
            })
        });
        let atomistic =
            (0..n).all(|a| self.join_all(atoms.iter().copied().filter(|&t| self.leq(t, a))) == a);
        let coatomistic =
            (0..n).all(|a| self.meet_all(coatoms.iter().copied().filter(|&t| self.leq(a, t))) == a);
        ComplementedProfile {
            top_is_join_of_atoms,
            bottom_is_meet_of_coatoms,
            complemented,
            relatively_complemented,
            atomistic,
            coatomistic,
        }
    }

    /// The sublattice `[lo, hi]` renumbered densely, with its embedding
    /// (local id to host id, ascending).
    pub fn interval(&self, lo: usize, hi: usize) -> Result<(FiniteLattice, Vec<usize>)> {
        for x in [lo, hi] {
            if x >= self.n {
                return Err(Error::IndexOutOfRange {
                    index: x,
                    size: self.n,
                });
            }
        }
        if !self.leq(lo, hi) {
            return Err(Error::NotComparable(lo, hi));
        }
        let emb = Interval::new(lo, hi).members(self);
        let mut local = vec![usize::MAX; self.n];
        for (i, &e) in emb.iter().enumerate() {
            local[e] = i;
        }
        let covers: Vec<(usize, usize)> = self
            .covers
            .iter()
            .filter(|&&(a, b)| local[a] != usize::MAX && local[b] != usize::MAX)
            .map(|&(a, b)| (local[a], local[b]))
            .collect();
        Ok((FiniteLattice::from_covers(emb.len(), &covers)?, emb))
    }

    /// The order-dual lattice on the same element ids.
    pub fn dual(&self) -> FiniteLattice {
        let n = self.n;
        let mut leq = vec![false; n * n];
        for a in 0..n {
            for b in 0..n {
                leq[a * n + b] = self.leq(b, a);
            }
        }
        let mut covers: Vec<(usize, usize)> = self.covers.iter().map(|&(a, b)| (b, a)).collect();
        covers.sort_unstable();
        FiniteLattice {
            n,
            leq,
            covers,
            upper: self.lower.clone(),
            lower: self.upper.clone(),
            meet: self.join.clone(),
            join: self.meet.clone(),
            bottom: self.top,
            top: self.bottom,
        }
    }

    /// Direct product; the pair `(i, j)` gets id `i * other.size() + j`.
    pub fn product(&self, other: &FiniteLattice) -> FiniteLattice {
        let m = other.n;
        let mut covers = Vec::new();
        for i in 0..self.n {
            for j in 0..m {
                for &i2 in &self.upper[i] {
                    covers.push((i * m + j, i2 * m + j));
                }
                for &j2 in &other.upper[j] {
                    covers.push((i * m + j, i * m + j2));
                }
            }
        }
        FiniteLattice::from_covers(self.n * m, &covers).expect("product of lattices is a lattice")
    }

    /// Renames element `e` to `perm[e]`.
    pub fn relabeled(&self, perm: &[usize]) -> Result<FiniteLattice> {
        if perm.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: perm.len(),
            });
        }
        let covers: Vec<(usize, usize)> = self
            .covers
            .iter()
            .map(|&(a, b)| (perm[a], perm[b]))
            .collect();
        FiniteLattice::from_covers(self.n, &covers)
    }
}

/// Picks the element of `cands` below all others; only the candidate with
/// the most elements above it can be.
fn least(cands: &[usize], above: &[usize], le: impl Fn(usize, usize) -> bool) -> Option<usize> {
    let &c = cands.iter().max_by_key(|&&c| above[c])?;
    cands.iter().all(|&d| le(c, d)).then_some(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(n: usize) -> FiniteLattice {
        let covers: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        FiniteLattice::from_covers(n, &covers).unwrap()
    }

    fn m3() -> FiniteLattice {
        FiniteLattice::from_covers(5, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)]).unwrap()
    }

    fn n5() -> FiniteLattice {
        // 0 < 1 < 2 < 4, 0 < 3 < 4
        FiniteLattice::from_covers(5, &[(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)]).unwrap()
    }

    #[test]
    fn chain_tables() {
        let c = chain(4);
        assert_eq!(c.bottom(), 0);
        assert_eq!(c.top(), 3);
        assert_eq!(c.join(1, 2), 2);
        assert_eq!(c.meet(1, 2), 1);
        assert!(c.is_modular());
        assert!(c.is_distributive());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            FiniteLattice::from_covers(0, &[]),
            Err(Error::EmptyLattice(_))
        ));
        assert!(matches!(
            FiniteLattice::from_covers(2, &[(0, 2)]),
            Err(Error::IndexOutOfRange { index: 2, .. })
        ));
        assert!(matches!(
            FiniteLattice::from_covers(2, &[(0, 1), (1, 0)]),
            Err(Error::CycleDetected(_))
        ));
        assert!(matches!(
            FiniteLattice::from_covers(3, &[(0, 1), (1, 2), (0, 2)]),
            Err(Error::NotCovers {
                lower: 0,
                upper: 2,
                via: 1
            })
        ));
        // two incomparable maximal elements
        assert!(matches!(
            FiniteLattice::from_covers(3, &[(0, 1), (0, 2)]),
            Err(Error::NotALattice { .. })
        ));
        // bowtie: 0,1 < 2,3 has no join of 0 and 1
        assert!(matches!(
            FiniteLattice::from_covers(
                6,
                &[
                    (4, 0),
                    (4, 1),
                    (0, 2),
                    (0, 3),
                    (1, 2),
                    (1, 3),
                    (2, 5),
                    (3, 5)
                ]
            ),
            Err(Error::NotALattice { .. })
        ));
    }

    #[test]
    fn n5_is_not_modular() {
        let l = n5();
        let (a, b, c) = l.modular_violation().unwrap();
        assert!(l.leq(a, b));
        assert_ne!(l.join(a, l.meet(c, b)), l.meet(l.join(a, c), b));
        assert!(m3().is_modular());
        assert!(!m3().is_distributive());
    }

    #[test]
    fn profiles() {
        assert!(m3().complemented_profile().all());
        assert!(chain(2).complemented_profile().all());
        assert!(chain(1).complemented_profile().all());
        let p = chain(3).complemented_profile();
        assert!(!p.complemented && !p.atomistic && !p.top_is_join_of_atoms);
        // N5 is complemented but not relatively complemented
        let p = n5().complemented_profile();
        assert!(p.complemented);
        assert!(!p.relatively_complemented);
    }

    #[test]
    fn interval_and_dual() {
        let b = chain(2).product(&chain(2)).product(&chain(2));
        let (iv, emb) = b.interval(1, 7).unwrap();
        assert_eq!(iv.size(), 4);
        assert_eq!(emb, vec![1, 3, 5, 7]);
        let d = m3().dual();
        assert_eq!(d.bottom(), 4);
        assert_eq!(d.join(1, 2), 0);
        assert!(matches!(
            chain(3).product(&chain(1)).interval(2, 1),
            Err(Error::NotComparable(2, 1))
        ));
    }
}
