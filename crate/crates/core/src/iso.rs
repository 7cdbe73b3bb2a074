//! Lattice isomorphism search by backtracking over rank-ordered elements.

use crate::lattice::FiniteLattice;

/// A bijection `map[a] = b` preserving and reflecting order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeIsomorphism {
    pub map: Vec<usize>,
    pub inverse: Vec<usize>,
}

impl LatticeIsomorphism {
    pub fn from_map(map: Vec<usize>) -> Self {
        let mut inverse = vec![usize::MAX; map.len()];
        for (a, &b) in map.iter().enumerate() {
            inverse[b] = a;
        }
        LatticeIsomorphism { map, inverse }
    }

    pub fn apply(&self, a: usize) -> usize {
        self.map[a]
    }
}

/// Whether `map` is an order isomorphism from `a` onto `b`.
pub fn is_isomorphism(a: &FiniteLattice, b: &FiniteLattice, map: &[usize]) -> bool {
    if a.size() != b.size() || map.len() != a.size() {
        return false;
    }
    let mut seen = vec![false; b.size()];
    for &t in map {
        if t >= b.size() || seen[t] {
            return false;
        }
        seen[t] = true;
    }
    (0..a.size()).all(|x| (0..a.size()).all(|y| a.leq(x, y) == b.leq(map[x], map[y])))
}

pub fn lattice_isomorphism(a: &FiniteLattice, b: &FiniteLattice) -> Option<LatticeIsomorphism> {
    let mut found = None;
    for_each_isomorphism(a, b, &vec![None; a.size()], &mut |m| {
        found = Some(m.to_vec());
        false
    });
    found.map(LatticeIsomorphism::from_map)
}

/// Calls `visit` on every isomorphism from `a` onto `b` that agrees with the
/// `Some` entries of `fixed`. Stops early once `visit` returns `false`.
pub fn for_each_isomorphism(
    a: &FiniteLattice,
    b: &FiniteLattice,
    fixed: &[Option<usize>],
    visit: &mut dyn FnMut(&[usize]) -> bool,
) {
    let n = a.size();
    if n != b.size() || a.covers().len() != b.covers().len() || fixed.len() != n {
        return;
    }
    let sig_a = signatures(a);
    let sig_b = signatures(b);
    let mut sa = sig_a.clone();
    let mut sb = sig_b.clone();
    sa.sort_unstable();
    sb.sort_unstable();
    if sa != sb {
        return;
    }
    let mut reserved = vec![false; n];
    for &t in fixed.iter().flatten() {
        if t >= n || reserved[t] {
            return;
        }
        reserved[t] = true;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (fixed[v].is_none(), sig_a[v].0, v));

    let mut st = Search {
        a,
        b,
        sig_a: &sig_a,
        sig_b: &sig_b,
        fixed,
        reserved: &reserved,
        order: &order,
        map: vec![usize::MAX; n],
        used: vec![false; n],
    };
    st.go(0, visit);
}

fn signatures(l: &FiniteLattice) -> Vec<(usize, usize, usize)> {
    let r = l.ranks();
    (0..l.size())
        .map(|v| (r[v], l.upper_covers(v).len(), l.lower_covers(v).len()))
        .collect()
}

struct Search<'s> {
    a: &'s FiniteLattice,
    b: &'s FiniteLattice,
    sig_a: &'s [(usize, usize, usize)],
    sig_b: &'s [(usize, usize, usize)],
    fixed: &'s [Option<usize>],
    reserved: &'s [bool],
    order: &'s [usize],
    map: Vec<usize>,
    used: Vec<bool>,
}

impl Search<'_> {
    /// Returns `false` once the visitor asked to stop.
    fn go(&mut self, depth: usize, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if depth == self.order.len() {
            return visit(&self.map);
        }
        let x = self.order[depth];
        let cands: Vec<usize> = match self.fixed[x] {
            Some(t) => vec![t],
            None => (0..self.b.size()).filter(|&t| !self.reserved[t]).collect(),
        };
        for t in cands {
            if self.used[t] || self.sig_a[x] != self.sig_b[t] || !self.consistent(depth, x, t) {
                continue;
            }
            self.map[x] = t;
            self.used[t] = true;
            let cont = self.go(depth + 1, visit);
            self.used[t] = false;
            self.map[x] = usize::MAX;
            if !cont {
                return false;
            }
        }
        true
    }

    fn consistent(&self, depth: usize, x: usize, t: usize) -> bool {
        self.order[..depth].iter().all(|&y| {
            let u = self.map[y];
            self.a.leq(x, y) == self.b.leq(t, u) && self.a.leq(y, x) == self.b.leq(u, t)
        })
    }
}
