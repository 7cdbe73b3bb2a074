//! Deterministic and seeded families of finite modular lattices, and the
//! test corpus built from them.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dissection::dissect;
use crate::error::{Error, Result};
use crate::lattice::FiniteLattice;
use crate::mcs::{Connection, McSystem};
use crate::tolerance::{Relation, Tolerance};

pub const DEFAULT_MAX_SIZE: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GenKind {
    Chain,
    Boolean,
    Diamond,
    Product,
    Divisor,
    DownsetRandomPoset,
    Subspace,
    Stacked,
    NonmonotoneExample,
}

impl GenKind {
    pub const ALL: [GenKind; 9] = [
        GenKind::Chain,
        GenKind::Boolean,
        GenKind::Diamond,
        GenKind::Product,
        GenKind::Divisor,
        GenKind::DownsetRandomPoset,
        GenKind::Subspace,
        GenKind::Stacked,
        GenKind::NonmonotoneExample,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GenKind::Chain => "chain",
            GenKind::Boolean => "boolean",
            GenKind::Diamond => "diamond",
            GenKind::Product => "product",
            GenKind::Divisor => "divisor",
            GenKind::DownsetRandomPoset => "downset_random_poset",
            GenKind::Subspace => "subspace",
            GenKind::Stacked => "stacked",
            GenKind::NonmonotoneExample => "nonmonotone_example",
        }
    }
}

impl FromStr for GenKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GenKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnknownKind(s.to_string()))
    }
}

/// Parameters per kind:
/// - `chain n`: n elements.
/// - `boolean k`: subsets of a k-set.
/// - `diamond k`: bottom, k atoms, top.
/// - `product m n [k]`: chain(m) × chain(n), times diamond(k) if given.
/// - `divisor n`: divisors of n under divisibility.
/// - `downset_random_poset p [percent]`: downsets of a random poset on p
///   points, each pair `i < j` ordered with the given probability (default 30).
/// - `subspace q d`: subspaces of the d-dimensional space over the field of
///   prime order q.
/// - `stacked k1 k2 ...`: diamonds stacked vertically, top of one identified
///   with bottom of the next.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenSpec {
    pub kind: GenKind,
    pub params: Vec<usize>,
    pub seed: Option<u64>,
}

impl GenSpec {
    pub fn new(kind: GenKind, params: &[usize]) -> Self {
        GenSpec {
            kind,
            params: params.to_vec(),
            seed: None,
        }
    }

    pub fn seeded(kind: GenKind, params: &[usize], seed: u64) -> Self {
        GenSpec {
            kind,
            params: params.to_vec(),
            seed: Some(seed),
        }
    }
}

impl fmt::Display for GenSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind.name())?;
        for p in &self.params {
            write!(f, " {p}")?;
        }
        if let Some(s) = self.seed {
            write!(f, " seed={s}")?;
        }
        Ok(())
    }
}

pub fn gen_lattice(spec: &GenSpec) -> Result<FiniteLattice> {
    gen_lattice_limited(spec, DEFAULT_MAX_SIZE)
}

pub fn gen_lattice_limited(spec: &GenSpec, max_size: usize) -> Result<FiniteLattice> {
    let p = &spec.params;
    let bad = || Error::UnknownKind(format!("bad parameters for {spec}"));
    let check = |size: usize| {
        if size > max_size {
            Err(Error::TooLarge {
                size,
                limit: max_size,
            })
        } else {
            Ok(())
        }
    };
    let l = match (spec.kind, p.as_slice()) {
        (GenKind::Chain, &[n]) if n >= 1 => {
            check(n)?;
            chain(n)
        }
        (GenKind::Boolean, &[k]) => {
            check(if k >= 32 { usize::MAX } else { 1usize << k })?;
            boolean(k)
        }
        (GenKind::Diamond, &[k]) if k >= 1 => {
            check(k + 2)?;
            diamond(k)
        }
        (GenKind::Product, &[m, n]) if m >= 1 && n >= 1 => {
            check(m.saturating_mul(n))?;
            chain(m).product(&chain(n))
        }
        (GenKind::Product, &[m, n, k]) if m >= 1 && n >= 1 && k >= 1 => {
            check(m.saturating_mul(n).saturating_mul(k + 2))?;
            chain(m).product(&chain(n)).product(&diamond(k))
        }
        (GenKind::Divisor, &[n]) if n >= 1 => {
            check((1..=n).filter(|&d| n.is_multiple_of(d)).count())?;
            divisor(n)
        }
        (GenKind::DownsetRandomPoset, &[pts]) => {
            random_downsets(pts, 30, spec.seed.unwrap_or(0), max_size)?
        }
        (GenKind::DownsetRandomPoset, &[pts, pct]) if pct <= 100 => {
            random_downsets(pts, pct, spec.seed.unwrap_or(0), max_size)?
        }
        (GenKind::Subspace, &[q, d]) if is_prime(q) => subspace(q, d, max_size)?,
        (GenKind::Stacked, ks) if !ks.is_empty() && ks.iter().all(|&k| k >= 1) => {
            check(1 + ks.iter().map(|k| k + 1).sum::<usize>())?;
            stacked(ks)
        }
        (GenKind::NonmonotoneExample, _) => {
            return Err(Error::UnknownKind(
                "nonmonotone_example generates a system, not a lattice".into(),
            ))
        }
        _ => return Err(bad()),
    };
    Ok(l)
}

/// Systems: the dissection of the generated lattice, or the hand-built
/// non-monotone example.
pub fn gen_mcs(spec: &GenSpec) -> Result<McSystem> {
    gen_mcs_limited(spec, DEFAULT_MAX_SIZE)
}

pub fn gen_mcs_limited(spec: &GenSpec, max_size: usize) -> Result<McSystem> {
    if spec.kind == GenKind::NonmonotoneExample {
        return Ok(nonmonotone_example());
    }
    let l = gen_lattice_limited(spec, max_size)?;
    Ok(dissect(&l)?.into_mcs())
}

pub fn chain(n: usize) -> FiniteLattice {
    let covers: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    FiniteLattice::from_covers(n, &covers).expect("chain")
}

/// Element ids are the subset bitmasks.
pub fn boolean(k: usize) -> FiniteLattice {
    let n = 1usize << k;
    let mut covers = Vec::new();
    for s in 0..n {
        for b in 0..k {
            if s & (1 << b) == 0 {
                covers.push((s, s | (1 << b)));
            }
        }
    }
    FiniteLattice::from_covers(n, &covers).expect("boolean lattice")
}

/// Bottom 0, atoms `1..=k`, top `k + 1`.
pub fn diamond(k: usize) -> FiniteLattice {
    let mut covers = Vec::new();
    for a in 1..=k {
        covers.push((0, a));
        covers.push((a, k + 1));
    }
    FiniteLattice::from_covers(k + 2, &covers).expect("diamond")
}

/// Divisors of `n` in increasing order; covers are prime quotients.
pub fn divisor(n: usize) -> FiniteLattice {
    let ds: Vec<usize> = (1..=n).filter(|&d| n.is_multiple_of(d)).collect();
    let mut covers = Vec::new();
    for (i, &a) in ds.iter().enumerate() {
        for (j, &b) in ds.iter().enumerate() {
            if b % a == 0 && is_prime(b / a) {
                covers.push((i, j));
            }
        }
    }
    FiniteLattice::from_covers(ds.len(), &covers).expect("divisor lattice")
}

pub fn stacked(ks: &[usize]) -> FiniteLattice {
    let mut covers = Vec::new();
    let mut base = 0;
    for &k in ks {
        let top = base + k + 1;
        for a in base + 1..=base + k {
            covers.push((base, a));
            covers.push((a, top));
        }
        base = top;
    }
    FiniteLattice::from_covers(base + 1, &covers).expect("stacked diamonds")
}

/// Downsets of a random poset on `points` points, ordered by inclusion.
pub fn random_downsets(
    points: usize,
    percent: usize,
    seed: u64,
    max_size: usize,
) -> Result<FiniteLattice> {
    if points > 63 {
        return Err(Error::TooLarge {
            size: usize::MAX,
            limit: max_size,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // below[j] = points required below j
    let mut below = vec![0u64; points];
    for (j, bits) in below.iter_mut().enumerate() {
        for i in 0..j {
            if rng.random_range(0..100) < percent {
                *bits |= 1 << i;
            }
        }
    }
    let elems = closed_sets(points, max_size, |set, e| below[e] & !set == 0)?;
    Ok(inclusion_lattice(&elems))
}

/// Subspaces of `F_q^d`, as sets of vectors, ordered by inclusion.
pub fn subspace(q: usize, d: usize, max_size: usize) -> Result<FiniteLattice> {
    let nv = q
        .checked_pow(d as u32)
        .filter(|&v| v <= 64)
        .ok_or(Error::TooLarge {
            size: usize::MAX,
            limit: max_size,
        })?;
    let add = |u: usize, v: usize| {
        let (mut u, mut v, mut out, mut place) = (u, v, 0, 1);
        for _ in 0..d {
            out += ((u % q + v % q) % q) * place;
            u /= q;
            v /= q;
            place *= q;
        }
        out
    };
    let span_with = |set: u64, v: usize| {
        let mut s = set | (1u64 << v);
        loop {
            let mut next = s;
            for a in 0..nv {
                for b in 0..nv {
                    if s >> a & 1 == 1 && s >> b & 1 == 1 {
                        next |= 1 << add(a, b);
                    }
                }
            }
            if next == s {
                return s;
            }
            s = next;
        }
    };
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::from([1u64]);
    seen.insert(1u64);
    while let Some(s) = queue.pop_front() {
        for v in 0..nv {
            if s >> v & 1 == 0 {
                let t = span_with(s, v);
                if seen.insert(t) {
                    if seen.len() > max_size {
                        return Err(Error::TooLarge {
                            size: seen.len(),
                            limit: max_size,
                        });
                    }
                    queue.push_back(t);
                }
            }
        }
    }
    let elems: Vec<u64> = seen.into_iter().collect();
    Ok(inclusion_lattice(&elems))
}

/// All sets reachable from the empty set by adding one point at a time,
/// where `allowed(set, e)` says `e` may be added to `set`.
fn closed_sets(
    points: usize,
    max_size: usize,
    allowed: impl Fn(u64, usize) -> bool,
) -> Result<Vec<u64>> {
    let mut seen = BTreeSet::from([0u64]);
    let mut queue = VecDeque::from([0u64]);
    while let Some(s) = queue.pop_front() {
        for e in 0..points {
            if s >> e & 1 == 0 && allowed(s, e) && seen.insert(s | 1 << e) {
                if seen.len() > max_size {
                    return Err(Error::TooLarge {
                        size: seen.len(),
                        limit: max_size,
                    });
                }
                queue.push_back(s | 1 << e);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// Lattice of the given sets under inclusion, ids sorted by (size, mask).
fn inclusion_lattice(sets: &[u64]) -> FiniteLattice {
    let mut sets = sets.to_vec();
    sets.sort_by_key(|&s| (s.count_ones(), s));
    FiniteLattice::from_order(sets.len(), |a, b| sets[a] & !sets[b] == 0)
        .expect("inclusion lattice")
}

fn is_prime(n: usize) -> bool {
    n >= 2
        && (2..n)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
}

/// Skeleton a 2-chain; a 2-chain block glued entirely onto the ideal below
/// an atom of an M3 block. Satisfies every axiom except monotony.
pub fn nonmonotone_example() -> McSystem {
    let s = chain(2);
    let gamma = Tolerance::new(&s, Relation::full(2)).expect("full relation");
    let (l0, l1) = (chain(2), diamond(3));
    let connections = vec![
        Connection::identity(0, &l0),
        Connection::identity(1, &l1),
        Connection::new(0, 1, 0, 1, vec![(0, 0), (1, 1)]),
    ];
    McSystem::new(s, gamma, vec![l0, l1], connections).expect("well-formed")
}

/// The fixed test corpus: over a hundred modular lattices of 1 to 48
/// elements covering every lattice kind.
pub fn corpus() -> Vec<GenSpec> {
    use GenKind::*;
    let mut out = Vec::new();
    for n in 1..=12 {
        out.push(GenSpec::new(Chain, &[n]));
    }
    for k in 0..=5 {
        out.push(GenSpec::new(Boolean, &[k]));
    }
    for k in 1..=8 {
        out.push(GenSpec::new(Diamond, &[k]));
    }
    for m in 2..=6 {
        for n in m..=8 {
            if m * n <= 48 {
                out.push(GenSpec::new(Product, &[m, n]));
            }
        }
    }
    for p in [
        [2, 2, 2],
        [2, 2, 3],
        [2, 3, 2],
        [2, 2, 4],
        [2, 3, 3],
        [3, 3, 1],
        [2, 4, 3],
    ] {
        out.push(GenSpec::new(Product, &p));
    }
    for n in [
        1, 2, 6, 12, 18, 30, 36, 60, 72, 100, 210, 360, 420, 900, 1260,
    ] {
        out.push(GenSpec::new(Divisor, &[n]));
    }
    for seed in 0..30u64 {
        let points = 3 + (seed as usize % 4);
        let pct = [20, 35, 50][seed as usize % 3];
        out.push(GenSpec::seeded(DownsetRandomPoset, &[points, pct], seed));
    }
    for (q, d) in [
        (2, 0),
        (2, 1),
        (2, 2),
        (3, 2),
        (5, 2),
        (7, 2),
        (2, 3),
        (3, 3),
    ] {
        out.push(GenSpec::new(Subspace, &[q, d]));
    }
    for ks in [
        &[3, 3][..],
        &[2, 3],
        &[3, 2, 3],
        &[4, 4],
        &[2, 2, 2],
        &[3, 3, 3],
        &[1, 3],
        &[5, 1, 3],
        &[2, 1, 2],
        &[6, 6],
        &[3, 1, 1, 3],
    ] {
        out.push(GenSpec::new(Stacked, ks));
    }
    out
}

/// The corpus lattices, restricted to at most 48 elements.
pub fn corpus_lattices() -> Vec<(GenSpec, FiniteLattice)> {
    corpus()
        .into_iter()
        .filter_map(|s| gen_lattice_limited(&s, 48).ok().map(|l| (s, l)))
        .collect()
}
