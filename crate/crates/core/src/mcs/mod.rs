//! Modular connected systems: a skeleton lattice with a tolerance, one
//! complemented modular block per skeleton element, and connecting
//! isomorphisms from filters of lower blocks onto ideals of upper blocks.

mod iso;
mod lemmas;

pub use iso::{mcs_isomorphic, verify_mcs_isomorphism, IsoClause, IsoViolation, McsIsomorphism};
pub use lemmas::{check_system_lemmas, SystemLemma, SystemLemmaFailure};

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::lattice::FiniteLattice;
use crate::tolerance::{Relation, Tolerance};

/// The isomorphism from the filter `[filter_min, 1]` of block `lower` onto
/// the ideal `[0, ideal_max]` of block `upper`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Connection {
    pub lower: usize,
    pub upper: usize,
    pub filter_min: usize,
    pub ideal_max: usize,
    /// `(a, phi(a))`, sorted by `a`.
    pairs: Vec<(usize, usize)>,
    phi: Vec<Option<usize>>,
    phi_inv: Vec<Option<usize>>,
}

impl Connection {
    pub fn new(
        lower: usize,
        upper: usize,
        filter_min: usize,
        ideal_max: usize,
        mut pairs: Vec<(usize, usize)>,
    ) -> Self {
        pairs.sort_unstable();
        Connection {
            lower,
            upper,
            filter_min,
            ideal_max,
            pairs,
            phi: Vec::new(),
            phi_inv: Vec::new(),
        }
    }

    pub fn identity(x: usize, l: &FiniteLattice) -> Self {
        Self::new(
            x,
            x,
            l.bottom(),
            l.top(),
            (0..l.size()).map(|a| (a, a)).collect(),
        )
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn phi(&self, a: usize) -> Option<usize> {
        self.phi.get(a).copied().flatten()
    }

    pub fn phi_inv(&self, b: usize) -> Option<usize> {
        self.phi_inv.get(b).copied().flatten()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct McSystem {
    skeleton: FiniteLattice,
    gamma: Tolerance,
    blocks: Vec<FiniteLattice>,
    connections: BTreeMap<(usize, usize), Connection>,
}

impl McSystem {
    /// Checks structure only: every index resolves, maps are functions, and
    /// connections exist for exactly the pairs `x <= y` with `x γ y`.
    pub fn new(
        skeleton: FiniteLattice,
        gamma: Tolerance,
        blocks: Vec<FiniteLattice>,
        connections: Vec<Connection>,
    ) -> Result<Self> {
        let n = skeleton.size();
        if gamma.size() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: gamma.size(),
            });
        }
        if blocks.len() != n {
            return Err(Error::MalformedSystem(format!(
                "{} blocks for {} skeleton elements",
                blocks.len(),
                n
            )));
        }
        let mut map = BTreeMap::new();
        for mut c in connections {
            let (x, y) = (c.lower, c.upper);
            if x >= n || y >= n {
                return Err(Error::MalformedSystem(format!(
                    "connection ({x}, {y}) names a missing block"
                )));
            }
            if !gamma.leq_gamma(&skeleton, x, y) {
                return Err(Error::MalformedSystem(format!(
                    "connection ({x}, {y}) but not {x} <=_γ {y}"
                )));
            }
            let (nx, ny) = (blocks[x].size(), blocks[y].size());
            if c.filter_min >= nx || c.ideal_max >= ny {
                return Err(Error::MalformedSystem(format!(
                    "connection ({x}, {y}): filter/ideal bound out of range"
                )));
            }
            c.phi = vec![None; nx];
            c.phi_inv = vec![None; ny];
            for &(a, b) in &c.pairs {
                if a >= nx || b >= ny {
                    return Err(Error::MalformedSystem(format!(
                        "connection ({x}, {y}): map {a} -> {b} out of range"
                    )));
                }
                if c.phi[a].is_some() {
                    return Err(Error::MalformedSystem(format!(
                        "connection ({x}, {y}): {a} mapped twice"
                    )));
                }
                c.phi[a] = Some(b);
                c.phi_inv[b].get_or_insert(a);
            }
            if map.insert((x, y), c).is_some() {
                return Err(Error::MalformedSystem(format!(
                    "duplicate connection ({x}, {y})"
                )));
            }
        }
        for x in 0..n {
            for y in 0..n {
                if gamma.leq_gamma(&skeleton, x, y) && !map.contains_key(&(x, y)) {
                    return Err(Error::MalformedSystem(format!(
                        "missing connection ({x}, {y})"
                    )));
                }
            }
        }
        Ok(McSystem {
            skeleton,
            gamma,
            blocks,
            connections: map,
        })
    }

    pub fn skeleton(&self) -> &FiniteLattice {
        &self.skeleton
    }

    pub fn gamma(&self) -> &Tolerance {
        &self.gamma
    }

    pub fn related(&self, x: usize, y: usize) -> bool {
        self.gamma.related(x, y)
    }

    pub fn leq_gamma(&self, x: usize, y: usize) -> bool {
        self.gamma.leq_gamma(&self.skeleton, x, y)
    }

    pub fn block(&self, x: usize) -> &FiniteLattice {
        &self.blocks[x]
    }

    pub fn blocks(&self) -> &[FiniteLattice] {
        &self.blocks
    }

    pub fn connection(&self, x: usize, y: usize) -> Option<&Connection> {
        self.connections.get(&(x, y))
    }

    pub fn connections(&self) -> impl Iterator<Item = &Connection> {
        self.connections.values()
    }

    fn conn(&self, x: usize, y: usize) -> &Connection {
        self.connections
            .get(&(x, y))
            .expect("connection exists for every γ-pair")
    }

    /// `a` lies in the filter of connection `(x, y)`.
    pub fn in_filter(&self, x: usize, y: usize, a: usize) -> bool {
        self.connection(x, y)
            .is_some_and(|c| self.blocks[x].leq(c.filter_min, a))
    }

    /// `b` lies in the ideal of connection `(x, y)`.
    pub fn in_ideal(&self, x: usize, y: usize, b: usize) -> bool {
        self.connection(x, y)
            .is_some_and(|c| self.blocks[y].leq(b, c.ideal_max))
    }

    pub fn phi(&self, x: usize, y: usize, a: usize) -> Option<usize> {
        self.connection(x, y)?.phi(a)
    }

    pub fn phi_inv(&self, x: usize, y: usize, b: usize) -> Option<usize> {
        self.connection(x, y)?.phi_inv(b)
    }

    /// Total extension of the connecting map to all of `L_x`: `phi(a ∨ Ẑ)` on
    /// related pairs, otherwise the composite through an upper cover of `x`
    /// below `y`. Acts as `a ↦ a ∨ 0_y` in the sum.
    pub fn phi_hat(&self, x: usize, y: usize, a: usize) -> Result<usize> {
        if !self.skeleton.leq(x, y) {
            return Err(Error::NotComparable(x, y));
        }
        match self.connection(x, y) {
            Some(c) => c.phi(self.blocks[x].join(a, c.filter_min)).ok_or_else(|| {
                Error::MalformedSystem(format!("connection ({x}, {y}) undefined on its filter"))
            }),
            None => {
                let z = self.step_up(x, y)?;
                self.phi_hat(z, y, self.phi_hat(x, z, a)?)
            }
        }
    }

    /// Total extension of the inverse connecting map to all of `L_y`:
    /// `phi⁻¹(b ∧ Ô)` on related pairs, otherwise the composite through a
    /// lower cover of `y` above `x`. Acts as `b ↦ b ∧ 1_x` in the sum.
    pub fn psi_hat(&self, x: usize, y: usize, b: usize) -> Result<usize> {
        if !self.skeleton.leq(x, y) {
            return Err(Error::NotComparable(x, y));
        }
        match self.connection(x, y) {
            Some(c) => c
                .phi_inv(self.blocks[y].meet(b, c.ideal_max))
                .ok_or_else(|| {
                    Error::MalformedSystem(format!("connection ({x}, {y}) not onto its ideal"))
                }),
            None => {
                let z = self.step_down(x, y)?;
                self.psi_hat(x, z, self.psi_hat(z, y, b)?)
            }
        }
    }

    fn step_up(&self, x: usize, y: usize) -> Result<usize> {
        if self.skeleton.is_cover(x, y) {
            return Err(Error::MalformedSystem(format!(
                "covering pair ({x}, {y}) has no connection"
            )));
        }
        Ok(*self
            .skeleton
            .upper_covers(x)
            .iter()
            .find(|&&z| self.skeleton.leq(z, y))
            .expect("x < y"))
    }

    fn step_down(&self, x: usize, y: usize) -> Result<usize> {
        if self.skeleton.is_cover(x, y) {
            return Err(Error::MalformedSystem(format!(
                "covering pair ({x}, {y}) has no connection"
            )));
        }
        Ok(*self
            .skeleton
            .lower_covers(y)
            .iter()
            .find(|&&z| self.skeleton.leq(x, z))
            .expect("x < y"))
    }

    /// Extension that is constant `0` of `L_y` on unrelated pairs. Agrees
    /// with [`phi_hat`](Self::phi_hat) on related pairs; on unrelated pairs it
    /// does not compose along chains.
    pub fn phi_hat_truncated(&self, x: usize, y: usize, a: usize) -> Result<usize> {
        match self.connection(x, y) {
            Some(_) => self.phi_hat(x, y, a),
            None if self.skeleton.leq(x, y) => Ok(self.blocks[y].bottom()),
            None => Err(Error::NotComparable(x, y)),
        }
    }

    /// Extension that is constant `1` of `L_x` on unrelated pairs.
    pub fn psi_hat_truncated(&self, x: usize, y: usize, b: usize) -> Result<usize> {
        match self.connection(x, y) {
            Some(_) => self.psi_hat(x, y, b),
            None if self.skeleton.leq(x, y) => Ok(self.blocks[x].top()),
            None => Err(Error::NotComparable(x, y)),
        }
    }

    /// Dual skeleton, dual blocks, inverted connections; element ids unchanged.
    pub fn dual(&self) -> McSystem {
        let connections = self
            .connections
            .values()
            .map(|c| {
                let pairs = c.pairs.iter().map(|&(a, b)| (b, a)).collect();
                Connection::new(c.upper, c.lower, c.ideal_max, c.filter_min, pairs)
            })
            .collect();
        McSystem::new(
            self.skeleton.dual(),
            self.gamma.clone(),
            self.blocks.iter().map(FiniteLattice::dual).collect(),
            connections,
        )
        .expect("dual of a well-formed system is well-formed")
    }

    /// Renames skeleton element `x` to `skel[x]` and element `a` of block `x`
    /// to `block_perms[x][a]`.
    pub fn relabeled(&self, skel: &[usize], block_perms: &[Vec<usize>]) -> Result<McSystem> {
        let n = self.skeleton.size();
        if skel.len() != n || block_perms.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: skel.len().min(block_perms.len()),
            });
        }
        let skeleton = self.skeleton.relabeled(skel)?;
        let mut rel = Relation::empty(n);
        for (a, b) in self.gamma.relation().pairs() {
            rel.set(skel[a], skel[b], true);
        }
        let gamma = Tolerance::new(&skeleton, rel)?;
        let mut blocks = vec![None; n];
        for x in 0..n {
            blocks[skel[x]] = Some(self.blocks[x].relabeled(&block_perms[x])?);
        }
        let connections = self
            .connections
            .values()
            .map(|c| {
                let (px, py) = (&block_perms[c.lower], &block_perms[c.upper]);
                Connection::new(
                    skel[c.lower],
                    skel[c.upper],
                    px[c.filter_min],
                    py[c.ideal_max],
                    c.pairs.iter().map(|&(a, b)| (px[a], py[b])).collect(),
                )
            })
            .collect();
        McSystem::new(
            skeleton,
            gamma,
            blocks.into_iter().map(Option::unwrap).collect(),
            connections,
        )
    }

    /// Checks MC2 through MC8.2. MC1 (the skeleton is a lattice) and the
    /// tolerance property of γ hold by construction.
    pub fn validate(&self) -> McsReport {
        Validator {
            c: self,
            out: Vec::new(),
        }
        .run()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axiom {
    Mc2,
    Mc3,
    Mc4,
    Mc5,
    Mc6,
    Mc7a,
    Mc7b,
    Mc81,
    Mc82,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::Mc2 => "MC2",
            Axiom::Mc3 => "MC3",
            Axiom::Mc4 => "MC4",
            Axiom::Mc5 => "MC5",
            Axiom::Mc6 => "MC6",
            Axiom::Mc7a => "MC7(a)",
            Axiom::Mc7b => "MC7(b)",
            Axiom::Mc81 => "MC8.1",
            Axiom::Mc82 => "MC8.2",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct McsViolation {
    pub axiom: Axiom,
    pub witness: Vec<usize>,
    pub message: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct McsReport {
    pub violations: Vec<McsViolation>,
}

impl McsReport {
    /// Violations other than monotony.
    pub fn errors(&self) -> impl Iterator<Item = &McsViolation> {
        self.violations.iter().filter(|v| v.axiom != Axiom::Mc82)
    }

    /// MC2 through MC8.1 hold.
    pub fn is_valid(&self) -> bool {
        self.errors().next().is_none()
    }

    /// MC8.2 holds.
    pub fn is_monotone(&self) -> bool {
        !self.violations.iter().any(|v| v.axiom == Axiom::Mc82)
    }

    pub fn failed(&self, axiom: Axiom) -> bool {
        self.violations.iter().any(|v| v.axiom == axiom)
    }
}

impl fmt::Display for McsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(f, "{} {:?}: {}", v.axiom, v.witness, v.message)?;
        }
        Ok(())
    }
}

struct Validator<'a> {
    c: &'a McSystem,
    out: Vec<McsViolation>,
}

impl Validator<'_> {
    fn fail(&mut self, axiom: Axiom, witness: Vec<usize>, message: impl Into<String>) {
        self.out.push(McsViolation {
            axiom,
            witness,
            message: message.into(),
        });
    }

    fn run(mut self) -> McsReport {
        let c = self.c;
        let s = &c.skeleton;
        let n = s.size();

        for x in 0..n {
            let b = &c.blocks[x];
            if let Some((p, q, r)) = b.modular_violation() {
                self.fail(Axiom::Mc2, vec![x, p, q, r], "block is not modular");
            }
            if !b.complemented_profile().complemented {
                self.fail(Axiom::Mc2, vec![x], "block is not complemented");
            }
        }

        let conns: Vec<&Connection> = c.connections.values().collect();
        for k in &conns {
            self.check_mc3(k);
            if k.lower == k.upper {
                self.check_mc4(k);
            }
        }

        // MC5
        for x in 0..n {
            for y in 0..n {
                if !c.leq_gamma(x, y) {
                    continue;
                }
                for z in 0..n {
                    if c.leq_gamma(y, z) {
                        let (i, f) = (c.conn(x, y).ideal_max, c.conn(y, z).filter_min);
                        if c.blocks[y].leq(f, i) && !c.related(x, z) {
                            self.fail(
                                Axiom::Mc5,
                                vec![x, y, z],
                                "ideal meets filter but x, z unrelated",
                            );
                        }
                    }
                }
            }
        }

        // MC6
        for x in 0..n {
            for y in 0..n {
                if !c.leq_gamma(x, y) {
                    continue;
                }
                for z in 0..n {
                    if s.leq(x, z) && s.leq(z, y) {
                        self.check_mc6(x, z, y);
                    }
                }
            }
        }

        // MC7
        for x in 0..n {
            for y in 0..n {
                if !c.related(x, y) {
                    continue;
                }
                let (j, m) = (s.join(x, y), s.meet(x, y));
                let lj = &c.blocks[j];
                let lhs = lj.meet(c.conn(x, j).ideal_max, c.conn(y, j).ideal_max);
                if !lj.leq(lhs, c.conn(m, j).ideal_max) {
                    self.fail(
                        Axiom::Mc7a,
                        vec![x, y],
                        "ideal intersection not inside ideal from the meet",
                    );
                }
                let lm = &c.blocks[m];
                let lhs = lm.join(c.conn(m, x).filter_min, c.conn(m, y).filter_min);
                if !lm.leq(c.conn(m, j).filter_min, lhs) {
                    self.fail(
                        Axiom::Mc7b,
                        vec![x, y],
                        "filter intersection not inside filter to the join",
                    );
                }
            }
        }

        // MC8
        for &(x, y) in s.covers() {
            match c.connection(x, y) {
                None => self.fail(Axiom::Mc81, vec![x, y], "covering pair is not γ-related"),
                Some(k) => {
                    if k.filter_min == c.blocks[x].bottom() || k.ideal_max == c.blocks[y].top() {
                        self.fail(
                            Axiom::Mc82,
                            vec![x, y],
                            "connection of a covering pair is onto a whole block",
                        );
                    }
                }
            }
        }

        McsReport {
            violations: self.out,
        }
    }

    fn check_mc3(&mut self, k: &Connection) {
        let (x, y) = (k.lower, k.upper);
        let (lx, ly) = (&self.c.blocks[x], &self.c.blocks[y]);
        for a in 0..lx.size() {
            if k.phi(a).is_some() != lx.leq(k.filter_min, a) {
                self.fail(
                    Axiom::Mc3,
                    vec![x, y, a],
                    "map domain differs from the filter",
                );
                return;
            }
        }
        let mut hit = vec![0usize; ly.size()];
        for &(_, b) in &k.pairs {
            hit[b] += 1;
        }
        for (b, &h) in hit.iter().enumerate() {
            let want = usize::from(ly.leq(b, k.ideal_max));
            if h != want {
                self.fail(
                    Axiom::Mc3,
                    vec![x, y, b],
                    "map is not a bijection onto the ideal",
                );
                return;
            }
        }
        for &(a, b) in &k.pairs {
            for &(a2, b2) in &k.pairs {
                if lx.leq(a, a2) != ly.leq(b, b2) {
                    self.fail(
                        Axiom::Mc3,
                        vec![x, y, a, a2],
                        "map does not preserve order both ways",
                    );
                    return;
                }
            }
        }
    }

    fn check_mc4(&mut self, k: &Connection) {
        let l = &self.c.blocks[k.lower];
        let ident = k.filter_min == l.bottom()
            && k.ideal_max == l.top()
            && (0..l.size()).all(|a| k.phi(a) == Some(a));
        if !ident {
            self.fail(
                Axiom::Mc4,
                vec![k.lower],
                "self-connection is not the identity",
            );
        }
    }

    fn check_mc6(&mut self, x: usize, z: usize, y: usize) {
        let c = self.c;
        let (xz, zy, xy) = (c.conn(x, z), c.conn(z, y), c.conn(x, y));
        let lz = &c.blocks[z];
        let in_s = |v: usize| lz.leq(zy.filter_min, v) && lz.leq(v, xz.ideal_max);
        for a in 0..c.blocks[x].size() {
            let via = xz.phi(a).filter(|&v| in_s(v));
            if c.blocks[x].leq(xy.filter_min, a) != via.is_some() {
                self.fail(
                    Axiom::Mc6,
                    vec![x, z, y, a],
                    "filter differs from the pulled-back overlap",
                );
                return;
            }
            if let Some(v) = via {
                if xy.phi(a) != zy.phi(v) {
                    self.fail(
                        Axiom::Mc6,
                        vec![x, z, y, a],
                        "map is not the composite through the middle block",
                    );
                    return;
                }
            }
        }
        for b in 0..c.blocks[y].size() {
            let via = zy.phi_inv(b).filter(|&v| in_s(v));
            if c.blocks[y].leq(b, xy.ideal_max) != via.is_some() {
                self.fail(
                    Axiom::Mc6,
                    vec![x, z, y, b],
                    "ideal differs from the pushed-forward overlap",
                );
                return;
            }
        }
    }
}
