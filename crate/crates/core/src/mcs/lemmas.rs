//! Exhaustive checks of consequences of the axioms on a concrete system.

use super::McSystem;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SystemLemma {
    /// `x <= z <= y`, `x γ y`: `F_x^y ⊆ F_x^z` and `I_x^y ⊆ I_z^y`.
    NestedFilters,
    /// `x γ y`: the ideal intersection at the join equals the ideal from the
    /// meet, and dually for filters.
    OverlapEquality,
    /// `z <=_γ x, y`: `F_z^x ∩ F_z^y = F_z^{x∨y}`, and dually.
    CommonBase,
    /// The extended map agrees with the connecting map on its filter.
    AdjointExtends,
    /// `phi_hat(a) <= b` iff `a <= psi_hat(b)`.
    Adjointness,
    /// `phi_hat` preserves joins and `psi_hat` preserves meets.
    AdjointPreservation,
    /// `phi_hat` preserves meets and `psi_hat` preserves joins.
    AdjointFullHomomorphism,
    /// Extended maps compose along chains `x <= y <= z`.
    AdjointCompose,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemLemmaFailure {
    pub lemma: SystemLemma,
    pub witness: Vec<usize>,
}

/// First counterexample per lemma; empty when all hold. Assumes `c` passes
/// MC2 through MC8.1.
pub fn check_system_lemmas(c: &McSystem) -> Vec<SystemLemmaFailure> {
    let mut out: Vec<SystemLemmaFailure> = Vec::new();
    let mut fail = |lemma: SystemLemma, witness: Vec<usize>| {
        if !out.iter().any(|f| f.lemma == lemma) {
            out.push(SystemLemmaFailure { lemma, witness });
        }
    };
    let s = c.skeleton();
    let n = s.size();
    let conn = |x: usize, y: usize| c.connection(x, y).expect("γ-pair has a connection");

    for x in 0..n {
        for y in 0..n {
            if c.leq_gamma(x, y) {
                for z in 0..n {
                    if s.leq(x, z) && s.leq(z, y) {
                        let f_ok = c.block(x).leq(conn(x, z).filter_min, conn(x, y).filter_min);
                        let i_ok = c.block(y).leq(conn(x, y).ideal_max, conn(z, y).ideal_max);
                        if !(f_ok && i_ok) {
                            fail(SystemLemma::NestedFilters, vec![x, z, y]);
                        }
                    }
                }
            }
            if c.related(x, y) {
                let (j, m) = (s.join(x, y), s.meet(x, y));
                let lj = c.block(j);
                let lm = c.block(m);
                let ideal_eq =
                    lj.meet(conn(x, j).ideal_max, conn(y, j).ideal_max) == conn(m, j).ideal_max;
                let filter_eq =
                    lm.join(conn(m, x).filter_min, conn(m, y).filter_min) == conn(m, j).filter_min;
                if !(ideal_eq && filter_eq) {
                    fail(SystemLemma::OverlapEquality, vec![x, y]);
                }
            }
        }
    }

    for z in 0..n {
        for x in 0..n {
            for y in 0..n {
                if c.leq_gamma(z, x) && c.leq_gamma(z, y) {
                    let j = s.join(x, y);
                    let ok = c.connection(z, j).is_some_and(|k| {
                        c.block(z)
                            .join(conn(z, x).filter_min, conn(z, y).filter_min)
                            == k.filter_min
                    });
                    if !ok {
                        fail(SystemLemma::CommonBase, vec![z, x, y]);
                    }
                }
                if c.leq_gamma(x, z) && c.leq_gamma(y, z) {
                    let m = s.meet(x, y);
                    let ok = c.connection(m, z).is_some_and(|k| {
                        c.block(z).meet(conn(x, z).ideal_max, conn(y, z).ideal_max) == k.ideal_max
                    });
                    if !ok {
                        fail(SystemLemma::CommonBase, vec![x, y, z]);
                    }
                }
            }
        }
    }

    let ph = |x: usize, y: usize, a: usize| c.phi_hat(x, y, a).expect("valid system");
    let ps = |x: usize, y: usize, b: usize| c.psi_hat(x, y, b).expect("valid system");
    for x in 0..n {
        for y in 0..n {
            if !s.leq(x, y) {
                continue;
            }
            let (lx, ly) = (c.block(x), c.block(y));
            if let Some(k) = c.connection(x, y) {
                for &(a, b) in k.pairs() {
                    if ph(x, y, a) != b || ps(x, y, b) != a {
                        fail(SystemLemma::AdjointExtends, vec![x, y, a]);
                    }
                }
            }
            for a in 0..lx.size() {
                for b in 0..ly.size() {
                    if ly.leq(ph(x, y, a), b) != lx.leq(a, ps(x, y, b)) {
                        fail(SystemLemma::Adjointness, vec![x, y, a, b]);
                    }
                }
                for a2 in 0..lx.size() {
                    if ph(x, y, lx.join(a, a2)) != ly.join(ph(x, y, a), ph(x, y, a2)) {
                        fail(SystemLemma::AdjointPreservation, vec![x, y, a, a2]);
                    }
                    if ph(x, y, lx.meet(a, a2)) != ly.meet(ph(x, y, a), ph(x, y, a2)) {
                        fail(SystemLemma::AdjointFullHomomorphism, vec![x, y, a, a2]);
                    }
                }
            }
            for b in 0..ly.size() {
                for b2 in 0..ly.size() {
                    if ps(x, y, ly.meet(b, b2)) != lx.meet(ps(x, y, b), ps(x, y, b2)) {
                        fail(SystemLemma::AdjointPreservation, vec![x, y, b, b2]);
                    }
                    if ps(x, y, ly.join(b, b2)) != lx.join(ps(x, y, b), ps(x, y, b2)) {
                        fail(SystemLemma::AdjointFullHomomorphism, vec![x, y, b, b2]);
                    }
                }
            }
            for z in 0..n {
                if !s.leq(y, z) {
                    continue;
                }
                for a in 0..lx.size() {
                    if ph(x, z, a) != ph(y, z, ph(x, y, a)) {
                        fail(SystemLemma::AdjointCompose, vec![x, y, z, a]);
                    }
                }
                for b in 0..c.block(z).size() {
                    if ps(x, z, b) != ps(x, y, ps(y, z, b)) {
                        fail(SystemLemma::AdjointCompose, vec![x, y, z, b]);
                    }
                }
            }
        }
    }
    out
}
