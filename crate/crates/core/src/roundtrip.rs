//! The two round trips between lattices and systems, with their canonical
//! witnesses built explicitly and then verified exhaustively.

use crate::dissection::{dissect, Dissection};
use crate::error::{Error, Result};
use crate::gluing::{glue, GluedSum};
use crate::iso::{is_isomorphism, LatticeIsomorphism};
use crate::lattice::FiniteLattice;
use crate::mcs::{verify_mcs_isomorphism, McSystem, McsIsomorphism};

/// System to lattice to system. Block `x` goes to the block `Λ_x` of the
/// sum, element `a` of `L_x` to `π_x(a)`. Needs a monotone system.
pub fn dissection_of_glue(c: &McSystem) -> Result<McsIsomorphism> {
    let report = c.validate();
    if !report.is_valid() {
        return Err(Error::InvalidSystem(Box::new(report)));
    }
    if !report.is_monotone() {
        return Err(Error::NotMonotone);
    }
    let g = glue(c)?;
    let d = dissect(g.lattice())?;
    let k = c.skeleton().size();
    let mut skeleton_map = Vec::with_capacity(k);
    let mut block_maps = Vec::with_capacity(k);
    for x in 0..k {
        let lam = g.lambda(x);
        let b = d
            .block_with_min(lam.lo)
            .filter(|&b| d.block(b).hi == lam.hi)
            .ok_or_else(|| {
                Error::InternalTheoremViolation(format!(
                    "image of block {x} is not a block of the sum"
                ))
            })?;
        skeleton_map.push(b);
        let map: Option<Vec<usize>> = (0..c.block(x).size())
            .map(|a| d.local_id(b, g.pi(x, a)))
            .collect();
        block_maps.push(map.ok_or_else(|| {
            Error::InternalTheoremViolation(format!("block {x} leaves its image"))
        })?);
    }
    let iso = McsIsomorphism {
        skeleton_map,
        block_maps,
    };
    let bad = verify_mcs_isomorphism(c, d.mcs(), &iso);
    if !bad.is_empty() {
        return Err(Error::InternalTheoremViolation(format!(
            "round-trip witness fails: {:?}",
            bad[0]
        )));
    }
    Ok(iso)
}

/// Lattice to system to lattice. Element `a` goes to the class of
/// `(∇_a, a)`.
pub fn glue_of_dissection(l: &FiniteLattice) -> Result<LatticeIsomorphism> {
    let d = dissect(l)?;
    let g = glue(d.mcs())
        .map_err(|e| Error::InternalTheoremViolation(format!("dissection does not glue: {e}")))?;
    let chi = chi_map(&d, &g);
    if !is_isomorphism(l, g.lattice(), &chi) {
        return Err(Error::InternalTheoremViolation(
            "element map is not an order isomorphism".into(),
        ));
    }
    // (x, p) and (y, q) name the same sum element iff p = q in the host
    let k = d.blocks().len();
    for x in 0..k {
        for y in 0..k {
            for (a, &p) in d.embedding(x).iter().enumerate() {
                for (b, &q) in d.embedding(y).iter().enumerate() {
                    if (g.pi(x, a) == g.pi(y, b)) != (p == q) {
                        return Err(Error::InternalTheoremViolation(format!(
                            "tagged elements ({x}, {p}) and ({y}, {q}) disagree with the host"
                        )));
                    }
                }
            }
        }
    }
    Ok(LatticeIsomorphism::from_map(chi))
}

/// `a ↦ π_{∇_a}(a)`.
pub fn chi_map(d: &Dissection, g: &GluedSum) -> Vec<usize> {
    (0..d.host().size())
        .map(|a| {
            let x = d.nabla(a);
            g.pi(x, d.local_id(x, a).expect("a lies in its lowest block"))
        })
        .collect()
}

/// In a sum, the extended maps act as `c ↦ c ∨ 0_y` and `d ↦ d ∧ 1_x`.
pub fn check_conflation_sum(g: &GluedSum) -> Vec<(usize, usize, usize)> {
    let c = g.system();
    let s = c.skeleton();
    let l = g.lattice();
    let mut out = Vec::new();
    for x in 0..s.size() {
        for y in 0..s.size() {
            if !s.leq(x, y) {
                continue;
            }
            let (zero_y, one_x) = (g.lambda(y).lo, g.lambda(x).hi);
            for a in 0..c.block(x).size() {
                let up = c.phi_hat(x, y, a).expect("x <= y");
                if g.pi(y, up) != l.join(g.pi(x, a), zero_y) {
                    out.push((x, y, a));
                }
            }
            for b in 0..c.block(y).size() {
                let down = c.psi_hat(x, y, b).expect("x <= y");
                if g.pi(x, down) != l.meet(g.pi(y, b), one_x) {
                    out.push((x, y, b));
                }
            }
        }
    }
    out
}

/// In a dissection, connections are identities on block overlaps and the
/// extended maps act as `a ↦ a ∨ 0_y` and `b ↦ b ∧ 1_x` in the host.
pub fn check_conflation_host(d: &Dissection) -> Vec<(usize, usize, usize)> {
    let c = d.mcs();
    let s = c.skeleton();
    let l = d.host();
    let mut out = Vec::new();
    for k in c.connections() {
        for &(a, b) in k.pairs() {
            if d.embed(k.lower, a) != d.embed(k.upper, b) {
                out.push((k.lower, k.upper, a));
            }
        }
    }
    for x in 0..s.size() {
        for y in 0..s.size() {
            if !s.leq(x, y) {
                continue;
            }
            let (zero_y, one_x) = (d.block(y).lo, d.block(x).hi);
            for a in 0..c.block(x).size() {
                let up = c.phi_hat(x, y, a).expect("x <= y");
                if d.embed(y, up) != l.join(d.embed(x, a), zero_y) {
                    out.push((x, y, a));
                }
            }
            for b in 0..c.block(y).size() {
                let down = c.psi_hat(x, y, b).expect("x <= y");
                if d.embed(x, down) != l.meet(d.embed(y, b), one_x) {
                    out.push((x, y, b));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{boolean, chain, nonmonotone_example, stacked};

    #[test]
    fn lattice_round_trips() {
        for l in [boolean(3), chain(5), stacked(&[3, 3])] {
            let iso = glue_of_dissection(&l).unwrap();
            assert_eq!(iso.map.len(), l.size());
        }
    }

    #[test]
    fn system_round_trip() {
        let l = chain(4);
        let c = dissect(&l).unwrap().into_mcs();
        let iso = dissection_of_glue(&c).unwrap();
        assert_eq!(iso.skeleton_map, vec![0, 1, 2]);
    }

    #[test]
    fn nonmonotone_is_refused() {
        assert!(matches!(
            dissection_of_glue(&nonmonotone_example()),
            Err(Error::NotMonotone)
        ));
    }
}
