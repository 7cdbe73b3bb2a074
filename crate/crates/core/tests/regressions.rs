use modlat::dissection::{dissect, lower_star, upper_star};
use modlat::generators::{chain, diamond, nonmonotone_example, stacked};
use modlat::gluing::{glue, TaggedElement};
use modlat::io::export_dot;
use modlat::iso::lattice_isomorphism;
use modlat::mcs::{mcs_isomorphic, verify_mcs_isomorphism, Axiom, IsoClause, McsIsomorphism};
use modlat::roundtrip::dissection_of_glue;
use modlat::Error;

#[test]
fn star_maps_fail_adjointness_on_three_by_two() {
    // (i, j) has id 2i + j
    let l = chain(3).product(&chain(2));
    let (x, y) = (1, 5);
    assert_eq!(lower_star(&l, x), 0);
    assert_eq!(lower_star(&l, y), 2);
    assert_eq!(upper_star(&l, x), 3);
    assert!(l.leq(lower_star(&l, x), y));
    assert!(l.leq(upper_star(&l, x), y));
    assert!(!l.leq(x, lower_star(&l, y)));
}

#[test]
fn chains_dissect_into_two_element_blocks() {
    for n in 2..=10 {
        let l = chain(n);
        let d = dissect(&l).unwrap();
        assert_eq!(d.blocks().len(), n - 1);
        assert!(d.mcs().blocks().iter().all(|b| b.size() == 2));
        assert!(lattice_isomorphism(d.skeleton(), &chain(n - 1)).is_some());
    }
}

#[test]
fn overlap_order_is_not_transitive() {
    let c = dissect(&chain(4)).unwrap().into_mcs();
    assert!(c.leq_gamma(0, 1) && c.leq_gamma(1, 2));
    assert!(!c.leq_gamma(0, 2));
}

#[test]
fn stacked_diamonds_share_one_element() {
    let l = stacked(&[3, 3]);
    assert_eq!(l.size(), 9);
    let d = dissect(&l).unwrap();
    assert_eq!(d.blocks().len(), 2);
    let (a, b) = (d.block(0), d.block(1));
    assert_eq!(a.hi, b.lo);
    assert!(lattice_isomorphism(d.mcs().block(0), &diamond(3)).is_some());
    let dot = export_dot(&l, Some(&d));
    assert_eq!(dot.matches("subgraph cluster_").count(), 2);
    assert_eq!(dot.matches("peripheries=2").count(), 1);

    let g = glue(d.mcs()).unwrap();
    // the top of the lower block is the bottom of the upper one
    let (one0, zero1) = (
        TaggedElement::new(0, d.mcs().block(0).top()),
        TaggedElement::new(1, 0),
    );
    assert_eq!(g.class_of(one0), g.class_of(zero1));
    assert!(g.leq_closed_form(one0, zero1) && g.leq_closed_form(zero1, one0));
}

#[test]
fn nonmonotone_system_collapses_under_round_trip() {
    let c = nonmonotone_example();
    let report = c.validate();
    assert!(report.is_valid());
    assert!(report.failed(Axiom::Mc82));
    let g = glue(&c).unwrap();
    assert!(lattice_isomorphism(g.lattice(), &diamond(3)).is_some());
    let back = dissect(g.lattice()).unwrap().into_mcs();
    assert_eq!(back.skeleton().size(), 1);
    assert!(mcs_isomorphic(&back, &c).is_none());
    assert!(matches!(dissection_of_glue(&c), Err(Error::NotMonotone)));
    assert!(c.dual().validate().failed(Axiom::Mc82));
}

#[test]
fn dual_of_dual_is_identity() {
    let c = dissect(&stacked(&[2, 3, 1])).unwrap().into_mcs();
    assert_eq!(c.dual().dual(), c);
    assert!(c.dual().validate().is_valid());
}

#[test]
fn corrupted_witness_is_rejected() {
    // chain(2) × chain(3): two square blocks overlapping in a 2-chain
    let c = dissect(&chain(2).product(&chain(3))).unwrap().into_mcs();
    let good = McsIsomorphism::identity(&c);
    assert!(verify_mcs_isomorphism(&c, &c, &good).is_empty());

    // swap the two atoms of block 0; one of them lies in the shared filter
    let b0 = c.block(0);
    let atoms = b0.atoms().to_vec();
    let mut bad = good.clone();
    bad.block_maps[0].swap(atoms[0], atoms[1]);
    let v = verify_mcs_isomorphism(&c, &c, &bad);
    assert!(
        v.iter()
            .any(|v| matches!(v.clause, IsoClause::Filter | IsoClause::Commute)),
        "{v:?}"
    );

    // swapping top and bottom breaks the block order
    let mut bad = good;
    bad.block_maps[1].swap(c.block(1).bottom(), c.block(1).top());
    let v = verify_mcs_isomorphism(&c, &c, &bad);
    assert!(v.iter().any(|v| v.clause == IsoClause::BlockOrder));
}

/// chain(2) × chain(4) has blocks 0, 1, 2 with 0 and 2 unrelated. Element
/// (i, j) has host id 4i + j.
mod unrelated_blocks {
    use super::*;

    fn setup() -> modlat::mcs::McSystem {
        dissect(&chain(2).product(&chain(4))).unwrap().into_mcs()
    }

    #[test]
    fn truncated_extension_is_constant() {
        let c = setup();
        assert!(!c.related(0, 2));
        for a in 0..c.block(0).size() {
            assert_eq!(c.phi_hat_truncated(0, 2, a).unwrap(), c.block(2).bottom());
        }
        for b in 0..c.block(2).size() {
            assert_eq!(c.psi_hat_truncated(0, 2, b).unwrap(), c.block(0).top());
        }
    }

    #[test]
    fn truncated_extension_misorders_the_sum() {
        let l = chain(2).product(&chain(4));
        let d = dissect(&l).unwrap();
        let c = d.mcs();
        // p = (1,0) in block 0, q = (0,2) in block 2, and p is not below q
        let p = TaggedElement::new(0, d.local_id(0, 4).unwrap());
        let q = TaggedElement::new(2, d.local_id(2, 2).unwrap());
        assert!(!l.leq(4, 2));
        let truncated = c
            .block(2)
            .leq(c.phi_hat_truncated(0, 2, p.value).unwrap(), q.value);
        assert!(truncated, "truncated map claims p <= q");
        let g = glue(c).unwrap();
        assert!(!g.leq_closed_form(p, q));
        assert!(!g.lattice().leq(g.class_of(p), g.class_of(q)));
        // the composite acts as a ↦ a ∨ 0_y: (1,0) ∨ (0,2) = (1,2)
        assert_eq!(d.embed(2, c.phi_hat(0, 2, p.value).unwrap()), 6);
    }

    #[test]
    fn truncated_extension_does_not_compose() {
        let c = setup();
        assert!(c.related(0, 1) && c.related(1, 2));
        let breaks = (0..c.block(0).size()).filter(|&a| {
            let two_steps = c.phi_hat(1, 2, c.phi_hat(0, 1, a).unwrap()).unwrap();
            assert_eq!(c.phi_hat(0, 2, a).unwrap(), two_steps);
            c.phi_hat_truncated(0, 2, a).unwrap() != two_steps
        });
        assert!(breaks.count() > 0);
    }
}

#[test]
fn extended_maps_reject_unordered_pairs() {
    let c = dissect(&chain(2).product(&chain(3))).unwrap().into_mcs();
    assert!(matches!(
        c.phi_hat(1, 0, 0),
        Err(Error::NotComparable(1, 0))
    ));
    assert!(matches!(
        c.psi_hat_truncated(1, 0, 0),
        Err(Error::NotComparable(1, 0))
    ));
}
