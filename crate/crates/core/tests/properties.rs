use proptest::prelude::*;

use modlat::dissection::dissect;
use modlat::generators::{gen_lattice_limited, GenKind, GenSpec};
use modlat::gluing::glue;
use modlat::io::{parse_lattice, parse_mcs, serialize_lattice, serialize_mcs};
use modlat::iso::{is_isomorphism, lattice_isomorphism};
use modlat::lattice::FiniteLattice;
use modlat::mcs::{check_system_lemmas, mcs_isomorphic, verify_mcs_isomorphism, McSystem};
use modlat::tolerance::{check_tolerance_lemma, validate_tolerance, Relation, Tolerance};

const MAX: usize = 40;

fn modular_lattice() -> impl Strategy<Value = FiniteLattice> {
    let downsets = (2usize..=6, 10usize..=60, any::<u64>())
        .prop_map(|(p, pct, seed)| GenSpec::seeded(GenKind::DownsetRandomPoset, &[p, pct], seed));
    let stacked =
        prop::collection::vec(1usize..=4, 1..=3).prop_map(|ks| GenSpec::new(GenKind::Stacked, &ks));
    let product = (1usize..=4, 1usize..=4, 0usize..=3).prop_map(|(m, n, k)| {
        if k == 0 {
            GenSpec::new(GenKind::Product, &[m, n])
        } else {
            GenSpec::new(GenKind::Product, &[m, n, k])
        }
    });
    let divisor = (1usize..=400).prop_map(|n| GenSpec::new(GenKind::Divisor, &[n]));
    prop_oneof![downsets, stacked, product, divisor]
        .prop_filter_map("too large", |spec| gen_lattice_limited(&spec, MAX).ok())
}

fn with_permutation() -> impl Strategy<Value = (FiniteLattice, Vec<usize>)> {
    modular_lattice().prop_flat_map(|l| {
        let n = l.size();
        (Just(l), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
    })
}

fn shuffled(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

fn relabeled_system() -> impl Strategy<Value = (McSystem, Vec<usize>, Vec<Vec<usize>>)> {
    modular_lattice().prop_flat_map(|l| {
        let c = dissect(&l).unwrap().into_mcs();
        let sizes: Vec<usize> = c.blocks().iter().map(FiniteLattice::size).collect();
        let k = sizes.len();
        (
            Just(c),
            shuffled(k),
            sizes.into_iter().map(shuffled).collect::<Vec<_>>(),
        )
    })
}

/// Smallest relation containing `rel` closed under componentwise join and meet.
fn tolerance_closure(l: &FiniteLattice, mut rel: Relation) -> Relation {
    loop {
        let pairs: Vec<(usize, usize)> = rel.pairs().collect();
        let mut grew = false;
        for &(a, b) in &pairs {
            for &(c, d) in &pairs {
                for (p, q) in [(l.join(a, c), l.join(b, d)), (l.meet(a, c), l.meet(b, d))] {
                    if !rel.get(p, q) {
                        rel.set(p, q, true);
                        grew = true;
                    }
                }
            }
        }
        if !grew {
            return rel;
        }
    }
}

fn chain(n: usize) -> FiniteLattice {
    let covers: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    FiniteLattice::from_covers(n, &covers).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn lattice_text_round_trips(l in modular_lattice()) {
        let text = serialize_lattice(&l);
        let back = parse_lattice(&text).unwrap();
        prop_assert_eq!(serialize_lattice(&back), text);
        prop_assert_eq!(back, l);
    }

    #[test]
    fn system_text_round_trips(l in modular_lattice()) {
        let c = dissect(&l).unwrap().into_mcs();
        let text = serialize_mcs(&c);
        let (back, report) = parse_mcs(&text).unwrap();
        prop_assert!(report.is_valid() && report.is_monotone());
        prop_assert_eq!(serialize_mcs(&back), text);
        prop_assert_eq!(back, c);
    }

    #[test]
    fn relabeling_is_found_by_iso_search((l, perm) in with_permutation()) {
        let m = l.relabeled(&perm).unwrap();
        prop_assert!(is_isomorphism(&l, &m, &perm));
        let found = lattice_isomorphism(&l, &m).expect("relabeled copy is isomorphic");
        prop_assert!(is_isomorphism(&l, &m, &found.map));
    }

    /// Isomorphic lattices have isomorphic dissections.
    #[test]
    fn dissection_respects_isomorphism((l, perm) in with_permutation()) {
        let m = l.relabeled(&perm).unwrap();
        let (c1, c2) = (dissect(&l).unwrap().into_mcs(), dissect(&m).unwrap().into_mcs());
        let iso = mcs_isomorphic(&c1, &c2).expect("dissections are isomorphic");
        prop_assert!(verify_mcs_isomorphism(&c1, &c2, &iso).is_empty());
    }

    /// Relabeling a system relabels its sum along `π_x(a) ↦ π'_{x'}(a')`.
    #[test]
    fn gluing_respects_isomorphism((c, skel, perms) in relabeled_system()) {
        let d = c.relabeled(&skel, &perms).unwrap();
        prop_assert!(d.validate().is_valid());
        let (g1, g2) = (glue(&c).unwrap(), glue(&d).unwrap());
        let induced: Vec<usize> = (0..g1.lattice().size())
            .map(|e| {
                let p = g1.representative(e);
                g2.pi(skel[p.block], perms[p.block][p.value])
            })
            .collect();
        prop_assert!(is_isomorphism(g1.lattice(), g2.lattice(), &induced));
    }

    #[test]
    fn extended_maps_obey_their_laws(l in modular_lattice()) {
        let c = dissect(&l).unwrap().into_mcs();
        prop_assert_eq!(check_system_lemmas(&c), vec![]);
    }

    #[test]
    fn dual_system_is_valid_and_involutive(l in modular_lattice()) {
        let c = dissect(&l).unwrap().into_mcs();
        let d = c.dual();
        prop_assert!(d.validate().is_valid());
        prop_assert!(d.validate().is_monotone());
        prop_assert_eq!(&d.dual(), &c);
        let (g, gd) = (glue(&c).unwrap(), glue(&d).unwrap());
        prop_assert!(lattice_isomorphism(&g.lattice().dual(), gd.lattice()).is_some());
    }

    /// Componentwise bounded distance on a product of chains is a tolerance.
    #[test]
    fn distance_tolerances_satisfy_the_lemma(m in 1usize..=5, n in 1usize..=5, km in 0usize..=3, kn in 0usize..=3) {
        let l = chain(m).product(&chain(n));
        let rel = Relation::from_fn(m * n, |a, b| {
            (a / n).abs_diff(b / n) <= km && (a % n).abs_diff(b % n) <= kn
        });
        prop_assert!(Tolerance::new(&l, rel.clone()).is_ok());
        prop_assert_eq!(check_tolerance_lemma(&l, &rel), vec![]);
    }

    /// The tolerance generated by random pairs satisfies the lemma.
    #[test]
    fn generated_tolerances_satisfy_the_lemma(l in modular_lattice(), raw in prop::collection::vec((0usize..64, 0usize..64), 0..4)) {
        let n = l.size();
        let pairs: Vec<(usize, usize)> = raw.iter().map(|&(a, b)| (a % n, b % n)).collect();
        let rel = tolerance_closure(&l, Relation::symmetric_from_pairs(n, &pairs).unwrap());
        prop_assert!(validate_tolerance(&l, &rel).unwrap().is_valid());
        prop_assert_eq!(check_tolerance_lemma(&l, &rel), vec![]);
    }
}
