mod common;

use std::collections::BTreeSet;

use common::{abelian, br, free, free2_quintic, g, genus, heisenberg, n5, q};
use nilpotent_lie::cohomology::pairing_nondegenerate;
use nilpotent_lie::obstruction::{
    check, check_smooth, check_smooth_proper, presentation_from_cup, recovered_cup_tensor, verify_witness,
    weight_feasibility, CheckOptions, CupData, Mode, Witness, DEFAULT_DEPTH,
};
use nilpotent_lie::{Expr, LiePresentation, Limits};
use proptest::prelude::*;

fn corpus() -> Vec<(&'static str, LiePresentation)> {
    vec![
        ("heisenberg", heisenberg()),
        ("abelian", abelian()),
        ("free2", free(&["x", "y"], 4)),
        ("genus1", genus(1)),
        ("genus2", genus(2)),
        ("n5", n5()),
        ("free2_quintic", free2_quintic()),
    ]
}

#[test]
fn excluded_witnesses_reverify() {
    let full = CheckOptions { full_battery: true, ..Default::default() };
    for (name, pres) in corpus() {
        for mode in [Mode::Smooth, Mode::SmoothProper] {
            let v = check(&pres, mode, &full).unwrap();
            assert_eq!(v.is_excluded(), !v.witnesses.is_empty(), "{name}");
            for w in v.witnesses.iter().chain(&v.notes) {
                assert!(verify_witness(&pres, w, &Limits::default()).unwrap(), "{name} {mode}: {w:?}");
            }
        }
    }
}

#[test]
fn smooth_proper_is_stronger() {
    for (name, pres) in corpus() {
        let proper = check_smooth_proper(&pres).unwrap();
        let smooth = check_smooth(&pres).unwrap();
        if !smooth.is_excluded() {
            continue;
        }
        assert!(proper.is_excluded(), "{name}: smooth excluded but smooth-proper consistent");
        let high = smooth
            .witnesses
            .iter()
            .any(|w| matches!(w, Witness::RelationDegrees { offending, .. } if offending.iter().any(|&d| d > 4)));
        if high {
            assert!(proper.witnesses.iter().any(|w| matches!(w, Witness::RelationDegrees { .. })), "{name}");
        }
    }
}

#[test]
fn corpus_verdicts() {
    let expect = [
        ("heisenberg", true, false),
        ("abelian", false, false),
        ("free2", false, false),
        ("genus1", false, false),
        ("genus2", false, false),
        ("free2_quintic", true, true),
    ];
    let corpus = corpus();
    for (name, proper_excluded, smooth_excluded) in expect {
        let pres = &corpus.iter().find(|(n, _)| *n == name).unwrap().1;
        assert_eq!(check_smooth_proper(pres).unwrap().is_excluded(), proper_excluded, "{name}");
        assert_eq!(check_smooth(pres).unwrap().is_excluded(), smooth_excluded, "{name}");
    }
}

/// Relations built from a few random degree-2 and degree-3 brackets on three generators.
fn random_presentation() -> impl Strategy<Value = LiePresentation> {
    let atom = prop_oneof![Just("x"), Just("y"), Just("z")];
    let quad = (atom.clone(), atom.clone()).prop_map(|(a, b)| br(g(a), g(b)));
    let cubic = (atom.clone(), atom.clone(), atom).prop_map(|(a, b, c)| br(g(a), br(g(b), g(c))));
    let term = prop_oneof![quad, cubic];
    let rel = prop::collection::vec((-2i64..=2, term), 1..3)
        .prop_map(|ts| Expr::sum(ts.into_iter().map(|(c, e)| (q(c), e)).collect()));
    prop::collection::vec(rel, 0..3).prop_map(|rels| {
        let alg = nilpotent_lie::FreeLieAlgebra::with_names(&["x", "y", "z"], 3).unwrap();
        let rels: Vec<_> = rels.iter().map(|r| alg.rewrite(r).unwrap()).filter(|r| !r.is_zero()).collect();
        if rels.is_empty() {
            LiePresentation::free(alg)
        } else {
            LiePresentation::new(alg, rels).unwrap()
        }
    })
}

fn subset() -> impl Strategy<Value = BTreeSet<u32>> {
    prop::collection::btree_set(1u32..=4, 1..=2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn weight_feasibility_is_monotone(
        pres in random_presentation(),
        gens in subset(),
        rels in subset(),
        extra_gen in 1u32..=4,
        extra_rel in 1u32..=6,
    ) {
        let small = weight_feasibility(&pres, &gens, &rels).unwrap();
        let mut gens2 = gens.clone();
        gens2.insert(extra_gen);
        let mut rels2 = rels.clone();
        rels2.insert(extra_rel);
        let large = weight_feasibility(&pres, &gens2, &rels2).unwrap();
        prop_assert!(!small.is_feasible() || large.is_feasible());
    }
}

fn symplectic(genus: usize) -> CupData {
    let entries = (0..genus).map(|i| (2 * i, 2 * i + 1, 0, q(1)));
    CupData::from_entries(2 * genus, 1, None, entries).unwrap()
}

#[test]
fn cup_round_trip() {
    let mut cases = vec![symplectic(1), symplectic(2), symplectic(3)];
    // two independent classes in H² on four generators
    cases.push(CupData::from_entries(4, 2, None, [(0, 1, 0, q(1)), (2, 3, 1, q(1)), (0, 2, 1, q(2))]).unwrap());
    for data in cases {
        assert!(pairing_nondegenerate(&data).unwrap());
        assert_eq!(recovered_cup_tensor(&data, DEFAULT_DEPTH, &Limits::default()).unwrap(), data.tensor());
        let pres = presentation_from_cup(&data, DEFAULT_DEPTH).unwrap();
        assert!(nilpotent_lie::minimal_relation_degrees(&pres).unwrap().iter().all(|&d| d == 2));
    }
}

#[test]
fn degenerate_pairing_detected() {
    let data = CupData::from_entries(3, 1, None, [(0, 1, 0, q(1))]).unwrap();
    assert!(!pairing_nondegenerate(&data).unwrap());
}
