use cesaro::criteria::{
    comparison_transfer, compactness_criterion, continuity_criterion, monotone_majorant_test,
    ratio_limsup_test, rw_membership, s1_estimate, sw1_membership, t0_estimate, uw_quantity,
    BracketKind, FailPath, VerdictKind, EXPONENT_TOLERANCE,
};
use cesaro::numerics::harmonic_range;
use cesaro::weights::{build_compact_minorant, build_failing_minorant, parse_weight, WeightSpec};

fn w(s: &str) -> WeightSpec {
    parse_weight(s).unwrap()
}

const H: u64 = 100_000;

#[test]
fn continuity_of_power_weights() {
    let p = w("poly:alpha=2");
    let r = continuity_criterion(&p, &p, H);
    assert_eq!(r.verdict.kind, VerdictKind::Holds, "{:?}", r.verdict);
    let m = r.verdict.certified_bound.unwrap();
    assert!((0.5..=2.0).contains(&m));
    assert!(r.verdict.empirical_sup >= 1.2020569 - 1e-6);
}

#[test]
fn continuity_failures() {
    let l1 = w("loggamma:gamma=1");
    let r = continuity_criterion(&l1, &l1, H);
    assert_eq!(r.verdict.kind, VerdictKind::Fails);
    assert_eq!(r.verdict.witness.unwrap().index, 1);
    let l2 = w("loggamma:gamma=2");
    let r = continuity_criterion(&l2, &l2, H);
    assert_eq!(r.verdict.kind, VerdictKind::Fails);
    assert_eq!(r.verdict.fail_path, Some(FailPath::Analytic));
    assert!(r.verdict.witness.unwrap().value >= ((H + 1) as f64).ln() - 1e-9);
}

#[test]
fn spike_is_continuous_but_not_in_c0() {
    let s = w("spike");
    assert_eq!(s.ln_w(1 << 20), 0.0);
    let r = continuity_criterion(&s, &s, H);
    assert!(r.verdict.is_holds(), "{:?}", r.verdict);
    let b = r.verdict.certified_bound.unwrap();
    assert!(b <= std::f64::consts::PI.powi(2) / 6.0 + 3.0);
}

#[test]
fn failing_minorant_fails_with_block_witness() {
    let v = w("poly:alpha=1");
    let f = build_failing_minorant(&v, 1_000_000).unwrap();
    let r = continuity_criterion(&f, &f, 1_000_000);
    assert_eq!(r.verdict.kind, VerdictKind::Fails, "{:?}", r.verdict);
    let wit = r.verdict.witness.unwrap();
    let j = match &f.family {
        cesaro::weights::Family::Blocks(t) => t.block_of(wit.index).unwrap(),
        _ => unreachable!(),
    };
    let end = match &f.family {
        cesaro::weights::Family::Blocks(t) => t.block_end(j),
        _ => unreachable!(),
    };
    assert!(harmonic_range(wit.index, end) > j as f64);
}

#[test]
fn compactness_table() {
    let holds = [
        "geom:r=0.5",
        "superfact",
        "factorial:a=1",
        "expbeta:beta=0.5",
        "explog:gamma=2",
        "compact(poly:alpha=1)",
        "compact(loggamma:gamma=1)",
    ];
    for id in holds {
        let x = w(id);
        let r = compactness_criterion(&x, &x, H);
        assert_eq!(r.verdict.kind, VerdictKind::Holds, "{id}: {:?}", r.verdict);
    }
    let fails = ["poly:alpha=0.5", "poly:alpha=1", "poly:alpha=2", "spike", "block313", "block413:alpha=2"];
    for id in fails {
        let x = w(id);
        let r = compactness_criterion(&x, &x, H);
        assert_eq!(r.verdict.kind, VerdictKind::Fails, "{id}: {:?}", r.verdict);
    }
}

#[test]
fn ratio_test_cases() {
    let g = w("geom:r=0.5,beta=3");
    let r = ratio_limsup_test(&g, H);
    assert!(r.verdict.is_holds());
    assert!((r.verdict.certified_bound.unwrap() - 0.5).abs() < 1e-3);
    let a = w("alternating");
    let r = ratio_limsup_test(&a, H);
    assert!(r.verdict.is_holds(), "{:?}", r.verdict);
    assert!((r.verdict.empirical_sup - 0.5).abs() < 1e-6);
    let e = w("expbeta:beta=0.5");
    assert_eq!(ratio_limsup_test(&e, H).verdict.kind, VerdictKind::Inconclusive);
}

#[test]
fn monotone_majorants() {
    assert!(monotone_majorant_test(&w("explog:gamma=2"), 3, H).is_holds());
    assert!(monotone_majorant_test(&w("poly:alpha=2"), 3, H).is_fails());
    let s = monotone_majorant_test(&w("superfact"), 5, H);
    assert!(s.is_holds());
    assert!(s.notes.iter().any(|n| n == "n(5) = 3"), "{:?}", s.notes);
}

#[test]
fn uw_values() {
    let g = uw_quantity(&w("geom:r=0.5"), H).verdict;
    assert!(g.is_holds());
    assert!((g.certified_bound.unwrap() - 2.0).abs() < 1e-9, "{g:?}");
    assert!((g.empirical_sup - 2.0).abs() < 1e-9);
    let b = uw_quantity(&w("block313"), H).verdict;
    assert!(b.is_holds() && b.certified_bound.unwrap() <= 2.0, "{b:?}");
    let f = uw_quantity(&w("block413:alpha=2"), H).verdict;
    assert!(f.is_fails(), "{f:?}");
    let wit = f.witness.unwrap();
    assert!((wit.index - 1).is_power_of_two());
    let p = uw_quantity(&w("poly:alpha=2"), H).verdict;
    assert!(p.is_holds() && p.certified_bound.unwrap() <= 4.0, "{p:?}");
    assert!(uw_quantity(&w("spike"), H).verdict.is_fails());
}

#[test]
fn rw_cases() {
    let p = w("poly:alpha=2");
    assert!(rw_membership(&p, 0.5, H).is_holds());
    assert!(rw_membership(&p, 1.0, H).is_fails());
    assert!(rw_membership(&w("block413:alpha=2"), 1.0, H).is_fails());
}

#[test]
fn exponent_brackets() {
    let tol = EXPONENT_TOLERANCE;
    let t = t0_estimate(&w("poly:alpha=2"), tol);
    assert!(t.is_resolved() && t.hi == 1.0 && t.hi - t.lo <= tol, "{t:?}");
    assert_eq!(t0_estimate(&w("superfact"), tol).kind, BracketKind::PlusInfinity);
    let t = t0_estimate(&w("loggamma:gamma=2"), tol);
    assert!(t.is_resolved() && t.lo == -1.0, "{t:?}");
    let s = s1_estimate(&w("poly:alpha=2"), tol);
    assert!(s.is_resolved() && s.hi == 2.0, "{s:?}");
    let s = s1_estimate(&w("spike"), tol);
    assert!(s.is_resolved() && s.hi == 1.0, "{s:?}");
    let s = s1_estimate(&w("block413:alpha=2"), tol);
    assert!(s.is_resolved() && s.lo == 1.0, "{s:?}");
    assert_eq!(s1_estimate(&w("superfact"), tol).kind, BracketKind::Empty);
    assert!(sw1_membership(&w("poly:alpha=2"), 2.0, H).is_holds());
    assert!(sw1_membership(&w("poly:alpha=2"), 1.9, H).is_fails());
}

#[test]
fn comparison_examples() {
    let v = w("polylog:alpha=2,beta=1");
    let p = w("poly:alpha=2");
    let r = comparison_transfer(&v, &p, H);
    assert_eq!(r.ratio_monotone_from, Some(1));
    assert!(r.v_continuity.is_holds());
    let wl = w("polylog:alpha=1,beta=2");
    let r = comparison_transfer(&p, &wl, H);
    assert!(r.ratio_monotone_from.is_some());
    assert!(r.w_compactness.is_fails());
    let r = comparison_transfer(&p, &p, H);
    assert_eq!(r.ratio_monotone_from, Some(1));
}

#[test]
fn compact_minorant_passes_ratio_test() {
    let u = build_compact_minorant(&w("poly:alpha=1"));
    assert!(ratio_limsup_test(&u, 1000).verdict.is_holds());
}
