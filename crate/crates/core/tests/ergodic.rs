use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use cesaro::ergodic::*;
use cesaro::sections::{apply_power, unit_vector, Scalar};
use cesaro::weights::parse_weight;

type Q = BigRational;

fn fixture() -> Value {
    serde_json::from_str(include_str!("fixtures/ergodic.json")).unwrap()
}

fn geom() -> cesaro::weights::WeightSpec {
    parse_weight("geom:r=0.5").unwrap()
}

#[test]
fn geom_e1_converges_to_ones() {
    let f = fixture();
    let t = iterate_trace(&geom(), &Probe::Unit(1), 2000, 400, DEFAULT_BUDGET).unwrap();
    assert_eq!(t.limit_candidate, LimitCandidate::Constant(1.0));
    assert_eq!(t.first_below(1e-3), Some(f["m_star_e1"].as_u64().unwrap() as u32));
    let res: Vec<f64> = t.records.iter().map(|r| r.residual.unwrap()).collect();
    for pair in res[BURN_IN as usize - 1..40].windows(2) {
        assert!(pair[1] <= pair[0]);
    }
    assert!(t.tail_residual_bound.unwrap() < 1e-100);
    assert!(t.records.windows(2).all(|p| p[0].m < p[1].m));
}

#[test]
fn geom_e3_decays_under_kernel_bound() {
    let f = fixture();
    let w = geom();
    let t = iterate_trace(&w, &Probe::Unit(3), 60, 400, DEFAULT_BUDGET).unwrap();
    assert_eq!(t.limit_candidate, LimitCandidate::Zero);
    assert_eq!(t.first_below(1e-3), Some(f["m_star_e3"].as_u64().unwrap() as u32));
    let l1 = w.tail_bound(1, 1.0).unwrap();
    for r in &t.records {
        assert!(r.norm <= l1 * kernel_sup(r.m) / 2.0 + 1e-15, "{r:?}");
    }
    for p in t.records[2..40].windows(2) {
        assert!(p[1].norm <= p[0].norm);
    }
}

#[test]
fn coordinate_domination() {
    for r in 2..=6usize {
        let x = unit_vector::<f64>(r, 200);
        for m in 1..=12u32 {
            let y = apply_power(&x, m, 200);
            let bound = kernel_sup(m) / (r - 1) as f64;
            assert!(y.iter().all(|v| v.abs() <= bound + 1e-15), "r={r} m={m}");
        }
    }
}

#[test]
fn kernel_sup_decreases() {
    assert_eq!(kernel_sup(1), 1.0);
    assert!((kernel_sup(2) - (-1f64).exp()).abs() < 1e-15);
    let mut prev = 1.0;
    for m in 2..200 {
        let a = kernel_sup(m);
        assert!(a < prev && a > 0.0);
        prev = a;
        let k = (m - 1) as f64;
        let t = (-k).exp();
        let direct = t * k.powf(k) / (1..m).map(|j| j as f64).product::<f64>();
        if m < 60 {
            assert!((a - direct).abs() <= 1e-12 * direct);
        }
    }
}

#[test]
fn ones_prefix_is_fixed() {
    let w = geom();
    let t = iterate_trace(&w, &Probe::OnesPrefix, 50, 100, DEFAULT_BUDGET).unwrap();
    let base = t.records[0].norm;
    assert!(t.records.iter().all(|r| (r.norm - base).abs() <= 1e-14 * base));
    let ones = vec![Q::one(); 30];
    for m in 1..6 {
        assert_eq!(apply_power(&ones, m, 30), ones);
    }
}

#[test]
fn cesaro_means() {
    let w = geom();
    let t = cesaro_averages_trace(&w, &Probe::Unit(1), 2000, 400, DEFAULT_BUDGET).unwrap();
    assert_eq!(t.first_below(1e-3), Some(fixture()["m_star_cesaro_e1"].as_u64().unwrap() as u32));
    let one = cesaro_averages_trace(&w, &Probe::Unit(2), 1, 50, DEFAULT_BUDGET).unwrap();
    let pow = iterate_trace(&w, &Probe::Unit(2), 1, 50, DEFAULT_BUDGET).unwrap();
    assert_eq!(one.records, pow.records);
    let t = cesaro_averages_trace(&w, &Probe::Unit(4), 400, 200, DEFAULT_BUDGET).unwrap();
    assert!(t.records.last().unwrap().residual.unwrap() < 1e-2);
}

#[test]
fn budget_and_ranges() {
    let w = geom();
    assert!(matches!(
        iterate_trace(&w, &Probe::Unit(1), 1000, 1000, 10),
        Err(ErgodicError::Budget { .. })
    ));
    assert!(iterate_trace(&w, &Probe::Unit(1), 0, 10, DEFAULT_BUDGET).is_err());
    assert_eq!(Probe::parse("e3"), Some(Probe::Unit(3)));
    assert_eq!(Probe::parse("ones"), Some(Probe::OnesPrefix));
    assert!(Probe::parse("e0").is_none());
}

#[test]
fn poly_half_grows_geom_bounded() {
    let p = parse_weight("poly:alpha=0.5").unwrap();
    let k = kernel_norm_trace(&p, 40).unwrap();
    let rate = k.growth_rate.unwrap();
    assert!(rate >= 1.9, "{rate}");
    assert!(k.cesaro_norms.windows(2).all(|c| c[1] > c[0]));

    let g = geom();
    let k = kernel_norm_trace(&g, 20).unwrap();
    let t = iterate_trace(&g, &Probe::Unit(1), 20, 400, DEFAULT_BUDGET).unwrap();
    for (a, b) in k.norms.iter().zip(&t.records) {
        assert!((a.1 - b.norm).abs() < 1e-4, "{a:?} {b:?}");
    }

    let probes = default_probes(&g, 4, 11);
    assert_eq!(probes.len(), 12);
    let r = power_bounded_probe(&g, 200, 200, &probes, 10_000, DEFAULT_BUDGET).unwrap();
    assert_eq!(r.expectation, Expectation::Bounded);
    assert_eq!(r.consistent, Some(true));
    assert!(r.probes.iter().all(|o| o.sup_ratio < 10.0));

    let r = power_bounded_probe(&p, 30, 400, &[Probe::Unit(1)], 10_000, DEFAULT_BUDGET).unwrap();
    assert!(matches!(r.expectation, Expectation::Growth { .. }));
    assert_eq!(r.consistent, Some(true));
}

#[test]
fn ones_probe_ratio_is_one() {
    let g = geom();
    let r = power_bounded_probe(&g, 20, 100, &[Probe::OnesPrefix], 10_000, DEFAULT_BUDGET).unwrap();
    assert!((r.probes[0].sup_ratio - 1.0).abs() < 1e-14);
}

#[test]
fn range_identity() {
    let r = range_identity_check::<Q>(1, 3).unwrap();
    assert!(r.exact_zero);
    for r in 1..=20 {
        assert!(range_identity_check::<Q>(r, r + 5).unwrap().exact_zero);
    }
    assert!(range_identity_check::<Q>(5, 5).is_err());
    assert!(range_identity_check::<f64>(5, 10).unwrap().max_abs < 1e-15);
}

#[test]
fn ergodic_identities() {
    let e1 = unit_vector::<Q>(1, 8);
    let (a, b) = ergodic_identity_check(&e1, 3).unwrap();
    assert!(a.exact_zero && b.exact_zero);
    let x: Vec<Q> = (1..=10).map(|k| Q::from_ratio(k * k - 7, k + 2)).collect();
    for n in 1..=6 {
        let (a, b) = ergodic_identity_check(&x, n).unwrap();
        assert!(a.exact_zero && b.exact_zero, "n={n}");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let x: Vec<f64> = (0..60).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let (a, b) = ergodic_identity_check(&x, 10).unwrap();
    assert!(a.relative <= 1e-12 && b.relative <= 1e-12, "{a:?} {b:?}");
    assert!(ergodic_identity_check(&x, 0).is_err());
}

#[test]
fn decomposition() {
    let e1 = unit_vector::<Q>(1, 4);
    let (c, rest) = decomposition_project(&e1).unwrap();
    assert_eq!(c, Q::one());
    assert_eq!(rest, vec![Q::zero(), -Q::one(), -Q::one(), -Q::one()]);
    let (c, rest) = decomposition_project(&vec![Q::one(); 4]).unwrap();
    assert_eq!(c, Q::one());
    assert!(rest.iter().all(Zero::is_zero));
    let e2 = unit_vector::<Q>(2, 4);
    let (c, rest) = decomposition_project(&e2).unwrap();
    assert!(c.is_zero());
    assert_eq!(rest, e2);
    assert!(decomposition_project::<f64>(&[]).is_err());
}

#[test]
fn block413_traces_reported_without_verdict() {
    let w = parse_weight("block413:alpha=2").unwrap();
    let r = power_bounded_probe(&w, 50, 256, &[Probe::Unit(1), Probe::Unit(2)], 10_000, DEFAULT_BUDGET).unwrap();
    assert_eq!(r.expectation, Expectation::NoClaim);
    assert_eq!(r.consistent, None);
    assert!(r.probes.iter().all(|o| o.sup_ratio.is_finite()));
}
