use std::collections::HashMap;

use num_complex::Complex64;

use cesaro::criteria::VerdictKind;
use cesaro::spectral::{
    alpha_of, classify_point, point_spectrum, region_scan, resolvent_condition, scan_csv, Grid, Rule,
    SpectralContext, SpectralLabel,
};
use cesaro::weights::parse_weight;

const H: u64 = 2000;

fn ctx(w: &str) -> SpectralContext {
    SpectralContext::build(&parse_weight(w).unwrap(), H, 12)
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn resolvent_condition_examples() {
    let poly2 = parse_weight("poly:alpha=2").unwrap();
    let r = resolvent_condition(&poly2, c(0.9, 0.0), 100_000).unwrap();
    let a = alpha_of(c(0.9, 0.0)).unwrap();
    assert_eq!(r.verdict.kind, VerdictKind::Holds);
    let bound = r.verdict.certified_bound.unwrap();
    assert!(bound <= 2f64.powf(2.0 - a) / (2.0 - a), "{bound}");
    assert!(r.verdict.empirical_sup <= bound);

    let r = resolvent_condition(&poly2, c(0.2, 0.1), H).unwrap();
    assert!((alpha_of(c(0.2, 0.1)).unwrap() - 4.0).abs() < 1e-12);
    assert_eq!(r.verdict.kind, VerdictKind::Fails);
    assert_eq!(r.verdict.witness.unwrap().index, 1);

    let b = parse_weight("block313").unwrap();
    let r = resolvent_condition(&b, c(-1.0, 0.0), H).unwrap();
    assert_eq!(r.verdict.kind, VerdictKind::Holds);

    assert!(resolvent_condition(&poly2, c(0.5, 0.0), H).is_err());
    assert!(resolvent_condition(&poly2, c(0.0, 0.0), H).is_err());
}

fn listed(w: &str, m_max: u64) -> Vec<u64> {
    point_spectrum(&parse_weight(w).unwrap(), m_max, H)
        .into_iter()
        .filter(|e| e.verdict.is_holds())
        .map(|e| e.m)
        .collect()
}

#[test]
fn point_spectrum_examples() {
    assert!(listed("poly:alpha=1", 8).is_empty());
    assert_eq!(listed("poly:alpha=2.5", 8), vec![1, 2]);
    assert_eq!(listed("superfact", 8), (1..=8).collect::<Vec<_>>());
    assert_eq!(listed("block413:alpha=2", 8), vec![1]);
    let ps = point_spectrum(&parse_weight("poly:alpha=2.5").unwrap(), 8, H);
    for e in &ps[2..] {
        assert_eq!(e.verdict.kind, VerdictKind::Fails);
    }
}

#[test]
fn classify_examples() {
    let k = classify_point(&ctx("poly:alpha=2"), c(0.25, 0.2));
    assert_eq!(k.label, SpectralLabel::SpectrumCertified);
    assert_eq!(k.rule, Rule::S1Disk);

    let k = classify_point(&ctx("geom:r=0.5"), c(0.4, 0.0));
    assert_eq!(k.label, SpectralLabel::ResolventCertified);
    assert_eq!(k.rule, Rule::Compact);

    let k = classify_point(&ctx("spike"), c(0.5, 0.5));
    assert_eq!(k.label, SpectralLabel::SpectrumCertified);

    let k = classify_point(&ctx("poly:alpha=2"), c(1.0, 0.0));
    assert_eq!(k.label, SpectralLabel::PointSpectrum);
    let k = classify_point(&ctx("poly:alpha=2"), c(0.5, 0.0));
    assert_eq!(k.label, SpectralLabel::SpectrumCertified);
    assert_eq!(k.rule, Rule::Sigma0);
    let k = classify_point(&ctx("poly:alpha=2"), c(0.0, 0.0));
    assert_eq!(k.label, SpectralLabel::SpectrumCertified);
    assert!(k.alpha.is_none());

    let k = classify_point(&ctx("poly:alpha=2"), c(-0.5, 0.3));
    assert_eq!(k.label, SpectralLabel::ResolventCertified);
    assert!(!k.evidence.is_empty());
}

#[test]
fn block313_spectrum_is_sigma0() {
    let ctx = ctx("block313");
    assert!(ctx.compactness.is_fails());
    let grid = Grid {
        re_min: -0.2,
        re_max: 1.2,
        im_min: -0.7,
        im_max: 0.7,
        nx: 50,
        ny: 50,
    };
    let rows = region_scan(&ctx, &grid).unwrap();
    let mut tally: HashMap<SpectralLabel, usize> = HashMap::new();
    for r in &rows {
        *tally.entry(r.label).or_default() += 1;
        if r.rule != Rule::Sigma0 {
            assert_eq!(r.label, SpectralLabel::ResolventCertified, "{r:?}");
        }
    }
    assert_eq!(tally[&SpectralLabel::ResolventCertified], 2500);
}

#[test]
fn poly_disk_scan() {
    let ctx = ctx("poly:alpha=2");
    let grid = Grid::square(-0.2, 1.2, 57);
    let rows = region_scan(&ctx, &grid).unwrap();
    for r in &rows {
        let lam = c(r.re, r.im);
        assert_ne!(r.rule, Rule::Conflict);
        if r.label == SpectralLabel::SpectrumCertified && r.rule != Rule::Sigma0 {
            assert!((lam - 0.25).norm() <= 0.25 + 1e-12, "{r:?}");
        }
        if (lam - 0.25).norm() > 0.25 + 1e-9 && lam.norm() > 1e-6 && r.rule != Rule::Sigma0 {
            assert_eq!(r.label, SpectralLabel::ResolventCertified, "{r:?}");
        }
    }
    assert!(rows.iter().any(|r| r.rule == Rule::S1Disk));
    let csv = scan_csv(&rows);
    assert_eq!(csv.lines().count(), rows.len() + 1);
    assert!(csv.starts_with("re,im,alpha,label,rule_id,sup_value\n"));
}

#[test]
fn superfact_scan_only_sigma0() {
    let ctx = ctx("superfact");
    let rows = region_scan(&ctx, &Grid::square(-0.2, 1.2, 40)).unwrap();
    for r in &rows {
        if r.rule != Rule::Sigma0 {
            assert_eq!(r.label, SpectralLabel::ResolventCertified);
        }
    }
}

#[test]
fn scan_is_deterministic_and_bounded() {
    let ctx = ctx("spike");
    let g = Grid::square(-0.1, 1.1, 30);
    let a = region_scan(&ctx, &g).unwrap();
    let b = region_scan(&ctx, &g).unwrap();
    assert_eq!(a, b);
    assert!(region_scan(&ctx, &Grid::square(0.0, 1.0, 0)).unwrap().is_empty());
    assert!(region_scan(&ctx, &Grid::square(0.0, 1.0, 1001)).is_err());
    assert_eq!(Grid::parse("-1,1,-1,1,3,4").unwrap().len(), 12);
    assert!(Grid::parse("0,1,0").is_err());
}

#[test]
fn conjugate_symmetry() {
    for w in ["poly:alpha=2", "spike", "block413:alpha=2", "geom:r=0.5"] {
        let ctx = ctx(w);
        for (re, im) in [(0.3, 0.2), (-0.4, 0.9), (0.7, 0.05), (0.1, 0.45)] {
            let a = classify_point(&ctx, c(re, im));
            let b = classify_point(&ctx, c(re, -im));
            assert_eq!(a.label, b.label, "{w} {re} {im}");
        }
    }
}

#[test]
fn s1_excludes_zero_when_resolved() {
    for w in ["poly:alpha=2", "spike", "poly:alpha=0.5", "block413:alpha=2"] {
        let ctx = ctx(w);
        if ctx.continuity.is_holds() && ctx.s1.is_resolved() {
            assert!(ctx.s1.hi > 0.0 && ctx.s1.lo >= -1e-3, "{w}: {:?}", ctx.s1);
        }
    }
}
