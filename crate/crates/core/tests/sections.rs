use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cesaro::sections::{
    apply_power, cesaro_norm_l1w, cesaro_section, dual_apply, dual_eigenvector, eigenvector,
    exact_complex, kernel_power_entry, matrix_market, operator_norm_l1w, power_section,
    resolvent_residual, resolvent_section, resolvent_section_exact, shifted_inverse_section,
    unit_vector, vector_text, FiniteSection, Scalar, SectionError,
};
use cesaro::weights::parse_weight;

type Q = BigRational;

fn q(a: i64, b: i64) -> Q {
    Q::from_ratio(a, b)
}

#[test]
fn cesaro_rows() {
    let c = cesaro_section::<Q>(3).unwrap();
    assert_eq!(c.row(3), &[q(1, 3), q(1, 3), q(1, 3)]);
    assert_eq!(cesaro_section::<Q>(1).unwrap().row(1), &[Q::one()]);
    let ones = vec![Q::one(); 3];
    assert_eq!(c.apply(&ones), ones);
    assert!(matches!(cesaro_section::<f64>(5000), Err(SectionError::TooLarge(5000))));
}

#[test]
fn powers_and_kernel() {
    let e1 = unit_vector::<Q>(1, 6);
    let y = apply_power(&e1, 1, 6);
    assert_eq!(y, (1..=6).map(|n| q(1, n)).collect::<Vec<_>>());
    let ones = vec![Q::one(); 9];
    assert_eq!(apply_power(&ones, 7, 9), ones);
    let e2 = unit_vector::<Q>(2, 3);
    assert_eq!(apply_power(&e2, 2, 3)[2], q(5, 18));
    assert_eq!(kernel_power_entry(3, 2, 2).unwrap(), q(5, 18));
    for n in 1..=8 {
        for k in 1..=n {
            assert_eq!(kernel_power_entry(n, k, 1).unwrap(), q(1, n as i64));
        }
    }
    let e1 = unit_vector::<Q>(1, 5);
    assert_eq!(kernel_power_entry(5, 1, 3).unwrap(), apply_power(&e1, 3, 5)[4]);
    assert!(kernel_power_entry(2, 3, 1).is_err());
}

#[test]
fn triangular_exactness() {
    let big = power_section::<Q>(12, 3).unwrap();
    let small = power_section::<Q>(7, 3).unwrap();
    assert_eq!(big.leading(7), small);
}

#[test]
fn norms_on_weighted_spaces() {
    let w = parse_weight("poly:alpha=2").unwrap();
    let c = cesaro_section::<f64>(2000).unwrap();
    let s = operator_norm_l1w(&c, &w);
    assert!(s.lower > 1.0 && s.lower <= 2.0);
    assert!(s.upper.unwrap() >= s.lower);
    let mut prev = 0.0;
    for n in [1_000u64, 10_000, 100_000] {
        let r = cesaro_norm_l1w(&w, n);
        assert!(r.lower >= prev && (0.5..=2.0).contains(&r.lower));
        prev = r.lower;
    }
    let id = FiniteSection::<f64>::identity(10).unwrap();
    assert_eq!(operator_norm_l1w(&id, &w).lower, 1.0);
}

#[test]
fn resolvent_small_cases() {
    let r = resolvent_section_exact(&exact_complex((2, 1), (0, 1)), 2).unwrap();
    assert_eq!(r.entry(1, 1), Complex::new(-Q::one(), Q::zero()));
    assert_eq!(r.entry(2, 1), Complex::new(q(-1, 3), Q::zero()));
    assert_eq!(r.entry(2, 2), Complex::new(q(-2, 3), Q::zero()));
    let r = resolvent_section_exact(&exact_complex((-1, 1), (0, 1)), 1).unwrap();
    assert_eq!(r.entry(1, 1), Complex::new(q(1, 2), Q::zero()));
    assert!(matches!(
        resolvent_section(Complex64::new(1.0 / 3.0, 0.0), 5),
        Err(SectionError::NearSigma { k: 3, .. })
    ));
    assert!(resolvent_section_exact(&exact_complex((1, 3), (0, 1)), 5).is_err());
    let f = resolvent_section(Complex64::new(2.0, 0.0), 2).unwrap();
    assert!((f.entry(2, 1) - Complex64::new(-1.0 / 3.0, 0.0)).norm() < 1e-15);
}

#[test]
fn resolvent_identity_exact() {
    for lam in [exact_complex((2, 1), (0, 1)), exact_complex((-1, 1), (0, 1)), exact_complex((1, 1), (1, 1))] {
        let r = resolvent_section_exact(&lam, 50).unwrap();
        assert!(resolvent_residual(&lam, &r).exact_zero);
    }
}

#[test]
fn resolvent_identity_float() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut count = 0;
    while count < 20 {
        let lam = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let dist = (1..=1000)
            .map(|k| (lam - 1.0 / k as f64).norm())
            .fold(lam.norm(), f64::min);
        if dist < 0.1 {
            continue;
        }
        count += 1;
        let r = resolvent_section(lam, 200).unwrap();
        let res = resolvent_residual(&lam, &r);
        assert!(res.scaled_inf <= 1e-12, "{lam}: {res:?}");
        if lam.inv().re <= 1.0 {
            assert!(res.abs_inf <= 1e-12, "{lam}: {res:?}");
        }
    }
}

#[test]
fn eigen_identities() {
    for m in 1..=10 {
        let x = eigenvector::<Q>(m, 50);
        let c = cesaro_section::<Q>(50).unwrap();
        let y = c.apply(&x);
        let want: Vec<Q> = x.iter().map(|v| v.clone() * q(1, m as i64)).collect();
        assert_eq!(y, want);
    }
    assert_eq!(eigenvector::<Q>(1, 4), vec![Q::one(); 4]);
    assert_eq!(eigenvector::<Q>(2, 5), (0..5).map(|n| q(n, 1)).collect::<Vec<_>>());
    assert_eq!(eigenvector::<Q>(3, 5)[4], q(6, 1));
}

#[test]
fn dual_vectors() {
    let y = dual_eigenvector(&Q::one(), 5).unwrap();
    assert_eq!(y, vec![Q::one(), Q::zero(), Q::zero(), Q::zero(), Q::zero()]);
    let half = q(1, 2);
    let y = dual_eigenvector(&half, 5).unwrap();
    assert_eq!(y[..3], [Q::one(), q(-1, 1), Q::zero()]);
    let ay = dual_apply(&y);
    assert_eq!(ay[0], half.clone());
    for m in 1..=8i64 {
        let lam = q(1, m);
        let y = dual_eigenvector(&lam, 12).unwrap();
        let ay = dual_apply(&y);
        for (a, b) in ay.iter().zip(&y) {
            assert_eq!(a.clone(), lam.clone() * b.clone());
        }
    }
    assert!(dual_eigenvector(&Q::zero(), 3).is_err());
}

#[test]
fn shifted_sections() {
    let (a, b) = shifted_inverse_section::<Q>(2).unwrap();
    assert_eq!(a.row(1), &[q(1, 2)]);
    assert_eq!(a.row(2), &[q(-1, 3), q(2, 3)]);
    assert_eq!(b.row(2), &[q(1, 1), q(3, 2)]);
    let (_, b3) = shifted_inverse_section::<Q>(3).unwrap();
    assert_eq!(b3.row(3), &[q(1, 1), q(1, 2), q(4, 3)]);
    for n in 1..=50 {
        let (a, b) = shifted_inverse_section::<Q>(n).unwrap();
        assert!(a.mul(&b).is_identity() && b.mul(&a).is_identity());
    }
    let (a, _) = shifted_inverse_section::<Q>(6).unwrap();
    let y = a.apply(&vec![Q::one(); 6]);
    assert_eq!(y, (1..=6).map(|n| q(1, n + 1)).collect::<Vec<_>>());
}

#[test]
fn product_ratio_is_bounded() {
    // n^alpha prod_{k <= n} |1 - 1/(k λ)| over [10, 1e5], against recorded max/min ratios.
    let f: serde_json::Value = serde_json::from_str(include_str!("fixtures/product_ratio.json")).unwrap();
    for r in f["ratios"].as_array().unwrap() {
        let lam = Complex64::new(r["re"].as_f64().unwrap(), r["im"].as_f64().unwrap());
        let limit = r["max_over_min"].as_f64().unwrap();
        let alpha = (1.0 / lam).re;
        let mut acc = 0.0;
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for k in 1..=100_000u64 {
            acc += (1.0 - 1.0 / (lam * k as f64)).norm().ln();
            if k >= 10 {
                let v = alpha * (k as f64).ln() + acc;
                lo = lo.min(v);
                hi = hi.max(v);
            }
        }
        let ratio = (hi - lo).exp();
        assert!(ratio <= limit * (1.0 + 1e-9), "{lam}: {ratio}");
        assert!(ratio >= limit * (1.0 - 1e-6), "{lam}: {ratio}");
    }
}

#[test]
fn falling_factorial_ratio() {
    for m in 1..=5u64 {
        for n in [100u64, 1000, 10_000] {
            let v: f64 = (0..m - 1).map(|j| ((n - j) as f64 / n as f64).ln()).sum::<f64>().exp();
            assert!((0.5..=1.5).contains(&v));
        }
    }
}

#[test]
fn exports() {
    let c = cesaro_section::<f64>(2).unwrap();
    let mm = matrix_market(&c);
    assert!(mm.lines().nth(2).unwrap() == "2 2 3");
    assert_eq!(vector_text(&[1.0f64, 0.5]).lines().count(), 2);
    let z = vec![Complex64::new(0.0, 1.0)];
    assert_eq!(vector_text(&z).split_whitespace().count(), 3);
    assert_eq!(Complex64::new(3.0, 4.0).abs_f64(), 5.0);
}
