use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{check_dim, FiniteSection, Scalar, SectionError, SectionTag};

/// Default distance below which `λ` counts as a point of `Σ_0`.
pub const SIGMA0_EPS: f64 = 1e-9;

/// Reject `λ` within `eps` of `0` or of some `1/k`.
pub fn check_off_sigma0(lambda: Complex64, eps: f64) -> Result<(), SectionError> {
    let (re, im) = (lambda.re, lambda.im);
    if lambda.norm() <= eps {
        return Err(SectionError::NearZero { re, im, eps });
    }
    if re > 0.0 {
        let k0 = (1.0 / re).round().min(u64::MAX as f64 / 2.0) as u64;
        for k in k0.saturating_sub(1).max(1)..=k0 + 1 {
            if (lambda - Complex64::new(1.0 / k as f64, 0.0)).norm() <= eps {
                return Err(SectionError::NearSigma { re, im, k, eps });
            }
        }
    }
    Ok(())
}

/// `(C_N - λI)^(-1)`: diagonal `1/(1/n - λ)`, below it `-λ^(-2) e_nm` with
/// `e_nm = 1/(n prod_{k=m}^n (1 - 1/(λk)))`.
///
/// Each row accumulates complex logarithms of the factors downward from `k = n`.
pub fn resolvent_section(lambda: Complex64, n: usize) -> Result<FiniteSection<Complex64>, SectionError> {
    check_dim(n)?;
    check_off_sigma0(lambda, SIGMA0_EPS)?;
    let ln_z: Vec<Complex64> = (1..=n)
        .map(|k| (Complex64::one() - (lambda * k as f64).inv()).ln())
        .collect();
    let inv_l2 = (lambda * lambda).inv();
    let rows = (1..=n)
        .map(|i| {
            let mut row = vec![Complex64::zero(); i];
            row[i - 1] = (Complex64::new(1.0 / i as f64, 0.0) - lambda).inv();
            let mut acc = ln_z[i - 1];
            let ln_i = (i as f64).ln();
            for m in (1..i).rev() {
                acc += ln_z[m - 1];
                row[m - 1] = -inv_l2 * (-acc - ln_i).exp();
            }
            row
        })
        .collect();
    Ok(FiniteSection::from_rows(
        SectionTag::Resolvent {
            re: lambda.re,
            im: lambda.im,
        },
        rows,
    ))
}

/// Exact rational resolvent section.
pub fn resolvent_section_exact(
    lambda: &Complex<BigRational>,
    n: usize,
) -> Result<FiniteSection<Complex<BigRational>>, SectionError> {
    check_dim(n)?;
    let (re, im) = lambda.parts();
    if lambda.is_zero() {
        return Err(SectionError::NearZero { re, im, eps: 0.0 });
    }
    let one = Complex::<BigRational>::one();
    let z: Vec<Complex<BigRational>> = (1..=n)
        .map(|k| {
            let lk = lambda.clone() * Complex::<BigRational>::from_ratio(k as i64, 1);
            one.clone() - one.clone() / lk
        })
        .collect();
    if let Some(k) = z.iter().position(|x| x.is_zero()) {
        return Err(SectionError::NearSigma {
            re,
            im,
            k: k as u64 + 1,
            eps: 0.0,
        });
    }
    let inv_l2 = one.clone() / (lambda.clone() * lambda.clone());
    let rows = (1..=n)
        .map(|i| {
            let mut row = vec![Complex::<BigRational>::zero(); i];
            row[i - 1] = one.clone() / (Complex::<BigRational>::from_ratio(1, i as i64) - lambda.clone());
            let mut prod = z[i - 1].clone() * Complex::<BigRational>::from_ratio(i as i64, 1);
            for m in (1..i).rev() {
                prod = prod * z[m - 1].clone();
                row[m - 1] = -(inv_l2.clone() / prod.clone());
            }
            row
        })
        .collect();
    Ok(FiniteSection::from_rows(SectionTag::Resolvent { re, im }, rows))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    /// `max |((C_N - λI) R - I)_{nm}|`.
    pub abs_inf: f64,
    /// Same, each entry divided by `(1/n) sum_k |R_km| + |λ||R_nm| + δ_nm`.
    pub scaled_inf: f64,
    /// All residual entries are exactly zero (meaningful in exact arithmetic).
    pub exact_zero: bool,
}

/// Residual of `(C_N - λI) R = I`, computed column by column in `O(N^2)`.
pub fn resolvent_residual<T: Scalar>(lambda: &T, r: &FiniteSection<T>) -> ResidualReport {
    let n = r.dim();
    let lam_abs = lambda.abs_f64();
    let mut abs_inf = 0.0f64;
    let mut scaled_inf = 0.0f64;
    let mut exact_zero = true;
    for m in 1..=n {
        let mut sum = T::zero();
        let mut mag = 0.0;
        for i in m..=n {
            let rim = r.entry(i, m);
            sum = sum + rim.clone();
            mag += rim.abs_f64();
            let inv_i = T::from_ratio(1, i as i64);
            let delta = if i == m { T::one() } else { T::zero() };
            let res = sum.clone() * inv_i - lambda.clone() * rim.clone() - delta;
            if !res.is_zero() {
                exact_zero = false;
            }
            let a = res.abs_f64();
            let scale = mag / i as f64 + lam_abs * rim.abs_f64() + if i == m { 1.0 } else { 0.0 };
            abs_inf = abs_inf.max(a);
            if scale > 0.0 {
                scaled_inf = scaled_inf.max(a / scale);
            }
        }
    }
    ResidualReport {
        abs_inf,
        scaled_inf,
        exact_zero,
    }
}
