//! Finite sections of the Cesàro operator and derived lower-triangular operators.
//!
//! Lower triangularity makes the leading `N` coordinates of `Cx`, `C^m x` and
//! `(C - λI)^(-1) x` depend only on `x_1..x_N`, so sections are exact.

mod export;
mod resolvent;
mod scalar;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::numerics::ScaledSum;
use crate::weights::WeightSpec;

pub use export::{matrix_market, vector_text};
pub use resolvent::{
    check_off_sigma0, resolvent_residual, resolvent_section, resolvent_section_exact, ResidualReport,
    SIGMA0_EPS,
};
pub use scalar::{exact_complex, Scalar};

/// Largest dense section.
pub const DENSE_LIMIT: usize = 4096;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SectionError {
    #[error("dense sections are limited to N <= {DENSE_LIMIT}, got {0}")]
    TooLarge(usize),
    #[error("dimension must be at least 1")]
    Empty,
    #[error("lambda = {re}{im:+}i lies within {eps:e} of 1/{k}")]
    NearSigma { re: f64, im: f64, k: u64, eps: f64 },
    #[error("lambda = {re}{im:+}i lies within {eps:e} of 0")]
    NearZero { re: f64, im: f64, eps: f64 },
    #[error("entry ({n}, {k}) is above the diagonal")]
    AboveDiagonal { n: u64, k: u64 },
    #[error("index {index} out of range 1..={len}")]
    Index { index: usize, len: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum SectionTag {
    Cesaro,
    Power(u32),
    Resolvent { re: f64, im: f64 },
    ShiftedA,
    ShiftedB,
    Identity,
    Product,
}

/// Lower-triangular `N x N` section; row `n` (1-based) stores entries `1..=n`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteSection<T> {
    pub tag: SectionTag,
    rows: Vec<Vec<T>>,
}

fn check_dim(n: usize) -> Result<(), SectionError> {
    match n {
        0 => Err(SectionError::Empty),
        n if n > DENSE_LIMIT => Err(SectionError::TooLarge(n)),
        _ => Ok(()),
    }
}

impl<T: Scalar> FiniteSection<T> {
    pub fn from_rows(tag: SectionTag, rows: Vec<Vec<T>>) -> Self {
        debug_assert!(rows.iter().enumerate().all(|(i, r)| r.len() == i + 1));
        Self { tag, rows }
    }

    pub fn identity(n: usize) -> Result<Self, SectionError> {
        check_dim(n)?;
        let rows = (0..n)
            .map(|i| {
                let mut r = vec![T::zero(); i + 1];
                r[i] = T::one();
                r
            })
            .collect();
        Ok(Self::from_rows(SectionTag::Identity, rows))
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Entry `(n, m)`, 1-based; zero above the diagonal.
    pub fn entry(&self, n: usize, m: usize) -> T {
        if m > n {
            T::zero()
        } else {
            self.rows[n - 1][m - 1].clone()
        }
    }

    pub fn row(&self, n: usize) -> &[T] {
        &self.rows[n - 1]
    }

    /// Leading `k x k` block.
    pub fn leading(&self, k: usize) -> Self {
        Self::from_rows(self.tag.clone(), self.rows[..k.min(self.dim())].to_vec())
    }

    pub fn apply(&self, x: &[T]) -> Vec<T> {
        self.rows
            .iter()
            .map(|r| {
                r.iter()
                    .zip(x)
                    .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    /// Product of lower-triangular sections of equal size.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.dim().min(other.dim());
        let rows = (1..=n)
            .map(|i| {
                (1..=i)
                    .map(|j| {
                        (j..=i).fold(T::zero(), |acc, k| {
                            acc + self.rows[i - 1][k - 1].clone() * other.rows[k - 1][j - 1].clone()
                        })
                    })
                    .collect()
            })
            .collect();
        Self::from_rows(SectionTag::Product, rows)
    }

    /// `self - c I`.
    pub fn shift(&self, c: &T) -> Self {
        let mut out = self.clone();
        for (i, r) in out.rows.iter_mut().enumerate() {
            r[i] = r[i].clone() - c.clone();
        }
        out
    }

    /// `max |self - other|` over stored entries.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.rows
            .iter()
            .zip(&other.rows)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x.clone() - y.clone()).abs_f64()))
            .fold(0.0, f64::max)
    }

    /// Whether the section is exactly the identity.
    pub fn is_identity(&self) -> bool {
        self.rows.iter().enumerate().all(|(i, r)| {
            r.iter()
                .enumerate()
                .all(|(j, x)| if i == j { x.is_one() } else { x.is_zero() })
        })
    }

    pub fn nonzeros(&self) -> impl Iterator<Item = (usize, usize, &T)> {
        self.rows.iter().enumerate().flat_map(|(i, r)| {
            r.iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(move |(j, x)| (i + 1, j + 1, x))
        })
    }
}

/// `C_N`: row `n` has `n` entries `1/n`.
pub fn cesaro_section<T: Scalar>(n: usize) -> Result<FiniteSection<T>, SectionError> {
    check_dim(n)?;
    let rows = (1..=n)
        .map(|i| vec![T::from_ratio(1, i as i64); i])
        .collect();
    Ok(FiniteSection::from_rows(SectionTag::Cesaro, rows))
}

/// `C^m` section by repeated multiplication.
pub fn power_section<T: Scalar>(n: usize, m: u32) -> Result<FiniteSection<T>, SectionError> {
    let c = cesaro_section::<T>(n)?;
    let mut p = FiniteSection::identity(n)?;
    for _ in 0..m {
        p = c.mul(&p);
    }
    p.tag = SectionTag::Power(m);
    Ok(p)
}

/// Running means `(x_1 + ... + x_n)/n`.
pub fn apply_cesaro<T: Scalar>(x: &[T]) -> Vec<T> {
    let mut acc = T::zero();
    x.iter()
        .enumerate()
        .map(|(i, v)| {
            acc = acc.clone() + v.clone();
            acc.clone() * T::from_ratio(1, i as i64 + 1)
        })
        .collect()
}

/// First `n` coordinates of `C^m x`, matrix-free.
pub fn apply_power<T: Scalar>(x: &[T], m: u32, n: usize) -> Vec<T> {
    let mut y: Vec<T> = x.iter().take(n).cloned().collect();
    y.resize(n, T::zero());
    for _ in 0..m {
        y = apply_cesaro(&y);
    }
    y
}

fn binom(n: u64, k: u64) -> BigInt {
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

/// `(C^m)_{n,k} = binom(n-1, k-1) sum_{j=0}^{n-k} (-1)^j binom(n-k, j) / (k+j)^m`, exactly.
pub fn kernel_power_entry(n: u64, k: u64, m: u32) -> Result<BigRational, SectionError> {
    if k > n {
        return Err(SectionError::AboveDiagonal { n, k });
    }
    if k == 0 {
        return Err(SectionError::Index { index: 0, len: n as usize });
    }
    let mut sum = BigRational::zero();
    for j in 0..=(n - k) {
        let term = BigRational::new(binom(n - k, j), BigInt::from(k + j).pow(m));
        if j % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    Ok(sum * BigRational::from_integer(binom(n - 1, k - 1)))
}

/// `||x||_{1,w}` for the leading coordinates, compensated in the log domain.
pub fn weighted_norm<T: Scalar>(x: &[T], ln_w: &[f64]) -> f64 {
    let mut s = ScaledSum::new();
    for (v, lw) in x.iter().zip(ln_w) {
        let a = v.abs_f64();
        if a > 0.0 {
            s.add_ln(lw + a.ln());
        }
    }
    s.value().max(0.0)
}

/// A vector paired with its weight.
#[derive(Debug, Clone)]
pub struct WeightedVector<'a, T> {
    pub coords: Vec<T>,
    pub weight: &'a WeightSpec,
}

impl<T: Scalar> WeightedVector<'_, T> {
    pub fn norm(&self) -> f64 {
        weighted_norm(&self.coords, &self.weight.ln_table(self.coords.len() as u64))
    }
}

/// Column-sum norm of a section on `l1(w)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SectionNorm {
    /// Norm of the truncated operator, a lower bound for the full operator norm.
    pub lower: f64,
    pub argmax_column: usize,
    /// Certified upper bound for the full operator, when available.
    pub upper: Option<f64>,
}

/// `max_m sum_{n >= m} w(n) |s_{nm}| / w(m)` over the section.
pub fn operator_norm_l1w<T: Scalar>(section: &FiniteSection<T>, w: &WeightSpec) -> SectionNorm {
    let n = section.dim();
    let ln_w = w.ln_table(n as u64);
    let mut cols: Vec<ScaledSum> = vec![ScaledSum::new(); n];
    for (i, r) in section.rows.iter().enumerate() {
        for (j, x) in r.iter().enumerate() {
            let a = x.abs_f64();
            if a > 0.0 {
                cols[j].add_ln(ln_w[i] + a.ln());
            }
        }
    }
    let (argmax, lower) = cols
        .iter()
        .enumerate()
        .map(|(j, c)| (j + 1, (c.ln() - ln_w[j]).exp()))
        .fold((1, 0.0), |a, b| if b.1 > a.1 { b } else { a });
    let upper = match section.tag {
        SectionTag::Cesaro => cesaro_norm_upper(w),
        _ => None,
    };
    SectionNorm {
        lower,
        argmax_column: argmax,
        upper,
    }
}

fn cesaro_norm_upper(w: &WeightSpec) -> Option<f64> {
    let r = crate::criteria::continuity_criterion(w, w, 100_000);
    r.verdict.certified_bound
}

/// Matrix-free column-sum norm of `C_N` on `l1(w)`, for `N` beyond the dense limit.
pub fn cesaro_norm_l1w(w: &WeightSpec, n: u64) -> SectionNorm {
    let ln_w = w.ln_table(n);
    let mut acc = ScaledSum::new();
    let mut best = (1usize, 0.0f64);
    for m in (1..=n as usize).rev() {
        acc.add_ln(ln_w[m - 1] - (m as f64).ln());
        let v = (acc.ln() - ln_w[m - 1]).exp();
        if v >= best.1 {
            best = (m, v);
        }
    }
    SectionNorm {
        lower: best.1,
        argmax_column: best.0,
        upper: cesaro_norm_upper(w),
    }
}

/// `x^(m)_n = binom(n-1, m-1)`, the eigenvector of `C` for `1/m`.
pub fn eigenvector<T: Scalar>(m: usize, n: usize) -> Vec<T> {
    let mut out = vec![T::zero(); n];
    if m == 0 || m > n {
        return out;
    }
    let mut x = T::one();
    out[m - 1] = x.clone();
    for k in m..n {
        // binom(k, m-1) = binom(k-1, m-1) * k / (k - m + 1)
        x = x * T::from_ratio(k as i64, (k - m + 1) as i64);
        out[k] = x.clone();
    }
    out
}

/// Dual eigenvector `y_1 = 1`, `y_(n+1) = y_n (1 - 1/(λ n))`.
pub fn dual_eigenvector<T: Scalar>(lambda: &T, n: usize) -> Result<Vec<T>, SectionError> {
    if lambda.is_zero() {
        let (re, im) = lambda.parts();
        return Err(SectionError::NearZero { re, im, eps: 0.0 });
    }
    let mut y = Vec::with_capacity(n);
    let mut cur = T::one();
    for k in 1..=n {
        y.push(cur.clone());
        let step = T::one() - T::one() / (lambda.clone() * T::from_ratio(k as i64, 1));
        cur = cur * step;
    }
    Ok(y)
}

/// `(Ay)_n = sum_{k >= n} y_k / k` for finitely supported `y`.
pub fn dual_apply<T: Scalar>(y: &[T]) -> Vec<T> {
    let mut out = vec![T::zero(); y.len()];
    let mut acc = T::zero();
    for k in (1..=y.len()).rev() {
        acc = acc + y[k - 1].clone() * T::from_ratio(1, k as i64);
        out[k - 1] = acc.clone();
    }
    out
}

/// Sections of `A x = ((n x_n - sum_{k<n} x_k)/(n+1))_n` and its inverse `B`.
pub fn shifted_inverse_section<T: Scalar>(
    n: usize,
) -> Result<(FiniteSection<T>, FiniteSection<T>), SectionError> {
    check_dim(n)?;
    let a = (1..=n)
        .map(|i| {
            let mut r = vec![T::from_ratio(-1, i as i64 + 1); i];
            r[i - 1] = T::from_ratio(i as i64, i as i64 + 1);
            r
        })
        .collect();
    let b = (1..=n)
        .map(|i| {
            let mut r: Vec<T> = (1..i).map(|m| T::from_ratio(1, m as i64)).collect();
            r.push(T::from_ratio(i as i64 + 1, i as i64));
            r
        })
        .collect();
    Ok((
        FiniteSection::from_rows(SectionTag::ShiftedA, a),
        FiniteSection::from_rows(SectionTag::ShiftedB, b),
    ))
}

/// `e_k` of length `n`.
pub fn unit_vector<T: Scalar>(k: usize, n: usize) -> Vec<T> {
    let mut x = vec![T::zero(); n];
    if (1..=n).contains(&k) {
        x[k - 1] = T::one();
    }
    x
}
