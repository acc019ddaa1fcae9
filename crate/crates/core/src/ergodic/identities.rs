use serde::Serialize;

use crate::sections::{apply_cesaro, unit_vector, Scalar};

use super::ErgodicError;

/// Infinity-norm residual of an identity on the section.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityResidual {
    pub max_abs: f64,
    /// `max_abs` divided by the largest coordinate of the operands.
    pub relative: f64,
    pub exact_zero: bool,
}

impl IdentityResidual {
    fn between<T: Scalar>(lhs: &[T], rhs: &[T]) -> Self {
        let mut max_abs = 0.0f64;
        let mut scale = 0.0f64;
        let mut exact_zero = true;
        for (a, b) in lhs.iter().zip(rhs) {
            let d = a.clone() - b.clone();
            if !d.is_zero() {
                exact_zero = false;
            }
            max_abs = max_abs.max(d.abs_f64());
            scale = scale.max(a.abs_f64()).max(b.abs_f64());
        }
        Self {
            max_abs,
            relative: if scale > 0.0 { max_abs / scale } else { max_abs },
            exact_zero,
        }
    }

    fn worst(self, other: Self) -> Self {
        Self {
            max_abs: self.max_abs.max(other.max_abs),
            relative: self.relative.max(other.relative),
            exact_zero: self.exact_zero && other.exact_zero,
        }
    }
}

fn sub<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

fn scale<T: Scalar>(a: &[T], c: &T) -> Vec<T> {
    a.iter().map(|x| x.clone() * c.clone()).collect()
}

/// `(I - C_N)(e_(r+1) - (1/r) sum_{k <= r} e_k) = e_(r+1)` on the section.
pub fn range_identity_check<T: Scalar>(r: usize, n: usize) -> Result<IdentityResidual, ErgodicError> {
    if r == 0 || r + 1 > n {
        return Err(ErgodicError::Range(format!("need 1 <= r and r + 1 <= N, got r = {r}, N = {n}")));
    }
    let target = unit_vector::<T>(r + 1, n);
    let mut x = target.clone();
    let share = T::from_ratio(1, r as i64);
    for v in x.iter_mut().take(r) {
        *v = -share.clone();
    }
    let lhs = sub(&x, &apply_cesaro(&x));
    Ok(IdentityResidual::between(&lhs, &target))
}

/// `[T^0 x, ..., T^k x]`.
fn powers<T: Scalar>(x: &[T], k: usize) -> Vec<Vec<T>> {
    let mut out = vec![x.to_vec()];
    for _ in 0..k {
        let next = apply_cesaro(out.last().unwrap());
        out.push(next);
    }
    out
}

/// `T_[n] x = (1/n) sum_{m=1}^n T^m x` from precomputed powers.
fn mean<T: Scalar>(p: &[Vec<T>], n: usize) -> Vec<T> {
    let len = p[0].len();
    if n == 0 {
        return vec![T::zero(); len];
    }
    let mut acc = vec![T::zero(); len];
    for v in &p[1..=n] {
        for (a, b) in acc.iter_mut().zip(v) {
            *a = a.clone() + b.clone();
        }
    }
    scale(&acc, &T::from_ratio(1, n as i64))
}

/// Residuals of `(I - T) T_[n] = T_[n] (I - T) = (1/n)(T - T^(n+1))` and
/// `(1/n) T^n = T_[n] - ((n-1)/n) T_[n-1]`, applied to `x` with `T = C_N`.
pub fn ergodic_identity_check<T: Scalar>(
    x: &[T],
    n: usize,
) -> Result<(IdentityResidual, IdentityResidual), ErgodicError> {
    if n == 0 || x.is_empty() {
        return Err(ErgodicError::Range("need n >= 1 and a nonempty vector".into()));
    }
    let p = powers(x, n + 1);
    let inv_n = T::from_ratio(1, n as i64);
    let avg = mean(&p, n);
    let rhs = scale(&sub(&p[1], &p[n + 1]), &inv_n);
    let left = sub(&avg, &apply_cesaro(&avg));
    let y = sub(x, &p[1]);
    let right = mean(&powers(&y, n), n);
    let first = IdentityResidual::between(&left, &rhs).worst(IdentityResidual::between(&right, &rhs));
    let prev = mean(&p, n - 1);
    let lhs = scale(&p[n], &inv_n);
    let rhs = sub(&avg, &scale(&prev, &T::from_ratio(n as i64 - 1, n as i64)));
    Ok((first, IdentityResidual::between(&lhs, &rhs)))
}

/// `x = x_1 * 1 + (x - x_1 * 1)`, the remainder having first coordinate 0.
pub fn decomposition_project<T: Scalar>(x: &[T]) -> Result<(T, Vec<T>), ErgodicError> {
    let c = x.first().cloned().ok_or_else(|| ErgodicError::Range("empty vector".into()))?;
    let rest = x.iter().map(|v| v.clone() - c.clone()).collect();
    Ok((c, rest))
}
