use std::fmt::Debug;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{Num, ToPrimitive, Zero};

/// Field elements usable in sections: `f64`, `Complex64`, `BigRational`, `Complex<BigRational>`.
pub trait Scalar: Num + Clone + Debug + Send + Sync + std::ops::Neg<Output = Self> {
    fn from_ratio(num: i64, den: i64) -> Self;
    fn abs_f64(&self) -> f64;
    /// Real and imaginary parts as floats.
    fn parts(&self) -> (f64, f64);
    /// Whether arithmetic is exact.
    const EXACT: bool;
}

impl Scalar for f64 {
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn abs_f64(&self) -> f64 {
        self.abs()
    }
    fn parts(&self) -> (f64, f64) {
        (*self, 0.0)
    }
    const EXACT: bool = false;
}

impl Scalar for Complex64 {
    fn from_ratio(num: i64, den: i64) -> Self {
        Complex64::new(num as f64 / den as f64, 0.0)
    }
    fn abs_f64(&self) -> f64 {
        self.norm()
    }
    fn parts(&self) -> (f64, f64) {
        (self.re, self.im)
    }
    const EXACT: bool = false;
}

impl Scalar for BigRational {
    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
    fn abs_f64(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN).abs()
    }
    fn parts(&self) -> (f64, f64) {
        (self.to_f64().unwrap_or(f64::NAN), 0.0)
    }
    const EXACT: bool = true;
}

impl Scalar for Complex<BigRational> {
    fn from_ratio(num: i64, den: i64) -> Self {
        Complex::new(BigRational::from_ratio(num, den), BigRational::zero())
    }
    fn abs_f64(&self) -> f64 {
        let (re, im) = self.parts();
        re.hypot(im)
    }
    fn parts(&self) -> (f64, f64) {
        (
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
    const EXACT: bool = true;
}

/// `p/q + i r/s` in exact arithmetic.
pub fn exact_complex(re: (i64, i64), im: (i64, i64)) -> Complex<BigRational> {
    Complex::new(
        BigRational::from_ratio(re.0, re.1),
        BigRational::from_ratio(im.0, im.1),
    )
}
