//! Suffix-sum profiles `value(n) = denom(n)^(-1) * sum_{k >= n + offset} term(k)`.

use crate::numerics::{ln_add, scan_indices, ScaledSum};

use super::Sample;

/// Scans never materialise more terms than this.
pub const HORIZON_CAP: u64 = 4_000_000;
/// Number of sparse samples kept per decade in reports.
const SAMPLES_PER_DECADE: u32 = 20;
const SAMPLE_DENSE: u64 = 100;

/// Lower and upper estimates of a suffix-sum quantity on `1..=h`.
///
/// `lower(n)` sums the explicit terms up to `h` and is a true lower bound;
/// `upper(n)` adds a certified tail for `k > h` when one is supplied.
pub struct Profile {
    pub h: u64,
    offset: u64,
    suffix_ln: Vec<f64>,
    denom_ln: Vec<f64>,
    tail_ln: Option<f64>,
}

impl Profile {
    /// `term_ln[k - 1] = ln term(k)` for `k = 1..=h`; `denom_ln[n - 1]` likewise.
    pub fn new(term_ln: &[f64], offset: u64, denom_ln: Vec<f64>, tail_ln: Option<f64>) -> Self {
        let h = term_ln.len() as u64;
        debug_assert_eq!(denom_ln.len() as u64, h);
        let mut suffix_ln = vec![f64::NEG_INFINITY; term_ln.len() + 1];
        let mut acc = ScaledSum::new();
        for k in (0..term_ln.len()).rev() {
            acc.add_ln(term_ln[k]);
            suffix_ln[k] = acc.ln();
        }
        Self {
            h,
            offset,
            suffix_ln,
            denom_ln,
            tail_ln,
        }
    }

    pub(crate) fn partial_ln(&self, n: u64) -> f64 {
        let start = n + self.offset;
        if start > self.h {
            f64::NEG_INFINITY
        } else {
            self.suffix_ln[(start - 1) as usize]
        }
    }

    pub fn lower_ln(&self, n: u64) -> f64 {
        self.partial_ln(n) - self.denom_ln[(n - 1) as usize]
    }

    pub fn upper_ln(&self, n: u64) -> Option<f64> {
        let t = self.tail_ln?;
        Some(ln_add(self.partial_ln(n), t) - self.denom_ln[(n - 1) as usize])
    }

    pub fn lower(&self, n: u64) -> f64 {
        self.lower_ln(n).exp()
    }

    /// `(argmax, max)` of the lower estimates over `from..=h`.
    pub fn max_lower(&self, from: u64) -> (u64, f64) {
        let mut best = (from, f64::NEG_INFINITY);
        for n in from.max(1)..=self.h {
            let v = self.lower_ln(n);
            if v > best.1 {
                best = (n, v);
            }
        }
        (best.0, best.1.exp())
    }

    /// Largest certified upper estimate over `from..=h`.
    pub fn max_upper(&self, from: u64) -> Option<f64> {
        self.tail_ln?;
        let mut best = f64::NEG_INFINITY;
        for n in from.max(1)..=self.h {
            best = best.max(self.upper_ln(n).unwrap());
        }
        Some(best.exp())
    }

    pub fn samples(&self) -> Vec<Sample> {
        scan_indices(SAMPLE_DENSE, self.h, SAMPLES_PER_DECADE)
            .into_iter()
            .map(|n| Sample {
                n,
                value: self.lower(n),
                upper: self.upper_ln(n).map(f64::exp),
            })
            .collect()
    }
}
