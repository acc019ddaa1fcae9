//! Weight sequences with certified analytic metadata.

mod blocks;
mod catalog;
mod family;
mod table;
mod tail;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

pub use blocks::{
    build_compact_minorant, build_failing_minorant, greedy_breakpoints, sparse_power_weight,
    BlockWeightTable, CompactMinorant,
};
pub use catalog::{catalog_listing, catalog_weight, parse_weight, FamilyInfo, FAMILIES};
pub use family::Family;
pub use table::{load_custom_table, parse_custom_table, CustomTable};

use crate::numerics::LN_UNDERFLOW;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WeightError {
    #[error("unknown weight family `{0}`")]
    UnknownFamily(String),
    #[error("parse error at position {position} in `{input}`: {message}")]
    Parse {
        input: String,
        position: usize,
        message: String,
    },
    #[error("parameter {param}={value} of `{family}` outside {range}")]
    OutOfRange {
        family: String,
        param: String,
        value: f64,
        range: &'static str,
    },
    #[error("horizon {horizon} completes only {blocks} block(s); at least 2 are required")]
    HorizonTooSmall { horizon: u64, blocks: usize },
    #[error("weight table line {line}: {message}")]
    Table { line: usize, message: String },
}

/// `w(n + 1) / w(n) <= r < 1` for every `n >= from`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioBound {
    pub from: u64,
    pub r: f64,
}

/// `w(n) >= c * n^(-s)` for every `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Minorant {
    pub c: f64,
    pub s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summability {
    pub summable: bool,
    pub note: &'static str,
}

/// `exp(ln w)` or an explicit marker when the double exponential underflows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum WeightValue {
    Finite(f64),
    Underflow,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Evaluation {
    pub ln_value: f64,
    pub value: WeightValue,
}

/// A bounded, strictly positive weight together with what is known about it.
#[derive(Debug, Clone)]
pub struct WeightSpec {
    pub id: String,
    pub family: Family,
    pub decreasing_from: Option<u64>,
    pub ratio_bound: Option<RatioBound>,
    pub lower_minorant: Option<Minorant>,
    pub summable: Option<Summability>,
    /// `n^k w(n)` is summable for every `k`.
    pub rapidly_decreasing: bool,
    /// Largest index with data, for tabulated weights.
    pub defined_up_to: Option<u64>,
}

impl fmt::Display for WeightSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id)
    }
}

impl WeightSpec {
    pub(crate) fn bare(id: impl Into<String>, family: Family) -> Self {
        Self {
            id: id.into(),
            family,
            decreasing_from: None,
            ratio_bound: None,
            lower_minorant: None,
            summable: None,
            rapidly_decreasing: false,
            defined_up_to: None,
        }
    }

    /// `ln w(n)`.
    pub fn ln_w(&self, n: u64) -> f64 {
        debug_assert!(n >= 1);
        self.family.ln_w(n)
    }

    pub fn eval(&self, n: u64) -> Evaluation {
        eval_weight(self, n)
    }

    /// `ln w(1..=len)` as a vector indexed from zero.
    pub fn ln_table(&self, len: u64) -> Vec<f64> {
        self.family.ln_table(len)
    }

    /// Certified `sup_{n >= from} w(n + 1) / w(n)`, if known.
    pub fn ratio_from(&self, from: u64) -> Option<f64> {
        self.family.ratio_from(from)
    }

    /// Certified `limsup w(n + 1) / w(n)` when the family has one below 1.
    pub fn ratio_limit(&self) -> Option<f64> {
        self.family.ratio_limit()
    }

    /// Certified upper bound for `sum_{n >= m} w(n) n^(beta - 1)`.
    pub fn tail_bound(&self, m: u64, beta: f64) -> Option<f64> {
        self.tail_bound_ln(m, beta).map(f64::exp)
    }

    /// Natural log of [`WeightSpec::tail_bound`].
    pub fn tail_bound_ln(&self, m: u64, beta: f64) -> Option<f64> {
        tail::tail_bound_ln(self, m.max(1), beta)
    }

    /// Constants `(k, delta)` with `sum_{n >= m} w(n) n^(beta - 1) <= k (m - 1)^(-delta)`
    /// for every `m >= 2`.
    pub fn power_tail(&self, beta: f64) -> Option<(f64, f64)> {
        tail::power_tail(self, beta)
    }

    /// `(from, q)` with consecutive terms of `w(n) n^(beta - 1)` shrinking by
    /// at least `q < 1` from index `from` on.
    pub fn term_ratio_bound(&self, beta: f64) -> Option<(u64, f64)> {
        tail::term_ratio_bound(self, beta)
    }

    /// A reason why `sum_n w(n) n^(beta - 1)` diverges, if one is certified.
    pub fn series_diverges(&self, beta: f64) -> Option<&'static str> {
        tail::series_diverges(self, beta)
    }

    /// `c > 0` with `w(n) >= c n^(-s)` for all `n`.
    pub fn minorant_at(&self, s: f64) -> Option<f64> {
        tail::minorant_at(self, s)
    }

    /// A reason why `sup_n 1 / (n^s w(n))` is infinite, if one is certified.
    pub fn reciprocal_unbounded(&self, s: f64) -> Option<&'static str> {
        tail::reciprocal_unbounded(self, s)
    }

    /// Clamp a scan horizon to the range where the weight has data.
    pub fn clamp_horizon(&self, horizon: u64) -> u64 {
        match self.defined_up_to {
            Some(cap) => horizon.min(cap),
            None => horizon,
        }
    }
}

/// Evaluate `w(n)` in the log domain.
pub fn eval_weight(spec: &WeightSpec, n: u64) -> Evaluation {
    let ln_value = spec.ln_w(n.max(1));
    let value = if ln_value < LN_UNDERFLOW {
        WeightValue::Underflow
    } else {
        WeightValue::Finite(ln_value.exp())
    };
    Evaluation { ln_value, value }
}

/// Certified tail bound, `None` when no metadata applies.
pub fn tail_bound(spec: &WeightSpec, m: u64, beta: f64) -> Option<f64> {
    spec.tail_bound(m, beta)
}
