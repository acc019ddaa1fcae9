use std::sync::Arc;

use crate::numerics::{dyadic_block, ln_factorial};

use super::blocks::{BlockWeightTable, CompactMinorant};
use super::table::CustomTable;

const LN2: f64 = std::f64::consts::LN_2;

/// Closed-form description of a weight.
#[derive(Debug, Clone)]
pub enum Family {
    /// `n^(-alpha)`.
    Poly { alpha: f64 },
    /// `1 / log^gamma`: `w(1) = 2, w(n) = log(n)^(-gamma)` for `gamma <= 1`,
    /// `w(n) = log(n + 1)^(-gamma)` for `gamma > 1`.
    LogGamma { gamma: f64 },
    /// `n^beta r^n`.
    Geom { r: f64, beta: f64 },
    /// `n^(-n)`.
    SuperFact,
    /// `a^n / n!`.
    Factorial { a: f64 },
    /// `exp(-n^beta)`.
    ExpBeta { beta: f64 },
    /// `exp(-log(n)^gamma)`.
    ExpLog { gamma: f64 },
    /// `1` at powers of two, `1/n` elsewhere.
    Spike,
    /// `w(1) = w(2) = 1`, `2^(-i) 2^(-(i+1) 2^(i+1))` on `2^i < n <= 2^(i+1)`.
    Block313,
    /// `w(1) = w(2) = 1`, `i^(-alpha) 2^(1-i)` on `2^i < n <= 2^(i+1)`.
    Block413 { alpha: f64 },
    /// `w(1) = 1`, successive ratios `1/p` at `n = 2p - 1` and `1/2` at even `n`.
    Alternating,
    /// `n^(-alpha) log(n + 1)^(-beta)`.
    PolyLog { alpha: f64, beta: f64 },
    Blocks(Arc<BlockWeightTable>),
    CompactMinorant(Arc<CompactMinorant>),
    Custom(Arc<CustomTable>),
}

impl Family {
    pub fn ln_w(&self, n: u64) -> f64 {
        let x = n as f64;
        match self {
            Family::Poly { alpha } => -alpha * x.ln(),
            Family::LogGamma { gamma } => {
                if *gamma <= 1.0 {
                    if n == 1 {
                        LN2
                    } else {
                        -gamma * x.ln().ln()
                    }
                } else {
                    -gamma * x.ln_1p().ln()
                }
            }
            Family::Geom { r, beta } => beta * x.ln() + x * r.ln(),
            Family::SuperFact => -x * x.ln(),
            Family::Factorial { a } => x * a.ln() - ln_factorial(n),
            Family::ExpBeta { beta } => -x.powf(*beta),
            Family::ExpLog { gamma } => -x.ln().powf(*gamma),
            Family::Spike => {
                if n.is_power_of_two() {
                    0.0
                } else {
                    -x.ln()
                }
            }
            Family::Block313 => {
                if n <= 2 {
                    0.0
                } else {
                    let i = dyadic_block(n) as f64;
                    -(i + (i + 1.0) * 2f64.powf(i + 1.0)) * LN2
                }
            }
            Family::Block413 { alpha } => {
                if n <= 2 {
                    0.0
                } else {
                    let i = dyadic_block(n) as f64;
                    -alpha * i.ln() - (i - 1.0) * LN2
                }
            }
            Family::Alternating => {
                -(((n - 1) / 2) as f64) * LN2 - ln_factorial(n / 2)
            }
            Family::PolyLog { alpha, beta } => -alpha * x.ln() - beta * x.ln_1p().ln(),
            Family::Blocks(t) => t.ln_w(n),
            Family::CompactMinorant(u) => u.ln_w(n),
            Family::Custom(t) => t.ln_w(n),
        }
    }

    /// `ln w` continued to real `x >= 2` for the smooth closed-form families.
    pub fn ln_w_real(&self, x: f64) -> Option<f64> {
        let v = match self {
            Family::Poly { alpha } => -alpha * x.ln(),
            Family::LogGamma { gamma } if *gamma <= 1.0 => -gamma * x.ln().ln(),
            Family::LogGamma { gamma } => -gamma * x.ln_1p().ln(),
            Family::Geom { r, beta } => beta * x.ln() + x * r.ln(),
            Family::SuperFact => -x * x.ln(),
            Family::ExpBeta { beta } => -x.powf(*beta),
            Family::ExpLog { gamma } => -x.ln().powf(*gamma),
            Family::PolyLog { alpha, beta } => -alpha * x.ln() - beta * x.ln_1p().ln(),
            _ => return None,
        };
        Some(v)
    }

    pub fn ln_table(&self, len: u64) -> Vec<f64> {
        match self {
            Family::CompactMinorant(u) => u.ln_prefix(len),
            _ => (1..=len).map(|n| self.ln_w(n)).collect(),
        }
    }

    /// Certified `sup_{n >= from} w(n + 1) / w(n)`.
    pub fn ratio_from(&self, from: u64) -> Option<f64> {
        let from = from.max(1);
        let nf = from as f64;
        let r = match self {
            Family::Geom { r, beta } => r * (1.0 + 1.0 / nf).powf(*beta),
            Family::SuperFact => (nf / (nf + 1.0)).powf(nf) / (nf + 1.0),
            Family::Factorial { a } => a / (nf + 1.0),
            Family::ExpBeta { beta } if *beta >= 1.0 => (nf.powf(*beta) - (nf + 1.0).powf(*beta)).exp(),
            Family::Alternating => {
                if from >= 2 {
                    0.5
                } else {
                    1.0
                }
            }
            Family::CompactMinorant(_) => 1.0 / (nf + 1.0),
            _ => return None,
        };
        Some(r * (1.0 + 1e-14))
    }

    pub fn ratio_limit(&self) -> Option<f64> {
        match self {
            Family::Geom { r, .. } => Some(*r),
            Family::SuperFact | Family::Factorial { .. } | Family::CompactMinorant(_) => Some(0.0),
            Family::ExpBeta { beta } if *beta > 1.0 => Some(0.0),
            Family::ExpBeta { beta } if *beta == 1.0 => Some((-1f64).exp()),
            Family::Alternating => Some(0.5),
            _ => None,
        }
    }
}
