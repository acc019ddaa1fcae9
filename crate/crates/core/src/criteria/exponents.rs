//! Exponent sets `R_w`, `S_w(1)` and their bisection brackets.

use serde::Serialize;

use crate::numerics::ScaledSum;
use crate::weights::WeightSpec;

use super::operator::scan_horizon;
use super::{FailPath, Verdict, VerdictKind, Witness};

pub const EXPONENT_TOLERANCE: f64 = 1e-3;
/// Largest exponent probed before reporting `+inf` (or `S_w(1)` empty).
pub const EXPONENT_CEILING: f64 = 64.0;
const EXPONENT_FLOOR: i32 = -16;

fn rw_kind(w: &WeightSpec, t: f64) -> (VerdictKind, Option<f64>, Option<&'static str>) {
    if let Some(b) = w.tail_bound(1, t + 1.0) {
        return (VerdictKind::Holds, Some(b), None);
    }
    if let Some(reason) = w.series_diverges(t + 1.0) {
        return (VerdictKind::Fails, None, Some(reason));
    }
    (VerdictKind::Inconclusive, None, None)
}

/// `t in R_w`, i.e. `sum_n n^t w(n) < inf`.
pub fn rw_membership(w: &WeightSpec, t: f64, horizon: u64) -> Verdict {
    let h = scan_horizon(&[w], horizon);
    let mut partial = ScaledSum::new();
    for (i, lw) in w.ln_table(h).iter().enumerate() {
        partial.add_ln(lw + t * ((i + 1) as f64).ln());
    }
    let emp = partial.value();
    match rw_kind(w, t) {
        (VerdictKind::Holds, Some(b), _) => {
            Verdict::holds(b, emp, h, format!("sum_n n^{t} w(n) closed by a certified tail"))
        }
        (VerdictKind::Fails, _, Some(reason)) => Verdict::fails(
            Witness { index: h, value: emp },
            FailPath::Analytic,
            emp,
            h,
            format!("sum_n n^{t} w(n) diverges: {reason}"),
        ),
        _ => Verdict::inconclusive(emp, h, "neither a tail majorant nor a divergence certificate"),
    }
}

fn sw1_kind(w: &WeightSpec, s: f64) -> VerdictKind {
    if w.minorant_at(s).is_some() {
        VerdictKind::Holds
    } else if w.reciprocal_unbounded(s).is_some() {
        VerdictKind::Fails
    } else {
        VerdictKind::Inconclusive
    }
}

/// `s in S_w(1)`, i.e. `sup_n 1/(n^s w(n)) < inf`.
pub fn sw1_membership(w: &WeightSpec, s: f64, horizon: u64) -> Verdict {
    let h = scan_horizon(&[w], horizon);
    let (arg, emp_ln) = w
        .ln_table(h)
        .iter()
        .enumerate()
        .map(|(i, lw)| (i as u64 + 1, -lw - s * ((i + 1) as f64).ln()))
        .fold((1, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
    let emp = emp_ln.exp();
    if let Some(c) = w.minorant_at(s) {
        return Verdict::holds(1.0 / c, emp, h, format!("w(n) >= {c:.6e} n^(-{s})"));
    }
    if let Some(reason) = w.reciprocal_unbounded(s) {
        return Verdict::fails(Witness { index: arg, value: emp }, FailPath::Analytic, emp, h, reason);
    }
    Verdict::inconclusive(emp, h, "no minorant and no growth certificate")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BracketKind {
    /// `lo` and `hi` carry opposite certified memberships.
    Bracket,
    /// Membership holds at every probed exponent up to the ceiling.
    PlusInfinity,
    /// Membership fails at every probed exponent up to the ceiling.
    Empty,
    Inconclusive,
}

/// Bisection result. For `t0`, `lo` is in `R_w` and `hi` is not; for `s1`,
/// `hi` is in `S_w(1)` and `lo` is not.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Bracket {
    pub kind: BracketKind,
    pub lo: f64,
    pub hi: f64,
    pub lo_kind: VerdictKind,
    pub hi_kind: VerdictKind,
    pub note: String,
}

impl Bracket {
    pub fn is_resolved(&self) -> bool {
        self.kind == BracketKind::Bracket
    }
}

/// Dyadic bisection for the switch point of a monotone membership test.
/// `inside_low` tells whether members sit below the switch (as for `R_w`).
fn bisect(test: impl Fn(f64) -> VerdictKind, inside_low: bool, tol: f64) -> Bracket {
    let member = |k| k == VerdictKind::Holds;
    let top = test(EXPONENT_CEILING);
    if inside_low && member(top) {
        return Bracket {
            kind: BracketKind::PlusInfinity,
            lo: EXPONENT_CEILING,
            hi: f64::INFINITY,
            lo_kind: top,
            hi_kind: VerdictKind::Inconclusive,
            note: format!("member at the ceiling {EXPONENT_CEILING}"),
        };
    }
    if !inside_low && top == VerdictKind::Fails {
        return Bracket {
            kind: BracketKind::Empty,
            lo: EXPONENT_CEILING,
            hi: f64::INFINITY,
            lo_kind: top,
            hi_kind: VerdictKind::Inconclusive,
            note: format!("not a member at the ceiling {EXPONENT_CEILING}"),
        };
    }
    let (in_k, out_k) = (VerdictKind::Holds, VerdictKind::Fails);
    let (low_k, high_k) = if inside_low { (in_k, out_k) } else { (out_k, in_k) };
    let mut found = None;
    if test(EXPONENT_FLOOR as f64) == low_k {
        for t in EXPONENT_FLOOR + 1..=EXPONENT_CEILING as i32 {
            match test(t as f64) {
                k if k == low_k => continue,
                k if k == high_k => found = Some(((t - 1) as f64, t as f64)),
                _ => {}
            }
            break;
        }
    }
    let Some((mut lo, mut hi)) = found else {
        return Bracket {
            kind: BracketKind::Inconclusive,
            lo: f64::NAN,
            hi: f64::NAN,
            lo_kind: VerdictKind::Inconclusive,
            hi_kind: VerdictKind::Inconclusive,
            note: "no certified sign change on the integer grid".into(),
        };
    };
    let mut note = String::from("dyadic bisection");
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        match test(mid) {
            k if k == low_k => lo = mid,
            k if k == high_k => hi = mid,
            _ => {
                note = format!("stopped at an inconclusive midpoint {mid}");
                break;
            }
        }
    }
    Bracket {
        kind: BracketKind::Bracket,
        lo,
        hi,
        lo_kind: low_k,
        hi_kind: high_k,
        note,
    }
}

/// Bracket for `t0 = sup R_w`.
pub fn t0_estimate(w: &WeightSpec, tol: f64) -> Bracket {
    bisect(|t| rw_kind(w, t).0, true, tol)
}

/// Bracket for `s1 = inf S_w(1)`.
pub fn s1_estimate(w: &WeightSpec, tol: f64) -> Bracket {
    bisect(|s| sw1_kind(w, s), false, tol)
}
