//! Sufficient tests: ratio limsup, monotone majorants, comparison transfer.

use serde::Serialize;

use crate::weights::WeightSpec;

use super::operator::{compactness_criterion, continuity_criterion, scan_horizon};
use super::{CriterionReport, FailPath, Sample, Verdict, Witness};

/// Relative rounding allowance for differences of `ln w` values.
const LN_ROUNDING: f64 = 8.0 * f64::EPSILON;

/// Certified lower estimate of `w(n+1)/w(n)` from two rounded logs.
fn ratio_lower(a: f64, b: f64) -> f64 {
    let err = LN_ROUNDING * (a.abs() + b.abs()) + 1e-15;
    (b - a - err).exp()
}

/// Sufficient compactness test `limsup w(n+1)/w(n) < 1`.
pub fn ratio_limsup_test(w: &WeightSpec, horizon: u64) -> CriterionReport {
    let h = scan_horizon(&[w], horizon + 1).saturating_sub(1).max(1);
    let table = w.ln_table(h + 1);
    let half = (h / 2).max(1);
    let ratio = |n: u64| ratio_lower(table[(n - 1) as usize], table[n as usize]);
    let emp = (half..=h).map(ratio).fold(0.0f64, f64::max);
    let samples = crate::numerics::scan_indices(100, h, 20)
        .into_iter()
        .map(|n| Sample {
            n,
            value: ratio(n),
            upper: None,
        })
        .collect();
    let params = [("w", w.id.clone()), ("requested_horizon", horizon.to_string())];
    let certified = w
        .ratio_bound
        .and_then(|b| w.ratio_from(half.max(b.from)))
        .filter(|r| *r < 1.0);
    let verdict = match certified {
        Some(r) => {
            let mut v = Verdict::holds(
                r,
                emp,
                h,
                format!("w(n+1)/w(n) <= {r:.12} for n >= {}", half.max(w.ratio_bound.unwrap().from)),
            );
            if let Some(l) = w.ratio_limit() {
                v = v.with_note(format!("limsup = {l}"));
            }
            v
        }
        None => Verdict::inconclusive(
            emp,
            h,
            "no certified ratio bound below 1; the ratio test is only sufficient",
        ),
    };
    CriterionReport::new("ratio_limsup", &params, verdict, samples)
}

/// `n^k w(n)` non-increasing from some `n(k) <= horizon/2` up to the horizon.
///
/// This is finite-horizon evidence, not a certificate.
pub fn monotone_majorant_test(w: &WeightSpec, k: u32, horizon: u64) -> Verdict {
    let h = scan_horizon(&[w], horizon);
    let table = w.ln_table(h);
    let g = |n: u64| k as f64 * (n as f64).ln() + table[(n - 1) as usize];
    let last_increase = (1..h).rev().find(|&n| g(n + 1) > g(n) + LN_ROUNDING * (g(n).abs() + 1.0));
    let nk = last_increase.map_or(1, |n| n + 1);
    if nk <= h / 2 {
        let value = g(nk).exp();
        Verdict::holds(value, value, h, format!("n^{k} w(n) non-increasing on [{nk}, {h}]"))
            .with_note("finite-horizon evidence")
            .with_note(format!("n({k}) = {nk}"))
    } else {
        let n = last_increase.unwrap();
        Verdict::fails(
            Witness {
                index: n,
                value: (g(n + 1) - g(n)).exp(),
            },
            FailPath::Threshold,
            g(n + 1).exp(),
            h,
            format!("n^{k} w(n) still increases at n = {n} > horizon/2"),
        )
        .with_note("finite-horizon evidence")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransferReport {
    /// First index from which `v/w` is non-increasing up to the horizon.
    pub ratio_monotone_from: Option<u64>,
    pub v_continuity: Verdict,
    pub v_compactness: Verdict,
    pub w_continuity: Verdict,
    pub w_compactness: Verdict,
    pub notes: Vec<String>,
}

/// Transfer verdicts along `v/w` non-increasing: continuity and compactness
/// pass from `w` to `v`, and their failures pass from `v` to `w`.
pub fn comparison_transfer(v: &WeightSpec, w: &WeightSpec, horizon: u64) -> TransferReport {
    let h = scan_horizon(&[v, w], horizon);
    let lv = v.ln_table(h);
    let lw = w.ln_table(h);
    let d = |n: u64| lv[(n - 1) as usize] - lw[(n - 1) as usize];
    let last_increase = (1..h).rev().find(|&n| {
        let tol = LN_ROUNDING * (lv[n as usize].abs() + lw[n as usize].abs() + 1.0);
        d(n + 1) > d(n) + tol
    });
    let n0 = last_increase.map_or(1, |n| n + 1);
    let monotone = (n0 <= h / 2).then_some(n0);

    let mut v_cont = continuity_criterion(v, v, horizon).verdict;
    let mut v_comp = compactness_criterion(v, v, horizon).verdict;
    let mut w_cont = continuity_criterion(w, w, horizon).verdict;
    let mut w_comp = compactness_criterion(w, w, horizon).verdict;
    let mut notes = vec![];
    match monotone {
        None => notes.push(format!("v/w still increases at n = {}; nothing transferred", n0 - 1)),
        Some(n0) => {
            notes.push(format!("v/w non-increasing on [{n0}, {h}] (finite-horizon evidence)"));
            if !v_cont.is_holds() && w_cont.is_holds() {
                v_cont = transfer_holds(&v_cont, &w_cont, &lv, n0, "continuity");
            }
            if !v_comp.is_holds() && w_comp.is_holds() {
                v_comp = moved(&w_comp, "compactness of C on l1(w) transfers to l1(v)");
            }
            if !w_cont.is_fails() && v_cont.is_fails() {
                w_cont = moved(&v_cont, "failure of continuity on l1(v) transfers to l1(w)");
            }
            if !w_comp.is_fails() && v_comp.is_fails() {
                w_comp = moved(&v_comp, "failure of compactness on l1(v) transfers to l1(w)");
            }
        }
    }
    TransferReport {
        ratio_monotone_from: monotone,
        v_continuity: v_cont,
        v_compactness: v_comp,
        w_continuity: w_cont,
        w_compactness: w_comp,
        notes,
    }
}

fn moved(src: &Verdict, note: &str) -> Verdict {
    let mut out = src.clone();
    out.notes.insert(0, note.to_string());
    out.notes.push("transfer relies on monotonicity checked up to the horizon".into());
    out
}

/// From `n0` on, `a^v_n <= a^w_n`; below `n0` the finite head is added explicitly.
fn transfer_holds(own: &Verdict, w_cont: &Verdict, lv: &[f64], n0: u64, what: &str) -> Verdict {
    let bound_w = w_cont.certified_bound.unwrap();
    let n0u = n0 as usize;
    let mut head = crate::numerics::ScaledSum::new();
    head.add_ln(lv[n0u - 1] + bound_w.ln());
    let mut bound = bound_w;
    for n in (1..n0u).rev() {
        head.add_ln(lv[n - 1] - (n as f64).ln());
        bound = bound.max((head.ln() - lv[n - 1]).exp() * (1.0 + 1e-12));
    }
    Verdict::holds(bound, own.empirical_sup, own.scan_horizon, format!("{what} transferred from w: a^v_n <= a^w_n for n >= {n0}"))
        .with_note("transfer relies on monotonicity checked up to the horizon")
}
