use serde::Serialize;

use crate::numerics::{ln_factorial, ls_slope, ScaledSum};
use crate::weights::WeightSpec;

use super::ErgodicError;

/// `a_m = sup_{t in [0,1]} t (-ln t)^(m-1) / (m-1)! = ((m-1)/e)^(m-1) / (m-1)!`.
pub fn kernel_sup(m: u32) -> f64 {
    if m <= 1 {
        return 1.0;
    }
    let k = (m - 1) as f64;
    (k * (k.ln() - 1.0) - ln_factorial((m - 1) as u64)).exp()
}

/// Step in `u` and relative width of the geometric index blocks.
const STEP: f64 = 0.02;
const EXACT_INDICES: u64 = 2000;

/// Indices below this are evaluated through the integer weight formula.
const INTEGER_RANGE: f64 = 1e18;

/// `ln G(u)` with `G(u) = sum_n w(n) (1 - e^(-u))^(n-1)`.
///
/// Indices up to `EXACT_INDICES` are summed term by term, later ones in
/// geometric blocks of relative width `STEP` evaluated at their midpoint.
fn ln_generating(w: &WeightSpec, ln_w_head: &[f64], u: f64) -> Option<f64> {
    let ln_q = (-(-u).exp()).ln_1p();
    let mut s = ScaledSum::new();
    for (i, lw) in ln_w_head.iter().enumerate() {
        s.add_ln(lw + i as f64 * ln_q);
    }
    if ln_q == 0.0 {
        return None;
    }
    let mut a = (EXACT_INDICES + 1) as f64;
    loop {
        let b = (a * (1.0 + STEP)).ceil().max(a + 1.0);
        let mid = (a * (b - 1.0)).sqrt().round().clamp(a, b - 1.0);
        let lw = if mid < INTEGER_RANGE {
            w.ln_w(mid as u64)
        } else {
            w.family.ln_w_real(mid)?
        };
        let t = (b - a).ln() + lw + (mid - 1.0) * ln_q;
        s.add_ln(t);
        if t < s.ln() - 40.0 {
            let rest_small = || w.tail_bound_ln(b as u64, 1.0).is_some_and(|r| r < s.ln() - 40.0);
            if mid * -ln_q > 1.0 || (b < INTEGER_RANGE && rest_small()) {
                return Some(s.ln());
            }
        }
        if !b.is_finite() {
            return None;
        }
        a = b;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelTrace {
    pub weight: String,
    /// `(m, ||C^m e_1||_{1,w})`.
    pub norms: Vec<(u32, f64)>,
    /// `||T_[n] e_1||_{1,w}`, the running mean of `norms`.
    pub cesaro_norms: Vec<f64>,
    /// `exp` of the least-squares slope of `ln ||C^m e_1||` over the last half.
    pub growth_rate: Option<f64>,
    pub note: String,
}

/// `||C^m e_1||_{1,w} = (1/(m-1)!) int_0^inf G(u) u^(m-1) e^(-u) du` for `m = 1..=m_max`.
///
/// Not a section computation: the integral sees all coordinates, which is
/// what exposes growth carried by indices near `e^(2m)`.
pub fn kernel_norm_trace(w: &WeightSpec, m_max: u32) -> Result<KernelTrace, ErgodicError> {
    if m_max == 0 || m_max > 200 {
        return Err(ErgodicError::Range("kernel trace needs 1 <= m_max <= 200".into()));
    }
    let upper = 2.0 * m_max as f64 + 60.0;
    let head = w.ln_table(EXACT_INDICES);
    let nodes = (upper / STEP).ceil() as usize;
    let ln_g = (1..=nodes)
        .map(|j| {
            let u = j as f64 * STEP;
            ln_generating(w, &head, u).map(|g| (u, g))
        })
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| ErgodicError::Range(format!("no real continuation of {} for the kernel integral", w.id)))?;
    let mut norms = Vec::with_capacity(m_max as usize);
    for m in 1..=m_max {
        let k = (m - 1) as f64;
        let lf = ln_factorial((m - 1) as u64);
        let mut s = ScaledSum::new();
        if m == 1 {
            // trapezoid endpoint: G(0) = w(1)
            s.add_ln(head[0] + (0.5 * STEP).ln());
        }
        for &(u, g) in &ln_g {
            s.add_ln(g + k * u.ln() - u - lf + STEP.ln());
        }
        norms.push((m, s.value()));
    }
    let mut acc = 0.0;
    let cesaro_norms = norms
        .iter()
        .enumerate()
        .map(|(i, (_, v))| {
            acc += v;
            acc / (i + 1) as f64
        })
        .collect();
    let growth_rate = half_growth(&norms);
    Ok(KernelTrace {
        weight: w.id.clone(),
        norms,
        cesaro_norms,
        growth_rate,
        note: format!("trapezoid rule, step {STEP}, u <= {upper}; indices beyond {EXACT_INDICES} in geometric blocks"),
    })
}

/// Growth factor per step fitted on the last half of `(m, value)` pairs.
pub(crate) fn half_growth(points: &[(u32, f64)]) -> Option<f64> {
    let start = points.len() / 2;
    let (xs, ys): (Vec<f64>, Vec<f64>) = points[start..]
        .iter()
        .filter(|(_, v)| *v > 0.0)
        .map(|&(m, v)| (m as f64, v.ln()))
        .unzip();
    ls_slope(&xs, &ys).map(f64::exp)
}
