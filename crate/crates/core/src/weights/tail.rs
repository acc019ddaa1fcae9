//! Certified tail majorants, divergence certificates and power minorants.
//!
//! All tails are of the form `sum_{n >= m} w(n) n^(beta - 1)`.

use crate::numerics::{ceil_log2, dyadic_block, ScaledSum};

use super::family::Family;
use super::WeightSpec;

const LN2: f64 = std::f64::consts::LN_2;
/// Relative outward margin applied to every certified float bound.
const OUTWARD: f64 = 1e-12;
/// Longest run of explicit terms summed before a closed-form remainder.
const BRIDGE_LIMIT: u64 = 10_000_000;

fn term_ln(spec: &WeightSpec, n: u64, beta: f64) -> f64 {
    spec.ln_w(n) + (beta - 1.0) * (n as f64).ln()
}

/// Sum explicit terms `n in [m, m0)` and add `rest` (a log value) for the remainder.
fn bridged(spec: &WeightSpec, m: u64, m0: u64, beta: f64, rest: f64) -> Option<f64> {
    if m0 > m && m0 - m > BRIDGE_LIMIT {
        return None;
    }
    let mut s = ScaledSum::new();
    for n in m..m0 {
        s.add_ln(term_ln(spec, n, beta));
    }
    s.add_ln(rest);
    Some(s.ln() + OUTWARD)
}

pub(super) fn term_ratio_bound(spec: &WeightSpec, beta: f64) -> Option<(u64, f64)> {
    let limit = spec.ratio_limit()?;
    let target = 0.5 * (1.0 + limit);
    let n0 = spec.ratio_bound.map_or(1, |b| b.from).max(1);
    for j in 0..58 {
        let n = n0 << j;
        let r = spec.ratio_from(n)?;
        let growth = (1.0 + 1.0 / n as f64).powf(beta - 1.0).max(1.0);
        let q = r * growth;
        if q <= target && q < 1.0 {
            return Some((n, q));
        }
    }
    None
}

fn ratio_route(spec: &WeightSpec, m: u64, beta: f64) -> Option<f64> {
    let (n0, q) = term_ratio_bound(spec, beta)?;
    let start = m.max(n0);
    bridged(spec, m, start, beta, term_ln(spec, start, beta) - (1.0 - q).ln())
}

pub(super) fn power_tail(spec: &WeightSpec, beta: f64) -> Option<(f64, f64)> {
    match &spec.family {
        Family::Poly { alpha } if *alpha > beta => {
            let d = alpha - beta;
            Some((1.0 / d, d))
        }
        Family::PolyLog { alpha, beta: b } if *alpha > beta => {
            let d = alpha - beta;
            Some((1.0 / (d * LN2.powf(*b)), d))
        }
        Family::LogGamma { .. } if beta < 0.0 => {
            let wmax = spec.ln_w(1).exp();
            Some((wmax / -beta, -beta))
        }
        _ => None,
    }
}

fn power_form(k: f64, d: f64, m: u64) -> f64 {
    k.ln() - d * ((m - 1) as f64).ln() + OUTWARD
}

pub(super) fn tail_bound_ln(spec: &WeightSpec, m: u64, beta: f64) -> Option<f64> {
    if !beta.is_finite() {
        return None;
    }
    match &spec.family {
        Family::Poly { .. } => {
            let (k, d) = power_tail(spec, beta)?;
            bridged(spec, m, m.max(2), beta, power_form(k, d, m.max(2)))
        }
        Family::PolyLog { alpha, beta: b } => {
            if *alpha > beta {
                let m0 = m.max(2);
                let d = alpha - beta;
                let rest = -b * (m0 as f64).ln_1p().ln() - d.ln() - d * ((m0 - 1) as f64).ln();
                bridged(spec, m, m0, beta, rest)
            } else if *alpha == beta && *b > 1.0 {
                let m0 = m.max(3);
                let rest = -(b - 1.0).ln() - (b - 1.0) * ((m0 - 1) as f64).ln().ln();
                bridged(spec, m, m0, beta, rest)
            } else {
                None
            }
        }
        Family::LogGamma { gamma } => {
            if beta < 0.0 {
                let m0 = m.max(2);
                let d = -beta;
                let rest = spec.ln_w(m0) - d.ln() - d * ((m0 - 1) as f64).ln();
                bridged(spec, m, m0, beta, rest)
            } else if beta == 0.0 && *gamma > 1.0 {
                let m0 = m.max(3);
                let g = gamma - 1.0;
                let rest = -g.ln() - g * ((m0 - 1) as f64).ln().ln();
                bridged(spec, m, m0, beta, rest)
            } else {
                None
            }
        }
        Family::Spike => spike_tail(spec, m, beta),
        Family::Block313 => block313_tail(m, beta),
        Family::Block413 { alpha } => block413_tail(*alpha, m, beta),
        Family::ExpBeta { beta: b } if *b < 1.0 => expbeta_tail(spec, *b, m, beta),
        Family::ExpLog { gamma } => explog_tail(spec, *gamma, m, beta),
        Family::Blocks(t) => t.dominated_by.as_ref()?.tail_bound_ln(m, beta),
        Family::Custom(_) => None,
        _ => ratio_route(spec, m, beta),
    }
}

fn spike_tail(spec: &WeightSpec, m: u64, beta: f64) -> Option<f64> {
    if beta >= 1.0 {
        return None;
    }
    let m0 = m.max(2);
    let x = m0 as f64;
    let mut s = ScaledSum::new();
    s.add_ln((beta - 2.0) * x.ln());
    s.add_ln((beta - 1.0) * x.ln() - (1.0 - beta).ln());
    let k0 = ceil_log2(m0) as f64;
    s.add_ln(k0 * (beta - 1.0) * LN2 - (-(2f64.powf(beta - 1.0))).ln_1p());
    bridged(spec, m, m0, beta, s.ln())
}

fn block313_ln(i: f64) -> f64 {
    -(i + (i + 1.0) * 2f64.powf(i + 1.0)) * LN2
}

fn head_terms(m: u64, beta: f64, s: &mut ScaledSum) {
    for n in m..=2 {
        s.add_ln((beta - 1.0) * (n as f64).ln());
    }
}

/// Terms of the block containing `a`, from `a` to the block end.
fn partial_block(a: u64, beta: f64, ln_block: f64) -> (u32, f64) {
    let i = dyadic_block(a);
    let end = 2f64.powi(i as i32 + 1);
    let count = end - a as f64 + 1.0;
    let peak = if beta >= 1.0 { end } else { a as f64 };
    (i, count.ln() + ln_block + (beta - 1.0) * peak.ln())
}

fn block313_tail(m: u64, beta: f64) -> Option<f64> {
    let mut s = ScaledSum::new();
    head_terms(m, beta, &mut s);
    let a = m.max(3);
    let i0 = dyadic_block(a);
    let (_, first) = partial_block(a, beta, block313_ln(i0 as f64));
    s.add_ln(first);
    let mut prev = first;
    for i in i0 + 1..=62 {
        let fi = i as f64;
        let peak = if beta >= 1.0 { fi + 1.0 } else { fi };
        let t = fi * LN2 + block313_ln(fi) + (beta - 1.0) * peak * LN2;
        s.add_ln(t);
        if t - prev <= -LN2 && t < s.ln() - 40.0 {
            s.add_ln(t);
            return Some(s.ln() + OUTWARD);
        }
        prev = t;
    }
    None
}

fn block413_tail(alpha: f64, m: u64, beta: f64) -> Option<f64> {
    if beta > 1.0 {
        return None;
    }
    let mut s = ScaledSum::new();
    head_terms(m, beta, &mut s);
    let a = m.max(3);
    let i0 = dyadic_block(a);
    let fi = i0 as f64;
    let (_, first) = partial_block(a, beta, -alpha * fi.ln() - (fi - 1.0) * LN2);
    s.add_ln(first);
    let rest = if beta < 1.0 {
        LN2 + (fi + 1.0) * (beta - 1.0) * LN2
            - alpha * (fi + 1.0).ln()
            - (-(2f64.powf(beta - 1.0))).ln_1p()
    } else {
        LN2 + (1.0 - alpha) * fi.ln() - (alpha - 1.0).ln()
    };
    s.add_ln(rest);
    Some(s.ln() + OUTWARD)
}

fn expbeta_tail(spec: &WeightSpec, b: f64, m: u64, beta: f64) -> Option<f64> {
    let sp = beta / b;
    let mut m0 = m.max(1);
    if beta > 1.0 {
        m0 = m0.max(((beta - 1.0) / b).powf(1.0 / b).ceil() as u64 + 1);
    }
    if sp > 1.0 {
        m0 = m0.max((2.0 * (sp - 1.0)).powf(1.0 / b).ceil() as u64 + 1);
    }
    let x = (m0 as f64).powf(b);
    let mut gamma_ln = (sp - 1.0) * x.ln() - x;
    if sp > 1.0 {
        gamma_ln += (x / (x - (sp - 1.0))).ln();
    }
    let mut s = ScaledSum::new();
    s.add_ln(term_ln(spec, m0, beta));
    s.add_ln(gamma_ln - b.ln());
    bridged(spec, m, m0, beta, s.ln())
}

fn explog_tail(spec: &WeightSpec, gamma: f64, m: u64, beta: f64) -> Option<f64> {
    let need = beta + 0.5;
    let l_star = if need > 0.0 {
        (need / gamma).powf(1.0 / (gamma - 1.0))
    } else {
        0.0
    };
    if l_star > 40.0 {
        return None;
    }
    let m0 = m.max(3).max(l_star.exp().ceil() as u64 + 1);
    let l = ((m0 - 1) as f64).ln();
    let kappa = gamma * l.powf(gamma - 1.0) - beta;
    if kappa <= 0.0 {
        return None;
    }
    let rest = -l.powf(gamma) + beta * l - kappa.ln();
    bridged(spec, m, m0, beta, rest)
}

pub(super) fn series_diverges(spec: &WeightSpec, beta: f64) -> Option<&'static str> {
    if minorant_at(spec, beta).is_some() {
        return Some("w(n) >= c n^(-beta): terms dominate c/n");
    }
    match &spec.family {
        Family::LogGamma { gamma } if beta == 0.0 && *gamma <= 1.0 => {
            Some("integral test: sum 1/(n log^gamma n) diverges for gamma <= 1")
        }
        Family::PolyLog { alpha, beta: b } if beta == *alpha && *b <= 1.0 => {
            Some("integral test: sum 1/(n log^b(n+1)) diverges for b <= 1")
        }
        Family::Block413 { .. } if beta > 1.0 => {
            Some("dyadic block sums are at least 2 * 2^(i(beta-1)) / i^alpha")
        }
        _ => None,
    }
}

pub(super) fn minorant_at(spec: &WeightSpec, s: f64) -> Option<f64> {
    if let Some(mn) = spec.lower_minorant {
        if s >= mn.s {
            return Some(mn.c);
        }
    }
    match &spec.family {
        Family::LogGamma { gamma } if s > 0.0 => {
            let base = (std::f64::consts::E * s / gamma).powf(*gamma);
            if *gamma <= 1.0 {
                Some(base.min(2.0))
            } else {
                Some(base * 2f64.powf(-s))
            }
        }
        Family::PolyLog { alpha, beta } if s > *alpha && *beta > 0.0 => {
            let d = s - alpha;
            Some((std::f64::consts::E * d / beta).powf(*beta) * 2f64.powf(-d))
        }
        Family::Block413 { alpha } if s > 1.0 => {
            let h = |j: f64| LN2 + j * (s - 1.0) * LN2 - alpha * j.ln();
            let jstar = alpha / ((s - 1.0) * LN2);
            let mut low = h(1.0);
            for j in [jstar.floor(), jstar.ceil()] {
                if j >= 1.0 {
                    low = low.min(h(j));
                }
            }
            Some(low.exp().min(1.0) * (1.0 - 1e-12))
        }
        _ => None,
    }
}

pub(super) fn reciprocal_unbounded(spec: &WeightSpec, s: f64) -> Option<&'static str> {
    if spec.rapidly_decreasing {
        return Some("rapidly decreasing weight: 1/(n^s w(n)) grows for every s");
    }
    match &spec.family {
        Family::Poly { alpha } if s < *alpha => Some("1/(n^s w(n)) = n^(alpha - s)"),
        Family::Spike if s < 1.0 => Some("1/(n^s w(n)) = n^(1 - s) off powers of two"),
        Family::LogGamma { .. } if s <= 0.0 => Some("log^gamma grows against n^s, s <= 0"),
        Family::PolyLog { alpha, beta } if s < *alpha || (s == *alpha && *beta > 0.0) => {
            Some("n^(alpha - s) log^beta(n+1) is unbounded")
        }
        Family::Block413 { alpha: _ } if s <= 1.0 => {
            Some("at n = 2^i + 1: i^alpha 2^(i-1) / n^s is unbounded for s <= 1")
        }
        Family::Blocks(t) => match t.sparse_alpha {
            Some(alpha) if s < alpha => Some("at n = k_(j+1): (k_j + 1)^alpha / n^s is unbounded"),
            _ => None,
        },
        _ => None,
    }
}
