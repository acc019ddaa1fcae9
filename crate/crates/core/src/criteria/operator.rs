//! Continuity, compactness and the `U_w` quantity.

use crate::numerics::ceil_log2;
use crate::weights::{Family, WeightSpec};

use super::profile::{Profile, HORIZON_CAP};
use super::{CriterionReport, FailPath, Verdict, Witness, DIVERGENCE_FACTOR};

/// Bound on `sup_{n >= n0}` of a criterion sequence, and whether it tends to 0.
#[derive(Debug, Clone)]
pub(crate) struct Envelope {
    pub value: f64,
    pub vanishing: bool,
    pub note: String,
}

impl Envelope {
    pub(crate) fn new(value: f64, vanishing: bool, note: impl Into<String>) -> Option<Self> {
        (value.is_finite() && value >= 0.0).then(|| Self {
            value,
            vanishing,
            note: note.into(),
        })
    }
}

pub(crate) fn tightest(cands: impl IntoIterator<Item = Option<Envelope>>) -> Option<Envelope> {
    cands
        .into_iter()
        .flatten()
        .min_by(|a, b| a.value.total_cmp(&b.value))
}

/// `(c, s)` with `v(n) >= c n^(-s)` and `s <= s_max`.
pub(crate) fn minorant_up_to(v: &WeightSpec, s_max: f64) -> Option<(f64, f64)> {
    if let Some(m) = v.lower_minorant {
        if m.s <= s_max {
            return Some((m.c, m.s));
        }
    }
    v.minorant_at(s_max).map(|c| (c, s_max))
}

pub(crate) fn scan_horizon(weights: &[&WeightSpec], horizon: u64) -> u64 {
    weights
        .iter()
        .fold(horizon.clamp(2, HORIZON_CAP), |h, w| w.clamp_horizon(h))
        .max(1)
}

/// Evaluate a suffix-sum supremum: analytic failure first, then an
/// envelope-closed certificate, then divergence and threshold tests.
pub(crate) struct SupProblem<'a> {
    pub term_ln: &'a [f64],
    pub offset: u64,
    pub denom_ln: Vec<f64>,
    pub tail_ln: Option<f64>,
}

pub(crate) fn sup_verdict(
    problem: SupProblem<'_>,
    analytic_fail: Option<(Witness, String)>,
    envelope: Option<Envelope>,
    diverges: Option<&str>,
) -> (Verdict, Profile) {
    let first = problem.term_ln.get(problem.offset as usize).copied();
    let profile = Profile::new(problem.term_ln, problem.offset, problem.denom_ln, problem.tail_ln);
    let h = profile.h;
    let (_, emp) = profile.max_lower(1);
    if let Some((w, note)) = analytic_fail {
        return (Verdict::fails(w, FailPath::Analytic, emp, h, note), profile);
    }
    if let (Some(up), Some(env)) = (profile.max_upper(1), envelope.as_ref()) {
        let bound = up.max(env.value);
        let v = Verdict::holds(bound, emp, h, env.note.clone())
            .with_note(format!("dense certified maximum {up:.12e} on n <= {h}; envelope {:.12e} beyond", env.value));
        return (v, profile);
    }
    if let Some(reason) = diverges {
        let w = Witness {
            index: 1,
            value: profile.lower(1),
        };
        let note = format!("inner series diverges at n = 1 ({reason})");
        return (Verdict::fails(w, FailPath::Analytic, emp, h, note), profile);
    }
    if let Some(first) = first {
        let growth = profile.partial_ln(1) - first;
        if growth > DIVERGENCE_FACTOR.ln() {
            let w = Witness {
                index: h,
                value: growth.exp(),
            };
            let note = "partial inner sum exceeds 1e6 times its first term";
            return (Verdict::fails(w, FailPath::Threshold, emp, h, note), profile);
        }
    }
    let note = match (problem.tail_ln.is_some(), envelope.is_some()) {
        (false, _) => "no certified tail majorant for the inner series",
        (true, false) => "no certified envelope beyond the scan horizon",
        (true, true) => unreachable!(),
    };
    (Verdict::inconclusive(emp, h, note), profile)
}

fn largest_dyadic_plus_one(h: u64) -> Option<(u32, u64)> {
    let mut i = ceil_log2(h + 1);
    while i >= 1 {
        let n = (1u64 << i) + 1;
        if n <= h {
            return Some((i, n));
        }
        i -= 1;
    }
    None
}

fn continuity_envelope(v: &WeightSpec, w: &WeightSpec, n0: u64) -> Option<Envelope> {
    let n0 = n0.max(2);
    let x = n0 as f64;
    let power = w.power_tail(0.0).and_then(|(k, d)| {
        let (c, s) = minorant_up_to(v, d)?;
        Envelope::new(
            k / c * x.powf(s) * (x - 1.0).powf(-d),
            s < d,
            format!("power tail ({k:.6}, {d}) against minorant ({c:.6}, {s})"),
        )
    });
    let mut cands = vec![power];
    if v.id == w.id {
        cands.push(same_weight_envelope(w, n0));
    }
    tightest(cands)
}

/// Envelopes for `a_n = w(n)^(-1) sum_{m >= n} w(m)/m`, valid from `n0 >= 2`.
fn same_weight_envelope(w: &WeightSpec, n0: u64) -> Option<Envelope> {
    let x = n0 as f64;
    let ratio = w.term_ratio_bound(0.0).and_then(|(n1, q)| {
        let from = n0.max(n1) as f64;
        (n0 >= n1).then(|| ())?;
        Envelope::new(1.0 / (from * (1.0 - q)), true, format!("term ratio {q:.6} from n = {n1}"))
    });
    let family = match &w.family {
        Family::Spike => Envelope::new(x / (x - 1.0) + 2.0, false, "spike: a_n <= n/(n-1) + 2"),
        Family::Block313 | Family::Block413 { .. } if n0 >= 3 => {
            Envelope::new(2.0, false, "dyadic blocks: a_n <= 1 + sum of later block ratios <= 2")
        }
        Family::PolyLog { alpha, .. } if *alpha > 0.0 => Envelope::new(
            (x / (x - 1.0)).powf(*alpha) / alpha,
            false,
            "a_n <= (n/(n-1))^alpha / alpha",
        ),
        Family::ExpBeta { beta } if *beta < 1.0 => {
            let y = (x - 1.0).powf(*beta);
            Envelope::new(
                (x.powf(*beta) - y).exp() / (beta * y),
                true,
                "a_n <= exp(n^b - (n-1)^b) / (b (n-1)^b)",
            )
        }
        Family::ExpLog { gamma } if (x - 1.0).ln() > *gamma => {
            let g = gamma - 1.0;
            Envelope::new(
                (gamma * x.ln().powf(g) / (x - 1.0)).exp() / (gamma * (x - 1.0).ln().powf(g)),
                true,
                "a_n <= exp(g ln^(g-1) n / (n-1)) / (g ln^(g-1)(n-1))",
            )
        }
        _ => None,
    };
    tightest([ratio, family])
}

fn continuity_failure(v: &WeightSpec, w: &WeightSpec, h: u64) -> Option<(Witness, String)> {
    if v.id != w.id {
        return None;
    }
    match &w.family {
        Family::LogGamma { gamma } if *gamma > 1.0 => {
            let value = ((h + 1) as f64).ln() / (gamma - 1.0);
            Some((
                Witness { index: h, value },
                "a_n >= ln(n+1)/(gamma-1), unbounded".to_string(),
            ))
        }
        Family::Blocks(t) => {
            let j = (1..=t.blocks()).rev().find(|&j| t.block_end(j) <= h)?;
            Some((
                Witness {
                    index: t.block_start(j),
                    value: t.block_harmonic[j - 1],
                },
                format!(
                    "a at k_j + 1 is at least the block harmonic sum, which exceeds j = {j}; unbounded in j"
                ),
            ))
        }
        _ => None,
    }
}

fn ratio_note(v: &WeightSpec, w: &WeightSpec) -> Vec<(&'static str, String)> {
    vec![("v", v.id.clone()), ("w", w.id.clone())]
}

/// `M_{v,w} = sup_n v(n)^(-1) sum_{m >= n} w(m)/m`; when it holds this is `||C||`.
pub fn continuity_criterion(v: &WeightSpec, w: &WeightSpec, horizon: u64) -> CriterionReport {
    let (verdict, profile) = continuity_parts(v, w, horizon);
    let mut params = ratio_note(v, w);
    params.push(("requested_horizon", horizon.to_string()));
    CriterionReport::new("continuity", &params, verdict, profile.samples())
}

pub(crate) fn continuity_parts(v: &WeightSpec, w: &WeightSpec, horizon: u64) -> (Verdict, Profile) {
    let h = scan_horizon(&[v, w], horizon);
    let term: Vec<f64> = w
        .ln_table(h)
        .iter()
        .enumerate()
        .map(|(i, lw)| lw - ((i + 1) as f64).ln())
        .collect();
    let denom = if v.id == w.id {
        w.ln_table(h)
    } else {
        v.ln_table(h)
    };
    let problem = SupProblem {
        term_ln: &term,
        offset: 0,
        denom_ln: denom,
        tail_ln: w.tail_bound_ln(h + 1, 0.0),
    };
    let (verdict, profile) = sup_verdict(
        problem,
        continuity_failure(v, w, h),
        continuity_envelope(v, w, h + 1),
        w.series_diverges(0.0),
    );
    let verdict = if verdict.is_holds() {
        verdict.with_note("operator norm equals M_{v,w}")
    } else {
        verdict
    };
    (verdict, profile)
}

fn compactness_failure(v: &WeightSpec, w: &WeightSpec, h: u64) -> Option<(Witness, String)> {
    if v.id != w.id {
        return None;
    }
    match &w.family {
        Family::Poly { alpha } if *alpha > 0.0 => Some((
            Witness {
                index: h,
                value: 1.0 / alpha,
            },
            "a_n >= n^alpha * integral_n^inf s^(-alpha-1) ds = 1/alpha for every n".into(),
        )),
        Family::PolyLog { alpha, beta } if *alpha > 0.0 => {
            let c = 2f64.powf(-alpha - 1.0) * (2f64.ln() / 3f64.ln()).powf(*beta);
            Some((
                Witness { index: h, value: c },
                "a_n >= n terms of sum_{m=n}^{2n} against w(n): 2^(-alpha-1) (ln 2 / ln 3)^beta".into(),
            ))
        }
        Family::Spike => {
            let (_, n) = largest_dyadic_plus_one(h)?;
            Some((
                Witness { index: n, value: 0.5 },
                "a_(2^k+1) >= (2^k+1) w(2^(k+1)) / 2^(k+1) >= 1/2 for every k".into(),
            ))
        }
        Family::Block313 | Family::Block413 { .. } => {
            let (_, n) = largest_dyadic_plus_one(h)?;
            Some((
                Witness { index: n, value: 0.5 },
                "a_(2^i+1) >= sum_{j=2^i+1}^{2^(i+1)} 1/j >= 1/2 for every i".into(),
            ))
        }
        _ => None,
    }
}

/// `lim_n v(n)^(-1) sum_{m >= n} w(m)/m = 0`.
pub fn compactness_criterion(v: &WeightSpec, w: &WeightSpec, horizon: u64) -> CriterionReport {
    let (cont, profile) = continuity_parts(v, w, horizon);
    let h = profile.h;
    let nt = (h / 10).max(2).min(h);
    let (_, tail_emp) = profile.max_lower(nt);
    let mut params = ratio_note(v, w);
    params.push(("requested_horizon", horizon.to_string()));
    params.push(("tail_from", nt.to_string()));
    let verdict = if cont.is_fails() {
        let mut f = cont.clone();
        f.notes.insert(0, "not continuous, hence not compact".into());
        f.empirical_sup = tail_emp;
        f
    } else if let Some((wit, note)) = compactness_failure(v, w, h) {
        Verdict::fails(wit, FailPath::Analytic, tail_emp, h, note)
    } else {
        let env = if v.id == w.id {
            tightest([continuity_envelope(v, w, nt), same_weight_envelope(w, nt)])
        } else {
            continuity_envelope(v, w, nt)
        };
        match env {
            Some(e) if e.vanishing && cont.is_holds() => {
                Verdict::holds(e.value, tail_emp, h, format!("envelope tends to 0: {}", e.note))
                    .with_note(format!("bound is sup over n >= {nt}"))
            }
            Some(e) if e.vanishing => Verdict::inconclusive(tail_emp, h, "vanishing envelope but continuity not certified")
                .with_note(e.note),
            _ => Verdict::inconclusive(tail_emp, h, "no vanishing envelope and no lower-bound certificate"),
        }
    };
    CriterionReport::new("compactness", &params, verdict, profile.samples())
}

fn uw_envelope(w: &WeightSpec, m0: u64) -> Option<Envelope> {
    let x = m0 as f64;
    let ratio = w.term_ratio_bound(1.0).and_then(|(n1, q)| {
        (m0 + 1 >= n1).then(|| ())?;
        Envelope::new(1.0 / (x * (1.0 - q)), true, format!("ratio {q:.6} from n = {n1}: u_m <= 1/(m(1-r))"))
    });
    let power = w.power_tail(1.0).and_then(|(k, d)| {
        let (c, s) = minorant_up_to(w, d + 1.0)?;
        Envelope::new(
            k / c * (x + 1.0).powf(s) * x.powf(-d - 1.0),
            s < d + 1.0,
            format!("power tail ({k:.6}, {d}) against minorant ({c:.6}, {s})"),
        )
    });
    let family = match &w.family {
        Family::PolyLog { alpha, .. } if *alpha > 1.0 => Envelope::new(
            ((x + 1.0) / x).powf(*alpha) / (alpha - 1.0),
            false,
            "u_m <= ((m+1)/m)^alpha / (alpha-1)",
        ),
        Family::Block313 if m0 >= 2 => {
            Envelope::new(2.0, false, "dyadic blocks: u_m <= 1 + 2 w(next block)/w(block) <= 2")
        }
        _ => None,
    };
    tightest([ratio, power, family])
}

fn uw_failure(w: &WeightSpec, h: u64) -> Option<(Witness, String)> {
    match &w.family {
        Family::Block413 { alpha } => {
            let (i, m) = largest_dyadic_plus_one(h.saturating_sub(1))?;
            let p = 2f64.powi(i as i32);
            let value = (i as f64 * p / (alpha - 1.0) - 1.0) / (p + 1.0);
            Some((
                Witness { index: m, value },
                format!("u at m = 2^i + 1 is at least (i 2^i/(alpha-1) - 1)/(2^i + 1), unbounded in i (here i = {i})"),
            ))
        }
        _ => None,
    }
}

/// `U_w = sup_m (m w(m+1))^(-1) sum_{n > m} w(n)`.
pub fn uw_quantity(w: &WeightSpec, horizon: u64) -> CriterionReport {
    let (verdict, profile) = uw_parts(w, horizon);
    let params = [("w", w.id.clone()), ("requested_horizon", horizon.to_string())];
    CriterionReport::new("uw", &params, verdict, profile.samples())
}

pub(crate) fn uw_parts(w: &WeightSpec, horizon: u64) -> (Verdict, Profile) {
    let h = scan_horizon(&[w], horizon + 1) - 1;
    let h = h.max(1);
    let table = w.ln_table(h + 1);
    let term = table[..h as usize].to_vec();
    let denom: Vec<f64> = (1..=h).map(|m| (m as f64).ln() + table[m as usize]).collect();
    let problem = SupProblem {
        term_ln: &term,
        offset: 1,
        denom_ln: denom,
        tail_ln: w.tail_bound_ln(h + 1, 1.0),
    };
    sup_verdict(problem, uw_failure(w, h), uw_envelope(w, h + 1), w.series_diverges(1.0))
}
