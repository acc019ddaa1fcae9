//! Iterates and Cesàro means of the operator, boundedness probes and the mean-ergodic identities.

mod identities;
mod kernel;

use std::fmt::Write;

use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::criteria::{s1_estimate, uw_quantity, Bracket, BracketKind, Verdict, VerdictKind, EXPONENT_TOLERANCE};
use crate::sections::{apply_cesaro, Scalar};
use crate::weights::WeightSpec;

pub use identities::{decomposition_project, ergodic_identity_check, range_identity_check, IdentityResidual};
pub use kernel::{kernel_norm_trace, kernel_sup, KernelTrace};

/// Default ceiling on `M * N` coordinate updates per trace.
pub const DEFAULT_BUDGET: u64 = 4_000_000_000;
/// Residual monotonicity is only asserted from this step on.
pub const BURN_IN: u32 = 10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ErgodicError {
    #[error("work {work} exceeds the budget {budget}")]
    Budget { work: u64, budget: u64 },
    #[error("{0}")]
    Range(String),
}

/// Finitely supported probe vectors.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Probe {
    /// `e_r`.
    Unit(usize),
    /// `1` on the section.
    OnesPrefix,
    Vector { id: String, values: Vec<f64> },
}

impl Probe {
    pub fn id(&self) -> String {
        match self {
            Probe::Unit(r) => format!("e{r}"),
            Probe::OnesPrefix => "ones".into(),
            Probe::Vector { id, .. } => id.clone(),
        }
    }

    /// `e<r>`, `ones`.
    pub fn parse(s: &str) -> Option<Self> {
        if s == "ones" {
            return Some(Probe::OnesPrefix);
        }
        let r: usize = s.strip_prefix('e')?.parse().ok()?;
        (r >= 1).then_some(Probe::Unit(r))
    }

    pub fn vector(&self, n: usize) -> Vec<f64> {
        match self {
            Probe::Unit(r) => {
                let mut v = vec![0.0; n];
                if *r <= n {
                    v[r - 1] = 1.0;
                }
                v
            }
            Probe::OnesPrefix => vec![1.0; n],
            Probe::Vector { values, .. } => {
                let mut v = values.clone();
                v.resize(n, 0.0);
                v
            }
        }
    }

    /// Whether the probe vanishes beyond the first `n` coordinates.
    fn supported_in(&self, n: usize) -> bool {
        match self {
            Probe::Unit(r) => *r <= n,
            Probe::OnesPrefix => true,
            Probe::Vector { values, .. } => values.iter().skip(n).all(|v| *v == 0.0),
        }
    }
}

/// Candidate limit of the iterates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum LimitCandidate {
    /// `c * 1`.
    Constant(f64),
    Zero,
    None,
}

impl LimitCandidate {
    /// `x_1 * 1` when `w` is certified summable, otherwise none.
    pub fn for_probe(w: &WeightSpec, x: &[f64]) -> Self {
        if w.tail_bound(1, 1.0).is_none() {
            return LimitCandidate::None;
        }
        match x.first() {
            Some(&c) if c != 0.0 => LimitCandidate::Constant(c),
            _ => LimitCandidate::Zero,
        }
    }

    fn value(self) -> Option<f64> {
        match self {
            LimitCandidate::Constant(c) => Some(c),
            LimitCandidate::Zero => Some(0.0),
            LimitCandidate::None => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceRecord {
    pub m: u32,
    pub norm: f64,
    /// `||y - candidate||_{1,w}` over the section.
    pub residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IterateTrace {
    pub probe: String,
    pub kind: TraceKind,
    pub records: Vec<TraceRecord>,
    pub limit_candidate: LimitCandidate,
    pub section: usize,
    /// Bound on the neglected coordinates beyond the section in every residual.
    pub tail_residual_bound: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TraceKind {
    /// `C^m x`.
    Powers,
    /// `T_[n] x`.
    CesaroMeans,
}

impl IterateTrace {
    /// `m,norm,residual`.
    pub fn csv(&self) -> String {
        let mut out = String::from("m,norm,residual\n");
        for r in &self.records {
            let res = r.residual.map(|v| format!("{v:.12e}")).unwrap_or_default();
            let _ = writeln!(out, "{},{:.12e},{res}", r.m, r.norm);
        }
        out
    }

    /// First recorded step with residual below `tol`.
    pub fn first_below(&self, tol: f64) -> Option<u32> {
        self.records.iter().find(|r| r.residual.is_some_and(|v| v < tol)).map(|r| r.m)
    }
}

fn check_budget(steps: u32, n: usize, budget: u64) -> Result<(), ErgodicError> {
    let work = steps as u64 * n as u64;
    if work > budget {
        return Err(ErgodicError::Budget { work, budget });
    }
    if n == 0 || steps == 0 {
        return Err(ErgodicError::Range("section size and step count must be positive".into()));
    }
    Ok(())
}

struct Norms {
    w: Vec<f64>,
}

impl Norms {
    fn new(spec: &WeightSpec, n: usize) -> Self {
        Self {
            w: spec.ln_table(n as u64).into_iter().map(f64::exp).collect(),
        }
    }

    fn norm<T: Scalar>(&self, y: &[T]) -> f64 {
        y.iter().zip(&self.w).map(|(v, w)| v.abs_f64() * w).sum()
    }

    fn residual<T: Scalar>(&self, y: &[T], c: &T) -> f64 {
        y.iter().zip(&self.w).map(|(v, w)| (v.clone() - c.clone()).abs_f64() * w).sum()
    }
}

fn tail_residual(w: &WeightSpec, probe: &Probe, x: &[f64], cand: LimitCandidate, n: usize) -> Option<f64> {
    let c = cand.value()?;
    if !probe.supported_in(n) {
        return None;
    }
    let sup = x.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    Some((c.abs() + sup) * w.tail_bound(n as u64 + 1, 1.0)?)
}

fn run_trace<T: Scalar>(
    w: &WeightSpec,
    probe: &Probe,
    steps: u32,
    n: usize,
    budget: u64,
    kind: TraceKind,
    lift: impl Fn(f64) -> T,
) -> Result<IterateTrace, ErgodicError> {
    check_budget(steps, n, budget)?;
    let xf = probe.vector(n);
    let cand = LimitCandidate::for_probe(w, &xf);
    let c = cand.value().map(&lift);
    let norms = Norms::new(w, n);
    let mut y: Vec<T> = xf.iter().map(|&v| lift(v)).collect();
    let mut sum = vec![T::zero(); n];
    let mut records = Vec::with_capacity(steps as usize);
    for m in 1..=steps {
        y = apply_cesaro(&y);
        let v = match kind {
            TraceKind::Powers => y.clone(),
            TraceKind::CesaroMeans => {
                let inv = T::from_ratio(1, m as i64);
                sum.iter_mut().zip(&y).for_each(|(s, a)| *s = s.clone() + a.clone());
                sum.iter().map(|s| s.clone() * inv.clone()).collect()
            }
        };
        records.push(TraceRecord {
            m,
            norm: norms.norm(&v),
            residual: c.as_ref().map(|c| norms.residual(&v, c)),
        });
    }
    Ok(IterateTrace {
        probe: probe.id(),
        kind,
        records,
        limit_candidate: cand,
        section: n,
        tail_residual_bound: tail_residual(w, probe, &xf, cand, n),
    })
}

/// Exact-arithmetic trace for `e_r` and `1` probes; norms are rounded only at the end of each step.
pub fn trace_exact(
    w: &WeightSpec,
    probe: &Probe,
    steps: u32,
    n: usize,
    budget: u64,
    kind: TraceKind,
) -> Result<IterateTrace, ErgodicError> {
    if matches!(probe, Probe::Vector { .. }) {
        return Err(ErgodicError::Range("exact traces take e<r> or ones probes".into()));
    }
    let lift = |v: f64| if v == 0.0 { BigRational::zero() } else { BigRational::from_ratio(v as i64, 1) };
    run_trace(w, probe, steps, n, budget, kind, lift)
}

/// `||C^m x||_{1,w}` and the residual to the candidate limit for `m = 1..=m_max`.
pub fn iterate_trace(w: &WeightSpec, probe: &Probe, m_max: u32, n: usize, budget: u64) -> Result<IterateTrace, ErgodicError> {
    run_trace(w, probe, m_max, n, budget, TraceKind::Powers, |v| v)
}

/// `||T_[k] x||_{1,w}` and residuals for `k = 1..=n_max`, in one pass over the powers.
pub fn cesaro_averages_trace(
    w: &WeightSpec,
    probe: &Probe,
    n_max: u32,
    n: usize,
    budget: u64,
) -> Result<IterateTrace, ErgodicError> {
    run_trace(w, probe, n_max, n, budget, TraceKind::CesaroMeans, |v| v)
}

/// `e_1..e_8` and `count` random unit-norm vectors supported on the first 16 coordinates.
pub fn default_probes(w: &WeightSpec, count: usize, seed: u64) -> Vec<Probe> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let norms = Norms::new(w, 16);
    let mut out: Vec<Probe> = (1..=8).map(Probe::Unit).collect();
    for i in 0..count {
        let v: Vec<f64> = (0..16).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let s = norms.norm(&v);
        out.push(Probe::Vector {
            id: format!("random{i}"),
            values: v.into_iter().map(|a| a / s).collect(),
        });
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeOutcome {
    pub probe: String,
    /// `sup_{m <= M} ||C^m x|| / ||x||` on the section.
    pub sup_ratio: f64,
    pub growth_rate: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Expectation {
    /// `U_w` is certified finite.
    Bounded,
    /// `s1 < 1` is certified: growth at least `(1/s1)^m` on `e_1`.
    Growth { rate_at_least: f64 },
    NoClaim,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerBoundReport {
    pub weight: String,
    pub steps: u32,
    pub section: usize,
    pub probes: Vec<ProbeOutcome>,
    pub uw: Verdict,
    pub s1: Bracket,
    pub expectation: Expectation,
    /// Section-free `||C^m e_1||` trace when growth is expected.
    pub kernel: Option<KernelTrace>,
    pub consistent: Option<bool>,
}

/// Empirical `sup_m ||C^m x|| / ||x||` per probe, cross-referenced with `U_w` and `s1`.
pub fn power_bounded_probe(
    w: &WeightSpec,
    m_max: u32,
    n: usize,
    probes: &[Probe],
    horizon: u64,
    budget: u64,
) -> Result<PowerBoundReport, ErgodicError> {
    check_budget(m_max, n.saturating_mul(probes.len().max(1)), budget)?;
    let outcomes = probes
        .par_iter()
        .map(|p| {
            let x = p.vector(n);
            let base = Norms::new(w, n).norm(&x);
            let t = iterate_trace(w, p, m_max, n, u64::MAX)?;
            let pts: Vec<(u32, f64)> = t.records.iter().map(|r| (r.m, r.norm)).collect();
            let sup = pts.iter().fold(1.0f64, |a, (_, v)| a.max(v / base));
            Ok(ProbeOutcome {
                probe: p.id(),
                sup_ratio: sup,
                growth_rate: kernel::half_growth(&pts),
            })
        })
        .collect::<Result<Vec<_>, ErgodicError>>()?;
    let uw = uw_quantity(w, horizon).verdict;
    let s1 = s1_estimate(w, EXPONENT_TOLERANCE);
    let s1_below_one = s1.kind == BracketKind::Bracket && s1.hi_kind == VerdictKind::Holds && s1.hi < 1.0 && s1.hi > 0.0;
    let expectation = if uw.is_holds() {
        Expectation::Bounded
    } else if s1_below_one {
        Expectation::Growth { rate_at_least: 1.0 / s1.hi }
    } else {
        Expectation::NoClaim
    };
    let kernel = match expectation {
        Expectation::Growth { .. } => kernel_norm_trace(w, 40).ok(),
        _ => None,
    };
    let consistent = match &expectation {
        Expectation::Bounded => Some(outcomes.iter().all(|o| o.growth_rate.is_none_or(|g| g <= 1.0 + 1e-6))),
        Expectation::Growth { rate_at_least } => kernel
            .as_ref()
            .and_then(|k| k.growth_rate)
            .map(|g| g >= 0.95 * rate_at_least),
        Expectation::NoClaim => None,
    };
    Ok(PowerBoundReport {
        weight: w.id.clone(),
        steps: m_max,
        section: n,
        probes: outcomes,
        uw,
        s1,
        expectation,
        kernel,
        consistent,
    })
}
