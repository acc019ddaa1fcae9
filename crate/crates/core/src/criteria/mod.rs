//! Three-valued certified verdicts for the scalar criteria of the operator.

mod exponents;
pub(crate) mod operator;
pub(crate) mod profile;
mod sufficient;

use std::collections::BTreeMap;

use serde::Serialize;

pub use exponents::{
    rw_membership, s1_estimate, sw1_membership, t0_estimate, Bracket, BracketKind,
    EXPONENT_CEILING, EXPONENT_TOLERANCE,
};
pub use operator::{compactness_criterion, continuity_criterion, uw_quantity};
pub use profile::HORIZON_CAP;
pub use sufficient::{
    comparison_transfer, monotone_majorant_test, ratio_limsup_test, TransferReport,
};

/// `10^6`: partial sums beyond this multiple of their first term count as divergent.
pub const DIVERGENCE_FACTOR: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum VerdictKind {
    Holds,
    Fails,
    Inconclusive,
}

/// How a `Fails` verdict was reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FailPath {
    /// Certified analytic lower bound or divergence argument.
    Analytic,
    /// Partial sum exceeded [`DIVERGENCE_FACTOR`] times its first term.
    Threshold,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Witness {
    pub index: u64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub kind: VerdictKind,
    pub certified_bound: Option<f64>,
    pub witness: Option<Witness>,
    pub fail_path: Option<FailPath>,
    pub empirical_sup: f64,
    pub scan_horizon: u64,
    pub notes: Vec<String>,
}

impl Verdict {
    /// A `Holds` verdict; degrades to `Inconclusive` if the bound is not finite
    /// or does not dominate the empirical value.
    pub fn holds(bound: f64, empirical_sup: f64, scan_horizon: u64, note: impl Into<String>) -> Self {
        let mut v = Self {
            kind: VerdictKind::Holds,
            certified_bound: Some(bound),
            witness: None,
            fail_path: None,
            empirical_sup,
            scan_horizon,
            notes: vec![note.into()],
        };
        if !bound.is_finite() || empirical_sup > bound {
            v.kind = VerdictKind::Inconclusive;
            v.certified_bound = None;
            v.notes.push(format!("certificate {bound:e} rejected against empirical {empirical_sup:e}"));
        }
        v
    }

    pub fn fails(
        witness: Witness,
        path: FailPath,
        empirical_sup: f64,
        scan_horizon: u64,
        note: impl Into<String>,
    ) -> Self {
        Self {
            kind: VerdictKind::Fails,
            certified_bound: None,
            witness: Some(witness),
            fail_path: Some(path),
            empirical_sup,
            scan_horizon,
            notes: vec![note.into()],
        }
    }

    pub fn inconclusive(empirical_sup: f64, scan_horizon: u64, note: impl Into<String>) -> Self {
        Self {
            kind: VerdictKind::Inconclusive,
            certified_bound: None,
            witness: None,
            fail_path: None,
            empirical_sup,
            scan_horizon,
            notes: vec![note.into()],
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn is_holds(&self) -> bool {
        self.kind == VerdictKind::Holds
    }

    pub fn is_fails(&self) -> bool {
        self.kind == VerdictKind::Fails
    }
}

/// One scanned index: `value` is a lower estimate, `upper` a certified upper one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sample {
    pub n: u64,
    pub value: f64,
    pub upper: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionReport {
    pub criterion: String,
    pub params: BTreeMap<String, String>,
    pub verdict: Verdict,
    pub samples: Vec<Sample>,
    pub horizon: u64,
}

impl CriterionReport {
    pub(crate) fn new(criterion: &str, params: &[(&str, String)], verdict: Verdict, samples: Vec<Sample>) -> Self {
        Self {
            criterion: criterion.to_string(),
            params: params.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
            horizon: verdict.scan_horizon,
            verdict,
            samples,
        }
    }
}
