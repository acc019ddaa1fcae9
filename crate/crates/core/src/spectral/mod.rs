//! Spectrum, point spectrum and resolvent classification of complex points.

mod condition;
mod scan;

use num_complex::Complex64;
use serde::Serialize;

use crate::criteria::{
    compactness_criterion, continuity_criterion, rw_membership, s1_estimate, Bracket, BracketKind, FailPath, Verdict,
    VerdictKind, EXPONENT_TOLERANCE,
};
use crate::sections::{check_off_sigma0, SectionError, SIGMA0_EPS};
use crate::weights::WeightSpec;

pub use condition::{alpha_of, resolvent_condition};
pub use scan::{region_scan, scan_csv, Grid, GridError, MAX_GRID_POINTS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SpectralLabel {
    PointSpectrum,
    SpectrumCertified,
    ResolventCertified,
    Unknown,
}

impl SpectralLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            SpectralLabel::PointSpectrum => "PointSpectrum",
            SpectralLabel::SpectrumCertified => "SpectrumCertified",
            SpectralLabel::ResolventCertified => "ResolventCertified",
            SpectralLabel::Unknown => "Unknown",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Rule {
    /// `λ = 0` or `λ = 1/m` within the tolerance.
    Sigma0,
    /// Inside the disk `Re(1/λ) >= s1`.
    S1Disk,
    /// Compact operator off `Σ_0`.
    Compact,
    ResolventCondition,
    /// Certificates disagree.
    Conflict,
    None,
}

impl Rule {
    pub fn id(self) -> &'static str {
        match self {
            Rule::Sigma0 => "sigma0",
            Rule::S1Disk => "s1_disk",
            Rule::Compact => "compact",
            Rule::ResolventCondition => "resolvent_condition",
            Rule::Conflict => "conflict",
            Rule::None => "none",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Evidence {
    pub rule: Rule,
    pub kind: VerdictKind,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralClassification {
    pub re: f64,
    pub im: f64,
    pub alpha: Option<f64>,
    pub label: SpectralLabel,
    pub rule: Rule,
    /// Certified bound (or empirical value) of the resolvent condition when evaluated.
    pub sup_value: Option<f64>,
    pub evidence: Vec<Evidence>,
    pub diagnostic: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointSpectrumEntry {
    pub m: u64,
    pub lambda: f64,
    pub verdict: Verdict,
}

/// `1/m` for `m = 1..=m_max`, each with the verdict of `m - 1 in R_w`.
pub fn point_spectrum(w: &WeightSpec, m_max: u64, horizon: u64) -> Vec<PointSpectrumEntry> {
    (1..=m_max)
        .map(|m| {
            let mut verdict = rw_membership(w, (m - 1) as f64, horizon);
            if m == 1 {
                verdict = verdict.with_note("m = 1: w in l1");
            }
            PointSpectrumEntry {
                m,
                lambda: 1.0 / m as f64,
                verdict,
            }
        })
        .collect()
}

/// Reports shared by every classified point of one weight.
#[derive(Debug, Clone, Serialize)]
pub struct SpectralContext {
    pub weight: String,
    pub horizon: u64,
    pub eps: f64,
    pub continuity: Verdict,
    pub compactness: Verdict,
    pub s1: Bracket,
    pub point_spectrum: Vec<PointSpectrumEntry>,
    #[serde(skip)]
    spec: WeightSpec,
}

impl SpectralContext {
    pub fn build(w: &WeightSpec, horizon: u64, m_max: u64) -> Self {
        Self {
            weight: w.id.clone(),
            horizon,
            eps: SIGMA0_EPS,
            continuity: continuity_criterion(w, w, horizon).verdict,
            compactness: compactness_criterion(w, w, horizon).verdict,
            s1: s1_estimate(w, EXPONENT_TOLERANCE),
            point_spectrum: point_spectrum(w, m_max, horizon),
            spec: w.clone(),
        }
    }

    pub fn weight_spec(&self) -> &WeightSpec {
        &self.spec
    }

    /// Certified upper end of the `s1` bracket; the disk `Re(1/λ) >= s1_hi` lies in the spectrum.
    pub fn s1_upper(&self) -> Option<f64> {
        (self.s1.kind == BracketKind::Bracket && self.s1.hi_kind == VerdictKind::Holds).then_some(self.s1.hi)
    }

    fn rw_for(&self, m: u64) -> Verdict {
        match self.point_spectrum.get((m - 1) as usize) {
            Some(e) => e.verdict.clone(),
            None => rw_membership(&self.spec, (m - 1) as f64, self.horizon),
        }
    }
}

fn evidence(rule: Rule, kind: VerdictKind, note: impl Into<String>) -> Evidence {
    Evidence {
        rule,
        kind,
        note: note.into(),
    }
}

/// Rule cascade: `Σ_0`, the `s1` disk, compactness, then the resolvent condition.
pub fn classify_point(ctx: &SpectralContext, lambda: Complex64) -> SpectralClassification {
    let alpha = alpha_of(lambda);
    let mut out = SpectralClassification {
        re: lambda.re,
        im: lambda.im,
        alpha,
        label: SpectralLabel::Unknown,
        rule: Rule::None,
        sup_value: None,
        evidence: Vec::new(),
        diagnostic: None,
    };
    match check_off_sigma0(lambda, ctx.eps) {
        Err(SectionError::NearZero { .. }) => {
            out.label = SpectralLabel::SpectrumCertified;
            out.rule = Rule::Sigma0;
            out.evidence.push(evidence(Rule::Sigma0, VerdictKind::Holds, "lambda = 0 lies in the spectrum"));
            return out;
        }
        Err(SectionError::NearSigma { k, .. }) => {
            let v = ctx.rw_for(k);
            out.rule = Rule::Sigma0;
            out.label = if v.is_holds() {
                SpectralLabel::PointSpectrum
            } else {
                SpectralLabel::SpectrumCertified
            };
            let note = format!("lambda = 1/{k}; {} in R_w: {:?}", k - 1, v.kind);
            out.evidence.push(evidence(Rule::Sigma0, v.kind, note));
            return out;
        }
        _ => {}
    }
    let a = alpha.expect("nonzero off sigma0");
    if !ctx.continuity.is_holds() {
        out.evidence.push(evidence(Rule::None, ctx.continuity.kind, "continuity not certified"));
        return out;
    }
    let disk = ctx.s1_upper().filter(|&s| a >= s);
    let compact = ctx.compactness.is_holds();
    let (verdict, _) = condition::resolvent_parts(&ctx.spec, a, ctx.horizon);
    out.sup_value = verdict.certified_bound.or(Some(verdict.empirical_sup));
    let analytic_fail = verdict.is_fails() && verdict.fail_path == Some(FailPath::Analytic);
    let mut claims_spectrum = Vec::new();
    let mut claims_resolvent = Vec::new();
    if let Some(s) = disk {
        out.evidence.push(evidence(Rule::S1Disk, VerdictKind::Holds, format!("Re(1/lambda) = {a} >= s1_hi = {s}")));
        claims_spectrum.push(Rule::S1Disk);
    }
    if compact {
        out.evidence.push(evidence(Rule::Compact, VerdictKind::Holds, "compact operator: spectrum is Sigma_0"));
        claims_resolvent.push(Rule::Compact);
    }
    let rc_note = verdict.notes.first().cloned().unwrap_or_default();
    out.evidence.push(evidence(Rule::ResolventCondition, verdict.kind, rc_note));
    if verdict.is_holds() {
        claims_resolvent.push(Rule::ResolventCondition);
    } else if analytic_fail {
        claims_spectrum.push(Rule::ResolventCondition);
    }
    match (claims_spectrum.first(), claims_resolvent.first()) {
        (Some(s), Some(r)) => {
            out.rule = Rule::Conflict;
            out.diagnostic = Some(format!("{} certifies spectrum but {} certifies resolvent", s.id(), r.id()));
        }
        (Some(&s), None) => {
            out.label = SpectralLabel::SpectrumCertified;
            out.rule = s;
        }
        (None, Some(&r)) => {
            out.label = SpectralLabel::ResolventCertified;
            out.rule = r;
        }
        (None, None) => {}
    }
    out
}
