use num_complex::Complex64;

use crate::criteria::operator::{minorant_up_to, scan_horizon, sup_verdict, tightest, Envelope, SupProblem};
use crate::criteria::profile::Profile;
use crate::criteria::{CriterionReport, Verdict};
use crate::numerics::dyadic_block;
use crate::sections::{check_off_sigma0, SectionError};
use crate::weights::{Family, WeightSpec};

const EXPONENT_SLACK: f64 = 1e-12;

/// `Re(1/λ)`.
pub fn alpha_of(lambda: Complex64) -> Option<f64> {
    let n2 = lambda.norm_sqr();
    (n2 > 0.0).then(|| lambda.re / n2)
}

/// Bound on `sup_{m >= m0} q_m` where
/// `q_m = (m^a w(m))^(-1) sum_{n > m} w(n) n^(a-1)`.
fn resolvent_envelope(w: &WeightSpec, a: f64, m0: u64) -> Option<Envelope> {
    let x = m0 as f64;
    let ratio = w.term_ratio_bound(a).and_then(|(n1, q)| {
        (m0 >= n1).then_some(())?;
        Envelope::new(q / (x * (1.0 - q)), true, format!("term ratio {q:.6} from n = {n1}: q_m <= r/(m(1-r))"))
    });
    // `d + a` is the weight's own exponent up to rounding in `a`
    let power = w.power_tail(a).and_then(|(k, d)| {
        let (c, s) = minorant_up_to(w, d + a + EXPONENT_SLACK)?;
        let e = s - a - d;
        Envelope::new(
            k / c * x.powf(e.min(0.0)),
            e < -EXPONENT_SLACK,
            format!("power tail ({k:.6}, {d}) against minorant ({c:.6}, {s})"),
        )
    });
    let family = match &w.family {
        Family::Spike if a < 1.0 && m0 >= 2 => Envelope::new(
            1.0 / (1.0 - a) + 1.0 / (1.0 - 2f64.powf(a - 1.0)),
            false,
            "spike: 1/(1-a) + 1/(1-2^(a-1))",
        ),
        Family::Block313 if m0 >= 3 => {
            let i = dyadic_block(m0) as f64;
            let spread = a.abs() + (a - 1.0).abs() + 2.0;
            (2f64.powf(i) >= 4.0 * spread).then_some(())?;
            let e = (i + 1.0) + (i + 3.0) * (a - 1.0).abs() + (i + 1.0) * a.abs() - 2f64.powf(i + 1.0) * (i + 3.0);
            Envelope::new(
                2f64.powf(a - 1.0).max(1.0) + 2.0 * 2f64.powf(e),
                false,
                format!("dyadic blocks from block {i}: own block plus a doubly exponentially small remainder"),
            )
        }
        Family::Block413 { .. } if a < 1.0 && m0 >= 3 => {
            let g = 2f64.powf(a - 1.0);
            Envelope::new(
                1.0 + 2f64.powf((-a).max(0.0)) * g / (1.0 - g),
                false,
                "dyadic blocks: 1 + 2^max(0,-a) 2^(a-1)/(1-2^(a-1))",
            )
        }
        _ => None,
    };
    tightest([ratio, power, family])
}

pub(crate) fn resolvent_parts(w: &WeightSpec, a: f64, horizon: u64) -> (Verdict, Profile) {
    let h = scan_horizon(&[w], horizon);
    let table = w.ln_table(h);
    let term: Vec<f64> = table
        .iter()
        .enumerate()
        .map(|(i, lw)| lw + (a - 1.0) * ((i + 1) as f64).ln())
        .collect();
    let denom: Vec<f64> = table
        .iter()
        .enumerate()
        .map(|(i, lw)| lw + a * ((i + 1) as f64).ln())
        .collect();
    let problem = SupProblem {
        term_ln: &term,
        offset: 1,
        denom_ln: denom,
        tail_ln: w.tail_bound_ln(h + 1, a),
    };
    sup_verdict(problem, None, resolvent_envelope(w, a, h + 1), w.series_diverges(a))
}

/// `sup_m (m^a w(m))^(-1) sum_{n > m} w(n) n^(a-1)` with `a = Re(1/λ)`; finite iff `λ` is in the resolvent set.
pub fn resolvent_condition(w: &WeightSpec, lambda: Complex64, horizon: u64) -> Result<CriterionReport, SectionError> {
    check_off_sigma0(lambda, crate::sections::SIGMA0_EPS)?;
    let a = alpha_of(lambda).expect("nonzero after the sigma check");
    let (verdict, profile) = resolvent_parts(w, a, horizon);
    let params = [
        ("w", w.id.clone()),
        ("re", lambda.re.to_string()),
        ("im", lambda.im.to_string()),
        ("alpha", a.to_string()),
        ("requested_horizon", horizon.to_string()),
    ];
    Ok(CriterionReport::new("resolvent", &params, verdict, profile.samples()))
}
