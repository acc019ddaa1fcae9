//! Log-domain accumulation and small special functions.

use std::f64::consts::PI;

/// Below this natural log an `f64` exponential is subnormal or zero.
pub const LN_UNDERFLOW: f64 = -745.0;

/// Compensated sum of terms given by their natural logs.
///
/// The running total is stored as `exp(scale) * (sum + comp)` so that sums of
/// terms far below the double range keep full relative precision.
#[derive(Debug, Clone, Copy)]
pub struct ScaledSum {
    scale: f64,
    sum: f64,
    comp: f64,
}

impl Default for ScaledSum {
    fn default() -> Self {
        Self::new()
    }
}

impl ScaledSum {
    pub fn new() -> Self {
        Self {
            scale: f64::NEG_INFINITY,
            sum: 0.0,
            comp: 0.0,
        }
    }

    pub fn add_ln(&mut self, ln_term: f64) {
        if ln_term == f64::NEG_INFINITY {
            return;
        }
        if self.sum == 0.0 {
            self.scale = ln_term;
            self.sum = 1.0;
            self.comp = 0.0;
            return;
        }
        if ln_term > self.scale + 300.0 {
            let f = (self.scale - ln_term).exp();
            self.sum *= f;
            self.comp *= f;
            self.scale = ln_term;
        }
        let t = (ln_term - self.scale).exp();
        let y = t - self.comp;
        let s = self.sum + y;
        self.comp = (s - self.sum) - y;
        self.sum = s;
    }

    pub fn add(&mut self, term: f64) {
        debug_assert!(term >= 0.0);
        if term > 0.0 {
            self.add_ln(term.ln());
        }
    }

    /// Natural log of the total, `-inf` if empty.
    pub fn ln(&self) -> f64 {
        if self.sum <= 0.0 {
            f64::NEG_INFINITY
        } else {
            self.scale + (self.sum - self.comp).ln()
        }
    }

    pub fn value(&self) -> f64 {
        self.ln().exp()
    }
}

/// Plain compensated sum for well-scaled terms.
#[derive(Debug, Clone, Copy, Default)]
pub struct Kahan {
    sum: f64,
    comp: f64,
}

impl Kahan {
    pub fn add(&mut self, x: f64) {
        let y = x - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum - self.comp
    }
}

/// `ln(exp(a) + exp(b))`.
pub fn ln_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

const LN_FACT_TABLE_LEN: usize = 64;

fn ln_fact_small(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// `ln(n!)`, exact summation for small `n` and Stirling beyond.
pub fn ln_factorial(n: u64) -> f64 {
    if (n as usize) < LN_FACT_TABLE_LEN {
        return ln_fact_small(n as usize);
    }
    let x = n as f64;
    let x2 = x * x;
    x * x.ln() - x + 0.5 * (2.0 * PI * x).ln() + 1.0 / (12.0 * x) - 1.0 / (360.0 * x * x2)
        + 1.0 / (1260.0 * x * x2 * x2)
        - 1.0 / (1680.0 * x * x2 * x2 * x2)
}

/// Natural log of `binom(n, k)`.
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// Smallest `i` with `2^i >= n`.
pub fn ceil_log2(n: u64) -> u32 {
    if n <= 1 {
        0
    } else {
        64 - (n - 1).leading_zeros()
    }
}

/// Block index `i` with `2^i + 1 <= n <= 2^(i+1)`, for `n >= 3`.
pub fn dyadic_block(n: u64) -> u32 {
    debug_assert!(n >= 3);
    63 - (n - 1).leading_zeros()
}

/// Least-squares slope of `ys` against `xs`.
pub fn ls_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let k = xs.len();
    if k < 2 || ys.len() != k {
        return None;
    }
    let mx = xs.iter().sum::<f64>() / k as f64;
    let my = ys.iter().sum::<f64>() / k as f64;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    if sxx == 0.0 {
        None
    } else {
        Some(sxy / sxx)
    }
}

/// Harmonic block sum `sum_{m=a}^{b} 1/m`.
pub fn harmonic_range(a: u64, b: u64) -> f64 {
    let mut s = Kahan::default();
    for m in a..=b {
        s.add(1.0 / m as f64);
    }
    s.value()
}

/// Index plan for supremum scans: every `n <= dense`, then geometric steps
/// up to `horizon`, plus dyadic edges `2^i - 1, 2^i, 2^i + 1`.
pub fn scan_indices(dense: u64, horizon: u64, per_decade: u32) -> Vec<u64> {
    let mut out: Vec<u64> = (1..=dense.min(horizon)).collect();
    if horizon > dense {
        let ratio = 10f64.powf(1.0 / per_decade as f64);
        let mut x = dense.max(1) as f64;
        loop {
            x *= ratio;
            let n = x.round() as u64;
            if n >= horizon {
                break;
            }
            out.push(n);
        }
        out.push(horizon);
    }
    let mut p = 2u64;
    while p - 1 <= horizon {
        for n in [p - 1, p, p + 1] {
            if n >= 1 && n <= horizon {
                out.push(n);
            }
        }
        match p.checked_mul(2) {
            Some(q) => p = q,
            None => break,
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scaled_sum_matches_plain_sum() {
        let mut s = ScaledSum::new();
        for k in 1..=1000u32 {
            s.add(1.0 / k as f64);
        }
        let plain: f64 = (1..=1000u32).map(|k| 1.0 / k as f64).sum();
        assert!((s.value() - plain).abs() < 1e-12);
    }

    #[test]
    fn scaled_sum_survives_underflow() {
        let mut s = ScaledSum::new();
        s.add_ln(-2000.0);
        s.add_ln(-2000.0);
        assert!((s.ln() - (-2000.0 + 2f64.ln())).abs() < 1e-12);
        s.add_ln(-1000.0);
        assert!((s.ln() + 1000.0).abs() < 1e-12);
    }

    #[test]
    fn factorial_logs() {
        assert_eq!(ln_factorial(0), 0.0);
        assert!((ln_factorial(5) - 120f64.ln()).abs() < 1e-14);
        let direct = ln_fact_small(200);
        assert!((ln_factorial(200) - direct).abs() < 1e-9);
    }

    #[test]
    fn dyadic_helpers() {
        assert_eq!(dyadic_block(3), 1);
        assert_eq!(dyadic_block(4), 1);
        assert_eq!(dyadic_block(5), 2);
        assert_eq!(dyadic_block(8), 2);
        assert_eq!(dyadic_block(9), 3);
        assert_eq!(ceil_log2(8), 3);
        assert_eq!(ceil_log2(9), 4);
    }

    #[test]
    fn scan_plan_contains_edges() {
        let idx = scan_indices(100, 100_000, 20);
        assert!(idx.contains(&(1 << 16)));
        assert!(idx.contains(&((1 << 16) + 1)));
        assert!(idx.contains(&100_000));
        assert!(idx.windows(2).all(|w| w[0] < w[1]));
    }
}
