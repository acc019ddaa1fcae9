use std::sync::{Arc, Mutex, OnceLock};

use crate::numerics::Kahan;

use super::family::Family;
use super::{Minorant, RatioBound, WeightError, WeightSpec};

/// Indices up to which block sums are accumulated term by term.
const EXACT_HARMONIC_LIMIT: u64 = 10_000_000;
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const COMPACT_CACHE_LIMIT: u64 = 1 << 26;

/// Piecewise-constant weight on blocks `k_j < n <= k_(j+1)`.
#[derive(Debug, Clone)]
pub struct BlockWeightTable {
    /// `k_1 = 1 < k_2 < ...`.
    pub breakpoints: Vec<u64>,
    /// `ln w` on block `j`, i.e. on `(k_j, k_(j+1)]`.
    pub block_ln: Vec<f64>,
    /// `ln w(1)`.
    pub first_ln: f64,
    /// `sum_{m = k_j + 1}^{k_(j+1)} 1/m` per block.
    pub block_harmonic: Vec<f64>,
    /// Pointwise majorant, when the table was built below another weight.
    pub dominated_by: Option<Box<WeightSpec>>,
    /// Exponent of the sparse power construction, if this is one.
    pub sparse_alpha: Option<f64>,
}

impl BlockWeightTable {
    pub fn ln_w(&self, n: u64) -> f64 {
        if n <= 1 {
            return self.first_ln;
        }
        let idx = self.breakpoints.partition_point(|&k| k < n);
        let j = idx.clamp(1, self.block_ln.len());
        self.block_ln[j - 1]
    }

    /// Block containing `n`, 1-based, `None` for `n = 1` or past the table.
    pub fn block_of(&self, n: u64) -> Option<usize> {
        if n <= 1 {
            return None;
        }
        let idx = self.breakpoints.partition_point(|&k| k < n);
        (idx >= 1 && idx <= self.block_ln.len()).then_some(idx)
    }

    pub fn blocks(&self) -> usize {
        self.block_ln.len()
    }

    pub fn block_start(&self, j: usize) -> u64 {
        self.breakpoints[j - 1] + 1
    }

    pub fn block_end(&self, j: usize) -> u64 {
        self.breakpoints[j]
    }
}

fn harmonic_asymptotic(n: f64) -> f64 {
    let n2 = n * n;
    n.ln() + EULER_GAMMA + 1.0 / (2.0 * n) - 1.0 / (12.0 * n2) + 1.0 / (120.0 * n2 * n2)
}

/// Smallest `k >= from` with `acc + H(k) - H(from) > target`, using the
/// asymptotic expansion of the harmonic numbers (valid for large `from`).
fn asymptotic_breakpoint(from: u64, acc: f64, target: f64) -> Option<u64> {
    let h0 = harmonic_asymptotic(from as f64);
    let exceeds = |k: u64| acc + (harmonic_asymptotic(k as f64) - h0) > target;
    if !exceeds(u64::MAX) {
        return None;
    }
    let (mut lo, mut hi) = (from, u64::MAX);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if exceeds(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}

/// Greedy breakpoints `k_1 = 1` and minimal `k_(j+1)` with
/// `sum_{m = k_j + 1}^{k_(j+1)} 1/m > j`, as far as `u64` reaches.
///
/// Returns the breakpoints and the block harmonic sums.
pub fn greedy_breakpoints() -> (Vec<u64>, Vec<f64>) {
    static CACHE: OnceLock<(Vec<u64>, Vec<f64>)> = OnceLock::new();
    CACHE.get_or_init(compute_breakpoints).clone()
}

fn compute_breakpoints() -> (Vec<u64>, Vec<f64>) {
    let mut ks = vec![1u64];
    let mut sums = Vec::new();
    let mut j = 1usize;
    loop {
        let start = *ks.last().unwrap();
        let target = j as f64;
        let mut acc = Kahan::default();
        let mut m = start;
        let mut found = None;
        while m < EXACT_HARMONIC_LIMIT {
            m += 1;
            acc.add(1.0 / m as f64);
            if acc.value() > target {
                found = Some((m, acc.value()));
                break;
            }
        }
        let (k, s) = match found {
            Some(hit) => hit,
            None => match asymptotic_breakpoint(m, acc.value(), target) {
                Some(k) => {
                    let s = acc.value() + harmonic_asymptotic(k as f64) - harmonic_asymptotic(m as f64);
                    (k, s)
                }
                None => break,
            },
        };
        ks.push(k);
        sums.push(s);
        j += 1;
    }
    (ks, sums)
}

/// Decreasing block weight below `v` whose block harmonic sums exceed the block index.
///
/// Block values are `min_{k <= k_(j+1)} v(k)`. Blocks past `horizon` are
/// kept only when `v` is known to be non-increasing from some index within
/// the horizon.
pub fn build_failing_minorant(v: &WeightSpec, horizon: u64) -> Result<WeightSpec, WeightError> {
    let (ks, sums) = greedy_breakpoints();
    let ln_v = v.ln_table(horizon);
    let mut running = Vec::with_capacity(ln_v.len());
    let mut cur = f64::INFINITY;
    for &x in &ln_v {
        cur = cur.min(x);
        running.push(cur);
    }
    let completed = ks.iter().skip(1).filter(|&&k| k <= horizon).count();
    if completed < 2 {
        return Err(WeightError::HorizonTooSmall {
            horizon,
            blocks: completed,
        });
    }
    let lazy_tail = matches!(v.decreasing_from, Some(n0) if n0 <= horizon);
    let mut block_ln = Vec::new();
    let mut block_harmonic = Vec::new();
    for (j, &k) in ks.iter().enumerate().skip(1) {
        let value = if k <= horizon {
            running[(k - 1) as usize]
        } else if lazy_tail {
            running[(horizon - 1) as usize].min(v.ln_w(k))
        } else {
            break;
        };
        block_ln.push(value);
        block_harmonic.push(sums[j - 1]);
    }
    if block_ln[completed - 1] >= block_ln[0] {
        return Err(WeightError::OutOfRange {
            family: v.id.clone(),
            param: "inf".into(),
            value: block_ln[completed - 1].exp(),
            range: "a weight whose infimum 0 shows within the horizon",
        });
    }
    let blocks = block_ln.len();
    let table = BlockWeightTable {
        breakpoints: ks[..=blocks].to_vec(),
        block_ln,
        first_ln: running[0],
        block_harmonic,
        dominated_by: Some(Box::new(v.clone())),
        sparse_alpha: None,
    };
    let last = table.breakpoints[blocks];
    let mut spec = WeightSpec::bare(format!("minorant({})", v.id), Family::Blocks(Arc::new(table)));
    spec.decreasing_from = Some(1);
    if !lazy_tail {
        spec.defined_up_to = Some(last);
    }
    Ok(spec)
}

/// Weight `w(1) = 1`, `w(n) = (k_j + 1)^(-alpha)` on the greedy blocks.
pub fn sparse_power_weight(alpha: f64) -> Result<WeightSpec, WeightError> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(WeightError::OutOfRange {
            family: "sparsepow".into(),
            param: "alpha".into(),
            value: alpha,
            range: "(0, inf)",
        });
    }
    let (ks, sums) = greedy_breakpoints();
    let block_ln = ks[..ks.len() - 1]
        .iter()
        .map(|&k| -alpha * ((k as f64) + 1.0).ln())
        .collect();
    let table = BlockWeightTable {
        breakpoints: ks,
        block_ln,
        first_ln: 0.0,
        block_harmonic: sums,
        dominated_by: None,
        sparse_alpha: Some(alpha),
    };
    let mut spec = WeightSpec::bare(format!("sparsepow:alpha={alpha}"), Family::Blocks(Arc::new(table)));
    spec.decreasing_from = Some(1);
    spec.lower_minorant = Some(Minorant { c: 1.0, s: alpha });
    Ok(spec)
}

/// Lazily extended values of `u(1) = v(1)`, `u(n+1) = min(v(n+1), u(n)/(n+1))`.
#[derive(Debug)]
pub struct CompactMinorant {
    pub source: WeightSpec,
    cache: Mutex<Vec<f64>>,
}

impl CompactMinorant {
    fn new(source: WeightSpec) -> Self {
        let first = source.ln_w(1);
        Self {
            source,
            cache: Mutex::new(vec![first]),
        }
    }

    fn extend(&self, cache: &mut Vec<f64>, len: u64) {
        while (cache.len() as u64) < len {
            let n = cache.len() as u64;
            let prev = *cache.last().unwrap();
            let next = self.source.ln_w(n + 1).min(prev - ((n + 1) as f64).ln());
            cache.push(next);
        }
    }

    pub fn ln_w(&self, n: u64) -> f64 {
        let mut cache = self.cache.lock().expect("minorant cache poisoned");
        if n <= COMPACT_CACHE_LIMIT {
            self.extend(&mut cache, n);
            return cache[(n - 1) as usize];
        }
        self.extend(&mut cache, COMPACT_CACHE_LIMIT);
        let mut cur = cache[(COMPACT_CACHE_LIMIT - 1) as usize];
        drop(cache);
        for k in COMPACT_CACHE_LIMIT..n {
            cur = self.source.ln_w(k + 1).min(cur - ((k + 1) as f64).ln());
        }
        cur
    }

    pub fn ln_prefix(&self, len: u64) -> Vec<f64> {
        let mut cache = self.cache.lock().expect("minorant cache poisoned");
        let capped = len.min(COMPACT_CACHE_LIMIT);
        self.extend(&mut cache, capped);
        let mut out = cache[..capped as usize].to_vec();
        drop(cache);
        for n in capped + 1..=len {
            out.push(self.ln_w(n));
        }
        out
    }
}

impl Clone for CompactMinorant {
    fn clone(&self) -> Self {
        let cache = self.cache.lock().expect("minorant cache poisoned").clone();
        Self {
            source: self.source.clone(),
            cache: Mutex::new(cache),
        }
    }
}

/// Decreasing weight `u <= v` with `u(n+1) <= u(n)/(n+1)`.
pub fn build_compact_minorant(v: &WeightSpec) -> WeightSpec {
    let family = Family::CompactMinorant(Arc::new(CompactMinorant::new(v.clone())));
    let mut spec = WeightSpec::bare(format!("compact({})", v.id), family);
    spec.decreasing_from = Some(1);
    spec.ratio_bound = Some(RatioBound { from: 1, r: 0.5 });
    spec.rapidly_decreasing = true;
    spec.summable = Some(super::Summability {
        summable: true,
        note: "u(n) <= u(1)/n!",
    });
    spec
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::catalog_weight;

    #[test]
    fn greedy_first_blocks() {
        let (ks, sums) = greedy_breakpoints();
        assert_eq!(ks[0], 1);
        assert_eq!(ks[1], 4);
        assert!(ks.len() >= 8);
        for (j, s) in sums.iter().enumerate() {
            assert!(*s > (j + 1) as f64);
        }
    }

    #[test]
    fn compact_minorant_of_harmonic() {
        let v = catalog_weight("poly", &[("alpha", 1.0)]).unwrap();
        let u = build_compact_minorant(&v);
        let want = [1.0, 0.5, 1.0 / 6.0, 1.0 / 24.0];
        for (n, w) in want.iter().enumerate() {
            assert!((u.ln_w(n as u64 + 1).exp() - w).abs() < 1e-15);
        }
    }

    #[test]
    fn failing_minorant_needs_two_blocks() {
        let v = catalog_weight("poly", &[("alpha", 1.0)]).unwrap();
        assert!(matches!(
            build_failing_minorant(&v, 10),
            Err(WeightError::HorizonTooSmall { .. })
        ));
        assert!(build_failing_minorant(&v, 1000).is_ok());
    }
}
