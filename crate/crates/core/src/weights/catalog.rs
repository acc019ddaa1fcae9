use super::blocks::{build_compact_minorant, build_failing_minorant, sparse_power_weight};
use super::family::Family;
use super::{Minorant, RatioBound, Summability, WeightError, WeightSpec};

/// Catalog entry: name, parameters with documented ranges, and a summary.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct FamilyInfo {
    pub name: &'static str,
    pub params: &'static [(&'static str, &'static str)],
    pub formula: &'static str,
    pub metadata: &'static str,
}

pub const FAMILIES: &[FamilyInfo] = &[
    FamilyInfo {
        name: "poly",
        params: &[("alpha", "[0, inf)")],
        formula: "n^(-alpha)",
        metadata: "decreasing; minorant (1, alpha); power tail 1/(delta (m-1)^delta)",
    },
    FamilyInfo {
        name: "loggamma",
        params: &[("gamma", "(0, inf)")],
        formula: "gamma <= 1: w(1) = 2, log(n)^(-gamma); gamma > 1: log(n+1)^(-gamma)",
        metadata: "decreasing; not summable; tails only for beta < 0 (and beta = 0, gamma > 1)",
    },
    FamilyInfo {
        name: "geom",
        params: &[("r", "(0, 1)"), ("beta", "[0, inf), default 0")],
        formula: "n^beta r^n",
        metadata: "ratio bound; summable; rapidly decreasing",
    },
    FamilyInfo {
        name: "superfact",
        params: &[],
        formula: "n^(-n)",
        metadata: "ratio bound (1, 1/4); rapidly decreasing",
    },
    FamilyInfo {
        name: "factorial",
        params: &[("a", "(0, inf), default 1")],
        formula: "a^n / n!",
        metadata: "ratio a/(n+1); rapidly decreasing",
    },
    FamilyInfo {
        name: "expbeta",
        params: &[("beta", "(0, inf)")],
        formula: "exp(-n^beta)",
        metadata: "decreasing; incomplete-gamma tails; rapidly decreasing",
    },
    FamilyInfo {
        name: "explog",
        params: &[("gamma", "(1, inf)")],
        formula: "exp(-log(n)^gamma)",
        metadata: "decreasing; Laplace-type tails; rapidly decreasing",
    },
    FamilyInfo {
        name: "spike",
        params: &[],
        formula: "1 at n = 2^k, 1/n elsewhere",
        metadata: "not in c0; minorant (1, 1); not summable",
    },
    FamilyInfo {
        name: "block313",
        params: &[],
        formula: "w(1) = w(2) = 1, 2^(-i) 2^(-(i+1) 2^(i+1)) on 2^i < n <= 2^(i+1)",
        metadata: "decreasing; rapidly decreasing; dyadic block tails",
    },
    FamilyInfo {
        name: "block413",
        params: &[("alpha", "(1, inf)")],
        formula: "w(1) = w(2) = 1, i^(-alpha) 2^(1-i) on 2^i < n <= 2^(i+1)",
        metadata: "decreasing; summable; n w(n) not summable",
    },
    FamilyInfo {
        name: "alternating",
        params: &[],
        formula: "w(1) = 1, w(n+1)/w(n) = 1/p at n = 2p-1, 1/2 at even n",
        metadata: "ratio bound (2, 1/2); rapidly decreasing",
    },
    FamilyInfo {
        name: "polylog",
        params: &[("alpha", "[0, inf)"), ("beta", "[0, inf)")],
        formula: "n^(-alpha) log(n+1)^(-beta)",
        metadata: "decreasing; power tails",
    },
    FamilyInfo {
        name: "sparsepow",
        params: &[("alpha", "(0, inf)")],
        formula: "w(1) = 1, (k_j + 1)^(-alpha) on greedy harmonic blocks",
        metadata: "decreasing; minorant (1, alpha)",
    },
    FamilyInfo {
        name: "compact(<weight>)",
        params: &[],
        formula: "u(1) = v(1), u(n+1) = min(v(n+1), u(n)/(n+1))",
        metadata: "ratio <= 1/(n+1); rapidly decreasing",
    },
    FamilyInfo {
        name: "failing(<weight>)",
        params: &[("horizon", "block construction horizon, default 1e6")],
        formula: "min_{k <= k_(j+1)} v(k) on greedy harmonic blocks",
        metadata: "decreasing; below v",
    },
];

/// Listing of catalog families, optionally restricted to one of them.
pub fn catalog_listing(filter: Option<&str>) -> Result<Vec<FamilyInfo>, WeightError> {
    match filter {
        None => Ok(FAMILIES.to_vec()),
        Some(name) => {
            let hits: Vec<_> = FAMILIES
                .iter()
                .filter(|f| f.name == name || f.name.starts_with(&format!("{name}(")))
                .copied()
                .collect();
            if hits.is_empty() {
                Err(WeightError::UnknownFamily(name.to_string()))
            } else {
                Ok(hits)
            }
        }
    }
}

struct Params<'a> {
    family: &'a str,
    given: &'a [(&'a str, f64)],
    allowed: &'static [&'static str],
}

impl Params<'_> {
    fn check(&self) -> Result<(), WeightError> {
        for (k, v) in self.given {
            if !self.allowed.contains(k) {
                return Err(WeightError::Parse {
                    input: self.family.to_string(),
                    position: 0,
                    message: format!("unknown parameter `{k}`"),
                });
            }
            if !v.is_finite() {
                return Err(out_of_range(self.family, k, *v, "finite values"));
            }
        }
        Ok(())
    }

    fn get(&self, key: &str, default: Option<f64>) -> Result<f64, WeightError> {
        match self.given.iter().rev().find(|(k, _)| *k == key) {
            Some((_, v)) => Ok(*v),
            None => default.ok_or_else(|| WeightError::Parse {
                input: self.family.to_string(),
                position: 0,
                message: format!("missing parameter `{key}`"),
            }),
        }
    }
}

fn out_of_range(family: &str, param: &str, value: f64, range: &'static str) -> WeightError {
    WeightError::OutOfRange {
        family: family.to_string(),
        param: param.to_string(),
        value,
        range,
    }
}

fn allowed(family: &str) -> Option<&'static [&'static str]> {
    Some(match family {
        "poly" | "block413" | "sparsepow" => &["alpha"],
        "loggamma" | "explog" => &["gamma"],
        "geom" => &["r", "beta"],
        "factorial" => &["a"],
        "expbeta" => &["beta"],
        "polylog" => &["alpha", "beta"],
        "superfact" | "spike" | "block313" | "alternating" => &[],
        _ => return None,
    })
}

fn summable(summable: bool, note: &'static str) -> Option<Summability> {
    Some(Summability { summable, note })
}

/// Build a catalog weight with all metadata its family carries.
pub fn catalog_weight(family: &str, params: &[(&str, f64)]) -> Result<WeightSpec, WeightError> {
    let keys = allowed(family).ok_or_else(|| WeightError::UnknownFamily(family.to_string()))?;
    let p = Params {
        family,
        given: params,
        allowed: keys,
    };
    p.check()?;
    let spec = match family {
        "poly" => {
            let alpha = p.get("alpha", None)?;
            if alpha < 0.0 {
                return Err(out_of_range(family, "alpha", alpha, "[0, inf)"));
            }
            let mut s = WeightSpec::bare(format!("poly:alpha={alpha}"), Family::Poly { alpha });
            s.decreasing_from = Some(1);
            s.lower_minorant = Some(Minorant { c: 1.0, s: alpha });
            s.summable = summable(alpha > 1.0, "p-series");
            s
        }
        "loggamma" => {
            let gamma = p.get("gamma", None)?;
            if gamma <= 0.0 {
                return Err(out_of_range(family, "gamma", gamma, "(0, inf)"));
            }
            let mut s = WeightSpec::bare(format!("loggamma:gamma={gamma}"), Family::LogGamma { gamma });
            s.decreasing_from = Some(1);
            s.summable = summable(false, "terms do not tend to zero fast enough: w(n) >= c n^(-1/2)");
            s
        }
        "geom" => {
            let r = p.get("r", None)?;
            let beta = p.get("beta", Some(0.0))?;
            if !(r > 0.0 && r < 1.0) {
                return Err(out_of_range(family, "r", r, "(0, 1)"));
            }
            if beta < 0.0 {
                return Err(out_of_range(family, "beta", beta, "[0, inf)"));
            }
            let fam = Family::Geom { r, beta };
            let target = 0.5 * (1.0 + r);
            let mut from = 1u64;
            while fam.ratio_from(from).unwrap() > target {
                from *= 2;
            }
            let dec = if beta == 0.0 {
                1
            } else {
                (1.0 / (r.powf(-1.0 / beta) - 1.0)).ceil().max(1.0) as u64
            };
            let mut s = WeightSpec::bare(format!("geom:r={r},beta={beta}"), fam.clone());
            s.ratio_bound = Some(RatioBound {
                from,
                r: fam.ratio_from(from).unwrap(),
            });
            s.decreasing_from = Some(dec);
            s.summable = summable(true, "geometric decay");
            s.rapidly_decreasing = true;
            s
        }
        "superfact" => {
            let mut s = WeightSpec::bare("superfact", Family::SuperFact);
            s.ratio_bound = Some(RatioBound {
                from: 1,
                r: Family::SuperFact.ratio_from(1).unwrap(),
            });
            s.decreasing_from = Some(1);
            s.summable = summable(true, "n^(-n) <= 2^(1-n)");
            s.rapidly_decreasing = true;
            s
        }
        "factorial" => {
            let a = p.get("a", Some(1.0))?;
            if a <= 0.0 {
                return Err(out_of_range(family, "a", a, "(0, inf)"));
            }
            let fam = Family::Factorial { a };
            let from = (2.0 * a).ceil().max(1.0) as u64;
            let mut s = WeightSpec::bare(format!("factorial:a={a}"), fam.clone());
            s.ratio_bound = Some(RatioBound {
                from,
                r: fam.ratio_from(from).unwrap(),
            });
            s.decreasing_from = Some((a - 1.0).ceil().max(1.0) as u64);
            s.summable = summable(true, "exponential series");
            s.rapidly_decreasing = true;
            s
        }
        "expbeta" => {
            let beta = p.get("beta", None)?;
            if beta <= 0.0 {
                return Err(out_of_range(family, "beta", beta, "(0, inf)"));
            }
            let fam = Family::ExpBeta { beta };
            let mut s = WeightSpec::bare(format!("expbeta:beta={beta}"), fam.clone());
            if beta >= 1.0 {
                s.ratio_bound = Some(RatioBound {
                    from: 1,
                    r: fam.ratio_from(1).unwrap(),
                });
            }
            s.decreasing_from = Some(1);
            s.summable = summable(true, "stretched exponential decay");
            s.rapidly_decreasing = true;
            s
        }
        "explog" => {
            let gamma = p.get("gamma", None)?;
            if gamma <= 1.0 {
                return Err(out_of_range(family, "gamma", gamma, "(1, inf)"));
            }
            let mut s = WeightSpec::bare(format!("explog:gamma={gamma}"), Family::ExpLog { gamma });
            s.decreasing_from = Some(1);
            s.summable = summable(true, "faster than every power");
            s.rapidly_decreasing = true;
            s
        }
        "spike" => {
            let mut s = WeightSpec::bare("spike", Family::Spike);
            s.lower_minorant = Some(Minorant { c: 1.0, s: 1.0 });
            s.summable = summable(false, "w(n) >= 1/n");
            s
        }
        "block313" => {
            let mut s = WeightSpec::bare("block313", Family::Block313);
            s.decreasing_from = Some(1);
            s.summable = summable(true, "super-exponential block decay");
            s.rapidly_decreasing = true;
            s
        }
        "block413" => {
            let alpha = p.get("alpha", None)?;
            if alpha <= 1.0 {
                return Err(out_of_range(family, "alpha", alpha, "(1, inf)"));
            }
            let mut s = WeightSpec::bare(format!("block413:alpha={alpha}"), Family::Block413 { alpha });
            s.decreasing_from = Some(1);
            s.summable = summable(true, "block sums 2/i^alpha");
            s
        }
        "alternating" => {
            let mut s = WeightSpec::bare("alternating", Family::Alternating);
            s.ratio_bound = Some(RatioBound { from: 2, r: 0.5 });
            s.decreasing_from = Some(1);
            s.summable = summable(true, "ratio test");
            s.rapidly_decreasing = true;
            s
        }
        "polylog" => {
            let alpha = p.get("alpha", None)?;
            let beta = p.get("beta", None)?;
            if alpha < 0.0 {
                return Err(out_of_range(family, "alpha", alpha, "[0, inf)"));
            }
            if beta < 0.0 {
                return Err(out_of_range(family, "beta", beta, "[0, inf)"));
            }
            let mut s = WeightSpec::bare(
                format!("polylog:alpha={alpha},beta={beta}"),
                Family::PolyLog { alpha, beta },
            );
            s.decreasing_from = Some(1);
            if beta == 0.0 {
                s.lower_minorant = Some(Minorant { c: 1.0, s: alpha });
            }
            s.summable = summable(alpha > 1.0 || (alpha == 1.0 && beta > 1.0), "Bertrand series");
            s
        }
        "sparsepow" => sparse_power_weight(p.get("alpha", None)?)?,
        _ => unreachable!(),
    };
    Ok(spec)
}

/// Parse `family[:key=val[,key=val]]`, `compact(<weight>)` or
/// `failing(<weight>[;horizon])`.
pub fn parse_weight(input: &str) -> Result<WeightSpec, WeightError> {
    parse_at(input, input.trim(), input.len() - input.trim_start().len())
}

fn perr(input: &str, position: usize, message: impl Into<String>) -> WeightError {
    WeightError::Parse {
        input: input.to_string(),
        position,
        message: message.into(),
    }
}

fn parse_at(full: &str, s: &str, offset: usize) -> Result<WeightSpec, WeightError> {
    for wrapper in ["compact(", "failing("] {
        if let Some(rest) = s.strip_prefix(wrapper) {
            let inner_off = offset + wrapper.len();
            let body = rest
                .strip_suffix(')')
                .ok_or_else(|| perr(full, offset + s.len(), "missing `)`"))?;
            if wrapper == "compact(" {
                let v = parse_at(full, body, inner_off)?;
                return Ok(build_compact_minorant(&v));
            }
            let (inner, horizon) = match body.rfind(';') {
                Some(i) => {
                    let h = body[i + 1..].trim();
                    let hv: f64 = h
                        .parse()
                        .map_err(|_| perr(full, inner_off + i + 1, format!("bad horizon `{h}`")))?;
                    if !(hv >= 1.0 && hv <= 1e9) {
                        return Err(perr(full, inner_off + i + 1, "horizon must lie in [1, 1e9]"));
                    }
                    (&body[..i], hv as u64)
                }
                None => (body, 1_000_000),
            };
            let v = parse_at(full, inner, inner_off)?;
            return build_failing_minorant(&v, horizon);
        }
    }
    let (name, args, args_off) = match s.find(':') {
        Some(i) => (&s[..i], &s[i + 1..], offset + i + 1),
        None => (s, "", offset + s.len()),
    };
    if name.is_empty() {
        return Err(perr(full, offset, "empty family name"));
    }
    if allowed(name).is_none() {
        return Err(WeightError::UnknownFamily(name.to_string()));
    }
    let mut params: Vec<(&str, f64)> = Vec::new();
    if !args.is_empty() {
        let mut pos = args_off;
        for part in args.split(',') {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| perr(full, pos, format!("expected key=value, found `{part}`")))?;
            let key = k.trim();
            let val: f64 = v
                .trim()
                .parse()
                .map_err(|_| perr(full, pos + k.len() + 1, format!("bad number `{}`", v.trim())))?;
            let known = allowed(name).unwrap();
            let key = known
                .iter()
                .find(|&&a| a == key)
                .ok_or_else(|| perr(full, pos, format!("unknown parameter `{key}` for `{name}`")))?;
            params.push((key, val));
            pos += part.len() + 1;
        }
    }
    catalog_weight(name, &params)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grammar_round_trip() {
        let w = parse_weight("geom:r=0.5,beta=0").unwrap();
        assert_eq!(w.id, "geom:r=0.5,beta=0");
        assert_eq!(w.ratio_bound, Some(RatioBound { from: 1, r: 0.5 * (1.0 + 1e-14) }));
        let p = parse_weight("poly:alpha=2").unwrap();
        assert_eq!(p.lower_minorant, Some(Minorant { c: 1.0, s: 2.0 }));
        assert!(parse_weight("compact(poly:alpha=1)").is_ok());
        assert!(parse_weight("failing(poly:alpha=1;1000)").is_ok());
    }

    #[test]
    fn grammar_errors() {
        assert!(matches!(parse_weight("nope"), Err(WeightError::UnknownFamily(_))));
        assert!(matches!(
            parse_weight("geom:r=1.5"),
            Err(WeightError::OutOfRange { .. })
        ));
        match parse_weight("poly:alpha=x") {
            Err(WeightError::Parse { position, .. }) => assert_eq!(position, 11),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_weight("poly:beta=1"), Err(WeightError::Parse { .. })));
        assert!(matches!(parse_weight("compact(poly:alpha=1"), Err(WeightError::Parse { .. })));
    }

    #[test]
    fn listing_filters() {
        assert_eq!(catalog_listing(Some("poly")).unwrap().len(), 1);
        assert!(catalog_listing(Some("compact")).is_ok());
        assert!(catalog_listing(Some("zzz")).is_err());
        assert_eq!(catalog_listing(None).unwrap().len(), FAMILIES.len());
    }
}
