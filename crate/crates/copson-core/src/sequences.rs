//! Sequence generators, prefix/tail sums and analytic tail bounds.

use crate::error::{Error, Result};
use crate::kahan::{prefix_sums, suffix_sums};
use serde::{Deserialize, Serialize};

/// Closed interval [lo, hi] used for tail bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if hi < lo {
            return Err(Error::Sequence(format!("tail interval with hi < lo: [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    pub fn point(v: f64) -> Self {
        Self { lo: v, hi: v }
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn halfwidth(&self) -> f64 {
        0.5 * (self.hi - self.lo)
    }
}

/// Generator for the positive sequences used throughout.
#[derive(Debug, Clone, PartialEq)]
pub enum SequenceSpec {
    /// Constant term v.
    Const(f64),
    /// n -> n^a.
    Pow(f64),
    /// n -> v * r^{n-1}, 0 < r < 1.
    Geom { r: f64, v: f64 },
    /// Indicator of position m (1-based).
    Unit(usize),
    /// Explicit list of terms.
    Explicit(Vec<f64>),
    /// n -> n^{(c-p-1-eps)/p}, the extremal family for the Copson scans.
    ExtremalCopson { p: f64, c: f64, eps: f64 },
    /// x-side of the extremal pair for the tail-analogue scan:
    /// n -> n^b with b = ((a-1)(alpha p + 1) - eps)/p - 1, paired with
    /// lambda_n = n^{-a}.
    ExtremalBga { a: f64, alpha: f64, p: f64, eps: f64 },
}

impl SequenceSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            SequenceSpec::Const(v) => {
                if *v <= 0.0 {
                    return Err(Error::Sequence(format!("const term must be positive, got {v}")));
                }
            }
            SequenceSpec::Pow(_) => {}
            SequenceSpec::Geom { r, v } => {
                if !(0.0 < *r && *r < 1.0) {
                    return Err(Error::Sequence(format!("geometric ratio must be in (0,1), got {r}")));
                }
                if *v <= 0.0 {
                    return Err(Error::Sequence(format!("geometric scale must be positive, got {v}")));
                }
            }
            SequenceSpec::Unit(m) => {
                if *m == 0 {
                    return Err(Error::Sequence("unit position must be >= 1".into()));
                }
            }
            SequenceSpec::Explicit(vs) => {
                if vs.is_empty() {
                    return Err(Error::Sequence("explicit sequence is empty".into()));
                }
                if let Some(bad) = vs.iter().find(|v| !v.is_finite() || **v < 0.0) {
                    return Err(Error::Sequence(format!("explicit entries must be nonnegative finite, got {bad}")));
                }
            }
            SequenceSpec::ExtremalCopson { p, eps, .. } => {
                if *p <= 0.0 {
                    return Err(Error::Sequence(format!("p must be positive, got {p}")));
                }
                if *eps <= 0.0 {
                    return Err(Error::Sequence(format!("eps must be positive, got {eps}")));
                }
            }
            SequenceSpec::ExtremalBga { a, p, eps, .. } => {
                if *a <= 1.0 {
                    return Err(Error::Sequence(format!("extremal-bga requires a > 1, got {a}")));
                }
                if *p <= 0.0 {
                    return Err(Error::Sequence(format!("p must be positive, got {p}")));
                }
                if *eps <= 0.0 {
                    return Err(Error::Sequence(format!("eps must be positive, got {eps}")));
                }
            }
        }
        Ok(())
    }

    /// Power-law exponent of the term, when the spec is a pure power.
    pub fn power_exponent(&self) -> Option<f64> {
        match self {
            SequenceSpec::Pow(a) => Some(*a),
            SequenceSpec::ExtremalCopson { p, c, eps } => Some((c - p - 1.0 - eps) / p),
            SequenceSpec::ExtremalBga { a, alpha, p, eps } => {
                Some(((a - 1.0) * (alpha * p + 1.0) - eps) / p - 1.0)
            }
            _ => None,
        }
    }

    /// Generate the first `n` terms.
    pub fn materialize(&self, n: usize) -> Result<Vec<f64>> {
        self.validate()?;
        if n == 0 {
            return Err(Error::Sequence("N must be >= 1".into()));
        }
        let out = match self {
            SequenceSpec::Const(v) => vec![*v; n],
            SequenceSpec::Geom { r, v } => {
                let mut out = Vec::with_capacity(n);
                let mut t = *v;
                for _ in 0..n {
                    out.push(t);
                    t *= r;
                }
                out
            }
            SequenceSpec::Unit(m) => {
                if *m > n {
                    return Err(Error::Sequence(format!("unit position {m} exceeds N = {n}")));
                }
                let mut out = vec![0.0; n];
                out[m - 1] = 1.0;
                out
            }
            SequenceSpec::Explicit(vs) => {
                if vs.len() < n {
                    return Err(Error::Sequence(format!(
                        "explicit sequence has {} terms, {n} requested",
                        vs.len()
                    )));
                }
                vs[..n].to_vec()
            }
            _ => {
                let a = self.power_exponent().expect("remaining variants are power laws");
                (1..=n).map(|i| (i as f64).powf(a)).collect()
            }
        };
        Ok(out)
    }

    /// Interval bound on sum_{k>N} term(k).
    ///
    /// Power laws use the integral test; geometric tails are exact.
    pub fn tail_bound(&self, n: usize) -> Result<Interval> {
        self.validate()?;
        match self {
            SequenceSpec::Const(v) => Err(Error::NonSummable(format!("const:{v}"))),
            SequenceSpec::Geom { r, v } => {
                let tail = v * r.powi(n as i32) / (1.0 - r);
                Ok(Interval::point(tail))
            }
            SequenceSpec::Unit(_) | SequenceSpec::Explicit(_) => Ok(Interval::point(0.0)),
            _ => {
                let a = self.power_exponent().expect("power-law variant");
                if a >= -1.0 {
                    return Err(Error::NonSummable(format!("pow:{a}")));
                }
                let nn = n as f64;
                let lo = (nn + 1.0).powf(a + 1.0) / (-(a + 1.0));
                let hi = nn.powf(a + 1.0) / (-(a + 1.0));
                Interval::new(lo, hi)
            }
        }
    }

    /// True when every λ_n from this spec is strictly positive.
    pub fn strictly_positive(&self) -> bool {
        match self {
            SequenceSpec::Unit(_) => false,
            SequenceSpec::Explicit(vs) => vs.iter().all(|v| *v > 0.0),
            _ => true,
        }
    }
}

/// Tail-sum state of a summable weight sequence.
#[derive(Debug, Clone)]
pub struct TailInfo {
    /// Λ*_n = Σ_{k=n}^N λ_k + midpoint of the beyond-N interval.
    pub star: Vec<f64>,
    /// Interval bounding Σ_{k>N} λ_k.
    pub beyond: Interval,
}

/// Materialized weight sequence λ with prefix sums Λ and optional tail sums Λ*.
#[derive(Debug, Clone)]
pub struct Weights {
    pub values: Vec<f64>,
    /// Λ_n = Σ_{i<=n} λ_i (Λ_0 = 0 by convention, not stored).
    pub prefix: Vec<f64>,
    pub tail: Option<TailInfo>,
}

impl Weights {
    /// Build from raw values and an optional beyond-N tail interval.
    pub fn cumulate(values: Vec<f64>, tail_beyond: Option<Interval>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Sequence("weight sequence is empty".into()));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite() || **v <= 0.0) {
            return Err(Error::Sequence(format!("weights must be positive, got {bad}")));
        }
        let prefix = prefix_sums(&values);
        let tail = match tail_beyond {
            None => None,
            Some(iv) => {
                if iv.hi < iv.lo {
                    return Err(Error::Sequence("tail interval with hi < lo".into()));
                }
                Some(TailInfo { star: star_sums(&values, iv.mid()), beyond: iv })
            }
        };
        Ok(Self { values, prefix, tail })
    }

    /// Materialize a spec and its tail bound in one step.
    pub fn from_spec(spec: &SequenceSpec, n: usize) -> Result<Self> {
        let values = spec.materialize(n)?;
        if !spec.strictly_positive() {
            return Err(Error::Sequence("weight sequences must be strictly positive".into()));
        }
        let tail = spec.tail_bound(n).ok();
        Weights::cumulate(values, tail)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Λ*_n, present only for summable specs.
    pub fn star(&self) -> Option<&[f64]> {
        self.tail.as_ref().map(|t| t.star.as_slice())
    }

    /// Half-width of the beyond-N interval (0 when no tail).
    pub fn tail_halfwidth(&self) -> f64 {
        self.tail.as_ref().map_or(0.0, |t| t.beyond.halfwidth())
    }
}

/// Λ*_n = (Σ_{k=n}^N λ_k) + beyond, single reverse pass.
pub fn star_sums(values: &[f64], beyond: f64) -> Vec<f64> {
    let mut star = suffix_sums(values);
    for s in &mut star {
        *s += beyond;
    }
    star
}

/// A nonnegative test sequence paired with a Weights of the same length.
#[derive(Debug, Clone)]
pub struct TestSequence {
    pub values: Vec<f64>,
}

impl TestSequence {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(bad) = values.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::Sequence(format!("test sequence entries must be nonnegative, got {bad}")));
        }
        Ok(Self { values })
    }

    pub fn from_spec(spec: &SequenceSpec, n: usize) -> Result<Self> {
        Self::new(spec.materialize(n)?)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Parse the sequence mini-language:
/// `const:V`, `pow:A`, `geom:R[:V]`, `unit:M`, `file:PATH`,
/// `extremal-copson:EPS`, `extremal-bga:A,EPS`.
///
/// The extremal forms need the exponent context (p, c, alpha) of the
/// surrounding command.
pub fn parse_spec(s: &str, p: Option<f64>, c: Option<f64>, alpha: Option<f64>) -> Result<SequenceSpec> {
    let (kind, rest) = s
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("sequence spec `{s}` is missing `:`")))?;
    let spec = match kind {
        "const" => SequenceSpec::Const(parse_real(rest)?),
        "pow" => SequenceSpec::Pow(parse_real(rest)?),
        "geom" => match rest.split_once(':') {
            None => {
                let r = parse_real(rest)?;
                SequenceSpec::Geom { r, v: r }
            }
            Some((r, v)) => SequenceSpec::Geom { r: parse_real(r)?, v: parse_real(v)? },
        },
        "unit" => {
            let m: usize = rest
                .parse()
                .map_err(|_| Error::Parse(format!("bad unit position `{rest}`")))?;
            SequenceSpec::Unit(m)
        }
        "file" => {
            let text = std::fs::read_to_string(rest)?;
            let mut vals = Vec::new();
            for (i, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() {
                    continue;
                }
                let v = parse_real(line)
                    .map_err(|_| Error::Parse(format!("{rest}:{}: bad value `{line}`", i + 1)))?;
                vals.push(v);
            }
            SequenceSpec::Explicit(vals)
        }
        "extremal-copson" => {
            let eps = parse_real(rest)?;
            let p = p.ok_or_else(|| Error::Parse("extremal-copson needs --p".into()))?;
            let c = c.ok_or_else(|| Error::Parse("extremal-copson needs --c".into()))?;
            SequenceSpec::ExtremalCopson { p, c, eps }
        }
        "extremal-bga" => {
            let (a, eps) = rest
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("extremal-bga wants A,EPS, got `{rest}`")))?;
            let p = p.ok_or_else(|| Error::Parse("extremal-bga needs --p".into()))?;
            let alpha = alpha.ok_or_else(|| Error::Parse("extremal-bga needs --alpha".into()))?;
            SequenceSpec::ExtremalBga { a: parse_real(a)?, alpha, p, eps: parse_real(eps)? }
        }
        other => return Err(Error::Parse(format!("unknown sequence kind `{other}`"))),
    };
    spec.validate()?;
    Ok(spec)
}

fn parse_real(s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::Parse(format!("bad real `{s}`")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn materialize_const_and_pow() {
        assert_eq!(SequenceSpec::Const(1.0).materialize(5).unwrap(), vec![1.0; 5]);
        let v = SequenceSpec::Pow(-2.0).materialize(3).unwrap();
        assert!((v[0] - 1.0).abs() < 1e-15);
        assert!((v[1] - 0.25).abs() < 1e-15);
        assert!((v[2] - 1.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn extremal_copson_exponent() {
        // (c - p - 1 - eps)/p = -1 at p=2, c=2, eps=1.
        let v = SequenceSpec::ExtremalCopson { p: 2.0, c: 2.0, eps: 1.0 }
            .materialize(3)
            .unwrap();
        assert!((v[0] - 1.0).abs() < 1e-15);
        assert!((v[1] - 0.5).abs() < 1e-15);
        assert!((v[2] - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn tail_bound_integral_test() {
        let iv = SequenceSpec::Pow(-2.0).tail_bound(10).unwrap();
        assert!((iv.lo - 1.0 / 11.0).abs() < 1e-15);
        assert!((iv.hi - 0.1).abs() < 1e-15);
    }

    #[test]
    fn tail_bound_geometric_exact() {
        let iv = SequenceSpec::Geom { r: 0.5, v: 1.0 }.tail_bound(10).unwrap();
        assert_eq!(iv.lo, iv.hi);
        assert!((iv.lo - 2f64.powi(-9)).abs() < 1e-18);
    }

    #[test]
    fn tail_bound_finite_support() {
        let iv = SequenceSpec::Unit(1).tail_bound(10).unwrap();
        assert_eq!((iv.lo, iv.hi), (0.0, 0.0));
    }

    #[test]
    fn tail_bound_rejects_divergent() {
        assert!(SequenceSpec::Const(1.0).tail_bound(10).is_err());
        assert!(SequenceSpec::Pow(-1.0).tail_bound(10).is_err());
    }

    #[test]
    fn cumulate_geometric_star_sums() {
        // (1/2, 1/4, 1/8) with exact tail 1/8: star = (1, 1/2, 1/4).
        let w = Weights::cumulate(vec![0.5, 0.25, 0.125], Some(Interval::point(0.125))).unwrap();
        let star = w.star().unwrap();
        assert!((star[0] - 1.0).abs() < 1e-15);
        assert!((star[1] - 0.5).abs() < 1e-15);
        assert!((star[2] - 0.25).abs() < 1e-15);
    }

    #[test]
    fn cumulate_without_tail() {
        let w = Weights::cumulate(vec![1.0, 1.0, 1.0], None).unwrap();
        assert_eq!(w.prefix, vec![1.0, 2.0, 3.0]);
        assert!(w.star().is_none());
    }

    #[test]
    fn cumulate_rejects_nonpositive() {
        assert!(Weights::cumulate(vec![1.0, 0.0], None).is_err());
        assert!(Weights::cumulate(vec![1.0, -1.0], None).is_err());
    }

    #[test]
    fn parse_mini_language() {
        assert_eq!(parse_spec("const:1", None, None, None).unwrap(), SequenceSpec::Const(1.0));
        assert_eq!(parse_spec("pow:-2", None, None, None).unwrap(), SequenceSpec::Pow(-2.0));
        assert_eq!(
            parse_spec("geom:0.5", None, None, None).unwrap(),
            SequenceSpec::Geom { r: 0.5, v: 0.5 }
        );
        assert_eq!(
            parse_spec("geom:0.5:1", None, None, None).unwrap(),
            SequenceSpec::Geom { r: 0.5, v: 1.0 }
        );
        assert_eq!(parse_spec("unit:3", None, None, None).unwrap(), SequenceSpec::Unit(3));
        let sp = parse_spec("extremal-copson:0.5", Some(2.0), Some(2.0), None).unwrap();
        assert_eq!(sp, SequenceSpec::ExtremalCopson { p: 2.0, c: 2.0, eps: 0.5 });
        assert!(parse_spec("extremal-copson:0.5", None, None, None).is_err());
        assert!(parse_spec("nope:1", None, None, None).is_err());
    }
}
