//! Truncated evaluation of the inequality families with three-valued verdicts.

use crate::error::{Error, Result};
use crate::kahan::KahanSum;
use crate::sequences::{star_sums, TestSequence, Weights};
use serde::{Deserialize, Serialize};

/// Exponent triple governing every formula.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub p: f64,
    #[serde(default)]
    pub c: f64,
    #[serde(default)]
    pub alpha: Option<f64>,
    #[serde(default)]
    pub reverse: bool,
}

impl Params {
    pub fn new(p: f64, c: f64) -> Self {
        Self { p, c, alpha: None, reverse: false }
    }

    pub fn with_alpha(p: f64, alpha: f64) -> Self {
        Self { p, c: 0.0, alpha: Some(alpha), reverse: false }
    }

    pub fn reversed(mut self) -> Self {
        self.reverse = true;
        self
    }

    pub fn alpha(&self) -> Result<f64> {
        self.alpha
            .ok_or_else(|| Error::InvalidParameter("alpha required for this family".into()))
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p > 0.0) {
            return Err(Error::InvalidParameter(format!("p must be positive, got {}", self.p)));
        }
        Ok(())
    }
}

/// The inequality families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    /// Forward Copson: prefix inner sums against Λ^{-c}, constant (p/(c-1))^p.
    C1,
    /// Tail Copson: tail inner sums against Λ^{-c}, constant (p/(1-c))^p.
    C2,
    /// Forward Leindler: prefix inner sums against Λ*^{-c}, constant (p/(1-c))^p.
    L1,
    /// Tail Leindler: tail inner sums against Λ*^{-c}, constant (p/(c-1))^p.
    L2,
    /// Tail form with Λ^α kernels, constant (αp+1)^p.
    BG,
    /// Its tail-sum analogue with Λ*^α kernels, constant (αp+1)^p.
    BGA,
    /// The difference-kernel reduction with constant (αp)^p.
    I34,
}

impl Family {
    pub fn needs_star(self) -> bool {
        matches!(self, Family::L1 | Family::L2 | Family::BGA | Family::I34)
    }

    pub fn needs_alpha(self) -> bool {
        matches!(self, Family::BG | Family::BGA | Family::I34)
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "C1" => Ok(Family::C1),
            "C2" => Ok(Family::C2),
            "L1" => Ok(Family::L1),
            "L2" => Ok(Family::L2),
            "BG" => Ok(Family::BG),
            "BGA" => Ok(Family::BGA),
            "I34" => Ok(Family::I34),
            other => Err(Error::Parse(format!("unknown family `{other}`"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::C1 => "C1",
            Family::C2 => "C2",
            Family::L1 => "L1",
            Family::L2 => "L2",
            Family::BG => "BG",
            Family::BGA => "BGA",
            Family::I34 => "I34",
        }
    }

    /// The constant multiplying rhs_sum.
    pub fn constant(self, params: &Params) -> Result<f64> {
        let p = params.p;
        let c = params.c;
        match self {
            Family::C1 | Family::L2 => {
                if c == 1.0 {
                    return Err(Error::InvalidParameter("c = 1 is a degenerate case".into()));
                }
                Ok((p / (c - 1.0)).powf(p))
            }
            Family::C2 | Family::L1 => {
                if c == 1.0 {
                    return Err(Error::InvalidParameter("c = 1 is a degenerate case".into()));
                }
                Ok((p / (1.0 - c)).powf(p))
            }
            Family::BG | Family::BGA => {
                let alpha = params.alpha()?;
                Ok((alpha * p + 1.0).powf(p))
            }
            Family::I34 => {
                let alpha = params.alpha()?;
                Ok((alpha * p).powf(p))
            }
        }
    }
}

/// Which difference kernel the I34 form uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum I34Direction {
    /// Prefix inner sums over Λ*_k^α − Λ*_{k+1}^α.
    #[default]
    TailDiff,
    /// Tail inner sums over Λ_k^α − Λ_{k-1}^α (Λ_0 = 0).
    ForwardDiff,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Holds,
    Fails,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Holds => write!(f, "HOLDS"),
            Verdict::Fails => write!(f, "FAILS"),
            Verdict::Inconclusive => write!(f, "INCONCLUSIVE"),
        }
    }
}

/// LHS/RHS of one inequality at truncation N, with error budget.
#[derive(Debug, Clone, Serialize)]
pub struct TruncationReport {
    pub family: String,
    pub p: f64,
    pub c: f64,
    pub alpha: Option<f64>,
    pub reverse: bool,
    #[serde(rename = "N")]
    pub n: usize,
    pub lhs: f64,
    pub rhs_sum: f64,
    pub constant: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub margin: f64,
    pub error_budget: f64,
    pub verdict: Verdict,
}

/// t^e with 0^e = 0 for any e (all bases are nonnegative by construction).
#[inline]
pub fn pow0(t: f64, e: f64) -> f64 {
    if t == 0.0 {
        0.0
    } else {
        t.powf(e)
    }
}

fn both_sides(
    family: Family,
    params: &Params,
    lam: &[f64],
    prefix: &[f64],
    star: Option<&[f64]>,
    star_next: f64,
    x: &[f64],
) -> Result<(f64, f64)> {
    let p = params.p;
    let c = params.c;
    let n = lam.len();
    let mut lhs = KahanSum::new();
    let mut rhs = KahanSum::new();
    match family {
        Family::C1 | Family::L1 => {
            // prefix inner sums, one forward pass
            let mut inner = KahanSum::new();
            for i in 0..n {
                inner.add(lam[i] * x[i]);
                let base = if family == Family::C1 { prefix[i] } else { star.unwrap()[i] };
                lhs.add(lam[i] * pow0(base, -c) * pow0(inner.value(), p));
                rhs.add(lam[i] * pow0(base, p - c) * pow0(x[i], p));
            }
        }
        Family::C2 | Family::L2 => {
            // tail inner sums, one reverse pass
            let mut inner = KahanSum::new();
            let mut lhs_terms = vec![0.0; n];
            for i in (0..n).rev() {
                inner.add(lam[i] * x[i]);
                lhs_terms[i] = pow0(inner.value(), p);
            }
            for i in 0..n {
                let base = if family == Family::C2 { prefix[i] } else { star.unwrap()[i] };
                lhs.add(lam[i] * pow0(base, -c) * lhs_terms[i]);
                rhs.add(lam[i] * pow0(base, p - c) * pow0(x[i], p));
            }
        }
        Family::BG => {
            let alpha = params.alpha()?;
            let mut inner = KahanSum::new();
            let mut xs = KahanSum::new();
            let mut inner_at = vec![0.0; n];
            let mut xs_at = vec![0.0; n];
            for i in (0..n).rev() {
                inner.add(pow0(prefix[i], alpha) * x[i]);
                xs.add(x[i]);
                inner_at[i] = inner.value();
                xs_at[i] = xs.value();
            }
            for i in 0..n {
                lhs.add(lam[i] * pow0(inner_at[i], p));
                rhs.add(lam[i] * pow0(prefix[i], alpha * p) * pow0(xs_at[i], p));
            }
        }
        Family::BGA => {
            let alpha = params.alpha()?;
            let st = star.ok_or(Error::MissingTail("BGA"))?;
            let mut inner = KahanSum::new();
            let mut xs = KahanSum::new();
            for i in 0..n {
                inner.add(pow0(st[i], alpha) * x[i]);
                xs.add(x[i]);
                lhs.add(lam[i] * pow0(inner.value(), p));
                rhs.add(lam[i] * pow0(st[i], alpha * p) * pow0(xs.value(), p));
            }
        }
        Family::I34 => {
            let alpha = params.alpha()?;
            let st = star.ok_or(Error::MissingTail("I34"))?;
            let mut inner = KahanSum::new();
            for i in 0..n {
                let next = if i + 1 < n { st[i + 1] } else { star_next };
                inner.add((pow0(st[i], alpha) - pow0(next, alpha)) * x[i]);
                lhs.add(lam[i] * pow0(inner.value(), p));
                rhs.add(lam[i] * pow0(st[i], alpha * p) * pow0(x[i], p));
            }
        }
    }
    Ok((lhs.value(), rhs.value()))
}

fn forward_diff_sides(params: &Params, lam: &[f64], prefix: &[f64], x: &[f64]) -> Result<(f64, f64)> {
    let p = params.p;
    let alpha = params.alpha()?;
    let n = lam.len();
    let mut inner = KahanSum::new();
    let mut inner_at = vec![0.0; n];
    for i in (0..n).rev() {
        let prev = if i == 0 { 0.0 } else { prefix[i - 1] };
        inner.add((pow0(prefix[i], alpha) - pow0(prev, alpha)) * x[i]);
        inner_at[i] = inner.value();
    }
    let mut lhs = KahanSum::new();
    let mut rhs = KahanSum::new();
    for i in 0..n {
        lhs.add(lam[i] * pow0(inner_at[i], p));
        rhs.add(lam[i] * pow0(prefix[i], alpha * p) * pow0(x[i], p));
    }
    Ok((lhs.value(), rhs.value()))
}

/// Evaluate one family at truncation N.
///
/// Tail uncertainty of Λ* enters by re-evaluating both sides at the
/// endpoints of the beyond-N interval; the spread goes into the error
/// budget.
pub fn eval_inequality(
    family: Family,
    params: &Params,
    lambda: &Weights,
    x: &TestSequence,
    direction: I34Direction,
) -> Result<TruncationReport> {
    params.validate()?;
    if family.needs_alpha() {
        params.alpha()?;
    }
    if lambda.len() != x.len() {
        return Err(Error::LengthMismatch { lambda: lambda.len(), x: x.len() });
    }
    let n = lambda.len();
    let constant = family.constant(params)?;

    let uses_star = match (family, direction) {
        (Family::I34, I34Direction::ForwardDiff) => false,
        (f, _) => f.needs_star(),
    };
    if uses_star && lambda.tail.is_none() {
        return Err(Error::MissingTail(family.name()));
    }

    let sides = |beyond: f64| -> Result<(f64, f64)> {
        if family == Family::I34 && direction == I34Direction::ForwardDiff {
            return forward_diff_sides(params, &lambda.values, &lambda.prefix, &x.values);
        }
        let star_vec;
        let star: Option<&[f64]> = if uses_star {
            let info = lambda.tail.as_ref().unwrap();
            if beyond == info.beyond.mid() {
                Some(&info.star)
            } else {
                star_vec = star_sums(&lambda.values, beyond);
                Some(&star_vec)
            }
        } else {
            None
        };
        both_sides(family, params, &lambda.values, &lambda.prefix, star, beyond, &x.values)
    };

    let beyond_mid = lambda.tail.as_ref().map_or(0.0, |t| t.beyond.mid());
    let (lhs, rhs_sum) = sides(beyond_mid)?;

    // Error budget: spread of both sides over the tail interval endpoints.
    let mut budget = 0.0;
    if uses_star {
        let info = lambda.tail.as_ref().unwrap();
        if info.beyond.halfwidth() > 0.0 {
            let (llo, rlo) = sides(info.beyond.lo)?;
            let (lhi, rhi) = sides(info.beyond.hi)?;
            budget += (lhs - llo).abs().max((lhs - lhi).abs());
            budget += constant * (rhs_sum - rlo).abs().max((rhs_sum - rhi).abs());
        }
    }
    // rounding slack, one part in 2^44 of the working scale
    budget += (lhs.abs() + constant * rhs_sum.abs()) * 6e-14;

    let rhs = constant * rhs_sum;
    let margin = if params.reverse { lhs - rhs } else { rhs - lhs };
    let verdict = if margin > budget {
        Verdict::Holds
    } else if margin < -budget {
        Verdict::Fails
    } else {
        Verdict::Inconclusive
    };
    Ok(TruncationReport {
        family: family.name().to_string(),
        p: params.p,
        c: params.c,
        alpha: params.alpha,
        reverse: params.reverse,
        n,
        lhs,
        rhs_sum,
        constant,
        rhs,
        ratio: if rhs != 0.0 { lhs / rhs } else { f64::NAN },
        margin,
        error_budget: budget,
        verdict,
    })
}
