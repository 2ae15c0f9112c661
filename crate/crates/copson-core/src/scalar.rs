//! Scalar functions behind the proofs, grid checks, and the critical
//! exponent solver.

use crate::error::{Error, Result};
use crate::evaluator::Params;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScalarFn {
    /// f_{p,c}(x) = (1 + ((1-c)/p)x)^{1-p} - (1-x)^{1-c} - ((1-c)/p)x
    FLemma,
    /// Its first derivative, closed form.
    FLemmaD1,
    /// Its second derivative, closed form.
    FLemmaD2,
    /// g_{p,c}, the root function of f''.
    GAux,
    /// (p/(p-1))((1 - x/p)^{1-p} - 1)
    Lhs32,
    /// x ((1 - (1-x)^alpha)/(alpha x))^p
    Rhs32,
    /// f_{alpha,p}(x) = alpha x - (1 - x/(2p))(1 - (1-x)^alpha)
    FAlpha,
    /// (p/(x(p-1)))((1 - x/p)^{1-p} - 1)
    HadamardLhs,
    /// (1 - x/(2p))^{-p}
    HadamardRhs,
}

impl ScalarFn {
    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "F_LEMMA" => Ok(ScalarFn::FLemma),
            "F_LEMMA_D1" => Ok(ScalarFn::FLemmaD1),
            "F_LEMMA_D2" => Ok(ScalarFn::FLemmaD2),
            "G_AUX" => Ok(ScalarFn::GAux),
            "LHS32" => Ok(ScalarFn::Lhs32),
            "RHS32" => Ok(ScalarFn::Rhs32),
            "F_ALPHA" => Ok(ScalarFn::FAlpha),
            "HADAMARD_LHS" => Ok(ScalarFn::HadamardLhs),
            "HADAMARD_RHS" => Ok(ScalarFn::HadamardRhs),
            other => Err(Error::Parse(format!("unknown scalar function `{other}`"))),
        }
    }
}

/// (1-x)^e with the exact-zero convention at x = 1 for e > 0, and a
/// domain error for e < 0 there.
fn one_minus_pow(x: f64, e: f64) -> Result<f64> {
    let t = 1.0 - x;
    if t == 0.0 {
        if e > 0.0 {
            Ok(0.0)
        } else if e == 0.0 {
            Ok(1.0)
        } else {
            Err(Error::Numeric(format!("(1-x)^{e} diverges at x = 1")))
        }
    } else {
        Ok(t.powf(e))
    }
}

pub fn f_lemma(p: f64, c: f64, x: f64) -> Result<f64> {
    let s = (1.0 - c) / p;
    Ok((1.0 + s * x).powf(1.0 - p) - one_minus_pow(x, 1.0 - c)? - s * x)
}

pub fn f_lemma_d1(p: f64, c: f64, x: f64) -> Result<f64> {
    let s = (1.0 - c) / p;
    Ok((1.0 - c) * (1.0 - p) / p * (1.0 + s * x).powf(-p) + (1.0 - c) * one_minus_pow(x, -c)? - s)
}

pub fn f_lemma_d2(p: f64, c: f64, x: f64) -> Result<f64> {
    let s = (1.0 - c) / p;
    Ok((1.0 - c).powi(2) * (p - 1.0) / p * (1.0 + s * x).powf(-p - 1.0)
        + (1.0 - c) * c * one_minus_pow(x, -c - 1.0)?)
}

pub fn g_aux(p: f64, c: f64, x: f64) -> Result<f64> {
    let ratio = -p * c / ((p - 1.0) * (1.0 - c));
    if ratio <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "g requires -pc/((p-1)(1-c)) > 0, got {ratio} at p={p}, c={c}"
        )));
    }
    Ok(ratio.powf(-1.0 / (p + 1.0)) * one_minus_pow(x, (1.0 + c) / (p + 1.0))?
        - 1.0
        - (1.0 - c) / p * x)
}

/// The x = 1 endpoint value (1 + (1-c)/p)^{1-p} - (1-c)/p, the decisive
/// quantity of the whole c-extension.
pub fn cond_26(p: f64, c: f64) -> f64 {
    let t = (1.0 - c) / p;
    (1.0 + t).powf(1.0 - p) - t
}

pub fn lhs_32(p: f64, x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    p / (p - 1.0) * ((1.0 - x / p).powf(1.0 - p) - 1.0)
}

pub fn rhs_32(p: f64, alpha: f64, x: f64) -> Result<f64> {
    if x == 0.0 {
        return Ok(0.0);
    }
    let q = (1.0 - one_minus_pow(x, alpha)?) / (alpha * x);
    Ok(x * q.powf(p))
}

pub fn f_alpha(p: f64, alpha: f64, x: f64) -> Result<f64> {
    Ok(alpha * x - (1.0 - x / (2.0 * p)) * (1.0 - one_minus_pow(x, alpha)?))
}

pub fn hadamard_lhs(p: f64, x: f64) -> Result<f64> {
    if x == 0.0 {
        return Err(Error::Numeric("midpoint bound is 0/0 at x = 0".into()));
    }
    Ok(p / (x * (p - 1.0)) * ((1.0 - x / p).powf(1.0 - p) - 1.0))
}

pub fn hadamard_rhs(p: f64, x: f64) -> f64 {
    (1.0 - x / (2.0 * p)).powf(-p)
}

/// Evaluate one scalar function at x in [0, 1].
pub fn scalar_eval(func: ScalarFn, params: &Params, x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::InvalidParameter(format!("x = {x} outside [0, 1]")));
    }
    params.validate()?;
    let (p, c) = (params.p, params.c);
    match func {
        ScalarFn::FLemma => f_lemma(p, c, x),
        ScalarFn::FLemmaD1 => f_lemma_d1(p, c, x),
        ScalarFn::FLemmaD2 => f_lemma_d2(p, c, x),
        ScalarFn::GAux => g_aux(p, c, x),
        ScalarFn::Lhs32 => Ok(lhs_32(p, x)),
        ScalarFn::Rhs32 => rhs_32(p, params.alpha()?, x),
        ScalarFn::FAlpha => f_alpha(p, params.alpha()?, x),
        ScalarFn::HadamardLhs => hadamard_lhs(p, x),
        ScalarFn::HadamardRhs => Ok(hadamard_rhs(p, x)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Condition {
    /// f_{p,c} >= 0 on [0,1] (<= 0 under reverse).
    Lemma21,
    /// The x = 1 endpoint value >= 0 (<= 0 under reverse).
    Cond26,
    /// LHS32 - RHS32 >= 0 on [0,1].
    Cond32,
    /// f_{alpha,p} >= 0 on [0,1].
    FAlphaNonneg,
    /// Midpoint bound LHS - RHS >= 0 on (0,1].
    Hadamard,
}

impl Condition {
    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "LEMMA21" => Ok(Condition::Lemma21),
            "COND26" => Ok(Condition::Cond26),
            "COND32" => Ok(Condition::Cond32),
            "FALPHA_NONNEG" => Ok(Condition::FAlphaNonneg),
            "HADAMARD" => Ok(Condition::Hadamard),
            other => Err(Error::Parse(format!("unknown condition `{other}`"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Condition::Lemma21 => "LEMMA21",
            Condition::Cond26 => "COND26",
            Condition::Cond32 => "COND32",
            Condition::FAlphaNonneg => "FALPHA_NONNEG",
            Condition::Hadamard => "HADAMARD",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum CheckVerdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub x: f64,
    pub value: f64,
}

/// Result of a grid + refinement minimization of a scalar condition.
#[derive(Debug, Clone, Serialize)]
pub struct ScalarCheck {
    pub condition: String,
    pub p: f64,
    pub c: f64,
    pub alpha: Option<f64>,
    pub reverse: bool,
    pub grid: usize,
    pub min_value: f64,
    pub argmin: f64,
    pub verdict: CheckVerdict,
    pub witness: Option<Witness>,
}

/// Golden-section minimization on [a, b].
fn golden_min<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, iters: usize) -> (f64, f64) {
    const INVPHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = b - INVPHI * (b - a);
    let mut x2 = a + INVPHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..iters {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INVPHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INVPHI * (b - a);
            f2 = f(x2);
        }
        if (b - a).abs() < 1e-16 {
            break;
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Grid-check one condition over [0, 1] and refine around the minimum.
///
/// Under `params.reverse` the orientation flips (0 < p < 1 lemma case):
/// the condition function is negated before minimizing.
pub fn check_condition(
    cond: Condition,
    params: &Params,
    grid_size: usize,
    tolerance: f64,
) -> Result<ScalarCheck> {
    if grid_size < 64 {
        return Err(Error::InvalidParameter(format!("grid_size must be >= 64, got {grid_size}")));
    }
    if !(tolerance > 0.0) {
        return Err(Error::InvalidParameter("tolerance must be positive".into()));
    }
    params.validate()?;
    let sign = if params.reverse { -1.0 } else { 1.0 };
    let p = params.p;
    let c = params.c;

    if cond == Condition::Cond32 || cond == Condition::FAlphaNonneg {
        params.alpha()?;
    }
    let alpha = params.alpha.unwrap_or(f64::NAN);

    let g: Box<dyn Fn(f64) -> f64> = match cond {
        Condition::Lemma21 => {
            Box::new(move |x| sign * f_lemma(p, c, x).unwrap_or(f64::INFINITY))
        }
        Condition::Cond26 => Box::new(move |_| sign * cond_26(p, c)),
        Condition::Cond32 => Box::new(move |x| {
            sign * (lhs_32(p, x) - rhs_32(p, alpha, x).unwrap_or(f64::NEG_INFINITY))
        }),
        Condition::FAlphaNonneg => {
            Box::new(move |x| sign * f_alpha(p, alpha, x).unwrap_or(f64::INFINITY))
        }
        Condition::Hadamard => Box::new(move |x| {
            sign * (hadamard_lhs(p, x).map_or(f64::INFINITY, |l| l - hadamard_rhs(p, x)))
        }),
    };

    // Lemma's c > 0 cases make (1-x)^{1-c} blow up at x = 1; surface that
    // as a domain error rather than an infinite grid value.
    if cond == Condition::Lemma21 && 1.0 - c < 0.0 {
        return Err(Error::Numeric(format!("(1-x)^{} diverges at x = 1", 1.0 - c)));
    }

    let start = if cond == Condition::Hadamard { 1 } else { 0 };
    let mut min_v = f64::INFINITY;
    let mut min_i = start;
    for i in start..=grid_size {
        let x = i as f64 / grid_size as f64;
        let v = g(x);
        if v < min_v {
            min_v = v;
            min_i = i;
        }
    }
    // refine inside the bracketing cells
    let lo = if min_i == 0 { 0.0 } else { (min_i - 1) as f64 / grid_size as f64 };
    let hi = ((min_i + 1).min(grid_size)) as f64 / grid_size as f64;
    let lo = if cond == Condition::Hadamard && lo == 0.0 { 0.5 / grid_size as f64 } else { lo };
    let (rx, rv) = golden_min(&g, lo, hi, 200);
    let (argmin, min_value) = if rv < min_v {
        (rx, rv)
    } else {
        (min_i as f64 / grid_size as f64, min_v)
    };

    let verdict = if min_value < -tolerance { CheckVerdict::Fail } else { CheckVerdict::Pass };
    Ok(ScalarCheck {
        condition: cond.name().to_string(),
        p,
        c,
        alpha: params.alpha,
        reverse: params.reverse,
        grid: grid_size,
        min_value,
        argmin,
        verdict,
        witness: if verdict == CheckVerdict::Fail {
            Some(Witness { x: argmin, value: min_value })
        } else {
            None
        },
    })
}

/// Solve (1 + (1-c0)/p)^{1-p} = (1-c0)/p for c0 by bisection on
/// t = (1-c0)/p. h(t) = (1+t)^{1-p} - t is strictly decreasing, so the
/// bracket is safe.
pub fn solve_c0(p: f64, tol: f64) -> Result<f64> {
    if !(p > 0.0) {
        return Err(Error::InvalidParameter(format!("p must be positive, got {p}")));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter("tol must be positive".into()));
    }
    if p == 1.0 {
        // h(t) = 1 - t: root t = 1, c0 = 1 - p = 0 by continuity.
        return Ok(0.0);
    }
    let h = |t: f64| (1.0 + t).powf(1.0 - p) - t;
    let mut lo = 0.0;
    let mut hi = 1.0;
    while h(hi) > 0.0 {
        hi *= 2.0;
        if hi > 1e300 {
            return Err(Error::Numeric("bracket expansion failed".into()));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if h(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-17 * (1.0 + hi) {
            break;
        }
    }
    let t = 0.5 * (lo + hi);
    if h(t).abs() >= tol {
        return Err(Error::Numeric(format!("bisection residual {} above tol {tol}", h(t))));
    }
    Ok(1.0 - p * t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f_lemma_endpoints() {
        // f_{p,c}(0) = 0 always.
        assert_eq!(f_lemma(2.0, 0.0, 0.0).unwrap(), 0.0);
        // direct substitution at x = 1, p = 2, c = 0
        assert!((f_lemma(2.0, 0.0, 1.0).unwrap() - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn f_alpha_collapses_at_alpha_one() {
        // alpha = 1: f(x) = x - (1 - x/(2p)) x = x^2/(2p)
        let v = f_alpha(2.0, 1.0, 1.0).unwrap();
        assert!((v - 0.25).abs() < 1e-15);
    }

    #[test]
    fn ineq_32_at_one() {
        let d = lhs_32(2.0, 1.0) - rhs_32(2.0, 1.0, 1.0).unwrap();
        // 2((1/2)^{-1} - 1) - 1 = 1
        assert!((d - 1.0).abs() < 1e-15);
    }

    #[test]
    fn lemma21_pass_and_fail() {
        let ok = check_condition(Condition::Lemma21, &Params::new(2.0, -0.1), 4096, 1e-12).unwrap();
        assert_eq!(ok.verdict, CheckVerdict::Pass);

        let bad = check_condition(Condition::Lemma21, &Params::new(2.0, -0.5), 4096, 1e-12).unwrap();
        assert_eq!(bad.verdict, CheckVerdict::Fail);
        let w = bad.witness.unwrap();
        assert!((w.x - 1.0).abs() < 1e-9);
        // (1.75)^{-1} - 0.75
        assert!((w.value - (1.0 / 1.75 - 0.75)).abs() < 1e-12);
    }

    #[test]
    fn falpha_fail_witness_at_one() {
        let r = check_condition(
            Condition::FAlphaNonneg,
            &Params::with_alpha(2.0, 0.5),
            4096,
            1e-12,
        )
        .unwrap();
        assert_eq!(r.verdict, CheckVerdict::Fail);
        let w = r.witness.unwrap();
        assert!((w.x - 1.0).abs() < 1e-9);
        // f(1) = alpha - (1 - 1/(2p)) = -0.25
        assert!((w.value + 0.25).abs() < 1e-12);
    }

    #[test]
    fn c0_closed_forms() {
        let c = solve_c0(2.0, 1e-12).unwrap();
        assert!((c - (2.0 - 5f64.sqrt())).abs() < 1e-12);
        let c = solve_c0(0.5, 1e-12).unwrap();
        assert!((c - (3.0 - 5f64.sqrt()) / 4.0).abs() < 1e-12);
    }

    #[test]
    fn c0_definition_residual() {
        for p in [1.1, 1.5, 2.0, 3.0, 5.0, 10.0] {
            let c0 = solve_c0(p, 1e-12).unwrap();
            assert!(cond_26(p, c0).abs() < 1e-10, "p = {p}");
        }
    }

    #[test]
    fn p_one_degenerate() {
        assert_eq!(solve_c0(1.0, 1e-12).unwrap(), 0.0);
    }

    #[test]
    fn hadamard_bound_nonnegative() {
        for p in [1.5, 2.0, 3.0, 7.0] {
            let r =
                check_condition(Condition::Hadamard, &Params::new(p, 0.0), 512, 1e-12).unwrap();
            assert_eq!(r.verdict, CheckVerdict::Pass, "p = {p}: min {}", r.min_value);
        }
    }
}
