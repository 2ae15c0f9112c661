//! Auxiliary weight recurrences and per-index certificates of the
//! sufficient conditions, plus the imported master inequalities.

use crate::error::{Error, Result};
use crate::evaluator::{pow0, Params};
use crate::kahan::{suffix_sums, KahanSum};
use crate::sequences::Weights;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WeightScheme {
    /// Tail-Copson construction: w_n = (Λ_{n-1}/Λ_n)(1 + ((1-c)/p)λ_n/Λ_n)^{-1} w_{n-1}.
    CopsonTail,
    /// Forward Leindler construction: Σ_{k<=n} λ_k w_k = (p/(1-c)) Λ*_{n+1} w_{n+1}.
    Leindler,
    /// w_{n+1} = (1 - (1/p)λ_n/Λ_n) w_n.
    Bg,
    /// w_n = (1 - (1/p)λ_n/Λ*_n)^{-1} w_{n-1}.
    Bga,
}

impl WeightScheme {
    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "copson-tail" => Ok(WeightScheme::CopsonTail),
            "leindler" => Ok(WeightScheme::Leindler),
            "bg" => Ok(WeightScheme::Bg),
            "bga" => Ok(WeightScheme::Bga),
            other => Err(Error::Parse(format!("unknown weight scheme `{other}`"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            WeightScheme::CopsonTail => "copson-tail",
            WeightScheme::Leindler => "leindler",
            WeightScheme::Bg => "bg",
            WeightScheme::Bga => "bga",
        }
    }

    pub fn needs_star(self) -> bool {
        matches!(self, WeightScheme::Leindler | WeightScheme::Bga)
    }

    /// Tail-sum schemes compare against truncated infinite sums, so the
    /// last indices are perturbed and get excluded from the verdict.
    pub fn tail_sum_scheme(self) -> bool {
        matches!(self, WeightScheme::CopsonTail | WeightScheme::Bga)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CertVerdict {
    CertPass,
    CertFail,
}

impl std::fmt::Display for CertVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CertVerdict::CertPass => write!(f, "CERT_PASS"),
            CertVerdict::CertFail => write!(f, "CERT_FAIL"),
        }
    }
}

/// Residual record for one scheme. A CERT_FAIL only means the sufficient
/// condition failed; it never refutes the target inequality.
#[derive(Debug, Clone, Serialize)]
pub struct WeightCertificate {
    pub scheme: String,
    pub p: f64,
    pub c: f64,
    pub alpha: Option<f64>,
    #[serde(rename = "N")]
    pub n: usize,
    pub min_residual: f64,
    pub argmin_index: usize,
    pub verdict: CertVerdict,
    pub excluded_tail_indices: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residuals: Option<Vec<f64>>,
    #[serde(skip)]
    pub weights: Vec<f64>,
}

/// Build the scheme's weight sequence with w_1 = 1.
pub fn build_weights(
    scheme: WeightScheme,
    params: &Params,
    lambda: &Weights,
    n: usize,
) -> Result<Vec<f64>> {
    params.validate()?;
    let p = params.p;
    let c = params.c;
    if n == 0 || n > lambda.len() {
        return Err(Error::InvalidParameter(format!(
            "N = {n} outside 1..={}",
            lambda.len()
        )));
    }
    if scheme.needs_star() && lambda.tail.is_none() {
        return Err(Error::MissingTail(scheme.name()));
    }
    match scheme {
        WeightScheme::CopsonTail | WeightScheme::Leindler => {
            if c >= 1.0 {
                return Err(Error::InvalidParameter(format!("scheme requires c < 1, got {c}")));
            }
        }
        WeightScheme::Bg | WeightScheme::Bga => {
            if p <= 1.0 {
                return Err(Error::InvalidParameter(format!("scheme requires p > 1, got {p}")));
            }
        }
    }
    let lam = &lambda.values;
    let prefix = &lambda.prefix;
    let mut w = Vec::with_capacity(n);
    w.push(1.0);
    match scheme {
        WeightScheme::CopsonTail => {
            let s = (1.0 - c) / p;
            for i in 1..n {
                let factor = (prefix[i - 1] / prefix[i]) / (1.0 + s * lam[i] / prefix[i]);
                w.push(factor * w[i - 1]);
            }
        }
        WeightScheme::Leindler => {
            let star = lambda.star().unwrap();
            let beyond = lambda.tail.as_ref().unwrap().beyond.mid();
            let s = (1.0 - c) / p;
            let mut acc = KahanSum::new();
            for i in 1..n {
                acc.add(lam[i - 1] * w[i - 1]);
                let next = star[i];
                w.push(s * acc.value() / next);
            }
            let _ = beyond;
        }
        WeightScheme::Bg => {
            for i in 1..n {
                w.push((1.0 - lam[i - 1] / (p * prefix[i - 1])) * w[i - 1]);
            }
        }
        WeightScheme::Bga => {
            let star = lambda.star().unwrap();
            for i in 1..n {
                let factor = 1.0 - lam[i] / (p * star[i]);
                if factor <= 0.0 {
                    return Err(Error::Numeric(format!(
                        "recurrence factor nonpositive at index {}",
                        i + 1
                    )));
                }
                w.push(w[i - 1] / factor);
            }
        }
    }
    if let Some(bad) = w.iter().position(|v| !v.is_finite() || *v <= 0.0) {
        return Err(Error::Numeric(format!(
            "weight w_{} is not finite positive: {}",
            bad + 1,
            w[bad]
        )));
    }
    Ok(w)
}

struct ResidualRow {
    /// RHS - LHS of the condition, exactly as displayed.
    residual: f64,
    /// Pre-cancellation magnitude, used for the rounding allowance.
    scale: f64,
}

fn residual_rows(
    scheme: WeightScheme,
    params: &Params,
    lambda: &Weights,
    w: &[f64],
) -> Result<Vec<ResidualRow>> {
    let p = params.p;
    let c = params.c;
    let n = w.len();
    let lam = &lambda.values[..n];
    let prefix = &lambda.prefix[..n];
    let lw: Vec<f64> = (0..n).map(|i| lam[i] * w[i]).collect();
    let mut rows = Vec::with_capacity(n);
    match scheme {
        WeightScheme::CopsonTail => {
            let cst = (p / (1.0 - c)).powf(p);
            let tail = suffix_sums(&lw); // Σ_{k=n}^N λ_k w_k
            for i in 0..n {
                let lhs = pow0(tail[i] / prefix[i], p - 1.0);
                let (rhs, scale) = if i == 0 {
                    let r = cst * pow0(w[0], p - 1.0);
                    (r, r.abs() + lhs.abs())
                } else {
                    let pos = pow0(w[i], p - 1.0);
                    let neg = pow0(w[i - 1], p - 1.0) * pow0(prefix[i - 1] / prefix[i], p - c);
                    let f = cst * prefix[i] / lam[i];
                    (f * (pos - neg), f * (pos + neg) + lhs.abs())
                };
                rows.push(ResidualRow { residual: rhs - lhs, scale });
            }
        }
        WeightScheme::Leindler => {
            let star = &lambda.star().unwrap()[..n];
            let beyond = lambda.tail.as_ref().unwrap().beyond.mid();
            let cst = (p / (1.0 - c)).powf(p);
            let s = (1.0 - c) / p;
            // internally extend w by one index for the last row
            let star_next = |i: usize| if i + 1 < n { star[i + 1] } else { beyond };
            let mut acc = KahanSum::new();
            let mut w_next = vec![0.0; n];
            {
                let mut a = KahanSum::new();
                for i in 0..n {
                    a.add(lw[i]);
                    w_next[i] = s * a.value() / star_next(i);
                }
            }
            for i in 0..n {
                acc.add(lw[i]);
                if i == 0 {
                    // scalar n = 1 form with x = λ_1/Λ*_1
                    let x = lam[0] / star[0];
                    let lhs = s * x;
                    let rhs = pow0(s * x, 1.0 - p) - pow0(1.0 - x, 1.0 - c);
                    rows.push(ResidualRow { residual: rhs - lhs, scale: lhs.abs() + rhs.abs() });
                } else {
                    let lhs = pow0(acc.value() / star[i], p - 1.0);
                    let pos = pow0(w[i], p - 1.0);
                    let neg = pow0(w_next[i], p - 1.0) * pow0(star_next(i) / star[i], p - c);
                    let f = cst * star[i] / lam[i];
                    rows.push(ResidualRow {
                        residual: f * (pos - neg) - lhs,
                        scale: f * (pos + neg) + lhs.abs(),
                    });
                }
            }
        }
        WeightScheme::Bg => {
            let alpha = params.alpha()?;
            let cst = (p / (p - 1.0)).powf(p);
            let mut acc = KahanSum::new();
            for i in 0..n {
                acc.add(lw[i]);
                let lhs = pow0(acc.value() / prefix[i], p - 1.0);
                let prev = if i == 0 { 0.0 } else { prefix[i - 1] };
                let diff = pow0(prefix[i], alpha) - pow0(prev, alpha);
                let bracket = alpha * lam[i] * pow0(prefix[i], alpha - 1.0) / diff;
                let w_next = if i + 1 < n {
                    w[i + 1]
                } else {
                    (1.0 - lam[i] / (p * prefix[i])) * w[i]
                };
                let pos = pow0(w[i], p - 1.0);
                let neg = pow0(w_next, p - 1.0);
                let f = cst * bracket.powf(p) * prefix[i] / lam[i];
                rows.push(ResidualRow {
                    residual: f * (pos - neg) - lhs,
                    scale: f * (pos + neg) + lhs.abs(),
                });
            }
        }
        WeightScheme::Bga => {
            let alpha = params.alpha()?;
            let star = &lambda.star().unwrap()[..n];
            let beyond = lambda.tail.as_ref().unwrap().beyond.mid();
            let cst = (p / (p - 1.0)).powf(p);
            let tail = suffix_sums(&lw);
            for i in 0..n {
                let lhs = pow0(tail[i] / star[i], p - 1.0);
                let next = if i + 1 < n { star[i + 1] } else { beyond };
                let diff = pow0(star[i], alpha) - pow0(next, alpha);
                let bracket = alpha * lam[i] * pow0(star[i], alpha - 1.0) / diff;
                let f = cst * bracket.powf(p) * star[i] / lam[i];
                let (pos, neg) = if i == 0 {
                    (pow0(w[0], p - 1.0), 0.0)
                } else {
                    (pow0(w[i], p - 1.0), pow0(w[i - 1], p - 1.0))
                };
                rows.push(ResidualRow {
                    residual: f * (pos - neg) - lhs,
                    scale: f * (pos + neg) + lhs.abs(),
                });
            }
        }
    }
    Ok(rows)
}

/// Check the scheme's per-index sufficient condition for the given w.
///
/// The verdict applies a rounding allowance proportional to the
/// pre-cancellation magnitude of each row; `min_residual` is reported raw.
pub fn verify_certificate(
    scheme: WeightScheme,
    params: &Params,
    lambda: &Weights,
    w: &[f64],
    tolerance: f64,
    keep_residuals: bool,
) -> Result<WeightCertificate> {
    if w.is_empty() || w.len() > lambda.len() {
        return Err(Error::LengthMismatch { lambda: lambda.len(), x: w.len() });
    }
    if let Some(bad) = w.iter().find(|v| !v.is_finite() || **v <= 0.0) {
        return Err(Error::Numeric(format!("weights must be positive finite, got {bad}")));
    }
    let n = w.len();
    let rows = residual_rows(scheme, params, lambda, w)?;
    let excluded = if scheme.tail_sum_scheme() { (n + 9) / 10 } else { 0 };
    let kept = n - excluded;
    let mut min_residual = f64::INFINITY;
    let mut argmin = 1usize;
    let mut pass = true;
    for (i, row) in rows.iter().take(kept).enumerate() {
        if !row.residual.is_finite() {
            return Err(Error::Numeric(format!("residual at index {} is not finite", i + 1)));
        }
        if row.residual < min_residual {
            min_residual = row.residual;
            argmin = i + 1;
        }
        if row.residual < -(tolerance + 64.0 * f64::EPSILON * row.scale) {
            pass = false;
        }
    }
    Ok(WeightCertificate {
        scheme: scheme.name().to_string(),
        p: params.p,
        c: params.c,
        alpha: params.alpha,
        n,
        min_residual,
        argmin_index: argmin,
        verdict: if pass { CertVerdict::CertPass } else { CertVerdict::CertFail },
        excluded_tail_indices: excluded,
        residuals: if keep_residuals {
            Some(rows.iter().map(|r| r.residual).collect())
        } else {
            None
        },
        weights: w.to_vec(),
    })
}

/// Build then verify in one step.
pub fn certify(
    scheme: WeightScheme,
    params: &Params,
    lambda: &Weights,
    n: usize,
    tolerance: f64,
    keep_residuals: bool,
) -> Result<WeightCertificate> {
    let w = build_weights(scheme, params, lambda, n)?;
    verify_certificate(scheme, params, lambda, &w, tolerance, keep_residuals)
}

/// Inputs of the imported master inequalities.
#[derive(Debug, Clone)]
pub struct MasterCheckInput {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub w: Vec<f64>,
    pub x: Vec<f64>,
    pub u_p: f64,
}

impl MasterCheckInput {
    fn validate(&self) -> Result<()> {
        let n = self.a.len();
        if n == 0 || self.b.len() != n || self.w.len() != n || self.x.len() != n {
            return Err(Error::InvalidParameter("a, b, w, x must share a nonzero length".into()));
        }
        for (name, v) in [("a", &self.a), ("b", &self.b), ("w", &self.w)] {
            if v.iter().any(|t| !t.is_finite() || *t <= 0.0) {
                return Err(Error::InvalidParameter(format!("{name} must be strictly positive")));
            }
        }
        if self.x.iter().any(|t| !t.is_finite() || *t < 0.0) {
            return Err(Error::InvalidParameter("x must be nonnegative".into()));
        }
        Ok(())
    }

    /// S_n = Σ_{k=n}^N b_k x_k and A_n = S_n/a_n.
    fn tail_products(&self) -> (Vec<f64>, Vec<f64>) {
        let bx: Vec<f64> = self.b.iter().zip(&self.x).map(|(b, x)| b * x).collect();
        let s = suffix_sums(&bx);
        let a: Vec<f64> = s.iter().zip(&self.a).map(|(s, a)| s / a).collect();
        (s, a)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MasterForm {
    M22,
    M27,
}

#[derive(Debug, Clone, Serialize)]
pub struct MasterReport {
    pub form: MasterForm,
    pub p: f64,
    #[serde(rename = "N")]
    pub n: usize,
    /// Σ x_n^p - LHS for M22; min row residual for M27.
    pub residual: f64,
    /// For M27 only: U_p Σ x_n^p - Σ ((1/a_n) Σ_{k<=n} b_k x_k)^p,
    /// evaluated when every row passes.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub implied_residual: Option<f64>,
    pub pass: bool,
}

/// Check the two-term master inequality for the given inputs.
pub fn verify_master(
    form: MasterForm,
    params: &Params,
    input: &MasterCheckInput,
    tolerance: f64,
) -> Result<MasterReport> {
    params.validate()?;
    input.validate()?;
    let p = params.p;
    let n = input.a.len();
    match form {
        MasterForm::M22 => {
            let (_, big_a) = input.tail_products();
            let wtail = suffix_sums(&input.w);
            let mut lhs = KahanSum::new();
            lhs.add(
                pow0(input.w[0], p - 1.0) / input.b[0].powf(p)
                    * pow0(wtail[0], 1.0 - p)
                    * input.a[0].powf(p)
                    * pow0(big_a[0], p),
            );
            for i in 1..n {
                let bracket = pow0(input.w[i], p - 1.0) / input.b[i].powf(p)
                    - pow0(input.w[i - 1], p - 1.0) / input.b[i - 1].powf(p);
                lhs.add(pow0(wtail[i], -(p - 1.0)) * bracket * input.a[i].powf(p) * pow0(big_a[i], p));
            }
            let xp: f64 = input.x.iter().map(|x| pow0(*x, p)).sum();
            let residual = xp - lhs.value();
            Ok(MasterReport {
                form,
                p,
                n,
                residual,
                implied_residual: None,
                pass: residual >= -tolerance,
            })
        }
        MasterForm::M27 => {
            if !(p > 1.0) {
                return Err(Error::InvalidParameter(format!("M27 requires p > 1, got {p}")));
            }
            if !(input.u_p > 0.0) {
                return Err(Error::InvalidParameter("U_p must be positive".into()));
            }
            let mut wprefix = KahanSum::new();
            let mut min_row = f64::INFINITY;
            let mut rows_pass = true;
            for i in 0..n - 1 {
                wprefix.add(input.w[i]);
                let lhs = pow0(wprefix.value(), p - 1.0);
                let bracket = pow0(input.w[i], p - 1.0) / input.b[i].powf(p)
                    - pow0(input.w[i + 1], p - 1.0) / input.b[i + 1].powf(p);
                let r = input.u_p * input.a[i].powf(p) * bracket - lhs;
                min_row = min_row.min(r);
                if r < -tolerance {
                    rows_pass = false;
                }
            }
            let implied = if rows_pass {
                let mut acc = KahanSum::new();
                let mut lhs = KahanSum::new();
                for i in 0..n {
                    acc.add(input.b[i] * input.x[i]);
                    lhs.add(pow0(acc.value() / input.a[i], p));
                }
                let xp: f64 = input.x.iter().map(|x| pow0(*x, p)).sum();
                Some(input.u_p * xp - lhs.value())
            } else {
                None
            };
            let pass = rows_pass && implied.map_or(true, |r| r >= -tolerance);
            Ok(MasterReport { form, p, n, residual: min_row, implied_residual: implied, pass })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequences::SequenceSpec;

    fn const1(n: usize) -> Weights {
        Weights::from_spec(&SequenceSpec::Const(1.0), n).unwrap()
    }

    fn geom(n: usize) -> Weights {
        Weights::from_spec(&SequenceSpec::Geom { r: 0.5, v: 0.5 }, n).unwrap()
    }

    #[test]
    fn copson_tail_recurrence_values() {
        let lam = const1(10);
        let w = build_weights(WeightScheme::CopsonTail, &Params::new(2.0, 0.0), &lam, 10).unwrap();
        assert!((w[1] - 0.4).abs() < 1e-15);
        assert!((w[2] - 0.4 * (2.0 / 3.0) / (1.0 + 1.0 / 6.0)).abs() < 1e-15);
        assert!((w[2] - 0.2285714285714286).abs() < 1e-12);
    }

    #[test]
    fn bg_recurrence_values() {
        let lam = const1(10);
        let w = build_weights(WeightScheme::Bg, &Params::with_alpha(2.0, 1.0), &lam, 10).unwrap();
        assert_eq!(w[0], 1.0);
        assert!((w[1] - 0.5).abs() < 1e-15);
        assert!((w[2] - 0.375).abs() < 1e-15);
        assert!((w[3] - 0.3125).abs() < 1e-15);
    }

    #[test]
    fn leindler_recurrence_values() {
        let lam = geom(10);
        let w = build_weights(WeightScheme::Leindler, &Params::new(2.0, 0.0), &lam, 10).unwrap();
        assert!((w[1] - 0.5).abs() < 1e-12);
        assert!((w[2] - 1.25).abs() < 1e-12);
    }

    #[test]
    fn bga_constant_ratio_recurrence() {
        let lam = geom(20);
        let w = build_weights(WeightScheme::Bga, &Params::with_alpha(2.0, 1.0), &lam, 20).unwrap();
        // λ_n/Λ*_n = 1/2 for all n, so w_n = (4/3)^{n-1}
        for (i, v) in w.iter().enumerate() {
            assert!((v - (4.0f64 / 3.0).powi(i as i32)).abs() < 1e-10 * v);
        }
    }

    #[test]
    fn copson_tail_certificate_passes_at_c_zero() {
        let lam = const1(100);
        let cert =
            certify(WeightScheme::CopsonTail, &Params::new(2.0, 0.0), &lam, 100, 1e-9, false)
                .unwrap();
        assert_eq!(cert.verdict, CertVerdict::CertPass);
    }

    #[test]
    fn bg_certificate_residual_closed_form_at_small_alpha() {
        // residual at n=1 equals 2 alpha^2 - 1 for p = 2, const weights
        let lam = const1(100);
        let cert =
            certify(WeightScheme::Bg, &Params::with_alpha(2.0, 0.5), &lam, 100, 1e-9, true)
                .unwrap();
        let r1 = cert.residuals.as_ref().unwrap()[0];
        assert!((r1 - (-0.5)).abs() < 1e-12);
        assert_eq!(cert.verdict, CertVerdict::CertFail);
    }

    #[test]
    fn bg_certificate_passes_above_threshold() {
        let lam = const1(100);
        let cert =
            certify(WeightScheme::Bg, &Params::with_alpha(2.0, 0.8), &lam, 100, 1e-9, false)
                .unwrap();
        assert_eq!(cert.verdict, CertVerdict::CertPass);
    }

    #[test]
    fn copson_tail_defining_relation() {
        // the recurrence telescopes exactly:
        // ((1-c)/p) Σ_{k=n}^N λ_k w_k = Λ_{n-1} w_{n-1} - Λ_N w_N
        let n_max = 200;
        let lam = const1(n_max);
        let p = Params::new(2.0, 0.0);
        let w = build_weights(WeightScheme::CopsonTail, &p, &lam, n_max).unwrap();
        let lw: Vec<f64> = lam.values.iter().zip(&w).map(|(l, w)| l * w).collect();
        let tails = suffix_sums(&lw);
        let boundary = lam.prefix[n_max - 1] * w[n_max - 1];
        for n in 2..=100 {
            let expect = 2.0 * (lam.prefix[n - 2] * w[n - 2] - boundary);
            let got = tails[n - 1];
            assert!(
                ((got - expect) / expect).abs() < 1e-12,
                "n = {n}: {got} vs {expect}"
            );
        }
    }

    #[test]
    fn residual_matches_scalar_function_closed_form() {
        // with the exact (untruncated) tail Σ_{k=n}^∞ λ_k w_k =
        // (p/(1-c)) Λ_{n-1} w_{n-1}, row n of the tail-Copson condition
        // collapses to w_{n-1}^{p-1} (1-x)^{p-1} s^{-p} f_{p,c}(x)/x at
        // x = λ_n/Λ_n, s = (1-c)/p; truncation only raises the residual
        let n_max = 60;
        let lam = const1(n_max);
        for (p, c) in [(2.0, -0.1), (1.7, -0.4), (3.0, 0.2)] {
            let params = Params::new(p, c);
            let s = (1.0 - c) / p;
            let cst = s.powf(-p);
            let w = build_weights(WeightScheme::CopsonTail, &params, &lam, n_max).unwrap();
            let cert =
                verify_certificate(WeightScheme::CopsonTail, &params, &lam, &w, 1e-9, true)
                    .unwrap();
            let res = cert.residuals.as_ref().unwrap();
            for i in 1..40 {
                let x = lam.values[i] / lam.prefix[i];
                let tail_inf = lam.prefix[i - 1] * w[i - 1] / s;
                let lhs = (tail_inf / lam.prefix[i]).powf(p - 1.0);
                let rhs = cst * lam.prefix[i] / lam.values[i]
                    * (w[i].powf(p - 1.0)
                        - w[i - 1].powf(p - 1.0)
                            * (lam.prefix[i - 1] / lam.prefix[i]).powf(p - c));
                let r_inf = rhs - lhs;
                let f = crate::scalar::f_lemma(p, c, x).unwrap();
                let closed = w[i - 1].powf(p - 1.0) * (1.0 - x).powf(p - 1.0) * cst * f / x;
                let scale = lhs.abs() + rhs.abs();
                assert!(
                    (r_inf - closed).abs() < 1e-12 * scale.max(1.0),
                    "p={p} c={c} index {}: {r_inf} vs {closed}",
                    i + 1
                );
                assert!(res[i] >= r_inf - 1e-12 * scale.max(1.0));
            }
        }
    }

    #[test]
    fn master_m22_single_index_identity() {
        let input = MasterCheckInput {
            a: vec![1.7],
            b: vec![0.9],
            w: vec![2.3],
            x: vec![1.1],
            u_p: 1.0,
        };
        let r = verify_master(MasterForm::M22, &Params::new(2.5, 0.0), &input, 1e-12).unwrap();
        assert!(r.residual.abs() < 1e-12);
        assert!(r.pass);
    }

    #[test]
    fn master_m27_bg_reduction() {
        // a_n, b_n of the prefix-kernel reduction at p = 2, alpha = 1,
        // const weights: a_n = Λ_n^α/(Λ_n^α - Λ_{n-1}^α) = n, U_p = 4.
        let n = 50;
        let p = Params::with_alpha(2.0, 1.0);
        let lam = const1(n);
        let w = build_weights(WeightScheme::Bg, &p, &lam, n).unwrap();
        let alpha = 1.0;
        let a: Vec<f64> = (1..=n)
            .map(|i| {
                let li = lam.prefix[i - 1];
                let prev = if i == 1 { 0.0 } else { lam.prefix[i - 2] };
                pow0(li, alpha) / (pow0(li, alpha) - pow0(prev, alpha))
            })
            .collect();
        let b = vec![1.0; n];
        let mut x = vec![0.0; n];
        x[0] = 1.0;
        let input = MasterCheckInput { a, b, w, x, u_p: 4.0 };
        let r = verify_master(MasterForm::M27, &p, &input, 1e-9).unwrap();
        assert!(r.pass, "min row residual {}", r.residual);
        assert!(r.implied_residual.unwrap() >= -1e-9);
    }

    #[test]
    fn rejects_nonpositive_inputs() {
        let input = MasterCheckInput {
            a: vec![1.0, -1.0],
            b: vec![1.0, 1.0],
            w: vec![1.0, 1.0],
            x: vec![1.0, 1.0],
            u_p: 1.0,
        };
        assert!(verify_master(MasterForm::M22, &Params::new(2.0, 0.0), &input, 1e-12).is_err());
    }
}
