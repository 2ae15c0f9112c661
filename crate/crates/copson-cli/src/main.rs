//! `copson` — command-line front end over `copson-core`.
//!
//! Every subcommand writes one JSON document (or a CSV table for `region`)
//! and encodes its verdict in the exit code:
//! 0 = holds / pass / sufficient, 1 = fails / certificate failure /
//! counterexample found, 2 = inconclusive, 64 = usage error, 65 = data
//! error, 70 = numeric failure.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use copson_core::evaluator::{eval_inequality, Family, I34Direction, Params, Verdict};
use copson_core::scalar::{check_condition, solve_c0, CheckVerdict, Condition};
use copson_core::sequences::{parse_spec, TestSequence, Weights};
use copson_core::sharpness::{
    counterexample_search, dual_norm, ratio_scan, region_map, DualKernel, RegionMap, RegionMode,
};
use copson_core::weights::{
    certify, verify_master, CertVerdict, MasterCheckInput, MasterForm, WeightScheme,
};
use copson_core::Error;

const EXIT_FAIL: u8 = 1;
const EXIT_INCONCLUSIVE: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_DATA: u8 = 65;
const EXIT_NUMERIC: u8 = 70;

#[derive(Parser)]
#[command(name = "copson", version, about = "Numerical laboratory for weighted series inequalities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one truncated inequality on explicit sequences.
    Verify(VerifyArgs),
    /// Solve for the critical exponent c0(p).
    C0(C0Args),
    /// Check a scalar sufficient condition on a grid.
    Lemma(LemmaArgs),
    /// Build and verify an auxiliary weight certificate.
    Weights(WeightsArgs),
    /// Check a master inequality on explicit inputs.
    Master(MasterArgs),
    /// Scan near-extremal sequences for constant sharpness.
    RatioScan(RatioScanArgs),
    /// Estimate the l^p -> l^p norm of a recast kernel.
    Norm(NormArgs),
    /// Classify a parameter grid; CSV table plus overlay sidecar.
    Region(RegionArgs),
    /// Randomized counterexample search with re-verification.
    Search(SearchArgs),
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Flat key=value file mirroring the flags; command line overrides it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the primary document here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Thread count for parallel commands (region/search/ratio-scan).
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args, Clone)]
struct VerifyArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// One of C1, C2, L1, L2, BG, BGA, I34.
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    c: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    /// Flip the inequality direction (the 0 < p < 1 regime).
    #[arg(long)]
    reverse: bool,
    /// Weight sequence spec, e.g. const:1, pow:-2, geom:0.5, file:PATH.
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
    /// Test sequence spec, e.g. unit:1, pow:-2, extremal-copson:0.5.
    #[arg(long, allow_hyphen_values = true)]
    x: Option<String>,
    #[arg(long = "N")]
    n: Option<usize>,
    /// Inner-sum kernel variant for I34: tail-diff or forward-diff.
    #[arg(long)]
    direction: Option<String>,
}

#[derive(Args, Clone)]
struct C0Args {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args, Clone)]
struct LemmaArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// One of LEMMA21, COND26, COND32, FALPHA_NONNEG, HADAMARD.
    #[arg(long)]
    cond: Option<String>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    c: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args, Clone)]
struct WeightsArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// One of copson-tail, leindler, bg, bga.
    #[arg(long)]
    scheme: Option<String>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    c: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
    #[arg(long = "N")]
    n: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    /// Include the per-index residual vector in the output.
    #[arg(long)]
    residuals: bool,
}

#[derive(Args, Clone)]
struct MasterArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// m22 (two-term tail form) or m27 (prefix form).
    #[arg(long)]
    form: Option<String>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    w: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    x: Option<String>,
    /// Constant on the dominating side of the implied inequality.
    #[arg(long = "u-p")]
    u_p: Option<f64>,
    #[arg(long = "N")]
    n: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args, Clone)]
struct RatioScanArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    c: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    /// Strictly decreasing comma-separated list, e.g. 0.5,0.2,0.1.
    #[arg(long, allow_hyphen_values = true)]
    eps: Option<String>,
    #[arg(long = "N")]
    n: Option<usize>,
    /// Decay exponent of the weight model for the BGA scan.
    #[arg(long = "bga-a")]
    bga_a: Option<f64>,
}

#[derive(Args, Clone)]
struct NormArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// C2_DUAL or BGA_DUAL.
    #[arg(long)]
    kernel: Option<String>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    c: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
    #[arg(long = "N")]
    n: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long = "max-iter")]
    max_iter: Option<usize>,
}

#[derive(Args, Clone)]
struct RegionArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// pc (p x c grid) or pa (p x alpha grid).
    #[arg(long)]
    mode: Option<String>,
    /// LO:HI:STEP, inclusive of both ends up to rounding.
    #[arg(long = "p-range")]
    p_range: Option<String>,
    #[arg(long = "second-range", allow_hyphen_values = true)]
    second_range: Option<String>,
    #[arg(long = "N")]
    n: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    /// json (single document) or csv (table plus overlay sidecar).
    #[arg(long)]
    format: Option<String>,
}

#[derive(Args, Clone)]
struct SearchArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    c: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
    #[arg(long = "N")]
    n: Option<usize>,
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
}

/// Config file values, consulted when a flag is absent on the command line.
struct Config(HashMap<String, String>);

impl Config {
    fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let mut map = HashMap::new();
        if let Some(path) = path {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::data(format!("config {}: {e}", path.display())))?;
            for (i, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let (k, v) = line.split_once('=').ok_or_else(|| {
                    CliError::data(format!("config {}:{}: expected key=value", path.display(), i + 1))
                })?;
                map.insert(k.trim().to_string(), v.trim().to_string());
            }
        }
        Ok(Config(map))
    }

    fn string(&self, key: &str, cli: Option<String>) -> Option<String> {
        cli.or_else(|| self.0.get(key).cloned())
    }

    fn f64(&self, key: &str, cli: Option<f64>) -> Result<Option<f64>, CliError> {
        match cli {
            Some(v) => Ok(Some(v)),
            None => self
                .0
                .get(key)
                .map(|s| s.parse().map_err(|_| CliError::data(format!("config key {key}: bad number `{s}`"))))
                .transpose(),
        }
    }

    fn usize(&self, key: &str, cli: Option<usize>) -> Result<Option<usize>, CliError> {
        match cli {
            Some(v) => Ok(Some(v)),
            None => self
                .0
                .get(key)
                .map(|s| s.parse().map_err(|_| CliError::data(format!("config key {key}: bad integer `{s}`"))))
                .transpose(),
        }
    }

    fn u64(&self, key: &str, cli: Option<u64>) -> Result<Option<u64>, CliError> {
        match cli {
            Some(v) => Ok(Some(v)),
            None => self
                .0
                .get(key)
                .map(|s| s.parse().map_err(|_| CliError::data(format!("config key {key}: bad integer `{s}`"))))
                .transpose(),
        }
    }

    fn flag(&self, key: &str, cli: bool) -> bool {
        cli || self.0.get(key).map(|s| s == "true" || s == "1").unwrap_or(false)
    }
}

struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError { code: EXIT_USAGE, message: message.into() }
    }
    fn data(message: impl Into<String>) -> Self {
        CliError { code: EXIT_DATA, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Io(_) | Error::Parse(_) => EXIT_DATA,
            Error::NoConvergence { .. } | Error::Numeric(_) => EXIT_NUMERIC,
            _ => EXIT_USAGE,
        };
        CliError { code, message: e.to_string() }
    }
}

fn require<T>(v: Option<T>, flag: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::usage(format!("missing required flag --{flag}")))
}

fn emit(doc: &impl Serialize, out: Option<&Path>) -> Result<(), CliError> {
    let mut text = serde_json::to_string(doc).map_err(|e| CliError::data(e.to_string()))?;
    text.push('\n');
    write_text(&text, out)
}

fn write_text(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::data(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn configure_jobs(cfg: &Config, cli: Option<usize>) -> Result<(), CliError> {
    if let Some(jobs) = cfg.usize("jobs", cli)? {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| CliError::usage(format!("--jobs: {e}")))?;
    }
    Ok(())
}

fn parse_range(spec: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::usage(format!("range `{spec}`: expected LO:HI:STEP")));
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|s| s.parse().map_err(|_| CliError::usage(format!("range `{spec}`: bad number `{s}`"))))
        .collect::<Result<_, _>>()?;
    let (lo, hi, step) = (nums[0], nums[1], nums[2]);
    if !(step > 0.0) || hi < lo {
        return Err(CliError::usage(format!("range `{spec}`: need HI >= LO and STEP > 0")));
    }
    let count = ((hi - lo) / step).round() as usize + 1;
    Ok((0..count).map(|i| lo + step * i as f64).filter(|v| *v <= hi + step * 1e-9).collect())
}

fn parse_eps_list(spec: &str) -> Result<Vec<f64>, CliError> {
    spec.split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| CliError::usage(format!("--eps: bad number `{s}`")))
        })
        .collect()
}

fn build_params(
    p: Option<f64>,
    c: Option<f64>,
    alpha: Option<f64>,
    reverse: bool,
) -> Result<Params, CliError> {
    let p = require(p, "p")?;
    let mut params = match alpha {
        Some(a) => Params::with_alpha(p, a),
        None => Params::new(p, c.unwrap_or(0.0)),
    };
    if let Some(c) = c {
        params.c = c;
    }
    if reverse {
        params = params.reversed();
    }
    Ok(params)
}

fn load_weights(cfg: &Config, spec: Option<String>, params: &Params, n: usize) -> Result<Weights, CliError> {
    let spec = require(cfg.string("lambda", spec), "lambda")?;
    let spec = parse_spec(&spec, Some(params.p), Some(params.c), params.alpha)?;
    Ok(Weights::from_spec(&spec, n)?)
}

const DEFAULT_N: usize = 100_000;
const DEFAULT_GRID: usize = 4096;
const DEFAULT_SCALAR_TOL: f64 = 1e-12;
const DEFAULT_SERIES_TOL: f64 = 1e-9;

fn run_verify(args: VerifyArgs) -> Result<u8, CliError> {
    let cfg = Config::load(args.common.config.as_deref())?;
    let family = Family::parse(&require(cfg.string("family", args.family), "family")?)?;
    let params = build_params(
        cfg.f64("p", args.p)?,
        cfg.f64("c", args.c)?,
        cfg.f64("alpha", args.alpha)?,
        cfg.flag("reverse", args.reverse),
    )?;
    let n = cfg.usize("N", args.n)?.unwrap_or(DEFAULT_N);
    let lam = load_weights(&cfg, args.lambda, &params, n)?;
    let xspec = require(cfg.string("x", args.x), "x")?;
    let xspec = parse_spec(&xspec, Some(params.p), Some(params.c), params.alpha)?;
    let x = TestSequence::from_spec(&xspec, n)?;
    let direction = match cfg.string("direction", args.direction).as_deref() {
        None | Some("tail-diff") => I34Direction::TailDiff,
        Some("forward-diff") => I34Direction::ForwardDiff,
        Some(other) => return Err(CliError::usage(format!("unknown direction `{other}`"))),
    };
    let report = eval_inequality(family, &params, &lam, &x, direction)?;
    emit(&report, args.common.out.as_deref())?;
    Ok(match report.verdict {
        Verdict::Holds => 0,
        Verdict::Fails => EXIT_FAIL,
        Verdict::Inconclusive => EXIT_INCONCLUSIVE,
    })
}

#[derive(Serialize)]
struct C0Output {
    p: f64,
    c0: f64,
    tol: f64,
    endpoint_residual: f64,
}

fn run_c0(args: C0Args) -> Result<u8, CliError> {
    let cfg = Config::load(args.common.config.as_deref())?;
    let p = require(cfg.f64("p", args.p)?, "p")?;
    let tol = cfg.f64("tol", args.tol)?.unwrap_or(DEFAULT_SCALAR_TOL);
    let c0 = solve_c0(p, tol)?;
    let doc = C0Output { p, c0, tol, endpoint_residual: copson_core::scalar::cond_26(p, c0) };
    emit(&doc, args.common.out.as_deref())?;
    Ok(0)
}

fn run_lemma(args: LemmaArgs) -> Result<u8, CliError> {
    let cfg = Config::load(args.common.config.as_deref())?;
    let cond = Condition::parse(&require(cfg.string("cond", args.cond), "cond")?)?;
    let params = build_params(cfg.f64("p", args.p)?, cfg.f64("c", args.c)?, cfg.f64("alpha", args.alpha)?, false)?;
    let grid = cfg.usize("grid", args.grid)?.unwrap_or(DEFAULT_GRID);
    let tol = cfg.f64("tol", args.tol)?.unwrap_or(DEFAULT_SCALAR_TOL);
    let check = check_condition(cond, &params, grid, tol)?;
    emit(&check, args.common.out.as_deref())?;
    Ok(if check.verdict == CheckVerdict::Pass { 0 } else { EXIT_FAIL })
}

fn run_weights(args: WeightsArgs) -> Result<u8, CliError> {
    let cfg = Config::load(args.common.config.as_deref())?;
    let scheme = WeightScheme::parse(&require(cfg.string("scheme", args.scheme), "scheme")?)?;
    let params = build_params(cfg.f64("p", args.p)?, cfg.f64("c", args.c)?, cfg.f64("alpha", args.alpha)?, false)?;
    let n = cfg.usize("N", args.n)?.unwrap_or(DEFAULT_N);
    let tol = cfg.f64("tol", args.tol)?.unwrap_or(DEFAULT_SERIES_TOL);
    let lam = load_weights(&cfg, args.lambda, &params, n)?;
    let cert = certify(scheme, &params, &lam, n, tol, cfg.flag("residuals", args.residuals))?;
    emit(&cert, args.common.out.as_deref())?;
    Ok(if cert.verdict == CertVerdict::CertPass { 0 } else { EXIT_FAIL })
}

fn run_master(args: MasterArgs) -> Result<u8, CliError> {
    let cfg = Config::load(args.common.config.as_deref())?;
    let form = match require(cfg.string("form", args.form), "form")?.to_ascii_lowercase().as_str() {
        "m22" => MasterForm::M22,
        "m27" => MasterForm::M27,
        other => return Err(CliError::usage(format!("unknown master form `{other}`"))),
    };
    let params = build_params(cfg.f64("p", args.p)?, None, None, false)?;
    let n = cfg.usize("N", args.n)?.unwrap_or(20);
    let tol = cfg.f64("tol", args.tol)?.unwrap_or(DEFAULT_SERIES_TOL);
    let seq = |key: &str, cli: Option<String>| -> Result<Vec<f64>, CliError> {
        let spec = require(cfg.string(key, cli), key)?;
        let spec = parse_spec(&spec, Some(params.p), Some(params.c), params.alpha)?;
        Ok(TestSequence::from_spec(&spec, n)?.values)
    };
    let input = MasterCheckInput {
        a: seq("a", args.a)?,
        b: seq("b", args.b)?,
        w: seq("w", args.w)?,
        x: seq("x", args.x)?,
        u_p: cfg.f64("u-p", args.u_p)?.unwrap_or(1.0),
    };
    let report = verify_master(form, &params, &input, tol)?;
    let pass = report.residual >= -tol;
    emit(&report, args.common.out.as_deref())?;
    Ok(if pass { 0 } else { EXIT_FAIL })
}

fn run_ratio_scan(args: RatioScanArgs) -> Result<u8, CliError> {
    let cfg = Config::load(args.common.config.as_deref())?;
    configure_jobs(&cfg, args.common.jobs)?;
    let family = Family::parse(&require(cfg.string("family", args.family), "family")?)?;
    let params = build_params(cfg.f64("p", args.p)?, cfg.f64("c", args.c)?, cfg.f64("alpha", args.alpha)?, false)?;
    let eps = parse_eps_list(&require(cfg.string("eps", args.eps), "eps")?)?;
    let n = cfg.usize("N", args.n)?.unwrap_or(DEFAULT_N);
    let scan = ratio_scan(family, &params, &eps, n, cfg.f64("bga-a", args.bga_a)?)?;
    let inconclusive = scan.entries.iter().any(|e| e.inconclusive);
    emit(&scan, args.common.out.as_deref())?;
    Ok(if inconclusive { EXIT_INCONCLUSIVE } else { 0 })
}

#[derive(Serialize)]
struct NormOutput {
    kernel: String,
    p: f64,
    c: f64,
    alpha: Option<f64>,
    #[serde(rename = "N")]
    n: usize,
    estimate: f64,
    bound: f64,
    within_bound: bool,
}

fn run_norm(args: NormArgs) -> Result<u8, CliError> {
    let cfg = Config::load(args.common.config.as_deref())?;
    let kernel = DualKernel::parse(&require(cfg.string("kernel", args.kernel), "kernel")?)?;
    let params = build_params(cfg.f64("p", args.p)?, cfg.f64("c", args.c)?, cfg.f64("alpha", args.alpha)?, false)?;
    let n = cfg.usize("N", args.n)?.unwrap_or(1000);
    let tol = cfg.f64("tol", args.tol)?.unwrap_or(DEFAULT_SCALAR_TOL);
    let max_iter = cfg.usize("max-iter", args.max_iter)?.unwrap_or(10_000);
    let lam = load_weights(&cfg, args.lambda, &params, n)?;
    let estimate = dual_norm(kernel, &params, &lam, tol, max_iter)?;
    let bound = match kernel {
        DualKernel::C2Dual => params.p / (1.0 - params.c).abs(),
        DualKernel::BgaDual => params.alpha()? * params.p + 1.0,
    };
    let within_bound = estimate <= bound * (1.0 + 1e-9);
    let doc = NormOutput {
        kernel: kernel.name().to_string(),
        p: params.p,
        c: params.c,
        alpha: params.alpha,
        n,
        estimate,
        bound,
        within_bound,
    };
    emit(&doc, args.common.out.as_deref())?;
    Ok(if within_bound { 0 } else { EXIT_FAIL })
}

fn region_csv(map: &RegionMap) -> String {
    let mut csv = String::from("mode,p,second,cert_verdict,battery_verdict,min_margin\n");
    for cell in &map.cells {
        csv.push_str(&format!(
            "{},{},{},{},{},{}\n",
            map.mode, cell.p, cell.second, cell.cert_verdict, cell.battery_verdict, cell.min_margin
        ));
    }
    csv
}

fn run_region(args: RegionArgs) -> Result<u8, CliError> {
    let cfg = Config::load(args.common.config.as_deref())?;
    configure_jobs(&cfg, args.common.jobs)?;
    let mode = RegionMode::parse(&require(cfg.string("mode", args.mode), "mode")?)?;
    let p_axis = parse_range(&require(cfg.string("p-range", args.p_range), "p-range")?)?;
    let second_axis = parse_range(&require(cfg.string("second-range", args.second_range), "second-range")?)?;
    let n = cfg.usize("N", args.n)?.unwrap_or(1000);
    let tol = cfg.f64("tol", args.tol)?.unwrap_or(DEFAULT_SERIES_TOL);
    let map = region_map(mode, &p_axis, &second_axis, n, tol)?;
    let format = cfg.string("format", args.format).unwrap_or_else(|| "csv".into());
    match format.as_str() {
        "json" => emit(&map, args.common.out.as_deref())?,
        "csv" => {
            write_text(&region_csv(&map), args.common.out.as_deref())?;
            // the overlay rides along as a sidecar file when writing to disk
            if let Some(out) = &args.common.out {
                let mut sidecar = out.clone();
                sidecar.set_extension("overlay.json");
                let text = format!("{}\n", serde_json::to_string(&map.overlay).unwrap());
                std::fs::write(&sidecar, text)
                    .map_err(|e| CliError::data(format!("{}: {e}", sidecar.display())))?;
            }
        }
        other => return Err(CliError::usage(format!("unknown format `{other}`"))),
    }
    let any_fails = map.cells.iter().any(|c| c.class == "FAILS");
    let any_inconclusive = map.cells.iter().any(|c| c.class == "INCONCLUSIVE");
    Ok(if any_fails {
        EXIT_FAIL
    } else if any_inconclusive {
        EXIT_INCONCLUSIVE
    } else {
        0
    })
}

fn run_search(args: SearchArgs) -> Result<u8, CliError> {
    let cfg = Config::load(args.common.config.as_deref())?;
    configure_jobs(&cfg, args.common.jobs)?;
    let family = Family::parse(&require(cfg.string("family", args.family), "family")?)?;
    let params = build_params(cfg.f64("p", args.p)?, cfg.f64("c", args.c)?, cfg.f64("alpha", args.alpha)?, false)?;
    let lambda = require(cfg.string("lambda", args.lambda), "lambda")?;
    let lambda = parse_spec(&lambda, Some(params.p), Some(params.c), params.alpha)?;
    let n = cfg.usize("N", args.n)?.unwrap_or(1024);
    let budget = cfg.u64("budget", args.budget)?.unwrap_or(10_000);
    let seed = cfg.u64("seed", args.seed)?.unwrap_or(0);
    let result = counterexample_search(family, &params, &lambda, n, budget, seed)?;
    let found = result.counterexample;
    emit(&result, args.common.out.as_deref())?;
    Ok(if found { EXIT_FAIL } else { 0 })
}

fn dispatch(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Verify(a) => run_verify(a),
        Command::C0(a) => run_c0(a),
        Command::Lemma(a) => run_lemma(a),
        Command::Weights(a) => run_weights(a),
        Command::Master(a) => run_master(a),
        Command::RatioScan(a) => run_ratio_scan(a),
        Command::Norm(a) => run_norm(a),
        Command::Region(a) => run_region(a),
        Command::Search(a) => run_search(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("copson: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
