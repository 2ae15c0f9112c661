//! Numerical laboratory for weighted power-mean series inequalities:
//! truncated evaluation with rigorous tail budgets, scalar certificate
//! functions, weight-sequence certificates, sharp-constant probes and
//! counterexample search.

pub mod battery;
pub mod error;
pub mod evaluator;
pub mod gauss;
pub mod kahan;
pub mod scalar;
pub mod sequences;
pub mod sharpness;
pub mod weights;

pub use error::{Error, Result};
pub use evaluator::{eval_inequality, Family, I34Direction, Params, TruncationReport, Verdict};
pub use scalar::{check_condition, scalar_eval, solve_c0, CheckVerdict, Condition, ScalarCheck};
pub use sequences::{parse_spec, SequenceSpec, TestSequence, Weights};
pub use sharpness::{
    counterexample_search, dual_norm, ratio_scan, region_map, DualKernel, RatioScan, RegionMap,
    RegionMode, SearchResult,
};
pub use weights::{certify, verify_master, CertVerdict, MasterForm, WeightCertificate, WeightScheme};
