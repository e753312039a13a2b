//! Finite-sample checks of inequalities and rotundity properties.
//!
//! Every check is seeded: sample `k` of a run draws from a ChaCha stream
//! keyed by `(seed, k)`, so results do not depend on thread scheduling.

mod boyd;
mod rotundity;
mod suites;
pub(crate) mod wire;

pub use boyd::{boyd_estimate, BoydEstimate, BoydRow};
pub use rotundity::{
    c0_failure_witness, strict_convexity_probe, two_r_probe, ScenarioKind, SequenceScenario,
    TwoRSettings,
};
pub use suites::{inequality_suite, norm_axiom_suite, SuiteConfig, SUITES};

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::vector::FiniteVector;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// One failed instance of a claimed inequality `lhs <= rhs`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Violation {
    pub sample: usize,
    pub check: String,
    pub input: serde_json::Value,
    #[serde(serialize_with = "wire::float")]
    pub lhs: f64,
    #[serde(serialize_with = "wire::float")]
    pub rhs: f64,
    /// `lhs − rhs`; positive for a violation.
    #[serde(serialize_with = "wire::float")]
    pub margin: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ProbeReport {
    pub suite_name: String,
    pub space: String,
    pub samples_run: usize,
    pub seed: u64,
    #[serde(serialize_with = "wire::float")]
    pub tolerance: f64,
    pub verdict: Verdict,
    /// Largest `lhs − rhs` seen over all checks; negative means every check
    /// held with room to spare.
    #[serde(serialize_with = "wire::float")]
    pub worst_margin: f64,
    pub violations: Vec<Violation>,
    #[serde(serialize_with = "wire::float_map")]
    pub details: BTreeMap<String, f64>,
    pub notes: Vec<String>,
}

impl ProbeReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }
}

/// A claimed inequality `lhs <= rhs` on one sample.
#[derive(Clone, Debug)]
pub(crate) struct Check {
    pub label: &'static str,
    pub input: serde_json::Value,
    pub lhs: f64,
    pub rhs: f64,
}

impl Check {
    pub fn new(label: &'static str, input: serde_json::Value, lhs: f64, rhs: f64) -> Self {
        Self {
            label,
            input,
            lhs,
            rhs,
        }
    }
}

/// Up to this many violations are kept in a report.
const MAX_RECORDED: usize = 200;

pub(crate) fn sample_rng(seed: u64, sample: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(sample as u64);
    rng
}

/// Runs `checks` on every sample in parallel and merges in sample order.
pub(crate) fn run_checks<F>(
    suite: &str,
    space: String,
    cfg: &SuiteConfig,
    checks: F,
) -> Result<ProbeReport>
where
    F: Fn(&mut ChaCha8Rng) -> Result<Vec<Check>> + Sync,
{
    let per_sample: Vec<Result<Vec<Check>>> = (0..cfg.samples)
        .into_par_iter()
        .map(|k| checks(&mut sample_rng(cfg.seed, k)))
        .collect();
    let mut report = ProbeReport {
        suite_name: suite.to_string(),
        space,
        samples_run: cfg.samples,
        seed: cfg.seed,
        tolerance: cfg.tolerance,
        verdict: Verdict::Pass,
        worst_margin: f64::NEG_INFINITY,
        violations: Vec::new(),
        details: BTreeMap::new(),
        notes: Vec::new(),
    };
    let mut count = 0usize;
    for (k, result) in per_sample.into_iter().enumerate() {
        for check in result? {
            let margin = check.lhs - check.rhs;
            report.worst_margin = report.worst_margin.max(margin);
            let slack = cfg.tolerance * check.lhs.abs().max(check.rhs.abs()) + crate::tol::ABS;
            if margin > slack || margin.is_nan() {
                count += 1;
                if report.violations.len() < MAX_RECORDED {
                    report.violations.push(Violation {
                        sample: k,
                        check: check.label.to_string(),
                        input: check.input,
                        lhs: check.lhs,
                        rhs: check.rhs,
                        margin,
                    });
                }
            }
        }
    }
    report.details.insert("violationCount".into(), count as f64);
    if count > 0 {
        report.verdict = Verdict::Fail;
    }
    Ok(report)
}

/// Random vector with support of size `1..=max_support` inside
/// `[1, 2·max_support]` and coefficients uniform in `[−bound, bound]`.
pub fn random_vector(rng: &mut impl Rng, max_support: usize, bound: f64) -> FiniteVector {
    let size = rng.gen_range(1..=max_support.max(1));
    let indices = rand::seq::index::sample(rng, 2 * max_support.max(1), size);
    let mut pairs: Vec<(usize, f64)> = indices.iter().map(|i| (i + 1, 0.0)).collect();
    pairs.sort_unstable_by_key(|p| p.0);
    for p in &mut pairs {
        let mut a = 0.0;
        while a == 0.0 {
            a = rng.gen_range(-bound..=bound);
        }
        p.1 = a;
    }
    FiniteVector::from_sparse(pairs).expect("indices are distinct and positive")
}

pub(crate) fn json_of(v: &FiniteVector) -> serde_json::Value {
    serde_json::to_value(v).expect("vectors always serialize")
}
