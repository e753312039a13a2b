//! Named inequality suites.
//!
//! A reported violation of `A <= B` always compares the lower end of `A`'s
//! enclosure with the upper end of `B`'s, so it is genuine up to the
//! relative tolerance.

use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::rotundity::{
    strict_convexity_probe, two_r_probe, ScenarioKind, SequenceScenario, TwoRSettings,
};
use super::{json_of, random_vector, run_checks, sample_rng, Check, ProbeReport, Verdict};
use crate::combinators::shifted_norm;
use crate::error::{NormError, Result};
use crate::interval::Interval;
use crate::norm::{eval_tailed, require, EvalOptions, Norm, NormDescriptor};
use crate::vector::{hat_pointwise_sum_bound, hat_transform, FiniteVector};

pub const SUITES: [&str; 10] = [
    "norm-axioms",
    "hat-subadditive",
    "hat-bounded",
    "hat-lipschitz",
    "hat-lower",
    "hat-tail-lower",
    "davis-sandwich",
    "shifted-bounds",
    "two-r",
    "strict-convexity",
];

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SuiteConfig {
    pub samples: usize,
    pub seed: u64,
    /// Relative slack on every comparison.
    pub tolerance: f64,
    pub opts: EvalOptions,
    /// Largest support of a random vector.
    pub max_support: usize,
    /// Coefficients are drawn from `[−bound, bound]`.
    pub bound: f64,
    /// Sequence generator for `two-r`; random generators run once per sample.
    pub scenario: Option<ScenarioKind>,
    pub two_r: TwoRSettings,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            samples: 1000,
            seed: 0,
            tolerance: crate::tol::REL,
            opts: EvalOptions::default(),
            max_support: 12,
            bound: 10.0,
            scenario: None,
            two_r: TwoRSettings::default(),
        }
    }
}

/// Runs the suite `name` against `space`.
pub fn inequality_suite(
    name: &str,
    space: &NormDescriptor,
    cfg: &SuiteConfig,
) -> Result<ProbeReport> {
    space.validate()?;
    match name {
        "norm-axioms" => norm_axiom_suite(space, cfg),
        "hat-subadditive" => hat_subadditive(space, cfg),
        "hat-bounded" => hat_bounded(space, cfg),
        "hat-lipschitz" => hat_lipschitz(space, cfg),
        "hat-lower" => hat_lower(space, cfg),
        "hat-tail-lower" => hat_tail_lower(space, cfg),
        "davis-sandwich" => davis_sandwich(space, cfg),
        "shifted-bounds" => shifted_bounds(space, cfg),
        "two-r" => two_r_suite(space, cfg),
        "strict-convexity" => strict_convexity_probe(space, cfg.samples, cfg.seed),
        other => Err(NormError::UnknownSuite(other.to_string())),
    }
}

fn draw(rng: &mut impl Rng, cfg: &SuiteConfig) -> FiniteVector {
    random_vector(rng, cfg.max_support, cfg.bound)
}

/// Triangle inequality, homogeneity and definiteness on random vectors; works
/// for any norm, including ones outside the expression grammar.
pub fn norm_axiom_suite(n: &dyn Norm, cfg: &SuiteConfig) -> Result<ProbeReport> {
    let o = &cfg.opts;
    let zero = n.evaluate(&FiniteVector::zero(), o)?;
    let mut report = run_checks("norm-axioms", n.name(), cfg, |rng| {
        let (x, y) = (draw(rng, cfg), draw(rng, cfg));
        let alpha = rng.gen_range(-cfg.bound..=cfg.bound);
        let input = json!({ "x": json_of(&x), "y": json_of(&y), "alpha": alpha });
        let (nx, ny) = (n.evaluate(&x, o)?, n.evaluate(&y, o)?);
        let nxy = n.evaluate(&x.add(&y), o)?;
        let scaled = n.evaluate(&x.scale(alpha), o)?;
        let mut checks = vec![
            Check::new("triangle", input.clone(), nxy.lo, nx.hi + ny.hi),
            Check::new(
                "homogeneity-upper",
                input.clone(),
                scaled.lo,
                alpha.abs() * nx.hi,
            ),
            Check::new(
                "homogeneity-lower",
                input.clone(),
                alpha.abs() * nx.lo,
                scaled.hi,
            ),
        ];
        if nx.hi <= 0.0 {
            checks.push(Check::new("definiteness", input, 1.0, 0.0));
        }
        Ok(checks)
    })?;
    if zero != Interval::ZERO {
        report.verdict = Verdict::Fail;
        report
            .notes
            .push(format!("norm of the zero vector is {zero}"));
    }
    Ok(report)
}

/// Largest `(x+y)^(n) − x̂(n) − ŷ(n)` over the heads and the tail masses.
fn hat_sum_margin(x: &FiniteVector, y: &FiniteVector) -> (f64, f64, f64) {
    let (hx, hy, hs) = (hat_transform(x), hat_transform(y), hat_transform(&x.add(y)));
    let last = hx.head_end().max(hy.head_end()).max(hs.head_end()) + 1;
    let mut worst = (f64::NEG_INFINITY, 0.0, 0.0);
    for n in 1..=last {
        let (lhs, rhs) = (hs.value(n), hx.value(n) + hy.value(n));
        if lhs - rhs > worst.0 {
            worst = (lhs - rhs, lhs, rhs);
        }
    }
    let (lhs, rhs) = (hs.tail_mass(), hx.tail_mass() + hy.tail_mass());
    if lhs - rhs > worst.0 {
        worst = (lhs - rhs, lhs, rhs);
    }
    worst
}

fn hat_subadditive(n: &NormDescriptor, cfg: &SuiteConfig) -> Result<ProbeReport> {
    run_checks("hat-subadditive", n.name(), cfg, |rng| {
        let (x, y) = (draw(rng, cfg), draw(rng, cfg));
        let input = json!({ "x": json_of(&x), "y": json_of(&y) });
        Ok(vec![match hat_pointwise_sum_bound(&x, &y) {
            Some(v) => Check::new(
                "pointwise",
                json!({ "x": json_of(&x), "y": json_of(&y), "index": v.index }),
                v.lhs,
                v.rhs,
            ),
            None => {
                let (_, lhs, rhs) = hat_sum_margin(&x, &y);
                Check::new("pointwise", input, lhs, rhs)
            }
        }])
    })
}

fn lp_exponent(n: &NormDescriptor) -> Result<f64> {
    match n {
        NormDescriptor::Lp { p } if *p > 1.0 => Ok(*p),
        other => Err(NormError::InvalidParameter(format!(
            "this suite needs lp(p) with p > 1, got {other}"
        ))),
    }
}

/// `1/(2^{1−1/p} − 1)`, the constant bounding `‖x̂‖_p / ‖x‖_p`.
pub(crate) fn hat_constant(p: f64) -> f64 {
    1.0 / (2f64.powf(1.0 - 1.0 / p) - 1.0)
}

fn hat_bounded(n: &NormDescriptor, cfg: &SuiteConfig) -> Result<ProbeReport> {
    let c = hat_constant(lp_exponent(n)?);
    let o = &cfg.opts;
    let mut report = run_checks("hat-bounded", n.name(), cfg, |rng| {
        let x = draw(rng, cfg);
        let hat = eval_tailed(n, &hat_transform(&x), o.truncate, o)?;
        Ok(vec![Check::new(
            "hat-norm",
            json!({ "x": json_of(&x) }),
            hat.hi,
            c * n.evaluate(&x, o)?.lo,
        )])
    })?;
    report.details.insert("constant".into(), c);
    Ok(report)
}

fn hat_lipschitz(n: &NormDescriptor, cfg: &SuiteConfig) -> Result<ProbeReport> {
    let c = hat_constant(lp_exponent(n)?);
    let o = &cfg.opts;
    let mut report = run_checks("hat-lipschitz", n.name(), cfg, |rng| {
        let x = draw(rng, cfg);
        // half the pairs are close, where the bound is tightest
        let y = if rng.gen_bool(0.5) {
            x.add(&random_vector(rng, cfg.max_support, 0.1))
        } else {
            draw(rng, cfg)
        };
        let start = rng.gen_range(1..=2 * cfg.max_support);
        let tail = |v: &FiniteVector| -> Result<Interval> {
            eval_tailed(n, &hat_transform(v).restrict(start, None)?, o.truncate, o)
        };
        let (tx, ty) = (tail(&x)?, tail(&y)?);
        let rhs = c * n.evaluate(&x.sub(&y), o)?.hi;
        let input = json!({ "x": json_of(&x), "y": json_of(&y), "start": start });
        Ok(vec![
            Check::new("x-over-y", input.clone(), tx.lo - ty.hi, rhs),
            Check::new("y-over-x", input, ty.lo - tx.hi, rhs),
        ])
    })?;
    report.details.insert("constant".into(), c);
    Ok(report)
}

fn hat_lower(n: &NormDescriptor, cfg: &SuiteConfig) -> Result<ProbeReport> {
    require(n, true, true)?;
    let o = &cfg.opts;
    run_checks("hat-lower", n.name(), cfg, |rng| {
        let x = draw(rng, cfg);
        let hat = eval_tailed(n, &hat_transform(&x), o.truncate, o)?;
        Ok(vec![Check::new(
            "norm-below-hat",
            json!({ "x": json_of(&x) }),
            n.evaluate(&x, o)?.lo,
            hat.hi,
        )])
    })
}

/// `‖(x+y)^·1_{[N,∞)}‖ >= ‖y‖ − N·sup_i‖e_i‖·‖y‖_∞` whenever `y` lives
/// strictly after the support of `x`.
fn hat_tail_lower(n: &NormDescriptor, cfg: &SuiteConfig) -> Result<ProbeReport> {
    require(n, true, true)?;
    let o = &cfg.opts;
    let unit = n.unit_vector_bound();
    run_checks("hat-tail-lower", n.name(), cfg, |rng| {
        let x = draw(rng, cfg);
        let offset = x.max_index().unwrap_or(0) + rng.gen_range(0..=8);
        let height = 10f64.powf(rng.gen_range(-3.0..=0.0));
        let raw = random_vector(rng, cfg.max_support, height);
        let y = FiniteVector::from_sparse(raw.entries().iter().map(|&(i, a)| (i + offset, a)))?;
        let start = rng.gen_range(1..=8);
        let lhs = n.evaluate(&y, o)?.lo - start as f64 * unit * y.sup_norm();
        let tail = eval_tailed(
            n,
            &hat_transform(&x.add(&y)).restrict(start, None)?,
            o.truncate,
            o,
        )?;
        let input = json!({ "x": json_of(&x), "y": json_of(&y), "start": start });
        Ok(vec![Check::new("tail-lower-bound", input, lhs, tail.hi)])
    })
}

fn davis_sandwich(n: &NormDescriptor, cfg: &SuiteConfig) -> Result<ProbeReport> {
    let NormDescriptor::Davis { e, f, m } = n else {
        return Err(NormError::InvalidParameter(format!(
            "davis-sandwich needs a davis(E, F, m) space, got {n}"
        )));
    };
    let o = &cfg.opts;
    let m = *m;
    let ordered: Vec<bool> = (0..cfg.samples)
        .into_par_iter()
        .map(|k| {
            let x = draw(&mut sample_rng(cfg.seed ^ 0x5eed, k), cfg);
            Ok(e.evaluate(&x, o)?.lo <= f.evaluate(&x, o)?.hi * (1.0 + cfg.tolerance))
        })
        .collect::<Result<_>>()?;
    let mut report = run_checks("davis-sandwich", n.name(), cfg, |rng| {
        let x = draw(rng, cfg);
        let d = n.evaluate(&x, o)?;
        let (ex, fx) = (e.evaluate(&x, o)?, f.evaluate(&x, o)?);
        let input = json!({ "x": json_of(&x) });
        Ok(vec![
            Check::new("interpolated-over-m", input.clone(), d.lo / m, ex.hi),
            Check::new(
                "e-under-2m-interpolated",
                input.clone(),
                ex.lo,
                2.0 * m * d.hi,
            ),
            Check::new("interpolated-under-f-over-m", input, d.lo, fx.hi / m),
        ])
    })?;
    let broken = ordered.iter().filter(|&&ok| !ok).count();
    if broken > 0 {
        report.notes.push(format!(
            "precondition |x|_E <= |x|_F failed on {broken} of {} sampled vectors",
            cfg.samples
        ));
    }
    report
        .details
        .insert("preconditionFailures".into(), broken as f64);
    Ok(report)
}

fn shifted_bounds(n: &NormDescriptor, cfg: &SuiteConfig) -> Result<ProbeReport> {
    let o = &cfg.opts;
    run_checks("shifted-bounds", n.name(), cfg, |rng| {
        let (x, y) = (draw(rng, cfg), draw(rng, cfg));
        let shifted = shifted_norm(n, &x, &y, o)?;
        let (nx, ny) = (n.evaluate(&x, o)?, n.evaluate(&y, o)?);
        let input = json!({ "x": json_of(&x), "y": json_of(&y) });
        Ok(vec![
            Check::new("lower", input.clone(), 2.0 * ny.lo, shifted.hi),
            Check::new("upper", input, shifted.lo, (2.0 + 2.0 * nx.hi) * ny.hi),
        ])
    })
}

fn two_r_suite(n: &NormDescriptor, cfg: &SuiteConfig) -> Result<ProbeReport> {
    let kind = cfg.scenario.unwrap_or(ScenarioKind::RandomCauchy);
    if !kind.is_random() {
        let mut report = two_r_probe(n, &SequenceScenario::new(kind, cfg.seed), &cfg.two_r)?;
        report.seed = cfg.seed;
        return Ok(report);
    }
    let runs: Vec<ProbeReport> = (0..cfg.samples)
        .into_par_iter()
        .map(|k| {
            let scenario = SequenceScenario::new(kind, sample_rng(cfg.seed, k).gen());
            two_r_probe(n, &scenario, &cfg.two_r)
        })
        .collect::<Result<_>>()?;
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    let mut violations = Vec::new();
    let mut worst = f64::NEG_INFINITY;
    let (mut defect, mut diameter) = (0.0f64, 0.0f64);
    for (k, run) in runs.iter().enumerate() {
        *counts.entry(run.verdict.as_str()).or_default() += 1;
        worst = worst.max(run.worst_margin);
        defect = defect.max(run.details["defect"]);
        diameter = diameter.max(run.details["diameter"]);
        for v in &run.violations {
            if violations.len() < 200 {
                let mut v = v.clone();
                v.sample = k;
                violations.push(v);
            }
        }
    }
    let count = |key: &str| counts.get(key).copied().unwrap_or(0);
    let verdict = if count("fail") > 0 {
        Verdict::Fail
    } else if count("pass") > 0 {
        Verdict::Pass
    } else {
        Verdict::Inconclusive
    };
    let mut details = BTreeMap::new();
    details.insert("scenariosPassed".into(), count("pass") as f64);
    details.insert("scenariosFailed".into(), count("fail") as f64);
    details.insert("scenariosInconclusive".into(), count("inconclusive") as f64);
    details.insert("defect".into(), defect);
    details.insert("diameter".into(), diameter);
    Ok(ProbeReport {
        suite_name: "two-r".into(),
        space: n.name(),
        samples_run: cfg.samples,
        seed: cfg.seed,
        tolerance: 0.0,
        verdict,
        worst_margin: worst,
        violations,
        details,
        notes: vec![format!(
            "scenario {}: one random sequence per sample",
            kind.name()
        )],
    })
}
