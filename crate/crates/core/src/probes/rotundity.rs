//! Rotundity probes.
//!
//! 2R asks that `2‖x_m‖² + 2‖x_n‖² − ‖x_m + x_n‖² → 0` force `(x_n)` to be
//! Cauchy. The probe looks at the tail half of a finite prefix: a pair is
//! near-flat when its parallelogram defect is below `ε`, and the probe fails
//! when some near-flat pair is more than `δ₀` apart. Verdicts are statements
//! about the given finite scale only.

use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{
    json_of, random_vector, run_checks, sample_rng, Check, ProbeReport, SuiteConfig, Verdict,
    Violation,
};
use crate::error::Result;
use crate::interval::Interval;
use crate::norm::{EvalOptions, Norm};
use crate::vector::FiniteVector;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioKind {
    /// `x_n = Σ_{i≤n} e_i`.
    C0Witness,
    /// `x_n = (1 − 1/n)·e_1`.
    Shrinking,
    /// `x_n = Σ_{i≤n} e_i / ‖Σ_{i≤n} e_i‖`.
    NormalizedBlocks,
    /// `x_n = v + Σ_{k≤n} ρᵏ w_k` with random `v`, `w_k` and `ρ <= 0.6`.
    RandomCauchy,
    /// Independent random unit vectors.
    RandomUnit,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 5] = [
        ScenarioKind::C0Witness,
        ScenarioKind::Shrinking,
        ScenarioKind::NormalizedBlocks,
        ScenarioKind::RandomCauchy,
        ScenarioKind::RandomUnit,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ScenarioKind::C0Witness => "c0-witness",
            ScenarioKind::Shrinking => "shrinking",
            ScenarioKind::NormalizedBlocks => "normalized-blocks",
            ScenarioKind::RandomCauchy => "random-cauchy",
            ScenarioKind::RandomUnit => "random-unit",
        }
    }

    pub fn parse(text: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == text)
    }

    pub fn is_random(&self) -> bool {
        matches!(self, ScenarioKind::RandomCauchy | ScenarioKind::RandomUnit)
    }
}

/// A deterministic rule producing `x_1, x_2, ...`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SequenceScenario {
    pub kind: ScenarioKind,
    pub seed: u64,
    pub description: String,
}

/// The sup-norm counterexample `x_n = Σ_{i≤n} e_i`.
pub fn c0_failure_witness() -> SequenceScenario {
    SequenceScenario::new(ScenarioKind::C0Witness, 0)
}

fn midpoint(value: Interval) -> f64 {
    0.5 * (value.lo + value.hi)
}

impl SequenceScenario {
    pub fn new(kind: ScenarioKind, seed: u64) -> Self {
        let description = match kind {
            ScenarioKind::C0Witness => "x_n = e_1 + ... + e_n".to_string(),
            ScenarioKind::Shrinking => "x_n = (1 - 1/n) e_1".to_string(),
            ScenarioKind::NormalizedBlocks => {
                "x_n = (e_1 + ... + e_n) / |e_1 + ... + e_n|".to_string()
            }
            ScenarioKind::RandomCauchy => format!("geometric random series, seed {seed}"),
            ScenarioKind::RandomUnit => format!("independent random unit vectors, seed {seed}"),
        };
        Self {
            kind,
            seed,
            description,
        }
    }

    /// The first `len` terms; `norm` is used by the normalizing generators.
    pub fn prefix(&self, norm: &dyn Norm, len: usize) -> Result<Vec<FiniteVector>> {
        let opts = EvalOptions::default();
        let mut rng = sample_rng(self.seed, 0);
        let mut out = Vec::with_capacity(len);
        match self.kind {
            ScenarioKind::C0Witness => out.extend((1..=len).map(|n| FiniteVector::indicator(1, n))),
            ScenarioKind::Shrinking => {
                out.extend((1..=len).map(|n| FiniteVector::unit(1).scale(1.0 - 1.0 / n as f64)));
            }
            ScenarioKind::NormalizedBlocks => {
                for n in 1..=len {
                    let block = FiniteVector::indicator(1, n);
                    let size = midpoint(norm.evaluate(&block, &opts)?);
                    out.push(block.scale(1.0 / size));
                }
            }
            ScenarioKind::RandomCauchy => {
                let ratio = rng.gen_range(0.1..=0.6f64);
                let mut x = random_vector(&mut rng, 8, 1.0);
                for n in 1..=len {
                    let step = random_vector(&mut rng, 8, 1.0);
                    x = x.add(&step.scale(ratio.powi(n as i32)));
                    out.push(x.clone());
                }
            }
            ScenarioKind::RandomUnit => {
                for _ in 0..len {
                    let v = random_vector(&mut rng, 8, 1.0);
                    let size = midpoint(norm.evaluate(&v, &opts)?);
                    out.push(v.scale(1.0 / size));
                }
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TwoRSettings {
    pub prefix_len: usize,
    /// Defect threshold `ε` below which a pair counts as near-flat.
    pub epsilon: f64,
    /// Separation `δ₀` that a near-flat pair must not exceed.
    pub separation: f64,
}

impl Default for TwoRSettings {
    fn default() -> Self {
        Self {
            prefix_len: 64,
            epsilon: 1e-6,
            separation: 0.1,
        }
    }
}

struct PairOutcome {
    m: usize,
    n: usize,
    defect: f64,
    distance: f64,
}

/// Finite-scale 2R check on the tail half of the scenario's prefix.
pub fn two_r_probe(
    norm: &dyn Norm,
    scenario: &SequenceScenario,
    settings: &TwoRSettings,
) -> Result<ProbeReport> {
    let opts = EvalOptions::default();
    let terms = scenario.prefix(norm, settings.prefix_len.max(2))?;
    let first = terms.len() / 2;
    let tail = &terms[first..];
    let sizes: Vec<Interval> = tail
        .iter()
        .map(|x| norm.evaluate(x, &opts))
        .collect::<Result<_>>()?;
    let pairs: Vec<(usize, usize)> = (0..tail.len())
        .flat_map(|a| (a + 1..tail.len()).map(move |b| (a, b)))
        .collect();
    let outcomes: Vec<PairOutcome> = pairs
        .par_iter()
        .map(|&(a, b)| {
            let sum = norm.evaluate(&tail[a].add(&tail[b]), &opts)?;
            let diff = norm.evaluate(&tail[a].sub(&tail[b]), &opts)?;
            // an upper bound on the defect and a lower bound on the distance
            let defect = (2.0 * (sizes[a].hi * sizes[a].hi + sizes[b].hi * sizes[b].hi)
                - sum.lo * sum.lo)
                .max(0.0);
            Ok(PairOutcome {
                m: first + a + 1,
                n: first + b + 1,
                defect,
                distance: diff.lo,
            })
        })
        .collect::<Result<_>>()?;

    let mut flat = 0usize;
    let mut max_defect = 0.0f64;
    let mut diameter = 0.0f64;
    let mut worst = f64::NEG_INFINITY;
    let mut violations = Vec::new();
    for o in &outcomes {
        if o.defect < settings.epsilon {
            flat += 1;
            max_defect = max_defect.max(o.defect);
            diameter = diameter.max(o.distance);
            worst = worst.max(o.distance - settings.separation);
            if o.distance > settings.separation {
                violations.push(Violation {
                    sample: 0,
                    check: "near-flat-pair-separated".into(),
                    input: json!({ "m": o.m, "n": o.n, "defect": o.defect }),
                    lhs: o.distance,
                    rhs: settings.separation,
                    margin: o.distance - settings.separation,
                });
            }
        }
    }
    let verdict = if !violations.is_empty() {
        Verdict::Fail
    } else if flat > 0 {
        Verdict::Pass
    } else {
        Verdict::Inconclusive
    };
    let mut details = BTreeMap::new();
    details.insert("pairs".into(), outcomes.len() as f64);
    details.insert("nearFlatPairs".into(), flat as f64);
    details.insert("defect".into(), max_defect);
    details.insert("diameter".into(), diameter);
    details.insert("epsilon".into(), settings.epsilon);
    details.insert("separation".into(), settings.separation);
    violations.truncate(200);
    Ok(ProbeReport {
        suite_name: "two-r".into(),
        space: norm.name(),
        samples_run: 1,
        seed: scenario.seed,
        tolerance: 0.0,
        verdict,
        worst_margin: worst,
        violations,
        details,
        notes: vec![format!(
            "scenario {}: {}",
            scenario.kind.name(),
            scenario.description
        )],
    })
}

fn normalized(norm: &dyn Norm, v: &FiniteVector, opts: &EvalOptions) -> Result<FiniteVector> {
    Ok(v.scale(1.0 / midpoint(norm.evaluate(v, opts)?)))
}

/// Searches for unit vectors `x`, `y` at distance at least `1e-3` with
/// `‖x + y‖ > 2 − 1e-9`. The distance floor keeps the defect of a strictly
/// convex norm like `ℓ_2`, about `d²/4`, well above the threshold.
///
/// Samples rotate through independent random pairs, pairs sharing their
/// peak coordinate, small aligned perturbations and `(e_i, e_i + s·e_j)`.
const MIN_DISTANCE: f64 = 1e-3;

pub fn strict_convexity_probe(norm: &dyn Norm, samples: usize, seed: u64) -> Result<ProbeReport> {
    let cfg = SuiteConfig {
        samples,
        seed,
        tolerance: 0.0,
        ..SuiteConfig::default()
    };
    let opts = cfg.opts;
    let mut report = run_checks("strict-convexity", norm.name(), &cfg, |rng| {
        let kind = rng.gen_range(0..4);
        let (x, y) = match kind {
            0 => (random_vector(rng, 6, 1.0), random_vector(rng, 6, 1.0)),
            1 => {
                let d = rng.gen_range(2..=6);
                let mut a: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..=1.0)).collect();
                let mut b: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..=1.0)).collect();
                a[0] = 1.0;
                b[0] = 1.0;
                (FiniteVector::from_dense(&a)?, FiniteVector::from_dense(&b)?)
            }
            2 => {
                let x = random_vector(rng, 6, 1.0);
                let t = rng.gen_range(0.01..=1.0);
                let w = FiniteVector::from_sparse(
                    x.entries()
                        .iter()
                        .map(|&(i, _)| (i, rng.gen_range(-1.0..=1.0))),
                )?;
                let y = x.add(&w.scale(t));
                (x, if y.is_zero() { w } else { y })
            }
            _ => {
                let i = rng.gen_range(1..=4);
                let j = if rng.gen_bool(0.5) {
                    i + rng.gen_range(1..=4)
                } else {
                    (i % 4) + 1 + 4
                };
                let s = if rng.gen_bool(0.25) {
                    1.0
                } else {
                    rng.gen_range(0.01..=1.0)
                };
                let ei = FiniteVector::unit(i);
                (ei.clone(), ei.add(&FiniteVector::unit(j).scale(s)))
            }
        };
        let (x, y) = (normalized(norm, &x, &opts)?, normalized(norm, &y, &opts)?);
        let distance = norm.evaluate(&x.sub(&y), &opts)?.lo;
        if distance < MIN_DISTANCE {
            return Ok(Vec::new());
        }
        let sum = norm.evaluate(&x.add(&y), &opts)?;
        Ok(vec![Check::new(
            "unit-pair-sum",
            json!({ "x": json_of(&x), "y": json_of(&y) }),
            sum.hi,
            2.0 - 1e-9,
        )])
    })?;
    report
        .notes
        .push("violation: distinct unit vectors whose sum has norm above 2 - 1e-9".into());
    Ok(report)
}
