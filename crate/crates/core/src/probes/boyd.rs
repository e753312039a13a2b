use rand::Rng;
use serde::Serialize;

use super::{random_vector, sample_rng};
use crate::error::Result;
use crate::norm::{require, EvalOptions, Norm};
use crate::vector::{dilate, FiniteVector};

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BoydRow {
    pub m: usize,
    /// Largest `‖D_m x‖ / ‖x‖` found, a lower bound on `‖D_m‖`.
    #[serde(serialize_with = "super::wire::float")]
    pub bound: f64,
    /// `log m / log bound` rounded upward, an upper estimate of the true ratio
    /// at `m`.
    #[serde(serialize_with = "super::wire::float")]
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BoydEstimate {
    pub rows: Vec<BoydRow>,
    /// Minimum of the per-`m` ratios; `+∞` when every bound is 1.
    #[serde(serialize_with = "super::wire::float")]
    pub p_estimate: f64,
}

fn candidates(dim: usize, samples: usize, seed: u64) -> Vec<FiniteVector> {
    let dim = dim.max(1);
    let mut out = vec![FiniteVector::unit(1), FiniteVector::indicator(1, dim)];
    for r in [0.5f64, 0.8, 0.95] {
        let profile: Vec<f64> = (0..dim).map(|k| r.powi(k as i32)).collect();
        out.push(FiniteVector::from_dense(&profile).expect("finite profile"));
    }
    for k in 0..samples {
        let mut rng = sample_rng(seed, k);
        let v = random_vector(&mut rng, dim, 1.0);
        // dilation acts on positions, so pack the support to the front
        let packed: Vec<f64> = v.values().map(|a| a * rng.gen_range(0.5..=1.0)).collect();
        out.push(FiniteVector::from_dense(&packed).expect("finite values"));
    }
    out
}

const NOISE: f64 = 1e-12;

/// A lower bound on `a / b`: the rounded quotient when it is exact.
fn quotient_lower(a: f64, b: f64) -> f64 {
    let q = a / b;
    if q.mul_add(b, -a) <= 0.0 {
        q
    } else {
        q.next_down()
    }
}

/// An upper bound on `log m / log bound`. When `m` and `bound` are powers of
/// two both logarithms are exact integers and only the division rounds.
fn ratio_upper(m: usize, bound: f64) -> f64 {
    if bound <= 1.0 {
        return f64::INFINITY;
    }
    let (lm, lb) = ((m as f64).log2(), bound.log2());
    if m.is_power_of_two() && lb.fract() == 0.0 && lb.exp2() == bound {
        let r = lm / lb;
        return if r * lb >= lm { r } else { r.next_up() };
    }
    // pad for the rounding of the bound and of both logarithms
    let lb = bound.next_down().next_down().log2();
    (lm / lb * (1.0 + 8.0 * f64::EPSILON)).next_up()
}

/// Lower bounds on `‖D_m‖` for `2 <= m <= m_max` and the resulting estimate
/// of the lower Boyd index.
pub fn boyd_estimate(
    norm: &dyn Norm,
    m_max: usize,
    dim: usize,
    samples: usize,
    seed: u64,
) -> Result<BoydEstimate> {
    require(norm, true, false)?;
    let opts = EvalOptions::default();
    let pool = candidates(dim, samples, seed);
    let mut norms = Vec::with_capacity(pool.len());
    for x in &pool {
        norms.push(norm.evaluate(x, &opts)?.hi);
    }
    let mut rows = Vec::new();
    for m in 2..=m_max.max(2) {
        let mut bound = 1.0f64;
        for (x, nx) in pool.iter().zip(&norms) {
            let q = quotient_lower(norm.evaluate(&dilate(x, m)?, &opts)?.lo, *nx);
            // structured candidates come first; later ones must beat them
            // by more than evaluation noise
            if q > bound * (1.0 + NOISE) {
                bound = q;
            }
        }
        rows.push(BoydRow {
            m,
            bound,
            ratio: ratio_upper(m, bound),
        });
    }
    let p_estimate = rows.iter().map(|r| r.ratio).fold(f64::INFINITY, f64::min);
    Ok(BoydEstimate { rows, p_estimate })
}
