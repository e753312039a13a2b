//! The sum-over-classes renorming: for a strictly convex 1-unconditional
//! base, `|||x||| = Σ_A p_A Σ_{c∈A} ‖x‖_c` with `‖·‖_c` the shifted norm and
//! `A` ranging over absolute-equivalence classes of rational vectors.
//!
//! Classes are listed by level: level `ℓ` holds the classes whose support
//! lies in `[1, ℓ]` and whose coefficients are `p/q` with `max(p, q) <= ℓ`,
//! not already listed at a lower level. The zero class comes first. Within a
//! level classes are in lexicographic order of their coefficient tuples.
//!
//! With `p_A = q^rank / (|A| + Σ_{c∈A} ‖c‖)` and `‖x‖_c <= (2 + 2‖c‖)‖x‖`,
//! class `A` contributes at most `2‖x‖ q^rank`, so the classes past the first
//! `R` add at most `2‖x‖ q^R / (1 − q)`.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::shifted_norm;
use crate::error::{NormError, Result};
use crate::interval::{round_up, Interval};
use crate::norm::{require, EvalOptions, Norm, NormFlags};
use crate::vector::FiniteVector;

/// Which prefix of the class ordering is summed explicitly.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquivClassEnumeration {
    /// Number `R` of leading classes summed explicitly.
    pub classes: usize,
    /// Ratio `q` in `p_A = q^rank / (|A| + Σ‖c‖)`.
    pub weight_decay: f64,
}

impl Default for EquivClassEnumeration {
    fn default() -> Self {
        Self {
            classes: 64,
            weight_decay: 0.5,
        }
    }
}

impl EquivClassEnumeration {
    pub fn new(classes: usize, weight_decay: f64) -> Result<Self> {
        if !(weight_decay > 0.0 && weight_decay < 1.0) {
            return Err(NormError::InvalidParameter(format!(
                "weight decay must lie in (0, 1), got {weight_decay}"
            )));
        }
        Ok(Self {
            classes,
            weight_decay,
        })
    }

    /// Nonnegative representatives of the first `classes` classes.
    pub fn representatives(&self) -> impl Iterator<Item = Vec<(usize, f64)>> {
        std::iter::once(Vec::new())
            .chain((1..).flat_map(level_classes))
            .take(self.classes)
    }

    /// Bound on the contribution of every class past the enumerated prefix,
    /// per unit of `‖x‖`.
    fn tail_weight(&self) -> f64 {
        let q = self.weight_decay;
        round_up(
            2.0 * q.powi(self.classes.min(i32::MAX as usize) as i32) / (1.0 - q) * (1.0 + 1e-12),
        )
    }
}

/// Positive rationals `p/q` in lowest terms with `max(p, q) <= level`, in
/// increasing order, each flagged when its height equals `level`.
fn rationals(level: usize) -> Vec<(f64, bool)> {
    let mut out: Vec<(usize, usize)> = Vec::new();
    for p in 1..=level {
        for q in 1..=level {
            if p.gcd(&q) == 1 {
                out.push((p, q));
            }
        }
    }
    out.sort_by(|a, b| (a.0 * b.1).cmp(&(b.0 * a.1)));
    out.into_iter()
        .map(|(p, q)| (p as f64 / q as f64, p.max(q) == level))
        .collect()
}

fn level_classes(level: usize) -> impl Iterator<Item = Vec<(usize, f64)>> {
    let values = rationals(level);
    let radix = values.len() + 1;
    let mut digits = vec![0usize; level];
    let mut done = false;
    std::iter::from_fn(move || loop {
        if done {
            return None;
        }
        let current = digits.clone();
        // odometer, last coordinate fastest
        let mut k = level;
        loop {
            if k == 0 {
                done = true;
                break;
            }
            k -= 1;
            digits[k] += 1;
            if digits[k] < radix {
                break;
            }
            digits[k] = 0;
        }
        let new_here = current[level - 1] != 0 || current.iter().any(|&d| d > 0 && values[d - 1].1);
        if new_here {
            return Some(
                current
                    .iter()
                    .enumerate()
                    .filter(|(_, &d)| d > 0)
                    .map(|(i, &d)| (i + 1, values[d - 1].0))
                    .collect(),
            );
        }
    })
}

/// The renormed space as a [`Norm`]; values are enclosures of the full sum.
#[derive(Clone, Debug)]
pub struct OsRenorm<N> {
    pub base: N,
    pub enumeration: EquivClassEnumeration,
}

fn class_sum(
    base: &dyn Norm,
    rep: &[(usize, f64)],
    v: &FiniteVector,
    opts: &EvalOptions,
) -> Result<(f64, usize, f64)> {
    let members = 1u64 << rep.len();
    let mut sum = 0.0;
    for mask in 0..members {
        let c = FiniteVector::from_sparse(
            rep.iter()
                .enumerate()
                .map(|(k, &(i, a))| (i, if mask >> k & 1 == 1 { -a } else { a })),
        )?;
        sum += shifted_norm(base, &c, v, opts)?.lo;
    }
    let norm_rep = base
        .evaluate(&FiniteVector::from_sparse(rep.iter().copied())?, opts)?
        .lo;
    Ok((sum, members as usize, norm_rep))
}

fn os_sum(
    base: &dyn Norm,
    enumeration: &EquivClassEnumeration,
    v: &FiniteVector,
    opts: &EvalOptions,
) -> Result<Interval> {
    require(base, true, false)?;
    if v.is_zero() {
        return Ok(Interval::ZERO);
    }
    let q = enumeration.weight_decay;
    let mut lo = 0.0;
    let mut weight = 1.0;
    for rep in enumeration.representatives() {
        let (sum, members, norm_rep) = class_sum(base, &rep, v, opts)?;
        let size = members as f64;
        lo += weight / (size + size * norm_rep) * sum;
        weight *= q;
    }
    let nv = base.evaluate(v, opts)?.hi;
    let hi = round_up(lo + round_up(nv * enumeration.tail_weight()));
    Ok(Interval::new(lo, hi.max(lo)))
}

/// Enclosure of `|||v|||`. The sum is taken at `|v|`, which the norm cannot
/// tell apart from `v`, so sign flips of `v` give bit-identical enclosures.
pub fn os_unconditional_2r(
    base: &dyn Norm,
    enumeration: &EquivClassEnumeration,
    v: &FiniteVector,
    opts: &EvalOptions,
) -> Result<Interval> {
    os_sum(base, enumeration, &v.abs(), opts)
}

impl<N: Norm> Norm for OsRenorm<N> {
    fn name(&self) -> String {
        format!("os({}, {})", self.base.name(), self.enumeration.classes)
    }

    fn flags(&self) -> NormFlags {
        NormFlags::UNCONDITIONAL
    }

    fn evaluate(&self, v: &FiniteVector, opts: &EvalOptions) -> Result<Interval> {
        os_unconditional_2r(&self.base, &self.enumeration, v, opts)
    }

    fn unit_vector_bound(&self) -> f64 {
        round_up(2.0 * self.base.unit_vector_bound() / (1.0 - self.enumeration.weight_decay))
    }
}
