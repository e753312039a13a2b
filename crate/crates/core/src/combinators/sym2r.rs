//! `|||x||| = (‖x̂‖² + ‖x‖_Day²)^{1/2}` where `x̂` is the sequence of Cesàro
//! averages of the decreasing rearrangement of `x`.

use crate::error::{NormError, Result};
use crate::interval::{round_up, Interval};
use crate::norm::{
    eval_tailed, harmonic_tail_bound_at, require, Day, Envelope, EvalOptions, Norm, NormFlags,
};
use crate::vector::{hat_transform, FiniteVector};

#[derive(Clone, Debug)]
pub struct Sym2R<N> {
    pub base: N,
}

/// Enclosure of `|||x|||` with the harmonic tail of `x̂` cut at `truncate`.
pub fn symmetric_2r_norm(
    base: &dyn Norm,
    x: &FiniteVector,
    truncate: usize,
    opts: &EvalOptions,
) -> Result<Interval> {
    require(base, true, true)?;
    if x.is_zero() {
        return Ok(Interval::ZERO);
    }
    let hat = eval_tailed(base, &hat_transform(x), truncate, opts)?;
    if !hat.hi.is_finite() {
        return Err(NormError::TailNotSummable(base.name()));
    }
    Ok(hat.hypot(Interval::point(Day::value(x))))
}

/// `Σ_{k≥0} 2^{k(β−1)} (1 + k)^γ`, padded upwards.
fn block_series(power: f64, log_power: f64) -> Option<f64> {
    if power >= 1.0 {
        return None;
    }
    let mut sum = 0.0;
    for k in 0..1_000_000 {
        let term = 2f64.powf(k as f64 * (power - 1.0)) * (1.0 + k as f64).powf(log_power);
        sum += term;
        if k > 64 && term < 1e-18 * sum {
            return Some(sum * 1.01);
        }
    }
    None
}

impl<N: Norm> Norm for Sym2R<N> {
    fn name(&self) -> String {
        format!("sym2R({})", self.base.name())
    }

    fn flags(&self) -> NormFlags {
        NormFlags::SYMMETRIC
    }

    fn evaluate(&self, v: &FiniteVector, opts: &EvalOptions) -> Result<Interval> {
        symmetric_2r_norm(&self.base, v, opts.truncate, opts)
    }

    fn unit_vector_bound(&self) -> f64 {
        self.fundamental_upper(1.0).unwrap_or(f64::INFINITY)
    }

    // the transform of 1_{[1,L]} is 1 on [1, L] followed by L/n
    fn fundamental_upper(&self, len: f64) -> Option<f64> {
        let head = self.base.fundamental_upper(len)?;
        let tail = harmonic_tail_bound_at(&self.base, len, len).ok()?;
        if !tail.is_finite() {
            return None;
        }
        let hat = round_up(self.base.disjoint_rule().combine(head, tail));
        Some(round_up(hat.hypot(Day.fundamental_upper(len)?)))
    }

    // with ℓ = 1 + log₂ L the tail blocks sum to at most A·L^β·ℓ^γ·C
    fn fundamental_envelope(&self) -> Option<Envelope> {
        let base = self.base.fundamental_envelope()?;
        let series = block_series(base.power, base.log_power)?;
        let day = Day.fundamental_envelope()?;
        Some(Envelope {
            scale: round_up(base.scale * (1.0 + series) * 1.01 + day.scale),
            ..base
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norm::{Lp, L1};
    use crate::vector::{apply_permutation, apply_signs, FinitePermutation, SignPattern};

    #[test]
    fn basel_value() {
        let n = Sym2R {
            base: Lp::new(2.0).unwrap(),
        };
        let target = (std::f64::consts::PI.powi(2) / 6.0 + 0.25).sqrt();
        let opts = EvalOptions {
            truncate: 4096,
            ..EvalOptions::default()
        };
        let e = n.evaluate(&FiniteVector::unit(1), &opts).unwrap();
        assert!(e.contains(target) && e.width() < 1e-3, "{e}");
        assert_eq!(
            n.evaluate(&FiniteVector::zero(), &opts).unwrap(),
            Interval::ZERO
        );
    }

    #[test]
    fn symmetric_bit_for_bit() {
        let n = Sym2R {
            base: Lp::new(1.5).unwrap(),
        };
        let o = EvalOptions::default();
        let v = FiniteVector::from_dense(&[0.1, -3.0, 2.5, 0.0, 7.0]).unwrap();
        let sigma = FinitePermutation::from_pairs([(1, 9), (9, 2), (2, 1)]).unwrap();
        let w = apply_signs(&apply_permutation(&v, &sigma), &SignPattern::new([2, 9]));
        assert_eq!(n.evaluate(&v, &o).unwrap(), n.evaluate(&w, &o).unwrap());
    }

    #[test]
    fn divergent_base_is_rejected() {
        let n = Sym2R { base: L1 };
        let err = n
            .evaluate(&FiniteVector::unit(1), &EvalOptions::default())
            .unwrap_err();
        assert!(matches!(err, NormError::TailNotSummable(_)));
    }

    #[test]
    fn fundamental_bound_dominates_direct_values() {
        let n = Sym2R {
            base: Lp::new(2.0).unwrap(),
        };
        let env = n.fundamental_envelope().unwrap();
        for len in [1usize, 2, 5, 17, 64] {
            let direct = n
                .evaluate(&FiniteVector::indicator(1, len), &EvalOptions::default())
                .unwrap();
            let bound = n.fundamental_upper(len as f64).unwrap();
            assert!(direct.lo <= bound, "L = {len}");
            assert!(bound <= env.at(len as f64), "L = {len}");
        }
    }
}
