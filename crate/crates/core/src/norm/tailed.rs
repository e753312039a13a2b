//! Norms of harmonic-tailed sequences with certified tail bounds.
//!
//! The tail `S/n` beyond index `M` is split into dyadic blocks
//! `[2ᵏM+1, 2ᵏ⁺¹M]`, each dominated by the constant `S/(2ᵏM)` on `2ᵏM`
//! coordinates, whose norm is at most `(S/(2ᵏM))·φ(2ᵏM)` for a 1-symmetric
//! norm. Block bounds are merged with the norm's [`DisjointRule`]; after
//! [`EXPLICIT_BLOCKS`] blocks the rest of the series is bounded through the
//! norm's growth [`Envelope`] as a geometric series.

use super::{require, DisjointRule, EvalOptions, Norm};
use crate::error::{NormError, Result};
use crate::interval::{round_up, Interval};
use crate::vector::{FiniteVector, TailedVector};

const EXPLICIT_BLOCKS: i32 = 64;

/// `φ(L) = ‖Σ_{i≤L} e_i‖`, by direct evaluation.
pub fn fundamental_function(norm: &dyn Norm, len: usize) -> Result<f64> {
    if !norm.flags().has_fundamental_function() {
        return Err(NormError::MissingProperty {
            norm: norm.name(),
            property: "1-symmetric",
        });
    }
    if len == 0 {
        return Ok(0.0);
    }
    super::eval(norm, &FiniteVector::indicator(1, len))
}

/// Upper bound on the norm of `n ↦ mass/n` restricted to `n > cut`.
/// Returns `+∞` when the dyadic series does not converge.
pub fn harmonic_tail_bound(norm: &dyn Norm, cut: usize, mass: f64) -> Result<f64> {
    harmonic_tail_bound_at(norm, cut.max(1) as f64, mass)
}

/// [`harmonic_tail_bound`] for cut points beyond the `usize` range.
pub(crate) fn harmonic_tail_bound_at(norm: &dyn Norm, cut: f64, mass: f64) -> Result<f64> {
    if mass == 0.0 {
        return Ok(0.0);
    }
    let cut = cut.max(1.0);
    let missing = || NormError::MissingProperty {
        norm: norm.name(),
        property: "fundamental-function bound",
    };
    let envelope = norm.fundamental_envelope().ok_or_else(missing)?;
    if envelope.power >= 1.0 {
        return Ok(f64::INFINITY);
    }
    let rule = norm.disjoint_rule();
    let mut acc = 0.0f64;
    for k in 0..EXPLICIT_BLOCKS {
        let len = cut * 2f64.powi(k);
        let block = round_up(mass * norm.fundamental_upper(len).ok_or_else(missing)? / len);
        acc = match rule {
            DisjointRule::Triangle => acc + block,
            DisjointRule::Power(p) => acc + block.powf(p),
            DisjointRule::Max => acc.max(block),
        };
    }
    // remaining blocks: T_k = mass·A·L_k^{β-1}·ℓ_k^γ with ℓ_k = 1 + log₂ L_k,
    // successive ratios at most 2^{β-1}·(ℓ_{K+1}/ℓ_K)^γ
    let first = cut * 2f64.powi(EXPLICIT_BLOCKS);
    let level = 1.0 + first.log2();
    let term = round_up(mass * envelope.at(first) / first);
    let ratio = round_up(
        2f64.powf(envelope.power - 1.0) * ((level + 1.0) / level).powf(envelope.log_power),
    );
    if ratio >= 1.0 {
        return Ok(f64::INFINITY);
    }
    let total = match rule {
        DisjointRule::Triangle => acc + term / (1.0 - ratio),
        DisjointRule::Power(p) => (acc + term.powf(p) / (1.0 - ratio.powf(p))).powf(1.0 / p),
        DisjointRule::Max => acc.max(term),
    };
    Ok(round_up(round_up(total)))
}

/// Encloses `‖w‖` by evaluating `w` up to index `truncate` and bounding the
/// rest of its harmonic tail. The result is intersected with the enclosures
/// at `⌊truncate/2ʲ⌋`, so doubling `truncate` never widens it.
pub fn eval_tailed(
    norm: &dyn Norm,
    w: &TailedVector,
    truncate: usize,
    opts: &EvalOptions,
) -> Result<Interval> {
    require(norm, true, true)?;
    let floor = w.head_end().max(w.start() - 1);
    let mut cut = truncate;
    let mut best = enclose_at(norm, w, cut.max(floor), opts)?;
    while cut > floor {
        cut /= 2;
        let e = enclose_at(norm, w, cut.max(floor), opts)?;
        best = Interval {
            lo: best.lo.max(e.lo),
            hi: best.hi.min(e.hi),
        };
    }
    Ok(best)
}

fn enclose_at(
    norm: &dyn Norm,
    w: &TailedVector,
    cut: usize,
    opts: &EvalOptions,
) -> Result<Interval> {
    let head = norm.evaluate(&w.truncate(cut), opts)?;
    let tail = harmonic_tail_bound(norm, cut, w.tail_mass())?;
    if tail == 0.0 {
        return Ok(head);
    }
    let hi = norm.disjoint_rule().combine(head.hi, tail);
    Ok(Interval::new(head.lo, hi.max(head.hi)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norm::{Day, Lp, Sup, L1};
    use crate::vector::hat_transform;

    #[test]
    fn basel_enclosure() {
        let basel = (std::f64::consts::PI.powi(2) / 6.0).sqrt();
        let hat = hat_transform(&FiniteVector::unit(1));
        let lp2 = Lp::new(2.0).unwrap();
        for m in [1, 4, 64, 4096] {
            let e = eval_tailed(&lp2, &hat, m, &EvalOptions::default()).unwrap();
            assert!(e.contains(basel), "{e} at M={m}");
        }
    }

    #[test]
    fn pure_tail_nests_below_its_start() {
        let w = hat_transform(&FiniteVector::from_dense(&[0.0, 0.0, 7.0, 0.0, -4.0]).unwrap())
            .restrict(20, None)
            .unwrap();
        let opts = EvalOptions::default();
        for t in [1, 17, 19, 33, 100] {
            let (a, b) = (
                eval_tailed(&Day, &w, t, &opts).unwrap(),
                eval_tailed(&Day, &w, 2 * t, &opts).unwrap(),
            );
            assert!(a.lo <= b.lo && b.hi <= a.hi, "{a} then {b} at {t}");
        }
    }

    #[test]
    fn sup_of_harmonic_tail() {
        let hat = hat_transform(&FiniteVector::unit(1));
        let e = eval_tailed(&Sup, &hat, 1, &EvalOptions::default()).unwrap();
        assert_eq!(e.lo, 1.0);
        assert!(e.contains(1.0));
    }

    #[test]
    fn l1_tail_diverges() {
        let hat = hat_transform(&FiniteVector::unit(1));
        for m in [1, 100] {
            let e = eval_tailed(&L1, &hat, m, &EvalOptions::default()).unwrap();
            assert_eq!(e.hi, f64::INFINITY);
        }
    }

    #[test]
    fn direct_fundamental_values() {
        assert_eq!(fundamental_function(&Sup, 7).unwrap(), 1.0);
        assert_eq!(fundamental_function(&L1, 7).unwrap(), 7.0);
        assert_eq!(
            fundamental_function(&Lp::new(2.0).unwrap(), 4).unwrap(),
            2.0
        );
        assert!(fundamental_function(&crate::norm::Tsirelson, 3).is_err());
    }
}
