//! Closed-form base norms.
//!
//! Rearrangement-invariant norms are summed over the decreasing
//! rearrangement, so permuted or sign-flipped inputs give bit-identical values.

use super::{tsirelson, DisjointRule, Envelope, EvalOptions, Norm, NormFlags};
use crate::error::{NormError, Result};
use crate::interval::{round_up, Interval};
use crate::vector::{decreasing_rearrangement, FiniteVector};

/// Positions of `entries` sorted by decreasing magnitude (ties by index).
fn ranks_by_magnitude(entries: &[(usize, f64)]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..entries.len()).collect();
    order.sort_by(|&a, &b| {
        entries[b]
            .1
            .abs()
            .total_cmp(&entries[a].1.abs())
            .then(a.cmp(&b))
    });
    let mut rank = vec![0; entries.len()];
    for (r, &k) in order.iter().enumerate() {
        rank[k] = r + 1;
    }
    rank
}

fn sorted_abs(entries: &[(usize, f64)]) -> Vec<f64> {
    let mut values: Vec<f64> = entries.iter().map(|&(_, a)| a.abs()).collect();
    values.sort_by(|a, b| b.total_cmp(a));
    values
}

/// `(Σ |a_n|^p)^{1/p}` over non-increasing `sorted`, scaled by the leading term.
fn lp_of_sorted(sorted: &[f64], p: f64) -> f64 {
    let Some(&top) = sorted.first() else {
        return 0.0;
    };
    if top == 0.0 {
        return 0.0;
    }
    if p == 1.0 {
        return sorted.iter().sum();
    }
    let sum: f64 = if p == 2.0 {
        sorted.iter().map(|a| (a / top) * (a / top)).sum()
    } else {
        sorted.iter().map(|a| (a / top).powf(p)).sum()
    };
    let root = if p == 2.0 {
        sum.sqrt()
    } else {
        nearest_root(sum, p)
    };
    top * root
}

/// `s^{1/p}`, polished to the neighbouring double whose `p`-th power lands
/// closest to `s`; `powf(s, 1/p)` alone misses exact roots like `8^{2/3}`.
fn nearest_root(s: f64, p: f64) -> f64 {
    let r = s.powf(1.0 / p);
    [r.next_down(), r.next_up()].into_iter().fold(r, |best, c| {
        if (c.powf(p) - s).abs() < (best.powf(p) - s).abs() {
            c
        } else {
            best
        }
    })
}

fn day_of_sorted(sorted: &[f64]) -> f64 {
    let Some(&top) = sorted.first() else {
        return 0.0;
    };
    let mut weight = 1.0;
    let mut sum = 0.0;
    for &a in sorted {
        weight *= 0.25;
        if weight == 0.0 {
            break;
        }
        let r = a / top;
        sum += weight * r * r;
    }
    top * sum.sqrt()
}

/// A subgradient sign of `|a|`. At a zero the sign bit picks `±1`: splits
/// only produce `+0.0`, and `+1` is the one-sided slope on that side.
fn sign(a: f64) -> f64 {
    a.signum()
}

/// `ℓ_p`, `1 <= p < ∞`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Lp {
    p: f64,
}

impl Lp {
    pub fn new(p: f64) -> Result<Self> {
        if !(p >= 1.0 && p.is_finite()) {
            return Err(NormError::InvalidParameter(format!(
                "lp requires 1 <= p < inf, got {p}"
            )));
        }
        Ok(Self { p })
    }

    pub fn p(&self) -> f64 {
        self.p
    }
}

impl Norm for Lp {
    fn name(&self) -> String {
        format!("lp({})", self.p)
    }
    fn flags(&self) -> NormFlags {
        NormFlags::SYMMETRIC
    }
    fn evaluate(&self, v: &FiniteVector, _: &EvalOptions) -> Result<Interval> {
        Ok(Interval::point(lp_of_sorted(
            decreasing_rearrangement(v).values(),
            self.p,
        )))
    }
    fn value_and_subgradient(&self, entries: &[(usize, f64)]) -> Option<(f64, Vec<f64>)> {
        let value = lp_of_sorted(&sorted_abs(entries), self.p);
        let grad = entries
            .iter()
            .map(|&(_, a)| {
                if value == 0.0 {
                    0.0
                } else {
                    sign(a) * (a.abs() / value).powf(self.p - 1.0)
                }
            })
            .collect();
        Some((value, grad))
    }
    fn unit_vector_bound(&self) -> f64 {
        1.0
    }
    fn fundamental_upper(&self, len: f64) -> Option<f64> {
        Some(round_up(len.powf(1.0 / self.p)))
    }
    fn fundamental_envelope(&self) -> Option<Envelope> {
        Some(Envelope {
            scale: round_up(1.0),
            power: 1.0 / self.p,
            log_power: 0.0,
        })
    }
    fn disjoint_rule(&self) -> DisjointRule {
        if self.p == 1.0 {
            DisjointRule::Triangle
        } else {
            DisjointRule::Power(self.p)
        }
    }
}

/// The sup norm of `c_0`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Sup;

impl Norm for Sup {
    fn name(&self) -> String {
        "sup".into()
    }
    fn flags(&self) -> NormFlags {
        NormFlags::SYMMETRIC
    }
    fn evaluate(&self, v: &FiniteVector, _: &EvalOptions) -> Result<Interval> {
        Ok(Interval::point(v.sup_norm()))
    }
    fn value_and_subgradient(&self, entries: &[(usize, f64)]) -> Option<(f64, Vec<f64>)> {
        let mut grad = vec![0.0; entries.len()];
        let mut best: Option<usize> = None;
        for (k, &(_, a)) in entries.iter().enumerate() {
            if best.is_none_or(|b| a.abs() > entries[b].1.abs()) {
                best = Some(k);
            }
        }
        let value = best.map_or(0.0, |b| entries[b].1.abs());
        if let Some(b) = best.filter(|_| value > 0.0) {
            grad[b] = sign(entries[b].1);
        }
        Some((value, grad))
    }
    fn unit_vector_bound(&self) -> f64 {
        1.0
    }
    fn fundamental_upper(&self, _len: f64) -> Option<f64> {
        Some(1.0)
    }
    fn fundamental_envelope(&self) -> Option<Envelope> {
        Some(Envelope {
            scale: 1.0,
            power: 0.0,
            log_power: 0.0,
        })
    }
    fn disjoint_rule(&self) -> DisjointRule {
        DisjointRule::Max
    }
}

/// `ℓ_1`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct L1;

impl Norm for L1 {
    fn name(&self) -> String {
        "l1".into()
    }
    fn flags(&self) -> NormFlags {
        NormFlags::SYMMETRIC
    }
    fn evaluate(&self, v: &FiniteVector, _: &EvalOptions) -> Result<Interval> {
        Ok(Interval::point(
            decreasing_rearrangement(v).values().iter().sum(),
        ))
    }
    fn value_and_subgradient(&self, entries: &[(usize, f64)]) -> Option<(f64, Vec<f64>)> {
        let value = sorted_abs(entries).iter().sum();
        Some((value, entries.iter().map(|&(_, a)| sign(a)).collect()))
    }
    fn unit_vector_bound(&self) -> f64 {
        1.0
    }
    fn fundamental_upper(&self, len: f64) -> Option<f64> {
        Some(len)
    }
    fn fundamental_envelope(&self) -> Option<Envelope> {
        Some(Envelope {
            scale: 1.0,
            power: 1.0,
            log_power: 0.0,
        })
    }
}

/// Day's norm `(Σ 4^{-n} a_n*²)^{1/2}` of the decreasing rearrangement.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Day;

impl Day {
    pub fn value(v: &FiniteVector) -> f64 {
        day_of_sorted(decreasing_rearrangement(v).values())
    }

    pub(crate) fn fundamental(len: f64) -> f64 {
        // Σ_{n≤L} 4^{-n} = (1 - 4^{-L}) / 3
        round_up(((1.0 - 0.25f64.powf(len.min(1100.0))) / 3.0).sqrt())
    }
}

impl Norm for Day {
    fn name(&self) -> String {
        "day".into()
    }
    fn flags(&self) -> NormFlags {
        NormFlags::SYMMETRIC
    }
    fn evaluate(&self, v: &FiniteVector, _: &EvalOptions) -> Result<Interval> {
        Ok(Interval::point(Day::value(v)))
    }
    fn value_and_subgradient(&self, entries: &[(usize, f64)]) -> Option<(f64, Vec<f64>)> {
        let value = day_of_sorted(&sorted_abs(entries));
        let ranks = ranks_by_magnitude(entries);
        let grad = entries
            .iter()
            .zip(&ranks)
            .map(|(&(_, a), &r)| {
                if value == 0.0 {
                    0.0
                } else {
                    0.25f64.powi(r as i32) * a / value
                }
            })
            .collect();
        Some((value, grad))
    }
    fn unit_vector_bound(&self) -> f64 {
        0.5
    }
    fn fundamental_upper(&self, len: f64) -> Option<f64> {
        Some(Day::fundamental(len))
    }
    fn fundamental_envelope(&self) -> Option<Envelope> {
        Some(Envelope {
            scale: round_up((1.0f64 / 3.0).sqrt()),
            power: 0.0,
            log_power: 0.0,
        })
    }
}

/// The Lorentz norm `Σ a_n*/n` (weight `w_n = 1/n`).
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Lorentz;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

fn harmonic_number_upper(len: f64) -> f64 {
    if len <= 10_000.0 {
        round_up((1..=len as u64).map(|k| 1.0 / k as f64).sum())
    } else {
        // H_L < ln L + γ + 1/(2L)
        round_up(len.ln() + EULER_GAMMA + 0.5 / len)
    }
}

impl Norm for Lorentz {
    fn name(&self) -> String {
        "lorentz".into()
    }
    fn flags(&self) -> NormFlags {
        NormFlags::SYMMETRIC
    }
    fn evaluate(&self, v: &FiniteVector, _: &EvalOptions) -> Result<Interval> {
        let sorted = decreasing_rearrangement(v);
        Ok(Interval::point(
            sorted
                .values()
                .iter()
                .enumerate()
                .map(|(k, a)| a / (k + 1) as f64)
                .sum(),
        ))
    }
    fn value_and_subgradient(&self, entries: &[(usize, f64)]) -> Option<(f64, Vec<f64>)> {
        let value = sorted_abs(entries)
            .iter()
            .enumerate()
            .map(|(k, a)| a / (k + 1) as f64)
            .sum();
        let ranks = ranks_by_magnitude(entries);
        let grad = entries
            .iter()
            .zip(&ranks)
            .map(|(&(_, a), &r)| sign(a) / r as f64)
            .collect();
        Some((value, grad))
    }
    fn unit_vector_bound(&self) -> f64 {
        1.0
    }
    fn fundamental_upper(&self, len: f64) -> Option<f64> {
        Some(harmonic_number_upper(len))
    }
    fn fundamental_envelope(&self) -> Option<Envelope> {
        // H_L <= 1 + ln L <= 1 + log₂ L
        Some(Envelope {
            scale: 1.0,
            power: 0.0,
            log_power: 1.0,
        })
    }
}

/// Tsirelson's space `T` with its implicit recursive norm.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Tsirelson;

impl Norm for Tsirelson {
    fn name(&self) -> String {
        "tsirelson".into()
    }
    fn flags(&self) -> NormFlags {
        NormFlags::UNCONDITIONAL
    }
    fn evaluate(&self, v: &FiniteVector, _: &EvalOptions) -> Result<Interval> {
        Ok(Interval::point(tsirelson::norm(v.entries())))
    }
    fn value_and_subgradient(&self, entries: &[(usize, f64)]) -> Option<(f64, Vec<f64>)> {
        Some(tsirelson::norm_with_functional(entries))
    }
    fn unit_vector_bound(&self) -> f64 {
        1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norm::eval;

    fn v(values: &[f64]) -> FiniteVector {
        FiniteVector::from_dense(values).unwrap()
    }

    #[test]
    fn dispatch_examples() {
        assert_eq!(eval(&Sup, &v(&[1.0, -2.0])).unwrap(), 2.0);
        assert_eq!(
            eval(&Lp::new(2.0).unwrap(), &v(&[1.0, 1.0])).unwrap(),
            2f64.sqrt()
        );
        assert_eq!(eval(&L1, &v(&[1.0, -2.0, 3.0])).unwrap(), 6.0);
        assert!(Lp::new(0.5).is_err());
        assert!(Lp::new(f64::INFINITY).is_err());
    }

    #[test]
    fn day_examples() {
        assert_eq!(eval(&Day, &FiniteVector::unit(1)).unwrap(), 0.5);
        let expected = 5f64.sqrt() / 4.0;
        assert!((eval(&Day, &v(&[1.0, 1.0])).unwrap() - expected).abs() < 1e-12);
        assert_eq!(
            eval(&Day, &v(&[2.0, 1.0, 3.0])).unwrap(),
            eval(&Day, &v(&[3.0, 2.0, 1.0])).unwrap()
        );
    }

    #[test]
    fn lorentz_examples() {
        assert_eq!(eval(&Lorentz, &FiniteVector::unit(1)).unwrap(), 1.0);
        assert_eq!(eval(&Lorentz, &v(&[1.0, 1.0])).unwrap(), 1.5);
        assert_eq!(eval(&Lorentz, &FiniteVector::unit(9)).unwrap(), 1.0);
    }

    #[test]
    fn subgradients_norm_their_point() {
        let entries = [(1, 0.5), (3, -2.0), (4, 0.0), (7, 1.25)];
        let norms: [&dyn Norm; 6] = [
            &Lp::new(3.0).unwrap(),
            &Sup,
            &L1,
            &Day,
            &Lorentz,
            &Tsirelson,
        ];
        for norm in norms {
            let (value, grad) = norm.value_and_subgradient(&entries).unwrap();
            let pairing: f64 = entries.iter().zip(&grad).map(|(&(_, a), g)| a * g).sum();
            assert!((pairing - value).abs() < 1e-12, "{}", norm.name());
            let x = FiniteVector::from_sparse(entries).unwrap();
            assert_eq!(value, eval(norm, &x).unwrap(), "{}", norm.name());
        }
    }

    #[test]
    fn fundamental_bounds_match_direct_values() {
        let norms: [&dyn Norm; 5] = [&Lp::new(2.5).unwrap(), &Sup, &L1, &Day, &Lorentz];
        for norm in norms {
            let env = norm.fundamental_envelope().unwrap();
            for len in [1usize, 2, 3, 7, 64, 1000] {
                let direct = eval(norm, &FiniteVector::indicator(1, len)).unwrap();
                let upper = norm.fundamental_upper(len as f64).unwrap();
                assert!(
                    direct <= upper && upper <= direct * (1.0 + 1e-12),
                    "{} at {len}",
                    norm.name()
                );
                assert!(
                    upper <= env.at(len as f64) * (1.0 + 1e-12),
                    "{} envelope at {len}",
                    norm.name()
                );
            }
        }
        assert!(harmonic_number_upper(2e6) >= harmonic_number_upper(1e6));
    }
}
