use crate::error::{NormError, Result};
use crate::interval::{round_up, Interval};
use crate::norm::{EvalOptions, Norm, NormFlags};
use crate::vector::FiniteVector;

/// Largest support for which the sup over sign patterns is enumerated.
pub const SIGN_ENUMERATION_CAP: usize = 20;

/// `‖x‖ = sup_± ‖Σ ±a_n e_n‖_base + (Σ 2^{-4n} a_n²)^{1/2}`.
///
/// The weighted `ℓ₂` summand is strictly convex, which makes the whole norm
/// strictly convex; the sup over signs makes it 1-unconditional.
#[derive(Clone, Debug)]
pub struct ScBase<N> {
    pub base: N,
    pub cap: usize,
}

pub fn strictly_convex_unconditional_base<N: Norm>(base: N) -> ScBase<N> {
    ScBase {
        base,
        cap: SIGN_ENUMERATION_CAP,
    }
}

fn weighted_l2(entries: &[(usize, f64)]) -> f64 {
    entries
        .iter()
        .map(|&(n, a)| {
            let w = 2f64.powi(-4 * n.min(1 << 20) as i32);
            w * a * a
        })
        .sum::<f64>()
        .sqrt()
}

fn with_signs(entries: &[(usize, f64)], mask: u64) -> Vec<(usize, f64)> {
    entries
        .iter()
        .enumerate()
        .map(|(k, &(n, a))| (n, if mask >> k & 1 == 1 { -a } else { a }))
        .collect()
}

impl<N: Norm> ScBase<N> {
    fn check_support(&self, len: usize) -> Result<()> {
        if len > self.cap {
            return Err(NormError::SignEnumerationTooLarge {
                support: len,
                cap: self.cap,
            });
        }
        Ok(())
    }

    fn sign_sup(&self, v: &FiniteVector, opts: &EvalOptions) -> Result<Interval> {
        if self.base.flags().unconditional {
            return self.base.evaluate(v, opts);
        }
        self.check_support(v.support_len())?;
        // the pattern and its negation give the same value
        let patterns = 1u64 << v.support_len().saturating_sub(1);
        let mut best = Interval::ZERO;
        for mask in 0..patterns {
            let flipped = FiniteVector::from_sparse(with_signs(v.entries(), mask))?;
            best = best.max(self.base.evaluate(&flipped, opts)?);
        }
        Ok(best)
    }
}

impl<N: Norm> Norm for ScBase<N> {
    fn name(&self) -> String {
        format!("scBase({})", self.base.name())
    }

    fn flags(&self) -> NormFlags {
        NormFlags::UNCONDITIONAL
    }

    fn evaluate(&self, v: &FiniteVector, opts: &EvalOptions) -> Result<Interval> {
        let sup = self.sign_sup(v, opts)?;
        Ok(sup + Interval::point(weighted_l2(v.entries())))
    }

    fn value_and_subgradient(&self, entries: &[(usize, f64)]) -> Option<(f64, Vec<f64>)> {
        let (sup, grad) = if self.base.flags().unconditional {
            self.base.value_and_subgradient(entries)?
        } else {
            if entries.len() > self.cap {
                return None;
            }
            let mut best: Option<(f64, Vec<f64>)> = None;
            for mask in 0..(1u64 << entries.len().saturating_sub(1)) {
                let (value, g) = self
                    .base
                    .value_and_subgradient(&with_signs(entries, mask))?;
                if best.as_ref().is_none_or(|(b, _)| value > *b) {
                    // chain rule through the sign flip
                    let g = g
                        .iter()
                        .enumerate()
                        .map(|(k, x)| if mask >> k & 1 == 1 { -x } else { *x })
                        .collect();
                    best = Some((value, g));
                }
            }
            best.unwrap_or((0.0, Vec::new()))
        };
        let w = weighted_l2(entries);
        let grad = entries
            .iter()
            .zip(grad.iter().chain(std::iter::repeat(&0.0)))
            .map(|(&(n, a), g)| {
                let extra = if w > 0.0 {
                    2f64.powi(-4 * n.min(1 << 20) as i32) * a / w
                } else {
                    0.0
                };
                g + extra
            })
            .collect();
        Some((sup + w, grad))
    }

    fn unit_vector_bound(&self) -> f64 {
        round_up(self.base.unit_vector_bound() + 0.25)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norm::{eval, Lp, Sup};
    use crate::vector::{apply_signs, SignPattern};

    struct Skewed;

    // not unconditional: |a_1 + a_2| + |a_1|
    impl Norm for Skewed {
        fn name(&self) -> String {
            "skewed".into()
        }
        fn flags(&self) -> NormFlags {
            NormFlags {
                unconditional: false,
                symmetric: false,
            }
        }
        fn evaluate(&self, v: &FiniteVector, _: &EvalOptions) -> Result<Interval> {
            Ok(Interval::point(
                (v.get(1) + v.get(2)).abs() + v.get(1).abs() + v.sup_norm(),
            ))
        }
        fn unit_vector_bound(&self) -> f64 {
            3.0
        }
    }

    #[test]
    fn spot_values() {
        let n = strictly_convex_unconditional_base(Lp::new(2.0).unwrap());
        assert_eq!(eval(&n, &FiniteVector::unit(1)).unwrap(), 1.25);
        assert_eq!(eval(&n, &FiniteVector::zero()).unwrap(), 0.0);
        let v = FiniteVector::from_dense(&[1.0, -2.0, 0.5]).unwrap();
        let flipped = apply_signs(&v, &SignPattern::new([2, 3]));
        assert_eq!(eval(&n, &v).unwrap(), eval(&n, &flipped).unwrap());
    }

    #[test]
    fn enumerates_signs_for_conditional_bases() {
        let n = strictly_convex_unconditional_base(Skewed);
        let v = FiniteVector::from_dense(&[1.0, -1.0]).unwrap();
        let w = FiniteVector::from_dense(&[1.0, 1.0]).unwrap();
        assert_eq!(eval(&n, &v).unwrap(), eval(&n, &w).unwrap());
        let big = FiniteVector::from_dense(&[1.0; 21]).unwrap();
        assert!(matches!(
            n.evaluate(&big, &EvalOptions::default()),
            Err(NormError::SignEnumerationTooLarge { .. })
        ));
        // unconditional bases skip the enumeration entirely
        let s = strictly_convex_unconditional_base(Sup);
        assert!(s.evaluate(&big, &EvalOptions::default()).is_ok());
    }
}
