use crate::error::Result;
use crate::interval::{round_up, Interval};
use crate::norm::{Day, DisjointRule, Envelope, EvalOptions, Norm, NormFlags};
use crate::vector::FiniteVector;

/// `|||x||| = (‖x‖² + ‖x‖_Day²)^{1/2}`.
#[derive(Clone, Debug)]
pub struct DayAugmented<N> {
    pub base: N,
}

pub fn day_augment<N: Norm>(base: N) -> DayAugmented<N> {
    DayAugmented { base }
}

impl<N: Norm> Norm for DayAugmented<N> {
    fn name(&self) -> String {
        format!("dayAug({})", self.base.name())
    }

    fn flags(&self) -> NormFlags {
        self.base.flags()
    }

    fn evaluate(&self, v: &FiniteVector, opts: &EvalOptions) -> Result<Interval> {
        let base = self.base.evaluate(v, opts)?;
        Ok(base.hypot(Interval::point(Day::value(v))))
    }

    fn value_and_subgradient(&self, entries: &[(usize, f64)]) -> Option<(f64, Vec<f64>)> {
        let (b, gb) = self.base.value_and_subgradient(entries)?;
        let (d, gd) = Day.value_and_subgradient(entries)?;
        let value = b.hypot(d);
        if value == 0.0 {
            return Some((0.0, vec![0.0; entries.len()]));
        }
        let grad = gb
            .iter()
            .zip(&gd)
            .map(|(x, y)| (b * x + d * y) / value)
            .collect();
        Some((value, grad))
    }

    fn unit_vector_bound(&self) -> f64 {
        round_up(self.base.unit_vector_bound().hypot(0.5))
    }

    fn fundamental_upper(&self, len: f64) -> Option<f64> {
        let base = self.base.fundamental_upper(len)?;
        Some(round_up(base.hypot(Day.fundamental_upper(len)?)))
    }

    fn fundamental_envelope(&self) -> Option<Envelope> {
        let base = self.base.fundamental_envelope()?;
        let day = Day.fundamental_envelope()?;
        Some(Envelope {
            scale: round_up(base.scale + day.scale),
            ..base
        })
    }

    fn disjoint_rule(&self) -> DisjointRule {
        // Day's norm obeys the 2-rule on disjoint supports; so does the
        // base when its own rule is at least as strong
        match self.base.disjoint_rule() {
            DisjointRule::Max => DisjointRule::Power(2.0),
            DisjointRule::Power(p) if p >= 2.0 => DisjointRule::Power(2.0),
            _ => DisjointRule::Triangle,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norm::{eval, Lp};
    use crate::vector::{apply_permutation, FinitePermutation};

    #[test]
    fn spot_values() {
        let n = day_augment(Lp::new(2.0).unwrap());
        assert!((eval(&n, &FiniteVector::unit(1)).unwrap() - 1.25f64.sqrt()).abs() < 1e-15);
        assert_eq!(eval(&n, &FiniteVector::zero()).unwrap(), 0.0);
        let v = FiniteVector::from_dense(&[3.0, -1.0, 2.0]).unwrap();
        let sigma = FinitePermutation::from_pairs([(1, 3), (3, 2), (2, 1)]).unwrap();
        assert_eq!(
            eval(&n, &v).unwrap(),
            eval(&n, &apply_permutation(&v, &sigma)).unwrap()
        );
    }
}
