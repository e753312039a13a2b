//! `‖x‖_Y = ‖Σ_n ‖x‖_{m_n} f_n‖_X` with `m_n = 2ⁿ`.
//!
//! Levels past `K` are bounded through `‖x‖_{m_n} <= ‖x‖_F / m_n` and
//! `‖Σ_{n>K} t_n f_n‖_X <= sup_n ‖f_n‖_X · Σ_{n>K} t_n`.

use super::davis_interpolation;
use crate::error::Result;
use crate::interval::{round_up, Interval};
use crate::norm::{require, Envelope, EvalOptions, Norm, NormFlags};
use crate::vector::FiniteVector;

#[derive(Clone, Debug)]
pub struct YSpace<E, F, X> {
    pub e: E,
    pub f: F,
    pub x: X,
}

/// Enclosure of `‖v‖_Y` summing the first `terms` levels explicitly.
pub fn y_space_norm(
    e: &dyn Norm,
    f: &dyn Norm,
    x: &dyn Norm,
    v: &FiniteVector,
    terms: usize,
    opts: &EvalOptions,
) -> Result<Interval> {
    require(x, true, false)?;
    if v.is_zero() {
        return Ok(Interval::ZERO);
    }
    let terms = terms.min(1000);
    let mut levels = Vec::with_capacity(terms);
    for n in 1..=terms {
        levels.push((n, davis_interpolation(e, f, 2f64.powi(n as i32), v, opts)?));
    }
    let head = x.evaluate(&FiniteVector::from_sparse(levels)?, opts)?;
    let fv = f.evaluate(v, opts)?.hi;
    let tail = round_up(fv * x.unit_vector_bound() * 2f64.powi(-(terms as i32)) * (1.0 + 1e-12));
    Ok(Interval::new(head.lo, round_up(head.hi + tail)))
}

impl<E: Norm, F: Norm, X: Norm> Norm for YSpace<E, F, X> {
    fn name(&self) -> String {
        format!(
            "Y({}, {}, {}, pow2)",
            self.e.name(),
            self.f.name(),
            self.x.name()
        )
    }

    fn flags(&self) -> NormFlags {
        let (e, f, x) = (self.e.flags(), self.f.flags(), self.x.flags());
        NormFlags {
            unconditional: e.unconditional && f.unconditional && x.unconditional,
            symmetric: e.symmetric && f.symmetric,
        }
    }

    fn evaluate(&self, v: &FiniteVector, opts: &EvalOptions) -> Result<Interval> {
        y_space_norm(&self.e, &self.f, &self.x, v, opts.y_terms, opts)
    }

    // Σ_n min(2ⁿa, b/2ⁿ) <= 4·√(ab) bounds every level sum below
    fn unit_vector_bound(&self) -> f64 {
        round_up(
            4.0 * self.x.unit_vector_bound()
                * (self.e.unit_vector_bound() * self.f.unit_vector_bound()).sqrt(),
        )
    }

    fn fundamental_upper(&self, len: f64) -> Option<f64> {
        let (a, b) = (
            self.e.fundamental_upper(len)?,
            self.f.fundamental_upper(len)?,
        );
        Some(round_up(
            4.0 * self.x.unit_vector_bound() * round_up((a * b).sqrt()),
        ))
    }

    fn fundamental_envelope(&self) -> Option<Envelope> {
        let (e, f) = (
            self.e.fundamental_envelope()?,
            self.f.fundamental_envelope()?,
        );
        Some(Envelope {
            scale: round_up(
                4.0 * self.x.unit_vector_bound() * round_up((e.scale * f.scale).sqrt()),
            ),
            power: (e.power + f.power) / 2.0,
            log_power: (e.log_power + f.log_power) / 2.0,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norm::{tsirelson, Sup, Tsirelson, L1};

    #[test]
    fn unit_vector_against_closed_forms() {
        let o = EvalOptions::default();
        let e1 = FiniteVector::unit(1);
        let got = y_space_norm(&Sup, &L1, &Tsirelson, &e1, 8, &o).unwrap();
        let levels: Vec<(usize, f64)> = (1..=8)
            .map(|n| {
                let m = 2f64.powi(n);
                (n as usize, m / (1.0 + m.powi(4)).sqrt())
            })
            .collect();
        let expected = tsirelson::norm(&levels);
        assert!((got.lo - expected).abs() < 1e-12, "{got} vs {expected}");
        assert!(got.hi >= got.lo && got.hi - got.lo <= 2f64.powi(-8) * 1.01);
    }

    #[test]
    fn refinement_nests() {
        let o = EvalOptions::default();
        let v = FiniteVector::from_dense(&[1.0, -0.5, 0.25]).unwrap();
        let coarse = y_space_norm(&Sup, &L1, &Tsirelson, &v, 6, &o).unwrap();
        let fine = y_space_norm(&Sup, &L1, &Tsirelson, &v, 12, &o).unwrap();
        assert!(
            fine.lo >= coarse.lo - 1e-15 && fine.hi <= coarse.hi + 1e-15,
            "{fine} vs {coarse}"
        );
        assert_eq!(
            y_space_norm(&Sup, &L1, &Tsirelson, &FiniteVector::zero(), 6, &o).unwrap(),
            Interval::ZERO
        );
    }
}
