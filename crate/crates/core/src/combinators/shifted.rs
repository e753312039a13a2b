use crate::error::Result;
use crate::interval::Interval;
use crate::norm::{EvalOptions, Norm};
use crate::vector::FiniteVector;

use super::point_value;

/// `‖y‖_x = ‖ ‖y‖x + y ‖ + ‖ ‖y‖x − y ‖`, which lies between `2‖y‖` and
/// `(2 + 2‖x‖)‖y‖`.
pub fn shifted_norm(
    base: &dyn Norm,
    x: &FiniteVector,
    y: &FiniteVector,
    opts: &EvalOptions,
) -> Result<Interval> {
    let ny = point_value(base, y, opts)?;
    let anchor = x.scale(ny);
    let plus = base.evaluate(&anchor.add(y), opts)?;
    let minus = base.evaluate(&anchor.sub(y), opts)?;
    Ok(plus + minus)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norm::Lp;

    #[test]
    fn spot_values() {
        let l2 = Lp::new(2.0).unwrap();
        let o = EvalOptions::default();
        let y = FiniteVector::from_dense(&[0.3, -1.7, 2.0]).unwrap();
        let zero = shifted_norm(&l2, &FiniteVector::zero(), &y, &o).unwrap();
        assert_eq!(
            zero.exact(),
            Some(2.0 * crate::norm::eval(&l2, &y).unwrap())
        );
        let e1 = FiniteVector::unit(1);
        assert_eq!(shifted_norm(&l2, &e1, &e1, &o).unwrap().exact(), Some(2.0));
        let e2 = FiniteVector::unit(2);
        let v = shifted_norm(&l2, &e1, &e2, &o).unwrap().exact().unwrap();
        assert!((v - 2.0 * 2f64.sqrt()).abs() < 1e-15);
    }
}
