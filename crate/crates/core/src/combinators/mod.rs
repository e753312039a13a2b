//! Renorming constructions built on top of other norms.

mod davis;
mod day_aug;
mod os2r;
mod sc_base;
mod shifted;
mod sym2r;
mod yspace;

pub use davis::{davis_interpolation, Davis};
pub use day_aug::{day_augment, DayAugmented};
pub use os2r::{os_unconditional_2r, EquivClassEnumeration, OsRenorm};
pub use sc_base::{strictly_convex_unconditional_base, ScBase, SIGN_ENUMERATION_CAP};
pub use shifted::shifted_norm;
pub use sym2r::{symmetric_2r_norm, Sym2R};
pub use yspace::{y_space_norm, YSpace};

use crate::error::{NormError, Result};
use crate::norm::{EvalOptions, Norm};
use crate::vector::FiniteVector;

/// Value of a child norm that must evaluate exactly.
pub(crate) fn point_value(norm: &dyn Norm, v: &FiniteVector, opts: &EvalOptions) -> Result<f64> {
    let value = norm.evaluate(v, opts)?;
    value.exact().ok_or_else(|| {
        NormError::Unsupported(format!(
            "{} returns an enclosure here, an exact value is needed",
            norm.name()
        ))
    })
}
