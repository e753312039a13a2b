//! Norm evaluators and the descriptor tree that composes them.

mod base;
mod descriptor;
mod symmetry;
mod tailed;
pub mod tsirelson;

pub use base::{Day, Lorentz, Lp, Sup, Tsirelson, L1};
pub use descriptor::{MRule, NormDescriptor};
pub use symmetry::{estimate_symmetry_constant, SamplingPlan};
pub(crate) use tailed::harmonic_tail_bound_at;
pub use tailed::{eval_tailed, fundamental_function, harmonic_tail_bound};

use serde::{Deserialize, Serialize};

use crate::error::{NormError, Result};
use crate::interval::Interval;
use crate::vector::FiniteVector;

/// Structural properties a norm advertises about the unit vector basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct NormFlags {
    pub unconditional: bool,
    pub symmetric: bool,
}

impl NormFlags {
    pub const SYMMETRIC: NormFlags = NormFlags {
        unconditional: true,
        symmetric: true,
    };
    pub const UNCONDITIONAL: NormFlags = NormFlags {
        unconditional: true,
        symmetric: false,
    };

    /// `φ(L) = ‖Σ_{i≤L} e_i‖` is only meaningful when it ignores position.
    pub fn has_fundamental_function(&self) -> bool {
        self.symmetric
    }
}

/// Truncation parameters for enclosure-valued norms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalOptions {
    /// Index `M` at which harmonic tails are cut and bounded analytically.
    pub truncate: usize,
    /// Number `K` of interpolation levels summed explicitly in `Y` norms.
    pub y_terms: usize,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self {
            truncate: 1024,
            y_terms: 24,
        }
    }
}

/// `φ(L) <= scale · L^power · (1 + log₂ L)^log_power` for every `L >= 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Envelope {
    pub scale: f64,
    pub power: f64,
    pub log_power: f64,
}

impl Envelope {
    pub fn at(&self, len: f64) -> f64 {
        self.scale * len.powf(self.power) * (1.0 + len.log2()).powf(self.log_power)
    }
}

/// How the norms of two disjointly supported vectors bound the norm of their sum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DisjointRule {
    /// `‖u + w‖ <= ‖u‖ + ‖w‖`.
    Triangle,
    /// `‖u + w‖^p <= ‖u‖^p + ‖w‖^p`.
    Power(f64),
    /// `‖u + w‖ <= max(‖u‖, ‖w‖)`.
    Max,
}

impl DisjointRule {
    pub fn combine(self, a: f64, b: f64) -> f64 {
        match self {
            DisjointRule::Triangle => a + b,
            DisjointRule::Power(p) => (a.powf(p) + b.powf(p)).powf(1.0 / p),
            DisjointRule::Max => a.max(b),
        }
    }
}

/// A norm on finitely supported sequences.
///
/// Exact norms return point intervals; norms defined through infinite sums
/// return certified enclosures governed by [`EvalOptions`].
pub trait Norm: Send + Sync {
    fn name(&self) -> String;

    fn flags(&self) -> NormFlags;

    fn evaluate(&self, v: &FiniteVector, opts: &EvalOptions) -> Result<Interval>;

    /// Value and one subgradient at `entries`, which are index-sorted and may
    /// hold zeros. `None` when the norm has no subgradient oracle.
    fn value_and_subgradient(&self, _entries: &[(usize, f64)]) -> Option<(f64, Vec<f64>)> {
        None
    }

    /// An upper bound on `sup_n ‖e_n‖`.
    fn unit_vector_bound(&self) -> f64;

    /// A certified upper bound on `φ(len)`; symmetric norms only.
    fn fundamental_upper(&self, _len: f64) -> Option<f64> {
        None
    }

    /// A growth envelope dominating [`Norm::fundamental_upper`].
    fn fundamental_envelope(&self) -> Option<Envelope> {
        None
    }

    fn disjoint_rule(&self) -> DisjointRule {
        DisjointRule::Triangle
    }
}

impl<N: Norm + ?Sized> Norm for &N {
    fn name(&self) -> String {
        (**self).name()
    }
    fn flags(&self) -> NormFlags {
        (**self).flags()
    }
    fn evaluate(&self, v: &FiniteVector, opts: &EvalOptions) -> Result<Interval> {
        (**self).evaluate(v, opts)
    }
    fn value_and_subgradient(&self, entries: &[(usize, f64)]) -> Option<(f64, Vec<f64>)> {
        (**self).value_and_subgradient(entries)
    }
    fn unit_vector_bound(&self) -> f64 {
        (**self).unit_vector_bound()
    }
    fn fundamental_upper(&self, len: f64) -> Option<f64> {
        (**self).fundamental_upper(len)
    }
    fn fundamental_envelope(&self) -> Option<Envelope> {
        (**self).fundamental_envelope()
    }
    fn disjoint_rule(&self) -> DisjointRule {
        (**self).disjoint_rule()
    }
}

/// Evaluates a norm that has an exact value on `v`.
pub fn eval(norm: &dyn Norm, v: &FiniteVector) -> Result<f64> {
    let value = norm.evaluate(v, &EvalOptions::default())?;
    value.exact().ok_or(NormError::NotExact {
        lo: value.lo,
        hi: value.hi,
    })
}

pub(crate) fn require(norm: &dyn Norm, unconditional: bool, symmetric: bool) -> Result<()> {
    let flags = norm.flags();
    if unconditional && !flags.unconditional {
        return Err(NormError::MissingProperty {
            norm: norm.name(),
            property: "1-unconditional",
        });
    }
    if symmetric && !flags.symmetric {
        return Err(NormError::MissingProperty {
            norm: norm.name(),
            property: "1-symmetric",
        });
    }
    Ok(())
}
