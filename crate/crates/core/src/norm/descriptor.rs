use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Day, Lorentz, Sup, Tsirelson, L1};
use super::{DisjointRule, Envelope, EvalOptions, Lp, Norm, NormFlags};
use crate::combinators::{Davis, DayAugmented, ScBase, Sym2R, YSpace, SIGN_ENUMERATION_CAP};
use crate::error::{NormError, Result};
use crate::interval::Interval;
use crate::vector::FiniteVector;

/// Weight sequence `(m_n)` of a `Y` space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum MRule {
    /// `m_n = 2ⁿ`.
    Pow2,
}

impl fmt::Display for MRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MRule::Pow2 => f.write_str("pow2"),
        }
    }
}

/// A norm assembled from base norms and renorming combinators.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum NormDescriptor {
    Lp {
        p: f64,
    },
    Sup,
    L1,
    Day,
    Lorentz,
    Tsirelson,
    DayAug(Box<NormDescriptor>),
    ScBase(Box<NormDescriptor>),
    Davis {
        e: Box<NormDescriptor>,
        f: Box<NormDescriptor>,
        m: f64,
    },
    #[serde(rename = "Y")]
    Y {
        e: Box<NormDescriptor>,
        f: Box<NormDescriptor>,
        x: Box<NormDescriptor>,
        rule: MRule,
    },
    #[serde(rename = "sym2R")]
    Sym2R(Box<NormDescriptor>),
}

impl NormDescriptor {
    pub fn lp(p: f64) -> Result<Self> {
        Lp::new(p)?;
        Ok(NormDescriptor::Lp { p })
    }

    pub fn day_aug(base: NormDescriptor) -> Self {
        NormDescriptor::DayAug(Box::new(base))
    }

    pub fn sc_base(base: NormDescriptor) -> Self {
        NormDescriptor::ScBase(Box::new(base))
    }

    pub fn davis(e: NormDescriptor, f: NormDescriptor, m: f64) -> Result<Self> {
        if !(m > 0.0 && m.is_finite()) {
            return Err(NormError::InvalidParameter(format!(
                "davis weight must be positive, got {m}"
            )));
        }
        Ok(NormDescriptor::Davis {
            e: Box::new(e),
            f: Box::new(f),
            m,
        })
    }

    pub fn y(e: NormDescriptor, f: NormDescriptor, x: NormDescriptor) -> Self {
        NormDescriptor::Y {
            e: Box::new(e),
            f: Box::new(f),
            x: Box::new(x),
            rule: MRule::Pow2,
        }
    }

    pub fn sym2r(base: NormDescriptor) -> Self {
        NormDescriptor::Sym2R(Box::new(base))
    }

    /// Checks parameter ranges throughout the tree, e.g. after deserializing.
    pub fn validate(&self) -> Result<()> {
        match self {
            NormDescriptor::Lp { p } => Lp::new(*p).map(|_| ()),
            NormDescriptor::Sup
            | NormDescriptor::L1
            | NormDescriptor::Day
            | NormDescriptor::Lorentz
            | NormDescriptor::Tsirelson => Ok(()),
            NormDescriptor::DayAug(b) | NormDescriptor::ScBase(b) | NormDescriptor::Sym2R(b) => {
                b.validate()
            }
            NormDescriptor::Davis { e, f, m } => {
                e.validate()?;
                f.validate()?;
                NormDescriptor::davis(NormDescriptor::Sup, NormDescriptor::Sup, *m).map(|_| ())
            }
            NormDescriptor::Y { e, f, x, .. } => {
                e.validate()?;
                f.validate()?;
                x.validate()
            }
        }
    }

    /// Runs `op` on the concrete evaluator this node stands for.
    fn with<T>(&self, op: impl FnOnce(&dyn Norm) -> T) -> T {
        match self {
            NormDescriptor::Lp { p } => match Lp::new(*p) {
                Ok(lp) => op(&lp),
                Err(_) => op(&Invalid(*p)),
            },
            NormDescriptor::Sup => op(&Sup),
            NormDescriptor::L1 => op(&L1),
            NormDescriptor::Day => op(&Day),
            NormDescriptor::Lorentz => op(&Lorentz),
            NormDescriptor::Tsirelson => op(&Tsirelson),
            NormDescriptor::DayAug(b) => op(&DayAugmented { base: &**b }),
            NormDescriptor::ScBase(b) => op(&ScBase {
                base: &**b,
                cap: SIGN_ENUMERATION_CAP,
            }),
            NormDescriptor::Davis { e, f, m } => op(&Davis {
                e: &**e,
                f: &**f,
                m: *m,
            }),
            NormDescriptor::Y { e, f, x, .. } => op(&YSpace {
                e: &**e,
                f: &**f,
                x: &**x,
            }),
            NormDescriptor::Sym2R(b) => op(&Sym2R { base: &**b }),
        }
    }
}

/// Stand-in for an out-of-range `lp` built without validation.
struct Invalid(f64);

impl Norm for Invalid {
    fn name(&self) -> String {
        format!("lp({})", self.0)
    }
    fn flags(&self) -> NormFlags {
        NormFlags::SYMMETRIC
    }
    fn evaluate(&self, _: &FiniteVector, _: &EvalOptions) -> Result<Interval> {
        Lp::new(self.0).map(|_| Interval::ZERO)
    }
    fn unit_vector_bound(&self) -> f64 {
        f64::INFINITY
    }
}

impl Norm for NormDescriptor {
    fn name(&self) -> String {
        self.to_string()
    }
    fn flags(&self) -> NormFlags {
        self.with(|n| n.flags())
    }
    fn evaluate(&self, v: &FiniteVector, opts: &EvalOptions) -> Result<Interval> {
        self.with(|n| n.evaluate(v, opts))
    }
    fn value_and_subgradient(&self, entries: &[(usize, f64)]) -> Option<(f64, Vec<f64>)> {
        self.with(|n| n.value_and_subgradient(entries))
    }
    fn unit_vector_bound(&self) -> f64 {
        self.with(|n| n.unit_vector_bound())
    }
    fn fundamental_upper(&self, len: f64) -> Option<f64> {
        self.with(|n| n.fundamental_upper(len))
    }
    fn fundamental_envelope(&self) -> Option<Envelope> {
        self.with(|n| n.fundamental_envelope())
    }
    fn disjoint_rule(&self) -> DisjointRule {
        self.with(|n| n.disjoint_rule())
    }
}

impl fmt::Display for NormDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormDescriptor::Lp { p } => write!(f, "lp({p})"),
            NormDescriptor::Sup => f.write_str("sup"),
            NormDescriptor::L1 => f.write_str("l1"),
            NormDescriptor::Day => f.write_str("day"),
            NormDescriptor::Lorentz => f.write_str("lorentz"),
            NormDescriptor::Tsirelson => f.write_str("tsirelson"),
            NormDescriptor::DayAug(b) => write!(f, "dayAug({b})"),
            NormDescriptor::ScBase(b) => write!(f, "scBase({b})"),
            NormDescriptor::Davis { e, f: g, m } => write!(f, "davis({e}, {g}, {m})"),
            NormDescriptor::Y { e, f: g, x, rule } => write!(f, "Y({e}, {g}, {x}, {rule})"),
            NormDescriptor::Sym2R(b) => write!(f, "sym2R({b})"),
        }
    }
}
