//! Sequence-space norms, renormings and certified enclosures.

pub mod combinators;
pub mod error;
pub mod expr;
pub mod interval;
pub mod norm;
pub mod probes;
pub mod tol;
pub mod vector;

pub use error::{NormError, Result};
pub use expr::{parse_space, ParseError, SpaceExpression};
pub use interval::Interval;
pub use norm::{Norm, NormDescriptor};
pub use vector::{FiniteVector, TailedVector};
