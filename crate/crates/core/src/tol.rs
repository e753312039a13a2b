//! Floating-point comparison tolerances shared by evaluators and probes.

/// Relative tolerance for float comparisons.
pub const REL: f64 = 1e-9;

/// Absolute tolerance for float comparisons.
pub const ABS: f64 = 1e-12;

/// `a <= b` up to the shared tolerances.
pub fn le(a: f64, b: f64) -> bool {
    a <= b + ABS + REL * a.abs().max(b.abs())
}

/// `|a - b|` within the shared tolerances.
pub fn close(a: f64, b: f64) -> bool {
    le(a, b) && le(b, a)
}
