//! The interpolation norm
//!
//! ```text
//! ‖x‖_m = inf { (‖y‖_E² + ‖z‖_F²)^{1/2} : x = y/m + m·z }.
//! ```
//!
//! For 1-unconditional `E` and `F` an optimal split never has opposite signs
//! at a coordinate, so it suffices to search `y_i = m·α_i·|x_i|`,
//! `z_i = (1 − α_i)·|x_i|/m` over `α ∈ [0, 1]^s`. The objective is convex in
//! `α`.
//!
//! When one side is the sup norm the search collapses to one variable: with
//! `E = sup` and level `λ = ‖y‖_∞` the best `y` is `min(m|x_i|, λ)`, and with
//! `F = sup` the best `z` is `min(|x_i|, μ)/m`. Those cases use a golden
//! section search. Everything else starts with a spectral projected gradient
//! run whose box-linear lower bound often certifies the minimum on its own.
//! When it does not, a deep-cut ellipsoid method seeded with that upper bound
//! runs until its lower bound agrees to a relative `1e-11`.

use super::point_value;
use crate::error::{NormError, Result};
use crate::interval::{round_up, Interval};
use crate::norm::{require, Envelope, EvalOptions, Norm, NormFlags};
use crate::vector::{decreasing_rearrangement, FiniteVector};

type Entries = Vec<(usize, f64)>;

/// Supports above this size are rejected by the general solver.
pub const MAX_GENERAL_SUPPORT: usize = 48;

const GAP: f64 = 1e-11;

#[derive(Clone, Debug)]
pub struct Davis<E, F> {
    pub e: E,
    pub f: F,
    pub m: f64,
}

/// `‖x‖_m` for 1-unconditional `E`, `F`.
pub fn davis_interpolation(
    e: &dyn Norm,
    f: &dyn Norm,
    m: f64,
    x: &FiniteVector,
    opts: &EvalOptions,
) -> Result<f64> {
    if !(m > 0.0 && m.is_finite()) {
        return Err(NormError::InvalidParameter(format!(
            "davis weight must be positive, got {m}"
        )));
    }
    require(e, true, false)?;
    require(f, true, false)?;
    if x.is_zero() {
        return Ok(0.0);
    }
    // the value only depends on |x|, or on its rearrangement when both
    // sides are symmetric
    let a: Vec<(usize, f64)> = if e.flags().symmetric && f.flags().symmetric {
        decreasing_rearrangement(x)
            .values()
            .iter()
            .enumerate()
            .map(|(k, &v)| (k + 1, v))
            .collect()
    } else {
        x.abs().entries().to_vec()
    };
    let problem = Problem { e, f, m, a, opts };
    if e.name() == "sup" {
        problem.sup_left()
    } else if f.name() == "sup" {
        problem.sup_right()
    } else {
        problem.general()
    }
}

struct Problem<'a> {
    e: &'a dyn Norm,
    f: &'a dyn Norm,
    m: f64,
    a: Vec<(usize, f64)>,
    opts: &'a EvalOptions,
}

fn vector(entries: impl IntoIterator<Item = (usize, f64)>) -> FiniteVector {
    FiniteVector::from_sorted_entries(entries)
}

/// Minimum of a convex function on `[0, hi]`, endpoints included.
fn golden_section(hi: f64, g: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut best = g(0.0)?.min(g(hi)?);
    let (mut lo, mut up) = (0.0, hi);
    let mut c = up - ratio * (up - lo);
    let mut d = lo + ratio * (up - lo);
    let (mut fc, mut fd) = (g(c)?, g(d)?);
    best = best.min(fc).min(fd);
    for _ in 0..400 {
        if up - lo <= 1e-15 * hi {
            break;
        }
        if fc <= fd {
            up = d;
            d = c;
            fd = fc;
            c = up - ratio * (up - lo);
            fc = g(c)?;
            best = best.min(fc);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + ratio * (up - lo);
            fd = g(d)?;
            best = best.min(fd);
        }
    }
    Ok(best)
}

impl Problem<'_> {
    fn top(&self) -> f64 {
        self.a.iter().map(|&(_, v)| v).fold(0.0, f64::max)
    }

    fn sup_left(&self) -> Result<f64> {
        let m = self.m;
        golden_section(m * self.top(), |level| {
            let z = vector(
                self.a
                    .iter()
                    .map(|&(i, v)| (i, (v - level / m).max(0.0) / m)),
            );
            Ok(level.hypot(point_value(self.f, &z, self.opts)?))
        })
    }

    fn sup_right(&self) -> Result<f64> {
        let m = self.m;
        golden_section(self.top(), |level| {
            let y = vector(self.a.iter().map(|&(i, v)| (i, m * (v - level).max(0.0))));
            Ok(point_value(self.e, &y, self.opts)?.hypot(level / m))
        })
    }

    fn split(&self, alpha: &[f64]) -> (Entries, Entries) {
        let m = self.m;
        let y = self
            .a
            .iter()
            .zip(alpha)
            .map(|(&(i, v), &t)| (i, m * t * v))
            .collect();
        let z = self
            .a
            .iter()
            .zip(alpha)
            .map(|(&(i, v), &t)| (i, (1.0 - t) * v / m))
            .collect();
        (y, z)
    }

    fn value(&self, alpha: &[f64]) -> Result<f64> {
        let (y, z) = self.split(alpha);
        let ey = point_value(self.e, &vector(y), self.opts)?;
        let fz = point_value(self.f, &vector(z), self.opts)?;
        Ok(ey.hypot(fz))
    }

    fn value_and_gradient(&self, alpha: &[f64]) -> Result<(f64, Vec<f64>)> {
        let unsupported = |n: &dyn Norm| {
            NormError::Unsupported(format!("{} has no subgradient oracle", n.name()))
        };
        let (y, z) = self.split(alpha);
        let (ey, ge) = self
            .e
            .value_and_subgradient(&y)
            .ok_or_else(|| unsupported(self.e))?;
        let (fz, gf) = self
            .f
            .value_and_subgradient(&z)
            .ok_or_else(|| unsupported(self.f))?;
        let value = ey.hypot(fz);
        if value == 0.0 {
            return Ok((0.0, vec![0.0; alpha.len()]));
        }
        let m = self.m;
        let grad = self
            .a
            .iter()
            .zip(ge.iter().zip(&gf))
            .map(|(&(_, v), (de, df))| (ey * de * m * v - fz * df * v / m) / value)
            .collect();
        Ok((value, grad))
    }

    fn general(&self) -> Result<f64> {
        let s = self.a.len();
        if s == 1 {
            return golden_section(1.0, |t| self.value(&[t]));
        }
        if s > MAX_GENERAL_SUPPORT {
            return Err(NormError::Unsupported(format!(
                "davis({}, {}) on a support of {s} points (limit {MAX_GENERAL_SUPPORT})",
                self.e.name(),
                self.f.name()
            )));
        }
        let (upper, certified) = self.projected_gradient()?;
        if certified {
            return Ok(upper);
        }
        self.ellipsoid(s, upper)
    }

    /// Value and gradient in the scaled variables `u = α·|x|`.
    fn scaled(&self, u: &[f64]) -> Result<(f64, Vec<f64>)> {
        let alpha: Vec<f64> = u
            .iter()
            .zip(&self.a)
            .map(|(u, &(_, v))| (u / v).clamp(0.0, 1.0))
            .collect();
        let (value, g) = self.value_and_gradient(&alpha)?;
        Ok((
            value,
            g.iter().zip(&self.a).map(|(g, &(_, v))| g / v).collect(),
        ))
    }

    /// Spectral projected gradient over `u ∈ [0, |x|]` with a nonmonotone
    /// line search. Returns the best value and whether the linear lower
    /// bound over the box has closed the gap.
    fn projected_gradient(&self) -> Result<(f64, bool)> {
        const ITERATIONS: usize = 300;
        const MEMORY: usize = 10;
        let top: Vec<f64> = self.a.iter().map(|&(_, v)| v).collect();
        let project =
            |u: &[f64]| -> Vec<f64> { u.iter().zip(&top).map(|(u, t)| u.clamp(0.0, *t)).collect() };
        let mut u: Vec<f64> = top.iter().map(|t| t / 2.0).collect();
        let (mut f, mut g) = self.scaled(&u)?;
        let mut best = f;
        let mut history = vec![f];
        let mut lambda = {
            let step: Vec<f64> = u.iter().zip(&g).map(|(u, g)| u - g).collect();
            let moved = project(&step)
                .iter()
                .zip(&u)
                .map(|(p, u)| (p - u).abs())
                .fold(0.0, f64::max);
            if moved > 0.0 {
                1.0 / moved
            } else {
                1.0
            }
        };
        for _ in 0..ITERATIONS {
            let drop: f64 = g
                .iter()
                .zip(u.iter().zip(&top))
                .map(|(g, (u, t))| (g * -u).min(g * (t - u)))
                .sum();
            let lower = f + drop * (1.0 + 1e-9);
            if best - lower <= GAP * best {
                return Ok((best, true));
            }
            let trial: Vec<f64> = u.iter().zip(&g).map(|(u, g)| u - lambda * g).collect();
            let d: Vec<f64> = project(&trial).iter().zip(&u).map(|(p, u)| p - u).collect();
            let slope: f64 = g.iter().zip(&d).map(|(g, d)| g * d).sum();
            if slope.is_nan() || slope >= 0.0 {
                break;
            }
            let reference = history.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let mut t = 1.0;
            let mut accepted = None;
            for _ in 0..40 {
                let next = project(&u.iter().zip(&d).map(|(u, d)| u + t * d).collect::<Vec<_>>());
                let (fn_, gn) = self.scaled(&next)?;
                if fn_ <= reference + 1e-4 * t * slope {
                    accepted = Some((next, fn_, gn));
                    break;
                }
                t *= 0.5;
            }
            let Some((next, fn_, gn)) = accepted else {
                break;
            };
            let sv: Vec<f64> = next.iter().zip(&u).map(|(a, b)| a - b).collect();
            let ss: f64 = sv.iter().map(|x| x * x).sum();
            let sy: f64 = sv
                .iter()
                .zip(gn.iter().zip(&g))
                .map(|(s, (a, b))| s * (a - b))
                .sum();
            lambda = if sy > 0.0 {
                (ss / sy).clamp(1e-30, 1e30)
            } else {
                lambda * 10.0
            };
            u = next;
            f = fn_;
            g = gn;
            best = best.min(f);
            history.push(f);
            if history.len() > MEMORY {
                history.remove(0);
            }
        }
        Ok((best, false))
    }

    fn ellipsoid(&self, s: usize, known: f64) -> Result<f64> {
        let n = s as f64;
        let mut upper = self
            .value(&vec![0.0; s])?
            .min(self.value(&vec![1.0; s])?)
            .min(known);
        let mut lower = 0.0f64;
        let mut centre = vec![0.5; s];
        // E = {c + B u : |u| <= 1}, initially the ball around the box
        let mut b = vec![0.0; s * s];
        let radius = n.sqrt() / 2.0 * (1.0 + 1e-9);
        for i in 0..s {
            b[i * s + i] = radius;
        }
        let cap = 400 * s * s + 4000;
        for _ in 0..cap {
            let outside = centre.iter().position(|&t| !(0.0..=1.0).contains(&t));
            // a cut g·(α − c) <= −slack
            let (cut, slack) = match outside {
                Some(i) => {
                    let mut g = vec![0.0; s];
                    let slack = if centre[i] < 0.0 {
                        g[i] = -1.0;
                        -centre[i]
                    } else {
                        g[i] = 1.0;
                        centre[i] - 1.0
                    };
                    (g, slack)
                }
                None => {
                    let (value, g) = self.value_and_gradient(&centre)?;
                    upper = upper.min(value);
                    let reach = transpose_times(&b, &g, s)
                        .iter()
                        .map(|x| x * x)
                        .sum::<f64>()
                        .sqrt();
                    // f(α) >= f(c) + g·(α − c) over the ellipsoid and over the box
                    let box_drop: f64 = g
                        .iter()
                        .zip(&centre)
                        .map(|(gi, ci)| (gi * -ci).min(gi * (1.0 - ci)))
                        .sum();
                    lower = lower
                        .max(value - reach * (1.0 + 1e-9))
                        .max(value + box_drop * (1.0 + 1e-9));
                    if reach == 0.0 {
                        return Ok(upper);
                    }
                    // points worth keeping have f <= upper
                    (g, (value - upper).max(0.0))
                }
            };
            if upper - lower <= GAP * upper {
                return Ok(upper);
            }
            let p = transpose_times(&b, &cut, s);
            let norm = p.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm == 0.0 || !norm.is_finite() {
                break;
            }
            // keep a sliver of the cut so rounding never discards the optimum
            let depth = (slack / norm * (1.0 - 1e-9)).min(0.5);
            let unit: Vec<f64> = p.iter().map(|x| x / norm).collect();
            let bu: Vec<f64> = (0..s)
                .map(|i| (0..s).map(|j| b[i * s + j] * unit[j]).sum())
                .collect();
            let step = (1.0 + n * depth) / (n + 1.0);
            let scale = (n * n * (1.0 - depth * depth) / (n * n - 1.0)).sqrt();
            let sigma = 2.0 * (1.0 + n * depth) / ((n + 1.0) * (1.0 + depth));
            let along = scale * (1.0 - sigma).sqrt();
            for i in 0..s {
                centre[i] -= step * bu[i];
            }
            for i in 0..s {
                for j in 0..s {
                    b[i * s + j] = scale * b[i * s + j] + (along - scale) * bu[i] * unit[j];
                }
            }
        }
        if upper - lower <= GAP * upper {
            return Ok(upper);
        }
        Err(NormError::NonConvergence { lower, upper })
    }
}

fn transpose_times(b: &[f64], g: &[f64], s: usize) -> Vec<f64> {
    (0..s)
        .map(|j| (0..s).map(|i| b[i * s + j] * g[i]).sum())
        .collect()
}

/// Closed-form bound for `‖Σ_{i≤L} e_i‖_m` (or `‖e_n‖_m`) from `a = m·‖·‖_E`
/// and `b = ‖·‖_F/m`: the distance from the origin to the segment of splits.
fn split_bound(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        return 0.0;
    }
    round_up(a * b / a.hypot(b))
}

impl<E: Norm, F: Norm> Norm for Davis<E, F> {
    fn name(&self) -> String {
        format!("davis({}, {}, {})", self.e.name(), self.f.name(), self.m)
    }

    fn flags(&self) -> NormFlags {
        let (e, f) = (self.e.flags(), self.f.flags());
        NormFlags {
            unconditional: e.unconditional && f.unconditional,
            symmetric: e.symmetric && f.symmetric,
        }
    }

    fn evaluate(&self, v: &FiniteVector, opts: &EvalOptions) -> Result<Interval> {
        davis_interpolation(&self.e, &self.f, self.m, v, opts).map(Interval::point)
    }

    fn unit_vector_bound(&self) -> f64 {
        split_bound(
            self.m * self.e.unit_vector_bound(),
            self.f.unit_vector_bound() / self.m,
        )
    }

    fn fundamental_upper(&self, len: f64) -> Option<f64> {
        let a = self.m * self.e.fundamental_upper(len)?;
        let b = self.f.fundamental_upper(len)? / self.m;
        Some(split_bound(round_up(a), round_up(b)))
    }

    fn fundamental_envelope(&self) -> Option<Envelope> {
        // the bound is at most min(a, b)
        let e = self.e.fundamental_envelope();
        let f = self.f.fundamental_envelope();
        let scaled = |env: Envelope, factor: f64| Envelope {
            scale: round_up(env.scale * factor),
            ..env
        };
        match (e, f) {
            (Some(e), Some(f)) => {
                if (e.power, e.log_power) <= (f.power, f.log_power) {
                    Some(scaled(e, self.m))
                } else {
                    Some(scaled(f, 1.0 / self.m))
                }
            }
            (Some(e), None) => Some(scaled(e, self.m)),
            (None, Some(f)) => Some(scaled(f, 1.0 / self.m)),
            (None, None) => None,
        }
    }
}
