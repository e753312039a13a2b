use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{EvalOptions, Norm};
use crate::error::Result;
use crate::vector::{apply_permutation, apply_signs, FinitePermutation, FiniteVector, SignPattern};

/// How many random inputs to draw and over which index range.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplingPlan {
    pub samples: usize,
    pub dim: usize,
    pub seed: u64,
}

impl Default for SamplingPlan {
    fn default() -> Self {
        Self {
            samples: 200,
            dim: 8,
            seed: 0,
        }
    }
}

fn ratio(
    norm: &dyn Norm,
    v: &FiniteVector,
    moved: &FiniteVector,
    opts: &EvalOptions,
) -> Result<f64> {
    let base = norm.evaluate(v, opts)?;
    let image = norm.evaluate(moved, opts)?;
    Ok(if base.hi > 0.0 {
        image.lo / base.hi
    } else {
        1.0
    })
}

/// Lower estimate of the symmetry constant `K`: the largest observed
/// `‖ε·σ·v‖ / ‖v‖` over random vectors, permutations and signs, plus the
/// transpositions `(1 n)` applied to unit vectors.
pub fn estimate_symmetry_constant(norm: &dyn Norm, plan: &SamplingPlan) -> Result<f64> {
    let opts = EvalOptions::default();
    let dim = plan.dim.max(2);
    let mut best = 1.0f64;
    for n in 2..=dim {
        let swap = FinitePermutation::transposition(1, n);
        let unit = FiniteVector::unit(n);
        best = best.max(ratio(norm, &unit, &apply_permutation(&unit, &swap), &opts)?);
        best = best.max(ratio(
            norm,
            &FiniteVector::unit(1),
            &FiniteVector::unit(n),
            &opts,
        )?);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
    let indices: Vec<usize> = (1..=dim).collect();
    for _ in 0..plan.samples {
        let values: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let v = FiniteVector::from_dense(&values)?;
        let mut images = indices.clone();
        images.shuffle(&mut rng);
        let sigma = FinitePermutation::from_images(&indices, &images)?;
        let signs = SignPattern::new(indices.iter().copied().filter(|_| rng.gen_bool(0.5)));
        let moved = apply_signs(&apply_permutation(&v, &sigma), &signs);
        best = best.max(ratio(norm, &v, &moved, &opts)?);
    }
    Ok(best)
}
