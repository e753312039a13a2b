//! The interpolation-norm optimizer against a grid search over splits.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use seqnorm::combinators::davis_interpolation;
use seqnorm::norm::{EvalOptions, Lp, Norm, Sup, L1};
use seqnorm::FiniteVector;

fn p_norm(p: f64, v: &[f64]) -> f64 {
    if p.is_infinite() {
        v.iter().fold(0.0f64, |m, a| m.max(a.abs()))
    } else {
        v.iter().map(|a| a.abs().powf(p)).sum::<f64>().powf(1.0 / p)
    }
}

fn library_norm(p: f64) -> Box<dyn Norm> {
    if p.is_infinite() {
        Box::new(Sup)
    } else if p == 1.0 {
        Box::new(L1)
    } else {
        Box::new(Lp::new(p).unwrap())
    }
}

fn objective(pe: f64, pf: f64, m: f64, a: &[f64], alpha: &[f64]) -> f64 {
    let y: Vec<f64> = a.iter().zip(alpha).map(|(x, t)| m * t * x).collect();
    let z: Vec<f64> = a
        .iter()
        .zip(alpha)
        .map(|(x, t)| (1.0 - t) * x / m)
        .collect();
    p_norm(pe, &y).hypot(p_norm(pf, &z))
}

/// Minimum over the lattice `lo + step·k`, `k = 0..=cells` per coordinate,
/// clipped to `[0, 1]`; returns the value and its argument.
fn lattice_minimum(
    pe: f64,
    pf: f64,
    m: f64,
    a: &[f64],
    lo: &[f64],
    step: f64,
    cells: usize,
) -> (f64, Vec<f64>) {
    let s = a.len();
    let mut best = (f64::INFINITY, vec![0.0; s]);
    let mut idx = vec![0usize; s];
    loop {
        let alpha: Vec<f64> = (0..s)
            .map(|i| (lo[i] + step * idx[i] as f64).clamp(0.0, 1.0))
            .collect();
        let v = objective(pe, pf, m, a, &alpha);
        if v < best.0 {
            best = (v, alpha);
        }
        let mut k = 0;
        while k < s && idx[k] == cells {
            idx[k] = 0;
            k += 1;
        }
        if k == s {
            return best;
        }
        idx[k] += 1;
    }
}

/// Minimum over `α ∈ {0, 1/64, ..., 1}^s`.
fn grid_minimum(pe: f64, pf: f64, m: f64, a: &[f64]) -> f64 {
    lattice_minimum(pe, pf, m, a, &vec![0.0; a.len()], 1.0 / 64.0, 64).0
}

/// Repeated zoom around the lattice minimizer, 16 cells either side.
fn refined_minimum(pe: f64, pf: f64, m: f64, a: &[f64]) -> f64 {
    let (mut best, mut at) = lattice_minimum(pe, pf, m, a, &vec![0.0; a.len()], 1.0 / 64.0, 64);
    let mut step = 1.0 / 64.0;
    for _ in 0..12 {
        let fine = step / 8.0;
        let lo: Vec<f64> = at.iter().map(|t| t - 16.0 * fine).collect();
        let (v, arg) = lattice_minimum(pe, pf, m, a, &lo, fine, 32);
        if v < best {
            best = v;
            at = arg;
        }
        step = fine;
    }
    best
}

struct Case {
    pe: f64,
    pf: f64,
    m: f64,
    a: Vec<f64>,
    value: f64,
}

fn cases(count: usize, max_support: usize) -> Vec<Case> {
    let exponents = [f64::INFINITY, 1.0, 1.5, 2.0, 3.0];
    let weights = [0.5, 1.0, 2.0, 4.0];
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let opts = EvalOptions::default();
    (0..count)
        .map(|_| {
            let pe = exponents[rng.gen_range(0..exponents.len())];
            let pf = exponents[rng.gen_range(0..exponents.len())];
            let m = weights[rng.gen_range(0..weights.len())];
            let s = rng.gen_range(1..=max_support);
            let a: Vec<f64> = (0..s).map(|_| rng.gen_range(0.05..=1.0)).collect();
            let x = FiniteVector::from_dense(&a).unwrap();
            let value =
                davis_interpolation(&*library_norm(pe), &*library_norm(pf), m, &x, &opts).unwrap();
            Case {
                pe,
                pf,
                m,
                a,
                value,
            }
        })
        .collect()
}

#[test]
fn optimizer_never_above_coarse_grid() {
    for (k, c) in cases(200, 3).iter().enumerate() {
        let grid = grid_minimum(c.pe, c.pf, c.m, &c.a);
        // every grid point is a feasible split
        assert!(
            c.value <= grid * (1.0 + 1e-9),
            "case {k}: optimizer {} above grid {grid}",
            c.value
        );
    }
}

#[test]
fn optimizer_matches_refined_search() {
    for (k, c) in cases(60, 3).iter().enumerate() {
        let refined = refined_minimum(c.pe, c.pf, c.m, &c.a);
        // the search only ever overestimates, and stalls slightly in the
        // diagonal valleys the sup norm creates
        assert!(
            c.value <= refined * (1.0 + 1e-9),
            "case {k}: optimizer {} above search {refined}",
            c.value
        );
        assert!(
            refined - c.value <= 1e-5 * refined,
            "case {k} (E=l{}, F=l{}, m={}, a={:?}): optimizer {} vs search {refined}",
            c.pe,
            c.pf,
            c.m,
            c.a,
            c.value
        );
    }
}
