//! Tsirelson's norm
//!
//! ```text
//! ‖x‖_T = max( ‖x‖_∞ , ½ sup Σ_{j≤k} ‖E_j x‖_T )
//! ```
//!
//! over admissible families `k <= E_1 < E_2 < ... < E_k` of successive
//! intervals. For a finitely supported `x` only the support matters, so the
//! recursion runs over contiguous runs of support positions `[i..=j]`. A
//! family then starts at some position `t >= i` and splits `[t..=j]` into at
//! most `index(t)` consecutive groups; covering gaps never lowers a value
//! because the norm is lattice monotone.
//!
//! Intervals are solved in order of their right end, and for a fixed right
//! end the best "at most `g` groups" split of every suffix is shared across
//! left ends, giving `O(L⁴)` work for a support of size `L`. The memo table
//! lives for a single call.

use std::ops::Add;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Scalars the recursion can run on: it only needs `max`, `+` and halving.
pub trait TsirelsonScalar: Clone + PartialOrd + Add<Output = Self> {
    fn zero() -> Self;
    fn half(&self) -> Self;
    fn magnitude(&self) -> Self;
}

impl TsirelsonScalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn half(&self) -> Self {
        0.5 * self
    }
    fn magnitude(&self) -> Self {
        self.abs()
    }
}

impl TsirelsonScalar for BigRational {
    fn zero() -> Self {
        <BigRational as Zero>::zero()
    }
    fn half(&self) -> Self {
        self / BigRational::from_integer(BigInt::from(2))
    }
    fn magnitude(&self) -> Self {
        self.abs()
    }
}

fn max_of<T: TsirelsonScalar>(a: T, b: T) -> T {
    if b > a {
        b
    } else {
        a
    }
}

/// Upper-triangular table `N[i][j]` over support positions.
struct Table<T> {
    len: usize,
    cells: Vec<T>,
}

impl<T: TsirelsonScalar> Table<T> {
    fn get(&self, i: usize, j: usize) -> &T {
        &self.cells[i * self.len + j]
    }
}

fn solve<T: TsirelsonScalar>(indices: &[usize], magnitudes: &[T]) -> Table<T> {
    let len = indices.len();
    let mut table = Table {
        len,
        cells: vec![T::zero(); len * len],
    };
    // suffix[t][g]: best sum splitting [t..=j] into at most g + 1 groups
    let mut suffix: Vec<Vec<T>> = vec![Vec::new(); len + 1];
    for j in 0..len {
        let mut sup = T::zero();
        for i in (0..=j).rev() {
            sup = max_of(sup, magnitudes[i].clone());
            let mut family: Option<T> = None;
            let mut consider = |candidate: T| {
                family = Some(match family.take() {
                    Some(best) => max_of(best, candidate),
                    None => candidate,
                });
            };
            for t in i..=j {
                let cap = indices[t].min(j - t + 1);
                if cap < 2 {
                    continue;
                }
                if t > i {
                    consider(suffix[t][cap - 1].clone());
                } else {
                    for r in i..j {
                        let rest = &suffix[r + 1];
                        let groups = (cap - 2).min(rest.len() - 1);
                        consider(table.get(i, r).clone() + rest[groups].clone());
                    }
                }
            }
            let value = match family {
                Some(sum) => max_of(sup.clone(), sum.half()),
                None => sup.clone(),
            };
            table.cells[i * len + j] = value;

            let span = j - i + 1;
            let mut best = Vec::with_capacity(span);
            best.push(table.get(i, j).clone());
            for g in 1..span {
                let mut acc = best[g - 1].clone();
                for r in i..j {
                    let rest = &suffix[r + 1];
                    if g - 1 < rest.len() {
                        acc = max_of(acc, table.get(i, r).clone() + rest[g - 1].clone());
                    }
                }
                best.push(acc);
            }
            suffix[i] = best;
        }
    }
    table
}

fn split<T: TsirelsonScalar>(entries: &[(usize, T)]) -> (Vec<usize>, Vec<T>) {
    entries.iter().map(|(i, a)| (*i, a.magnitude())).unzip()
}

/// `‖x‖_T` for index-sorted entries; exact when `T` is exact.
pub fn norm<T: TsirelsonScalar>(entries: &[(usize, T)]) -> T {
    if entries.is_empty() {
        return T::zero();
    }
    let (indices, magnitudes) = split(entries);
    solve(&indices, &magnitudes)
        .get(0, entries.len() - 1)
        .clone()
}

/// Exact norm of a rational vector.
pub fn norm_exact(entries: &[(usize, BigRational)]) -> BigRational {
    norm(entries)
}

#[derive(Clone, Copy)]
enum Choice {
    Whole,
    Fewer,
    Split(usize),
}

/// `splits[t - lo][g]`: best split of `[t..=j]` into at most `g + 1` runs.
fn suffix_splits(table: &Table<f64>, lo: usize, j: usize) -> Vec<Vec<(f64, Choice)>> {
    let mut splits: Vec<Vec<(f64, Choice)>> = vec![Vec::new(); j - lo + 1];
    for t in (lo..=j).rev() {
        let span = j - t + 1;
        let mut row = vec![(*table.get(t, j), Choice::Whole)];
        for g in 1..span {
            let mut cell = (row[g - 1].0, Choice::Fewer);
            for r in t..j {
                let rest = &splits[r + 1 - lo];
                if g - 1 < rest.len() {
                    let candidate = table.get(t, r) + rest[g - 1].0;
                    if candidate > cell.0 {
                        cell = (candidate, Choice::Split(r));
                    }
                }
            }
            row.push(cell);
        }
        splits[t - lo] = row;
    }
    splits
}

fn runs_of(
    splits: &[Vec<(f64, Choice)>],
    lo: usize,
    j: usize,
    mut t: usize,
    mut g: usize,
) -> Vec<(usize, usize)> {
    let mut runs = Vec::new();
    loop {
        match splits[t - lo][g].1 {
            Choice::Whole => {
                runs.push((t, j));
                return runs;
            }
            Choice::Fewer => g -= 1,
            Choice::Split(r) => {
                runs.push((t, r));
                t = r + 1;
                g -= 1;
            }
        }
    }
}

fn functional_into(
    table: &Table<f64>,
    indices: &[usize],
    values: &[f64],
    i: usize,
    j: usize,
    weight: f64,
    out: &mut [f64],
) {
    let target = *table.get(i, j);
    if target == 0.0 {
        return;
    }
    let (peak, sup) = (i..=j)
        .map(|k| (k, values[k].abs()))
        .fold((i, 0.0), |acc, (k, a)| if a > acc.1 { (k, a) } else { acc });
    if sup >= target {
        out[peak] += weight * values[peak].signum();
        return;
    }
    let splits = suffix_splits(table, i, j);
    let mut best: Option<(f64, Vec<(usize, usize)>)> = None;
    let mut offer = |sum: f64, runs: &dyn Fn() -> Vec<(usize, usize)>| {
        if best.as_ref().is_none_or(|(b, _)| sum > *b) {
            best = Some((sum, runs()));
        }
    };
    for t in i..=j {
        let cap = indices[t].min(j - t + 1);
        if cap < 2 {
            continue;
        }
        if t > i {
            offer(splits[t - i][cap - 1].0, &|| {
                runs_of(&splits, i, j, t, cap - 1)
            });
        } else {
            for r in i..j {
                let rest = &splits[r + 1 - i];
                let g = (cap - 2).min(rest.len() - 1);
                offer(table.get(i, r) + rest[g].0, &|| {
                    std::iter::once((i, r))
                        .chain(runs_of(&splits, i, j, r + 1, g))
                        .collect()
                });
            }
        }
    }
    if let Some((_, runs)) = best {
        for (a, b) in runs {
            functional_into(table, indices, values, a, b, 0.5 * weight, out);
        }
    }
}

/// Value together with a norming functional `f`, i.e. `⟨f, x⟩ = ‖x‖_T` and
/// `f` is built from the optimal admissible tree so that `‖f‖_{T*} <= 1`.
pub fn norm_with_functional(entries: &[(usize, f64)]) -> (f64, Vec<f64>) {
    let mut out = vec![0.0; entries.len()];
    if entries.is_empty() {
        return (0.0, out);
    }
    let (indices, magnitudes) = split(entries);
    let values: Vec<f64> = entries.iter().map(|&(_, a)| a).collect();
    let table = solve(&indices, &magnitudes);
    let value = *table.get(0, entries.len() - 1);
    functional_into(
        &table,
        &indices,
        &values,
        0,
        entries.len() - 1,
        1.0,
        &mut out,
    );
    (value, out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rational(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn unit_vectors_have_norm_one() {
        for n in 1..30 {
            assert_eq!(norm(&[(n, 1.0)]), 1.0);
        }
    }

    #[test]
    fn consecutive_pair() {
        assert_eq!(norm(&[(3, 1.0), (4, 1.0)]), 1.0);
        // admissibility forbids two groups starting at index 1
        assert_eq!(norm(&[(1, 1.0), (2, 1.0)]), 1.0);
    }

    #[test]
    fn blocks_beyond_n_exact() {
        for n in 2..=6i64 {
            let entries: Vec<(usize, BigRational)> = ((n + 1)..=(2 * n))
                .map(|i| (i as usize, rational(1, 1)))
                .collect();
            assert_eq!(norm_exact(&entries), rational(n, 2), "n = {n}");
        }
    }

    #[test]
    fn functional_norms_the_point() {
        let entries = [(2, 0.5), (3, -1.0), (5, 0.75), (6, 0.25), (9, -0.6)];
        let (value, f) = norm_with_functional(&entries);
        let pairing: f64 = entries.iter().zip(&f).map(|(&(_, a), g)| a * g).sum();
        assert!((pairing - value).abs() < 1e-12);
        assert!(value >= 1.0);
    }
}
