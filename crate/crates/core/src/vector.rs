//! Finitely supported sequences and the operations acting on them.
//!
//! Indices are 1-based throughout: `e_1` is the first unit vector.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{NormError, Result};

/// A finitely supported real sequence in canonical form: entries sorted by
/// index, every stored coefficient finite and nonzero.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FiniteVector {
    entries: Vec<(usize, f64)>,
}

impl FiniteVector {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The unit vector `e_n`.
    pub fn unit(n: usize) -> Self {
        assert!(n >= 1, "indices are 1-based");
        Self {
            entries: vec![(n, 1.0)],
        }
    }

    /// `1_{[from, to]}`, the indicator of an index window.
    pub fn indicator(from: usize, to: usize) -> Self {
        assert!(from >= 1, "indices are 1-based");
        Self {
            entries: (from..=to).map(|i| (i, 1.0)).collect(),
        }
    }

    /// Builds a vector from coefficients at indices `1..=values.len()`.
    pub fn from_dense(values: &[f64]) -> Result<Self> {
        Self::from_sparse(values.iter().enumerate().map(|(k, &a)| (k + 1, a)))
    }

    /// Builds a vector from `(index, value)` pairs. Zero values are dropped;
    /// duplicate indices, index 0 and non-finite values are rejected.
    pub fn from_sparse<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, f64)>,
    {
        let mut map = BTreeMap::new();
        for (i, a) in pairs {
            if i == 0 {
                return Err(NormError::InvalidVector(
                    "index 0 (indices are 1-based)".into(),
                ));
            }
            if !a.is_finite() {
                return Err(NormError::InvalidVector(format!(
                    "non-finite value at index {i}"
                )));
            }
            if map.insert(i, a).is_some() {
                return Err(NormError::InvalidVector(format!("duplicate index {i}")));
            }
        }
        Ok(Self {
            entries: map.into_iter().filter(|&(_, a)| a != 0.0).collect(),
        })
    }

    /// Parses the JSON wire format: a dense array `[a1, a2, ...]` or a sparse
    /// array of `[index, value]` pairs.
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| NormError::InvalidVector(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("vectors always serialize")
    }

    pub(crate) fn from_canonical(entries: Vec<(usize, f64)>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(entries
            .iter()
            .all(|&(i, a)| i >= 1 && a != 0.0 && a.is_finite()));
        Self { entries }
    }

    /// Drops zeros from an index-sorted list.
    pub(crate) fn from_sorted_entries(entries: impl IntoIterator<Item = (usize, f64)>) -> Self {
        Self::from_canonical(entries.into_iter().filter(|&(_, a)| a != 0.0).collect())
    }

    pub fn entries(&self) -> &[(usize, f64)] {
        &self.entries
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.entries.iter().map(|&(_, a)| a)
    }

    pub fn get(&self, index: usize) -> f64 {
        self.entries
            .binary_search_by_key(&index, |&(i, _)| i)
            .map(|k| self.entries[k].1)
            .unwrap_or(0.0)
    }

    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn min_index(&self) -> Option<usize> {
        self.entries.first().map(|&(i, _)| i)
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.last().map(|&(i, _)| i)
    }

    pub fn sup_norm(&self) -> f64 {
        self.values().fold(0.0, |m, a| m.max(a.abs()))
    }

    pub fn abs(&self) -> Self {
        Self::from_canonical(self.entries.iter().map(|&(i, a)| (i, a.abs())).collect())
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self::from_sorted_entries(self.entries.iter().map(|&(i, a)| (i, factor * a)))
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, 1.0)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, -1.0)
    }

    /// `self + factor * other`, merged in index order.
    fn combine(&self, other: &Self, factor: f64) -> Self {
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (
            self.entries.iter().peekable(),
            other.entries.iter().peekable(),
        );
        loop {
            match (a.peek(), b.peek()) {
                (Some(&&(i, x)), Some(&&(j, y))) => {
                    if i < j {
                        out.push((i, x));
                        a.next();
                    } else if j < i {
                        out.push((j, factor * y));
                        b.next();
                    } else {
                        out.push((i, x + factor * y));
                        a.next();
                        b.next();
                    }
                }
                (Some(&&(i, x)), None) => {
                    out.push((i, x));
                    a.next();
                }
                (None, Some(&&(j, y))) => {
                    out.push((j, factor * y));
                    b.next();
                }
                (None, None) => break,
            }
        }
        Self::from_sorted_entries(out)
    }

    /// `v · 1_{[start, end]}`; `end = None` means the window is unbounded.
    pub fn restrict(&self, start: usize, end: Option<usize>) -> Result<Self> {
        check_window(start, end)?;
        let end = end.unwrap_or(usize::MAX);
        Ok(Self::from_canonical(
            self.entries
                .iter()
                .copied()
                .filter(|&(i, _)| i >= start && i <= end)
                .collect(),
        ))
    }
}

fn check_window(start: usize, end: Option<usize>) -> Result<()> {
    match end {
        Some(end) if start > end => Err(NormError::EmptyWindow { start, end }),
        _ => Ok(()),
    }
}

impl fmt::Display for FiniteVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_json())
    }
}

impl Serialize for FiniteVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.entries.len()))?;
        for &(i, a) in &self.entries {
            seq.serialize_element(&(i, a))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for FiniteVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Wire {
            Dense(Vec<f64>),
            Sparse(Vec<(usize, f64)>),
        }
        match Wire::deserialize(deserializer)? {
            Wire::Dense(values) => FiniteVector::from_dense(&values),
            Wire::Sparse(pairs) => FiniteVector::from_sparse(pairs),
        }
        .map_err(de::Error::custom)
    }
}

/// Absolute values sorted non-increasingly, zeros trimmed.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SortedVector {
    values: Vec<f64>,
}

impl SortedVector {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The rearrangement placed at indices `1..=len`.
    pub fn to_vector(&self) -> FiniteVector {
        FiniteVector::from_canonical(
            self.values
                .iter()
                .enumerate()
                .map(|(k, &a)| (k + 1, a))
                .collect(),
        )
    }
}

pub fn decreasing_rearrangement(v: &FiniteVector) -> SortedVector {
    let mut values: Vec<f64> = v.values().map(f64::abs).collect();
    values.sort_by(|a, b| b.total_cmp(a));
    SortedVector { values }
}

/// A bijection of a finite index set, identity elsewhere.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FinitePermutation {
    mapping: BTreeMap<usize, usize>,
}

impl FinitePermutation {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut mapping = BTreeMap::new();
        for (from, to) in pairs {
            if from == 0 || to == 0 {
                return Err(NormError::InvalidParameter(
                    "permutation indices are 1-based".into(),
                ));
            }
            if mapping.insert(from, to).is_some() {
                return Err(NormError::InvalidParameter(format!(
                    "index {from} mapped twice"
                )));
            }
        }
        let domain: BTreeSet<usize> = mapping.keys().copied().collect();
        let range: BTreeSet<usize> = mapping.values().copied().collect();
        if domain != range {
            return Err(NormError::InvalidParameter(
                "mapping is not a bijection of its domain".into(),
            ));
        }
        mapping.retain(|a, b| a != b);
        Ok(Self { mapping })
    }

    pub fn transposition(a: usize, b: usize) -> Self {
        Self::from_pairs([(a, b), (b, a)]).expect("transposition is a bijection")
    }

    /// Maps `indices[k]` to `images[k]`; both lists must hold the same set.
    pub fn from_images(indices: &[usize], images: &[usize]) -> Result<Self> {
        Self::from_pairs(indices.iter().copied().zip(images.iter().copied()))
    }

    pub fn apply(&self, i: usize) -> usize {
        self.mapping.get(&i).copied().unwrap_or(i)
    }
}

/// `(σ·v)(σ(i)) = v(i)`.
pub fn apply_permutation(v: &FiniteVector, sigma: &FinitePermutation) -> FiniteVector {
    let mut entries: Vec<(usize, f64)> = v
        .entries()
        .iter()
        .map(|&(i, a)| (sigma.apply(i), a))
        .collect();
    entries.sort_by_key(|&(i, _)| i);
    FiniteVector::from_canonical(entries)
}

/// A choice of signs: indices listed are negated, all others keep their sign.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SignPattern {
    negated: BTreeSet<usize>,
}

impl SignPattern {
    pub fn new(negated: impl IntoIterator<Item = usize>) -> Self {
        Self {
            negated: negated.into_iter().collect(),
        }
    }

    pub fn from_map(signs: &BTreeMap<usize, i8>) -> Self {
        Self::new(signs.iter().filter(|&(_, &s)| s < 0).map(|(&i, _)| i))
    }

    pub fn sign(&self, i: usize) -> f64 {
        if self.negated.contains(&i) {
            -1.0
        } else {
            1.0
        }
    }
}

pub fn apply_signs(v: &FiniteVector, signs: &SignPattern) -> FiniteVector {
    FiniteVector::from_canonical(
        v.entries()
            .iter()
            .map(|&(i, a)| (i, signs.sign(i) * a))
            .collect(),
    )
}

/// The dilation `D_m`: coefficient `v(n)` is copied to indices `(n-1)m+1 ..= nm`.
pub fn dilate(v: &FiniteVector, m: usize) -> Result<FiniteVector> {
    if m == 0 {
        return Err(NormError::InvalidParameter(
            "dilation factor must be >= 1".into(),
        ));
    }
    Ok(FiniteVector::from_canonical(
        v.entries()
            .iter()
            .flat_map(|&(n, a)| ((n - 1) * m + 1..=n * m).map(move |j| (j, a)))
            .collect(),
    ))
}

/// A non-negative sequence that equals `head` on `start ..= start + head.len() - 1`,
/// vanishes before `start`, and equals `tail_mass / n` at every later index `n`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TailedVector {
    start: usize,
    head: Vec<f64>,
    tail_mass: f64,
}

/// Largest window materialized by a finite restriction of a tailed vector.
const MAX_MATERIALIZED: usize = 1 << 26;

impl TailedVector {
    pub fn new(start: usize, head: Vec<f64>, tail_mass: f64) -> Result<Self> {
        if start == 0 {
            return Err(NormError::InvalidVector(
                "index 0 (indices are 1-based)".into(),
            ));
        }
        if !(tail_mass >= 0.0 && tail_mass.is_finite())
            || head.iter().any(|a| !(*a >= 0.0 && a.is_finite()))
        {
            return Err(NormError::InvalidVector(
                "tailed vectors are finite and non-negative".into(),
            ));
        }
        Ok(Self {
            start,
            head,
            tail_mass,
        })
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn head(&self) -> &[f64] {
        &self.head
    }

    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    /// Last index covered by the head (`start - 1` when the head is empty).
    pub fn head_end(&self) -> usize {
        self.start + self.head.len() - 1
    }

    pub fn value(&self, n: usize) -> f64 {
        if n < self.start {
            0.0
        } else if n <= self.head_end() {
            self.head[n - self.start]
        } else {
            self.tail_mass / n as f64
        }
    }

    /// The finitely supported part on indices `..= end`.
    pub fn truncate(&self, end: usize) -> FiniteVector {
        FiniteVector::from_sorted_entries((self.start..=end).map(|n| (n, self.value(n))))
    }

    pub fn restrict(&self, start: usize, end: Option<usize>) -> Result<Self> {
        check_window(start, end)?;
        let from = start.max(self.start);
        match end {
            None => {
                let head = (from..=self.head_end()).map(|n| self.value(n)).collect();
                Ok(Self {
                    start: from,
                    head,
                    tail_mass: self.tail_mass,
                })
            }
            Some(end) => {
                if end >= from && end - from >= MAX_MATERIALIZED {
                    return Err(NormError::InvalidParameter(format!(
                        "restriction window of {} entries is too large",
                        end - from + 1
                    )));
                }
                let head = (from..=end).map(|n| self.value(n)).collect();
                Ok(Self {
                    start: from,
                    head,
                    tail_mass: 0.0,
                })
            }
        }
    }

    /// True when the sequence is non-increasing from `start` on, tail included.
    pub fn is_non_increasing(&self) -> bool {
        let head_ok = self.head.windows(2).all(|w| w[0] >= w[1]);
        let boundary = self.head_end() + 1;
        let joint_ok = match self.head.last() {
            Some(&last) => last >= self.tail_mass / boundary as f64,
            None => true,
        };
        head_ok && joint_ok
    }
}

/// `x̂(n) = (1/n) Σ_{i≤n} x*(i)`, stored as a head of length `|supp x|` plus the
/// exact harmonic tail `S/n` with `S = Σ x*(i)`.
pub fn hat_transform(v: &FiniteVector) -> TailedVector {
    let sorted = decreasing_rearrangement(v);
    let mut head = Vec::with_capacity(sorted.len());
    let mut running = 0.0;
    for (k, &a) in sorted.values().iter().enumerate() {
        running += a;
        let avg = running / (k + 1) as f64;
        // rounding must not break monotonicity
        let avg = head.last().map_or(avg, |&prev: &f64| avg.min(prev));
        head.push(avg);
    }
    TailedVector {
        start: 1,
        head,
        tail_mass: running,
    }
}

/// A failure of `(x+y)^(n) <= x̂(n) + ŷ(n)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HatViolation {
    pub index: usize,
    pub lhs: f64,
    pub rhs: f64,
}

/// Checks `(x+y)^(n) <= x̂(n) + ŷ(n)` for every `n` up to the longest head and
/// then the common harmonic tail via `S_{x+y} <= S_x + S_y`.
pub fn hat_pointwise_sum_bound(x: &FiniteVector, y: &FiniteVector) -> Option<HatViolation> {
    let (hx, hy, hs) = (hat_transform(x), hat_transform(y), hat_transform(&x.add(y)));
    let last = hx.head.len().max(hy.head.len()).max(hs.head.len());
    let exceeds = |lhs: f64, rhs: f64| lhs > rhs + crate::tol::ABS + crate::tol::REL * rhs.abs();
    for n in 1..=last {
        let (lhs, rhs) = (hs.value(n), hx.value(n) + hy.value(n));
        if exceeds(lhs, rhs) {
            return Some(HatViolation { index: n, lhs, rhs });
        }
    }
    let (lhs, rhs) = (hs.tail_mass, hx.tail_mass + hy.tail_mass);
    exceeds(lhs, rhs).then_some(HatViolation {
        index: last + 1,
        lhs: lhs / (last + 1) as f64,
        rhs: rhs / (last + 1) as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(values: &[f64]) -> FiniteVector {
        FiniteVector::from_dense(values).unwrap()
    }

    #[test]
    fn canonical_form_drops_zeros() {
        let x = v(&[0.0, -2.0, 1.0]);
        assert_eq!(x.entries(), &[(2, -2.0), (3, 1.0)]);
        assert_eq!(x.max_index(), Some(3));
        assert!(FiniteVector::from_dense(&[0.0, 0.0]).unwrap().is_zero());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(FiniteVector::from_sparse([(0, 1.0)]).is_err());
        assert!(FiniteVector::from_sparse([(1, 1.0), (1, 2.0)]).is_err());
        assert!(FiniteVector::from_dense(&[f64::NAN]).is_err());
    }

    #[test]
    fn json_dense_and_sparse() {
        assert_eq!(
            FiniteVector::from_json("[1, 0, -2]").unwrap(),
            v(&[1.0, 0.0, -2.0])
        );
        assert_eq!(
            FiniteVector::from_json("[[3, 1.5], [1, -1]]").unwrap(),
            FiniteVector::from_sparse([(1, -1.0), (3, 1.5)]).unwrap()
        );
        assert!(FiniteVector::from_json("[]").unwrap().is_zero());
        assert_eq!(v(&[0.0, 2.0]).to_json(), "[[2,2.0]]");
        assert!(FiniteVector::from_json("[[0, 1]]").is_err());
    }

    #[test]
    fn rearrangement_examples() {
        assert_eq!(
            decreasing_rearrangement(&v(&[0.0, -2.0, 1.0])).values(),
            &[2.0, 1.0]
        );
        assert!(decreasing_rearrangement(&FiniteVector::zero()).is_empty());
        assert_eq!(
            decreasing_rearrangement(&v(&[3.0, 1.0, 2.0])).values(),
            &[3.0, 2.0, 1.0]
        );
    }

    #[test]
    fn permutation_examples() {
        let swap = FinitePermutation::transposition(1, 2);
        assert_eq!(
            apply_permutation(&FiniteVector::unit(1), &swap),
            FiniteVector::unit(2)
        );
        let x = v(&[4.0, -7.0]);
        assert_eq!(apply_permutation(&x, &FinitePermutation::identity()), x);
        assert_eq!(apply_permutation(&x, &swap), v(&[-7.0, 4.0]));
        assert!(FinitePermutation::from_pairs([(1, 2), (2, 3)]).is_err());
    }

    #[test]
    fn sign_examples() {
        let neg1 = SignPattern::new([1]);
        assert_eq!(apply_signs(&FiniteVector::unit(1), &neg1), v(&[-1.0]));
        let x = v(&[1.0, -1.0]);
        assert_eq!(apply_signs(&x, &SignPattern::default()), x);
        assert_eq!(apply_signs(&x, &SignPattern::new([1, 2])), v(&[-1.0, 1.0]));
    }

    #[test]
    fn dilation_examples() {
        assert_eq!(dilate(&FiniteVector::unit(1), 2).unwrap(), v(&[1.0, 1.0]));
        let x = v(&[3.0, -1.0]);
        assert_eq!(dilate(&x, 1).unwrap(), x);
        assert_eq!(dilate(&x, 2).unwrap(), v(&[3.0, 3.0, -1.0, -1.0]));
        assert!(dilate(&x, 0).is_err());
    }

    #[test]
    fn restriction_examples() {
        let x = FiniteVector::from_sparse([(1, 1.0), (5, 1.0)]).unwrap();
        assert_eq!(x.restrict(2, None).unwrap(), FiniteVector::unit(5));
        assert_eq!(x.restrict(1, None).unwrap(), x);
        assert!(x.restrict(3, Some(2)).is_err());

        let tail = hat_transform(&FiniteVector::unit(1))
            .restrict(3, None)
            .unwrap();
        assert!(tail.head().is_empty());
        assert_eq!(tail.start(), 3);
        assert_eq!(tail.value(2), 0.0);
        for n in 3..20 {
            assert_eq!(tail.value(n), 1.0 / n as f64);
        }
        let window = hat_transform(&FiniteVector::unit(1))
            .restrict(2, Some(4))
            .unwrap();
        assert_eq!(window.head(), &[0.5, 1.0 / 3.0, 0.25]);
        assert_eq!(window.value(5), 0.0);
    }

    #[test]
    fn hat_examples() {
        let h = hat_transform(&FiniteVector::unit(1));
        assert_eq!(h.head(), &[1.0]);
        for n in 1..50 {
            assert_eq!(h.value(n), 1.0 / n as f64);
        }
        let h = hat_transform(&v(&[1.0, 1.0]));
        assert_eq!(h.head(), &[1.0, 1.0]);
        assert_eq!(h.tail_mass(), 2.0);
        assert_eq!(h.value(5), 0.4);
        let h = hat_transform(&FiniteVector::zero());
        assert!(h.head().is_empty());
        assert_eq!(h.tail_mass(), 0.0);
    }

    #[test]
    fn hat_subadditivity_examples() {
        assert_eq!(
            hat_pointwise_sum_bound(&FiniteVector::unit(1), &FiniteVector::unit(2)),
            None
        );
        let x = v(&[3.0, -1.0, 0.5]);
        assert_eq!(hat_pointwise_sum_bound(&x, &x), None);
    }
}
