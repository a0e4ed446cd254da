//! Dense real functions on `S_n` and subsets of `S_n`, both indexed by
//! Lehmer rank.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{check_capacity, factorial, Permutation};
use crate::scalar::Real;

/// A function `f : S_n → ℝ` stored as `n!` values in Lehmer order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real", try_from = "RawPayoff<T>")]
pub struct PayoffFn<T: Real> {
    n: usize,
    values: Vec<T>,
}

#[derive(Deserialize)]
#[serde(bound = "T: Real")]
struct RawPayoff<T: Real> {
    n: usize,
    values: Vec<T>,
}

impl<T: Real> TryFrom<RawPayoff<T>> for PayoffFn<T> {
    type Error = Error;

    fn try_from(raw: RawPayoff<T>) -> Result<Self> {
        PayoffFn::new(raw.n, raw.values)
    }
}

impl<T: Real> PayoffFn<T> {
    pub fn new(n: usize, values: Vec<T>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSpec("n must be at least 1".into()));
        }
        check_capacity(n)?;
        let expected = factorial(n) as usize;
        if values.len() != expected {
            return Err(Error::DimensionMismatch { expected, found: values.len() });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidSpec(format!("value at rank {i} is not finite")));
        }
        Ok(Self { n, values })
    }

    pub fn zeros(n: usize) -> Result<Self> {
        check_capacity(n)?;
        Self::new(n, vec![T::zero(); factorial(n) as usize])
    }

    pub fn constant(n: usize, c: T) -> Result<Self> {
        check_capacity(n)?;
        Self::new(n, vec![c; factorial(n) as usize])
    }

    /// Indicator of a single permutation.
    pub fn delta(p: &Permutation) -> Result<Self> {
        let mut f = Self::zeros(p.n())?;
        f.values[p.lehmer_rank() as usize] = T::one();
        Ok(f)
    }

    pub fn from_fn(n: usize, mut g: impl FnMut(&Permutation) -> T) -> Result<Self> {
        let values = crate::perm::enumerate(n)?.map(|p| g(&p)).collect();
        Self::new(n, values)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn at(&self, p: &Permutation) -> T {
        self.values[p.lehmer_rank() as usize]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| *v == T::zero())
    }

    pub fn sum(&self) -> T {
        self.values.iter().fold(T::zero(), |acc, &v| acc + v)
    }

    /// Uniform expectation over `S_n`.
    pub fn mean(&self) -> T {
        self.sum() / T::from_usize_lossy(self.len())
    }

    pub fn norm1(&self) -> T {
        self.values.iter().fold(T::zero(), |acc, &v| acc + v.abs())
    }

    pub fn norm_inf(&self) -> T {
        self.values.iter().fold(T::zero(), |acc, &v| acc.max(v.abs()))
    }

    pub fn norm2_squared(&self) -> T {
        self.values.iter().fold(T::zero(), |acc, &v| acc + v * v)
    }

    pub fn min_value(&self) -> T {
        self.values.iter().copied().fold(self.values[0], |a, b| a.min(b))
    }

    pub fn max_value(&self) -> T {
        self.values.iter().copied().fold(self.values[0], |a, b| a.max(b))
    }

    /// Unnormalized inner product `Σ_π f(π) g(π)`.
    pub fn dot(&self, other: &Self) -> Result<T> {
        self.check_same_n(other)?;
        Ok(self.values.iter().zip(&other.values).fold(T::zero(), |acc, (&a, &b)| acc + a * b))
    }

    pub fn scale(&self, c: T) -> Self {
        Self { n: self.n, values: self.values.iter().map(|&v| v * c).collect() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_n(other)?;
        Ok(Self { n: self.n, values: self.values.iter().zip(&other.values).map(|(&a, &b)| a + b).collect() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_n(other)?;
        Ok(Self { n: self.n, values: self.values.iter().zip(&other.values).map(|(&a, &b)| a - b).collect() })
    }

    /// `f · 1_A`.
    pub fn restrict(&self, set: &OrderingSet) -> Result<Self> {
        if set.n() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: set.n() });
        }
        let mut values = vec![T::zero(); self.len()];
        for &r in set.members() {
            values[r as usize] = self.values[r as usize];
        }
        Ok(Self { n: self.n, values })
    }

    /// Largest absolute pointwise difference.
    pub fn max_abs_diff(&self, other: &Self) -> Result<T> {
        self.check_same_n(other)?;
        Ok(self.values.iter().zip(&other.values).fold(T::zero(), |acc, (&a, &b)| acc.max((a - b).abs())))
    }

    pub(crate) fn values_mut(&mut self) -> &mut [T] {
        &mut self.values
    }

    fn check_same_n(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: other.n });
        }
        Ok(())
    }
}

/// A subset `A ⊆ S_n`, stored as strictly increasing Lehmer ranks.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSet")]
pub struct OrderingSet {
    n: usize,
    members: Vec<u64>,
}

#[derive(Deserialize)]
struct RawSet {
    n: usize,
    members: Vec<u64>,
}

impl TryFrom<RawSet> for OrderingSet {
    type Error = Error;

    fn try_from(raw: RawSet) -> Result<Self> {
        OrderingSet::new(raw.n, raw.members)
    }
}

impl OrderingSet {
    /// Builds a set from arbitrary ranks; duplicates are merged.
    pub fn new(n: usize, mut members: Vec<u64>) -> Result<Self> {
        if n == 0 || n > 20 {
            return Err(Error::InvalidSpec(format!("unsupported n = {n}")));
        }
        let bound = factorial(n);
        if let Some(&bad) = members.iter().find(|&&r| r >= bound) {
            return Err(Error::IndexOutOfRange { index: bad, bound });
        }
        members.sort_unstable();
        members.dedup();
        Ok(Self { n, members })
    }

    pub fn from_perms<'a>(n: usize, perms: impl IntoIterator<Item = &'a Permutation>) -> Result<Self> {
        let mut members = Vec::new();
        for p in perms {
            if p.n() != n {
                return Err(Error::DimensionMismatch { expected: n, found: p.n() });
            }
            members.push(p.lehmer_rank());
        }
        Self::new(n, members)
    }

    /// All of `S_n`.
    pub fn full(n: usize) -> Result<Self> {
        check_capacity(n)?;
        Self::new(n, (0..factorial(n)).collect())
    }

    pub fn filter(n: usize, mut keep: impl FnMut(&Permutation) -> bool) -> Result<Self> {
        let members = crate::perm::enumerate(n)?.filter(|p| keep(p)).map(|p| p.lehmer_rank()).collect();
        Self::new(n, members)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &[u64] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        p.n() == self.n && self.members.binary_search(&p.lehmer_rank()).is_ok()
    }

    pub fn permutations(&self) -> impl Iterator<Item = Permutation> + '_ {
        self.members.iter().map(|&r| Permutation::lehmer_unrank(self.n, r).expect("ranks validated"))
    }

    pub fn is_subset_of(&self, other: &OrderingSet) -> bool {
        self.n == other.n && self.members.iter().all(|r| other.members.binary_search(r).is_ok())
    }
}
