//! Permutations of `{1..n}` with a dense lexicographic (Lehmer) index.
//!
//! Internally images are stored zero-based; the public one-line form and the
//! JSON encoding are one-based, so `[2, 1, 3]` swaps the first two points.
//! Composition follows `(p ∘ q)(i) = p(q(i))`: `q` is applied first.

use std::fmt;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::partition::Partition;

/// Largest `n` for which `S_n` may be enumerated exhaustively.
pub const MAX_ENUMERATE_N: usize = 10;

/// `n!` as an exact integer. Valid for `n <= 20`.
pub fn factorial(n: usize) -> u64 {
    assert!(n <= 20, "{n}! overflows u64");
    (1..=n as u64).product()
}

pub(crate) fn check_capacity(n: usize) -> Result<()> {
    if n > MAX_ENUMERATE_N {
        return Err(Error::Capacity { n, max: MAX_ENUMERATE_N });
    }
    Ok(())
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

/// Cycle lengths of a permutation, weakly decreasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CycleType(Vec<usize>);

impl CycleType {
    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn into_partition(self) -> Partition {
        Partition::new(self.0).expect("cycle lengths form a partition")
    }
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        assert!(n >= 1, "permutations need n >= 1");
        Self { images: (0..n).collect() }
    }

    /// Builds a permutation from one-based one-line notation.
    pub fn from_one_line(one_line: &[usize]) -> Result<Self> {
        if one_line.contains(&0) {
            return Err(Error::InvalidPermutation(format!(
                "one-line notation is 1-based, got {one_line:?}"
            )));
        }
        Self::from_images(one_line.iter().map(|v| v - 1).collect())
    }

    /// Builds a permutation from zero-based images.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        if n == 0 {
            return Err(Error::InvalidPermutation("empty mapping".into()));
        }
        let mut seen = vec![false; n];
        for &v in &images {
            if v >= n || seen[v] {
                return Err(Error::InvalidPermutation(format!(
                    "not a bijection of 1..{n}: {:?}",
                    images.iter().map(|x| x + 1).collect::<Vec<_>>()
                )));
            }
            seen[v] = true;
        }
        Ok(Self { images })
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    /// Zero-based image of zero-based point `i`.
    #[inline]
    pub fn get(&self, i: usize) -> usize {
        self.images[i]
    }

    /// Zero-based images.
    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn one_line(&self) -> Vec<usize> {
        self.images.iter().map(|v| v + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// `self ∘ other`, i.e. `other` first.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), found: other.n() });
        }
        Ok(Permutation { images: other.images.iter().map(|&j| self.images[j]).collect() })
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.n()];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v] = i;
        }
        Permutation { images: inv }
    }

    pub fn fixed_points(&self) -> usize {
        self.images.iter().enumerate().filter(|(i, v)| i == *v).count()
    }

    /// Number of points where `self` and `other` agree.
    pub fn agreements(&self, other: &Permutation) -> usize {
        self.images.iter().zip(&other.images).filter(|(a, b)| a == b).count()
    }

    pub fn cycle_type(&self) -> CycleType {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut parts = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.images[i];
                len += 1;
            }
            parts.push(len);
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        CycleType(parts)
    }

    /// Lexicographic position of the one-line notation among all of `S_n`.
    pub fn lehmer_rank(&self) -> u64 {
        let n = self.n();
        let mut rank = 0u64;
        for i in 0..n {
            let smaller = self.images[i + 1..].iter().filter(|&&v| v < self.images[i]).count();
            rank = rank * (n - i) as u64 + smaller as u64;
        }
        rank
    }

    pub fn lehmer_unrank(n: usize, rank: u64) -> Result<Permutation> {
        if n == 0 || n > 20 {
            return Err(Error::InvalidPermutation(format!("unsupported size n = {n}")));
        }
        let total = factorial(n);
        if rank >= total {
            return Err(Error::IndexOutOfRange { index: rank, bound: total });
        }
        let mut digits = vec![0usize; n];
        let mut r = rank;
        for (i, d) in digits.iter_mut().enumerate().rev() {
            let base = (n - i) as u64;
            *d = (r % base) as usize;
            r /= base;
        }
        let mut pool: Vec<usize> = (0..n).collect();
        let images = digits.into_iter().map(|d| pool.remove(d)).collect();
        Ok(Permutation { images })
    }

    /// Transposition of two zero-based points.
    pub fn transposition(n: usize, a: usize, b: usize) -> Permutation {
        let mut p = Permutation::identity(n);
        p.images.swap(a, b);
        p
    }

    /// Positions `k` such that swapping one-line entries `k, k+1` in order
    /// sorts `self`; equivalently `self = s_{k_m} ∘ … ∘ s_{k_1}`.
    pub fn bubble_sort_swaps(&self) -> Vec<usize> {
        let mut arr = self.images.clone();
        let mut swaps = Vec::new();
        let n = arr.len();
        for pass in 0..n {
            let mut changed = false;
            for k in 0..n - 1 - pass.min(n - 1) {
                if arr[k] > arr[k + 1] {
                    arr.swap(k, k + 1);
                    swaps.push(k);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        swaps
    }

    fn next_lexicographic(&mut self) -> bool {
        let a = &mut self.images;
        let n = a.len();
        if n < 2 {
            return false;
        }
        let mut i = n - 1;
        while i > 0 && a[i - 1] >= a[i] {
            i -= 1;
        }
        if i == 0 {
            return false;
        }
        let mut j = n - 1;
        while a[j] <= a[i - 1] {
            j -= 1;
        }
        a.swap(i - 1, j);
        a[i..].reverse();
        true
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.one_line())
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.one_line())
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.one_line().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<usize>::deserialize(d)?;
        Permutation::from_one_line(&raw).map_err(de::Error::custom)
    }
}

/// Lexicographic stream over all of `S_n`.
pub struct Permutations {
    current: Option<Permutation>,
}

impl Iterator for Permutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let out = self.current.take()?;
        let mut next = out.clone();
        if next.next_lexicographic() {
            self.current = Some(next);
        }
        Some(out)
    }
}

/// All `n!` permutations in lexicographic order (rank order).
pub fn enumerate(n: usize) -> Result<Permutations> {
    if n == 0 {
        return Err(Error::InvalidPermutation("n must be at least 1".into()));
    }
    check_capacity(n)?;
    Ok(Permutations { current: Some(Permutation::identity(n)) })
}

/// Visits every permutation of `S_n` exactly once, each differing from its
/// predecessor by swapping adjacent one-line positions `k, k+1`
/// (Steinhaus–Johnson–Trotter with Even's speedup). The callback receives
/// the permutation and the swapped position, `None` for the first visit.
///
/// A swap at position `k` means `next = prev ∘ s_k` with `s_k` the
/// transposition of points `k, k+1`.
pub fn walk_adjacent<F>(n: usize, mut visit: F) -> Result<()>
where
    F: FnMut(&Permutation, Option<usize>),
{
    if n == 0 {
        return Err(Error::InvalidPermutation("n must be at least 1".into()));
    }
    check_capacity(n)?;
    let mut perm = Permutation::identity(n);
    // direction per value: -1 left, +1 right
    let mut dir = vec![-1i8; n];
    let mut pos: Vec<usize> = (0..n).collect();
    visit(&perm, None);
    loop {
        let mut mobile: Option<usize> = None;
        for v in (0..n).rev() {
            let p = pos[v];
            let target = p as isize + dir[v] as isize;
            if target >= 0 && (target as usize) < n && perm.images[target as usize] < v {
                mobile = Some(v);
                break;
            }
        }
        let Some(v) = mobile else { break };
        let p = pos[v];
        let q = (p as isize + dir[v] as isize) as usize;
        let w = perm.images[q];
        perm.images.swap(p, q);
        pos[v] = q;
        pos[w] = p;
        for larger in v + 1..n {
            dir[larger] = -dir[larger];
        }
        visit(&perm, Some(p.min(q)));
    }
    Ok(())
}
