//! Averaging operators on Cayley graphs of `S_n` and their block spectra.
//!
//! For a symmetric set `F` the operator is `(T_F f)(π) = (1/|F|) Σ_{τ∈F} f(τ∘π)`.
//! On the λ-isotype it acts as left multiplication of `f̂(λ)` by
//! `B_λ = (1/|F|) Σ_{τ∈F} ρ^λ(τ)`, so each eigenvalue of `B_λ` appears in
//! `T_F` with multiplicity `d_λ`.

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::payoff_fn::{OrderingSet, PayoffFn};
use crate::payoffs::indicator_payoff;
use crate::perm::{factorial, Permutation};
use crate::repr::RepresentationTable;
use crate::scalar::Real;

/// A nonempty subset of `S_n` closed under inversion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymmetricSet {
    set: OrderingSet,
}

impl SymmetricSet {
    pub fn new(set: OrderingSet) -> Result<Self> {
        if set.is_empty() {
            return Err(Error::EmptySet);
        }
        if set.permutations().any(|p| !set.contains(&p.inverse())) {
            return Err(Error::NotSymmetric);
        }
        Ok(Self { set })
    }

    pub fn n(&self) -> usize {
        self.set.n()
    }

    pub fn len(&self) -> usize {
        self.set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }

    pub fn as_set(&self) -> &OrderingSet {
        &self.set
    }

    /// All transpositions of `S_n`.
    pub fn transpositions(n: usize) -> Result<Self> {
        let perms: Vec<Permutation> =
            (0..n).flat_map(|a| (a + 1..n).map(move |b| Permutation::transposition(n, a, b))).collect();
        Self::new(OrderingSet::from_perms(n, &perms)?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// Row-stochastic: average over the `|F|` neighbours.
    Averaging,
    /// Raw adjacency counts.
    Adjacency,
}

/// `Â = A ∪ A⁻¹`.
pub fn symmetrize(set: &OrderingSet) -> Result<SymmetricSet> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut ranks: Vec<u64> = set.members().to_vec();
    ranks.extend(set.permutations().map(|p| p.inverse().lehmer_rank()));
    SymmetricSet::new(OrderingSet::new(set.n(), ranks)?)
}

/// `Σ_{τ∈F} ρ^λ(τ)`, scaled by `1/|F|` under [`Normalization::Averaging`].
pub fn block_operator<T: Real>(
    table: &RepresentationTable<T>,
    generators: &SymmetricSet,
    shape: &Partition,
    norm: Normalization,
) -> Result<DMatrix<T>> {
    let indicator = indicator_payoff::<T>(generators.as_set())?;
    let sum = table.transform_block(&indicator, shape)?;
    Ok(match norm {
        Normalization::Averaging => sum / T::from_usize_lossy(generators.len()),
        Normalization::Adjacency => sum,
    })
}

fn sorted_desc<T: Real>(mut v: Vec<T>) -> Vec<T> {
    v.sort_by(|a, b| b.partial_cmp(a).expect("finite eigenvalues"));
    v
}

/// Eigenvalues of a symmetric matrix, descending.
pub fn symmetric_eigenvalues<T: Real>(m: &DMatrix<T>) -> Vec<T> {
    // symmetrize away rounding asymmetry before the solve
    let sym = (m + m.transpose()) * T::from_f64_lossy(0.5);
    sorted_desc(SymmetricEigen::new(sym).eigenvalues.iter().copied().collect())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct BlockSpectrum<T: Real> {
    pub shape: Partition,
    pub dim: u64,
    /// Eigenvalues of `B_λ` (averaging normalization), descending.
    pub operator_eigenvalues: Vec<T>,
    /// Eigenvalues of `B_λᵀ B_λ`, descending.
    pub gram_eigenvalues: Vec<T>,
    /// `n! / (|F| d_λ)`.
    pub bound: T,
    /// Largest Gram eigenvalue under averaging is within the bound.
    pub averaging_within_bound: bool,
    /// Largest Gram eigenvalue of the unnormalized adjacency block, `|F|²`
    /// times the averaging value.
    pub adjacency_gram_max: T,
    pub adjacency_within_bound: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct SpectrumReport<T: Real> {
    pub n: usize,
    pub generator_count: usize,
    pub blocks: Vec<BlockSpectrum<T>>,
    pub averaging_violations: usize,
    pub adjacency_violations: usize,
    /// Normalizations under which every block satisfies the bound.
    pub satisfied_by: Vec<Normalization>,
}

/// Absolute slack on the eigenvalue bound comparison.
pub const EIGEN_BOUND_SLACK: f64 = 1e-9;

pub fn spectrum_report<T: Real>(table: &RepresentationTable<T>, generators: &SymmetricSet) -> Result<SpectrumReport<T>> {
    let n = generators.n();
    let order = T::from_u64(factorial(n)).expect("n! fits");
    let size = T::from_usize_lossy(generators.len());
    let slack = T::from_f64_lossy(EIGEN_BOUND_SLACK);
    let blocks = table
        .irreps()
        .par_iter()
        .map(|y| {
            let b = block_operator(table, generators, y.shape(), Normalization::Averaging)?;
            let operator_eigenvalues = symmetric_eigenvalues(&b);
            let gram_eigenvalues = symmetric_eigenvalues(&(b.transpose() * &b));
            let dim = y.shape().dim();
            let bound = order / (size * T::from_u64(dim).expect("dim fits"));
            let top = gram_eigenvalues[0];
            let adjacency_gram_max = top * size * size;
            Ok(BlockSpectrum {
                shape: y.shape().clone(),
                dim,
                operator_eigenvalues,
                gram_eigenvalues,
                bound,
                averaging_within_bound: top <= bound + slack,
                adjacency_gram_max,
                adjacency_within_bound: adjacency_gram_max <= bound + slack,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let averaging_violations = blocks.iter().filter(|b| !b.averaging_within_bound).count();
    let adjacency_violations = blocks.iter().filter(|b| !b.adjacency_within_bound).count();
    let mut satisfied_by = Vec::new();
    if averaging_violations == 0 {
        satisfied_by.push(Normalization::Averaging);
    }
    if adjacency_violations == 0 {
        satisfied_by.push(Normalization::Adjacency);
    }
    Ok(SpectrumReport {
        n,
        generator_count: generators.len(),
        blocks,
        averaging_violations,
        adjacency_violations,
        satisfied_by,
    })
}

/// `(T_F f)(π) = (1/|F|) Σ_{τ∈F} f(τ∘π)`.
pub fn apply_operator<T: Real>(generators: &SymmetricSet, f: &PayoffFn<T>) -> Result<PayoffFn<T>> {
    if f.n() != generators.n() {
        return Err(Error::DimensionMismatch { expected: generators.n(), found: f.n() });
    }
    let taus: Vec<Permutation> = generators.as_set().permutations().collect();
    let scale = T::one() / T::from_usize_lossy(taus.len());
    PayoffFn::from_fn(f.n(), |p| {
        taus.iter().fold(T::zero(), |acc, t| acc + f.at(&t.compose(p).expect("same n"))) * scale
    })
}

/// Dense `n! × n!` matrix of `T_F` in Lehmer order.
pub fn operator_matrix<T: Real>(generators: &SymmetricSet, norm: Normalization) -> Result<DMatrix<T>> {
    let n = generators.n();
    let len = factorial(n) as usize;
    let taus: Vec<Permutation> = generators.as_set().permutations().collect();
    let w = match norm {
        Normalization::Averaging => T::one() / T::from_usize_lossy(taus.len()),
        Normalization::Adjacency => T::one(),
    };
    let mut m = DMatrix::zeros(len, len);
    for p in crate::perm::enumerate(n)? {
        let row = p.lehmer_rank() as usize;
        for t in &taus {
            let col = t.compose(&p)?.lehmer_rank() as usize;
            m[(row, col)] += w;
        }
    }
    Ok(m)
}
