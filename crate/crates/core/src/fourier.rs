//! Fourier analysis of functions on `S_n`.
//!
//! Conventions used throughout:
//!
//! * transform: `f̂(λ) = Σ_π f(π) ρ^λ(π)`
//! * inversion: `f(π) = (1/n!) Σ_λ d_λ Tr[f̂(λ) ρ^λ(π)ᵀ]`
//! * Plancherel: `Σ_π f(π)² = (1/n!) Σ_λ d_λ ‖f̂(λ)‖_F²`
//! * boolean degree: the largest `n - λ_1` over isotypes carrying nonzero
//!   spectrum.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::payoff_fn::PayoffFn;
use crate::perm::factorial;
use crate::repr::{RepresentationTable, YoungOrthogonal};
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumBlock<T: Real> {
    pub shape: Partition,
    pub matrix: DMatrix<T>,
}

/// The full transform `λ ↦ f̂(λ)`, one block per partition of `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierSpectrum<T: Real> {
    n: usize,
    blocks: Vec<SpectrumBlock<T>>,
}

impl<T: Real> FourierSpectrum<T> {
    pub fn new(n: usize, blocks: Vec<SpectrumBlock<T>>) -> Result<Self> {
        let expected = crate::partition::partitions_of(n);
        if blocks.len() != expected.len() {
            return Err(Error::DimensionMismatch { expected: expected.len(), found: blocks.len() });
        }
        for (b, shape) in blocks.iter().zip(&expected) {
            if &b.shape != shape {
                return Err(Error::InvalidPartition(format!("expected block {shape}, found {}", b.shape)));
            }
            let d = shape.dim() as usize;
            if b.matrix.nrows() != d || b.matrix.ncols() != d {
                return Err(Error::DimensionMismatch { expected: d, found: b.matrix.nrows() });
            }
        }
        Ok(Self { n, blocks })
    }

    pub fn zeros(n: usize) -> Self {
        let blocks = crate::partition::partitions_of(n)
            .into_iter()
            .map(|shape| {
                let d = shape.dim() as usize;
                SpectrumBlock { shape, matrix: DMatrix::zeros(d, d) }
            })
            .collect();
        Self { n, blocks }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[SpectrumBlock<T>] {
        &self.blocks
    }

    pub fn block(&self, shape: &Partition) -> Option<&DMatrix<T>> {
        self.blocks.iter().find(|b| &b.shape == shape).map(|b| &b.matrix)
    }

    /// Keeps only the blocks selected by `keep`, zeroing the rest.
    pub fn filter_blocks(&self, mut keep: impl FnMut(&Partition) -> bool) -> Self {
        let blocks = self
            .blocks
            .iter()
            .map(|b| {
                if keep(&b.shape) {
                    b.clone()
                } else {
                    SpectrumBlock { shape: b.shape.clone(), matrix: DMatrix::zeros(b.matrix.nrows(), b.matrix.ncols()) }
                }
            })
            .collect();
        Self { n: self.n, blocks }
    }

    /// `(1/n!) Σ_λ d_λ ‖f̂(λ)‖_F²`, which equals `Σ_π f(π)²`.
    pub fn plancherel_energy(&self) -> T {
        let order = T::from_u64(factorial(self.n)).expect("n! fits");
        self.blocks
            .iter()
            .map(|b| T::from_u64(b.shape.dim()).expect("dim fits") * b.matrix.norm_squared())
            .fold(T::zero(), |a, b| a + b)
            / order
    }
}

#[derive(Serialize, Deserialize)]
#[serde(bound = "T: Real")]
struct BlockDto<T: Real> {
    lambda: Partition,
    matrix: Vec<Vec<T>>,
}

#[derive(Serialize, Deserialize)]
#[serde(bound = "T: Real")]
struct SpectrumDto<T: Real> {
    n: usize,
    blocks: Vec<BlockDto<T>>,
}

impl<T: Real> Serialize for FourierSpectrum<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let dto = SpectrumDto {
            n: self.n,
            blocks: self
                .blocks
                .iter()
                .map(|b| BlockDto {
                    lambda: b.shape.clone(),
                    matrix: b.matrix.row_iter().map(|r| r.iter().copied().collect()).collect(),
                })
                .collect(),
        };
        dto.serialize(s)
    }
}

impl<'de, T: Real> Deserialize<'de> for FourierSpectrum<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let dto = SpectrumDto::<T>::deserialize(d)?;
        let mut blocks = Vec::with_capacity(dto.blocks.len());
        for b in dto.blocks {
            let rows = b.matrix.len();
            if b.matrix.iter().any(|r| r.len() != rows) {
                return Err(de::Error::custom(format!("block {} is not square", b.lambda)));
            }
            let matrix = DMatrix::from_fn(rows, rows, |i, j| b.matrix[i][j]);
            blocks.push(SpectrumBlock { shape: b.lambda, matrix });
        }
        FourierSpectrum::new(dto.n, blocks).map_err(de::Error::custom)
    }
}

/// Singular values per block and the dimension-weighted Schatten aggregates.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct SchattenSummary<T: Real> {
    /// `Σ_λ d_λ Σ_i μ_i(f̂(λ))`.
    pub s1: T,
    /// `max_λ max_i μ_i(f̂(λ))`.
    pub sinf: T,
    pub per_block: Vec<(Partition, Vec<T>)>,
}

impl<T: Real> SchattenSummary<T> {
    /// `sinf / s1`, at most one. This is the direction the fairness bounds use.
    pub fn k_ratio(&self) -> T {
        self.sinf / self.s1
    }

    /// `s1 / sinf`, at least one.
    pub fn inverse_k_ratio(&self) -> T {
        self.s1 / self.sinf
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct UncertaintyCheck<T: Real> {
    /// `‖f‖_1 / ‖f‖_∞`.
    pub lhs_ratio: T,
    /// `s1 / sinf` of the spectrum.
    pub rhs_ratio: T,
    pub product: T,
    /// `n!`.
    pub group_order: T,
    pub holds: bool,
}

/// Relative slack allowed when testing the uncertainty inequality.
pub const UNCERTAINTY_SLACK: f64 = 1e-9;

fn block_transform<T: Real>(irrep: &YoungOrthogonal<T>, f: &PayoffFn<T>) -> Result<DMatrix<T>> {
    let d = irrep.dim();
    let mut acc = DMatrix::<T>::zeros(d, d);
    let values = f.values();
    irrep.for_each_matrix(|p, m| {
        let v = values[p.lehmer_rank() as usize];
        if v != T::zero() {
            for (a, &x) in acc.iter_mut().zip(m.iter()) {
                *a += v * x;
            }
        }
    })?;
    Ok(acc)
}

/// Adds `scale · Tr[block · ρ(π)ᵀ]` to `out[rank(π)]` for every `π`.
fn block_inverse_into<T: Real>(irrep: &YoungOrthogonal<T>, block: &DMatrix<T>, scale: T, out: &mut [T]) -> Result<()> {
    if block.iter().all(|x| *x == T::zero()) {
        return Ok(());
    }
    irrep.for_each_matrix(|p, m| {
        out[p.lehmer_rank() as usize] += scale * block.dot(m);
    })
}

impl<T: Real> RepresentationTable<T> {
    fn check_n(&self, n: usize) -> Result<()> {
        if n != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), found: n });
        }
        Ok(())
    }

    pub fn transform(&self, f: &PayoffFn<T>) -> Result<FourierSpectrum<T>> {
        self.check_n(f.n())?;
        let blocks = self
            .irreps()
            .par_iter()
            .map(|y| Ok(SpectrumBlock { shape: y.shape().clone(), matrix: block_transform(y, f)? }))
            .collect::<Result<Vec<_>>>()?;
        Ok(FourierSpectrum { n: f.n(), blocks })
    }

    /// `f̂(λ)` for a single partition.
    pub fn transform_block(&self, f: &PayoffFn<T>, shape: &Partition) -> Result<DMatrix<T>> {
        self.check_n(f.n())?;
        block_transform(self.get(shape)?, f)
    }

    pub fn inverse(&self, spectrum: &FourierSpectrum<T>) -> Result<PayoffFn<T>> {
        self.check_n(spectrum.n())?;
        let n = spectrum.n();
        let len = factorial(n) as usize;
        let order = T::from_usize_lossy(len);
        let parts = self
            .irreps()
            .par_iter()
            .zip(spectrum.blocks())
            .map(|(y, b)| {
                let mut out = vec![T::zero(); len];
                let scale = T::from_usize_lossy(y.dim()) / order;
                block_inverse_into(y, &b.matrix, scale, &mut out)?;
                Ok(out)
            })
            .collect::<Result<Vec<_>>>()?;
        // fixed summation order keeps results bit-reproducible
        let mut values = vec![T::zero(); len];
        for part in parts {
            for (v, x) in values.iter_mut().zip(part) {
                *v += x;
            }
        }
        PayoffFn::new(n, values)
    }

    /// `f^{=λ}(π) = (d_λ/n!) Tr[f̂(λ) ρ^λ(π)ᵀ]`.
    pub fn isotypic_project(&self, f: &PayoffFn<T>, shape: &Partition) -> Result<PayoffFn<T>> {
        self.check_n(f.n())?;
        let y = self.get(shape)?;
        let block = block_transform(y, f)?;
        let mut out = PayoffFn::zeros(f.n())?;
        let scale = T::from_usize_lossy(y.dim()) / T::from_usize_lossy(f.len());
        block_inverse_into(y, &block, scale, out.values_mut())?;
        Ok(out)
    }

    pub fn degree(&self, f: &PayoffFn<T>, tol: T) -> Result<usize> {
        let spectrum = self.transform(f)?;
        degree_of_spectrum(&spectrum, f, tol)
    }

    /// `f^{≤t}`: the isotypes with `n - λ_1 ≤ t`.
    pub fn truncate_low(&self, f: &PayoffFn<T>, t: usize) -> Result<PayoffFn<T>> {
        let spectrum = self.transform(f)?;
        self.inverse(&spectrum.filter_blocks(|l| l.level() <= t))
    }

    /// `f^{>t} = f - f^{≤t}`.
    pub fn truncate_high(&self, f: &PayoffFn<T>, t: usize) -> Result<PayoffFn<T>> {
        f.sub(&self.truncate_low(f, t)?)
    }

    /// Sum of the isotypic components whose level lies in `(low, high]`.
    pub fn band(&self, f: &PayoffFn<T>, low: usize, high: usize) -> Result<PayoffFn<T>> {
        let spectrum = self.transform(f)?;
        self.inverse(&spectrum.filter_blocks(|l| l.level() > low && l.level() <= high))
    }

    pub fn uncertainty_check(&self, f: &PayoffFn<T>) -> Result<UncertaintyCheck<T>> {
        if f.is_zero() {
            return Err(Error::Degenerate("uncertainty ratio of the zero function".into()));
        }
        let summary = schatten_summary(&self.transform(f)?);
        Ok(uncertainty_from_parts(f, &summary))
    }
}

pub(crate) fn uncertainty_from_parts<T: Real>(f: &PayoffFn<T>, summary: &SchattenSummary<T>) -> UncertaintyCheck<T> {
    let lhs_ratio = f.norm1() / f.norm_inf();
    let rhs_ratio = summary.inverse_k_ratio();
    let product = lhs_ratio * rhs_ratio;
    let group_order = T::from_usize_lossy(f.len());
    let holds = product >= group_order * (T::one() - T::from_f64_lossy(UNCERTAINTY_SLACK));
    UncertaintyCheck { lhs_ratio, rhs_ratio, product, group_order, holds }
}

/// Boolean degree read off an already computed spectrum of `f`.
pub fn degree_of_spectrum<T: Real>(spectrum: &FourierSpectrum<T>, f: &PayoffFn<T>, tol: T) -> Result<usize> {
    if f.is_zero() {
        return Err(Error::UndefinedDegree);
    }
    let threshold = tol * f.norm2_squared().sqrt();
    spectrum
        .blocks()
        .iter()
        .filter(|b| b.matrix.norm() > threshold)
        .map(|b| b.shape.level())
        .max()
        .ok_or(Error::UndefinedDegree)
}

pub fn schatten_summary<T: Real>(spectrum: &FourierSpectrum<T>) -> SchattenSummary<T> {
    let per_block: Vec<(Partition, Vec<T>)> = spectrum
        .blocks()
        .iter()
        .map(|b| {
            let mut sv: Vec<T> = b.matrix.singular_values().iter().copied().collect();
            sv.sort_by(|a, b| b.partial_cmp(a).expect("singular values are finite"));
            (b.shape.clone(), sv)
        })
        .collect();
    let mut s1 = T::zero();
    let mut sinf = T::zero();
    for (shape, sv) in &per_block {
        let d = T::from_u64(shape.dim()).expect("dim fits");
        s1 += d * sv.iter().fold(T::zero(), |a, &b| a + b);
        if let Some(&top) = sv.first() {
            sinf = sinf.max(top);
        }
    }
    SchattenSummary { s1, sinf, per_block }
}

pub fn transform<T: Real>(f: &PayoffFn<T>) -> Result<FourierSpectrum<T>> {
    RepresentationTable::new(f.n())?.transform(f)
}

pub fn inverse<T: Real>(spectrum: &FourierSpectrum<T>) -> Result<PayoffFn<T>> {
    RepresentationTable::new(spectrum.n())?.inverse(spectrum)
}

pub fn isotypic_project<T: Real>(f: &PayoffFn<T>, shape: &Partition) -> Result<PayoffFn<T>> {
    if shape.n() != f.n() {
        return Err(Error::DimensionMismatch { expected: f.n(), found: shape.n() });
    }
    RepresentationTable::new(f.n())?.isotypic_project(f, shape)
}

pub fn degree<T: Real>(f: &PayoffFn<T>, tol: T) -> Result<usize> {
    if f.is_zero() {
        return Err(Error::UndefinedDegree);
    }
    RepresentationTable::new(f.n())?.degree(f, tol)
}

pub fn truncate_low<T: Real>(f: &PayoffFn<T>, t: usize) -> Result<PayoffFn<T>> {
    RepresentationTable::new(f.n())?.truncate_low(f, t)
}

pub fn truncate_high<T: Real>(f: &PayoffFn<T>, t: usize) -> Result<PayoffFn<T>> {
    RepresentationTable::new(f.n())?.truncate_high(f, t)
}

pub fn uncertainty_check<T: Real>(f: &PayoffFn<T>) -> Result<UncertaintyCheck<T>> {
    RepresentationTable::new(f.n())?.uncertainty_check(f)
}
