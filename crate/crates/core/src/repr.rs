//! Young's orthogonal form of the irreducible representations of `S_n`.
//!
//! Each representation `ρ^λ` acts on the span of the standard tableaux of
//! shape `λ`. The Coxeter generator `s_k = (k, k+1)` maps a tableau `T` to
//! `(1/r) T + sqrt(1 - 1/r²) T'`, where `r` is the axial distance
//! `content(k+1) - content(k)` and `T'` is `T` with `k` and `k+1` exchanged.
//! All matrices are real orthogonal, so `ρ(π⁻¹) = ρ(π)ᵀ`.

use std::collections::HashMap;

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::partition::{partitions_of, standard_tableaux, Partition, StandardTableau};
use crate::perm::{walk_adjacent, Permutation};
use crate::scalar::Real;

/// A representation matrix together with the partition it belongs to.
#[derive(Clone, Debug, PartialEq)]
pub struct IrrepMatrix<T: Real> {
    pub shape: Partition,
    pub matrix: DMatrix<T>,
}

/// Image of one Coxeter generator, stored sparsely: every basis vector has
/// a diagonal coefficient and at most one partner.
#[derive(Clone, Debug)]
struct SparseGenerator<T> {
    diag: Vec<T>,
    partner: Vec<Option<(usize, T)>>,
}

impl<T: Real> SparseGenerator<T> {
    fn to_dense(&self) -> DMatrix<T> {
        let d = self.diag.len();
        let mut m = DMatrix::zeros(d, d);
        for j in 0..d {
            m[(j, j)] = self.diag[j];
            if let Some((p, b)) = self.partner[j] {
                m[(p, j)] = b;
            }
        }
        m
    }

    /// `m ← m · G`.
    fn right_multiply(&self, m: &mut DMatrix<T>) {
        let d = self.diag.len();
        for j in 0..d {
            match self.partner[j] {
                None => {
                    if self.diag[j] != T::one() {
                        m.column_mut(j).scale_mut(self.diag[j]);
                    }
                }
                Some((p, b)) if p > j => {
                    let (a_j, a_p) = (self.diag[j], self.diag[p]);
                    for row in 0..m.nrows() {
                        let x = m[(row, j)];
                        let y = m[(row, p)];
                        m[(row, j)] = a_j * x + b * y;
                        m[(row, p)] = b * x + a_p * y;
                    }
                }
                Some(_) => {}
            }
        }
    }

    /// `m ← G · m`.
    fn left_multiply(&self, m: &mut DMatrix<T>) {
        let d = self.diag.len();
        for j in 0..d {
            match self.partner[j] {
                None => {
                    if self.diag[j] != T::one() {
                        m.row_mut(j).scale_mut(self.diag[j]);
                    }
                }
                Some((p, b)) if p > j => {
                    let (a_j, a_p) = (self.diag[j], self.diag[p]);
                    for col in 0..m.ncols() {
                        let x = m[(j, col)];
                        let y = m[(p, col)];
                        m[(j, col)] = a_j * x + b * y;
                        m[(p, col)] = b * x + a_p * y;
                    }
                }
                Some(_) => {}
            }
        }
    }
}

/// Young's orthogonal representation for a single shape, with the images
/// of all Coxeter generators built once.
#[derive(Clone, Debug)]
pub struct YoungOrthogonal<T: Real> {
    shape: Partition,
    tableaux: Vec<StandardTableau>,
    generators: Vec<SparseGenerator<T>>,
}

impl<T: Real> YoungOrthogonal<T> {
    pub fn new(shape: &Partition) -> Self {
        let n = shape.n();
        let tableaux = standard_tableaux(shape);
        let index: HashMap<&StandardTableau, usize> =
            tableaux.iter().enumerate().map(|(i, t)| (t, i)).collect();
        let generators = (1..n)
            .map(|k| {
                let mut diag = Vec::with_capacity(tableaux.len());
                let mut partner = Vec::with_capacity(tableaux.len());
                for t in &tableaux {
                    let r = t.content(k + 1) - t.content(k);
                    let r_t = T::from_isize(r).expect("axial distance fits");
                    let a = T::one() / r_t;
                    diag.push(a);
                    if r.abs() == 1 {
                        partner.push(None);
                    } else {
                        let swapped = t.swap_entries(k).expect("|r| > 1 keeps the filling standard");
                        let j = index[&swapped];
                        partner.push(Some((j, (T::one() - a * a).sqrt())));
                    }
                }
                SparseGenerator { diag, partner }
            })
            .collect();
        Self { shape: shape.clone(), tableaux, generators }
    }

    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    pub fn dim(&self) -> usize {
        self.tableaux.len()
    }

    pub fn tableaux(&self) -> &[StandardTableau] {
        &self.tableaux
    }

    /// Dense image of `s_k = (k, k+1)`, with `k` one-based in `1..n`.
    pub fn generator(&self, k: usize) -> Result<DMatrix<T>> {
        let n = self.shape.n();
        if k == 0 || k >= n {
            return Err(Error::IndexOutOfRange { index: k as u64, bound: n as u64 });
        }
        Ok(self.generators[k - 1].to_dense())
    }

    /// `ρ^λ(π)` as a product of generator images along a bubble-sort
    /// decomposition of `π`.
    pub fn evaluate(&self, p: &Permutation) -> Result<DMatrix<T>> {
        let n = self.shape.n();
        if p.n() != n {
            return Err(Error::DimensionMismatch { expected: n, found: p.n() });
        }
        let mut m = DMatrix::identity(self.dim(), self.dim());
        for k in p.bubble_sort_swaps() {
            self.generators[k].left_multiply(&mut m);
        }
        Ok(m)
    }

    /// Visits `(π, ρ^λ(π))` for every `π ∈ S_n`, updating the matrix by one
    /// sparse generator product per step. The running product is re-anchored
    /// from scratch periodically to bound drift.
    pub fn for_each_matrix<F>(&self, mut visit: F) -> Result<()>
    where
        F: FnMut(&Permutation, &DMatrix<T>),
    {
        const REANCHOR_EVERY: usize = 720;
        let d = self.dim();
        let mut m = DMatrix::<T>::identity(d, d);
        let mut steps = 0usize;
        let mut fallback: Option<Result<()>> = None;
        walk_adjacent(self.shape.n(), |p, swap| {
            if let Some(k) = swap {
                steps += 1;
                if steps.is_multiple_of(REANCHOR_EVERY) {
                    match self.evaluate(p) {
                        Ok(fresh) => m = fresh,
                        Err(e) => fallback = Some(Err(e)),
                    }
                } else {
                    self.generators[k].right_multiply(&mut m);
                }
            }
            visit(p, &m);
        })?;
        fallback.unwrap_or(Ok(()))
    }
}

/// Young's orthogonal representations for every `λ ⊢ n`, in
/// [`partitions_of`] order. Built once and shared read-only.
#[derive(Clone, Debug)]
pub struct RepresentationTable<T: Real> {
    n: usize,
    irreps: Vec<YoungOrthogonal<T>>,
}

impl<T: Real> RepresentationTable<T> {
    pub fn new(n: usize) -> Result<Self> {
        crate::perm::check_capacity(n)?;
        if n == 0 {
            return Err(Error::InvalidPartition("n must be at least 1".into()));
        }
        let irreps = partitions_of(n).par_iter().map(YoungOrthogonal::new).collect();
        Ok(Self { n, irreps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn irreps(&self) -> &[YoungOrthogonal<T>] {
        &self.irreps
    }

    pub fn get(&self, shape: &Partition) -> Result<&YoungOrthogonal<T>> {
        self.irreps.iter().find(|r| r.shape() == shape).ok_or_else(|| {
            Error::InvalidPartition(format!("{shape} is not a partition of {}", self.n))
        })
    }
}

/// Image of the adjacent transposition `(k, k+1)` under `ρ^λ`.
pub fn adjacent_generator<T: Real>(shape: &Partition, k: usize) -> Result<IrrepMatrix<T>> {
    let matrix = YoungOrthogonal::<T>::new(shape).generator(k)?;
    Ok(IrrepMatrix { shape: shape.clone(), matrix })
}

/// `ρ^λ(π)`.
pub fn evaluate<T: Real>(shape: &Partition, p: &Permutation) -> Result<IrrepMatrix<T>> {
    let matrix = YoungOrthogonal::<T>::new(shape).evaluate(p)?;
    Ok(IrrepMatrix { shape: shape.clone(), matrix })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::{enumerate, factorial};
    use rand::{seq::SliceRandom, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn part(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    fn max_abs(m: &DMatrix<f64>) -> f64 {
        m.iter().fold(0.0, |acc, x| acc.max(x.abs()))
    }

    fn random_perm(n: usize, rng: &mut ChaCha8Rng) -> Permutation {
        let mut v: Vec<usize> = (0..n).collect();
        v.shuffle(rng);
        Permutation::from_images(v).unwrap()
    }

    #[test]
    fn trivial_and_sign_generators() {
        for k in 1..4 {
            assert_eq!(adjacent_generator::<f64>(&part(&[4]), k).unwrap().matrix[(0, 0)], 1.0);
            assert_eq!(adjacent_generator::<f64>(&part(&[1, 1, 1, 1]), k).unwrap().matrix[(0, 0)], -1.0);
        }
        assert!(adjacent_generator::<f64>(&part(&[3]), 0).is_err());
        assert!(adjacent_generator::<f64>(&part(&[3]), 3).is_err());
    }

    #[test]
    fn generator_of_two_one_is_traceless_involution() {
        // χ_(2,1) on a transposition is 0 (Murnaghan–Nakayama: one 2-strip
        // removal of height 0 and one of height 1 cancel).
        let g = adjacent_generator::<f64>(&part(&[2, 1]), 1).unwrap().matrix;
        assert!((g.trace()).abs() < 1e-15);
        assert!(max_abs(&(&g * &g - DMatrix::identity(2, 2))) < 1e-15);
        assert!(max_abs(&(&g - g.transpose())) < 1e-15);
    }

    #[test]
    fn generators_satisfy_coxeter_relations() {
        for l in partitions_of(5) {
            let y = YoungOrthogonal::<f64>::new(&l);
            let d = y.dim();
            let id = DMatrix::identity(d, d);
            for k in 1..5 {
                let g = y.generator(k).unwrap();
                assert!(max_abs(&(&g * &g - &id)) < 1e-12);
                if k + 1 < 5 {
                    let h = y.generator(k + 1).unwrap();
                    assert!(max_abs(&(&g * &h * &g - &h * &g * &h)) < 1e-12);
                }
                for j in k + 2..5 {
                    let h = y.generator(j).unwrap();
                    assert!(max_abs(&(&g * &h - &h * &g)) < 1e-12);
                }
            }
        }
    }

    #[test]
    fn identity_maps_to_identity() {
        for l in partitions_of(5) {
            let m = evaluate::<f64>(&l, &Permutation::identity(5)).unwrap().matrix;
            assert_eq!(m, DMatrix::identity(l.dim() as usize, l.dim() as usize));
        }
    }

    #[test]
    fn standard_character_counts_fixed_points() {
        let y = YoungOrthogonal::<f64>::new(&part(&[4, 1]));
        for p in enumerate(5).unwrap() {
            let tr = y.evaluate(&p).unwrap().trace();
            assert!((tr - (p.fixed_points() as f64 - 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn homomorphism_and_orthogonality_on_random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 3..=6 {
            let table = RepresentationTable::<f64>::new(n).unwrap();
            let irreps = table.irreps();
            for _ in 0..200 {
                let y = &irreps[rand::Rng::random_range(&mut rng, 0..irreps.len())];
                let p = random_perm(n, &mut rng);
                let q = random_perm(n, &mut rng);
                let pq = y.evaluate(&p.compose(&q).unwrap()).unwrap();
                let rp = y.evaluate(&p).unwrap();
                let rq = y.evaluate(&q).unwrap();
                assert!(max_abs(&(pq - &rp * &rq)) <= 1e-10);
                let rinv = y.evaluate(&p.inverse()).unwrap();
                assert!(max_abs(&(rp.transpose() - &rinv)) <= 1e-10);
                let d = y.dim();
                assert!(max_abs(&(rp.transpose() * &rp - DMatrix::identity(d, d))) <= 1e-10);
            }
        }
    }

    #[test]
    fn walk_matches_direct_evaluation() {
        let y = YoungOrthogonal::<f64>::new(&part(&[3, 2, 1]));
        let mut worst = 0.0f64;
        y.for_each_matrix(|p, m| {
            worst = worst.max(max_abs(&(m - y.evaluate(p).unwrap())));
        })
        .unwrap();
        assert!(worst < 1e-12, "drift {worst}");
    }

    #[test]
    fn characters_are_orthonormal() {
        for n in 1..=5 {
            let table = RepresentationTable::<f64>::new(n).unwrap();
            let chars: Vec<Vec<f64>> = table
                .irreps()
                .iter()
                .map(|y| enumerate(n).unwrap().map(|p| y.evaluate(&p).unwrap().trace()).collect())
                .collect();
            let order = factorial(n) as f64;
            for (a, ca) in chars.iter().enumerate() {
                for (b, cb) in chars.iter().enumerate() {
                    let ip: f64 = ca.iter().zip(cb).map(|(x, y)| x * y).sum::<f64>() / order;
                    let expect = if a == b { 1.0 } else { 0.0 };
                    assert!((ip - expect).abs() <= 1e-9);
                }
            }
        }
    }

    #[test]
    fn single_precision_is_supported() {
        let y = YoungOrthogonal::<f32>::new(&part(&[2, 2]));
        let p = Permutation::from_one_line(&[2, 4, 1, 3]).unwrap();
        let m = y.evaluate(&p).unwrap();
        let err = (m.transpose() * &m - DMatrix::<f32>::identity(2, 2)).abs().max();
        assert!(err < 1e-6);
    }
}
