//! t-intersection structure of ordering sets.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fourier::degree;
use crate::payoff_fn::OrderingSet;
use crate::payoffs::indicator_payoff;
use crate::perm::{factorial, Permutation};
use crate::scalar::Real;

/// Sets larger than this are scanned cross-bucket first (bucketed by the
/// image of point 1), since only cross-bucket pairs can agree nowhere.
const BUCKET_SCAN_THRESHOLD: usize = 1000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntersectionProfile {
    /// Largest `t` such that every pair of members agrees on `t` points.
    pub t_max: usize,
    /// One-based `(i, j)` with `π(i) = j` for every member.
    pub common_pairs: Vec<(usize, usize)>,
    pub size: usize,
    /// `|A| ≥ (n - t_max)!`.
    pub size_gate: bool,
}

pub fn intersection_profile(set: &OrderingSet) -> Result<IntersectionProfile> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let n = set.n();
    let perms: Vec<Permutation> = set.permutations().collect();
    let t_max = if perms.len() == 1 { n } else { min_agreement(&perms) };

    let first = &perms[0];
    let common_pairs = (0..n)
        .filter(|&i| perms.iter().all(|p| p.get(i) == first.get(i)))
        .map(|i| (i + 1, first.get(i) + 1))
        .collect();

    Ok(IntersectionProfile { t_max, common_pairs, size: perms.len(), size_gate: size_gate(n, t_max, perms.len()) })
}

pub(crate) fn size_gate(n: usize, t: usize, size: usize) -> bool {
    size as u64 >= factorial(n.saturating_sub(t))
}

fn min_agreement(perms: &[Permutation]) -> usize {
    let n = perms[0].n();
    if perms.len() > BUCKET_SCAN_THRESHOLD {
        let zero_found = (0..perms.len()).into_par_iter().any(|a| {
            perms[a + 1..].iter().any(|q| q.get(0) != perms[a].get(0) && q.agreements(&perms[a]) == 0)
        });
        if zero_found {
            return 0;
        }
    }
    (0..perms.len())
        .into_par_iter()
        .map(|a| perms[a + 1..].iter().map(|q| q.agreements(&perms[a])).min().unwrap_or(n))
        .min()
        .unwrap_or(n)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndicatorDegreeCheck {
    pub t_max: usize,
    /// Intersection level the degree is compared against. Agreement on
    /// `n - 1` points forces agreement on all `n`, and no degree exceeds
    /// `n - 1`, so a singleton's `t_max = n` is compared as `n - 1`.
    pub t_checked: usize,
    pub deg_1a: usize,
    pub size_gate: bool,
    pub claim_holds: bool,
}

/// Compares `deg(1_A)` with the intersection level of `A`.
pub fn verify_indicator_degree<T: Real>(set: &OrderingSet, tol: T) -> Result<IndicatorDegreeCheck> {
    let profile = intersection_profile(set)?;
    let deg_1a = degree(&indicator_payoff::<T>(set)?, tol)?;
    let t_checked = profile.t_max.min(set.n() - 1);
    let claim_holds = !profile.size_gate || deg_1a >= t_checked;
    Ok(IndicatorDegreeCheck { t_max: profile.t_max, t_checked, deg_1a, size_gate: profile.size_gate, claim_holds })
}

/// `{π : π(i_k) = j_k for all k}` for one-based pairs.
pub fn stabilizer_set(n: usize, pairs: &[(usize, usize)]) -> Result<OrderingSet> {
    let mut seen_i = vec![false; n + 1];
    let mut seen_j = vec![false; n + 1];
    for &(i, j) in pairs {
        if !(1..=n).contains(&i) || !(1..=n).contains(&j) {
            return Err(Error::InvalidSpec(format!("pair ({i}, {j}) outside 1..={n}")));
        }
        if seen_i[i] || seen_j[j] {
            return Err(Error::InvalidSpec(format!("inconsistent constraints at ({i}, {j})")));
        }
        seen_i[i] = true;
        seen_j[j] = true;
    }
    OrderingSet::filter(n, |p| pairs.iter().all(|&(i, j)| p.get(i - 1) == j - 1))
}
