//! Fairness functionals of a payoff over a set of valid orderings, the
//! uncertainty-based upper bound, and fixed-n evidence for the intersection
//! claims.

use serde::Serialize;

use crate::cayley::{spectrum_report, symmetrize};
use crate::error::{Error, Result};
use crate::fourier::{degree_of_spectrum, schatten_summary};
use crate::intersecting::{intersection_profile, size_gate};
use crate::partition::partitions_of;
use crate::payoff_fn::{OrderingSet, PayoffFn};
use crate::payoffs::indicator_payoff;
use crate::perm::factorial;
use crate::repr::RepresentationTable;
use crate::scalar::Real;

/// Relative tolerance for the exact-case classifications.
pub const CLASSIFY_TOL: f64 = 1e-12;

fn check_pair<T: Real>(f: &PayoffFn<T>, set: &OrderingSet) -> Result<()> {
    if set.n() != f.n() {
        return Err(Error::DimensionMismatch { expected: f.n(), found: set.n() });
    }
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    Ok(())
}

fn group_order<T: Real>(n: usize) -> T {
    T::from_u64(factorial(n)).expect("n! fits")
}

fn max_on<T: Real>(f: &PayoffFn<T>, set: &OrderingSet) -> T {
    let v = f.values();
    set.members().iter().map(|&r| v[r as usize]).fold(v[set.members()[0] as usize], |a, b| a.max(b))
}

fn sum_on<T: Real>(f: &PayoffFn<T>, set: &OrderingSet) -> T {
    let v = f.values();
    set.members().iter().fold(T::zero(), |acc, &r| acc + v[r as usize])
}

/// `E[f·1_A] = (1/n!) Σ_{π∈A} f(π)`.
pub fn localized_mean<T: Real>(f: &PayoffFn<T>, set: &OrderingSet) -> Result<T> {
    check_pair(f, set)?;
    Ok(sum_on(f, set) / group_order(f.n()))
}

/// `max_{π∈A} f(π) − E[f·1_A]`, where the expectation is over all of `S_n`.
pub fn lambda_plus<T: Real>(f: &PayoffFn<T>, set: &OrderingSet) -> Result<T> {
    check_pair(f, set)?;
    Ok(max_on(f, set) - sum_on(f, set) / group_order(f.n()))
}

/// `max_{π∈A} f(π)` minus the mean of `f` over `A` itself.
pub fn lambda_plus_conditional<T: Real>(f: &PayoffFn<T>, set: &OrderingSet) -> Result<T> {
    check_pair(f, set)?;
    Ok(max_on(f, set) - sum_on(f, set) / T::from_usize_lossy(set.len()))
}

/// `max_{π∈A} f(π) / E[f·1_A]`.
pub fn lambda_star<T: Real>(f: &PayoffFn<T>, set: &OrderingSet) -> Result<T> {
    let mean = localized_mean(f, set)?;
    if mean <= T::zero() {
        return Err(Error::Degenerate(format!("E[f·1_A] = {mean} is not positive")));
    }
    Ok(max_on(f, set) / mean)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    PerfectlyFair,
    MaximallyUnfair,
    Other,
}

fn classify_values<T: Real>(lp: T, max: T, n: usize) -> Classification {
    let tol = T::from_f64_lossy(CLASSIFY_TOL) * T::one().max(max.abs());
    let saturated = max * (T::one() - T::one() / group_order::<T>(n));
    if lp.abs() <= tol {
        Classification::PerfectlyFair
    } else if (lp - saturated).abs() <= tol {
        Classification::MaximallyUnfair
    } else {
        Classification::Other
    }
}

pub fn classify<T: Real>(f: &PayoffFn<T>, set: &OrderingSet) -> Result<Classification> {
    let lp = lambda_plus(f, set)?;
    Ok(classify_values(lp, max_on(f, set), f.n()))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct UncertaintyBound<T: Real> {
    /// `(1 − sinf(ĝ)/s1(ĝ))·‖g‖_∞` for `g = f·1_A`.
    pub bound: T,
    pub lambda_plus: T,
    /// `bound − lambda_plus`.
    pub slack: T,
}

pub fn uncertainty_upper_bound<T: Real>(
    table: &RepresentationTable<T>,
    f: &PayoffFn<T>,
    set: &OrderingSet,
) -> Result<UncertaintyBound<T>> {
    let lambda_plus = lambda_plus(f, set)?;
    let g = f.restrict(set)?;
    if g.is_zero() {
        return Err(Error::Degenerate("f·1_A vanishes identically".into()));
    }
    let summary = schatten_summary(&table.transform(&g)?);
    let bound = (T::one() - summary.k_ratio()) * g.norm_inf();
    Ok(UncertaintyBound { bound, lambda_plus, slack: bound - lambda_plus })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct FairnessReport<T: Real> {
    pub lambda_plus: T,
    /// Absent when `E[f·1_A] ≤ 0`.
    pub lambda_star: Option<T>,
    pub max_value: T,
    pub mean_value: T,
    pub classification: Classification,
    /// Absent when `f·1_A` vanishes.
    pub bound_upper: Option<T>,
    /// `(1 − 1/n!)·max_value`.
    pub bound_trivial: T,
    /// `|Λ⁺ − max·(1 − 1/Λ*)|`, when `Λ*` is defined.
    pub identity_residual: Option<T>,
}

pub fn fairness_report<T: Real>(
    table: &RepresentationTable<T>,
    f: &PayoffFn<T>,
    set: &OrderingSet,
) -> Result<FairnessReport<T>> {
    let lp = lambda_plus(f, set)?;
    let max_value = max_on(f, set);
    let mean_value = localized_mean(f, set)?;
    let lambda_star = lambda_star(f, set).ok();
    let bound_upper = match uncertainty_upper_bound(table, f, set) {
        Ok(u) => Some(u.bound),
        Err(Error::Degenerate(_)) => None,
        Err(e) => return Err(e),
    };
    let identity_residual = lambda_star.map(|ls| (lp - max_value * (T::one() - T::one() / ls)).abs());
    Ok(FairnessReport {
        lambda_plus: lp,
        lambda_star,
        max_value,
        mean_value,
        classification: classify_values(lp, max_value, f.n()),
        bound_upper,
        bound_trivial: max_value * (T::one() - T::one() / group_order::<T>(f.n())),
        identity_residual,
    })
}

/// `Σ d_λ²` over partitions of level at most `s`.
pub fn dimension_square_sum(n: usize, s: usize) -> u64 {
    partitions_of(n).iter().filter(|l| l.level() <= s).map(|l| l.dim() * l.dim()).sum()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct Claim1Report<T: Real> {
    /// Degree of `f`.
    pub s: usize,
    pub t_max: usize,
    /// `t_max ≥ s`.
    pub applicable: bool,
    /// `sinf/s1` of `f̂`.
    pub k_ratio: T,
    pub d_sq_sum: u64,
    /// `(1 − 1/d_sq_sum)·‖f·1_A‖_∞`.
    pub bound_form: T,
    /// Exact uncertainty bound on `f·1_A`, absent when it vanishes.
    pub uncertainty_bound: Option<T>,
    pub lambda_plus: T,
}

pub fn claim1_report<T: Real>(
    table: &RepresentationTable<T>,
    f: &PayoffFn<T>,
    set: &OrderingSet,
    tol: T,
) -> Result<Claim1Report<T>> {
    check_pair(f, set)?;
    let spectrum = table.transform(f)?;
    let s = degree_of_spectrum(&spectrum, f, tol)?;
    let t_max = intersection_profile(set)?.t_max;
    let d_sq_sum = dimension_square_sum(f.n(), s);
    let g_inf = f.restrict(set)?.norm_inf();
    let d = T::from_u64(d_sq_sum).expect("fits");
    let uncertainty_bound = match uncertainty_upper_bound(table, f, set) {
        Ok(u) => Some(u.bound),
        Err(Error::Degenerate(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(Claim1Report {
        s,
        t_max,
        applicable: t_max >= s,
        k_ratio: schatten_summary(&spectrum).k_ratio(),
        d_sq_sum,
        bound_form: (T::one() - T::one() / d) * g_inf,
        uncertainty_bound,
        lambda_plus: lambda_plus(f, set)?,
    })
}

/// Right-hand side `(1 − c'·(s − t − 1)/(n − t)!)·‖f·1_A‖_∞` as a function of `c'`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct Claim2Rhs<T: Real> {
    pub norm_inf: T,
    /// `s − t − 1`, possibly negative.
    pub gap: i64,
    /// `(n − t)!`.
    pub denominator: u64,
}

impl<T: Real> Claim2Rhs<T> {
    pub fn eval(&self, cprime: T) -> T {
        let gap = T::from_i64(self.gap).expect("fits");
        let den = T::from_u64(self.denominator).expect("fits");
        (T::one() - cprime * gap / den) * self.norm_inf
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct Claim2Report<T: Real> {
    pub s: usize,
    pub t_max: usize,
    /// `|A| ≥ (n − t_max)!`.
    pub size_gate: bool,
    /// `t_max < s` and the size gate holds.
    pub applicable: bool,
    pub lambda_plus: T,
    pub rhs_template: Claim2Rhs<T>,
    /// `(1 − Λ⁺/‖f·1_A‖_∞)·(n − t)!/(s − t − 1)`, absent when `s − t − 1 ≤ 0`.
    pub implied_cprime: Option<T>,
}

impl<T: Real> Claim2Report<T> {
    /// `Λ⁺ / ‖f·1_A‖_∞`.
    pub fn lambda_ratio(&self) -> T {
        self.lambda_plus / self.rhs_template.norm_inf
    }
}

pub fn claim2_report<T: Real>(
    table: &RepresentationTable<T>,
    f: &PayoffFn<T>,
    set: &OrderingSet,
    tol: T,
) -> Result<Claim2Report<T>> {
    check_pair(f, set)?;
    let norm_inf = f.restrict(set)?.norm_inf();
    if norm_inf <= T::zero() {
        return Err(Error::Degenerate("f·1_A vanishes identically".into()));
    }
    let n = f.n();
    let s = table.degree(f, tol)?;
    let t_max = intersection_profile(set)?.t_max;
    let gate = size_gate(n, t_max, set.len());
    let lp = lambda_plus(f, set)?;
    let gap = s as i64 - t_max as i64 - 1;
    let denominator = factorial(n.saturating_sub(t_max));
    let implied_cprime = (gap > 0).then(|| {
        (T::one() - lp / norm_inf) * T::from_u64(denominator).expect("fits") / T::from_i64(gap).expect("fits")
    });
    Ok(Claim2Report {
        s,
        t_max,
        size_gate: gate,
        applicable: t_max < s && gate,
        lambda_plus: lp,
        rhs_template: Claim2Rhs { norm_inf, gap, denominator },
        implied_cprime,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct TruncationDiagnostic<T: Real> {
    pub t: usize,
    pub s: usize,
    /// `‖Σ (1_A)^{=λ}‖_1` over levels `n − λ₁ ∈ (t, s]`.
    pub one_norm_mid: T,
    /// Sum over the same band of the top eigenvalue of the Gram block of `T_Â`.
    pub eigensum: T,
    pub per_block: Vec<(crate::partition::Partition, T)>,
    /// `‖f·1_A‖_∞`, echoed for context.
    pub g_norm_inf: T,
}

pub fn truncation_diagnostic<T: Real>(
    table: &RepresentationTable<T>,
    f: &PayoffFn<T>,
    set: &OrderingSet,
    t: usize,
    s: usize,
) -> Result<TruncationDiagnostic<T>> {
    check_pair(f, set)?;
    let n = f.n();
    if !(t < s && s < n) {
        return Err(Error::InvalidSpec(format!("need t < s ≤ n − 1, got t = {t}, s = {s}, n = {n}")));
    }
    let indicator = indicator_payoff::<T>(set)?;
    let one_norm_mid = table.band(&indicator, t, s)?.norm1();
    let cayley = spectrum_report(table, &symmetrize(set)?)?;
    let per_block: Vec<_> = cayley
        .blocks
        .into_iter()
        .filter(|b| (t + 1..=s).contains(&b.shape.level()))
        .map(|b| (b.shape, b.gram_eigenvalues[0]))
        .collect();
    let eigensum = per_block.iter().fold(T::zero(), |acc, (_, m)| acc + *m);
    Ok(TruncationDiagnostic { t, s, one_norm_mid, eigensum, per_block, g_norm_inf: f.restrict(set)?.norm_inf() })
}
