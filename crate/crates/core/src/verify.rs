//! Deterministic verification suites over seeded corpora.
//!
//! Each suite returns a [`SuiteReport`] whose checks are theorem-backed and
//! gate success, and whose trends are informational only.

use std::fmt;
use std::str::FromStr;

use rand::{seq::index::sample, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cayley::{operator_matrix, spectrum_report, symmetric_eigenvalues, symmetrize, Normalization, SymmetricSet};
use crate::error::{Error, Result};
use crate::fairness::{claim1_report, claim2_report, lambda_plus, lambda_star, uncertainty_upper_bound};
use crate::intersecting::{stabilizer_set, verify_indicator_degree};
use crate::payoff_fn::{OrderingSet, PayoffFn};
use crate::payoffs::{
    cfmm_payoff, indicator_payoff, junta_payoff, liquidation_payoff, random_payoff, CfmmModel, JuntaSpec,
    LiquidationModel, RandomDist,
};
use crate::perm::{factorial, Permutation};
use crate::repr::RepresentationTable;
use crate::sequencing::{run_pipeline, simulate, LatencyModel, VoteProfile};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Uncertainty,
    Eigenvalue,
    IndicatorDegree,
    Claim1,
    Claim2,
    Roundtrip,
}

impl Suite {
    pub const ALL: [Suite; 6] =
        [Suite::Uncertainty, Suite::Eigenvalue, Suite::IndicatorDegree, Suite::Claim1, Suite::Claim2, Suite::Roundtrip];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Uncertainty => "uncertainty",
            Suite::Eigenvalue => "eigenvalue",
            Suite::IndicatorDegree => "indicator_degree",
            Suite::Claim1 => "claim1",
            Suite::Claim2 => "claim2",
            Suite::Roundtrip => "roundtrip",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidSpec(format!("unknown suite {s:?}")))
    }
}

/// Aggregated outcome of one family of checks.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub total: usize,
    pub failures: usize,
    /// Worst observed value of the checked quantity.
    pub worst: f64,
    /// Limit the quantity is compared against.
    pub threshold: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Accumulates `value ≤ threshold` (or `≥` when `lower` is set) comparisons.
struct Tally {
    name: String,
    threshold: f64,
    lower: bool,
    total: usize,
    failures: usize,
    worst: Option<f64>,
}

impl Tally {
    fn at_most(name: &str, threshold: f64) -> Self {
        Self { name: name.into(), threshold, lower: false, total: 0, failures: 0, worst: None }
    }

    fn at_least(name: &str, threshold: f64) -> Self {
        Self { lower: true, ..Self::at_most(name, threshold) }
    }

    fn push(&mut self, value: f64) {
        self.total += 1;
        let ok = if self.lower { value >= self.threshold } else { value <= self.threshold };
        if !ok || value.is_nan() {
            self.failures += 1;
        }
        self.worst = Some(match self.worst {
            None => value,
            Some(w) if self.lower => w.min(value),
            Some(w) => w.max(value),
        });
    }

    fn push_bool(&mut self, ok: bool) {
        self.push(if ok { 1.0 } else { 0.0 });
    }

    fn finish(self) -> Check {
        Check {
            name: self.name,
            total: self.total,
            failures: self.failures,
            worst: self.worst.unwrap_or(f64::NAN),
            threshold: self.threshold,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Trend {
    pub name: String,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub n: usize,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub trends: Vec<Trend>,
    pub passed: bool,
}

impl SuiteReport {
    fn new(suite: Suite, n: usize, seed: u64, checks: Vec<Check>, trends: Vec<Trend>) -> Self {
        let passed = checks.iter().all(Check::passed);
        Self { suite, n, seed, checks, trends, passed }
    }
}

fn trend(name: impl Into<String>, value: f64) -> Trend {
    Trend { name: name.into(), value }
}

/// Named payoffs from every generator family at size `n`.
pub fn payoff_corpus(n: usize, seed: u64) -> Result<Vec<(String, PayoffFn<f64>)>> {
    let mut out = Vec::new();
    let deltas: Vec<f64> =
        (0..n).map(|i| if i % 2 == 0 { (i / 2 + 1) as f64 } else { -((i / 2 + 1) as f64) }).collect();
    for (gamma, beta) in [(0.01, 1.0), (0.1, 0.5)] {
        let m = CfmmModel::new(deltas.clone(), 100.0, gamma, beta)?;
        out.push((format!("cfmm(gamma={gamma},beta={beta})"), cfmm_payoff(&m)?));
    }
    if n.is_multiple_of(2) {
        let k = n / 2;
        for c in 1..k as i64 {
            out.push((format!("liquidation(k={k},c={c})"), liquidation_payoff(&LiquidationModel::new(k, c, 100.0)?)?));
        }
    }
    for k in 0..=2.min(n - 1) {
        let pairs: Vec<(usize, usize)> = (1..=k).map(|i| (i, n + 1 - i)).collect();
        out.push((format!("junta(k={k})"), junta_payoff(&[JuntaSpec::new(pairs, 1.0)], n)?));
    }
    if n >= 3 {
        let terms = [JuntaSpec::new(vec![(1, 2)], 2.0), JuntaSpec::new(vec![(2, 3), (3, 1)], 1.5)];
        out.push(("junta(mixed)".into(), junta_payoff(&terms, n)?));
    }
    out.push((format!("random(seed={seed})"), random_payoff(n, seed, RandomDist::Uniform01)?));
    Ok(out)
}

/// Stabilizer sets and simulated fair-ordering sets at size `n`.
pub fn set_corpus(n: usize, seed: u64) -> Result<Vec<(String, OrderingSet)>> {
    let mut out = Vec::new();
    for t in 0..=3.min(n - 1) {
        let pairs: Vec<(usize, usize)> = (1..=t).map(|i| (i, (i % n) + 1)).collect();
        out.push((format!("stabilizer(t={t})"), stabilizer_set(n, &pairs)?));
    }
    let mut profiles: Vec<(String, VoteProfile)> = Vec::new();
    for validators in [3, 5, 9] {
        let s = seed.wrapping_add(validators as u64);
        profiles.push((format!("fair(iid,v={validators},seed={s})"), simulate(n, validators, LatencyModel::IidShuffle { seed: s })?));
    }
    if n >= 3 {
        profiles.push(("fair(adversarial)".into(), simulate(n, n, LatencyModel::AdversarialCycle)?));
    }
    profiles.push(("fair(unanimous)".into(), VoteProfile::unanimous(Permutation::identity(n), 3)?));
    for (name, v) in profiles {
        out.push((name, run_pipeline(&v)?.set));
    }
    Ok(out)
}

pub fn run_suite(suite: Suite, n: usize, seed: u64, tol: f64) -> Result<SuiteReport> {
    if n < 2 {
        return Err(Error::InvalidSpec("verification suites need n ≥ 2".into()));
    }
    let table = RepresentationTable::<f64>::new(n)?;
    let (checks, trends) = match suite {
        Suite::Roundtrip => roundtrip(&table, seed)?,
        Suite::Uncertainty => uncertainty(&table, seed)?,
        Suite::Eigenvalue => eigenvalue(&table, seed)?,
        Suite::IndicatorDegree => indicator_degree(n, tol)?,
        Suite::Claim1 => claim1(&table, seed, tol)?,
        Suite::Claim2 => claim2(&table, tol)?,
    };
    Ok(SuiteReport::new(suite, n, seed, checks, trends))
}

type Parts = (Vec<Check>, Vec<Trend>);

fn roundtrip(table: &RepresentationTable<f64>, seed: u64) -> Result<Parts> {
    let n = table.n();
    let count = if n <= 5 { 20 } else { 3 };
    let mut err = Tally::at_most("roundtrip_max_abs_error", 1e-9);
    let mut planch = Tally::at_most("plancherel_relative_error", 1e-9);
    for i in 0..count {
        let f = random_payoff::<f64>(n, seed.wrapping_add(i), RandomDist::Uniform01)?;
        let spec = table.transform(&f)?;
        err.push(table.inverse(&spec)?.max_abs_diff(&f)?);
        let lhs = f.norm2_squared();
        planch.push((spec.plancherel_energy() - lhs).abs() / lhs);
    }
    Ok((vec![err.finish(), planch.finish()], vec![]))
}

fn uncertainty(table: &RepresentationTable<f64>, seed: u64) -> Result<Parts> {
    let n = table.n();
    let order = factorial(n) as f64;
    let floor = order * (1.0 - crate::fourier::UNCERTAINTY_SLACK);
    let mut random = Tally::at_least("random_product_over_floor", 1.0);
    let mut min_ratio = f64::INFINITY;
    for i in 0..100 {
        let f = random_payoff::<f64>(n, seed.wrapping_add(i), RandomDist::Uniform01)?;
        let u = table.uncertainty_check(&f)?;
        random.push(u.product / floor);
        min_ratio = min_ratio.min(u.product / order);
    }
    let mut gens = Tally::at_least("generator_product_over_floor", 1.0);
    for (_, f) in payoff_corpus(n, seed)? {
        if !f.is_zero() {
            gens.push(table.uncertainty_check(&f)?.product / floor);
        }
    }
    let mut exact = Tally::at_most("delta_constant_relative_gap", 1e-12);
    for f in [PayoffFn::delta(&Permutation::identity(n))?, PayoffFn::constant(n, 2.5)?] {
        exact.push((table.uncertainty_check(&f)?.product - order).abs() / order);
    }
    Ok((vec![random.finish(), gens.finish(), exact.finish()], vec![trend("random_min_product_over_order", min_ratio)]))
}

/// Symmetric generating sets: identity, transpositions and seeded random sets.
pub fn generator_corpus(n: usize, seed: u64) -> Result<Vec<(String, SymmetricSet)>> {
    let order = factorial(n) as usize;
    let mut out = vec![
        ("identity".to_string(), SymmetricSet::new(OrderingSet::new(n, vec![0])?)?),
        ("transpositions".to_string(), SymmetricSet::transpositions(n)?),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..3 {
        let k = (i + 1).min(order);
        let ranks = sample(&mut rng, order, k).into_iter().map(|r| r as u64).collect();
        out.push((format!("random{i}"), symmetrize(&OrderingSet::new(n, ranks)?)?));
    }
    Ok(out)
}

/// Largest gap between the brute-force spectrum of `T_F` and the block
/// eigenvalues repeated `d_λ` times.
pub fn block_consistency_residual(table: &RepresentationTable<f64>, generators: &SymmetricSet) -> Result<f64> {
    let brute = symmetric_eigenvalues(&operator_matrix::<f64>(generators, Normalization::Averaging)?);
    let report = spectrum_report(table, generators)?;
    let mut blocks: Vec<f64> = report
        .blocks
        .iter()
        .flat_map(|b| b.operator_eigenvalues.iter().flat_map(move |&e| std::iter::repeat_n(e, b.dim as usize)))
        .collect();
    blocks.sort_by(|a, b| b.total_cmp(a));
    if blocks.len() != brute.len() {
        return Err(Error::DimensionMismatch { expected: brute.len(), found: blocks.len() });
    }
    Ok(brute.iter().zip(&blocks).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
}

fn eigenvalue(table: &RepresentationTable<f64>, seed: u64) -> Result<Parts> {
    let n = table.n();
    let mut consistency = Tally::at_most("block_spectrum_residual", 1e-8);
    let mut averaging = Tally::at_most("averaging_bound_violations", 0.0);
    let mut trends = Vec::new();
    for (name, f) in generator_corpus(n, seed)? {
        if n <= 6 {
            consistency.push(block_consistency_residual(table, &f)?);
        }
        let rep = spectrum_report(table, &f)?;
        averaging.push(rep.averaging_violations as f64);
        trends.push(trend(format!("{name}.adjacency_bound_violations"), rep.adjacency_violations as f64));
    }
    let mut checks = vec![averaging.finish()];
    if n <= 6 {
        checks.insert(0, consistency.finish());
    }
    Ok((checks, trends))
}

fn indicator_degree(n: usize, tol: f64) -> Result<Parts> {
    let mut claim = Tally::at_least("stabilizer_degree_claim", 1.0);
    let mut gate = Tally::at_least("stabilizer_size_gate", 1.0);
    for t in 1..=3.min(n - 1) {
        for pairs in injective_pairs(n, t) {
            let set = stabilizer_set(n, &pairs)?;
            let chk = verify_indicator_degree(&set, tol)?;
            claim.push_bool(chk.deg_1a >= chk.t_checked);
            gate.push_bool(chk.size_gate);
        }
    }
    Ok((vec![claim.finish(), gate.finish()], vec![]))
}

/// Every set of `t` constraints `(i, j)` with increasing distinct `i` and distinct `j`.
fn injective_pairs(n: usize, t: usize) -> Vec<Vec<(usize, usize)>> {
    fn rec(n: usize, t: usize, start: usize, used: &mut Vec<bool>, cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        if cur.len() == t {
            out.push(cur.clone());
            return;
        }
        for i in start..=n {
            for j in 1..=n {
                if !used[j] {
                    used[j] = true;
                    cur.push((i, j));
                    rec(n, t, i + 1, used, cur, out);
                    cur.pop();
                    used[j] = false;
                }
            }
        }
    }
    let mut out = Vec::new();
    rec(n, t, 1, &mut vec![false; n + 1], &mut Vec::new(), &mut out);
    out
}

fn claim1(table: &RepresentationTable<f64>, seed: u64, tol: f64) -> Result<Parts> {
    let n = table.n();
    let mut bound = Tally::at_most("uncertainty_fairness_bound_excess", 1e-9);
    let mut identity = Tally::at_most("connecting_identity_residual", 1e-12);
    let mut applicable = 0usize;
    let mut within_form = 0usize;
    let sets = set_corpus(n, seed)?;
    for (_, f) in payoff_corpus(n, seed)? {
        for (_, a) in &sets {
            if f.restrict(a)?.is_zero() {
                continue;
            }
            let u = uncertainty_upper_bound(table, &f, a)?;
            bound.push(u.lambda_plus - u.bound);
            if let Ok(ls) = lambda_star(&f, a) {
                let max = u.lambda_plus + crate::fairness::localized_mean(&f, a)?;
                identity.push((lambda_plus(&f, a)? - max * (1.0 - 1.0 / ls)).abs() / max.abs().max(1.0));
            }
            if f.is_zero() {
                continue;
            }
            let r = claim1_report(table, &f, a, tol)?;
            if r.applicable {
                applicable += 1;
                within_form += usize::from(r.lambda_plus <= r.bound_form + 1e-9);
            }
        }
    }
    let mut trends = vec![trend("claim1_applicable_pairs", applicable as f64), trend("claim1_within_bound_form", within_form as f64)];
    trends.extend(pipeline_trend(n, seed)?);
    Ok((vec![bound.finish(), identity.finish()], trends))
}

/// Mean `t_max` of simulated fair-ordering sets as the validator count grows.
fn pipeline_trend(n: usize, seed: u64) -> Result<Vec<Trend>> {
    let mut out = Vec::new();
    for validators in [1, 3, 7, 15] {
        let mut cycles = 0usize;
        let mut t_sum = 0usize;
        let runs = 10;
        for i in 0..runs {
            let v = simulate(n, validators, LatencyModel::IidShuffle { seed: seed.wrapping_add(i) })?;
            let r = run_pipeline(&v)?;
            cycles += usize::from(r.stats.has_cycle);
            t_sum += r.profile.t_max;
        }
        out.push(trend(format!("pipeline(v={validators}).cycle_rate"), cycles as f64 / runs as f64));
        out.push(trend(format!("pipeline(v={validators}).mean_t_max"), t_sum as f64 / runs as f64));
    }
    Ok(out)
}

/// Point stabilizer as `A` against the indicator of a three-point stabilizer.
pub fn claim2_junta_example(n: usize) -> Result<(OrderingSet, PayoffFn<f64>)> {
    if n < 4 {
        return Err(Error::InvalidSpec("the junta example needs n ≥ 4".into()));
    }
    let a = stabilizer_set(n, &[(1, 1)])?;
    let b = stabilizer_set(n, &[(1, 1), (2, 2), (3, 3)])?;
    Ok((a, indicator_payoff(&b)?))
}

fn claim2(table: &RepresentationTable<f64>, tol: f64) -> Result<Parts> {
    let n = table.n();
    let mut applicable = Tally::at_least("junta_example_applicable", 1.0);
    let mut finite = Tally::at_least("implied_cprime_finite_positive", 1.0);
    let mut trends = Vec::new();
    if n >= 4 {
        let (a, f) = claim2_junta_example(n)?;
        let r = claim2_report(table, &f, &a, tol)?;
        applicable.push_bool(r.applicable);
        let c = r.implied_cprime;
        finite.push_bool(c.is_some_and(|c| c.is_finite() && c > 0.0));
        trends.push(trend("junta_example.lambda_ratio", r.lambda_ratio()));
        trends.push(trend("junta_example.implied_cprime", c.unwrap_or(f64::NAN)));
    }
    let d = PayoffFn::delta(&Permutation::identity(n))?;
    let r = claim2_report(table, &d, &OrderingSet::full(n)?, tol)?;
    trends.push(trend("delta.implied_cprime", r.implied_cprime.unwrap_or(f64::NAN)));
    let checks = if n >= 4 { vec![applicable.finish(), finite.finish()] } else { vec![] };
    Ok((checks, trends))
}
