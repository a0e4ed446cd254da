//! Generators for the payoff families: sandwich profits on a CFMM,
//! liquidation indicators, set indicators, juntas and seeded random payoffs.

use rand::{seq::index::sample, Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::payoff_fn::{OrderingSet, PayoffFn};
use crate::perm::{check_capacity, factorial};
use crate::scalar::Real;

/// Sandwich-attack payoff on a market with multiplicative price impact.
///
/// Executing trade `Δ` at price `p` earns `beta · Δ² · p` and moves the price
/// to `p · (1 + gamma · Δ)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCfmm")]
pub struct CfmmModel {
    deltas: Vec<f64>,
    p0: f64,
    gamma: f64,
    beta: f64,
}

#[derive(Deserialize)]
struct RawCfmm {
    deltas: Vec<f64>,
    p0: f64,
    gamma: f64,
    beta: f64,
}

impl TryFrom<RawCfmm> for CfmmModel {
    type Error = Error;

    fn try_from(r: RawCfmm) -> Result<Self> {
        CfmmModel::new(r.deltas, r.p0, r.gamma, r.beta)
    }
}

impl CfmmModel {
    pub fn new(deltas: Vec<f64>, p0: f64, gamma: f64, beta: f64) -> Result<Self> {
        if deltas.is_empty() {
            return Err(Error::InvalidModel("cfmm: at least one trade is required".into()));
        }
        if deltas.iter().any(|d| !d.is_finite()) {
            return Err(Error::InvalidModel("cfmm: trade sizes must be finite".into()));
        }
        if !(p0.is_finite() && p0 > 0.0) {
            return Err(Error::InvalidModel(format!("cfmm: p0 must be positive, got {p0}")));
        }
        if !(gamma.is_finite() && gamma >= 0.0) {
            return Err(Error::InvalidModel(format!("cfmm: gamma must be non-negative, got {gamma}")));
        }
        if !(beta.is_finite() && beta >= 0.0) {
            return Err(Error::InvalidModel(format!("cfmm: beta must be non-negative, got {beta}")));
        }
        // Every trade can be executed first, so each impact factor must keep
        // the price positive; positivity of all factors covers every ordering.
        if let Some(d) = deltas.iter().find(|&&d| 1.0 + gamma * d <= 0.0) {
            return Err(Error::InvalidModel(format!(
                "cfmm: trade {d} with gamma {gamma} drives the price to zero or below"
            )));
        }
        Ok(Self { deltas, p0, gamma, beta })
    }

    pub fn n(&self) -> usize {
        self.deltas.len()
    }

    pub fn deltas(&self) -> &[f64] {
        &self.deltas
    }

    pub fn p0(&self) -> f64 {
        self.p0
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

/// `2k` unit trades, `k` up and `k` down, against a position liquidated once
/// the price reaches `p0 - c`. Trades `1..=k` are the up-moves.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawLiquidation")]
pub struct LiquidationModel {
    k: usize,
    c: i64,
    p0: f64,
}

#[derive(Deserialize)]
struct RawLiquidation {
    k: usize,
    c: i64,
    #[serde(default = "default_p0")]
    p0: f64,
}

fn default_p0() -> f64 {
    100.0
}

impl TryFrom<RawLiquidation> for LiquidationModel {
    type Error = Error;

    fn try_from(r: RawLiquidation) -> Result<Self> {
        LiquidationModel::new(r.k, r.c, r.p0)
    }
}

impl LiquidationModel {
    pub fn new(k: usize, c: i64, p0: f64) -> Result<Self> {
        if c <= 0 || c >= k as i64 {
            return Err(Error::InvalidModel(format!("liquidation: need 0 < c < k, got k = {k}, c = {c}")));
        }
        if !p0.is_finite() {
            return Err(Error::InvalidModel("liquidation: p0 must be finite".into()));
        }
        Ok(Self { k, c, p0 })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn c(&self) -> i64 {
        self.c
    }

    pub fn p0(&self) -> f64 {
        self.p0
    }

    pub fn n(&self) -> usize {
        2 * self.k
    }

    /// Price move of zero-based trade `i`.
    pub fn step(&self, i: usize) -> i64 {
        if i < self.k {
            1
        } else {
            -1
        }
    }
}

/// One product term `a_T Π_ℓ 1[π(i_ℓ) = j_ℓ]`, with one-based points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JuntaSpec {
    pub constraints: Vec<(usize, usize)>,
    pub coefficient: f64,
}

impl JuntaSpec {
    pub fn new(constraints: Vec<(usize, usize)>, coefficient: f64) -> Self {
        Self { constraints, coefficient }
    }

    fn validate(&self, n: usize) -> Result<()> {
        if self.constraints.len() > n {
            return Err(Error::InvalidSpec(format!("junta term has more than {n} constraints")));
        }
        let mut seen_i = vec![false; n + 1];
        let mut seen_j = vec![false; n + 1];
        for &(i, j) in &self.constraints {
            if !(1..=n).contains(&i) || !(1..=n).contains(&j) {
                return Err(Error::InvalidSpec(format!("constraint ({i}, {j}) outside 1..={n}")));
            }
            if seen_i[i] {
                return Err(Error::InvalidSpec(format!("point {i} constrained twice in one term")));
            }
            if seen_j[j] {
                return Err(Error::InvalidSpec(format!("image {j} used twice in one term")));
            }
            seen_i[i] = true;
            seen_j[j] = true;
        }
        if !self.coefficient.is_finite() {
            return Err(Error::InvalidSpec("junta coefficient must be finite".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RandomDist {
    /// i.i.d. uniform values in `[0, 1)`.
    Uniform01,
    /// Exactly `k` nonzero entries with values in `(0, 1]`.
    Sparse(usize),
}

/// `f(π) = Σ_i beta · Δ_{π(i)}² · p_{i-1}` with `p_i = p_{i-1}(1 + gamma Δ_{π(i)})`.
pub fn cfmm_payoff<T: Real>(m: &CfmmModel) -> Result<PayoffFn<T>> {
    let n = m.n();
    check_capacity(n)?;
    let mut values = Vec::with_capacity(factorial(n) as usize);
    for p in crate::perm::enumerate(n)? {
        let mut price = m.p0;
        let mut total = 0.0;
        for slot in 0..n {
            let d = m.deltas[p.get(slot)];
            total += m.beta * d * d * price;
            price *= 1.0 + m.gamma * d;
            if price <= 0.0 {
                return Err(Error::InvalidModel(format!("ordering {p} drives the price to {price}")));
            }
        }
        values.push(T::from_f64_lossy(total));
    }
    PayoffFn::new(n, values)
}

/// Indicator of the orderings whose price path touches `p0 - c`.
pub fn liquidation_payoff<T: Real>(m: &LiquidationModel) -> Result<PayoffFn<T>> {
    PayoffFn::from_fn(m.n(), |p| {
        let mut level = 0i64;
        let hit = (0..m.n()).any(|slot| {
            level += m.step(p.get(slot));
            level <= -m.c
        });
        if hit {
            T::one()
        } else {
            T::zero()
        }
    })
}

/// The liquidatable set itself.
pub fn liquidation_set(m: &LiquidationModel) -> Result<OrderingSet> {
    let f = liquidation_payoff::<f64>(m)?;
    let members = f.values().iter().enumerate().filter(|(_, &v)| v > 0.0).map(|(r, _)| r as u64).collect();
    OrderingSet::new(m.n(), members)
}

pub fn indicator_payoff<T: Real>(set: &OrderingSet) -> Result<PayoffFn<T>> {
    let mut f = PayoffFn::zeros(set.n())?;
    let values = f.values_mut();
    for &r in set.members() {
        values[r as usize] = T::one();
    }
    Ok(f)
}

pub fn junta_payoff<T: Real>(terms: &[JuntaSpec], n: usize) -> Result<PayoffFn<T>> {
    for t in terms {
        t.validate(n)?;
    }
    PayoffFn::from_fn(n, |p| {
        let total: f64 = terms
            .iter()
            .filter(|t| t.constraints.iter().all(|&(i, j)| p.get(i - 1) == j - 1))
            .fold(0.0, |acc, t| acc + t.coefficient);
        T::from_f64_lossy(total)
    })
}

pub fn random_payoff<T: Real>(n: usize, seed: u64, dist: RandomDist) -> Result<PayoffFn<T>> {
    check_capacity(n)?;
    let len = factorial(n) as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = match dist {
        RandomDist::Uniform01 => (0..len).map(|_| T::from_f64_lossy(rng.random::<f64>())).collect(),
        RandomDist::Sparse(k) => {
            if k > len {
                return Err(Error::InvalidSpec(format!("sparse({k}) exceeds {len} entries")));
            }
            let mut v = vec![T::zero(); len];
            for idx in sample(&mut rng, len, k) {
                v[idx] = T::from_f64_lossy(1.0 - rng.random::<f64>());
            }
            v
        }
    };
    PayoffFn::new(n, values)
}
