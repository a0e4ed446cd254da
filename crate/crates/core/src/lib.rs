//! Fourier analysis on the symmetric group applied to transaction-ordering
//! fairness.

pub mod cayley;
pub mod error;
pub mod fairness;
pub mod fourier;
pub mod intersecting;
pub mod partition;
pub mod payoff_fn;
pub mod payoffs;
pub mod perm;
pub mod repr;
pub mod scalar;
pub mod sequencing;
pub mod verify;

pub use cayley::{Normalization, SymmetricSet};
pub use error::{Error, Result};
pub use fairness::{Classification, FairnessReport};
pub use fourier::{FourierSpectrum, SchattenSummary, UncertaintyCheck};
pub use partition::{Partition, StandardTableau};
pub use payoff_fn::{OrderingSet, PayoffFn};
pub use intersecting::IntersectionProfile;
pub use payoffs::{CfmmModel, JuntaSpec, LiquidationModel, RandomDist};
pub use perm::{CycleType, Permutation};
pub use repr::{IrrepMatrix, RepresentationTable, YoungOrthogonal};
pub use scalar::Real;
pub use sequencing::{LatencyModel, MajorityGraph, VoteProfile};
pub use verify::{Suite, SuiteReport};

/// Double-precision payoff, the default working type.
pub type Payoff = PayoffFn<f64>;
pub type Spectrum = FourierSpectrum<f64>;
pub type Irrep = IrrepMatrix<f64>;
pub type Table = RepresentationTable<f64>;

pub type Payoff32 = PayoffFn<f32>;
pub type Spectrum32 = FourierSpectrum<f32>;
