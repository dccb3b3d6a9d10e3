//! Extreme-value analysis of network degree sequences.
//!
//! * [`graph`]: edge-list ingestion and degree sequences.
//! * [`tail`]: mean excess, Hill/Ratio/Moment estimators, double bootstrap.
//! * [`extremal`]: intervals estimator of the extremal index.
//! * [`hitting`]: first-hitting-time model.
//! * [`samplers`]: graph walkers, continuous Metropolis chain, FHT runs.
//!
//! Estimators are generic over [`Scalar`] (`f32` or `f64`); the `*64`
//! aliases below fix the common double-precision case.

pub mod error;
pub mod extremal;
pub mod graph;
pub mod hitting;
pub mod rng;
pub mod samplers;
pub mod scalar;
pub mod tail;

pub use error::{Error, Result};
pub use scalar::{Magnitude, Scalar};

pub type SortedSample64 = tail::SortedSample<f64>;
pub type TailEstimate64 = tail::TailEstimate<f64>;
pub type PowerLawModel64 = tail::PowerLawModel<f64>;
pub type MeanExcessPoint64 = tail::MeanExcessPoint<f64>;
pub type ExceedanceRecord64 = extremal::ExceedanceRecord<f64>;
pub type ThetaEstimate64 = extremal::ThetaEstimate<f64>;
pub type ThetaCurve64 = extremal::ThetaCurve<f64>;
pub type PlateauSelection64 = extremal::PlateauSelection<f64>;
pub type FhtModel64 = hitting::FhtModel<f64>;
pub type QuantileThreshold64 = hitting::QuantileThreshold<f64>;

pub type SortedSample32 = tail::SortedSample<f32>;
pub type TailEstimate32 = tail::TailEstimate<f32>;
pub type ThetaEstimate32 = extremal::ThetaEstimate<f32>;
pub type FhtModel32 = hitting::FhtModel<f32>;
