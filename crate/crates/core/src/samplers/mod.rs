//! Random-walk samplers, synthetic sequence generators and empirical
//! first-hitting-time experiments.
//!
//! Every sampler is a [`SequenceSource`]: a stateful generator of observed
//! values `X_1, X_2, ...`. The first observation is the start state, each
//! later one the state after one more transition (rejections included).

mod fht;
mod metropolis;
mod rate;
mod sources;
mod walk;

pub use fht::{empirical_fht, geometric_tv_distance, FhtRuns, FhtSummary};
pub use metropolis::{
    acceptance_probability, metropolis_continuous, ContinuousMetropolis, MetropolisConfig,
    ProposalSpec, TargetSpec,
};
pub use rate::{classify_ergodicity, polynomial_rate, ProposalTail, RateClassification, Regime};
pub use sources::{Constant, IidPareto, IidUniform, IidValues, MovingMaximum};
pub use walk::{mhrw_walk, srw_walk, GraphWalk, GraphWalker, Start, WalkConfig};

use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// A generator of an observed sequence.
pub trait SequenceSource {
    fn next_value(&mut self, rng: &mut ChaCha8Rng) -> f64;

    /// `(proposed, accepted)` transitions so far, for samplers that can reject.
    fn acceptance(&self) -> Option<(u64, u64)> {
        None
    }
}

/// Draws the first `n` observations of `source`.
pub fn generate<S: SequenceSource>(source: &mut S, n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..n).map(|_| source.next_value(rng)).collect()
}

/// Trace of one walk.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WalkResult {
    /// Visited nodes (graph walks only).
    pub nodes: Vec<usize>,
    /// Observed values: node degrees for graph walks, states for the
    /// continuous chain.
    pub values: Vec<f64>,
    /// First 1-based index whose value strictly exceeds the threshold.
    pub hitting_step: Option<usize>,
    pub proposed: u64,
    pub accepted: u64,
    pub acceptance_rate: f64,
    pub steps_taken: usize,
}

impl WalkResult {
    pub(crate) fn finish(
        nodes: Vec<usize>,
        values: Vec<f64>,
        threshold: Option<f64>,
        proposed: u64,
        accepted: u64,
    ) -> Self {
        let hitting_step =
            threshold.and_then(|u| values.iter().position(|&v| v > u).map(|i| i + 1));
        WalkResult {
            steps_taken: values.len(),
            nodes,
            values,
            hitting_step,
            proposed,
            accepted,
            acceptance_rate: if proposed == 0 {
                1.0
            } else {
                accepted as f64 / proposed as f64
            },
        }
    }
}
