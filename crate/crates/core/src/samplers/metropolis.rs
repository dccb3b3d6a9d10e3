use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::Serialize;

use super::{SequenceSource, WalkResult};
use crate::error::{invalid, Result};
use crate::rng::task_rng;

/// Parametric stationary density of the continuous Metropolis chain.
/// Slowly varying factors are constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum TargetSpec {
    /// `pi(x) = r x_min^r / x^(1+r)` on `[x_min, inf)`.
    PowerLaw { r: f64, x_min: f64 },
    /// `pi(x) = lambda exp(-lambda x)` on `[0, inf)`.
    ExponentialType { lambda: f64 },
}

impl TargetSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            TargetSpec::PowerLaw { r, x_min } if r > 0.0 && x_min > 0.0 => Ok(()),
            TargetSpec::PowerLaw { .. } => Err(invalid("power-law target needs r > 0 and x_min > 0")),
            TargetSpec::ExponentialType { lambda } if lambda > 0.0 => Ok(()),
            TargetSpec::ExponentialType { .. } => Err(invalid("exponential target needs lambda > 0")),
        }
    }

    pub fn in_support(&self, x: f64) -> bool {
        match *self {
            TargetSpec::PowerLaw { x_min, .. } => x >= x_min && x.is_finite(),
            TargetSpec::ExponentialType { .. } => x >= 0.0 && x.is_finite(),
        }
    }

    pub fn density(&self, x: f64) -> f64 {
        if !self.in_support(x) {
            return 0.0;
        }
        match *self {
            TargetSpec::PowerLaw { r, x_min } => r * x_min.powf(r) * x.powf(-1.0 - r),
            TargetSpec::ExponentialType { lambda } => lambda * (-lambda * x).exp(),
        }
    }

    fn log_density(&self, x: f64) -> f64 {
        if !self.in_support(x) {
            return f64::NEG_INFINITY;
        }
        match *self {
            TargetSpec::PowerLaw { r, .. } => -(1.0 + r) * x.ln(),
            TargetSpec::ExponentialType { lambda } => -lambda * x,
        }
    }

    /// Closed-form quantile at level `p` in `[0, 1)`.
    pub fn quantile(&self, p: f64) -> f64 {
        match *self {
            TargetSpec::PowerLaw { r, x_min } => x_min * (1.0 - p).powf(-1.0 / r),
            TargetSpec::ExponentialType { lambda } => -(1.0 - p).ln() / lambda,
        }
    }

    /// Lower end of the support.
    pub fn lower_bound(&self) -> f64 {
        match *self {
            TargetSpec::PowerLaw { x_min, .. } => x_min,
            TargetSpec::ExponentialType { .. } => 0.0,
        }
    }
}

/// Symmetric increment distribution of the Metropolis proposal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ProposalSpec {
    /// `|Z| = scale * U^(-1/eta)` with a fair random sign, so that
    /// `q(x) ~ |x|^(-1-eta)`.
    SymmetricHeavy { eta: f64, scale: f64 },
    /// Centered normal increments.
    GaussianLike { sigma: f64 },
}

impl ProposalSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            ProposalSpec::SymmetricHeavy { eta, scale } if eta > 0.0 && eta < 2.0 && scale > 0.0 => {
                Ok(())
            }
            ProposalSpec::SymmetricHeavy { .. } => {
                Err(invalid("heavy proposal needs 0 < eta < 2 and scale > 0"))
            }
            ProposalSpec::GaussianLike { sigma } if sigma > 0.0 => Ok(()),
            ProposalSpec::GaussianLike { .. } => Err(invalid("gaussian proposal needs sigma > 0")),
        }
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> f64 {
        match *self {
            ProposalSpec::SymmetricHeavy { eta, scale } => {
                let u: f64 = 1.0 - rng.gen::<f64>();
                let magnitude = scale * u.powf(-1.0 / eta);
                if rng.gen::<bool>() {
                    magnitude
                } else {
                    -magnitude
                }
            }
            ProposalSpec::GaussianLike { sigma } => {
                Normal::new(0.0, sigma).expect("validated sigma").sample(rng)
            }
        }
    }
}

/// `min(pi(y)/pi(x), 1)` when `pi(x) > 0`, otherwise 1.
pub fn acceptance_probability(pi_x: f64, pi_y: f64) -> f64 {
    if pi_x > 0.0 {
        (pi_y / pi_x).min(1.0)
    } else {
        1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetropolisConfig {
    pub target: TargetSpec,
    pub proposal: ProposalSpec,
    pub x0: f64,
    /// Number of observations, `x0` included.
    pub max_steps: usize,
    pub seed: u64,
    pub threshold: Option<f64>,
}

/// Random-walk Metropolis chain `X_{i+1} = X_i + Z_{i+1}` on acceptance.
///
/// A proposal is accepted iff `U <= alpha(X_i, X_i + Z)`, the usual
/// Metropolis rule. Rejections repeat the current state.
#[derive(Debug, Clone)]
pub struct ContinuousMetropolis {
    target: TargetSpec,
    proposal: ProposalSpec,
    state: f64,
    log_pi: f64,
    started: bool,
    proposed: u64,
    accepted: u64,
}

impl ContinuousMetropolis {
    pub fn new(target: TargetSpec, proposal: ProposalSpec, x0: f64) -> Result<Self> {
        target.validate()?;
        proposal.validate()?;
        if !target.in_support(x0) {
            return Err(invalid(format!(
                "start state {x0} lies outside the target support [{}, inf)",
                target.lower_bound()
            )));
        }
        Ok(ContinuousMetropolis {
            target,
            proposal,
            state: x0,
            log_pi: target.log_density(x0),
            started: false,
            proposed: 0,
            accepted: 0,
        })
    }

    pub fn state(&self) -> f64 {
        self.state
    }

    fn step(&mut self, rng: &mut ChaCha8Rng) {
        let y = self.state + self.proposal.draw(rng);
        let u: f64 = rng.gen();
        self.proposed += 1;
        let log_pi_y = if y.is_finite() {
            self.target.log_density(y)
        } else {
            f64::NEG_INFINITY
        };
        // Ratio in log space; the start state is in the support so pi(x) > 0.
        let alpha = (log_pi_y - self.log_pi).exp().min(1.0);
        if u <= alpha {
            self.state = y;
            self.log_pi = log_pi_y;
            self.accepted += 1;
        }
    }
}

impl SequenceSource for ContinuousMetropolis {
    fn next_value(&mut self, rng: &mut ChaCha8Rng) -> f64 {
        if self.started {
            self.step(rng);
        }
        self.started = true;
        self.state
    }

    fn acceptance(&self) -> Option<(u64, u64)> {
        Some((self.proposed, self.accepted))
    }
}

pub fn metropolis_continuous(config: &MetropolisConfig) -> Result<WalkResult> {
    if config.max_steps < 1 {
        return Err(invalid("max_steps must be at least 1"));
    }
    let mut chain = ContinuousMetropolis::new(config.target, config.proposal, config.x0)?;
    let mut rng = task_rng(config.seed, 0);
    let values = super::generate(&mut chain, config.max_steps, &mut rng);
    Ok(WalkResult::finish(
        Vec::new(),
        values,
        config.threshold,
        chain.proposed,
        chain.accepted,
    ))
}
