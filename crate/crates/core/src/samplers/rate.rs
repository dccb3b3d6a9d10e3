use serde::Serialize;

use super::TargetSpec;
use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Geometric,
    Polynomial,
    None,
}

/// Convergence-rate classification of a random-walk Metropolis chain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateClassification {
    pub regime: Regime,
    /// `eta = -lim (log pi(x))'` as `x -> inf`.
    pub eta_criterion: f64,
    /// Density tail exponent `r` of `pi(x) ~ x^(-1-r)`, when applicable.
    pub r: Option<f64>,
    /// Polynomial rate, once a proposal is fixed.
    pub v: Option<f64>,
    /// Extremal index of the chain is zero (no geometric ergodicity).
    pub theta_zero: bool,
}

/// Tail behavior of the proposal increments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProposalTail {
    /// `q(x) ~ |x|^(-1-eta)`, `0 < eta < 2`.
    Heavy { eta: f64 },
    FiniteVariance,
}

pub fn classify_ergodicity(target: &TargetSpec) -> Result<RateClassification> {
    match *target {
        TargetSpec::ExponentialType { lambda } => {
            if !(lambda >= 0.0) {
                return Err(invalid("lambda must be non-negative"));
            }
            let geometric = lambda > 0.0;
            Ok(RateClassification {
                regime: if geometric { Regime::Geometric } else { Regime::None },
                eta_criterion: lambda,
                r: None,
                v: None,
                theta_zero: !geometric,
            })
        }
        TargetSpec::PowerLaw { r, .. } => {
            if !(r > 0.0) {
                return Err(invalid("power-law target needs r > 0"));
            }
            Ok(RateClassification {
                regime: Regime::Polynomial,
                eta_criterion: 0.0,
                r: Some(r),
                v: None,
                theta_zero: true,
            })
        }
    }
}

/// Polynomial rate `v = r/eta` for heavy-tailed proposals and `v = r/2` for
/// finite-variance ones.
pub fn polynomial_rate(r: f64, proposal: ProposalTail) -> Result<RateClassification> {
    if !(r > 0.0) {
        return Err(invalid(format!("r must be positive, got {r}")));
    }
    let v = match proposal {
        ProposalTail::Heavy { eta } if eta > 0.0 && eta < 2.0 => r / eta,
        ProposalTail::Heavy { eta } => {
            return Err(invalid(format!("eta must lie in (0, 2), got {eta}")))
        }
        ProposalTail::FiniteVariance => r / 2.0,
    };
    Ok(RateClassification {
        regime: Regime::Polynomial,
        eta_criterion: 0.0,
        r: Some(r),
        v: Some(v),
        theta_zero: true,
    })
}
