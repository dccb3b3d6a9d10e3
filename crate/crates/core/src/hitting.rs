//! First-hitting-time model: quantile thresholds, mean hitting times, the
//! geometric hitting-time law and the extremal approximation of the maximum.

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::scalar::{Magnitude, Scalar};
use crate::tail::SortedSample;

/// Order statistic `X_(ceil(level * n))`; always an observed value.
pub fn empirical_quantile<F: Scalar>(sample: &SortedSample<F>, level: F) -> Result<F> {
    if sample.is_empty() {
        return Err(Error::EmptyInput("quantile of an empty sample"));
    }
    if !(level > F::zero() && level < F::one()) {
        return Err(invalid(format!("quantile level must lie in (0, 1), got {level}")));
    }
    let n = sample.len();
    let pos = (level.to_f64_lossy() * n as f64 - 1e-9).ceil();
    let idx = (pos as usize).clamp(1, n);
    Ok(sample.order_stat(idx))
}

/// Threshold `x_rho` at quantile level `1 - rho`, with the tail fraction the
/// sample actually puts above it. Ties can make `rho_effective < rho_nominal`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuantileThreshold<F> {
    pub rho_nominal: F,
    pub x_rho: F,
    pub rho_effective: F,
}

pub fn quantile_threshold<F: Scalar>(sample: &SortedSample<F>, rho: F) -> Result<QuantileThreshold<F>> {
    let x_rho = empirical_quantile(sample, F::one() - rho)?;
    let above = sample.len() - sample.as_slice().partition_point(|&x| x <= x_rho);
    Ok(QuantileThreshold {
        rho_nominal: rho,
        x_rho,
        rho_effective: F::from_usize_lossy(above) / F::from_usize_lossy(sample.len()),
    })
}

fn check_rho<F: Scalar>(rho: F) -> Result<()> {
    if rho > F::zero() && rho <= F::one() {
        Ok(())
    } else {
        Err(invalid(format!("rho must lie in (0, 1], got {rho}")))
    }
}

fn check_theta<F: Scalar>(theta: F) -> Result<()> {
    if theta >= F::zero() && theta <= F::one() {
        Ok(())
    } else {
        Err(invalid(format!("theta must lie in [0, 1], got {theta}")))
    }
}

/// `E T*(x_rho) ~ 1 / (rho theta^3)`; infinite when `theta = 0`.
pub fn mean_fht_scaled<F: Scalar>(rho: F, theta: F) -> Result<Magnitude<F>> {
    check_rho(rho)?;
    check_theta(theta)?;
    if theta == F::zero() {
        return Ok(Magnitude::Infinite);
    }
    Ok(Magnitude::Finite((rho * theta.powi(3)).recip()))
}

/// `E(T*/n) -> 1/theta`; infinite when `theta = 0`.
pub fn mean_fht_fraction<F: Scalar>(theta: F) -> Result<Magnitude<F>> {
    check_theta(theta)?;
    if theta == F::zero() {
        return Ok(Magnitude::Infinite);
    }
    Ok(Magnitude::Finite(theta.recip()))
}

/// Geometric hitting-time probabilities at step `j >= 1`.
///
/// `normalized = rho theta (1 - rho theta)^(j-1)` is a proper pmf.
/// `raw = normalized / theta^2` is the unnormalized form approximating
/// `P{T* = j}` itself; it sums to `1/theta^2`, not 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PmfPoint<F> {
    pub j: usize,
    pub normalized: F,
    pub raw: F,
}

pub fn fht_pmf<F: Scalar>(j: usize, rho: F, theta: F) -> Result<PmfPoint<F>> {
    if j < 1 {
        return Err(invalid("hitting step j must be at least 1"));
    }
    check_rho(rho)?;
    check_theta(theta)?;
    if theta == F::zero() {
        return Err(invalid("the geometric law needs theta > 0"));
    }
    let p = rho * theta;
    let exp = i32::try_from(j - 1).map_err(|_| invalid("j too large"))?;
    let normalized = p * (F::one() - p).powi(exp);
    Ok(PmfPoint {
        j,
        normalized,
        raw: normalized / (theta * theta),
    })
}

/// First-hitting-time model for threshold tail probability `rho` and
/// extremal index `theta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FhtModel<F> {
    pub rho: F,
    pub theta: F,
    /// Geometric parameter `rho * theta`.
    pub p: F,
    pub mean_scaled: F,
}

impl<F: Scalar> FhtModel<F> {
    pub fn new(rho: F, theta: F) -> Result<Self> {
        check_rho(rho)?;
        check_theta(theta)?;
        if theta == F::zero() {
            return Err(invalid("the geometric law needs theta > 0"));
        }
        Ok(FhtModel {
            rho,
            theta,
            p: rho * theta,
            mean_scaled: (rho * theta.powi(3)).recip(),
        })
    }

    pub fn pmf(&self, j: usize) -> Result<PmfPoint<F>> {
        fht_pmf(j, self.rho, self.theta)
    }

    /// `P{T > j}` under the normalized law.
    pub fn tail_mass(&self, j: usize) -> F {
        (F::one() - self.p).powf(F::from_usize_lossy(j))
    }

    /// Consecutive pmf rows from `j = 1` until the remaining normalized mass
    /// drops below `cutoff`, capped at `max_rows`. The flag reports whether
    /// the cap was hit first.
    pub fn pmf_table(&self, cutoff: F, max_rows: usize) -> (Vec<PmfPoint<F>>, bool) {
        let mut rows = Vec::new();
        let q = F::one() - self.p;
        let mut normalized = self.p;
        let mut tail = q;
        let theta2 = self.theta * self.theta;
        for j in 1..=max_rows {
            rows.push(PmfPoint {
                j,
                normalized,
                raw: normalized / theta2,
            });
            if tail < cutoff {
                return (rows, false);
            }
            normalized = normalized * q;
            tail = tail * q;
        }
        (rows, true)
    }
}

/// `P{M_n <= u} ~ F(u)^(n theta)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MaxApprox<F> {
    pub n: usize,
    pub theta: F,
    pub f_at_u: F,
    pub probability: F,
}

pub fn approx_max_cdf<F: Scalar>(f_at_u: F, n: usize, theta: F) -> Result<MaxApprox<F>> {
    if !(f_at_u >= F::zero() && f_at_u <= F::one()) {
        return Err(invalid(format!("F(u) must lie in [0, 1], got {f_at_u}")));
    }
    if n < 1 {
        return Err(invalid("n must be at least 1"));
    }
    check_theta(theta)?;
    let probability = f_at_u.powf(F::from_usize_lossy(n) * theta);
    Ok(MaxApprox {
        n,
        theta,
        f_at_u,
        probability,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn sorted(v: &[f64]) -> SortedSample<f64> {
        SortedSample::new(v).unwrap()
    }

    #[test]
    fn quantile_convention() {
        let x: Vec<f64> = (1..=100).map(f64::from).collect();
        assert_eq!(empirical_quantile(&sorted(&x), 0.95).unwrap(), 95.0);
        assert_eq!(empirical_quantile(&sorted(&x), 0.55).unwrap(), 55.0);
        assert_eq!(empirical_quantile(&sorted(&x), 0.001).unwrap(), 1.0);
        assert_eq!(empirical_quantile(&sorted(&[7.0]), 0.5).unwrap(), 7.0);
        assert!(empirical_quantile(&sorted(&[]), 0.5).is_err());
        assert!(empirical_quantile(&sorted(&x), 1.0).is_err());
    }

    #[test]
    fn effective_rho_accounts_for_ties() {
        let mut x = vec![1.0; 90];
        x.extend([2.0; 10]);
        let t = quantile_threshold(&sorted(&x), 0.05).unwrap();
        assert_eq!(t.x_rho, 2.0);
        assert_eq!(t.rho_effective, 0.0);
        let y: Vec<f64> = (1..=100).map(f64::from).collect();
        let t = quantile_threshold(&sorted(&y), 0.05).unwrap();
        assert_eq!(t.x_rho, 95.0);
        assert_relative_eq!(t.rho_effective, 0.05);
    }

    #[test]
    fn mean_hitting_times() {
        assert_relative_eq!(mean_fht_scaled(1.0, 0.5).unwrap().finite().unwrap(), 8.0);
        let m = mean_fht_scaled(0.05, 0.22).unwrap().finite().unwrap();
        assert_relative_eq!(m, 1.0 / (0.05 * 0.22f64.powi(3)), epsilon = 1e-9);
        assert!((m - 1878.287).abs() < 1e-3);
        assert_relative_eq!(mean_fht_scaled(0.05, 1.0).unwrap().finite().unwrap(), 20.0, epsilon = 1e-12);
        assert!(mean_fht_scaled(0.05, 0.0).unwrap().is_infinite());
        assert!(mean_fht_scaled(0.0, 0.5).is_err());

        assert_eq!(mean_fht_fraction(1.0).unwrap(), Magnitude::Finite(1.0));
        assert_relative_eq!(mean_fht_fraction(0.22).unwrap().finite().unwrap(), 4.545454545454545);
        assert_eq!(mean_fht_fraction(0.5).unwrap(), Magnitude::Finite(2.0));
        assert!(mean_fht_fraction(0.0).unwrap().is_infinite());
    }

    #[test]
    fn pmf_values() {
        let p = fht_pmf(1, 1.0, 1.0).unwrap();
        assert_eq!((p.normalized, p.raw), (1.0, 1.0));
        assert_eq!(fht_pmf(2, 1.0, 1.0).unwrap().normalized, 0.0);
        let p1 = fht_pmf(1, 0.05, 0.22).unwrap();
        assert_relative_eq!(p1.normalized, 0.011, epsilon = 1e-15);
        assert_relative_eq!(p1.raw, 0.011 / 0.0484, epsilon = 1e-12);
        let p2 = fht_pmf(2, 0.05, 0.22).unwrap();
        assert_relative_eq!(p2.normalized, 0.011 * 0.989, epsilon = 1e-15);
        assert!(fht_pmf(0, 0.05, 0.22).is_err());
    }

    #[test]
    fn pmf_table_stops_at_cutoff() {
        let m = FhtModel::new(0.5, 1.0).unwrap();
        let (rows, capped) = m.pmf_table(1e-3, 1000);
        assert!(!capped);
        assert_eq!(rows.len(), 10);
        let total: f64 = rows.iter().map(|r| r.normalized).sum();
        assert_relative_eq!(total + m.tail_mass(rows.len()), 1.0, epsilon = 1e-12);
        let (_, capped) = m.pmf_table(1e-300, 5);
        assert!(capped);
    }

    #[test]
    fn max_approximation() {
        assert_eq!(approx_max_cdf(1.0, 50, 0.3).unwrap().probability, 1.0);
        assert_eq!(approx_max_cdf(0.4, 50, 0.0).unwrap().probability, 1.0);
        let m = approx_max_cdf(0.95, 100, 0.22).unwrap().probability;
        assert_relative_eq!(m, 0.95f64.powf(22.0), epsilon = 1e-12);
        assert!((m - 0.3235).abs() < 1e-3);
        assert!(approx_max_cdf(1.2, 10, 0.5).is_err());
    }
}
