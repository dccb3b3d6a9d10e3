//! Extremal index estimation with the intervals estimator, and threshold
//! selection from the stability region of the estimate-vs-threshold curve.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::hitting::empirical_quantile;
use crate::scalar::{Magnitude, Scalar};
use crate::tail::SortedSample;

/// Exceedance epochs of a threshold and the gaps between them.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExceedanceRecord<F> {
    pub u: F,
    /// 1-based positions `i` with `X_i > u`, increasing.
    pub epochs: Vec<usize>,
    /// `T_i = S_{i+1} - S_i`.
    pub gaps: Vec<usize>,
}

impl<F> ExceedanceRecord<F> {
    pub fn count(&self) -> usize {
        self.epochs.len()
    }
}

pub fn exceedances<F: Scalar>(sequence: &[F], u: F) -> Result<ExceedanceRecord<F>> {
    if sequence.is_empty() {
        return Err(Error::EmptyInput("sequence is empty"));
    }
    let epochs: Vec<usize> = sequence
        .iter()
        .enumerate()
        .filter(|(_, &x)| x > u)
        .map(|(i, _)| i + 1)
        .collect();
    if epochs.len() < 2 {
        return Err(Error::TooFewExceedances {
            threshold: u.to_f64_lossy(),
            found: epochs.len(),
        });
    }
    let gaps = epochs.windows(2).map(|w| w[1] - w[0]).collect();
    Ok(ExceedanceRecord { u, epochs, gaps })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// All interexceedance times at most 2.
    T1,
    /// Some interexceedance time above 2.
    T2,
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Branch::T1 => "t1",
            Branch::T2 => "t2",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThetaEstimate<F> {
    pub u: F,
    /// `min(1, raw)`.
    pub theta: F,
    pub raw: F,
    pub branch: Branch,
    /// Number of exceedances.
    pub n_exceed: usize,
}

/// Intervals estimator of the extremal index from interexceedance times.
pub fn intervals_from_record<F: Scalar>(record: &ExceedanceRecord<F>) -> Result<ThetaEstimate<F>> {
    let n = record.count();
    if n < 2 {
        return Err(Error::TooFewExceedances {
            threshold: record.u.to_f64_lossy(),
            found: n,
        });
    }
    let max_gap = record.gaps.iter().copied().max().unwrap_or(0);
    let pairs = F::from_usize_lossy(n - 1);
    let two = F::from_f64_lossy(2.0);
    let (branch, num, den) = if max_gap <= 2 {
        let (s, s2) = record.gaps.iter().fold((0u128, 0u128), |(a, b), &t| {
            let t = t as u128;
            (a + t, b + t * t)
        });
        (Branch::T1, s, s2)
    } else {
        let (s, s2) = record.gaps.iter().fold((0u128, 0u128), |(a, b), &t| {
            let t = t as u128;
            (a + (t - 1), b + (t - 1) * (t.saturating_sub(2)))
        });
        (Branch::T2, s, s2)
    };
    if den == 0 {
        return Err(Error::Degenerate(format!(
            "intervals estimator denominator is zero (branch {branch}, {n} exceedances, max gap {max_gap})"
        )));
    }
    let num = F::from_u128(num).unwrap();
    let den = F::from_u128(den).unwrap();
    let raw = two * num * num / (pairs * den);
    Ok(ThetaEstimate {
        u: record.u,
        theta: raw.min(F::one()),
        raw,
        branch,
        n_exceed: n,
    })
}

pub fn intervals_estimator<F: Scalar>(sequence: &[F], u: F) -> Result<ThetaEstimate<F>> {
    intervals_from_record(&exceedances(sequence, u)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThetaCurve<F> {
    pub points: Vec<ThetaEstimate<F>>,
    /// Thresholds with fewer than two exceedances.
    pub infeasible: Vec<F>,
}

/// Intervals estimates over an ascending threshold grid.
pub fn theta_curve<F: Scalar>(sequence: &[F], grid: &[F]) -> Result<ThetaCurve<F>> {
    if grid.windows(2).any(|w| w[0] > w[1]) {
        return Err(invalid("threshold grid must be sorted ascending"));
    }
    let results: Vec<Result<ThetaEstimate<F>>> = grid
        .par_iter()
        .map(|&u| intervals_estimator(sequence, u))
        .collect();
    let mut points = Vec::new();
    let mut infeasible = Vec::new();
    for (u, r) in grid.iter().zip(results) {
        match r {
            Ok(est) => points.push(est),
            Err(Error::TooFewExceedances { .. }) | Err(Error::Degenerate(_)) => infeasible.push(*u),
            Err(e) => return Err(e),
        }
    }
    if points.is_empty() {
        return Err(Error::Degenerate(
            "every grid threshold has fewer than two exceedances".into(),
        ));
    }
    Ok(ThetaCurve { points, infeasible })
}

/// Empirical quantiles at levels 80%, 80.5%, ..., 99.5%, deduplicated.
pub fn default_theta_grid<F: Scalar>(sequence: &[F]) -> Result<Vec<F>> {
    let sorted = SortedSample::new(sequence)?;
    let mut grid = Vec::new();
    for step in 0..=39 {
        let level = 0.80 + 0.005 * step as f64;
        grid.push(empirical_quantile(&sorted, F::from_f64_lossy(level))?);
    }
    grid.dedup();
    Ok(grid)
}

/// Result of plateau selection on a theta curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlateauSelection<F> {
    pub theta: F,
    pub u_low: F,
    pub u_high: F,
    pub window_w: usize,
    /// Index of the first curve point in the window.
    pub start: usize,
    pub coefficient_of_variation: F,
}

pub const DEFAULT_PLATEAU_WINDOW: usize = 10;

/// Median theta of the length-`w` window of consecutive curve points with the
/// smallest coefficient of variation. Ties go to the lowest threshold.
pub fn select_theta_plateau<F: Scalar>(
    curve: &[ThetaEstimate<F>],
    window_w: usize,
) -> Result<PlateauSelection<F>> {
    if window_w < 3 {
        return Err(invalid(format!("plateau window must be at least 3, got {window_w}")));
    }
    if curve.len() < window_w {
        return Err(invalid(format!(
            "curve has {} points, fewer than the window {window_w}",
            curve.len()
        )));
    }
    let mut best: Option<(usize, F)> = None;
    for start in 0..=curve.len() - window_w {
        let cv = coefficient_of_variation(&curve[start..start + window_w]);
        if cv.is_nan() {
            continue;
        }
        if best.is_none_or(|(_, b)| cv < b) {
            best = Some((start, cv));
        }
    }
    let (start, cv) =
        best.ok_or_else(|| Error::Degenerate("no window has a defined variation".into()))?;
    let window = &curve[start..start + window_w];
    Ok(PlateauSelection {
        theta: median(window.iter().map(|p| p.theta).collect()),
        u_low: window[0].u,
        u_high: window[window_w - 1].u,
        window_w,
        start,
        coefficient_of_variation: cv,
    })
}

fn coefficient_of_variation<F: Scalar>(window: &[ThetaEstimate<F>]) -> F {
    let n = F::from_usize_lossy(window.len());
    let mean = window.iter().map(|p| p.theta).sum::<F>() / n;
    let var = window
        .iter()
        .map(|p| (p.theta - mean) * (p.theta - mean))
        .sum::<F>()
        / n;
    if mean == F::zero() {
        return if var == F::zero() { F::zero() } else { F::nan() };
    }
    var.sqrt() / mean
}

fn median<F: Scalar>(mut v: Vec<F>) -> F {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        (v[m - 1] + v[m]) / F::from_f64_lossy(2.0)
    }
}

/// Approximate mean cluster size `1/theta`.
pub fn mean_cluster_size<F: Scalar>(theta: F) -> Result<Magnitude<F>> {
    if !(theta >= F::zero() && theta <= F::one()) {
        return Err(invalid(format!("theta must lie in [0, 1], got {theta}")));
    }
    if theta == F::zero() {
        return Ok(Magnitude::Infinite);
    }
    Ok(Magnitude::Finite(theta.recip()))
}
