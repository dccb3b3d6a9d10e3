//! Heavy-tail detection and tail-index estimation.
//!
//! All estimators work on the extreme value index `gamma = 1/alpha`. Order
//! statistics follow the ascending convention `X_(1) <= ... <= X_(n)`, and
//! exceedances of a threshold are strict (`X > u`).

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::rng::task_rng;
use crate::scalar::{sorted_ascending, Scalar};

/// A sample sorted ascending, free of NaN.
#[derive(Debug, Clone, PartialEq)]
pub struct SortedSample<F> {
    values: Vec<F>,
}

impl<F: Scalar> SortedSample<F> {
    pub fn new(values: &[F]) -> Result<Self> {
        if values.iter().any(|v| v.is_nan()) {
            return Err(invalid("sample contains NaN"));
        }
        Ok(SortedSample {
            values: sorted_ascending(values),
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn as_slice(&self) -> &[F] {
        &self.values
    }

    /// `X_(i)` with 1-based `i`.
    pub fn order_stat(&self, i: usize) -> F {
        self.values[i - 1]
    }

    /// The `k` largest values, ascending.
    pub fn top(&self, k: usize) -> &[F] {
        &self.values[self.values.len() - k..]
    }

    /// Values strictly greater than zero, still sorted.
    pub fn positive(&self) -> &[F] {
        let first = self.values.partition_point(|v| *v <= F::zero());
        &self.values[first..]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TailMethod {
    Hill,
    Ratio,
    Moment,
}

impl std::fmt::Display for TailMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            TailMethod::Hill => "hill",
            TailMethod::Ratio => "ratio",
            TailMethod::Moment => "moment",
        })
    }
}

/// One tail-index estimate.
///
/// `k` is set for the Hill and Moment estimators; `threshold` is `X_(n-k)`
/// for those and the user threshold `x_n` for the Ratio estimator.
/// `alpha` is `None` whenever `gamma <= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailEstimate<F> {
    pub method: TailMethod,
    pub k: Option<usize>,
    pub threshold: F,
    pub gamma: F,
    pub alpha: Option<F>,
    pub n: usize,
    pub exceedances: usize,
}

fn alpha_of<F: Scalar>(gamma: F) -> Option<F> {
    (gamma > F::zero()).then(|| gamma.recip())
}

fn check_k<F: Scalar>(sample: &SortedSample<F>, k: usize) -> Result<F> {
    let n = sample.len();
    if k < 1 || k + 1 > n {
        return Err(invalid(format!("k must lie in [1, n-1] (k = {k}, n = {n})")));
    }
    let cut = sample.order_stat(n - k);
    if cut <= F::zero() {
        return Err(Error::Degenerate(format!(
            "X_(n-k) = {cut} is not positive; reduce k"
        )));
    }
    Ok(cut)
}

/// First and second empirical moments of the log-excesses over `X_(n-k)`.
fn log_excess_moments<F: Scalar>(sample: &SortedSample<F>, k: usize, cut: F) -> (F, F) {
    let kf = F::from_usize_lossy(k);
    let (s1, s2) = sample.top(k).iter().fold((F::zero(), F::zero()), |(a, b), &x| {
        let l = (x / cut).ln();
        (a + l, b + l * l)
    });
    (s1 / kf, s2 / kf)
}

/// Hill's estimator from the `k` largest order statistics.
pub fn hill<F: Scalar>(sample: &SortedSample<F>, k: usize) -> Result<TailEstimate<F>> {
    let cut = check_k(sample, k)?;
    let (gamma, _) = log_excess_moments(sample, k, cut);
    Ok(TailEstimate {
        method: TailMethod::Hill,
        k: Some(k),
        threshold: cut,
        gamma,
        alpha: alpha_of(gamma),
        n: sample.len(),
        exceedances: k,
    })
}

/// Ratio estimator: Hill's form with an arbitrary positive threshold.
pub fn ratio<F: Scalar>(sample: &[F], threshold: F) -> Result<TailEstimate<F>> {
    if !(threshold > F::zero()) {
        return Err(invalid(format!("ratio threshold must be > 0, got {threshold}")));
    }
    let (sum, count) = sample
        .iter()
        .filter(|&&x| x > threshold)
        .fold((F::zero(), 0usize), |(s, c), &x| (s + (x / threshold).ln(), c + 1));
    if count == 0 {
        return Err(Error::NoExceedances {
            threshold: threshold.to_f64_lossy(),
        });
    }
    let gamma = sum / F::from_usize_lossy(count);
    Ok(TailEstimate {
        method: TailMethod::Ratio,
        k: None,
        threshold,
        gamma,
        alpha: alpha_of(gamma),
        n: sample.len(),
        exceedances: count,
    })
}

/// Moment (Dekkers–Einmahl–de Haan) estimator built on the Hill statistic.
pub fn moment<F: Scalar>(sample: &SortedSample<F>, k: usize) -> Result<TailEstimate<F>> {
    let cut = check_k(sample, k)?;
    let (h, s) = log_excess_moments(sample, k, cut);
    if s <= F::zero() {
        return Err(Error::Degenerate(
            "second log-moment is zero (top order statistics tied with X_(n-k))".into(),
        ));
    }
    let denom = F::one() - h * h / s;
    if denom <= F::epsilon() * F::from_f64_lossy(64.0) {
        return Err(Error::Degenerate(
            "moment correction is singular: squared Hill statistic equals the second log-moment"
                .into(),
        ));
    }
    let half = F::from_f64_lossy(0.5);
    let gamma = h + F::one() - half / denom;
    Ok(TailEstimate {
        method: TailMethod::Moment,
        k: Some(k),
        threshold: cut,
        gamma,
        alpha: alpha_of(gamma),
        n: sample.len(),
        exceedances: k,
    })
}

/// One point of the sample mean excess function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanExcessPoint<F> {
    pub u: F,
    pub e: F,
    pub count: usize,
}

pub fn sample_mean_excess<F: Scalar>(sample: &[F], u: F) -> Result<MeanExcessPoint<F>> {
    let (sum, count) = sample
        .iter()
        .filter(|&&x| x > u)
        .fold((F::zero(), 0usize), |(s, c), &x| (s + (x - u), c + 1));
    if count == 0 {
        return Err(Error::NoExceedances {
            threshold: u.to_f64_lossy(),
        });
    }
    Ok(MeanExcessPoint {
        u,
        e: sum / F::from_usize_lossy(count),
        count,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeanExcessCurve<F> {
    pub points: Vec<MeanExcessPoint<F>>,
    /// Grid values dropped for lack of exceedances.
    pub omitted: Vec<F>,
}

pub fn mean_excess_curve<F: Scalar>(sample: &[F], grid: &[F]) -> Result<MeanExcessCurve<F>> {
    let sorted = SortedSample::new(sample)?;
    let xs = sorted.as_slice();
    // Suffix sums make each grid point O(log n).
    let mut suffix = vec![F::zero(); xs.len() + 1];
    for i in (0..xs.len()).rev() {
        suffix[i] = suffix[i + 1] + xs[i];
    }
    let mut points = Vec::new();
    let mut omitted = Vec::new();
    for &u in grid {
        let first = xs.partition_point(|&x| x <= u);
        let count = xs.len() - first;
        if count == 0 {
            omitted.push(u);
            continue;
        }
        let cf = F::from_usize_lossy(count);
        points.push(MeanExcessPoint {
            u,
            e: suffix[first] / cf - u,
            count,
        });
    }
    if points.is_empty() {
        return Err(Error::Degenerate(
            "no grid point has an exceedance; the mean excess curve is empty".into(),
        ));
    }
    Ok(MeanExcessCurve { points, omitted })
}

/// Distinct order statistics below the five largest values.
pub fn default_mean_excess_grid<F: Scalar>(sample: &SortedSample<F>) -> Vec<F> {
    let xs = sample.as_slice();
    let mut grid: Vec<F> = xs[..xs.len().saturating_sub(5)].to_vec();
    grid.dedup();
    grid
}

/// Least-squares slope of `e` against `u`.
pub fn least_squares_slope<F: Scalar>(points: &[MeanExcessPoint<F>]) -> Option<F> {
    if points.len() < 2 {
        return None;
    }
    let n = F::from_usize_lossy(points.len());
    let mu = points.iter().map(|p| p.u).sum::<F>() / n;
    let me = points.iter().map(|p| p.e).sum::<F>() / n;
    let (sxy, sxx) = points.iter().fold((F::zero(), F::zero()), |(a, b), p| {
        let du = p.u - mu;
        (a + du * (p.e - me), b + du * du)
    });
    (sxx > F::zero()).then(|| sxy / sxx)
}

/// Pareto-type tail model `P{X > x} = c x^(-alpha)` on `[x_min, inf)`, with
/// the slowly varying factor held constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerLawModel<F> {
    pub alpha: F,
    pub x_min: F,
    pub c: F,
}

impl<F: Scalar> PowerLawModel<F> {
    pub fn new(alpha: F, x_min: F) -> Result<Self> {
        if !(alpha > F::zero()) || !(x_min > F::zero()) {
            return Err(invalid("power law needs alpha > 0 and x_min > 0"));
        }
        Ok(PowerLawModel {
            alpha,
            x_min,
            c: x_min.powf(alpha),
        })
    }

    pub fn density(&self, x: F) -> Result<F> {
        power_law_density(self, x)
    }

    pub fn survival(&self, x: F) -> Result<F> {
        if x < self.x_min {
            return Err(invalid(format!("x = {x} below x_min = {}", self.x_min)));
        }
        Ok(self.c * x.powf(-self.alpha))
    }
}

pub fn power_law_density<F: Scalar>(model: &PowerLawModel<F>, x: F) -> Result<F> {
    if x < model.x_min {
        return Err(invalid(format!("x = {x} below x_min = {}", model.x_min)));
    }
    Ok(model.x_min.powf(model.alpha) * model.alpha * x.powf(-model.alpha - F::one()))
}

/// Power-law density with cut `X_(n-k)` and the Hill tail index.
pub fn fit_power_law<F: Scalar>(sample: &SortedSample<F>, k: usize) -> Result<PowerLawModel<F>> {
    let est = hill(sample, k)?;
    let alpha = est
        .alpha
        .ok_or_else(|| Error::Degenerate("Hill gamma is zero; alpha undefined".into()))?;
    PowerLawModel::new(alpha, est.threshold)
}

/// Settings for double-bootstrap selection of `k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DoubleBootstrap {
    pub resamples: usize,
    /// First subsample size; `floor(n^0.9)` when unset.
    pub n1: Option<usize>,
    pub seed: u64,
}

impl DoubleBootstrap {
    pub fn new(resamples: usize, seed: u64) -> Self {
        DoubleBootstrap {
            resamples,
            n1: None,
            seed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BootstrapSelection {
    pub k: usize,
    pub k1: usize,
    pub k2: usize,
    pub n: usize,
    pub n1: usize,
    pub n2: usize,
    pub resamples: usize,
    pub seed: u64,
}

/// Minimum number of positive observations accepted by the bootstrap.
pub const MIN_BOOTSTRAP_SAMPLE: usize = 100;

const CHUNK: usize = 8;

/// Selects `k` by the Danielsson–de Haan–Peng–de Vries double bootstrap.
///
/// Only the positive values of `sample` take part; the returned `k` is
/// valid for [`hill`] on the full sample because zeros sort below them.
pub fn double_bootstrap_k<F: Scalar>(
    sample: &SortedSample<F>,
    settings: &DoubleBootstrap,
) -> Result<BootstrapSelection> {
    let logs: Vec<F> = sample.positive().iter().map(|x| x.ln()).collect();
    let n = logs.len();
    if n < MIN_BOOTSTRAP_SAMPLE {
        return Err(Error::Degenerate(format!(
            "only {n} positive values; the double bootstrap needs at least \
             {MIN_BOOTSTRAP_SAMPLE}, choose k manually"
        )));
    }
    if settings.resamples < 1 {
        return Err(invalid("bootstrap needs at least one resample"));
    }
    let n1 = settings
        .n1
        .unwrap_or_else(|| (n as f64).powf(0.9).floor() as usize);
    if n1 <= 2 || n1 >= n {
        return Err(invalid(format!("n1 must satisfy 2 < n1 < n (n1 = {n1}, n = {n})")));
    }
    let n2 = (n1 * n1).div_ceil(n);
    if n2 < 3 {
        return Err(invalid(format!("n2 = ceil(n1^2/n) = {n2} must be at least 3")));
    }

    let b = settings.resamples;
    let k1 = argmin(&averaged_criterion(&logs, n1, b, settings.seed, 0));
    let k2 = argmin(&averaged_criterion(&logs, n2, b, settings.seed, b as u64));

    Ok(BootstrapSelection {
        k: combine_k(k1, k2, n1, n),
        k1,
        k2,
        n,
        n1,
        n2,
        resamples: b,
        seed: settings.seed,
    })
}

/// `k* = (k1^2/k2) * ((ln k1)^2 / (2 ln n1 - ln k1)^2)^((ln n1 - ln k1)/ln n1)`,
/// rounded and clipped to `[1, n-1]`.
fn combine_k(k1: usize, k2: usize, n1: usize, n: usize) -> usize {
    let (k1f, k2f, ln_n1) = (k1 as f64, k2 as f64, (n1 as f64).ln());
    let ln_k1 = k1f.ln();
    let base = ln_k1 * ln_k1 / (2.0 * ln_n1 - ln_k1).powi(2);
    let k = k1f * k1f / k2f * base.powf((ln_n1 - ln_k1) / ln_n1);
    if k.is_finite() {
        (k.round() as usize).clamp(1, n - 1)
    } else {
        1
    }
}

fn argmin<F: Scalar>(values: &[F]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if v < &values[best] || values[best].is_nan() {
            best = i;
        }
    }
    best + 1
}

/// Bootstrap average over `b` resamples of size `m` of
/// `(M_k - 2 H_k^2)^2` for `k = 1..m-1` (entry `k-1`).
fn averaged_criterion<F: Scalar>(logs: &[F], m: usize, b: usize, seed: u64, stream: u64) -> Vec<F> {
    use rand::Rng;

    let chunks: Vec<Vec<F>> = (0..b.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut acc = vec![F::zero(); m - 1];
            let mut draw = vec![F::zero(); m];
            for r in (c * CHUNK)..((c + 1) * CHUNK).min(b) {
                let mut rng = task_rng(seed, stream + r as u64);
                for slot in draw.iter_mut() {
                    *slot = logs[rng.gen_range(0..logs.len())];
                }
                draw.sort_by(|a, b| b.partial_cmp(a).unwrap());
                let (mut s1, mut s2) = (F::zero(), F::zero());
                for k in 1..m {
                    let l = draw[k - 1];
                    s1 = s1 + l;
                    s2 = s2 + l * l;
                    let kf = F::from_usize_lossy(k);
                    let cut = draw[k];
                    let h = s1 / kf - cut;
                    let second = s2 / kf - (cut + cut) * s1 / kf + cut * cut;
                    let q = second - (h * h + h * h);
                    acc[k - 1] = acc[k - 1] + q * q;
                }
            }
            acc
        })
        .collect();

    let mut total = vec![F::zero(); m - 1];
    for chunk in &chunks {
        for (t, v) in total.iter_mut().zip(chunk) {
            *t = *t + *v;
        }
    }
    let bf = F::from_usize_lossy(b);
    total.iter_mut().for_each(|t| *t = *t / bf);
    total
}

/// Average of an estimator over full-size bootstrap resamples at fixed `k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BootstrapAverage<F> {
    pub method: TailMethod,
    pub k: usize,
    pub gamma: F,
    pub alpha: Option<F>,
    pub resamples_used: usize,
    pub resamples_failed: usize,
}

/// Re-estimates `method` on `resamples` bootstrap resamples of the positive
/// values and averages gamma and alpha. The Ratio estimator uses each
/// resample's own `X_(n-k)` as threshold.
pub fn bootstrap_average<F: Scalar>(
    sample: &SortedSample<F>,
    method: TailMethod,
    k: usize,
    resamples: usize,
    seed: u64,
) -> Result<BootstrapAverage<F>> {
    use rand::Rng;

    let positive = sample.positive();
    if resamples < 1 {
        return Err(invalid("bootstrap needs at least one resample"));
    }
    if positive.len() < 2 {
        return Err(Error::Degenerate("fewer than two positive values".into()));
    }
    // Separate stream block from the k-selection resamples.
    let base = 1u64 << 40;
    let estimates: Vec<Option<TailEstimate<F>>> = (0..resamples)
        .into_par_iter()
        .map(|r| {
            let mut rng = task_rng(seed, base + r as u64);
            let draw: Vec<F> = (0..positive.len())
                .map(|_| positive[rng.gen_range(0..positive.len())])
                .collect();
            let s = SortedSample::new(&draw).ok()?;
            match method {
                TailMethod::Hill => hill(&s, k).ok(),
                TailMethod::Moment => moment(&s, k).ok(),
                TailMethod::Ratio => {
                    let cut = s.as_slice().get(s.len().checked_sub(k + 1)?)?;
                    ratio(s.as_slice(), *cut).ok()
                }
            }
        })
        .collect();

    let ok: Vec<&TailEstimate<F>> = estimates.iter().flatten().collect();
    if ok.is_empty() {
        return Err(Error::Degenerate(format!(
            "{method} failed on every bootstrap resample"
        )));
    }
    let used = F::from_usize_lossy(ok.len());
    let gamma = ok.iter().map(|e| e.gamma).sum::<F>() / used;
    let alphas: Vec<F> = ok.iter().filter_map(|e| e.alpha).collect();
    let alpha = (!alphas.is_empty())
        .then(|| alphas.iter().copied().sum::<F>() / F::from_usize_lossy(alphas.len()));
    Ok(BootstrapAverage {
        method,
        k,
        gamma,
        alpha,
        resamples_used: ok.len(),
        resamples_failed: resamples - ok.len(),
    })
}

/// Hill gamma and alpha for every `k` in `ks` (skipping invalid ones).
pub fn hill_curve<F: Scalar>(sample: &SortedSample<F>, ks: impl IntoIterator<Item = usize>) -> Vec<TailEstimate<F>> {
    ks.into_iter().filter_map(|k| hill(sample, k).ok()).collect()
}
