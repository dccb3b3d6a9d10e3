use rayon::prelude::*;
use serde::Serialize;

use super::SequenceSource;
use crate::error::{invalid, Result};
use crate::rng::task_rng;

/// Hitting steps of repeated independent runs; `None` marks a run censored
/// at `max_steps`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FhtRuns {
    pub threshold: f64,
    pub max_steps: usize,
    pub seed: u64,
    pub steps: Vec<Option<usize>>,
    pub summary: FhtSummary,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FhtSummary {
    pub runs: usize,
    /// Mean over uncensored runs.
    pub mean: Option<f64>,
    pub median: Option<f64>,
    pub censored_count: usize,
    pub all_censored: bool,
    pub acceptance_rate: Option<f64>,
}

impl FhtRuns {
    pub fn hits(&self) -> impl Iterator<Item = usize> + '_ {
        self.steps.iter().flatten().copied()
    }
}

/// First index `j >= 1` with an observation strictly above `threshold`, for
/// `runs` independent copies of the source built by `make`. Run `r` draws
/// from stream `(seed, r)`, so the result does not depend on scheduling.
pub fn empirical_fht<S, M>(
    make: M,
    threshold: f64,
    runs: usize,
    max_steps: usize,
    seed: u64,
) -> Result<FhtRuns>
where
    S: SequenceSource,
    M: Fn() -> Result<S> + Sync,
{
    if runs < 1 {
        return Err(invalid("need at least one run"));
    }
    if max_steps < 1 {
        return Err(invalid("max_steps must be at least 1"));
    }
    let per_run: Vec<(Option<usize>, Option<(u64, u64)>)> = (0..runs)
        .into_par_iter()
        .map(|r| {
            let mut source = make()?;
            let mut rng = task_rng(seed, r as u64);
            let hit = (1..=max_steps).find(|_| source.next_value(&mut rng) > threshold);
            Ok((hit, source.acceptance()))
        })
        .collect::<Result<_>>()?;

    let steps: Vec<Option<usize>> = per_run.iter().map(|(h, _)| *h).collect();
    let mut hits: Vec<usize> = steps.iter().flatten().copied().collect();
    hits.sort_unstable();
    let censored_count = runs - hits.len();
    let mean = (!hits.is_empty()).then(|| hits.iter().sum::<usize>() as f64 / hits.len() as f64);
    let median = (!hits.is_empty()).then(|| {
        let m = hits.len() / 2;
        if hits.len() % 2 == 1 {
            hits[m] as f64
        } else {
            (hits[m - 1] + hits[m]) as f64 / 2.0
        }
    });
    let (proposed, accepted) = per_run
        .iter()
        .filter_map(|(_, a)| *a)
        .fold((0u64, 0u64), |(p, a), (pp, aa)| (p + pp, a + aa));
    let acceptance_rate = (proposed > 0).then(|| accepted as f64 / proposed as f64);

    Ok(FhtRuns {
        threshold,
        max_steps,
        seed,
        steps,
        summary: FhtSummary {
            runs,
            mean,
            median,
            censored_count,
            all_censored: censored_count == runs,
            acceptance_rate,
        },
    })
}

/// Total-variation distance between the empirical law of `steps` and
/// Geometric(`p`) on `{1, 2, ...}`. Censored runs form one atom compared
/// with the model mass beyond the largest step any run could reach.
pub fn geometric_tv_distance(steps: &[Option<usize>], max_steps: usize, p: f64) -> Result<f64> {
    if steps.is_empty() {
        return Err(invalid("no runs"));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(invalid(format!("geometric parameter must lie in (0, 1], got {p}")));
    }
    let n = steps.len() as f64;
    let top = steps.iter().flatten().copied().max().unwrap_or(0).max(1);
    let mut counts = vec![0usize; top + 1];
    let mut censored = 0usize;
    for s in steps {
        match s {
            Some(j) => counts[*j] += 1,
            None => censored += 1,
        }
    }
    let q = 1.0 - p;
    let mut total = 0.0;
    let mut model = p;
    for &count in &counts[1..] {
        total += (count as f64 / n - model).abs();
        model *= q;
    }
    // Model mass on (top, max_steps] has no observations; beyond max_steps
    // it is compared with the censored atom.
    let beyond_top = q.powf(top as f64);
    let beyond_cap = q.powf(max_steps.max(top) as f64);
    total += beyond_top - beyond_cap;
    total += (censored as f64 / n - beyond_cap).abs();
    Ok(0.5 * total)
}
