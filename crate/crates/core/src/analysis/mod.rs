//! Analysis of run-length distributions: cutoff estimates, restart and
//! parallel transforms, dominance comparison, anytime combination, speedup
//! classification, and expected utility.
//!
//! Every operation works against the [`CdfSource`] trait, which presents an
//! empirical RLD, an averaged RLD, a parametric model, or a transformed
//! source uniformly as `t -> P(solved within t)` with a known censoring
//! horizon.

mod ops;

pub use ops::{
    anytime_schedule, compare, cutoff_candidates, expected_utility, markov_cutoff,
    optimal_cutoff_expected_time, optimal_cutoff_geometric, speedup_classification, tail_bounds,
    tchebichev_cutoff, AnytimeReport, Comparison, CutoffMethod, CutoffReport, Schedule,
    SpeedupClass, SpeedupReport, TailBounds,
};

use serde::Serialize;
use statrs::function::gamma::{gamma, gamma_lr};
use thiserror::Error;

use crate::fit::ModelCdf;
use crate::rld::{AveragedRld, Rld};

const LN2: f64 = std::f64::consts::LN_2;

#[derive(Debug, Error, PartialEq)]
pub enum AnalysisError {
    #[error("probability {p} outside [0, 1)")]
    InvalidProbability { p: f64 },
    #[error("standard deviation {sd} must be finite and non-negative")]
    InvalidStdDev { sd: f64 },
    #[error("no solutions observed: the cdf is identically zero")]
    NoSolutionsObserved,
    #[error("restart at {t_c} never succeeds: cdf({t_c}) = 0")]
    RestartNeverSucceeds { t_c: f64 },
    #[error("restart period {t_c} must be at least 1 flip")]
    PeriodTooShort { t_c: f64 },
    #[error("restart period {t_c} lies beyond the censoring horizon {horizon}")]
    PeriodBeyondHorizon { t_c: f64, horizon: f64 },
    #[error("empty probe grid")]
    EmptyProbeGrid,
    #[error(transparent)]
    Fit(#[from] crate::fit::FitError),
}

/// A cumulative distribution of solve times, evaluable anywhere, with a known
/// censoring horizon (`None` for parametric models, which are trusted on all
/// of `[0, inf)`).
pub trait CdfSource {
    /// `P(solved within t)`; beyond the horizon the value at the horizon.
    fn cdf(&self, t: f64) -> f64;

    /// Largest `t` the cdf is measured up to, if censored.
    fn horizon(&self) -> Option<f64>;

    /// Representative evaluation grid: jump points for empirical sources,
    /// a quantile grid for models. Sorted ascending, at most `max_points`.
    fn probe_points(&self, max_points: usize) -> Vec<f64>;

    /// Smallest cdf difference that counts as a real difference (one sample
    /// mass for empirical sources).
    fn equality_tolerance(&self) -> f64;

    /// `E[min(T, t)]`: expected cost of one run truncated at `t`.
    fn expected_cost_truncated(&self, t: f64) -> f64 {
        // Numeric fallback: integrate the survival function on [0, t] with
        // composite Simpson.
        if t <= 0.0 {
            return 0.0;
        }
        let n = 4096;
        let h = t / n as f64;
        let mut acc = 1.0 + (1.0 - self.cdf(t));
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * (1.0 - self.cdf(i as f64 * h));
        }
        acc * h / 3.0
    }

    /// `E[u(T) ; T <= horizon]`: utility-weighted solve mass. Unsolved mass
    /// beyond the horizon contributes zero.
    fn expected_utility(&self, u: &dyn Fn(f64) -> f64, horizon: f64) -> f64 {
        // Midpoint Riemann-Stieltjes sum against the cdf.
        let n = 1 << 20;
        let h = horizon / n as f64;
        let mut acc = 0.0;
        let mut prev = self.cdf(0.0);
        for i in 1..=n {
            let t = i as f64 * h;
            let cur = self.cdf(t);
            acc += u(t - 0.5 * h) * (cur - prev);
            prev = cur;
        }
        acc
    }
}

impl CdfSource for Rld {
    fn cdf(&self, t: f64) -> f64 {
        if t < 0.0 {
            return 0.0;
        }
        let probe = t.min(self.cutoff() as f64).floor() as u64;
        Rld::cdf(self, probe).p
    }

    fn horizon(&self) -> Option<f64> {
        Some(self.cutoff() as f64)
    }

    fn probe_points(&self, max_points: usize) -> Vec<f64> {
        let mut ts: Vec<f64> = self.successes().iter().map(|&x| x as f64).collect();
        ts.dedup();
        ts.push(self.cutoff() as f64);
        thin_to(ts, max_points)
    }

    fn equality_tolerance(&self) -> f64 {
        1.0 / self.n_trials() as f64
    }

    fn expected_cost_truncated(&self, t: f64) -> f64 {
        let t = t.min(self.cutoff() as f64);
        if t <= 0.0 {
            return 0.0;
        }
        let probe = t.floor() as u64;
        let count = self.successes().partition_point(|&x| x <= probe);
        let sum_below: f64 = self.successes()[..count].iter().map(|&x| x as f64).sum();
        (sum_below + (self.n_trials() - count) as f64 * t) / self.n_trials() as f64
    }

    fn expected_utility(&self, u: &dyn Fn(f64) -> f64, horizon: f64) -> f64 {
        // Exact sum over the observed solve times.
        let h = horizon.min(self.cutoff() as f64).floor() as u64;
        let count = self.successes().partition_point(|&x| x <= h);
        self.successes()[..count].iter().map(|&x| u(x as f64)).sum::<f64>()
            / self.n_trials() as f64
    }
}

impl CdfSource for AveragedRld {
    fn cdf(&self, t: f64) -> f64 {
        self.components().iter().map(|r| CdfSource::cdf(r, t)).sum::<f64>()
            / self.components().len() as f64
    }

    fn horizon(&self) -> Option<f64> {
        Some(self.min_cutoff() as f64)
    }

    fn probe_points(&self, max_points: usize) -> Vec<f64> {
        let horizon = self.min_cutoff() as f64;
        let mut ts: Vec<f64> = self
            .components()
            .iter()
            .flat_map(|r| r.successes().iter().map(|&x| x as f64))
            .filter(|&x| x <= horizon)
            .collect();
        ts.push(horizon);
        ts.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        ts.dedup();
        thin_to(ts, max_points)
    }

    fn equality_tolerance(&self) -> f64 {
        // One sample of the sparsest component, diluted by averaging.
        let min_n = self.components().iter().map(Rld::n_trials).min().unwrap_or(1);
        1.0 / (min_n * self.components().len()) as f64
    }

    fn expected_cost_truncated(&self, t: f64) -> f64 {
        self.components().iter().map(|r| r.expected_cost_truncated(t)).sum::<f64>()
            / self.components().len() as f64
    }

    fn expected_utility(&self, u: &dyn Fn(f64) -> f64, horizon: f64) -> f64 {
        self.components().iter().map(|r| r.expected_utility(u, horizon)).sum::<f64>()
            / self.components().len() as f64
    }
}

impl CdfSource for ModelCdf {
    fn cdf(&self, t: f64) -> f64 {
        ModelCdf::cdf(self, t)
    }

    fn horizon(&self) -> Option<f64> {
        None
    }

    fn probe_points(&self, max_points: usize) -> Vec<f64> {
        quantile_grid(self, max_points)
    }

    fn equality_tolerance(&self) -> f64 {
        1e-12
    }

    fn expected_cost_truncated(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        match *self {
            ModelCdf::Exponential { median } => median / LN2 * ModelCdf::cdf(self, t),
            ModelCdf::Weibull { median, shape } => {
                // integral of the survival function via the lower incomplete
                // gamma function.
                let y = LN2 * (t / median).powf(shape);
                let a = 1.0 / shape;
                median / shape / LN2.powf(a) * gamma(a) * gamma_lr(a, y)
            }
        }
    }
}

fn quantile_grid(model: &ModelCdf, points: usize) -> Vec<f64> {
    (0..points)
        .map(|i| {
            let p = (i as f64 + 0.5) / points as f64;
            model.quantile(p).expect("p < 1")
        })
        .collect()
}

/// Equal-weight mixture of parametric models; closed-form everywhere.
#[derive(Clone, Debug, Serialize)]
pub struct MixtureCdf {
    components: Vec<ModelCdf>,
}

impl MixtureCdf {
    pub fn new(components: Vec<ModelCdf>) -> MixtureCdf {
        assert!(!components.is_empty(), "mixture needs at least one component");
        MixtureCdf { components }
    }

    pub fn components(&self) -> &[ModelCdf] {
        &self.components
    }
}

impl CdfSource for MixtureCdf {
    fn cdf(&self, t: f64) -> f64 {
        self.components.iter().map(|m| m.cdf(t)).sum::<f64>() / self.components.len() as f64
    }

    fn horizon(&self) -> Option<f64> {
        None
    }

    fn probe_points(&self, max_points: usize) -> Vec<f64> {
        let per = (max_points / self.components.len()).max(2);
        let mut ts: Vec<f64> =
            self.components.iter().flat_map(|m| quantile_grid(m, per)).collect();
        ts.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        ts.dedup();
        ts
    }

    fn equality_tolerance(&self) -> f64 {
        1e-12
    }

    fn expected_cost_truncated(&self, t: f64) -> f64 {
        self.components.iter().map(|m| m.expected_cost_truncated(t)).sum::<f64>()
            / self.components.len() as f64
    }

    fn expected_utility(&self, u: &dyn Fn(f64) -> f64, horizon: f64) -> f64 {
        self.components.iter().map(|m| m.expected_utility(u, horizon)).sum::<f64>()
            / self.components.len() as f64
    }
}

/// A plateau distribution `limit * F_inner(t)`: the signature shape of an
/// essentially incomplete algorithm whose success probability converges to
/// `limit < 1`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct PlateauCdf {
    pub limit: f64,
    pub inner: ModelCdf,
}

impl PlateauCdf {
    /// Plateau over an exponential ramp: `limit * (1 - 2^(-t/m))`.
    pub fn exponential(limit: f64, median_scale: f64) -> PlateauCdf {
        PlateauCdf { limit, inner: ModelCdf::Exponential { median: median_scale } }
    }
}

impl CdfSource for PlateauCdf {
    fn cdf(&self, t: f64) -> f64 {
        self.limit * self.inner.cdf(t)
    }

    fn horizon(&self) -> Option<f64> {
        None
    }

    fn probe_points(&self, max_points: usize) -> Vec<f64> {
        quantile_grid(&self.inner, max_points)
    }

    fn equality_tolerance(&self) -> f64 {
        1e-12
    }

    fn expected_cost_truncated(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        // E[min(T,t)] = t - limit * (t - E[min(T_inner, t)]).
        t - self.limit * (t - self.inner.expected_cost_truncated(t))
    }
}

/// Distribution of a strategy that restarts `inner` from scratch every
/// `period` flips: `G(k*p + r) = 1 - (1 - F(p))^k * (1 - F(r))`.
#[derive(Clone, Debug)]
pub struct RestartedCdf<S> {
    inner: S,
    period: f64,
    survival_per_period: f64,
}

/// Restart transform; fails if the period is under one flip, beyond the
/// source horizon, or has zero success probability.
pub fn restart_transform<S: CdfSource>(
    source: S,
    period: f64,
) -> Result<RestartedCdf<S>, AnalysisError> {
    if period < 1.0 {
        return Err(AnalysisError::PeriodTooShort { t_c: period });
    }
    if let Some(h) = source.horizon() {
        if period > h {
            return Err(AnalysisError::PeriodBeyondHorizon { t_c: period, horizon: h });
        }
    }
    let p_success = source.cdf(period);
    if p_success <= 0.0 {
        return Err(AnalysisError::RestartNeverSucceeds { t_c: period });
    }
    Ok(RestartedCdf { survival_per_period: 1.0 - p_success, period, inner: source })
}

impl<S> RestartedCdf<S> {
    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn inner(&self) -> &S {
        &self.inner
    }
}

impl<S: CdfSource> CdfSource for RestartedCdf<S> {
    fn cdf(&self, t: f64) -> f64 {
        if t < 0.0 {
            return 0.0;
        }
        let k = (t / self.period).floor();
        let r = t - k * self.period;
        1.0 - self.survival_per_period.powf(k) * (1.0 - self.inner.cdf(r))
    }

    fn horizon(&self) -> Option<f64> {
        // Only ever evaluates the inner cdf on [0, period].
        None
    }

    fn probe_points(&self, max_points: usize) -> Vec<f64> {
        // Inner jump offsets tiled across restart periods until the curve
        // saturates or the budget is spent.
        let inner: Vec<f64> = self
            .inner
            .probe_points(max_points)
            .into_iter()
            .filter(|&t| t < self.period)
            .collect();
        let mut out = Vec::with_capacity(max_points.min(1 << 16));
        let mut k = 0.0f64;
        loop {
            let base = k * self.period;
            for &r in &inner {
                out.push(base + r);
            }
            out.push(base + self.period);
            if out.len() >= max_points || self.cdf(base + self.period) > 1.0 - 1e-9 {
                break;
            }
            k += 1.0;
        }
        out.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        out.dedup();
        out.truncate(max_points);
        out
    }

    fn equality_tolerance(&self) -> f64 {
        self.inner.equality_tolerance()
    }
}

/// Distribution of `p` independent runs racing on `p` processors:
/// `G(t) = 1 - (1 - F(t))^p`.
#[derive(Clone, Debug)]
pub struct ParallelCdf<S> {
    inner: S,
    processors: u32,
}

pub fn parallel_transform<S: CdfSource>(source: S, processors: u32) -> ParallelCdf<S> {
    assert!(processors >= 1, "processor count must be at least 1");
    ParallelCdf { inner: source, processors }
}

impl<S> ParallelCdf<S> {
    pub fn processors(&self) -> u32 {
        self.processors
    }
}

impl<S: CdfSource> CdfSource for ParallelCdf<S> {
    fn cdf(&self, t: f64) -> f64 {
        1.0 - (1.0 - self.inner.cdf(t)).powi(self.processors as i32)
    }

    fn horizon(&self) -> Option<f64> {
        self.inner.horizon()
    }

    fn probe_points(&self, max_points: usize) -> Vec<f64> {
        self.inner.probe_points(max_points)
    }

    fn equality_tolerance(&self) -> f64 {
        self.inner.equality_tolerance()
    }
}

/// The anytime combination curve: restarted `a` up to the switch point, `b`
/// afterwards.
#[derive(Clone, Debug)]
pub struct CompositeCdf<A, B> {
    pub first: A,
    pub second: B,
    pub switch_at: f64,
}

impl<A: CdfSource, B: CdfSource> CdfSource for CompositeCdf<A, B> {
    fn cdf(&self, t: f64) -> f64 {
        if t <= self.switch_at {
            self.first.cdf(t)
        } else {
            self.second.cdf(t)
        }
    }

    fn horizon(&self) -> Option<f64> {
        self.second.horizon()
    }

    fn probe_points(&self, max_points: usize) -> Vec<f64> {
        let mut ts = self.first.probe_points(max_points / 2);
        ts.retain(|&t| t <= self.switch_at);
        ts.extend(
            self.second.probe_points(max_points / 2).into_iter().filter(|&t| t > self.switch_at),
        );
        ts.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        ts.dedup();
        ts
    }

    fn equality_tolerance(&self) -> f64 {
        self.first.equality_tolerance().max(self.second.equality_tolerance())
    }
}

fn thin_to(ts: Vec<f64>, max_points: usize) -> Vec<f64> {
    if ts.len() <= max_points || max_points == 0 {
        return ts;
    }
    let last = *ts.last().expect("non-empty");
    let stride = ts.len() as f64 / (max_points - 1) as f64;
    let mut out: Vec<f64> =
        (0..max_points - 1).map(|i| ts[(i as f64 * stride) as usize]).collect();
    out.push(last);
    out.dedup();
    out
}
