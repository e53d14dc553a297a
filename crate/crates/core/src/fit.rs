//! Parametric run-length models and goodness-of-fit testing.
//!
//! Both families use the base-2 parameterization, so the scale parameter `m`
//! is the median of the distribution:
//!
//! - exponential `ed[m]`:   `F(x) = 1 - 2^(-x/m)`
//! - Weibull `wd[m, a]`:    `F(x) = 1 - 2^(-(x/m)^a)`
//!
//! Parameters are estimated by maximum likelihood with right-censoring:
//! censored trials contribute survival mass at the cutoff and are never
//! treated as successes. The chi-square test bins the truncated model into
//! equal-probability cells.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};
use thiserror::Error;

use crate::rld::Rld;

const LN2: f64 = std::f64::consts::LN_2;

/// Bounded search range for the Weibull shape.
const ALPHA_MIN: f64 = 0.05;
const ALPHA_MAX: f64 = 20.0;
/// Relative convergence tolerance of the shape search.
const ALPHA_TOL: f64 = 1e-9;

/// A fitted (or hypothesized) run-length distribution model.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum ModelCdf {
    Exponential { median: f64 },
    Weibull { median: f64, shape: f64 },
}

impl ModelCdf {
    pub fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        match *self {
            ModelCdf::Exponential { median } => 1.0 - (-x / median * LN2).exp(),
            ModelCdf::Weibull { median, shape } => 1.0 - (-(x / median).powf(shape) * LN2).exp(),
        }
    }

    pub fn pdf(&self, x: f64) -> f64 {
        match *self {
            ModelCdf::Exponential { median } => {
                if x < 0.0 {
                    0.0
                } else {
                    LN2 / median * (-x / median * LN2).exp()
                }
            }
            ModelCdf::Weibull { median, shape } => {
                if x <= 0.0 {
                    0.0
                } else {
                    let z = (x / median).powf(shape);
                    LN2 * shape / x * z * (-z * LN2).exp()
                }
            }
        }
    }

    /// Inverse cdf; requires `0 <= p < 1`.
    pub fn quantile(&self, p: f64) -> Result<f64, FitError> {
        if !(0.0..1.0).contains(&p) {
            return Err(FitError::InvalidProbability { p });
        }
        let base = -(1.0 - p).log2();
        Ok(match *self {
            ModelCdf::Exponential { median } => median * base,
            ModelCdf::Weibull { median, shape } => median * base.powf(1.0 / shape),
        })
    }

    pub fn median(&self) -> f64 {
        match *self {
            ModelCdf::Exponential { median } | ModelCdf::Weibull { median, .. } => median,
        }
    }

    /// Number of free parameters, for chi-square degree-of-freedom accounting.
    pub fn param_count(&self) -> usize {
        match self {
            ModelCdf::Exponential { .. } => 1,
            ModelCdf::Weibull { .. } => 2,
        }
    }

    /// Equivalent base-e parameters, for interoperability with the usual
    /// statistical parameterization `S(x) = exp(-(x/scale)^shape)`.
    pub fn base_e_params(&self) -> BaseEParams {
        match *self {
            ModelCdf::Exponential { median } => {
                BaseEParams { rate: LN2 / median, scale: median / LN2, shape: 1.0 }
            }
            ModelCdf::Weibull { median, shape } => {
                let scale = median / LN2.powf(1.0 / shape);
                BaseEParams { rate: 1.0 / scale, scale, shape }
            }
        }
    }
}

/// Base-e view of a model.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct BaseEParams {
    pub rate: f64,
    pub scale: f64,
    pub shape: f64,
}

/// Quantile of `ed[m]`: `t = m * log2(1/(1-p))`.
pub fn exp_quantile(median: f64, p: f64) -> Result<f64, FitError> {
    ModelCdf::Exponential { median }.quantile(p)
}

#[derive(Debug, Error, PartialEq)]
pub enum FitError {
    #[error("insufficient sample: {got} successes, need at least {need}")]
    InsufficientSample { got: usize, need: usize },
    #[error("sample too small for goodness-of-fit: only {bins} bins with expected count >= {min_expected}")]
    SampleTooSmallForGof { bins: usize, min_expected: f64 },
    #[error("no degrees of freedom left: {bins} bins, {params} fitted parameters")]
    NoDegreesOfFreedom { bins: usize, params: usize },
    #[error("probability {p} outside [0, 1)")]
    InvalidProbability { p: f64 },
    #[error("model has no mass on the test interval")]
    EmptyModelMass,
    #[error("Weibull fit failed: {reason} (profile maximum at shape {alpha:.6})")]
    ShapeSearchFailed { reason: String, alpha: f64 },
    #[error("fit diagnostics failed: {0}")]
    Diagnostics(String),
}

/// Chi-square goodness-of-fit report with the full binning trace.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChiSquareReport {
    pub statistic: f64,
    pub df: usize,
    pub p_value: f64,
    /// `p_value >= significance`.
    pub pass: bool,
    pub significance: f64,
    pub bins: Vec<ChiSquareBin>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChiSquareBin {
    pub lo: f64,
    pub hi: f64,
    pub observed: usize,
    pub expected: f64,
}

/// Shape significance relative to 1 (the exponential boundary).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShapeVerdict {
    /// Confidence interval entirely below 1: heavier than exponential tail.
    BelowOne,
    CompatibleWithOne,
    /// Confidence interval entirely above 1: lighter than exponential tail.
    AboveOne,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ShapeAssessment {
    pub alpha: f64,
    pub std_error: f64,
    pub ci_lower: f64,
    pub ci_upper: f64,
    pub significance: f64,
    pub verdict: ShapeVerdict,
}

/// Result of fitting a model family to an RLD.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FitResult {
    pub model: ModelCdf,
    /// Successes entering the likelihood.
    pub n_used: usize,
    pub n_censored: usize,
    pub log_likelihood: f64,
    /// None when the sample is below the goodness-of-fit minimum.
    pub chi2: Option<ChiSquareReport>,
    /// Cross-check estimator: the empirical median (both families satisfy
    /// `F(m) = 1/2`), when observable.
    pub median_matching_m: Option<f64>,
    /// Shape significance versus the exponential, Weibull fits only.
    pub shape: Option<ShapeAssessment>,
}

#[derive(Clone, Copy, Debug)]
pub struct FitOptions {
    /// Minimum successes to attempt a fit.
    pub min_successes: usize,
    /// Minimum successes to attach a chi-square test.
    pub gof_min_successes: usize,
    /// Significance level for the chi-square verdict and shape interval.
    pub significance: f64,
    /// Optional left truncation of the chi-square test region, for excluding
    /// an initial transient. Fitting always uses the full sample.
    pub left_truncate: Option<f64>,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            min_successes: 30,
            gof_min_successes: 50,
            significance: 0.05,
            left_truncate: None,
        }
    }
}

/// Censored sample view: success times (zeros lifted to 0.5 so the
/// continuous likelihood is defined), censor count, censor time.
struct Sample {
    xs: Vec<f64>,
    n_censored: usize,
    censor_time: f64,
}

impl Sample {
    fn from_rld(rld: &Rld) -> Sample {
        Sample {
            xs: rld.successes().iter().map(|&x| if x == 0 { 0.5 } else { x as f64 }).collect(),
            n_censored: rld.n_censored(),
            censor_time: rld.cutoff() as f64,
        }
    }
}

/// Censored exponential MLE: `m = ln2 * (sum(x_i) + n_c * T) / k`.
fn exponential_mle(sample: &Sample) -> f64 {
    let k = sample.xs.len() as f64;
    let total: f64 =
        sample.xs.iter().sum::<f64>() + sample.n_censored as f64 * sample.censor_time;
    LN2 * total / k
}

/// Full censored log-likelihood of `wd[m, alpha]` (exponential at alpha = 1).
fn log_likelihood(sample: &Sample, median: f64, alpha: f64) -> f64 {
    let k = sample.xs.len() as f64;
    let mut ll = k * (LN2.ln() + alpha.ln()) - k * alpha * median.ln();
    let mut sum_pow = 0.0;
    for &x in &sample.xs {
        ll += (alpha - 1.0) * x.ln();
        sum_pow += (x / median).powf(alpha);
    }
    sum_pow += sample.n_censored as f64 * (sample.censor_time / median).powf(alpha);
    ll - LN2 * sum_pow
}

/// Profile median for a fixed shape:
/// `m(alpha) = (ln2/k * (sum x_i^alpha + n_c T^alpha))^(1/alpha)`.
///
/// Computed in a rescaled space so large run lengths cannot overflow.
fn profile_median(sample: &Sample, alpha: f64) -> f64 {
    if alpha == 1.0 {
        // The shape-1 profile IS the exponential MLE; evaluating it through
        // the same code keeps the family degeneracy bit-exact.
        return exponential_mle(sample);
    }
    let k = sample.xs.len() as f64;
    let scale = sample.xs.iter().copied().fold(sample.censor_time.max(1.0), f64::max);
    let mut s: f64 = sample.xs.iter().map(|&x| (x / scale).powf(alpha)).sum();
    s += sample.n_censored as f64 * (sample.censor_time / scale).powf(alpha);
    scale * (LN2 * s / k).powf(1.0 / alpha)
}

fn profile_log_likelihood(sample: &Sample, alpha: f64) -> f64 {
    log_likelihood(sample, profile_median(sample, alpha), alpha)
}

/// Fit `ed[m]` by censored maximum likelihood.
pub fn fit_exponential(rld: &Rld) -> Result<FitResult, FitError> {
    fit_exponential_with(rld, &FitOptions::default())
}

pub fn fit_exponential_with(rld: &Rld, opts: &FitOptions) -> Result<FitResult, FitError> {
    let sample = check_sample(rld, opts)?;
    let median = exponential_mle(&sample);
    let model = ModelCdf::Exponential { median };
    finish_fit(rld, opts, &sample, model, None)
}

/// Fit `wd[m, alpha]` by censored maximum likelihood: bounded search over the
/// shape with the median profiled out in closed form.
pub fn fit_weibull(rld: &Rld) -> Result<FitResult, FitError> {
    fit_weibull_with(rld, &FitOptions::default())
}

pub fn fit_weibull_with(rld: &Rld, opts: &FitOptions) -> Result<FitResult, FitError> {
    let sample = check_sample(rld, opts)?;
    let alpha = maximize_profile(&sample)?;
    let median = profile_median(&sample, alpha);
    let shape = assess_shape(&sample, median, alpha, opts.significance)?;
    let model = ModelCdf::Weibull { median, shape: alpha };
    finish_fit(rld, opts, &sample, model, Some(shape))
}

/// Weibull fit with the shape pinned; at `alpha = 1` the median equals the
/// exponential MLE exactly.
pub fn fit_weibull_constrained(
    rld: &Rld,
    alpha: f64,
    opts: &FitOptions,
) -> Result<FitResult, FitError> {
    let sample = check_sample(rld, opts)?;
    let median = profile_median(&sample, alpha);
    let model = ModelCdf::Weibull { median, shape: alpha };
    finish_fit(rld, opts, &sample, model, None)
}

fn check_sample(rld: &Rld, opts: &FitOptions) -> Result<Sample, FitError> {
    if rld.n_successes() < opts.min_successes {
        return Err(FitError::InsufficientSample {
            got: rld.n_successes(),
            need: opts.min_successes,
        });
    }
    Ok(Sample::from_rld(rld))
}

fn finish_fit(
    rld: &Rld,
    opts: &FitOptions,
    sample: &Sample,
    model: ModelCdf,
    shape: Option<ShapeAssessment>,
) -> Result<FitResult, FitError> {
    let (median, alpha) = match model {
        ModelCdf::Exponential { median } => (median, 1.0),
        ModelCdf::Weibull { median, shape } => (median, shape),
    };
    let chi2 = if rld.n_successes() >= opts.gof_min_successes {
        Some(chi_square_gof_with(rld, &model, model.param_count(), opts)?)
    } else {
        None
    };
    Ok(FitResult {
        model,
        n_used: rld.n_successes(),
        n_censored: rld.n_censored(),
        log_likelihood: log_likelihood(sample, median, alpha),
        chi2,
        median_matching_m: rld.median().ok().map(|m| m as f64),
        shape,
    })
}

/// Coarse log-spaced scan to bracket the profile maximum, then golden-section
/// refinement. A maximum at the search bound is reported as a failure, never
/// silently accepted.
fn maximize_profile(sample: &Sample) -> Result<f64, FitError> {
    const GRID: usize = 81;
    let lo_ln = ALPHA_MIN.ln();
    let hi_ln = ALPHA_MAX.ln();
    let alpha_at = |i: usize| (lo_ln + (hi_ln - lo_ln) * i as f64 / (GRID - 1) as f64).exp();
    let mut best_i = 0;
    let mut best_ll = f64::NEG_INFINITY;
    for i in 0..GRID {
        let ll = profile_log_likelihood(sample, alpha_at(i));
        if ll > best_ll {
            best_ll = ll;
            best_i = i;
        }
    }
    if best_i == 0 || best_i == GRID - 1 {
        return Err(FitError::ShapeSearchFailed {
            reason: "profile likelihood maximal at the search bound".into(),
            alpha: alpha_at(best_i),
        });
    }
    let (mut a, mut b) = (alpha_at(best_i - 1), alpha_at(best_i + 1));
    const INVPHI: f64 = 0.618_033_988_749_894_8;
    let mut x1 = b - INVPHI * (b - a);
    let mut x2 = a + INVPHI * (b - a);
    let mut f1 = profile_log_likelihood(sample, x1);
    let mut f2 = profile_log_likelihood(sample, x2);
    while (b - a) > ALPHA_TOL * (a.abs() + b.abs()) {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INVPHI * (b - a);
            f1 = profile_log_likelihood(sample, x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INVPHI * (b - a);
            f2 = profile_log_likelihood(sample, x2);
        }
    }
    Ok(0.5 * (a + b))
}

/// Wald interval for the shape from the observed information matrix,
/// evaluated by central finite differences of the full log-likelihood.
fn assess_shape(
    sample: &Sample,
    median: f64,
    alpha: f64,
    significance: f64,
) -> Result<ShapeAssessment, FitError> {
    let hm = median * 1e-4;
    let ha = alpha * 1e-4;
    let ll = |m: f64, a: f64| log_likelihood(sample, m, a);
    let f0 = ll(median, alpha);
    let dmm = (ll(median + hm, alpha) - 2.0 * f0 + ll(median - hm, alpha)) / (hm * hm);
    let daa = (ll(median, alpha + ha) - 2.0 * f0 + ll(median, alpha - ha)) / (ha * ha);
    let dma = (ll(median + hm, alpha + ha) - ll(median + hm, alpha - ha)
        - ll(median - hm, alpha + ha)
        + ll(median - hm, alpha - ha))
        / (4.0 * hm * ha);
    // Observed information is the negated Hessian.
    let (i11, i22, i12) = (-dmm, -daa, -dma);
    let det = i11 * i22 - i12 * i12;
    if !(det > 0.0) || !(i11 > 0.0) {
        return Err(FitError::Diagnostics(format!(
            "observed information not positive definite (det={det:.3e})"
        )));
    }
    let var_alpha = i11 / det;
    if !(var_alpha > 0.0) || !var_alpha.is_finite() {
        return Err(FitError::Diagnostics(format!("shape variance {var_alpha:.3e} unusable")));
    }
    let se = var_alpha.sqrt();
    let z = Normal::new(0.0, 1.0)
        .expect("standard normal")
        .inverse_cdf(1.0 - significance / 2.0);
    let (lo, hi) = (alpha - z * se, alpha + z * se);
    let verdict = if hi < 1.0 {
        ShapeVerdict::BelowOne
    } else if lo > 1.0 {
        ShapeVerdict::AboveOne
    } else {
        ShapeVerdict::CompatibleWithOne
    };
    Ok(ShapeAssessment { alpha, std_error: se, ci_lower: lo, ci_upper: hi, significance, verdict })
}

/// Chi-square goodness of fit of `model` against the successes of `rld`,
/// restricted to the observable window `[0, cutoff]` (or
/// `[left_truncate, cutoff]`). Bins have equal probability under the
/// truncated model and are merged until every expected count is at least 5;
/// `df = bins - 1 - fitted_params`.
pub fn chi_square_gof(rld: &Rld, model: &ModelCdf) -> Result<ChiSquareReport, FitError> {
    chi_square_gof_with(rld, model, model.param_count(), &FitOptions::default())
}

pub fn chi_square_gof_with(
    rld: &Rld,
    model: &ModelCdf,
    fitted_params: usize,
    opts: &FitOptions,
) -> Result<ChiSquareReport, FitError> {
    const MIN_EXPECTED: f64 = 5.0;
    let lo_t = opts.left_truncate.unwrap_or(0.0).max(0.0);
    let hi_t = rld.cutoff() as f64;
    let mut sorted: Vec<f64> = rld
        .successes()
        .iter()
        .map(|&x| x as f64)
        .filter(|&x| lo_t == 0.0 || x > lo_t)
        .collect();
    let k = sorted.len();
    if k < opts.gof_min_successes {
        return Err(FitError::InsufficientSample { got: k, need: opts.gof_min_successes });
    }
    let base = model.cdf(lo_t);
    let mass = model.cdf(hi_t) - base;
    if !(mass > 0.0) {
        return Err(FitError::EmptyModelMass);
    }

    // Moore's rule capped by the expected-count floor; with equal-probability
    // bins the merge rule reduces to a cap on the bin count.
    let by_rule = (2.0 * (k as f64).powf(0.4)).ceil() as usize;
    let bins = by_rule.min((k as f64 / MIN_EXPECTED).floor() as usize);
    if bins < 3 {
        return Err(FitError::SampleTooSmallForGof { bins, min_expected: MIN_EXPECTED });
    }
    if bins < fitted_params + 2 {
        return Err(FitError::NoDegreesOfFreedom { bins, params: fitted_params });
    }

    let mut edges = Vec::with_capacity(bins + 1);
    edges.push(lo_t);
    for i in 1..bins {
        let p = base + mass * i as f64 / bins as f64;
        edges.push(model.quantile(p)?);
    }
    edges.push(hi_t);

    let expected = k as f64 / bins as f64;
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("run lengths are finite"));
    let mut report_bins = Vec::with_capacity(bins);
    let mut statistic = 0.0;
    let mut prev_count = 0usize;
    for (i, window) in edges.windows(2).enumerate() {
        let count = if i == bins - 1 {
            sorted.len()
        } else {
            sorted.partition_point(|&x| x <= window[1])
        };
        let observed = count - prev_count;
        prev_count = count;
        let diff = observed as f64 - expected;
        statistic += diff * diff / expected;
        report_bins.push(ChiSquareBin { lo: window[0], hi: window[1], observed, expected });
    }

    let df = bins - 1 - fitted_params;
    let chi = ChiSquared::new(df as f64).expect("df >= 1");
    let p_value = 1.0 - chi.cdf(statistic);
    Ok(ChiSquareReport {
        statistic,
        df,
        p_value,
        pass: p_value >= opts.significance,
        significance: opts.significance,
        bins: report_bins,
    })
}
