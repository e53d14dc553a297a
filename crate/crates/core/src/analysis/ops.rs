//! Operations over [`CdfSource`]s: tail-bound and optimal cutoffs, dominance
//! comparison, anytime scheduling, speedup classification, expected utility.

use serde::{Deserialize, Serialize};

use super::{AnalysisError, CdfSource, CompositeCdf, RestartedCdf};
use crate::fit::{
    exp_quantile, fit_exponential_with, fit_weibull_with, FitOptions, FitResult, ShapeVerdict,
};
use crate::rld::Rld;

const LN2: f64 = std::f64::consts::LN_2;

/// Markov-inequality cutoff estimate: `mean / (1 - p)`.
pub fn markov_cutoff(mean_rt: f64, p: f64) -> Result<f64, AnalysisError> {
    if !(0.0..1.0).contains(&p) {
        return Err(AnalysisError::InvalidProbability { p });
    }
    Ok(mean_rt / (1.0 - p))
}

/// Tchebichev-inequality cutoff estimate: `sd / sqrt(1 - p) + mean`.
pub fn tchebichev_cutoff(mean_rt: f64, sd: f64, p: f64) -> Result<f64, AnalysisError> {
    if !(0.0..1.0).contains(&p) {
        return Err(AnalysisError::InvalidProbability { p });
    }
    if !sd.is_finite() || sd < 0.0 {
        return Err(AnalysisError::InvalidStdDev { sd });
    }
    Ok(sd / (1.0 - p).sqrt() + mean_rt)
}

/// The three tail-bound estimates side by side: distribution-free Markov and
/// Tchebichev bounds versus the quantile under an exponential assumption
/// (median `mean * ln 2`).
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct TailBounds {
    pub p: f64,
    pub markov: f64,
    pub tchebichev: f64,
    pub exponential_quantile: f64,
}

pub fn tail_bounds(mean_rt: f64, sd: f64, p: f64) -> Result<TailBounds, AnalysisError> {
    Ok(TailBounds {
        p,
        markov: markov_cutoff(mean_rt, p)?,
        tchebichev: tchebichev_cutoff(mean_rt, sd, p)?,
        exponential_quantile: exp_quantile(mean_rt * LN2, p)?,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CutoffMethod {
    Geometric,
    ExpectedTime,
}

/// Outcome of a cutoff optimization.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CutoffReport {
    pub method: CutoffMethod,
    /// Optimal restart cutoff; `None` when every cutoff is equivalent.
    pub t_star: Option<f64>,
    /// Median of the tangent exponential (geometric method only).
    pub m_star: Option<f64>,
    /// True when the source is exponential within tolerance, making the
    /// construction degenerate (contact everywhere / flat expected time).
    pub degenerate: bool,
    /// Expected flips to first success when restarting at `t_star`.
    pub expected_time_at_cutoff: f64,
    /// Expected flips when restarting only at the horizon (the no-restart
    /// baseline within the measured window).
    pub expected_time_at_horizon: f64,
    /// `expected_time_at_horizon / expected_time_at_cutoff`.
    pub expected_speedup: f64,
    pub horizon: f64,
}

/// Candidate cutoffs for the optimizers: the source's own jump points (or
/// quantile grid), restricted to the meaningful domain of at least one flip.
pub fn cutoff_candidates<S: CdfSource + ?Sized>(source: &S, max_points: usize) -> Vec<f64> {
    let mut ts: Vec<f64> =
        source.probe_points(max_points).into_iter().filter(|&t| t >= 1.0).collect();
    if ts.first().map_or(true, |&t| t > 1.0) {
        ts.insert(0, 1.0);
    }
    ts
}

/// Relative spread below which a candidate curve counts as constant.
const FLATNESS_TOL: f64 = 1e-9;

/// Expected flips to first success for a restart-every-`t` strategy:
/// `E(t) = (t * (1 - F(t)) + A(t)) / F(t)` with `A(t)` the mean success mass
/// at or below `t`, equivalently `E[min(T,t)] / F(t)`.
fn renewal_expected_time<S: CdfSource + ?Sized>(source: &S, t: f64) -> Option<f64> {
    let p = source.cdf(t);
    if p <= 0.0 {
        return None;
    }
    Some(source.expected_cost_truncated(t) / p)
}

/// Minimal-median tangent exponential: find the smallest `m` such that
/// `ed[m]` still has a common point with the source. Scanning the candidate
/// grid, the tangent median through `(t, F(t))` is
/// `m(t) = -t / log2(1 - F(t))`, and `m* = min over t`, touching at `t*`.
pub fn optimal_cutoff_geometric<S: CdfSource + ?Sized>(
    source: &S,
    candidates: &[f64],
) -> Result<CutoffReport, AnalysisError> {
    if candidates.is_empty() {
        return Err(AnalysisError::EmptyProbeGrid);
    }
    let mut best: Option<(f64, f64)> = None; // (m, t)
    let mut worst_m = f64::NEG_INFINITY;
    let mut any_mass = false;
    for &t in candidates {
        if t < 1.0 {
            // Cutoffs under one flip are not realizable.
            continue;
        }
        let p = source.cdf(t);
        if p <= 0.0 {
            continue;
        }
        any_mass = true;
        if p >= 1.0 {
            // Saturated probes carry no tangent information (the empirical
            // curve reaching 1 is a finite-sample artifact, not a shape).
            continue;
        }
        let m = -t / (1.0 - p).log2();
        if best.map_or(true, |(bm, _)| m < bm) {
            best = Some((m, t));
        }
        worst_m = worst_m.max(m);
    }
    if !any_mass {
        return Err(AnalysisError::NoSolutionsObserved);
    }
    let (m_star, t_at_min) = best.ok_or(AnalysisError::NoSolutionsObserved)?;
    let degenerate = (worst_m - m_star) <= FLATNESS_TOL * m_star;

    let horizon = last_finite(candidates);
    let e_horizon = renewal_expected_time(source, horizon).unwrap_or(f64::INFINITY);
    let e_cutoff = renewal_expected_time(source, t_at_min).unwrap_or(f64::INFINITY);
    Ok(CutoffReport {
        method: CutoffMethod::Geometric,
        t_star: if degenerate { None } else { Some(t_at_min) },
        m_star: Some(m_star),
        degenerate,
        expected_time_at_cutoff: e_cutoff,
        expected_time_at_horizon: e_horizon,
        expected_speedup: e_horizon / e_cutoff,
        horizon,
    })
}

/// Cutoff minimizing the renewal expected time `E(t)`. Candidates should be
/// the observed run lengths plus the horizon for empirical sources: the
/// empirical `E(t)` only attains minima at jump points.
pub fn optimal_cutoff_expected_time<S: CdfSource + ?Sized>(
    source: &S,
    candidates: &[f64],
) -> Result<CutoffReport, AnalysisError> {
    if candidates.is_empty() {
        return Err(AnalysisError::EmptyProbeGrid);
    }
    let mut best: Option<(f64, f64)> = None; // (E, t)
    let mut worst = f64::NEG_INFINITY;
    for &t in candidates {
        if t < 1.0 {
            continue;
        }
        let Some(e) = renewal_expected_time(source, t) else { continue };
        if best.map_or(true, |(be, _)| e < be) {
            best = Some((e, t));
        }
        worst = worst.max(e);
    }
    let (e_star, t_star) = best.ok_or(AnalysisError::NoSolutionsObserved)?;
    let degenerate = (worst - e_star) <= FLATNESS_TOL * e_star.abs();
    let horizon = last_finite(candidates);
    let e_horizon = renewal_expected_time(source, horizon).unwrap_or(f64::INFINITY);
    Ok(CutoffReport {
        method: CutoffMethod::ExpectedTime,
        t_star: if degenerate { None } else { Some(t_star) },
        m_star: None,
        degenerate,
        expected_time_at_cutoff: e_star,
        expected_time_at_horizon: e_horizon,
        expected_speedup: e_horizon / e_star,
        horizon,
    })
}

fn last_finite(candidates: &[f64]) -> f64 {
    candidates.iter().rev().copied().find(|t| t.is_finite()).unwrap_or(0.0)
}

/// Verdict of a pointwise dominance comparison on a probe grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Comparison {
    ADominates,
    BDominates,
    /// Equal within tolerance everywhere.
    Indistinguishable,
    /// Sign changes of `a - b`, reported as probe intervals.
    Crossover { intervals: Vec<(f64, f64)> },
}

/// Compare two sources on a probe grid with the sources' equality tolerance.
/// Dominance needs a strict advantage somewhere and no disadvantage anywhere.
pub fn compare<A: CdfSource + ?Sized, B: CdfSource + ?Sized>(
    a: &A,
    b: &B,
    probes: &[f64],
) -> Result<Comparison, AnalysisError> {
    if probes.is_empty() {
        return Err(AnalysisError::EmptyProbeGrid);
    }
    let tol = a.equality_tolerance().max(b.equality_tolerance());
    let mut saw_plus = false;
    let mut saw_minus = false;
    let mut intervals = Vec::new();
    let mut last_sign = 0i8;
    let mut last_signed_probe = 0.0f64;
    for &t in probes {
        let d = a.cdf(t) - b.cdf(t);
        let sign = if d > tol {
            1
        } else if d < -tol {
            -1
        } else {
            0
        };
        match sign {
            1 => saw_plus = true,
            -1 => saw_minus = true,
            _ => {}
        }
        if sign != 0 {
            if last_sign != 0 && sign != last_sign {
                intervals.push((last_signed_probe, t));
            }
            last_sign = sign;
            last_signed_probe = t;
        }
    }
    Ok(match (saw_plus, saw_minus) {
        (false, false) => Comparison::Indistinguishable,
        (true, false) => Comparison::ADominates,
        (false, true) => Comparison::BDominates,
        (true, true) => Comparison::Crossover { intervals },
    })
}

/// Which algorithm to run when, for a given total budget.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "schedule", rename_all = "snake_case")]
pub enum Schedule {
    /// `a` dominates (with restarts at `restart_cutoff` when finite).
    RunA { restart_cutoff: Option<f64> },
    /// `b` dominates even against restarted `a`.
    RunB,
    /// The sources are indistinguishable.
    RunEither,
    /// Run `a` with the given restart cutoff for budgets up to `s3`, switch
    /// to `b` for larger budgets.
    SwitchAtS3 { restart_cutoff: f64, s3: f64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct AnytimeReport {
    pub schedule: Schedule,
    /// Comparison of the raw sources (before restarting `a`).
    pub plain_comparison: Comparison,
    /// Comparison of restarted-`a` against `b`, when a restart was applied.
    pub restarted_comparison: Option<Comparison>,
    /// Geometric cutoff report for `a`.
    pub cutoff_report: CutoffReport,
    /// `(t, cdf)` points of the composite anytime curve.
    pub composite_points: Vec<(f64, f64)>,
}

/// Build the anytime combination of two algorithms: restart `a` at its
/// geometric optimal cutoff, find the switch point `s3` past which `b` wins,
/// and report the composite schedule. Degenerate situations (one source
/// dominating, indistinguishable sources) produce degenerate schedules.
pub fn anytime_schedule<A, B>(a: &A, b: &B, probes: &[f64]) -> Result<AnytimeReport, AnalysisError>
where
    A: CdfSource + Clone,
    B: CdfSource + ?Sized,
{
    if probes.is_empty() {
        return Err(AnalysisError::EmptyProbeGrid);
    }
    let plain = compare(a, b, probes)?;
    let cutoff_report = optimal_cutoff_geometric(a, &cutoff_candidates(a, 4096))?;

    // Restart a at its optimal cutoff when one exists; a memoryless source
    // is left alone (any cutoff is equivalent).
    let restarted: Option<RestartedCdf<A>> = match cutoff_report.t_star {
        Some(t_c) => Some(super::restart_transform(a.clone(), t_c)?),
        None => None,
    };

    let tol = a.equality_tolerance().max(b.equality_tolerance());
    let a_prime_cdf = |t: f64| match &restarted {
        Some(r) => r.cdf(t),
        None => a.cdf(t),
    };

    let restarted_cmp = match &restarted {
        Some(r) => Some(compare(r, b, probes)?),
        None => Some(plain.clone()),
    };

    // The switch point: the first probe of the final region where b is at
    // least as good as restarted-a. Scanning from the end keeps early
    // near-zero ties from masquerading as the switch.
    let mut last_a_win: Option<usize> = None;
    for (i, &t) in probes.iter().enumerate() {
        if a_prime_cdf(t) > b.cdf(t) + tol {
            last_a_win = Some(i);
        }
    }
    let schedule = match last_a_win {
        None => {
            // b never loses to restarted-a.
            match restarted_cmp.as_ref().unwrap() {
                Comparison::Indistinguishable => Schedule::RunEither,
                _ => Schedule::RunB,
            }
        }
        Some(i) if i + 1 >= probes.len() => {
            // a still ahead at the end of the horizon.
            Schedule::RunA { restart_cutoff: cutoff_report.t_star }
        }
        Some(i) => Schedule::SwitchAtS3 {
            restart_cutoff: cutoff_report
                .t_star
                .expect("a finite switch point implies a finite restart cutoff"),
            s3: probes[i + 1],
        },
    };

    let composite_points: Vec<(f64, f64)> = match (&schedule, &restarted) {
        (Schedule::SwitchAtS3 { s3, .. }, Some(r)) => {
            let composite =
                CompositeCdf { first: r.clone(), second: BorrowedSource(b), switch_at: *s3 };
            probes.iter().map(|&t| (t, composite.cdf(t))).collect()
        }
        (Schedule::RunA { .. }, Some(r)) => probes.iter().map(|&t| (t, r.cdf(t))).collect(),
        (Schedule::RunA { .. }, None) => probes.iter().map(|&t| (t, a.cdf(t))).collect(),
        _ => probes.iter().map(|&t| (t, b.cdf(t))).collect(),
    };

    Ok(AnytimeReport {
        schedule,
        plain_comparison: plain,
        restarted_comparison: restarted_cmp,
        cutoff_report,
        composite_points,
    })
}

/// Adapter so composite curves can wrap unsized borrowed sources.
struct BorrowedSource<'a, S: ?Sized>(&'a S);

impl<S: CdfSource + ?Sized> CdfSource for BorrowedSource<'_, S> {
    fn cdf(&self, t: f64) -> f64 {
        self.0.cdf(t)
    }
    fn horizon(&self) -> Option<f64> {
        self.0.horizon()
    }
    fn probe_points(&self, max_points: usize) -> Vec<f64> {
        self.0.probe_points(max_points)
    }
    fn equality_tolerance(&self) -> f64 {
        self.0.equality_tolerance()
    }
}

/// Parallelization behavior of a distribution relative to the exponential.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpeedupClass {
    /// Exponential-like: p independent runs give speedup p.
    Optimal,
    /// Steeper than exponential: independent runs yield sub-optimal speedup.
    SubOptimal,
    /// Less steep than exponential: independent runs (restarts) beat p.
    SuperOptimal,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpeedupReport {
    pub class: SpeedupClass,
    pub exponential_fit: FitResult,
    /// Shape evidence; absent when the Weibull fit is unnecessary or fails
    /// with the exponential accepted.
    pub weibull_fit: Option<FitResult>,
}

/// Classify a measured RLD by the steepness of its tail: exponential within
/// the chi-square test means optimal parallel speedup; the fitted Weibull
/// shape (with its confidence interval) decides the direction otherwise.
pub fn speedup_classification(rld: &Rld, opts: &FitOptions) -> Result<SpeedupReport, AnalysisError> {
    let exponential_fit = fit_exponential_with(rld, opts)?;
    if exponential_fit.chi2.as_ref().map_or(false, |c| c.pass) {
        return Ok(SpeedupReport { class: SpeedupClass::Optimal, exponential_fit, weibull_fit: None });
    }
    let weibull_fit = fit_weibull_with(rld, opts)?;
    let shape = weibull_fit.shape.expect("weibull fit carries a shape assessment");
    let class = match shape.verdict {
        ShapeVerdict::BelowOne => SpeedupClass::SuperOptimal,
        ShapeVerdict::AboveOne => SpeedupClass::SubOptimal,
        ShapeVerdict::CompatibleWithOne => SpeedupClass::Optimal,
    };
    Ok(SpeedupReport { class, exponential_fit, weibull_fit: Some(weibull_fit) })
}

/// Expected utility of running under `source` with budget `horizon`:
/// `sum u(t) dF(t)` over the solve mass; unsolved mass contributes zero.
pub fn expected_utility<S: CdfSource + ?Sized>(
    source: &S,
    u: &dyn Fn(f64) -> f64,
    horizon: f64,
) -> f64 {
    source.expected_utility(u, horizon)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{MixtureCdf, PlateauCdf};
    use crate::fit::ModelCdf;
    use approx::assert_relative_eq;

    #[test]
    fn worked_tail_bound_example() {
        // mean = sd = 100 s, p = 0.99: 10000 / 1100 / ~460.5, strictly
        // ordered. Exact up to the f64 representation of 0.99.
        let bounds = tail_bounds(100.0, 100.0, 0.99).unwrap();
        assert_relative_eq!(bounds.markov, 10_000.0, max_relative = 1e-12);
        assert_relative_eq!(bounds.tchebichev, 1_100.0, max_relative = 1e-12);
        assert!((bounds.exponential_quantile - 460.5).abs() < 0.5);
        assert!(bounds.markov > bounds.tchebichev);
        assert!(bounds.tchebichev > bounds.exponential_quantile);
    }

    #[test]
    fn markov_direct_substitutions() {
        assert_eq!(markov_cutoff(100.0, 0.0).unwrap(), 100.0);
        assert_eq!(markov_cutoff(50.0, 0.5).unwrap(), 100.0);
        assert!(markov_cutoff(100.0, 1.0).is_err());
    }

    #[test]
    fn tchebichev_direct_substitutions() {
        assert_eq!(tchebichev_cutoff(100.0, 0.0, 0.7).unwrap(), 100.0);
        assert_eq!(tchebichev_cutoff(0.0, 10.0, 0.75).unwrap(), 20.0);
        assert!(tchebichev_cutoff(1.0, f64::NAN, 0.5).is_err());
    }

    #[test]
    fn geometric_cutoff_degenerates_on_exponential() {
        let ed = ModelCdf::Exponential { median: 744.0 };
        let candidates = cutoff_candidates(&ed, 512);
        let report = optimal_cutoff_geometric(&ed, &candidates).unwrap();
        assert!(report.degenerate, "self-tangency must be detected");
        assert!(report.t_star.is_none());
        let m = report.m_star.unwrap();
        assert_relative_eq!(m, 744.0, max_relative = 1e-9);
    }

    #[test]
    fn expected_time_constant_on_exponential() {
        let ed = ModelCdf::Exponential { median: 744.0 };
        let candidates = cutoff_candidates(&ed, 512);
        let report = optimal_cutoff_expected_time(&ed, &candidates).unwrap();
        assert!(report.degenerate, "E(t) must be flat for the memoryless source");
        assert!(report.t_star.is_none());
        assert_relative_eq!(report.expected_time_at_cutoff, 744.0 / LN2, max_relative = 1e-9);
        // Flatness to 1e-9 relative across the whole grid.
        let e0 = report.expected_time_at_cutoff;
        for &t in &candidates {
            let e = (ed.expected_cost_truncated(t)) / ed.cdf(t);
            assert!((e - e0).abs() <= 1e-9 * e0, "E({t}) = {e} vs {e0}");
        }
    }

    #[test]
    fn plateau_has_finite_cutoffs_matching_grid_oracle() {
        // Essentially incomplete shape: success probability converges to
        // 0.08. The inner exponential ramp has strictly decreasing hazard,
        // so the grid optimum sits at the smallest realizable cutoff; the
        // binding check is agreement with the exhaustive 1-flip-grid oracle.
        let plateau = PlateauCdf::exponential(0.08, 50.0);
        let candidates: Vec<f64> = (1..=4000).map(|i| i as f64).collect();

        let mut oracle_m = f64::INFINITY;
        let mut oracle_mt = 0.0;
        for i in 1..=4000u32 {
            let t = f64::from(i);
            let f = 0.08 * (1.0 - (-t / 50.0 * LN2).exp());
            let m = -t / (1.0 - f).log2();
            if m < oracle_m {
                oracle_m = m;
                oracle_mt = t;
            }
        }

        let geo = optimal_cutoff_geometric(&plateau, &candidates).unwrap();
        assert!(!geo.degenerate);
        assert_eq!(geo.t_star.unwrap(), oracle_mt);
        assert_relative_eq!(geo.m_star.unwrap(), oracle_m, max_relative = 1e-12);

        let et = optimal_cutoff_expected_time(&plateau, &candidates).unwrap();
        assert!(!et.degenerate);
        assert!(et.t_star.unwrap() >= 1.0);
        // Restarting must beat running toward the plateau.
        assert!(et.expected_time_at_horizon > 2.0 * et.expected_time_at_cutoff);
    }

    #[test]
    fn lagged_plateau_has_interior_optimum() {
        // With an initial lag (rising hazard) the optimal cutoff moves to
        // the knee instead of the grid edge.
        let plateau = PlateauCdf { limit: 0.08, inner: ModelCdf::Weibull { median: 50.0, shape: 2.0 } };
        let candidates: Vec<f64> = (1..=4000).map(|i| i as f64).collect();
        let geo = optimal_cutoff_geometric(&plateau, &candidates).unwrap();
        let t_star = geo.t_star.unwrap();
        assert!(t_star > 10.0 && t_star < 500.0, "t* = {t_star}");
        let et = optimal_cutoff_expected_time(&plateau, &candidates).unwrap();
        let t_et = et.t_star.unwrap();
        assert!(t_et > 10.0 && t_et < 500.0, "expected-time t* = {t_et}");
        assert!(et.expected_speedup > 1.0);
    }

    #[test]
    fn mixture_cutoffs_match_brute_force_grid_oracle() {
        let mix = MixtureCdf::new(vec![
            ModelCdf::Exponential { median: 100.0 },
            ModelCdf::Exponential { median: 10_000.0 },
        ]);
        let candidates: Vec<f64> = (1..=50_000).map(|i| i as f64).collect();

        // Independent oracle: exhaustive scan of the tangent median and of
        // the renewal expected time over the same integer grid, written
        // directly from the formulas.
        let survival =
            |t: f64| 0.5 * (-t / 100.0 * LN2).exp() + 0.5 * (-t / 10_000.0 * LN2).exp();
        let mut oracle_m = f64::INFINITY;
        let mut oracle_mt = 0.0;
        for i in 1..=50_000u32 {
            let t = f64::from(i);
            let f = 1.0 - survival(t);
            let m = -t / (1.0 - f).log2();
            if m < oracle_m {
                oracle_m = m;
                oracle_mt = t;
            }
        }
        // Renewal oracle: incremental trapezoid integral of the survival.
        let mut oracle_e = f64::INFINITY;
        let mut oracle_et = 0.0;
        let mut acc = 0.0;
        let mut prev_s = survival(0.0);
        for i in 1..=50_000u32 {
            let t = f64::from(i);
            let s = survival(t);
            acc += 0.5 * (prev_s + s);
            prev_s = s;
            let f = 1.0 - s;
            if f > 0.0 {
                let e = acc / f;
                if e < oracle_e {
                    oracle_e = e;
                    oracle_et = t;
                }
            }
        }

        let geo = optimal_cutoff_geometric(&mix, &candidates).unwrap();
        assert!(!geo.degenerate);
        assert_relative_eq!(geo.m_star.unwrap(), oracle_m, max_relative = 1e-9);
        assert_eq!(geo.t_star.unwrap(), oracle_mt);

        let et = optimal_cutoff_expected_time(&mix, &candidates).unwrap();
        assert!(!et.degenerate);
        // The oracle integrates the survival numerically; grid-level accuracy.
        assert_relative_eq!(et.expected_time_at_cutoff, oracle_e, max_relative = 1e-3);
        assert!((et.t_star.unwrap() - oracle_et).abs() <= 1.0);
        assert!(et.expected_speedup > 2.0, "speedup {}", et.expected_speedup);
    }

    #[test]
    fn compare_detects_dominance_and_crossover() {
        let fast = ModelCdf::Exponential { median: 100.0 };
        let slow = ModelCdf::Exponential { median: 200.0 };
        let probes: Vec<f64> = (1..2000).map(|i| i as f64).collect();
        assert_eq!(compare(&fast, &slow, &probes).unwrap(), Comparison::ADominates);
        assert_eq!(compare(&slow, &fast, &probes).unwrap(), Comparison::BDominates);

        // Equal medians, different shapes: the curves flip order at t = 100.
        let weibull = ModelCdf::Weibull { median: 100.0, shape: 0.5 };
        match compare(&fast, &weibull, &probes).unwrap() {
            Comparison::Crossover { intervals } => {
                assert_eq!(intervals.len(), 1);
                let (lo, hi) = intervals[0];
                assert!(lo < 100.0 && hi >= 100.0, "interval ({lo}, {hi})");
            }
            other => panic!("expected crossover, got {other:?}"),
        }

        assert_eq!(compare(&fast, &fast, &probes).unwrap(), Comparison::Indistinguishable);
    }

    #[test]
    fn compare_is_antisymmetric_on_crossovers() {
        let a = PlateauCdf::exponential(0.08, 50.0);
        let b = ModelCdf::Exponential { median: 1800.0 };
        // a rises fast but plateaus at 0.08; b passes it later: one crossover.
        let probes: Vec<f64> = (1..=5000).map(|i| i as f64).collect();
        let ab = compare(&a, &b, &probes).unwrap();
        let ba = compare(&b, &a, &probes).unwrap();
        match (ab, ba) {
            (Comparison::Crossover { intervals: i1 }, Comparison::Crossover { intervals: i2 }) => {
                assert_eq!(i1, i2);
            }
            other => panic!("expected mirrored crossovers, got {other:?}"),
        }
    }

    #[test]
    fn anytime_schedule_on_the_plateau_pair() {
        // Shapes mirroring the paper's anytime example: an essentially
        // incomplete algorithm that is fast early (lagged plateau at 0.08)
        // against a slower approximately complete one. Restarting the
        // plateau at its optimal cutoff wins for short budgets; past the
        // switch point the complete algorithm is strictly superior.
        let a =
            PlateauCdf { limit: 0.08, inner: ModelCdf::Weibull { median: 170.0, shape: 2.0 } };
        let b = ModelCdf::Weibull { median: 1800.0, shape: 2.0 };
        let probes: Vec<f64> = (1..=40_000).map(|i| i as f64).collect();
        let report = anytime_schedule(&a, &b, &probes).unwrap();
        let Schedule::SwitchAtS3 { restart_cutoff, s3 } = report.schedule else {
            panic!("expected a switch schedule, got {:?}", report.schedule);
        };
        assert!(matches!(report.plain_comparison, Comparison::Crossover { .. }));

        // Oracle: dense direct evaluation of both formulas.
        let f_tc = a.cdf(restart_cutoff);
        let restarted = |t: f64| {
            let k = (t / restart_cutoff).floor();
            let r = t - k * restart_cutoff;
            1.0 - (1.0 - f_tc).powf(k) * (1.0 - a.cdf(r))
        };
        let mut oracle_s3 = None;
        for i in (1..=40_000u32).rev() {
            let t = f64::from(i);
            if restarted(t) > b.cdf(t) + 1e-12 {
                oracle_s3 = Some(t + 1.0);
                break;
            }
        }
        assert_eq!(s3, oracle_s3.expect("restarted-a must win somewhere"));
        assert!(s3 > restart_cutoff, "switch point {s3} before the first restart");

        // Composite envelope: never beaten by b below s3 nor by restarted-a
        // above s3.
        for &(t, c) in &report.composite_points {
            if t <= s3 {
                assert!(c >= b.cdf(t) - 1e-9, "b exceeds composite at {t}");
            } else {
                assert!(c >= restarted(t) - 1e-9, "restarted-a exceeds composite at {t}");
            }
        }
    }

    #[test]
    fn anytime_schedule_degenerate_cases() {
        let fast = ModelCdf::Exponential { median: 100.0 };
        let slow = ModelCdf::Exponential { median: 300.0 };
        let probes: Vec<f64> = (1..3000).map(|i| i as f64).collect();
        let report = anytime_schedule(&fast, &slow, &probes).unwrap();
        assert!(matches!(report.schedule, Schedule::RunA { .. }));
        assert_eq!(report.plain_comparison, Comparison::ADominates);

        let report = anytime_schedule(&slow, &fast, &probes).unwrap();
        assert_eq!(report.schedule, Schedule::RunB);

        let report = anytime_schedule(&fast, &fast, &probes).unwrap();
        assert_eq!(report.schedule, Schedule::RunEither);
        assert_eq!(report.plain_comparison, Comparison::Indistinguishable);
    }

    #[test]
    fn utility_degenerates_to_success_probability() {
        let ed = ModelCdf::Exponential { median: 100.0 };
        let horizon = 500.0;
        let u_one = |_: f64| 1.0;
        assert_relative_eq!(
            expected_utility(&ed, &u_one, horizon),
            ed.cdf(horizon),
            max_relative = 1e-9
        );
        // Step utility reproduces P(RT <= t_max).
        let t_max = 230.0;
        let u_step = |t: f64| if t <= t_max { 1.0 } else { 0.0 };
        assert_relative_eq!(
            expected_utility(&ed, &u_step, horizon),
            ed.cdf(t_max),
            max_relative = 1e-6
        );
    }

    #[test]
    fn utility_on_empirical_rld_is_exact() {
        let rld = crate::rld::Rld::from_parts(
            vec![10, 20, 30],
            4,
            100,
            crate::rld::Provenance {
                instance: "x".into(),
                config: crate::sls::SolverConfig::Gsat,
                base_seed: 0,
            },
        )
        .unwrap();
        let u = |t: f64| 1.0 - t / 100.0;
        let expect = (0.9 + 0.8 + 0.7) / 4.0;
        assert_relative_eq!(expected_utility(&rld, &u, 100.0), expect, epsilon = 1e-15);
        // Tighter horizon drops the tail success.
        let expect = (0.9 + 0.8) / 4.0;
        assert_relative_eq!(expected_utility(&rld, &u, 25.0), expect, epsilon = 1e-15);
    }

    #[test]
    fn linear_decay_utility_matches_quadrature_oracle() {
        let ed = ModelCdf::Exponential { median: 100.0 };
        let horizon = 1000.0;
        let u = |t: f64| 1.0 - t / horizon;
        // Closed form: F(H) - (1/H) * integral_0^H t f(t) dt.
        let f_h = ed.cdf(horizon);
        let mean_trunc = ed.expected_cost_truncated(horizon) - horizon * (1.0 - f_h);
        let closed = f_h - mean_trunc / horizon;
        assert_relative_eq!(expected_utility(&ed, &u, horizon), closed, epsilon = 1e-6);

        // Independent fine-grid Stieltjes oracle.
        let n = 2_000_000;
        let h = horizon / n as f64;
        let mut oracle = 0.0;
        let mut prev = 0.0;
        for i in 1..=n {
            let t = i as f64 * h;
            let cur = ed.cdf(t);
            oracle += u(t - 0.5 * h) * (cur - prev);
            prev = cur;
        }
        assert_relative_eq!(expected_utility(&ed, &u, horizon), oracle, epsilon = 1e-6);
    }

    #[test]
    fn classification_monte_carlo() {
        use crate::fit::tests::sample_rld;
        let opts = FitOptions::default();
        let cases = [
            (ModelCdf::Exponential { median: 1000.0 }, SpeedupClass::Optimal, 0.90),
            (ModelCdf::Weibull { median: 1000.0, shape: 0.5 }, SpeedupClass::SuperOptimal, 0.95),
            (ModelCdf::Weibull { median: 1000.0, shape: 2.0 }, SpeedupClass::SubOptimal, 0.95),
        ];
        for (model, expected, min_rate) in cases {
            let seeds = 100u64;
            let mut hits = 0;
            for seed in 0..seeds {
                let rld = sample_rld(&model, 1000, u64::MAX / 2, 40_000 + seed);
                let report = speedup_classification(&rld, &opts).unwrap();
                if report.class == expected {
                    hits += 1;
                }
            }
            let rate = hits as f64 / seeds as f64;
            assert!(rate >= min_rate, "{expected:?}: rate {rate}");
        }
    }
}
