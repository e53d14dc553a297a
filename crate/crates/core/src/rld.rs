//! Trial harness and empirical run-length distributions.
//!
//! An [`Rld`] holds the sorted successful run lengths out of `n_trials` runs
//! with a common cutoff. Censored runs carry survival information only; they
//! are never dropped and never faked as successes. The empirical cdf is
//! `P(rl <= t) = |{successes <= t}| / n_trials`, a right-continuous step
//! function that is only trusted up to the cutoff.

use std::fmt::Write as _;
use std::io::{BufRead, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cnf::score::OccurrenceIndex;
use crate::cnf::Formula;
use crate::seed::derive_seed;
use crate::sls::{run_indexed, RunRecord, SolverConfig};

/// Where an RLD came from; carried into file headers and reports.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub instance: String,
    pub config: SolverConfig,
    pub base_seed: u64,
}

/// Empirical run-length distribution of one solver configuration on one
/// instance.
#[derive(Clone, Debug, PartialEq)]
pub struct Rld {
    successes: Vec<u64>,
    n_trials: usize,
    cutoff: u64,
    provenance: Provenance,
}

/// A cdf evaluation; `censored` marks probes beyond the measurement horizon,
/// where the step function is reported at the cutoff rather than extrapolated.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CdfPoint {
    pub p: f64,
    pub censored: bool,
}

#[derive(Debug, Error, PartialEq)]
pub enum RldError {
    #[error("n_trials must be positive")]
    ZeroTrials,
    #[error("{got} successes recorded out of {n_trials} trials")]
    TooManySuccesses { got: usize, n_trials: usize },
    #[error("success run length {len} exceeds cutoff {cutoff}")]
    SuccessBeyondCutoff { len: u64, cutoff: u64 },
    #[error("quantile {q} not observed: success rate is only {success_rate}")]
    QuantileNotObserved { q: f64, success_rate: f64 },
    #[error("mean undefined: no successes")]
    NoSuccesses,
    #[error("cannot average an empty list of RLDs")]
    EmptyAverage,
}

impl Rld {
    /// Assemble an RLD from raw parts (sorting the successes).
    pub fn from_parts(
        mut successes: Vec<u64>,
        n_trials: usize,
        cutoff: u64,
        provenance: Provenance,
    ) -> Result<Rld, RldError> {
        if n_trials == 0 {
            return Err(RldError::ZeroTrials);
        }
        if successes.len() > n_trials {
            return Err(RldError::TooManySuccesses { got: successes.len(), n_trials });
        }
        successes.sort_unstable();
        if let Some(&max) = successes.last() {
            if max > cutoff {
                return Err(RldError::SuccessBeyondCutoff { len: max, cutoff });
            }
        }
        Ok(Rld { successes, n_trials, cutoff, provenance })
    }

    /// Aggregate prerecorded trial outcomes.
    pub fn from_records(
        records: &[RunRecord],
        cutoff: u64,
        provenance: Provenance,
    ) -> Result<Rld, RldError> {
        let successes = records.iter().filter_map(RunRecord::run_length).collect();
        Rld::from_parts(successes, records.len(), cutoff, provenance)
    }

    pub fn successes(&self) -> &[u64] {
        &self.successes
    }

    pub fn n_trials(&self) -> usize {
        self.n_trials
    }

    pub fn n_successes(&self) -> usize {
        self.successes.len()
    }

    pub fn n_censored(&self) -> usize {
        self.n_trials - self.successes.len()
    }

    pub fn cutoff(&self) -> u64 {
        self.cutoff
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn success_rate(&self) -> f64 {
        self.successes.len() as f64 / self.n_trials as f64
    }

    /// `P(rl <= t)`; beyond the cutoff the value at the cutoff is returned
    /// with the censored flag set.
    pub fn cdf(&self, t: u64) -> CdfPoint {
        let clamped = t.min(self.cutoff);
        let count = self.successes.partition_point(|&x| x <= clamped);
        CdfPoint { p: count as f64 / self.n_trials as f64, censored: t > self.cutoff }
    }

    /// Smallest observed run length `t` with `cdf(t) >= q`.
    pub fn percentile(&self, q: f64) -> Result<u64, RldError> {
        if !(q > 0.0) || q > self.success_rate() {
            return Err(RldError::QuantileNotObserved { q, success_rate: self.success_rate() });
        }
        let n = self.n_trials as f64;
        // Smallest index j with (j+1)/n >= q; binary search keeps the
        // comparison in the same arithmetic as cdf().
        let mut lo = 0usize;
        let mut hi = self.successes.len() - 1;
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if (mid + 1) as f64 / n >= q {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        Ok(self.successes[lo])
    }

    pub fn median(&self) -> Result<u64, RldError> {
        self.percentile(0.5)
    }

    /// Censoring-aware mean estimate: `(1/k) * sum(rt_i) + ((n-k)/k) * cutoff`.
    /// Equals the plain sample mean when every trial succeeded.
    pub fn estimate_mean_runtime(&self) -> Result<f64, RldError> {
        let k = self.successes.len();
        if k == 0 {
            return Err(RldError::NoSuccesses);
        }
        let sum: f64 = self.successes.iter().map(|&x| x as f64).sum();
        let n = self.n_trials;
        Ok(sum / k as f64 + (n - k) as f64 / k as f64 * self.cutoff as f64)
    }

    /// Standard deviation over the successful runs only.
    pub fn success_std_dev(&self) -> Option<f64> {
        let k = self.successes.len();
        if k < 2 {
            return None;
        }
        let mean: f64 = self.successes.iter().map(|&x| x as f64).sum::<f64>() / k as f64;
        let var: f64 = self
            .successes
            .iter()
            .map(|&x| {
                let d = x as f64 - mean;
                d * d
            })
            .sum::<f64>()
            / (k as f64 - 1.0);
        Some(var.sqrt())
    }

    /// `(t, cdf)` pairs at every jump of the step function, ending with the
    /// cutoff point. Suitable for two-column plot files.
    pub fn plot_points(&self) -> Vec<(u64, f64)> {
        let mut points = Vec::new();
        let n = self.n_trials as f64;
        let mut i = 0;
        while i < self.successes.len() {
            let t = self.successes[i];
            let mut j = i;
            while j < self.successes.len() && self.successes[j] == t {
                j += 1;
            }
            points.push((t, j as f64 / n));
            i = j;
        }
        if points.last().map(|&(t, _)| t) != Some(self.cutoff) {
            points.push((self.cutoff, self.success_rate()));
        }
        points
    }
}

/// Default trials per instance for characterization experiments.
pub const DEFAULT_TRIALS_CHARACTERIZATION: usize = 1000;
/// Default trials per configuration for parameter sweeps.
pub const DEFAULT_TRIALS_SWEEP: usize = 200;

/// Run `n_trials` seeded trials and aggregate them. Trial `i` uses
/// `derive_seed(base_seed, i)`, so the result is independent of execution
/// order and thread count.
pub fn collect(
    formula: &Formula,
    config: &SolverConfig,
    n_trials: usize,
    cutoff: u64,
    base_seed: u64,
    instance: &str,
) -> Rld {
    assert!(n_trials >= 1, "n_trials must be positive");
    config.validate().expect("invalid solver configuration");
    let idx = OccurrenceIndex::new(formula);
    let records: Vec<RunRecord> = (0..n_trials)
        .into_par_iter()
        .map(|i| run_indexed(&idx, config, cutoff, derive_seed(base_seed, i as u64)))
        .collect();
    let provenance =
        Provenance { instance: instance.to_string(), config: *config, base_seed };
    Rld::from_records(&records, cutoff, provenance).expect("harness records are consistent")
}

/// Equal-weight average of several RLDs: the cdf is the pointwise arithmetic
/// mean of the component cdfs. Mixing cutoffs is allowed; probes beyond the
/// minimum cutoff are flagged censored.
#[derive(Clone, Debug)]
pub struct AveragedRld {
    components: Vec<Rld>,
    min_cutoff: u64,
}

impl AveragedRld {
    pub fn new(components: Vec<Rld>) -> Result<AveragedRld, RldError> {
        if components.is_empty() {
            return Err(RldError::EmptyAverage);
        }
        let min_cutoff = components.iter().map(Rld::cutoff).min().unwrap();
        Ok(AveragedRld { components, min_cutoff })
    }

    pub fn components(&self) -> &[Rld] {
        &self.components
    }

    pub fn min_cutoff(&self) -> u64 {
        self.min_cutoff
    }

    pub fn cdf(&self, t: u64) -> CdfPoint {
        let sum: f64 = self.components.iter().map(|rld| rld.cdf(t).p).sum();
        CdfPoint { p: sum / self.components.len() as f64, censored: t > self.min_cutoff }
    }

    /// Union of component jump points with averaged cdf values, capped at the
    /// minimum cutoff.
    pub fn plot_points(&self) -> Vec<(u64, f64)> {
        let mut ts: Vec<u64> = self
            .components
            .iter()
            .flat_map(|rld| rld.successes().iter().copied())
            .filter(|&t| t <= self.min_cutoff)
            .collect();
        ts.push(self.min_cutoff);
        ts.sort_unstable();
        ts.dedup();
        ts.into_iter().map(|t| (t, self.cdf(t).p)).collect()
    }

    /// Total trials across components.
    pub fn total_trials(&self) -> usize {
        self.components.iter().map(Rld::n_trials).sum()
    }
}

/// Equal-weight average (spec operation name).
pub fn average_rlds(rlds: Vec<Rld>) -> Result<AveragedRld, RldError> {
    AveragedRld::new(rlds)
}

/// Per-instance median hardness across a test set.
#[derive(Clone, Debug, Serialize)]
pub struct HardnessDistribution {
    /// Sorted observed medians (instances with success rate >= 0.5).
    pub medians: Vec<u64>,
    /// Instance ids whose median was unobserved (success rate < 0.5).
    pub excluded: Vec<String>,
    pub min: u64,
    pub max: u64,
    pub quartiles: [u64; 3],
    /// max / min as a spread measure.
    pub max_min_ratio: f64,
}

/// Sorted per-instance medians with a spread summary. Instances whose median
/// is unobservable are excluded and listed.
pub fn hardness_distribution(rlds: &[Rld]) -> Result<HardnessDistribution, RldError> {
    let mut medians = Vec::new();
    let mut excluded = Vec::new();
    for rld in rlds {
        match rld.median() {
            Ok(m) => medians.push(m),
            Err(RldError::QuantileNotObserved { .. }) => {
                excluded.push(rld.provenance().instance.clone());
            }
            Err(other) => return Err(other),
        }
    }
    if medians.is_empty() {
        return Err(RldError::NoSuccesses);
    }
    medians.sort_unstable();
    let quantile = |q: f64| -> u64 {
        let idx = ((medians.len() as f64 * q).ceil() as usize).clamp(1, medians.len()) - 1;
        medians[idx]
    };
    let min = medians[0];
    let max = *medians.last().unwrap();
    Ok(HardnessDistribution {
        min,
        max,
        quartiles: [quantile(0.25), quantile(0.5), quantile(0.75)],
        max_min_ratio: max as f64 / min as f64,
        medians,
        excluded,
    })
}

/// CSV header marker and version for RLD files.
const CSV_MAGIC: &str = "# rld v1";

/// Write the RLD CSV format: a version header carrying the trial metadata, a
/// second header line with the observed success rate, then one successful run
/// length per line.
pub fn write_csv(rld: &Rld, mut out: impl Write) -> std::io::Result<()> {
    let config_json =
        serde_json::to_string(&rld.provenance().config).expect("config serializes");
    writeln!(
        out,
        "{CSV_MAGIC}, n_trials={}, cutoff={}, instance={}, config={}",
        rld.n_trials(),
        rld.cutoff(),
        rld.provenance().instance,
        config_json
    )?;
    writeln!(out, "# success_rate={}, base_seed={}", rld.success_rate(), rld.provenance().base_seed)?;
    let mut body = String::new();
    for &len in rld.successes() {
        writeln!(&mut body, "{len}").expect("string write cannot fail");
    }
    out.write_all(body.as_bytes())
}

pub fn to_csv_string(rld: &Rld) -> String {
    let mut buf = Vec::new();
    write_csv(rld, &mut buf).expect("write to Vec cannot fail");
    String::from_utf8(buf).expect("CSV output is UTF-8")
}

#[derive(Debug, Error)]
pub enum CsvError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error(transparent)]
    Invalid(#[from] RldError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Parse the RLD CSV format. Additional `#` comment lines after the first are
/// scanned for a `base_seed=` field and otherwise ignored.
pub fn parse_csv(reader: impl BufRead) -> Result<Rld, CsvError> {
    let mut lines = reader.lines().enumerate();
    let (_, first) = lines
        .next()
        .ok_or_else(|| CsvError::Malformed { line: 1, message: "empty file".into() })?;
    let first = first?;
    let (n_trials, cutoff, mut provenance) = parse_header(&first)?;
    let mut successes = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(comment) = trimmed.strip_prefix('#') {
            if let Some(seed) = field_value(comment, "base_seed") {
                provenance.base_seed = seed.trim().parse().unwrap_or(0);
            }
            continue;
        }
        let len = trimmed.parse::<u64>().map_err(|_| CsvError::Malformed {
            line: line_no,
            message: format!("run length {trimmed:?} is not a non-negative integer"),
        })?;
        successes.push(len);
    }
    Ok(Rld::from_parts(successes, n_trials, cutoff, provenance)?)
}

pub fn parse_csv_str(text: &str) -> Result<Rld, CsvError> {
    parse_csv(text.as_bytes())
}

/// Value of `key=` up to the next `, known_key=` marker or end of line.
fn field_value(text: &str, key: &str) -> Option<String> {
    let marker = format!("{key}=");
    let start = text.find(&marker)? + marker.len();
    let after = &text[start..];
    let end = ["n_trials", "cutoff", "instance", "config", "base_seed", "success_rate"]
        .iter()
        .filter(|&&k| k != key)
        .filter_map(|k| after.find(&format!(", {k}=")))
        .min()
        .unwrap_or(after.len());
    Some(after[..end].to_string())
}

fn parse_header(line: &str) -> Result<(usize, u64, Provenance), CsvError> {
    let fail = |message: &str| CsvError::Malformed { line: 1, message: message.to_string() };
    let rest = line
        .strip_prefix(CSV_MAGIC)
        .ok_or_else(|| fail("missing '# rld v1' header"))?;
    let want = |key: &str| field_value(rest, key).ok_or_else(|| fail(&format!("missing {key} field")));
    let n_trials = want("n_trials")?
        .trim()
        .parse::<usize>()
        .map_err(|_| fail("n_trials is not an integer"))?;
    let cutoff =
        want("cutoff")?.trim().parse::<u64>().map_err(|_| fail("cutoff is not an integer"))?;
    let instance = want("instance")?;
    let config: SolverConfig = serde_json::from_str(want("config")?.trim())
        .map_err(|e| fail(&format!("config is not valid JSON: {e}")))?;
    Ok((n_trials, cutoff, Provenance { instance, config, base_seed: 0 }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::Formula;

    fn prov(instance: &str) -> Provenance {
        Provenance {
            instance: instance.to_string(),
            config: SolverConfig::Wsat { noise: 0.55 },
            base_seed: 7,
        }
    }

    fn rld(successes: Vec<u64>, n: usize, cutoff: u64) -> Rld {
        Rld::from_parts(successes, n, cutoff, prov("test")).unwrap()
    }

    #[test]
    fn cdf_counts_directly() {
        let r = rld(vec![5, 10, 10, 20], 4, 100);
        assert_eq!(r.cdf(10).p, 0.75);
        assert_eq!(r.cdf(0).p, 0.0);
        assert_eq!(r.cdf(4).p, 0.0);
        assert_eq!(r.cdf(5).p, 0.25);
        assert_eq!(r.cdf(20).p, 1.0);
        assert!(!r.cdf(100).censored);
        let beyond = r.cdf(101);
        assert_eq!(beyond.p, 1.0);
        assert!(beyond.censored, "queries beyond the cutoff are flagged");
    }

    #[test]
    fn percentile_boundaries() {
        let full = rld(vec![5, 10, 10, 20], 4, 100);
        assert_eq!(full.percentile(0.5).unwrap(), 10);
        assert_eq!(full.percentile(0.75).unwrap(), 10);
        assert_eq!(full.percentile(1.0).unwrap(), 20);

        let truncated = rld(vec![5, 10, 10], 4, 100);
        assert_eq!(truncated.percentile(0.75).unwrap(), 10);
        let err = truncated.percentile(0.76).unwrap_err();
        assert!(matches!(err, RldError::QuantileNotObserved { .. }));
    }

    #[test]
    fn percentile_matches_order_statistic_oracle() {
        use rand::Rng;
        let mut rng = crate::seed::make_rng(12);
        let draws: Vec<u64> = (0..1000).map(|_| rng.gen_range(0..5000)).collect();
        let r = rld(draws.clone(), 1000, 10_000);
        let mut sorted = draws;
        sorted.sort_unstable();
        for &q in &[0.001, 0.01, 0.25, 0.5, 0.613, 0.75, 0.99, 1.0] {
            // Oracle: first sorted entry whose rank fraction reaches q.
            let idx = sorted
                .iter()
                .enumerate()
                .position(|(i, _)| (i + 1) as f64 / 1000.0 >= q)
                .unwrap();
            assert_eq!(r.percentile(q).unwrap(), sorted[idx], "q={q}");
        }
    }

    #[test]
    fn cdf_matches_naive_recount() {
        use rand::Rng;
        let mut rng = crate::seed::make_rng(13);
        let draws: Vec<u64> = (0..500).map(|_| rng.gen_range(0..2000)).collect();
        let r = rld(draws.clone(), 600, 2000);
        for &t in draws.iter().take(100) {
            let naive = draws.iter().filter(|&&x| x <= t).count() as f64 / 600.0;
            assert_eq!(r.cdf(t).p, naive);
        }
    }

    #[test]
    fn mean_estimator_substitution() {
        // n=4, k=2, successes {10,20}, cutoff=100 -> 15 + 100 = 115.
        let r = rld(vec![10, 20], 4, 100);
        assert_eq!(r.estimate_mean_runtime().unwrap(), 115.0);
    }

    #[test]
    fn mean_estimator_reduces_to_sample_mean_without_censoring() {
        let r = rld(vec![10, 20, 30], 3, 100);
        assert_eq!(r.estimate_mean_runtime().unwrap(), 20.0);
    }

    #[test]
    fn mean_estimator_increases_with_cutoff_when_censored() {
        let a = rld(vec![10, 20], 4, 100);
        let b = rld(vec![10, 20], 4, 200);
        assert!(b.estimate_mean_runtime().unwrap() > a.estimate_mean_runtime().unwrap());
    }

    #[test]
    fn mean_undefined_without_successes() {
        let r = rld(vec![], 5, 100);
        assert_eq!(r.estimate_mean_runtime().unwrap_err(), RldError::NoSuccesses);
        assert_eq!(r.success_rate(), 0.0);
    }

    #[test]
    fn collect_on_unsatisfiable_formula() {
        let f = Formula::from_codes(1, &[&[1], &[-1]]);
        let r = collect(&f, &SolverConfig::Gsat, 50, 100, 3, "unsat");
        assert_eq!(r.n_successes(), 0);
        assert_eq!(r.success_rate(), 0.0);
        assert_eq!(r.n_censored(), 50);
    }

    #[test]
    fn collect_single_variable_run_lengths() {
        let f = Formula::from_codes(1, &[&[1]]);
        let r = collect(&f, &SolverConfig::Gsat, 1000, 10, 5, "one");
        assert_eq!(r.n_successes(), 1000);
        assert!(r.successes().iter().all(|&x| x <= 1));
        let zeros = r.cdf(0).p;
        assert!((zeros - 0.5).abs() < 0.05, "fair-coin initial assignment, got {zeros}");
    }

    #[test]
    fn collect_is_deterministic() {
        let f = crate::instancegen::generate_random_3sat(15, 64, 2).unwrap();
        let cfg = SolverConfig::Gwsat { wp: 0.4 };
        let a = collect(&f, &cfg, 64, 50_000, 11, "i");
        let b = collect(&f, &cfg, 64, 50_000, 11, "i");
        assert_eq!(a, b);
    }

    #[test]
    fn averaging_is_idempotent_and_mixes_mass() {
        let r = rld(vec![5, 10], 2, 100);
        let avg = average_rlds(vec![r.clone(), r.clone()]).unwrap();
        for t in [0, 4, 5, 9, 10, 100] {
            assert_eq!(avg.cdf(t).p, r.cdf(t).p);
        }

        let a = rld(vec![1], 1, 100);
        let b = rld(vec![3], 1, 100);
        let avg = average_rlds(vec![a, b]).unwrap();
        assert_eq!(avg.cdf(2).p, 0.5);
    }

    #[test]
    fn averaging_matches_pooled_recount() {
        use rand::Rng;
        let mut rng = crate::seed::make_rng(21);
        let rlds: Vec<Rld> = (0..20)
            .map(|i| {
                let n = rng.gen_range(50..150);
                let k = rng.gen_range(0..=n);
                let draws: Vec<u64> = (0..k).map(|_| rng.gen_range(0..1000)).collect();
                Rld::from_parts(draws, n, 1000, prov(&format!("i{i}"))).unwrap()
            })
            .collect();
        let avg = average_rlds(rlds.clone()).unwrap();
        for probe in (0..=1000).step_by(20) {
            let naive: f64 = rlds
                .iter()
                .map(|r| {
                    r.successes().iter().filter(|&&x| x <= probe).count() as f64
                        / r.n_trials() as f64
                })
                .sum::<f64>()
                / rlds.len() as f64;
            assert!((avg.cdf(probe).p - naive).abs() < 1e-15);
        }
    }

    #[test]
    fn mixed_cutoffs_flag_censoring_beyond_minimum() {
        let a = rld(vec![5], 2, 100);
        let b = Rld::from_parts(vec![150], 2, 200, prov("b")).unwrap();
        let avg = average_rlds(vec![a, b]).unwrap();
        assert!(!avg.cdf(100).censored);
        assert!(avg.cdf(101).censored);
    }

    #[test]
    fn hardness_summary_direct() {
        let rlds: Vec<Rld> = [10u64, 100, 1000]
            .iter()
            .map(|&m| rld(vec![m; 10], 10, 10_000))
            .collect();
        let h = hardness_distribution(&rlds).unwrap();
        assert_eq!(h.medians, vec![10, 100, 1000]);
        assert_eq!(h.min, 10);
        assert_eq!(h.max, 1000);
        assert_eq!(h.quartiles[1], 100);
        assert_eq!(h.max_min_ratio, 100.0);
        assert!(h.excluded.is_empty());
    }

    #[test]
    fn hardness_ratio_one_for_identical_instances() {
        let rlds: Vec<Rld> = (0..5).map(|_| rld(vec![42; 8], 8, 100)).collect();
        let h = hardness_distribution(&rlds).unwrap();
        assert_eq!(h.max_min_ratio, 1.0);
    }

    #[test]
    fn hardness_excludes_low_success_instances() {
        let good = rld(vec![3, 4, 5, 6], 4, 100);
        let bad = Rld::from_parts(vec![9], 4, 100, prov("weak")).unwrap();
        let h = hardness_distribution(&[good, bad]).unwrap();
        assert_eq!(h.medians.len(), 1);
        assert_eq!(h.excluded, vec!["weak".to_string()]);
    }

    #[test]
    fn csv_roundtrip_preserves_data() {
        let r = rld(vec![5, 10, 10, 20], 6, 1000);
        let text = to_csv_string(&r);
        assert!(text.starts_with("# rld v1, n_trials=6, cutoff=1000, instance=test, config={"));
        assert!(text.contains("# success_rate="));
        let back = parse_csv_str(&text).unwrap();
        assert_eq!(back.successes(), r.successes());
        assert_eq!(back.n_trials(), r.n_trials());
        assert_eq!(back.cutoff(), r.cutoff());
        assert_eq!(back.provenance().config, r.provenance().config);
        assert_eq!(back.provenance().instance, "test");
        assert_eq!(back.provenance().base_seed, 7);
    }

    #[test]
    fn csv_parse_errors_name_lines() {
        let err = parse_csv_str("# rld v1, n_trials=2, cutoff=10, instance=x, config={\"algorithm\":\"gsat\"}\n3\nbogus\n")
            .unwrap_err();
        match err {
            CsvError::Malformed { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn plot_points_cover_jumps_and_cutoff() {
        let r = rld(vec![5, 10, 10, 20], 5, 100);
        let pts = r.plot_points();
        assert_eq!(pts, vec![(5, 0.2), (10, 0.6), (20, 0.8), (100, 0.8)]);
    }
}
