//! Monte Carlo harness: run a plan of (model × n × replicate) trials,
//! certify every trial, and aggregate the probabilistic consequences of the
//! certified bound — tail frequencies against the DKW envelope, coverage of
//! the high-probability error bound, and the quadratic-risk curve.
//!
//! Trials are independent; with the `parallel` feature they run on a rayon
//! pool in fixed-size chunks whose results are collected in plan order, so
//! output is byte-identical for any worker count.

use serde::{Deserialize, Serialize};

use crate::density::DensityModel;
use crate::error::{Error, Result};
use crate::estimator::{least_concave_majorant, EmpiricalCdf};
use crate::metrics::{certify, TrialMetrics, TrialRecord};
use crate::sample::draw;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Trials per scheduling chunk; chunks are computed (possibly in parallel)
/// and then flushed to the sink in plan order.
const CHUNK: usize = 256;

/// Statistical assertions allow this many standard errors of slack, which
/// separates implementation bugs from Monte Carlo noise at roughly the
/// 0.3% false-alarm level per assertion.
pub const SE_SLACK: f64 = 3.0;

fn default_alpha_levels() -> Vec<f64> {
    vec![0.01, 0.05, 0.1]
}

fn default_lambda_grid() -> Vec<f64> {
    vec![0.5, 1.0, 1.5, 2.0]
}

/// A full experiment description; serializable as a JSON plan file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentPlan {
    pub models: Vec<DensityModel>,
    pub n_values: Vec<usize>,
    pub reps: u64,
    pub seed: u64,
    #[serde(default = "default_alpha_levels")]
    pub alpha_levels: Vec<f64>,
    #[serde(default = "default_lambda_grid")]
    pub lambda_grid: Vec<f64>,
}

impl ExperimentPlan {
    pub fn validate(&self) -> Result<()> {
        if self.models.is_empty() {
            return Err(Error::Plan("no models".into()));
        }
        if self.n_values.is_empty() {
            return Err(Error::Plan("no sample sizes".into()));
        }
        if self.n_values.iter().any(|&n| n == 0) {
            return Err(Error::Plan("sample sizes must be >= 1".into()));
        }
        if self.reps == 0 {
            return Err(Error::Plan("reps must be >= 1".into()));
        }
        if self.alpha_levels.iter().any(|&a| !(a > 0.0 && a < 1.0)) {
            return Err(Error::Plan("alpha levels must lie in (0,1)".into()));
        }
        if self.lambda_grid.iter().any(|&l| !(l > 0.0)) {
            return Err(Error::Plan("lambda grid must be positive".into()));
        }
        Ok(())
    }

    pub fn total_trials(&self) -> u64 {
        self.models.len() as u64 * self.n_values.len() as u64 * self.reps
    }
}

/// The stock verification plan: every supported family, sample sizes from a
/// single observation up to a thousand, 500 replicates each.
pub fn default_plan(seed: u64) -> ExperimentPlan {
    ExperimentPlan {
        models: vec![
            "uniform".parse().unwrap(),
            "powerlaw:alpha=0.6".parse().unwrap(),
            "powerlaw:alpha=0.75".parse().unwrap(),
            "powerlaw:alpha=0.9".parse().unwrap(),
            "texp:lambda=2".parse().unwrap(),
            "pwc:breaks=0.2,0.5;values=2.5,1.25,0.25".parse().unwrap(),
        ],
        n_values: vec![1, 10, 100, 1000],
        reps: 500,
        seed,
        alpha_levels: default_alpha_levels(),
        lambda_grid: default_lambda_grid(),
    }
}

/// Draw, estimate, and measure one trial. Pure in its arguments.
pub fn run_trial(model: &DensityModel, n: usize, seed: u64, replicate: u64) -> Result<TrialRecord> {
    let sample = draw(model, n, seed, replicate)?;
    let ecdf = EmpiricalCdf::from_sample(&sample);
    let majorant = least_concave_majorant(&ecdf);
    let estimate = majorant.density();
    let metrics = TrialMetrics::compute(&ecdf, &majorant, &estimate, model);
    Ok(TrialRecord::new(&sample, metrics))
}

/// Mean / risk summary for one (model, n) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RiskRow {
    pub model: String,
    pub n: usize,
    pub reps: u64,
    pub mean_wise: f64,
    pub stderr: f64,
    /// √(2π)·n^(−1/2), the quadratic-risk envelope.
    pub bound: f64,
    /// mean_wise + 3·stderr ≤ bound.
    pub pass: bool,
}

/// Tail frequency of √n·KS against the DKW envelope for one λ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DkwRow {
    pub model: String,
    pub n: usize,
    pub lambda: f64,
    /// Empirical P(√n·ks > λ).
    pub frequency: f64,
    /// 2·e^(−2λ²).
    pub bound: f64,
    pub stderr: f64,
    /// frequency ≤ bound + 3·stderr.
    pub pass: bool,
}

/// Coverage of the high-probability error bound for one α.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageRow {
    pub model: String,
    pub n: usize,
    pub alpha: f64,
    /// √(2·ln(2/α))·n^(−1/2).
    pub threshold: f64,
    /// Empirical P(wise ≤ threshold).
    pub coverage: f64,
    /// 1 − α.
    pub target: f64,
    pub stderr: f64,
    /// coverage ≥ target − 3·stderr.
    pub pass: bool,
}

/// Aggregated outcome of a plan. Field order is fixed, so serializing the
/// same summary twice yields identical bytes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RiskSummary {
    pub plan: ExperimentPlan,
    pub trials: u64,
    pub certificate_violations: u64,
    pub risk: Vec<RiskRow>,
    pub dkw: Vec<DkwRow>,
    pub coverage: Vec<CoverageRow>,
}

impl RiskSummary {
    /// True when no certificate was violated and every statistical row holds.
    pub fn all_pass(&self) -> bool {
        self.certificate_violations == 0
            && self.risk.iter().all(|r| r.pass)
            && self.dkw.iter().all(|r| r.pass)
            && self.coverage.iter().all(|r| r.pass)
    }
}

/// The quadratic-risk envelope √(2π)·n^(−1/2).
pub fn risk_bound(n: usize) -> f64 {
    (2.0 * std::f64::consts::PI).sqrt() / (n as f64).sqrt()
}

/// The DKW tail envelope 2·e^(−2λ²).
pub fn dkw_bound(lambda: f64) -> f64 {
    2.0 * (-2.0 * lambda * lambda).exp()
}

/// The high-probability error threshold √(2·ln(2/α))·n^(−1/2).
pub fn coverage_threshold(alpha: f64, n: usize) -> f64 {
    (2.0 * (2.0 / alpha).ln()).sqrt() / (n as f64).sqrt()
}

/// A completed plan: every trial record (in plan order) plus the summary.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanRun {
    pub records: Vec<TrialRecord>,
    pub summary: RiskSummary,
}

/// Run a plan, forwarding each completed chunk of records (in plan order) to
/// `sink` before certificates are enforced — so an aborted run leaves an
/// inspectable trail. Fails fast on the first certificate violation.
pub fn run_plan_with_sink<F>(plan: &ExperimentPlan, mut sink: F) -> Result<PlanRun>
where
    F: FnMut(&[TrialRecord]) -> Result<()>,
{
    plan.validate()?;
    let mut specs: Vec<(&DensityModel, usize, u64)> =
        Vec::with_capacity(plan.total_trials() as usize);
    for model in &plan.models {
        for &n in &plan.n_values {
            for rep in 0..plan.reps {
                specs.push((model, n, rep));
            }
        }
    }

    let mut records = Vec::with_capacity(specs.len());
    for chunk in specs.chunks(CHUNK) {
        let batch = map_chunk(plan.seed, chunk)?;
        sink(&batch)?;
        for rec in &batch {
            if !certify(rec).passed() {
                return Err(Error::Violation { replay: rec.replay_key() });
            }
        }
        records.extend(batch);
    }

    let summary = summarize(plan, &records);
    Ok(PlanRun { records, summary })
}

#[cfg(feature = "parallel")]
fn map_chunk(seed: u64, chunk: &[(&DensityModel, usize, u64)]) -> Result<Vec<TrialRecord>> {
    chunk
        .par_iter()
        .map(|&(model, n, rep)| run_trial(model, n, seed, rep))
        .collect()
}

#[cfg(not(feature = "parallel"))]
fn map_chunk(seed: u64, chunk: &[(&DensityModel, usize, u64)]) -> Result<Vec<TrialRecord>> {
    chunk
        .iter()
        .map(|&(model, n, rep)| run_trial(model, n, seed, rep))
        .collect()
}

/// Run a plan with the default execution mode (parallel when the feature is
/// enabled) and no trial sink.
pub fn run_plan(plan: &ExperimentPlan) -> Result<PlanRun> {
    run_plan_with_sink(plan, |_| Ok(()))
}

/// Run a plan strictly sequentially on the calling thread, regardless of
/// features. Exists for determinism checks and benchmarks.
pub fn run_plan_sequential(plan: &ExperimentPlan) -> Result<PlanRun> {
    plan.validate()?;
    let mut records = Vec::with_capacity(plan.total_trials() as usize);
    for model in &plan.models {
        for &n in &plan.n_values {
            for rep in 0..plan.reps {
                let rec = run_trial(model, n, plan.seed, rep)?;
                if !certify(&rec).passed() {
                    return Err(Error::Violation { replay: rec.replay_key() });
                }
                records.push(rec);
            }
        }
    }
    let summary = summarize(plan, &records);
    Ok(PlanRun { records, summary })
}

/// Aggregate a trial log into the summary tables. Records are re-sorted by
/// (model, n, replicate), so the result does not depend on log order.
pub fn summarize(plan: &ExperimentPlan, records: &[TrialRecord]) -> RiskSummary {
    let mut sorted: Vec<&TrialRecord> = records.iter().collect();
    sorted.sort_by(|a, b| {
        (&a.model, a.n, a.replicate).partial_cmp(&(&b.model, b.n, b.replicate)).unwrap()
    });

    let violations = sorted.iter().filter(|r| !certify(r).passed()).count() as u64;

    let mut risk = Vec::new();
    let mut dkw = Vec::new();
    let mut coverage = Vec::new();
    // group cells in plan order (models × n_values), not log order
    for model in &plan.models {
        let name = model.to_string();
        for &n in &plan.n_values {
            let cell: Vec<&&TrialRecord> =
                sorted.iter().filter(|r| r.model == name && r.n == n).collect();
            if cell.is_empty() {
                continue;
            }
            let reps = cell.len() as u64;
            risk.push(risk_row(&name, n, &cell));
            for &lambda in &plan.lambda_grid {
                let hits =
                    cell.iter().filter(|r| (n as f64).sqrt() * r.ks > lambda).count();
                let frequency = hits as f64 / reps as f64;
                let stderr = binomial_se(frequency, reps);
                let bound = dkw_bound(lambda);
                dkw.push(DkwRow {
                    model: name.clone(),
                    n,
                    lambda,
                    frequency,
                    bound,
                    stderr,
                    pass: frequency <= bound + SE_SLACK * stderr,
                });
            }
            for &alpha in &plan.alpha_levels {
                let threshold = coverage_threshold(alpha, n);
                let hits = cell.iter().filter(|r| r.wise <= threshold).count();
                let cov = hits as f64 / reps as f64;
                let stderr = binomial_se(cov, reps);
                let target = 1.0 - alpha;
                coverage.push(CoverageRow {
                    model: name.clone(),
                    n,
                    alpha,
                    threshold,
                    coverage: cov,
                    target,
                    stderr,
                    pass: cov >= target - SE_SLACK * stderr,
                });
            }
        }
    }

    RiskSummary {
        plan: plan.clone(),
        trials: records.len() as u64,
        certificate_violations: violations,
        risk,
        dkw,
        coverage,
    }
}

fn risk_row(name: &str, n: usize, cell: &[&&TrialRecord]) -> RiskRow {
    let reps = cell.len() as u64;
    let mean = cell.iter().map(|r| r.wise).sum::<f64>() / reps as f64;
    let stderr = if reps > 1 {
        let var = cell.iter().map(|r| (r.wise - mean).powi(2)).sum::<f64>() / (reps - 1) as f64;
        (var / reps as f64).sqrt()
    } else {
        0.0
    };
    let bound = risk_bound(n);
    RiskRow {
        model: name.to_string(),
        n,
        reps,
        mean_wise: mean,
        stderr,
        bound,
        pass: mean + SE_SLACK * stderr <= bound,
    }
}

fn binomial_se(p: f64, reps: u64) -> f64 {
    (p * (1.0 - p) / reps as f64).sqrt()
}

/// Pin the rayon worker count (reads e.g. a CLI flag or environment
/// variable). Results never depend on it; only wall-clock time does.
#[cfg(feature = "parallel")]
pub fn configure_workers(threads: usize) -> std::result::Result<(), String> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_plan() -> ExperimentPlan {
        ExperimentPlan {
            models: vec![
                "uniform".parse().unwrap(),
                "powerlaw:alpha=0.75".parse().unwrap(),
            ],
            n_values: vec![1, 20, 200],
            reps: 40,
            seed: 31,
            alpha_levels: vec![0.05],
            lambda_grid: vec![1.0],
        }
    }

    #[test]
    fn plan_validation() {
        let mut p = small_plan();
        p.reps = 0;
        assert!(p.validate().is_err());
        let mut p = small_plan();
        p.n_values.clear();
        assert!(p.validate().is_err());
        let mut p = small_plan();
        p.alpha_levels = vec![1.0];
        assert!(p.validate().is_err());
        let mut p = small_plan();
        p.lambda_grid = vec![0.0];
        assert!(p.validate().is_err());
        assert!(small_plan().validate().is_ok());
    }

    #[test]
    fn plan_json_round_trip() {
        let p = default_plan(9);
        let json = serde_json::to_string(&p).unwrap();
        let back: ExperimentPlan = serde_json::from_str(&json).unwrap();
        assert_eq!(p, back);
        // defaults fill in when a plan file omits the grids
        let sparse: ExperimentPlan = serde_json::from_str(
            r#"{"models":["uniform"],"n_values":[10],"reps":2,"seed":1}"#,
        )
        .unwrap();
        assert_eq!(sparse.alpha_levels, default_alpha_levels());
        assert_eq!(sparse.lambda_grid, default_lambda_grid());
    }

    #[test]
    fn rerun_is_byte_identical() {
        let p = small_plan();
        let a = run_plan(&p).unwrap();
        let b = run_plan(&p).unwrap();
        assert_eq!(a.records, b.records);
        assert_eq!(
            serde_json::to_string(&a.summary).unwrap(),
            serde_json::to_string(&b.summary).unwrap()
        );
    }

    #[test]
    fn sequential_matches_default_mode() {
        let p = small_plan();
        let a = run_plan(&p).unwrap();
        let b = run_plan_sequential(&p).unwrap();
        assert_eq!(a.records, b.records);
        assert_eq!(a.summary, b.summary);
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn worker_count_does_not_change_output() {
        let p = small_plan();
        let run_in = |threads: usize| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| run_plan(&p).unwrap())
        };
        let one = run_in(1);
        let four = run_in(4);
        assert_eq!(one.records, four.records);
        assert_eq!(
            serde_json::to_string(&one.summary).unwrap(),
            serde_json::to_string(&four.summary).unwrap()
        );
    }

    #[test]
    fn sink_sees_all_records_in_order() {
        let p = small_plan();
        let mut streamed = Vec::new();
        let run = run_plan_with_sink(&p, |chunk| {
            streamed.extend_from_slice(chunk);
            Ok(())
        })
        .unwrap();
        assert_eq!(streamed, run.records);
        assert_eq!(run.records.len() as u64, p.total_trials());
    }

    #[test]
    fn summary_tables_have_expected_shape() {
        let p = small_plan();
        let run = run_plan(&p).unwrap();
        assert_eq!(run.summary.risk.len(), 6); // 2 models × 3 n
        assert_eq!(run.summary.dkw.len(), 6);
        assert_eq!(run.summary.coverage.len(), 6);
        assert_eq!(run.summary.certificate_violations, 0);
        assert!(run.summary.all_pass());
    }

    #[test]
    fn bound_formulas() {
        assert!((risk_bound(100) - 0.250662827).abs() < 1e-8);
        assert!((risk_bound(10_000) - 0.0250662827).abs() < 1e-9);
        assert!((dkw_bound(0.0) - 2.0).abs() < 1e-15);
        assert!((dkw_bound(1.0) - 2.0 * (-2.0_f64).exp()).abs() < 1e-15);
        // √(2 ln 4)/√n at α = 0.5
        assert!(
            (coverage_threshold(0.5, 100) - (2.0 * 4.0_f64.ln()).sqrt() / 10.0).abs() < 1e-12
        );
    }

    #[test]
    fn large_lambda_tail_is_empty() {
        let mut p = small_plan();
        p.lambda_grid = vec![5.0];
        let run = run_plan(&p).unwrap();
        for row in &run.summary.dkw {
            assert_eq!(row.frequency, 0.0);
            assert!(row.pass);
        }
    }

    #[test]
    fn summarize_ignores_log_order() {
        let p = small_plan();
        let run = run_plan(&p).unwrap();
        let mut reversed = run.records.clone();
        reversed.reverse();
        assert_eq!(summarize(&p, &reversed), run.summary);
    }
}
