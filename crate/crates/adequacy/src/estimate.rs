//! Weighted Monte Carlo estimation of a program's result distribution.
//!
//! Each run draws its uniforms lazily from a counter-based generator
//! seeded by `(seed, run index)`, so a run is reproducible in isolation
//! and the whole estimate is independent of execution order.

use interp::{compile_program, CompileOptions, SampleMode};
use goi_machines::{shared_stream, uniform_from};
use lang_ast::{PrimRegistry, Term, ValueKind};
use opsem::eval_sampling_stream;
use serde::Serialize;
use typer::{check_closed_real, TypeError};

use crate::observe::{observe, ObserveCause};

/// Which backend performs the runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimateMode {
    /// The direct small step interpreter.
    Opsem,
    /// The compiled machine dialogue.
    Goi,
}

#[derive(Debug, Clone, Copy)]
pub struct EstimateConfig {
    pub n_runs: u64,
    pub seed: u64,
    /// Interpreter steps per run, or bounce budget per composition node.
    pub fuel: u64,
    pub mode: EstimateMode,
    /// Worker threads; results are identical for any value.
    pub jobs: usize,
}

/// The outcomes of the runs: terminated runs as (value, weight) pairs
/// in run order, failed runs tallied. Weights are nonnegative; a run
/// whose weight degenerates to NaN is counted as blocked. Values may be
/// non-finite; interval masses simply never include them.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedSampleSet {
    pub samples: Vec<(f64, f64)>,
    pub blocked: u64,
    pub exhausted: u64,
    pub n: u64,
    pub seed: u64,
}

/// One bar of the weighted histogram.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HistogramBin {
    pub lo: f64,
    pub hi: f64,
    pub weighted_mass: f64,
}

/// Bins in an emitted histogram.
pub const HISTOGRAM_BINS: usize = 20;

#[derive(Serialize)]
struct Report {
    n: u64,
    seed: u64,
    blocked: u64,
    exhausted: u64,
    mass: f64,
    histogram: Vec<HistogramBin>,
}

impl WeightedSampleSet {
    /// The estimate of the measure of the closed interval `[lo, hi]`:
    /// the weighted fraction of runs landing inside.
    pub fn mass_in(&self, lo: f64, hi: f64) -> f64 {
        self.mass_where(|v| lo <= v && v <= hi)
    }

    pub fn mass_where(&self, event: impl Fn(f64) -> bool) -> f64 {
        if self.n == 0 {
            return 0.0;
        }
        let sum: f64 = self
            .samples
            .iter()
            .filter(|(v, _)| event(*v))
            .map(|(_, w)| w)
            .sum();
        sum / self.n as f64
    }

    /// The estimate of the total mass (weighted fraction of all runs).
    pub fn total_mass(&self) -> f64 {
        if self.n == 0 {
            return 0.0;
        }
        let sum: f64 = self.samples.iter().map(|(_, w)| w).sum();
        sum / self.n as f64
    }

    /// Interval mass together with its Monte Carlo standard error.
    /// Failed runs count as zero contributions, as in the estimator.
    pub fn mass_and_se_in(&self, lo: f64, hi: f64) -> (f64, f64) {
        if self.n < 2 {
            return (self.mass_in(lo, hi), f64::INFINITY);
        }
        let n = self.n as f64;
        let (mut sum, mut sumsq) = (0.0, 0.0);
        for (v, w) in &self.samples {
            let x = if lo <= *v && *v <= hi { *w } else { 0.0 };
            sum += x;
            sumsq += x * x;
        }
        let mean = sum / n;
        let var = ((sumsq - n * mean * mean) / (n - 1.0)).max(0.0);
        (mean, (var / n).sqrt())
    }

    /// An equal width histogram over the finite sample values, each bar
    /// carrying its weighted mass. Empty when no finite value landed.
    pub fn histogram(&self, bins: usize) -> Vec<HistogramBin> {
        let finite: Vec<(f64, f64)> = self
            .samples
            .iter()
            .copied()
            .filter(|(v, _)| v.is_finite())
            .collect();
        if finite.is_empty() || bins == 0 || self.n == 0 {
            return Vec::new();
        }
        let lo = finite.iter().map(|(v, _)| *v).fold(f64::INFINITY, f64::min);
        let hi = finite
            .iter()
            .map(|(v, _)| *v)
            .fold(f64::NEG_INFINITY, f64::max);
        let n = self.n as f64;
        if lo == hi {
            let mass: f64 = finite.iter().map(|(_, w)| w).sum();
            return vec![HistogramBin {
                lo,
                hi,
                weighted_mass: mass / n,
            }];
        }
        let width = (hi - lo) / bins as f64;
        let mut bars = vec![0.0f64; bins];
        for (v, w) in finite {
            let k = (((v - lo) / width) as usize).min(bins - 1);
            bars[k] += w;
        }
        bars.into_iter()
            .enumerate()
            .map(|(k, mass)| HistogramBin {
                lo: lo + width * k as f64,
                hi: if k + 1 == bins {
                    hi
                } else {
                    lo + width * (k + 1) as f64
                },
                weighted_mass: mass / n,
            })
            .collect()
    }

    /// The summary emitted by the command line tool. Deterministic byte
    /// for byte given the same sample set.
    pub fn report_json(&self, pretty: bool) -> String {
        let report = Report {
            n: self.n,
            seed: self.seed,
            blocked: self.blocked,
            exhausted: self.exhausted,
            mass: self.total_mass(),
            histogram: self.histogram(HISTOGRAM_BINS),
        };
        if pretty {
            serde_json::to_string_pretty(&report).expect("report serializes")
        } else {
            serde_json::to_string(&report).expect("report serializes")
        }
    }

    /// The raw samples as CSV, one terminated run per line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("value,weight\n");
        for (v, w) in &self.samples {
            out.push_str(&format!("{v},{w}\n"));
        }
        out
    }
}

enum RunResult {
    Sample(f64, f64),
    Blocked,
    Exhausted,
}

/// Estimate the result distribution of a closed `Real` program by
/// `n_runs` independent weighted executions.
pub fn estimate_distribution(
    reg: &PrimRegistry,
    t: &Term,
    cfg: &EstimateConfig,
) -> Result<WeightedSampleSet, TypeError> {
    check_closed_real(reg, t)?;
    let results = collect_runs(reg, t, cfg);
    let mut set = WeightedSampleSet {
        samples: Vec::new(),
        blocked: 0,
        exhausted: 0,
        n: cfg.n_runs,
        seed: cfg.seed,
    };
    for r in results {
        match r {
            RunResult::Sample(v, w) => set.samples.push((v, w)),
            RunResult::Blocked => set.blocked += 1,
            RunResult::Exhausted => set.exhausted += 1,
        }
    }
    Ok(set)
}

fn collect_runs(reg: &PrimRegistry, t: &Term, cfg: &EstimateConfig) -> Vec<RunResult> {
    let jobs = cfg.jobs.max(1).min(cfg.n_runs.max(1) as usize);
    if jobs == 1 {
        return (0..cfg.n_runs).map(|i| run_one(reg, t, cfg, i)).collect();
    }
    let per = cfg.n_runs.div_ceil(jobs as u64);
    let mut out = Vec::with_capacity(cfg.n_runs as usize);
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..jobs as u64)
            .map(|j| {
                let lo = j * per;
                let hi = ((j + 1) * per).min(cfg.n_runs);
                scope.spawn(move || (lo..hi).map(|i| run_one(reg, t, cfg, i)).collect::<Vec<_>>())
            })
            .collect();
        for h in handles {
            out.extend(h.join().expect("estimator worker panicked"));
        }
    });
    out
}

fn run_one(reg: &PrimRegistry, t: &Term, cfg: &EstimateConfig, run: u64) -> RunResult {
    match cfg.mode {
        EstimateMode::Opsem => {
            let rng = shared_stream(cfg.seed, run);
            let mut rng = rng.lock().expect("fresh generator");
            let mut next = || uniform_from(&mut rng);
            let out = eval_sampling_stream(reg, t, 1.0, &mut next, cfg.fuel);
            if out.exhausted {
                return RunResult::Exhausted;
            }
            match out.value {
                Some(v) => {
                    let b = match v.node {
                        ValueKind::RealConst(b) => b,
                        _ => unreachable!("a closed value of type Real is a constant"),
                    };
                    sample_or_blocked(b, out.weight)
                }
                None => RunResult::Blocked,
            }
        }
        EstimateMode::Goi => {
            let opt = CompileOptions {
                fuel: cfg.fuel,
                mode: SampleMode::Stream(shared_stream(cfg.seed, run)),
                iterants: None,
            };
            let m = compile_program(reg, t, &opt)
                .expect("program was checked before the runs")
                .machine;
            match observe(&m, 1.0, &[]) {
                Ok(o) => sample_or_blocked(o.value, o.weight),
                Err(ObserveCause::FuelExhausted) => RunResult::Exhausted,
                Err(_) => RunResult::Blocked,
            }
        }
    }
}

fn sample_or_blocked(value: f64, weight: f64) -> RunResult {
    if weight.is_nan() {
        RunResult::Blocked
    } else {
        RunResult::Sample(value, weight)
    }
}
