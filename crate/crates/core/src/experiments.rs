//! The six benchmark scenarios and the Monte-Carlo harness.
//!
//! Every scenario has `K = 100` Gaussian arms, `tau = 0.5` and true positive
//! set `{5, ..., 9}` (0-based). Iteration `k` of a batch draws from the
//! stream seeded with `base_seed + k`: the instance is built first (the
//! uniform variance components are re-drawn per iteration), then each
//! algorithm runs on its own clone of the stream from that point on.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bandit::{ArmSpec, BanditInstance, RngStream};
use crate::error::{Error, Result};
use crate::policy::{build_policy, PolicyKind, PolicyParams, Step};

pub const NUM_ARMS: usize = 100;
pub const THRESHOLD: f64 = 0.5;
pub const DEFAULT_BUDGET: u64 = 10_000;
pub const DEFAULT_ITERATIONS: usize = 500;

/// One algorithm of a roster with its display label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RosterEntry {
    pub label: String,
    pub params: PolicyParams,
}

impl RosterEntry {
    pub fn new(kind: PolicyKind) -> Self {
        Self {
            label: kind.name().to_string(),
            params: PolicyParams::new(kind),
        }
    }

    /// UCBEV with `a = 4^power * (T - 2K) / H_sigma,1`.
    pub fn ucbev_scaled(power: i32) -> Self {
        let multiplier = 4f64.powi(power);
        Self {
            label: format!("ucbev_x{multiplier}"),
            params: PolicyParams::new(PolicyKind::Ucbev).with_ucbev_multiplier(multiplier),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VarianceTemplate {
    /// Variance of arms 0..5 and 5..10.
    pub low_group: f64,
    pub high_group: f64,
    /// Uniform interval for arms 10..100.
    pub rest: (f64, f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub id: u32,
    pub budget: u64,
}

impl ExperimentSpec {
    pub fn new(id: u32) -> Result<Self> {
        if !(1..=6).contains(&id) {
            return Err(Error::UnknownExperiment(id));
        }
        Ok(Self {
            id,
            budget: DEFAULT_BUDGET,
        })
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn num_arms(&self) -> usize {
        NUM_ARMS
    }

    pub fn threshold(&self) -> f64 {
        THRESHOLD
    }

    pub fn means(&self) -> Vec<f64> {
        let head: Vec<f64> = match self.id {
            1 => {
                let mut m: Vec<f64> = (0..4).map(|i| 0.2 + i as f64 * 0.05).collect();
                m.extend([0.45, 0.55]);
                m.extend((0..4).map(|i| 0.65 + i as f64 * 0.05));
                m
            }
            2 => {
                let mut m: Vec<f64> = (1..=4).map(|i| 0.4 - 0.2f64.powi(i)).collect();
                m.extend([0.45, 0.55]);
                m.extend((1..=4).map(|i| 0.6 + 0.2f64.powi(5 - i)));
                m
            }
            3 => vec![0.1, 0.1, 0.1, 0.35, 0.45, 0.55, 0.65, 0.9, 0.9, 0.9],
            _ => {
                let mut m = vec![0.45; 5];
                m.extend([0.55; 5]);
                m
            }
        };
        let mut means = head;
        means.resize(NUM_ARMS, 0.4);
        means
    }

    pub fn variance_template(&self) -> VarianceTemplate {
        match self.id {
            1..=4 => VarianceTemplate {
                low_group: 0.5,
                high_group: 0.6,
                rest: (0.38, 0.42),
            },
            _ => VarianceTemplate {
                low_group: 0.3,
                high_group: 0.8,
                rest: (0.2, 0.3),
            },
        }
    }

    fn build(&self, mut rest_variance: impl FnMut() -> f64) -> BanditInstance {
        let tpl = self.variance_template();
        let arms = self
            .means()
            .into_iter()
            .enumerate()
            .map(|(i, mean)| {
                let variance = match i {
                    0..5 => tpl.low_group,
                    5..10 => tpl.high_group,
                    _ => rest_variance(),
                };
                ArmSpec::gaussian(mean, variance).expect("scenario variances are positive")
            })
            .collect();
        BanditInstance::new(arms, THRESHOLD).expect("scenario threshold is valid")
    }

    /// Concrete instance; draws the uniform variance components from `rng`.
    pub fn instantiate(&self, rng: &mut RngStream) -> BanditInstance {
        let (lo, hi) = self.variance_template().rest;
        self.build(|| rng.random_range(lo..=hi))
    }

    /// Instance with the uniform components at their interval midpoint.
    pub fn midpoint_instance(&self) -> BanditInstance {
        let (lo, hi) = self.variance_template().rest;
        self.build(|| 0.5 * (lo + hi))
    }

    pub fn roster(&self) -> Vec<RosterEntry> {
        if self.id == 6 {
            vec![
                RosterEntry::ucbev_scaled(-1),
                RosterEntry::ucbev_scaled(0),
                RosterEntry::ucbev_scaled(4),
                RosterEntry::new(PolicyKind::AugUcb),
            ]
        } else {
            PolicyKind::ALL.into_iter().map(RosterEntry::new).collect()
        }
    }
}

pub fn make_experiment(id: u32, seed: u64) -> Result<(BanditInstance, Vec<RosterEntry>)> {
    let spec = ExperimentSpec::new(id)?;
    let mut rng = RngStream::new(seed);
    Ok((spec.instantiate(&mut rng), spec.roster()))
}

/// Per-step misclassification indicator of one run, `t = 1..=T`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErrorSeries {
    pub errors: Vec<bool>,
    /// Pulls actually made; below `T` when the policy halted.
    pub pulls: u64,
}

impl ErrorSeries {
    pub fn len(&self) -> usize {
        self.errors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.errors.is_empty()
    }

    pub fn final_error(&self) -> bool {
        self.errors.last().copied().unwrap_or(true)
    }
}

/// Runs one policy to the end of its budget. After a halt the last
/// classification is carried forward.
pub fn run_single(
    params: &PolicyParams,
    instance: &BanditInstance,
    budget: u64,
    rng: &mut RngStream,
) -> Result<ErrorSeries> {
    let mut policy = build_policy(instance, budget, params, rng)?;
    let mut errors = Vec::with_capacity(budget as usize);
    errors.extend_from_slice(policy.tracker().warmup_trace());
    while (errors.len() as u64) < budget {
        if !policy.is_halted() {
            if let Step::Halted = policy.step(rng)? {
                debug_assert!(policy.is_halted());
            }
        }
        errors.push(policy.is_misclassified());
    }
    Ok(ErrorSeries {
        errors,
        pulls: policy.pulls(),
    })
}

/// Error percentage per time-step over a batch of iterations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateSeries {
    pub experiment: u32,
    pub label: String,
    pub kind: PolicyKind,
    pub iterations: usize,
    pub base_seed: u64,
    pub error_pct: Vec<f64>,
}

impl AggregateSeries {
    pub fn final_error_pct(&self) -> f64 {
        self.error_pct.last().copied().unwrap_or(100.0)
    }
}

fn run_iteration(
    spec: &ExperimentSpec,
    roster: &[RosterEntry],
    seed: u64,
) -> Result<Vec<ErrorSeries>> {
    let mut rng = RngStream::new(seed);
    let instance = spec.instantiate(&mut rng);
    roster
        .iter()
        .map(|entry| run_single(&entry.params, &instance, spec.budget, &mut rng.clone()))
        .collect()
}

fn add_counts(counts: &mut [Vec<u32>], runs: &[ErrorSeries]) {
    for (acc, run) in counts.iter_mut().zip(runs) {
        for (c, &e) in acc.iter_mut().zip(&run.errors) {
            *c += u32::from(e);
        }
    }
}

/// Runs `iterations` independent repetitions of every roster entry.
///
/// Counts are integer sums, so the output does not depend on `parallelism`.
pub fn run_batch(
    spec: &ExperimentSpec,
    roster: &[RosterEntry],
    iterations: usize,
    base_seed: u64,
    parallelism: usize,
) -> Result<Vec<AggregateSeries>> {
    if iterations == 0 {
        return Err(Error::InvalidParameter(
            "at least one iteration is required".into(),
        ));
    }
    for entry in roster {
        entry.params.validate()?;
    }
    let t = spec.budget as usize;
    let zero = || vec![vec![0u32; t]; roster.len()];
    let seed_of = |k: usize| base_seed.wrapping_add(k as u64);

    let counts = if parallelism <= 1 {
        let mut counts = zero();
        for k in 0..iterations {
            add_counts(&mut counts, &run_iteration(spec, roster, seed_of(k))?);
        }
        counts
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(parallelism)
            .build()
            .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
        pool.install(|| {
            (0..iterations)
                .into_par_iter()
                .try_fold(zero, |mut acc, k| {
                    add_counts(&mut acc, &run_iteration(spec, roster, seed_of(k))?);
                    Ok::<_, Error>(acc)
                })
                .try_reduce(zero, |mut a, b| {
                    for (x, y) in a.iter_mut().zip(b) {
                        for (p, q) in x.iter_mut().zip(y) {
                            *p += q;
                        }
                    }
                    Ok(a)
                })
        })?
    };

    let n = iterations as f64;
    Ok(roster
        .iter()
        .zip(counts)
        .map(|(entry, c)| AggregateSeries {
            experiment: spec.id,
            label: entry.label.clone(),
            kind: entry.params.kind,
            iterations,
            base_seed,
            error_pct: c.into_iter().map(|x| 100.0 * f64::from(x) / n).collect(),
        })
        .collect())
}
