//! Sequential policies for the thresholding bandit problem.
//!
//! Every policy owns a [`Tracker`] holding the per-arm statistics and the
//! running classification `{ i : mean_hat_i >= tau }`. Construction performs
//! the policy's forced initial pulls; after that [`Policy::step`] makes at
//! most one pull per call.

mod augucb;
mod csar;
mod index;
mod uniform;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bandit::{BanditInstance, RngStream};
use crate::error::{Error, Result};
use crate::stats::ArmStats;

pub use augucb::{elimination_verdict, radius, select_by_radius, AugUcb, Label, RoundSchedule};
pub use csar::{csar_phase_lengths, farthest_from_threshold, Csar};
pub use index::{apt_index, argmin, ucbe_index, ucbev_index, ucbev_width, IndexPolicy, IndexRule};
pub use uniform::Uniform;

/// Outcome of a single [`Policy::step`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Step {
    Pulled {
        arm: usize,
        reward: f64,
    },
    /// The policy has stopped sampling; its classification is final.
    Halted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PolicyKind {
    AugUcb,
    Apt,
    Ucbe,
    Ucbev,
    Csar,
    Ua,
}

impl PolicyKind {
    pub const ALL: [PolicyKind; 6] = [
        PolicyKind::Apt,
        PolicyKind::AugUcb,
        PolicyKind::Ucbe,
        PolicyKind::Ucbev,
        PolicyKind::Csar,
        PolicyKind::Ua,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PolicyKind::AugUcb => "augucb",
            PolicyKind::Apt => "apt",
            PolicyKind::Ucbe => "ucbe",
            PolicyKind::Ucbev => "ucbev",
            PolicyKind::Csar => "csar",
            PolicyKind::Ua => "ua",
        }
    }

    /// Number of forced pulls made during initialization for `k` arms.
    pub fn initial_pulls(self, k: usize) -> u64 {
        match self {
            PolicyKind::Ucbev => 2 * k as u64,
            PolicyKind::Csar => 0,
            _ => k as u64,
        }
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PolicyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "augucb" => Ok(PolicyKind::AugUcb),
            "apt" => Ok(PolicyKind::Apt),
            "ucbe" => Ok(PolicyKind::Ucbe),
            "ucbev" => Ok(PolicyKind::Ucbev),
            "csar" => Ok(PolicyKind::Csar),
            "ua" | "uniform" => Ok(PolicyKind::Ua),
            other => Err(Error::InvalidParameter(format!("unknown policy '{other}'"))),
        }
    }
}

/// Exploration width used by UCBEV.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UcbevWidth {
    /// `sqrt(2 a v / n) + 7 a / (3 n)`.
    #[default]
    Bernstein,
    /// UCBE's `sqrt(a / n)` with UCBEV's exploration scale.
    Ucbe,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolicyParams {
    pub kind: PolicyKind,
    /// AugUCB arm elimination parameter.
    pub rho: f64,
    /// APT margin of error.
    pub apt_margin: f64,
    /// Explicit UCBE/UCBEV exploration scale `a`. When `None` it is derived
    /// from the true instance: `(T - K) / H1` for UCBE and
    /// `(T - 2K) / H_sigma,1` for UCBEV.
    pub exploration: Option<f64>,
    /// Factor applied to UCBEV's derived `a` (`4^i` sweeps).
    pub ucbev_multiplier: f64,
    pub ucbev_width: UcbevWidth,
}

impl PolicyParams {
    pub fn new(kind: PolicyKind) -> Self {
        Self {
            kind,
            rho: 1.0 / 3.0,
            apt_margin: 0.05,
            exploration: None,
            ucbev_multiplier: 1.0,
            ucbev_width: UcbevWidth::Bernstein,
        }
    }

    pub fn with_rho(mut self, rho: f64) -> Self {
        self.rho = rho;
        self
    }

    pub fn with_apt_margin(mut self, margin: f64) -> Self {
        self.apt_margin = margin;
        self
    }

    pub fn with_exploration(mut self, a: f64) -> Self {
        self.exploration = Some(a);
        self
    }

    pub fn with_ucbev_multiplier(mut self, multiplier: f64) -> Self {
        self.ucbev_multiplier = multiplier;
        self
    }

    pub fn with_ucbev_width(mut self, width: UcbevWidth) -> Self {
        self.ucbev_width = width;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rho > 0.0 && self.rho <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "rho must lie in (0, 1], got {}",
                self.rho
            )));
        }
        if !(self.apt_margin >= 0.0 && self.apt_margin.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "APT margin must be non-negative, got {}",
                self.apt_margin
            )));
        }
        if let Some(a) = self.exploration {
            if !(a > 0.0 && a.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "exploration a must be positive, got {a}"
                )));
            }
        }
        if !(self.ucbev_multiplier > 0.0 && self.ucbev_multiplier.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "UCBEV multiplier must be positive, got {}",
                self.ucbev_multiplier
            )));
        }
        Ok(())
    }
}

/// State shared by all policies: budget accounting, per-arm statistics and
/// the current classification.
#[derive(Debug, Clone)]
pub struct Tracker {
    instance: BanditInstance,
    budget: u64,
    pulls: u64,
    stats: Vec<ArmStats>,
    predicted: Vec<bool>,
    truth: Vec<bool>,
    mismatches: usize,
    warmup: Vec<bool>,
}

impl Tracker {
    pub fn new(instance: BanditInstance, budget: u64) -> Self {
        let k = instance.num_arms();
        let truth = instance.positive_mask();
        // Unpulled arms are classified negative.
        let mismatches = truth.iter().filter(|&&p| p).count();
        Self {
            instance,
            budget,
            pulls: 0,
            stats: vec![ArmStats::new(); k],
            predicted: vec![false; k],
            truth,
            mismatches,
            warmup: Vec::new(),
        }
    }

    pub fn instance(&self) -> &BanditInstance {
        &self.instance
    }

    pub fn num_arms(&self) -> usize {
        self.stats.len()
    }

    pub fn threshold(&self) -> f64 {
        self.instance.threshold()
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    /// Pulls made so far (the time-step `t`).
    pub fn pulls(&self) -> u64 {
        self.pulls
    }

    pub fn remaining(&self) -> u64 {
        self.budget - self.pulls
    }

    pub fn stats(&self) -> &[ArmStats] {
        &self.stats
    }

    pub fn arm_stats(&self, arm: usize) -> &ArmStats {
        &self.stats[arm]
    }

    /// `|mean_hat - tau|` for a pulled arm.
    pub(crate) fn distance(&self, arm: usize) -> f64 {
        (self.stats[arm].raw_mean() - self.instance.threshold()).abs()
    }

    /// Current classification `{ i : mean_hat_i >= tau }`, ascending.
    pub fn classification(&self) -> Vec<usize> {
        self.predicted
            .iter()
            .enumerate()
            .filter(|(_, &p)| p)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn classification_mask(&self) -> &[bool] {
        &self.predicted
    }

    /// Whether the current classification differs from the true positive set.
    pub fn is_misclassified(&self) -> bool {
        self.mismatches > 0
    }

    /// Misclassification indicator after each forced initial pull.
    pub fn warmup_trace(&self) -> &[bool] {
        &self.warmup
    }

    pub(crate) fn ensure_budget(&self) -> Result<()> {
        if self.pulls >= self.budget {
            Err(Error::BudgetExhausted(self.pulls))
        } else {
            Ok(())
        }
    }

    pub(crate) fn pull(&mut self, arm: usize, rng: &mut RngStream) -> Result<f64> {
        self.ensure_budget()?;
        let reward = self.instance.arm(arm).sample(rng);
        self.pulls += 1;
        let stats = &mut self.stats[arm];
        stats.push(reward);
        let now = stats.raw_mean() >= self.instance.threshold();
        let before = self.predicted[arm];
        if now != before {
            self.predicted[arm] = now;
            if now == self.truth[arm] {
                self.mismatches -= 1;
            } else {
                self.mismatches += 1;
            }
        }
        Ok(reward)
    }

    pub(crate) fn warmup_pull(&mut self, arm: usize, rng: &mut RngStream) -> Result<f64> {
        let reward = self.pull(arm, rng)?;
        self.warmup.push(self.is_misclassified());
        Ok(reward)
    }

    pub(crate) fn require_budget(&self, kind: PolicyKind, required: u64) -> Result<()> {
        if self.budget < required {
            return Err(Error::BudgetTooSmall {
                budget: self.budget,
                required,
            });
        }
        if required == 0 && self.budget == 0 {
            return Err(Error::InvalidParameter(format!(
                "{kind} needs a positive budget"
            )));
        }
        Ok(())
    }
}

/// Common contract of all policies.
pub trait Policy: Send {
    fn kind(&self) -> PolicyKind;

    fn tracker(&self) -> &Tracker;

    /// One select / sample / update cycle followed by policy bookkeeping.
    ///
    /// Fails with [`Error::BudgetExhausted`] once `T` pulls have been made.
    /// A policy that has stopped sampling returns [`Step::Halted`] instead.
    fn step(&mut self, rng: &mut RngStream) -> Result<Step>;

    fn is_halted(&self) -> bool {
        false
    }

    fn pulls(&self) -> u64 {
        self.tracker().pulls()
    }

    fn budget(&self) -> u64 {
        self.tracker().budget()
    }

    fn classification(&self) -> Vec<usize> {
        self.tracker().classification()
    }

    fn is_misclassified(&self) -> bool {
        self.tracker().is_misclassified()
    }
}

/// Builds a policy and performs its initial pulls.
pub fn build_policy(
    instance: &BanditInstance,
    budget: u64,
    params: &PolicyParams,
    rng: &mut RngStream,
) -> Result<Box<dyn Policy>> {
    params.validate()?;
    Ok(match params.kind {
        PolicyKind::AugUcb => Box::new(AugUcb::new(instance.clone(), budget, params.rho, rng)?),
        PolicyKind::Apt => Box::new(IndexPolicy::apt(
            instance.clone(),
            budget,
            params.apt_margin,
            rng,
        )?),
        PolicyKind::Ucbe => Box::new(IndexPolicy::ucbe(
            instance.clone(),
            budget,
            params.exploration,
            rng,
        )?),
        PolicyKind::Ucbev => Box::new(IndexPolicy::ucbev(
            instance.clone(),
            budget,
            params.exploration,
            params.ucbev_multiplier,
            params.ucbev_width,
            rng,
        )?),
        PolicyKind::Csar => Box::new(Csar::new(instance.clone(), budget, rng)?),
        PolicyKind::Ua => Box::new(Uniform::new(instance.clone(), budget, rng)?),
    })
}
