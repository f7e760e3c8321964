//! Augmented-UCB: round-based arm elimination with variance-aware
//! confidence radii.
//!
//! Each step pulls the active arm minimizing `|mean_hat - tau| - 2 s_i` with
//!
//! ```text
//! s_i = sqrt(rho * psi_m * (v_hat_i + 1) * ln(T * eps_m) / (4 * n_i))
//! ```
//!
//! and then removes every active arm whose interval `mean_hat +- 2 s_i` no
//! longer contains `tau`. Round parameters are halved/recomputed once the
//! step counter reaches `N_m`, for at most `M + 1` resets.

use std::f64::consts::E;

use crate::bandit::{BanditInstance, RngStream};
use crate::error::{Error, Result};
use crate::stats::ArmStats;

use super::{argmin, Policy, PolicyKind, Step, Tracker};

/// Frozen verdict for an eliminated arm.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Label {
    /// Mean below the threshold.
    Bad,
    /// Mean at or above the threshold.
    Good,
}

/// Confidence radius `s_i`.
pub fn radius(stats: &ArmStats, psi: f64, eps: f64, rho: f64, budget: u64) -> Result<f64> {
    let log_arg = budget as f64 * eps;
    if !(log_arg > 1.0) {
        return Err(Error::NonPositiveLogArgument(log_arg));
    }
    let variance = stats
        .variance()
        .ok_or_else(|| Error::InvalidParameter("radius of an unpulled arm".into()))?;
    Ok(radius_from_coefficient(
        rho * psi * log_arg.ln() / 4.0,
        variance,
        stats.count(),
    ))
}

#[inline]
fn radius_from_coefficient(coefficient: f64, variance: f64, pulls: u64) -> f64 {
    (coefficient * (variance + 1.0) / pulls as f64).sqrt()
}

/// Elimination test with the strict inequalities
/// `mean + s < tau - s` (bad) and `mean - s > tau + s` (good).
pub fn elimination_verdict(mean: f64, radius: f64, threshold: f64) -> Option<Label> {
    if mean + radius < threshold - radius {
        Some(Label::Bad)
    } else if mean - radius > threshold + radius {
        Some(Label::Good)
    } else {
        None
    }
}

/// Picks the candidate minimizing `distance - 2 * radius`; candidates are
/// `(arm, |mean_hat - tau|, s)` in ascending arm order.
pub fn select_by_radius<I>(candidates: I) -> Option<usize>
where
    I: IntoIterator<Item = (usize, f64, f64)>,
{
    argmin(candidates.into_iter().map(|(i, d, s)| (i, d - 2.0 * s)))
}

/// The round schedule `(m, eps_m, psi_m, l_m, N_m)` and the cap `M`.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundSchedule {
    budget: u64,
    psi_denominator: f64,
    max_round: i64,
    round: u32,
    eps: f64,
    psi: f64,
    length: u64,
    next_reset: u64,
}

impl RoundSchedule {
    pub fn new(num_arms: usize, budget: u64) -> Result<Self> {
        let k = num_arms as f64;
        let log_term = (3.0 / 16.0 * k * k.ln()).ln();
        let psi_denominator = 128.0 * log_term * log_term;
        if !(psi_denominator > 0.0 && psi_denominator.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "exploration factor is undefined for K = {num_arms}"
            )));
        }
        let max_round = (0.5 * (budget as f64 / E).log2()).floor() as i64;
        let mut schedule = Self {
            budget,
            psi_denominator,
            max_round,
            round: 0,
            eps: 1.0,
            psi: 0.0,
            length: 0,
            next_reset: 0,
        };
        schedule.psi = schedule.psi_for(1.0);
        schedule.length = schedule.length_for(schedule.psi, 1.0);
        schedule.next_reset = schedule.length.saturating_mul(num_arms as u64);
        Ok(schedule)
    }

    fn psi_for(&self, eps: f64) -> f64 {
        self.budget as f64 * eps / self.psi_denominator
    }

    fn length_for(&self, psi: f64, eps: f64) -> u64 {
        let l = (2.0 * psi * (self.budget as f64 * eps).ln() / eps).ceil();
        // Saturating cast; negative only when T * eps < 1.
        l.max(0.0) as u64
    }

    pub fn round(&self) -> u32 {
        self.round
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn psi(&self) -> f64 {
        self.psi
    }

    pub fn length(&self) -> u64 {
        self.length
    }

    pub fn next_reset(&self) -> u64 {
        self.next_reset
    }

    /// `M = floor(log2(T / e) / 2)`; negative when `T < e`.
    pub fn max_round(&self) -> i64 {
        self.max_round
    }

    pub fn log_argument(&self) -> f64 {
        self.budget as f64 * self.eps
    }

    pub fn due(&self, t: u64) -> bool {
        t >= self.next_reset && i64::from(self.round) <= self.max_round
    }

    /// Starts round `m + 1` at step `t` with `active` arms left.
    pub fn reset(&mut self, t: u64, active: usize) {
        self.eps /= 2.0;
        self.psi = self.psi_for(self.eps);
        self.length = self.length_for(self.psi, self.eps);
        self.next_reset = t.saturating_add(self.length.saturating_mul(active as u64));
        self.round += 1;
    }
}

#[derive(Debug, Clone)]
pub struct AugUcb {
    tracker: Tracker,
    rho: f64,
    schedule: RoundSchedule,
    active: Vec<usize>,
    labels: Vec<Option<Label>>,
}

impl AugUcb {
    /// Sets up round 0 and pulls each arm once.
    pub fn new(
        instance: BanditInstance,
        budget: u64,
        rho: f64,
        rng: &mut RngStream,
    ) -> Result<Self> {
        if !(rho > 0.0 && rho <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "rho must lie in (0, 1], got {rho}"
            )));
        }
        let k = instance.num_arms();
        if k < 2 {
            return Err(Error::InvalidInstance(
                "AugUCB needs at least two arms".into(),
            ));
        }
        let schedule = RoundSchedule::new(k, budget)?;
        let mut tracker = Tracker::new(instance, budget);
        tracker.require_budget(PolicyKind::AugUcb, k as u64)?;
        for arm in 0..k {
            tracker.warmup_pull(arm, rng)?;
        }
        Ok(Self {
            tracker,
            rho,
            schedule,
            active: (0..k).collect(),
            labels: vec![None; k],
        })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn schedule(&self) -> &RoundSchedule {
        &self.schedule
    }

    /// Active set `B_m`, ascending.
    pub fn active(&self) -> &[usize] {
        &self.active
    }

    pub fn labels(&self) -> &[Option<Label>] {
        &self.labels
    }

    fn coefficient(&self) -> Result<f64> {
        let log_arg = self.schedule.log_argument();
        if !(log_arg > 1.0) {
            return Err(Error::NonPositiveLogArgument(log_arg));
        }
        Ok(self.rho * self.schedule.psi() * log_arg.ln() / 4.0)
    }

    /// Current radius of `arm`.
    pub fn radius_of(&self, arm: usize) -> Result<f64> {
        radius(
            self.tracker.arm_stats(arm),
            self.schedule.psi(),
            self.schedule.eps(),
            self.rho,
            self.tracker.budget(),
        )
    }

    pub fn select(&self) -> Result<usize> {
        let c = self.coefficient()?;
        select_by_radius(self.active.iter().map(|&i| {
            let st = self.tracker.arm_stats(i);
            let s = radius_from_coefficient(c, st.raw_variance(), st.count());
            (i, self.tracker.distance(i), s)
        }))
        .ok_or(Error::EmptyActiveSet)
    }

    /// Removes every active arm that satisfies an elimination condition.
    pub fn eliminate(&mut self) -> Result<()> {
        let c = self.coefficient()?;
        let tau = self.tracker.threshold();
        let tracker = &self.tracker;
        let labels = &mut self.labels;
        self.active.retain(|&i| {
            let st = tracker.arm_stats(i);
            let s = radius_from_coefficient(c, st.raw_variance(), st.count());
            match elimination_verdict(st.raw_mean(), s, tau) {
                Some(label) => {
                    labels[i] = Some(label);
                    false
                }
                None => true,
            }
        });
        Ok(())
    }
}

impl Policy for AugUcb {
    fn kind(&self) -> PolicyKind {
        PolicyKind::AugUcb
    }

    fn tracker(&self) -> &Tracker {
        &self.tracker
    }

    fn step(&mut self, rng: &mut RngStream) -> Result<Step> {
        if self.active.is_empty() {
            return Ok(Step::Halted);
        }
        self.tracker.ensure_budget()?;
        let arm = self.select()?;
        let reward = self.tracker.pull(arm, rng)?;
        self.eliminate()?;
        let t = self.tracker.pulls();
        if self.schedule.due(t) {
            self.schedule.reset(t, self.active.len());
        }
        Ok(Step::Pulled { arm, reward })
    }

    fn is_halted(&self) -> bool {
        self.active.is_empty()
    }
}
