//! Index policies: every arm carries a score and the minimizer is pulled.

use crate::bandit::{BanditInstance, RngStream};
use crate::complexity;
use crate::error::{Error, Result};

use super::{Policy, PolicyKind, Step, Tracker, UcbevWidth};

/// Position of the smallest score; ties go to the first (lowest) index.
pub fn argmin<I>(scores: I) -> Option<usize>
where
    I: IntoIterator<Item = (usize, f64)>,
{
    let mut best: Option<(usize, f64)> = None;
    for (i, score) in scores {
        match best {
            Some((_, b)) if !(score < b) => {}
            _ => best = Some((i, score)),
        }
    }
    best.map(|(i, _)| i)
}

/// APT: `sqrt(n) * (|mean_hat - tau| + margin)`.
pub fn apt_index(pulls: u64, distance: f64, margin: f64) -> f64 {
    (pulls as f64).sqrt() * (distance + margin)
}

/// UCBE: `|mean_hat - tau| - sqrt(a / n)`.
pub fn ucbe_index(pulls: u64, distance: f64, a: f64) -> f64 {
    distance - (a / pulls as f64).sqrt()
}

/// Bernstein-style exploration width `sqrt(2 a v / n) + 7 a / (3 n)`.
pub fn ucbev_width(pulls: u64, variance: f64, a: f64) -> f64 {
    let n = pulls as f64;
    (2.0 * a * variance / n).sqrt() + 7.0 * a / (3.0 * n)
}

pub fn ucbev_index(pulls: u64, distance: f64, variance: f64, a: f64) -> f64 {
    distance - ucbev_width(pulls, variance, a)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IndexRule {
    Apt { margin: f64 },
    Ucbe { a: f64 },
    Ucbev { a: f64, width: UcbevWidth },
}

impl IndexRule {
    fn score(&self, tracker: &Tracker, arm: usize) -> f64 {
        let stats = tracker.arm_stats(arm);
        let n = stats.count();
        let distance = tracker.distance(arm);
        match *self {
            IndexRule::Apt { margin } => apt_index(n, distance, margin),
            IndexRule::Ucbe { a } => ucbe_index(n, distance, a),
            IndexRule::Ucbev {
                a,
                width: UcbevWidth::Bernstein,
            } => ucbev_index(n, distance, stats.raw_variance(), a),
            IndexRule::Ucbev {
                a,
                width: UcbevWidth::Ucbe,
            } => ucbe_index(n, distance, a),
        }
    }
}

/// APT, UCBE and UCBEV.
#[derive(Debug, Clone)]
pub struct IndexPolicy {
    kind: PolicyKind,
    rule: IndexRule,
    tracker: Tracker,
}

impl IndexPolicy {
    pub fn apt(
        instance: BanditInstance,
        budget: u64,
        margin: f64,
        rng: &mut RngStream,
    ) -> Result<Self> {
        if !(margin >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "APT margin must be non-negative, got {margin}"
            )));
        }
        Self::start(
            PolicyKind::Apt,
            IndexRule::Apt { margin },
            instance,
            budget,
            1,
            rng,
        )
    }

    /// UCBE. Without an explicit `a`, uses `(T - K) / H1` of the true instance.
    pub fn ucbe(
        instance: BanditInstance,
        budget: u64,
        exploration: Option<f64>,
        rng: &mut RngStream,
    ) -> Result<Self> {
        let a = match exploration {
            Some(a) => a,
            None => {
                let k = instance.num_arms() as f64;
                let h1 = complexity::h1(&complexity::compute_gaps(&instance))?;
                (budget as f64 - k) / h1
            }
        };
        Self::start(
            PolicyKind::Ucbe,
            IndexRule::Ucbe { a },
            instance,
            budget,
            1,
            rng,
        )
    }

    /// UCBEV. Without an explicit `a`, uses `multiplier * (T - 2K) / H_sigma,1`
    /// of the true instance.
    pub fn ucbev(
        instance: BanditInstance,
        budget: u64,
        exploration: Option<f64>,
        multiplier: f64,
        width: UcbevWidth,
        rng: &mut RngStream,
    ) -> Result<Self> {
        let a = match exploration {
            Some(a) => a,
            None => {
                let k = instance.num_arms() as f64;
                let hs1 = complexity::h_sigma1(
                    &complexity::compute_gaps(&instance),
                    &instance
                        .arms()
                        .iter()
                        .map(|a| a.std_dev())
                        .collect::<Vec<_>>(),
                )?;
                multiplier * (budget as f64 - 2.0 * k) / hs1
            }
        };
        Self::start(
            PolicyKind::Ucbev,
            IndexRule::Ucbev { a, width },
            instance,
            budget,
            2,
            rng,
        )
    }

    fn start(
        kind: PolicyKind,
        rule: IndexRule,
        instance: BanditInstance,
        budget: u64,
        sweeps: usize,
        rng: &mut RngStream,
    ) -> Result<Self> {
        let k = instance.num_arms();
        let mut tracker = Tracker::new(instance, budget);
        tracker.require_budget(kind, (sweeps * k) as u64)?;
        for _ in 0..sweeps {
            for arm in 0..k {
                tracker.warmup_pull(arm, rng)?;
            }
        }
        Ok(Self {
            kind,
            rule,
            tracker,
        })
    }

    pub fn rule(&self) -> IndexRule {
        self.rule
    }

    /// Exploration scale `a` for UCBE/UCBEV.
    pub fn exploration(&self) -> Option<f64> {
        match self.rule {
            IndexRule::Apt { .. } => None,
            IndexRule::Ucbe { a } | IndexRule::Ucbev { a, .. } => Some(a),
        }
    }

    pub fn select(&self) -> usize {
        argmin((0..self.tracker.num_arms()).map(|i| (i, self.rule.score(&self.tracker, i))))
            .expect("instances have at least one arm")
    }
}

impl Policy for IndexPolicy {
    fn kind(&self) -> PolicyKind {
        self.kind
    }

    fn tracker(&self) -> &Tracker {
        &self.tracker
    }

    fn step(&mut self, rng: &mut RngStream) -> Result<Step> {
        self.tracker.ensure_budget()?;
        let arm = self.select();
        let reward = self.tracker.pull(arm, rng)?;
        Ok(Step::Pulled { arm, reward })
    }
}
