//! Successive rejects adapted to thresholding: phases of equal allocation,
//! after each of which the active arm farthest from `tau` is deactivated and
//! its classification frozen.

use std::collections::VecDeque;

use crate::bandit::{BanditInstance, RngStream};
use crate::error::{Error, Result};

use super::{Policy, PolicyKind, Step, Tracker};

fn log_bar(k: usize) -> f64 {
    0.5 + (2..=k).map(|i| 1.0 / i as f64).sum::<f64>()
}

/// Cumulative per-arm quotas `n_1..n_{K-1}` with
/// `n_m = ceil((T - K) / (log_bar(K) * (K + 1 - m)))`.
pub fn csar_phase_lengths(budget: u64, num_arms: usize) -> Vec<u64> {
    let lb = log_bar(num_arms);
    let spare = budget.saturating_sub(num_arms as u64) as f64;
    (1..num_arms)
        .map(|m| (spare / (lb * (num_arms + 1 - m) as f64)).ceil() as u64)
        .collect()
}

/// Argmax of `|mean_hat - tau|` over `(arm, distance)` pairs, lowest index on
/// ties.
pub fn farthest_from_threshold<I>(candidates: I) -> Option<usize>
where
    I: IntoIterator<Item = (usize, f64)>,
{
    let mut best: Option<(usize, f64)> = None;
    for (i, d) in candidates {
        match best {
            Some((_, b)) if !(d > b) => {}
            _ => best = Some((i, d)),
        }
    }
    best.map(|(i, _)| i)
}

#[derive(Debug, Clone)]
pub struct Csar {
    tracker: Tracker,
    quotas: Vec<u64>,
    /// Index into `quotas` of the running phase.
    phase: usize,
    active: Vec<usize>,
    queue: VecDeque<usize>,
    decided: Vec<Option<bool>>,
    finished: bool,
}

impl Csar {
    pub fn new(instance: BanditInstance, budget: u64, _rng: &mut RngStream) -> Result<Self> {
        let k = instance.num_arms();
        if k < 2 {
            return Err(Error::InvalidInstance(
                "CSAR needs at least two arms".into(),
            ));
        }
        if budget <= k as u64 {
            return Err(Error::BudgetTooSmall {
                budget,
                required: k as u64 + 1,
            });
        }
        let quotas = csar_phase_lengths(budget, k);
        let mut csar = Self {
            tracker: Tracker::new(instance, budget),
            quotas,
            phase: 0,
            active: (0..k).collect(),
            queue: VecDeque::new(),
            decided: vec![None; k],
            finished: false,
        };
        csar.fill_queue();
        csar.advance();
        Ok(csar)
    }

    pub fn quotas(&self) -> &[u64] {
        &self.quotas
    }

    /// 1-based phase number `m`, or `K` once every phase has ended.
    pub fn phase(&self) -> usize {
        self.phase + 1
    }

    pub fn active(&self) -> &[usize] {
        &self.active
    }

    /// Frozen classifications of deactivated arms (`true` = above threshold).
    pub fn decided(&self) -> &[Option<bool>] {
        &self.decided
    }

    pub fn is_finished(&self) -> bool {
        self.finished
    }

    fn fill_queue(&mut self) {
        let previous = if self.phase == 0 {
            0
        } else {
            self.quotas[self.phase - 1]
        };
        let rounds = self.quotas[self.phase] - previous;
        for _ in 0..rounds {
            self.queue.extend(self.active.iter().copied());
        }
    }

    fn deactivate(&mut self) -> usize {
        let arm =
            farthest_from_threshold(self.active.iter().map(|&i| (i, self.tracker.distance(i))))
                .expect("an active arm remains in every phase");
        self.active.retain(|&i| i != arm);
        self.decided[arm] = Some(self.tracker.classification_mask()[arm]);
        arm
    }

    /// Closes every finished phase (zero-length phases close immediately).
    fn advance(&mut self) {
        while self.queue.is_empty() && !self.finished {
            self.deactivate();
            self.phase += 1;
            if self.phase == self.quotas.len() {
                let last = self.active[0];
                self.decided[last] = Some(self.tracker.classification_mask()[last]);
                self.finished = true;
            } else {
                self.fill_queue();
            }
        }
    }
}

impl Policy for Csar {
    fn kind(&self) -> PolicyKind {
        PolicyKind::Csar
    }

    fn tracker(&self) -> &Tracker {
        &self.tracker
    }

    fn step(&mut self, rng: &mut RngStream) -> Result<Step> {
        if self.finished {
            return Ok(Step::Halted);
        }
        self.tracker.ensure_budget()?;
        let arm = self
            .queue
            .pop_front()
            .expect("queue refilled after each phase");
        let reward = self.tracker.pull(arm, rng)?;
        self.advance();
        Ok(Step::Pulled { arm, reward })
    }

    fn is_halted(&self) -> bool {
        self.finished
    }
}
