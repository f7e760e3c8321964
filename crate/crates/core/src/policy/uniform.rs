use rand::Rng;

use crate::bandit::{BanditInstance, RngStream};
use crate::error::Result;

use super::{Policy, PolicyKind, Step, Tracker};

/// Uniform allocation: one initial pull per arm, then arms drawn uniformly
/// from all `K`.
#[derive(Debug, Clone)]
pub struct Uniform {
    tracker: Tracker,
}

impl Uniform {
    pub fn new(instance: BanditInstance, budget: u64, rng: &mut RngStream) -> Result<Self> {
        let k = instance.num_arms();
        let mut tracker = Tracker::new(instance, budget);
        tracker.require_budget(PolicyKind::Ua, k as u64)?;
        for arm in 0..k {
            tracker.warmup_pull(arm, rng)?;
        }
        Ok(Self { tracker })
    }

    pub fn select(&self, rng: &mut RngStream) -> usize {
        rng.random_range(0..self.tracker.num_arms())
    }
}

impl Policy for Uniform {
    fn kind(&self) -> PolicyKind {
        PolicyKind::Ua
    }

    fn tracker(&self) -> &Tracker {
        &self.tracker
    }

    fn step(&mut self, rng: &mut RngStream) -> Result<Step> {
        self.tracker.ensure_budget()?;
        let arm = self.select(rng);
        let reward = self.tracker.pull(arm, rng)?;
        Ok(Step::Pulled { arm, reward })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bandit::ArmSpec;
    use crate::error::Error;

    fn instance(k: usize) -> BanditInstance {
        BanditInstance::new(
            (0..k).map(|_| ArmSpec::constant(0.3).unwrap()).collect(),
            0.5,
        )
        .unwrap()
    }

    #[test]
    fn single_arm() {
        let mut rng = RngStream::new(0);
        let mut p = Uniform::new(instance(1), 50, &mut rng).unwrap();
        for _ in 0..49 {
            assert_eq!(
                p.step(&mut rng).unwrap(),
                Step::Pulled {
                    arm: 0,
                    reward: 0.3
                }
            );
        }
    }

    #[test]
    fn budget_equal_to_arms() {
        let mut rng = RngStream::new(0);
        let mut p = Uniform::new(instance(5), 5, &mut rng).unwrap();
        assert_eq!(p.tracker().pulls(), 5);
        assert!(p.tracker().stats().iter().all(|s| s.count() == 1));
        assert_eq!(p.step(&mut rng), Err(Error::BudgetExhausted(5)));
    }

    #[test]
    fn frequencies_are_uniform() {
        // Binomial sd at n = 1e5, p = 1/4 is ~0.0014 in frequency.
        let mut rng = RngStream::new(77);
        let p = Uniform::new(instance(4), 10, &mut rng).unwrap();
        let n = 100_000;
        let mut counts = [0usize; 4];
        for _ in 0..n {
            counts[p.select(&mut rng)] += 1;
        }
        for c in counts {
            assert!((c as f64 / n as f64 - 0.25).abs() < 0.01, "{counts:?}");
        }
    }

    #[test]
    fn reproducible() {
        let draw = |seed| {
            let mut rng = RngStream::new(seed);
            let p = Uniform::new(instance(7), 10, &mut rng).unwrap();
            (0..50).map(|_| p.select(&mut rng)).collect::<Vec<_>>()
        };
        assert_eq!(draw(3), draw(3));
        assert_ne!(draw(3), draw(4));
    }
}
