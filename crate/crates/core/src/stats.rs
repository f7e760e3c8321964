/// Running count, mean and sum of squared deviations of one arm's rewards.
///
/// Updated with Welford's recurrence. The variance uses the population
/// divisor `n`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ArmStats {
    count: u64,
    mean: f64,
    m2: f64,
}

impl ArmStats {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_observations<I: IntoIterator<Item = f64>>(xs: I) -> Self {
        let mut stats = Self::new();
        for x in xs {
            stats.push(x);
        }
        stats
    }

    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
        // m2 is a sum of non-negative terms in exact arithmetic.
        if self.m2 < 0.0 {
            self.m2 = 0.0;
        }
    }

    /// Returns a copy with `x` appended.
    pub fn updated(mut self, x: f64) -> Self {
        self.push(x);
        self
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn mean(&self) -> Option<f64> {
        (self.count > 0).then_some(self.mean)
    }

    pub fn variance(&self) -> Option<f64> {
        (self.count > 0).then(|| self.m2 / self.count as f64)
    }

    /// Mean without the emptiness check. Zero for an unpulled arm.
    pub(crate) fn raw_mean(&self) -> f64 {
        self.mean
    }

    pub(crate) fn raw_variance(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            self.m2 / self.count as f64
        }
    }

    pub fn sum_squared_deviations(&self) -> f64 {
        self.m2
    }
}

/// Free-function form of [`ArmStats::updated`].
pub fn update_stats(stats: ArmStats, x: f64) -> ArmStats {
    stats.updated(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn two_pass(xs: &[f64]) -> (f64, f64) {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
        (mean, var)
    }

    fn rel_close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
    }

    #[test]
    fn empty_is_undefined() {
        let s = ArmStats::new();
        assert_eq!(s.mean(), None);
        assert_eq!(s.variance(), None);
    }

    #[test]
    fn single_observation() {
        let s = update_stats(ArmStats::new(), 0.7);
        assert_eq!(s.count(), 1);
        assert_eq!(s.mean(), Some(0.7));
        assert_eq!(s.variance(), Some(0.0));
    }

    #[test]
    fn two_point() {
        let s = ArmStats::from_observations([0.0, 1.0]);
        assert_eq!(s.count(), 2);
        assert_eq!(s.mean(), Some(0.5));
        assert_eq!(s.variance(), Some(0.25));
    }

    #[test]
    fn large_offset_is_stable() {
        // Naive sum-of-squares loses every digit here.
        let xs: Vec<f64> = (0..10_000).map(|i| 1e8 + (i % 2) as f64).collect();
        let s = ArmStats::from_observations(xs.iter().copied());
        assert!(rel_close(s.variance().unwrap(), 0.25, 1e-10));
    }

    proptest! {
        #[test]
        fn matches_batch(xs in prop::collection::vec(-10.0f64..10.0, 1..1000)) {
            let s = ArmStats::from_observations(xs.iter().copied());
            let (mean, var) = two_pass(&xs);
            prop_assert!(rel_close(s.mean().unwrap(), mean, 1e-10) || (s.mean().unwrap() - mean).abs() < 1e-12);
            prop_assert!(rel_close(s.variance().unwrap(), var, 1e-10) || (s.variance().unwrap() - var).abs() < 1e-12);
            prop_assert!(s.variance().unwrap() >= 0.0);
        }
    }
}
