//! Problem instances and reward sampling.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Reward distribution of a single arm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Distribution {
    /// Unclipped normal distribution; rewards may fall outside `[0, 1]`.
    Gaussian {
        mean: f64,
        variance: f64,
    },
    Bernoulli {
        p: f64,
    },
    Constant {
        value: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArmSpec {
    distribution: Distribution,
}

impl ArmSpec {
    pub fn gaussian(mean: f64, variance: f64) -> Result<Self> {
        if !mean.is_finite() {
            return Err(Error::InvalidArm(format!(
                "gaussian mean {mean} is not finite"
            )));
        }
        if !(variance > 0.0 && variance.is_finite()) {
            return Err(Error::InvalidArm(format!(
                "gaussian variance must be positive, got {variance}"
            )));
        }
        Ok(Self {
            distribution: Distribution::Gaussian { mean, variance },
        })
    }

    pub fn bernoulli(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidArm(format!(
                "bernoulli mean {p} is outside [0, 1]"
            )));
        }
        Ok(Self {
            distribution: Distribution::Bernoulli { p },
        })
    }

    pub fn constant(value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::InvalidArm(format!("constant {value} is not finite")));
        }
        Ok(Self {
            distribution: Distribution::Constant { value },
        })
    }

    pub fn distribution(&self) -> Distribution {
        self.distribution
    }

    pub fn mean(&self) -> f64 {
        match self.distribution {
            Distribution::Gaussian { mean, .. } => mean,
            Distribution::Bernoulli { p } => p,
            Distribution::Constant { value } => value,
        }
    }

    pub fn variance(&self) -> f64 {
        match self.distribution {
            Distribution::Gaussian { variance, .. } => variance,
            Distribution::Bernoulli { p } => p * (1.0 - p),
            Distribution::Constant { .. } => 0.0,
        }
    }

    pub fn std_dev(&self) -> f64 {
        self.variance().sqrt()
    }

    /// Draws one reward.
    pub fn sample(&self, rng: &mut RngStream) -> f64 {
        match self.distribution {
            Distribution::Gaussian { mean, variance } => {
                let z: f64 = rng.sample(StandardNormal);
                mean + variance.sqrt() * z
            }
            Distribution::Bernoulli { p } => {
                if rng.random::<f64>() < p {
                    1.0
                } else {
                    0.0
                }
            }
            Distribution::Constant { value } => value,
        }
    }
}

/// Free-function form of [`ArmSpec::sample`].
pub fn sample_reward(arm: &ArmSpec, rng: &mut RngStream) -> f64 {
    arm.sample(rng)
}

/// A set of arms together with the classification threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct BanditInstance {
    arms: Vec<ArmSpec>,
    threshold: f64,
}

impl BanditInstance {
    pub fn new(arms: Vec<ArmSpec>, threshold: f64) -> Result<Self> {
        if arms.is_empty() {
            return Err(Error::InvalidInstance(
                "an instance needs at least one arm".into(),
            ));
        }
        if !(0.0..=1.0).contains(&threshold) {
            return Err(Error::InvalidInstance(format!(
                "threshold {threshold} is outside [0, 1]"
            )));
        }
        Ok(Self { arms, threshold })
    }

    pub fn arms(&self) -> &[ArmSpec] {
        &self.arms
    }

    pub fn arm(&self, i: usize) -> &ArmSpec {
        &self.arms[i]
    }

    pub fn num_arms(&self) -> usize {
        self.arms.len()
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn means(&self) -> Vec<f64> {
        self.arms.iter().map(ArmSpec::mean).collect()
    }

    pub fn variances(&self) -> Vec<f64> {
        self.arms.iter().map(ArmSpec::variance).collect()
    }

    /// Membership mask of `{ i : mean_i >= tau }`.
    pub fn positive_mask(&self) -> Vec<bool> {
        self.arms
            .iter()
            .map(|a| a.mean() >= self.threshold)
            .collect()
    }

    /// Indices of the arms whose mean is at least the threshold, ascending.
    pub fn true_positive_set(&self) -> Vec<usize> {
        self.arms
            .iter()
            .enumerate()
            .filter(|(_, a)| a.mean() >= self.threshold)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Seeded ChaCha8 stream. The output for a given seed is identical on every
/// platform.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RngStream {
    seed: u64,
    inner: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian_instance(means: &[f64], tau: f64) -> BanditInstance {
        let arms = means
            .iter()
            .map(|&m| ArmSpec::gaussian(m, 0.1).unwrap())
            .collect();
        BanditInstance::new(arms, tau).unwrap()
    }

    #[test]
    fn degenerate_distributions() {
        let mut rng = RngStream::new(3);
        assert_eq!(
            sample_reward(&ArmSpec::constant(0.4).unwrap(), &mut rng),
            0.4
        );
        let sure = ArmSpec::bernoulli(1.0).unwrap();
        for _ in 0..1000 {
            assert_eq!(sure.sample(&mut rng), 1.0);
        }
        let never = ArmSpec::bernoulli(0.0).unwrap();
        assert_eq!(never.sample(&mut rng), 0.0);
    }

    #[test]
    fn gaussian_moments() {
        // Standard error of the mean is sqrt(0.5 / 1e6) ~ 7e-4, so 0.003 is > 4 sigma.
        let arm = ArmSpec::gaussian(0.45, 0.5).unwrap();
        let mut rng = RngStream::new(2024);
        let n = 1_000_000;
        let draws: Vec<f64> = (0..n).map(|_| arm.sample(&mut rng)).collect();
        let mean = draws.iter().sum::<f64>() / n as f64;
        let var = draws.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n as f64;
        assert!((mean - 0.45).abs() < 0.003, "mean {mean}");
        assert!((var - 0.5).abs() < 0.01, "variance {var}");
    }

    #[test]
    fn bernoulli_variance() {
        let arm = ArmSpec::bernoulli(0.3).unwrap();
        assert!((arm.variance() - 0.21).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_arms() {
        assert!(ArmSpec::gaussian(0.5, 0.0).is_err());
        assert!(ArmSpec::gaussian(0.5, -1.0).is_err());
        assert!(ArmSpec::bernoulli(1.5).is_err());
        assert!(BanditInstance::new(vec![], 0.5).is_err());
        assert!(BanditInstance::new(vec![ArmSpec::constant(0.1).unwrap()], 1.5).is_err());
    }

    #[test]
    fn positive_set_examples() {
        assert_eq!(
            gaussian_instance(&[0.4, 0.6], 0.5).true_positive_set(),
            vec![1]
        );
        assert_eq!(gaussian_instance(&[0.5], 0.5).true_positive_set(), vec![0]);
        let mut means = vec![0.2, 0.25, 0.3, 0.35, 0.45, 0.55, 0.65, 0.7, 0.75, 0.8];
        means.extend(std::iter::repeat_n(0.4, 90));
        assert_eq!(
            gaussian_instance(&means, 0.5).true_positive_set(),
            (5..10).collect::<Vec<_>>()
        );
    }

    #[test]
    fn same_seed_same_stream() {
        let arm = ArmSpec::gaussian(0.0, 1.0).unwrap();
        let mut a = RngStream::new(99);
        let mut b = RngStream::new(99);
        let mut c = RngStream::new(100);
        let xs: Vec<f64> = (0..100).map(|_| arm.sample(&mut a)).collect();
        let ys: Vec<f64> = (0..100).map(|_| arm.sample(&mut b)).collect();
        let zs: Vec<f64> = (0..100).map(|_| arm.sample(&mut c)).collect();
        assert_eq!(xs, ys);
        assert_ne!(xs, zs);
    }
}
