//! Gap-based hardness measures of a thresholding instance.
//!
//! With `gap_i = |tau - mean_i|` and `(i)` denoting increasing order:
//!
//! ```text
//! H1          = sum_i 1 / gap_i^2
//! H2          = max_i i / gap_(i)^2
//! H_CSAR,2    = max_i i / gap_(i)^2
//! H_sigma,1   = sum_i (sigma_i + sqrt(sigma_i^2 + 16/3 gap_i)) / gap_i^2
//! gap~_i^2    = gap_i^2 / (sigma_i + sqrt(sigma_i^2 + 16/3 gap_i))
//! H_sigma,2   = max_i i / gap~_(i)^2
//! ```
//!
//! `sigma_i` is the standard deviation of arm `i`. A zero gap makes every
//! measure infinite.

use serde::{Deserialize, Serialize};

use crate::bandit::BanditInstance;
use crate::error::{Error, Result};

pub fn compute_gaps(instance: &BanditInstance) -> Vec<f64> {
    let tau = instance.threshold();
    instance
        .arms()
        .iter()
        .map(|a| (tau - a.mean()).abs())
        .collect()
}

fn check_gaps(gaps: &[f64]) -> Result<()> {
    match gaps.iter().position(|&g| !(g > 0.0)) {
        Some(i) => Err(Error::InfiniteComplexity(i)),
        None => Ok(()),
    }
}

fn variance_factor(gap: f64, sigma: f64) -> f64 {
    sigma + (sigma * sigma + 16.0 / 3.0 * gap).sqrt()
}

/// `max_i i / x_(i)` over the increasing ordering of `x` (1-based `i`).
fn max_rank_ratio(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    xs.iter()
        .enumerate()
        .map(|(i, x)| (i + 1) as f64 / x)
        .fold(0.0, f64::max)
}

pub fn h1(gaps: &[f64]) -> Result<f64> {
    check_gaps(gaps)?;
    Ok(gaps.iter().map(|g| 1.0 / (g * g)).sum())
}

pub fn h2(gaps: &[f64]) -> Result<f64> {
    check_gaps(gaps)?;
    Ok(max_rank_ratio(gaps.iter().map(|g| g * g).collect()))
}

pub fn h_csar2(gaps: &[f64]) -> Result<f64> {
    check_gaps(gaps)?;
    Ok(max_rank_ratio(gaps.iter().map(|g| g * g).collect()))
}

/// Variance-adjusted gaps `gap~_i` (not squared).
pub fn delta_tilde(gaps: &[f64], sigmas: &[f64]) -> Vec<f64> {
    assert_eq!(gaps.len(), sigmas.len(), "one sigma per gap");
    gaps.iter()
        .zip(sigmas)
        .map(|(&g, &s)| (g * g / variance_factor(g, s)).sqrt())
        .collect()
}

pub fn h_sigma1(gaps: &[f64], sigmas: &[f64]) -> Result<f64> {
    assert_eq!(gaps.len(), sigmas.len(), "one sigma per gap");
    check_gaps(gaps)?;
    Ok(gaps
        .iter()
        .zip(sigmas)
        .map(|(&g, &s)| variance_factor(g, s) / (g * g))
        .sum())
}

pub fn h_sigma2(gaps: &[f64], sigmas: &[f64]) -> Result<f64> {
    assert_eq!(gaps.len(), sigmas.len(), "one sigma per gap");
    check_gaps(gaps)?;
    let squared = gaps
        .iter()
        .zip(sigmas)
        .map(|(&g, &s)| g * g / variance_factor(g, s))
        .collect();
    Ok(max_rank_ratio(squared))
}

/// All measures for one instance. Measures are `+inf` when some gap is zero
/// and `infinite` is set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexityReport {
    pub gaps: Vec<f64>,
    pub gaps_tilde: Vec<f64>,
    pub h1: f64,
    pub h2: f64,
    pub h_csar2: f64,
    pub h_sigma1: f64,
    pub h_sigma2: f64,
    pub infinite: bool,
}

impl ComplexityReport {
    pub fn from_instance(instance: &BanditInstance) -> Self {
        let sigmas: Vec<f64> = instance.arms().iter().map(|a| a.std_dev()).collect();
        Self::from_parts(compute_gaps(instance), &sigmas)
    }

    pub fn from_parts(gaps: Vec<f64>, sigmas: &[f64]) -> Self {
        let or_inf = |r: Result<f64>| r.unwrap_or(f64::INFINITY);
        Self {
            gaps_tilde: delta_tilde(&gaps, sigmas),
            h1: or_inf(h1(&gaps)),
            h2: or_inf(h2(&gaps)),
            h_csar2: or_inf(h_csar2(&gaps)),
            h_sigma1: or_inf(h_sigma1(&gaps, sigmas)),
            h_sigma2: or_inf(h_sigma2(&gaps, sigmas)),
            infinite: check_gaps(&gaps).is_err(),
            gaps,
        }
    }
}
