//! Numeric evaluation of the theoretical guarantees: the AugUCB expected-loss
//! bound, the comparison bounds for UCBEV, APT and CSAR, and the AugUCB
//! regret bound.
//!
//! Every value is returned raw. Probability bounds above 1 are marked
//! vacuous instead of being clamped.

use serde::{Deserialize, Serialize};

use crate::complexity::ComplexityReport;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundValue {
    pub value: f64,
    pub vacuous: bool,
}

impl BoundValue {
    fn probability(value: f64) -> Self {
        Self {
            value,
            vacuous: !(value <= 1.0),
        }
    }
}

/// Smallest `b` accepted by the regret bound, `sqrt(e / T)`.
pub fn min_regret_b(budget: u64) -> f64 {
    (std::f64::consts::E / budget as f64).sqrt()
}

fn satisfies_round(m: u32, gap: f64, rho: f64) -> bool {
    (rho * 0.5f64.powi(m as i32)).sqrt() < gap / 2.0
}

/// `m_i = min { m : sqrt(rho * 2^-m) < gap / 2 }`.
pub fn target_round(gap: f64, rho: f64) -> u32 {
    assert!(
        gap > 0.0 && rho > 0.0,
        "target_round needs positive gap and rho"
    );
    let ratio = 4.0 * rho / (gap * gap);
    let mut m = if ratio < 1.0 {
        0
    } else {
        (ratio.log2().floor() as i64 + 1).clamp(0, 2000) as u32
    };
    // The closed form can be off by one at exact powers of two.
    while m > 0 && satisfies_round(m - 1, gap, rho) {
        m -= 1;
    }
    while !satisfies_round(m, gap, rho) {
        m += 1;
    }
    m
}

/// `psi_m = T 2^-m / (128 ln(3/16 K ln K)^2)`.
pub fn round_psi(round: u32, budget: u64, num_arms: usize) -> f64 {
    let k = num_arms as f64;
    let log_term = (3.0 / 16.0 * k * k.ln()).ln();
    budget as f64 * 0.5f64.powi(round as i32) / (128.0 * log_term * log_term)
}

/// Per-arm target rounds with their `eps` and `psi`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundIndexTable {
    pub rounds: Vec<Option<u32>>,
    pub eps: Vec<Option<f64>>,
    pub psi: Vec<Option<f64>>,
    /// `M` of the schedule for this `T`.
    pub max_round: i64,
    /// Whether every defined `m_i` is at most `M`.
    pub within_schedule: bool,
}

impl RoundIndexTable {
    /// Zero gaps have no target round and map to `None`.
    pub fn new(gaps: &[f64], rho: f64, budget: u64) -> Self {
        let k = gaps.len();
        let rounds: Vec<Option<u32>> = gaps
            .iter()
            .map(|&g| (g > 0.0).then(|| target_round(g, rho)))
            .collect();
        let max_round = (0.5 * (budget as f64 / std::f64::consts::E).log2()).floor() as i64;
        Self {
            eps: rounds
                .iter()
                .map(|r| r.map(|m| 0.5f64.powi(m as i32)))
                .collect(),
            psi: rounds
                .iter()
                .map(|r| r.map(|m| round_psi(m, budget, k)))
                .collect(),
            within_schedule: rounds.iter().flatten().all(|&m| i64::from(m) <= max_round),
            rounds,
            max_round,
        }
    }
}

/// `2 K T exp(-T / (4096 ln(K ln K) H_sigma,2))`.
pub fn augucb_loss_bound(budget: u64, num_arms: usize, h_sigma2: f64) -> BoundValue {
    let (t, k) = (budget as f64, num_arms as f64);
    let value = 2.0 * k * t * (-t / (4096.0 * (k * k.ln()).ln() * h_sigma2)).exp();
    BoundValue::probability(value)
}

pub fn ucbev_loss_bound(budget: u64, num_arms: usize, h_sigma1: f64) -> BoundValue {
    let (t, k) = (budget as f64, num_arms as f64);
    BoundValue::probability((-(t - 2.0 * k) / (512.0 * h_sigma1) + (6.0 * k * t).ln()).exp())
}

pub fn apt_loss_bound(budget: u64, num_arms: usize, h1: f64) -> BoundValue {
    let (t, k) = (budget as f64, num_arms as f64);
    BoundValue::probability((-t / (64.0 * h1) + 2.0 * ((t.ln() + 1.0) * k).ln()).exp())
}

pub fn csar_loss_bound(budget: u64, num_arms: usize, h_csar2: f64) -> BoundValue {
    let (t, k) = (budget as f64, num_arms as f64);
    BoundValue::probability((-(t - k) / (72.0 * k.ln() * h_csar2) + 2.0 * k.ln()).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Table1Bounds {
    pub ucbev: BoundValue,
    pub apt: BoundValue,
    pub csar: BoundValue,
}

pub fn table1_bounds(budget: u64, num_arms: usize, report: &ComplexityReport) -> Table1Bounds {
    Table1Bounds {
        ucbev: ucbev_loss_bound(budget, num_arms, report.h_sigma1),
        apt: apt_loss_bound(budget, num_arms, report.h1),
        csar: csar_loss_bound(budget, num_arms, report.h_csar2),
    }
}

/// `4 T^(1 - psi) 2^(psi - 1/2) / x^(psi - 1/2)`, rearranged as
/// `4 sqrt(T) (2 / (T x))^(psi - 1/2)` to stay finite for large `psi`.
fn tail_term(t: f64, x: f64, psi: f64) -> f64 {
    4.0 * t.sqrt() * (2.0 / (t * x)).powf(psi - 0.5)
}

/// Cumulative regret bound of AugUCB for a given split point `b`.
///
/// Arms with `gap > b` contribute
/// `T gap / (3/2 T gap^2)^psi + (gap + 22 psi ln(3/2 T gap^2)) * tail(gap)`,
/// arms with `0 < gap <= b` contribute `tail(b)`, and the largest gap not
/// exceeding `b` adds `gap * T` (zero when no such arm exists). `psi` is
/// `psi_{m_i}` with `K = gaps.len()`.
pub fn augucb_regret_bound(budget: u64, gaps: &[f64], rho: f64, b: f64) -> Result<f64> {
    let min_b = min_regret_b(budget);
    if !(b >= min_b) {
        return Err(Error::DomainError { b, min: min_b });
    }
    let t = budget as f64;
    let k = gaps.len();
    let mut total = 0.0;
    let mut near_max: f64 = 0.0;
    for &gap in gaps {
        if gap <= b {
            near_max = near_max.max(gap);
        }
        if !(gap > 0.0) {
            continue;
        }
        let psi = round_psi(target_round(gap, rho), budget, k);
        if gap > b {
            let log_arg = 1.5 * t * gap * gap;
            total += t * gap / log_arg.powf(psi)
                + (gap + 22.0 * psi * log_arg.ln()) * tail_term(t, gap, psi);
        } else {
            total += tail_term(t, b, psi);
        }
    }
    Ok(total + near_max * t)
}

/// Inputs to [`TheoreticalBounds::evaluate`].
#[derive(Debug, Clone, PartialEq)]
pub struct BoundInputs {
    pub budget: u64,
    pub num_arms: usize,
    pub complexity: ComplexityReport,
    /// Split point of the regret bound; defaults to `sqrt(e / T)`.
    pub b: Option<f64>,
    pub rho: f64,
}

impl BoundInputs {
    pub fn new(budget: u64, complexity: ComplexityReport) -> Self {
        Self {
            budget,
            num_arms: complexity.gaps.len(),
            complexity,
            b: None,
            rho: 1.0 / 3.0,
        }
    }

    pub fn b(&self) -> f64 {
        self.b.unwrap_or_else(|| min_regret_b(self.budget))
    }

    /// Conditions under which the expected-loss guarantee was derived.
    pub fn applicability_warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        if self.num_arms < 4 {
            w.push(format!(
                "K = {} < 4: the AugUCB loss bound assumes K >= 4",
                self.num_arms
            ));
        }
        if (self.rho - 1.0 / 3.0).abs() > 1e-12 {
            w.push(format!(
                "rho = {}: the AugUCB loss bound assumes rho = 1/3",
                self.rho
            ));
        }
        if self.complexity.infinite {
            w.push("an arm sits on the threshold; complexity-based bounds are trivial".into());
        }
        w
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegretValue {
    pub value: f64,
    pub b: f64,
    /// Set when the bound exceeds the trivial `T * max_i gap_i`.
    pub vacuous: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoreticalBounds {
    pub augucb_loss: BoundValue,
    pub ucbev: BoundValue,
    pub apt: BoundValue,
    pub csar: BoundValue,
    pub augucb_regret: RegretValue,
    pub warnings: Vec<String>,
}

impl TheoreticalBounds {
    pub fn evaluate(inputs: &BoundInputs) -> Result<Self> {
        let (t, k, c) = (inputs.budget, inputs.num_arms, &inputs.complexity);
        let table = table1_bounds(t, k, c);
        let b = inputs.b();
        let regret = augucb_regret_bound(t, &c.gaps, inputs.rho, b)?;
        let trivial = t as f64 * c.gaps.iter().copied().fold(0.0, f64::max);
        Ok(Self {
            augucb_loss: augucb_loss_bound(t, k, c.h_sigma2),
            ucbev: table.ucbev,
            apt: table.apt,
            csar: table.csar,
            augucb_regret: RegretValue {
                value: regret,
                b,
                vacuous: !(regret <= trivial),
            },
            warnings: inputs.applicability_warnings(),
        })
    }
}
