//! Equilibrium paths of the tree economy and the risk-aversion shock experiment.

use serde::{Deserialize, Serialize};

use crate::equilibrium::{expected_log_return, pd_ratio};
use crate::error::{Error, Result};
use crate::euler::draw_growth;
use crate::model::Economy;
use crate::sensitivity::{panic_regime, PanicRegime};
use crate::stats::SampleMoments;

/// A simulated equilibrium path of `periods` transitions.
///
/// Dividends are stored in logs: at realistic growth rates a path of `10^6`
/// periods leaves the range of `f64` in levels.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Path {
    pub econ: Economy,
    pub seed: u64,
    pub pd_ratio: f64,
    /// `ln q_t`, `t = 0..=periods`.
    pub log_dividends: Vec<f64>,
    /// `y_{t+1} = q_{t+1} / q_t`, `t = 0..periods`.
    pub growth: Vec<f64>,
    /// `R_{t+1} = (p_{t+1} + q_{t+1}) / p_t`, `t = 0..periods`.
    pub gross_returns: Vec<f64>,
}

impl Path {
    pub fn periods(&self) -> usize {
        self.growth.len()
    }

    pub fn dividend(&self, t: usize) -> f64 {
        self.log_dividends[t].exp()
    }

    pub fn price(&self, t: usize) -> f64 {
        self.pd_ratio * self.dividend(t)
    }

    pub fn dividends(&self) -> Vec<f64> {
        self.log_dividends.iter().map(|l| l.exp()).collect()
    }

    pub fn prices(&self) -> Vec<f64> {
        self.log_dividends.iter().map(|l| self.pd_ratio * l.exp()).collect()
    }

    pub fn log_returns(&self) -> Vec<f64> {
        self.gross_returns.iter().map(|r| r.ln()).collect()
    }
}

pub fn simulate_path(econ: &Economy, periods: usize, q0: f64, seed: u64) -> Result<Path> {
    if !(q0.is_finite() && q0 > 0.0) {
        return Err(Error::NonPositiveDividend { q: q0 });
    }
    let c = pd_ratio(econ);
    let growth = draw_growth(econ.endowment(), periods, seed)?;

    let mut log_dividends = Vec::with_capacity(periods + 1);
    let mut ln_q = q0.ln();
    log_dividends.push(ln_q);
    for y in &growth {
        ln_q += y.ln();
        log_dividends.push(ln_q);
    }

    // (p_{t+1} + q_{t+1}) / p_t = p_{t+1}/p_t + q_{t+1}/p_t = y + y / c
    let gross_returns = growth.iter().map(|&y| y + y / c).collect();

    Ok(Path {
        econ: *econ,
        seed,
        pd_ratio: c,
        log_dividends,
        growth,
        gross_returns,
    })
}

/// Sample moments of log returns and log growth along a path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathMoments {
    pub ln_r: SampleMoments,
    pub ln_y: SampleMoments,
}

pub fn estimate_moments(path: &Path) -> Result<PathMoments> {
    if path.periods() < 2 {
        return Err(Error::PathTooShort { len: path.periods() });
    }
    let ln_y: Vec<f64> = path.growth.iter().map(|y| y.ln()).collect();
    Ok(PathMoments {
        ln_r: SampleMoments::from_slice(&path.log_returns()),
        ln_y: SampleMoments::from_slice(&ln_y),
    })
}

/// Sample moment against its closed-form value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentCheck {
    pub name: String,
    pub sample: f64,
    pub expected: f64,
    pub std_error: f64,
    pub pass: bool,
}

impl MomentCheck {
    fn new(name: &str, sample: f64, expected: f64, std_error: f64) -> Self {
        let pass = (sample - expected).abs()
            <= crate::euler::SE_MULTIPLE * std_error + crate::euler::ROUNDING_FLOOR;
        MomentCheck {
            name: name.to_string(),
            sample,
            expected,
            std_error,
            pass,
        }
    }
}

/// Compares path moments with `E ln R`, `sigma^2`, `mu` using 3-SE bands.
pub fn moment_checks(path: &Path, moments: &PathMoments) -> Vec<MomentCheck> {
    let econ = &path.econ;
    let var = econ.endowment().variance();
    vec![
        MomentCheck::new("mean_ln_r", moments.ln_r.mean, expected_log_return(econ), moments.ln_r.mean_se),
        MomentCheck::new("var_ln_r", moments.ln_r.variance, var, moments.ln_r.variance_se),
        MomentCheck::new("mean_ln_y", moments.ln_y.mean, econ.mu(), moments.ln_y.mean_se),
        MomentCheck::new("var_ln_y", moments.ln_y.variance, var, moments.ln_y.variance_se),
    ]
}

/// Repricing of the tree after a permanent, unanticipated change in risk aversion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScenarioResult {
    pub gamma_from: f64,
    pub gamma_to: f64,
    pub c_before: f64,
    pub c_after: f64,
    /// `c_after / c_before - 1` as a fraction; prices at a fixed dividend move by the same ratio.
    pub price_change: f64,
    pub regime: PanicRegime,
}

pub fn panic_episode(econ: &Economy, gamma_from: f64, gamma_to: f64) -> Result<ScenarioResult> {
    let before = econ.with_gamma(gamma_from)?;
    let after = econ.with_gamma(gamma_to)?;
    let c_before = pd_ratio(&before);
    let c_after = pd_ratio(&after);
    Ok(ScenarioResult {
        gamma_from,
        gamma_to,
        c_before,
        c_after,
        price_change: c_after / c_before - 1.0,
        regime: panic_regime(&before),
    })
}
