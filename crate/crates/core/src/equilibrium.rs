//! Closed-form equilibrium of the Lucas tree under Epstein-Zin preferences.
//!
//! With i.i.d. lognormal dividend growth the price-dividend ratio `c` is
//! constant and satisfies
//!
//! ```text
//! c / (1 + c) = exp(A),   A = -delta + (1 - 1/psi) mu + 1/2 (1 - 1/psi)(1 - gamma) sigma^2
//! ```
//!
//! Every rate quantity is kept in log (continuously compounded) form.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Economy, Endowment, Preferences};

/// Relative tolerance for the internal identity checks.
pub const IDENTITY_TOL: f64 = 1e-10;

pub(crate) fn existence_margin(prefs: &Preferences, endow: &Endowment) -> f64 {
    let s = prefs.substitution_factor();
    -prefs.delta + s * endow.mu + 0.5 * s * (1.0 - prefs.gamma) * endow.variance()
}

/// `c = e^A / (1 - e^A) = 1 / (e^{-A} - 1)`.
pub(crate) fn pd_from_log_factor(a: f64) -> Result<f64> {
    if a.is_nan() || a >= 0.0 {
        return Err(Error::NoEquilibrium { a_factor: a });
    }
    Ok(1.0 / (-a).exp_m1())
}

/// Log pricing factor `A = ln[c / (1 + c)]`.
pub fn log_pd_factor(econ: &Economy) -> f64 {
    existence_margin(econ.preferences(), econ.endowment())
}

/// Price per unit of current dividend.
pub fn pd_ratio(econ: &Economy) -> f64 {
    pd_from_log_factor(econ.a_factor()).expect("validated economy has A < 0")
}

/// `p_t = c q_t`.
pub fn equity_price(econ: &Economy, dividend: f64) -> Result<f64> {
    check_dividend(dividend)?;
    Ok(pd_ratio(econ) * dividend)
}

/// Price from the expected-return form
/// `p_t = e^B / (1 - e^B) q_t` with `B = mu + sigma^2/2 - ln E(R)`.
///
/// `B` is assembled from the risk-free rate and the premium, not from `A`.
pub fn equity_price_from_expected_return(econ: &Economy, dividend: f64) -> Result<f64> {
    check_dividend(dividend)?;
    let b = econ.mu() + 0.5 * econ.endowment().variance() - expected_return_log(econ);
    Ok(pd_from_log_factor(b)? * dividend)
}

fn check_dividend(q: f64) -> Result<()> {
    if !(q.is_finite() && q > 0.0) {
        return Err(Error::NonPositiveDividend { q });
    }
    Ok(())
}

/// `ln R_F = delta + (mu + sigma^2/2)/psi - 1/2 gamma (1 + 1/psi) sigma^2`.
pub fn risk_free_log(econ: &Economy) -> f64 {
    let inv_psi = 1.0 / econ.psi();
    let var = econ.endowment().variance();
    econ.delta() + inv_psi * (econ.mu() + 0.5 * var) - 0.5 * econ.gamma() * (1.0 + inv_psi) * var
}

/// `ln E(R) - ln R_F = gamma sigma^2`.
pub fn equity_premium(econ: &Economy) -> f64 {
    econ.gamma() * econ.endowment().variance()
}

/// `E ln R = delta + mu/psi - 1/2 (1 - 1/psi)(1 - gamma) sigma^2`.
pub fn expected_log_return(econ: &Economy) -> f64 {
    let p = econ.preferences();
    econ.delta() + econ.mu() / p.psi
        - 0.5 * p.substitution_factor() * (1.0 - p.gamma) * econ.endowment().variance()
}

/// `ln E R = ln R_F + gamma sigma^2`.
///
/// Equal to `E ln R + sigma^2/2` by the lognormal mean identity; the identity
/// is checked in tests rather than used here.
pub fn expected_return_log(econ: &Economy) -> f64 {
    risk_free_log(econ) + equity_premium(econ)
}

/// All closed-form equilibrium quantities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumSolution {
    pub a_factor: f64,
    pub pd_ratio: f64,
    pub ln_rf: f64,
    pub premium: f64,
    pub e_ln_r: f64,
    pub ln_e_r: f64,
}

impl EquilibriumSolution {
    /// Net risk-free rate `R_F - 1`.
    pub fn net_risk_free(&self) -> f64 {
        self.ln_rf.exp_m1()
    }

    /// Net expected equity return `E(R) - 1`.
    pub fn net_expected_return(&self) -> f64 {
        self.ln_e_r.exp_m1()
    }
}

pub fn solve(econ: &Economy) -> EquilibriumSolution {
    EquilibriumSolution {
        a_factor: econ.a_factor(),
        pd_ratio: pd_ratio(econ),
        ln_rf: risk_free_log(econ),
        premium: equity_premium(econ),
        e_ln_r: expected_log_return(econ),
        ln_e_r: expected_return_log(econ),
    }
}

/// Largest relative violation among the solution's internal identities.
///
/// Each identity `lhs = rhs` contributes `|lhs - rhs| / max(|lhs|, |rhs|, scale)`
/// where `scale` is the size of the largest term entering it.
pub fn identity_violation(econ: &Economy, sol: &EquilibriumSolution) -> f64 {
    let mu = econ.mu();
    let var = econ.endowment().variance();
    let rel = |lhs: f64, rhs: f64, scale: f64| {
        let denom = lhs.abs().max(rhs.abs()).max(scale);
        if denom == 0.0 {
            0.0
        } else {
            (lhs - rhs).abs() / denom
        }
    };
    let e_a = sol.a_factor.exp();
    [
        rel(
            sol.a_factor + sol.ln_e_r,
            mu + 0.5 * var,
            sol.a_factor.abs().max(sol.ln_e_r.abs()),
        ),
        rel(sol.ln_e_r - sol.ln_rf, sol.premium, sol.ln_e_r.abs().max(sol.ln_rf.abs())),
        rel(sol.e_ln_r, -sol.a_factor + mu, sol.a_factor.abs().max(mu.abs())),
        rel(sol.ln_e_r, sol.e_ln_r + 0.5 * var, sol.e_ln_r.abs()),
        rel(sol.pd_ratio / (1.0 + sol.pd_ratio), e_a, 0.0),
    ]
    .into_iter()
    .fold(0.0, f64::max)
}
