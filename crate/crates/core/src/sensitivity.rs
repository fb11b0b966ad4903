//! Comparative statics with respect to risk aversion.
//!
//! Raising `gamma` lowers the risk-free rate and raises the premium; the net
//! effect on the log expected return is `(sigma^2 / 2)(1 - 1/psi)`. The
//! price-dividend ratio moves the other way, so prices fall with risk
//! aversion exactly when `psi > 1`.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::equilibrium::{equity_premium, expected_return_log, pd_ratio, risk_free_log};
use crate::error::{Error, Result};
use crate::model::Economy;

/// Dead band on `dc/dgamma` for [`panic_regime`].
pub const REGIME_TOL: f64 = 1e-15;

/// Steps below this make central differences dominated by cancellation.
pub const CANCELLATION_STEP: f64 = 1e-8;

/// Direction of the price response to a rise in risk aversion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PanicRegime {
    PriceFallsInPanic,
    PriceRisesInPanic,
    PriceInsensitive,
}

impl PanicRegime {
    pub fn as_str(&self) -> &'static str {
        match self {
            PanicRegime::PriceFallsInPanic => "PriceFallsInPanic",
            PanicRegime::PriceRisesInPanic => "PriceRisesInPanic",
            PanicRegime::PriceInsensitive => "PriceInsensitive",
        }
    }
}

impl fmt::Display for PanicRegime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PanicRegime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "PriceFallsInPanic" => Ok(PanicRegime::PriceFallsInPanic),
            "PriceRisesInPanic" => Ok(PanicRegime::PriceRisesInPanic),
            "PriceInsensitive" => Ok(PanicRegime::PriceInsensitive),
            other => Err(Error::IoFailure(format!("unknown regime label `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SensitivityReport {
    pub d_ln_rf_d_gamma: f64,
    pub d_premium_d_gamma: f64,
    pub d_ln_er_d_gamma: f64,
    pub d_pd_d_gamma: f64,
    pub regime: PanicRegime,
}

/// `d ln E(R) / d gamma = (sigma^2 / 2)(1 - 1/psi)`.
pub fn d_ln_er_d_gamma(econ: &Economy) -> f64 {
    0.5 * econ.endowment().variance() * econ.preferences().substitution_factor()
}

/// Partials of `ln R_F` and of the premium in `gamma`: `(-(1 + 1/psi) sigma^2 / 2, sigma^2)`.
pub fn decompose(econ: &Economy) -> (f64, f64) {
    let var = econ.endowment().variance();
    (-0.5 * (1.0 + 1.0 / econ.psi()) * var, var)
}

/// `dc/dgamma = e^A / (1 - e^A)^2 * dA/dgamma`, with `dA/dgamma = -(1 - 1/psi) sigma^2 / 2`.
pub fn d_pd_d_gamma(econ: &Economy) -> f64 {
    let a = econ.a_factor();
    let da = -0.5 * econ.preferences().substitution_factor() * econ.endowment().variance();
    let one_minus = -a.exp_m1();
    // `+ 0.0` turns the -0 produced at unit EIS into +0
    a.exp() / (one_minus * one_minus) * da + 0.0
}

/// `dc/dgamma` through `c = e^B / (1 - e^B)`, `B = mu + sigma^2/2 - ln E(R)`,
/// so `dB/dgamma = -d ln E(R)/dgamma`.
pub fn d_pd_d_gamma_via_expected_return(econ: &Economy) -> f64 {
    let b = econ.mu() + 0.5 * econ.endowment().variance() - expected_return_log(econ);
    let e_b = b.exp();
    let one_minus = -b.exp_m1();
    e_b / (one_minus * one_minus) * -d_ln_er_d_gamma(econ)
}

pub fn panic_regime(econ: &Economy) -> PanicRegime {
    regime_from_derivative(d_pd_d_gamma(econ))
}

pub(crate) fn regime_from_derivative(d: f64) -> PanicRegime {
    if d < -REGIME_TOL {
        PanicRegime::PriceFallsInPanic
    } else if d > REGIME_TOL {
        PanicRegime::PriceRisesInPanic
    } else {
        PanicRegime::PriceInsensitive
    }
}

pub fn report(econ: &Economy) -> SensitivityReport {
    let (d_ln_rf_d_gamma, d_premium_d_gamma) = decompose(econ);
    let d_pd = d_pd_d_gamma(econ);
    SensitivityReport {
        d_ln_rf_d_gamma,
        d_premium_d_gamma,
        d_ln_er_d_gamma: d_ln_er_d_gamma(econ),
        d_pd_d_gamma: d_pd,
        regime: regime_from_derivative(d_pd),
    }
}

/// Analytic derivative against a central difference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivativeCheck {
    pub analytic: f64,
    pub numeric: f64,
    /// `|analytic - numeric| / |analytic|`, or `|numeric|` when the analytic value is zero.
    pub rel_error: f64,
}

impl DerivativeCheck {
    fn new(analytic: f64, numeric: f64) -> Self {
        let rel_error = if analytic == 0.0 {
            numeric.abs()
        } else {
            (analytic - numeric).abs() / analytic.abs()
        };
        DerivativeCheck {
            analytic,
            numeric,
            rel_error,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FiniteDifferenceReport {
    pub h: f64,
    pub ln_e_r: DerivativeCheck,
    pub ln_rf: DerivativeCheck,
    pub premium: DerivativeCheck,
    pub pd_ratio: DerivativeCheck,
    /// Set when `h` is small enough that rounding swamps the difference quotient.
    pub cancellation_warning: bool,
}

impl FiniteDifferenceReport {
    pub fn max_rel_error(&self) -> f64 {
        [self.ln_e_r, self.ln_rf, self.premium, self.pd_ratio]
            .iter()
            .map(|c| c.rel_error)
            .fold(0.0, f64::max)
    }
}

/// Central differences in `gamma` at step `h` for `ln E R`, `ln R_F`, the premium and `c`.
pub fn finite_difference_check(econ: &Economy, h: f64) -> Result<FiniteDifferenceReport> {
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::NonPositiveStep { h });
    }
    let lower = econ.gamma() - h;
    if lower < 0.0 {
        return Err(Error::StepTooLarge { lower });
    }
    let up = econ.with_gamma(econ.gamma() + h)?;
    let down = econ.with_gamma(lower)?;
    let central = |f: fn(&Economy) -> f64| (f(&up) - f(&down)) / (2.0 * h);

    let (d_rf, d_prem) = decompose(econ);
    Ok(FiniteDifferenceReport {
        h,
        // ln E R through the lognormal mean identity E ln R + sigma^2/2
        ln_e_r: DerivativeCheck::new(
            d_ln_er_d_gamma(econ),
            central(|e| crate::equilibrium::expected_log_return(e) + 0.5 * e.endowment().variance()),
        ),
        ln_rf: DerivativeCheck::new(d_rf, central(risk_free_log)),
        premium: DerivativeCheck::new(d_prem, central(equity_premium)),
        pd_ratio: DerivativeCheck::new(d_pd_d_gamma(econ), central(pd_ratio)),
        cancellation_warning: h < CANCELLATION_STEP,
    })
}
