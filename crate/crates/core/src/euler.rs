//! Monte Carlo check of the equilibrium Euler equations.
//!
//! With consumption equal to dividends and the market portfolio equal to the
//! tree, the SDF realisation for a growth draw `y` is
//!
//! ```text
//! m = [beta y^(-1/psi)]^theta * r^(theta - 1),   r = ((1 + c) / c) y
//! ```
//!
//! and the closed-form solution must satisfy `E[m r] = 1` and `E[m] R_F = 1`.
//! Everything is evaluated in log space: `|theta|` reaches 27 at the default
//! calibration.

use serde::{Deserialize, Serialize};

use crate::equilibrium::{pd_ratio, risk_free_log};
use crate::error::{Error, Result};
use crate::exec::{map_indexed, Execution};
use crate::model::{theta, Economy, Endowment};
use crate::rng;
use crate::stats::Welford;

pub const DEFAULT_DRAWS: usize = 1_000_000;

/// Residuals must lie within this many standard errors of zero.
pub const SE_MULTIPLE: f64 = 3.0;

/// Residuals must also be smaller than this in absolute value.
pub const ABS_CAP: f64 = 1e-3;

/// Slack added to the standard-error band so that degenerate (`sigma = 0`)
/// economies, whose band has zero width, are judged up to rounding.
pub const ROUNDING_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McConfig {
    pub draws: usize,
    pub seed: u64,
    /// Average each draw with its mirror `-z`; `draws` then counts pairs.
    pub antithetic: bool,
    pub execution: Execution,
}

impl Default for McConfig {
    fn default() -> Self {
        McConfig {
            draws: DEFAULT_DRAWS,
            seed: 0,
            antithetic: false,
            execution: Execution::default(),
        }
    }
}

impl McConfig {
    pub fn new(draws: usize, seed: u64) -> Self {
        McConfig {
            draws,
            seed,
            ..McConfig::default()
        }
    }
}

/// Sample mean of a Monte Carlo integrand with its standard error.
///
/// With a single draw the standard error is reported as zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub n_draws: usize,
    pub seed: u64,
}

impl McEstimate {
    /// Residual in standard errors (infinite when a nonzero residual has zero SE).
    pub fn z_score(&self) -> f64 {
        if self.std_error > 0.0 {
            self.mean / self.std_error
        } else if self.mean == 0.0 {
            0.0
        } else {
            f64::INFINITY.copysign(self.mean)
        }
    }

    pub fn within_se(&self, k: f64) -> bool {
        self.mean.abs() <= k * self.std_error + ROUNDING_FLOOR
    }

    /// `|mean| <= 3 SE` (plus rounding slack) and `|mean| < 1e-3`.
    pub fn passes(&self) -> bool {
        self.within_se(SE_MULTIPLE) && self.mean.abs() < ABS_CAP
    }
}

/// One realisation of the pricing kernel and the equity return.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SdfRealization {
    pub m: f64,
    pub r: f64,
    pub y: f64,
    pub ln_m: f64,
}

/// Log-space SDF evaluator for a fixed economy and price-dividend ratio.
#[derive(Debug, Clone, Copy)]
struct SdfKernel {
    theta: f64,
    ln_beta: f64,
    inv_psi: f64,
    ln_gross_factor: f64,
}

impl SdfKernel {
    fn new(econ: &Economy, c: f64) -> Result<SdfKernel> {
        let theta = theta(econ.preferences())?;
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::NonPositiveInput { field: "c", value: c });
        }
        Ok(SdfKernel {
            theta,
            ln_beta: -econ.delta(),
            inv_psi: 1.0 / econ.psi(),
            ln_gross_factor: (1.0 / c).ln_1p(),
        })
    }

    #[inline]
    fn ln_r(&self, ln_y: f64) -> f64 {
        self.ln_gross_factor + ln_y
    }

    #[inline]
    fn ln_m(&self, ln_y: f64) -> f64 {
        self.theta * (self.ln_beta - self.inv_psi * ln_y) + (self.theta - 1.0) * self.ln_r(ln_y)
    }
}

pub fn sdf(y: f64, econ: &Economy, c: f64) -> Result<SdfRealization> {
    if !(y.is_finite() && y > 0.0) {
        return Err(Error::NonPositiveInput { field: "y", value: y });
    }
    let k = SdfKernel::new(econ, c)?;
    let ln_y = y.ln();
    let ln_m = k.ln_m(ln_y);
    Ok(SdfRealization {
        m: ln_m.exp(),
        r: k.ln_r(ln_y).exp(),
        y,
        ln_m,
    })
}

/// `n` i.i.d. growth draws `y = exp(mu + sigma z)`.
pub fn draw_growth(endow: &Endowment, n: usize, seed: u64) -> Result<Vec<f64>> {
    draw_growth_with(endow, n, seed, Execution::default())
}

pub fn draw_growth_with(
    endow: &Endowment,
    n: usize,
    seed: u64,
    execution: Execution,
) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::ZeroDraws);
    }
    let (mu, sigma) = (endow.mu, endow.sigma);
    let chunks = map_indexed(execution, rng::chunk_count(n), |k| {
        let mut z = rng::chunk_normals(seed, n, k);
        z.iter_mut().for_each(|v| *v = (mu + sigma * *v).exp());
        z
    });
    Ok(chunks.concat())
}

/// Sample mean of `f(ln y)` over the configured draws.
fn estimate<F>(endow: &Endowment, cfg: &McConfig, f: F) -> Result<McEstimate>
where
    F: Fn(f64) -> f64 + Sync + Send,
{
    let n = cfg.draws;
    if n == 0 {
        return Err(Error::ZeroDraws);
    }
    let (mu, sigma, seed, antithetic) = (endow.mu, endow.sigma, cfg.seed, cfg.antithetic);
    let partials = map_indexed(cfg.execution, rng::chunk_count(n), |k| {
        let mut acc = Welford::default();
        for z in rng::chunk_normals(seed, n, k) {
            let x = if antithetic {
                0.5 * (f(mu + sigma * z) + f(mu - sigma * z))
            } else {
                f(mu + sigma * z)
            };
            acc.push(x);
        }
        acc
    });
    let mut total = Welford::default();
    partials.iter().for_each(|p| total.merge(p));
    Ok(McEstimate {
        mean: total.mean,
        std_error: total.std_error(),
        n_draws: n,
        seed,
    })
}

/// Monte Carlo estimate of `E[m r] - 1` at the closed-form price-dividend ratio.
pub fn euler_residual_equity(econ: &Economy, n: usize, seed: u64) -> Result<McEstimate> {
    euler_residual_equity_with(econ, &McConfig::new(n, seed))
}

pub fn euler_residual_equity_with(econ: &Economy, cfg: &McConfig) -> Result<McEstimate> {
    equity_residual_at_pd(econ, pd_ratio(econ), cfg)
}

/// `E[m r] - 1` with an arbitrary price-dividend ratio inside `r` (and `m`).
pub fn equity_residual_at_pd(econ: &Economy, c: f64, cfg: &McConfig) -> Result<McEstimate> {
    let k = SdfKernel::new(econ, c)?;
    estimate(econ.endowment(), cfg, move |ln_y| (k.ln_m(ln_y) + k.ln_r(ln_y)).exp_m1())
}

/// Monte Carlo estimate of `E[m] R_F - 1` with the closed-form `ln R_F`.
pub fn euler_residual_riskfree(econ: &Economy, n: usize, seed: u64) -> Result<McEstimate> {
    euler_residual_riskfree_with(econ, &McConfig::new(n, seed))
}

pub fn euler_residual_riskfree_with(econ: &Economy, cfg: &McConfig) -> Result<McEstimate> {
    riskfree_residual_at(econ, pd_ratio(econ), risk_free_log(econ), cfg)
}

/// `E[m] R_F - 1` with arbitrary `c` and `ln R_F`.
pub fn riskfree_residual_at(econ: &Economy, c: f64, ln_rf: f64, cfg: &McConfig) -> Result<McEstimate> {
    let k = SdfKernel::new(econ, c)?;
    estimate(econ.endowment(), cfg, move |ln_y| (k.ln_m(ln_y) + ln_rf).exp_m1())
}

/// `E[exp(a z)]` for `z ~ N(mean, var)`.
pub fn lognormal_mean(a: f64, mean: f64, var: f64) -> Result<f64> {
    if var < 0.0 {
        return Err(Error::NegativeVariance { var });
    }
    Ok((a * mean + 0.5 * a * a * var).exp())
}

/// Euler expectations evaluated exactly with the lognormal moment formula.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuasiAnalytic {
    /// `E[m r]`, equal to one in equilibrium.
    pub equity: f64,
    /// `E[m] R_F`, equal to one in equilibrium.
    pub riskfree: f64,
}

/// Both Euler expectations without sampling error.
///
/// `m r` and `m` are log-linear in `ln y`, so each expectation is a constant
/// times `E[y^a]` for the exponent collected from the kernel.
pub fn quasi_analytic(econ: &Economy) -> Result<QuasiAnalytic> {
    let k = SdfKernel::new(econ, pd_ratio(econ))?;
    let (mu, var) = (econ.mu(), econ.endowment().variance());
    // ln m = const_m + slope_m ln y
    let const_m = k.theta * k.ln_beta + (k.theta - 1.0) * k.ln_gross_factor;
    let slope_m = -k.theta * k.inv_psi + (k.theta - 1.0);
    let equity = (const_m + k.ln_gross_factor).exp() * lognormal_mean(slope_m + 1.0, mu, var)?;
    let riskfree = (const_m + risk_free_log(econ)).exp() * lognormal_mean(slope_m, mu, var)?;
    Ok(QuasiAnalytic { equity, riskfree })
}
