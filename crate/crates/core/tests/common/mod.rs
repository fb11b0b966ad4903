//! Reference computations used by the integration tests.
//!
//! Nothing here calls into the library's formulas: the CRRA model is coded
//! from its own Euler equations and lognormal expectations are integrated
//! numerically.
#![allow(dead_code)]

use lucas_ez::{validate, Economy, Endowment, Preferences};

pub const GAMMAS: [f64; 5] = [0.0, 1.0, 2.0, 5.0, 10.0];
pub const PSIS: [f64; 5] = [0.25, 0.5, 1.5, 2.0, 3.0];
pub const DELTAS: [f64; 2] = [0.01, 0.05];
pub const MUS: [f64; 2] = [0.0, 0.018];
pub const SIGMAS: [f64; 3] = [0.0, 0.018, 0.036];

pub fn econ(delta: f64, gamma: f64, psi: f64, mu: f64, sigma: f64) -> Economy {
    validate(Preferences::new(delta, gamma, psi), Endowment::new(mu, sigma)).unwrap()
}

pub fn try_econ(delta: f64, gamma: f64, psi: f64, mu: f64, sigma: f64) -> Option<Economy> {
    validate(Preferences::new(delta, gamma, psi), Endowment::new(mu, sigma)).ok()
}

/// Every feasible economy of the verification grid, with optional extra psi values.
pub fn grid_economies(extra_psi: &[f64]) -> Vec<Economy> {
    let mut psis = PSIS.to_vec();
    psis.extend_from_slice(extra_psi);
    let mut out = Vec::new();
    for &gamma in &GAMMAS {
        for &psi in &psis {
            for &delta in &DELTAS {
                for &mu in &MUS {
                    for &sigma in &SIGMAS {
                        if let Some(e) = try_econ(delta, gamma, psi, mu, sigma) {
                            out.push(e);
                        }
                    }
                }
            }
        }
    }
    out
}

/// `E[y^k]` for `ln y ~ N(mu, sigma^2)` by composite Simpson over +-12 sd.
pub fn quadrature_power_moment(k: f64, mu: f64, sigma: f64) -> f64 {
    if sigma == 0.0 {
        return (k * mu).exp();
    }
    let n = 4000usize;
    let (lo, hi) = (-12.0, 12.0);
    let h = (hi - lo) / n as f64;
    let norm = 1.0 / (2.0 * std::f64::consts::PI).sqrt();
    let f = |z: f64| norm * (-0.5 * z * z).exp() * (k * (mu + sigma * z)).exp();
    let mut s = f(lo) + f(hi);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(lo + h * i as f64);
    }
    s * h / 3.0
}

/// Price-dividend ratio from `c / (1 + c) = beta * E[y^(1-gamma)]^((1 - 1/psi) / (1 - gamma))`,
/// with the expectation integrated numerically. Requires `gamma != 1`.
pub fn pd_ratio_by_quadrature(delta: f64, gamma: f64, psi: f64, mu: f64, sigma: f64) -> f64 {
    let moment = quadrature_power_moment(1.0 - gamma, mu, sigma);
    let ratio = (-delta).exp() * moment.powf((1.0 - 1.0 / psi) / (1.0 - gamma));
    ratio / (1.0 - ratio)
}

/// Consumption CAPM with power utility (risk aversion `gamma`, EIS `1/gamma`).
#[derive(Debug, Clone, Copy)]
pub struct Crra {
    pub a_factor: f64,
    pub pd_ratio: f64,
    pub ln_rf: f64,
    pub premium: f64,
    pub e_ln_r: f64,
    pub ln_e_r: f64,
}

/// From `E[beta y^-gamma R] = 1` with `R = (1 + c)/c y`, and `E[beta y^-gamma] R_F = 1`.
pub fn crra(delta: f64, gamma: f64, mu: f64, sigma: f64) -> Crra {
    let var = sigma * sigma;
    // ln E[y^(1-gamma)] and ln E[y^-gamma]
    let ln_m1 = (1.0 - gamma) * mu + 0.5 * (1.0 - gamma) * (1.0 - gamma) * var;
    let ln_m0 = -gamma * mu + 0.5 * gamma * gamma * var;
    let a_factor = -delta + ln_m1;
    let pd_ratio = a_factor.exp() / (1.0 - a_factor.exp());
    let ln_rf = delta - ln_m0;
    // R = y (1 + c) / c = y e^{-A}
    let ln_gross = -a_factor;
    let e_ln_r = ln_gross + mu;
    let ln_e_r = ln_gross + mu + 0.5 * var;
    Crra {
        a_factor,
        pd_ratio,
        ln_rf,
        premium: ln_e_r - ln_rf,
        e_ln_r,
        ln_e_r,
    }
}

pub fn rel_diff(a: f64, b: f64) -> f64 {
    let d = a.abs().max(b.abs());
    if d == 0.0 {
        0.0
    } else {
        (a - b).abs() / d
    }
}
