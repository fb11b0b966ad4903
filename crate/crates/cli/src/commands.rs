use std::fs::File;
use std::io::{BufWriter, Write};

use anyhow::Context;

use lucas_ez::dynamics::{estimate_moments, moment_checks, panic_episode, simulate_path};
use lucas_ez::euler::{
    euler_residual_equity_with, euler_residual_riskfree_with, quasi_analytic, ABS_CAP,
    ROUNDING_FLOOR, SE_MULTIPLE,
};
use lucas_ez::model::classify;
use lucas_ez::sweep::{emit, format_float, sweep_with, TableFormat};
use lucas_ez::{
    solve, validate, Economy, Endowment, Execution, McConfig, McEstimate, PanicRegime, Preferences,
};

use crate::config::{Format, Params, RunConfig};
use crate::report::{render, render_checks, Check, Record, Value};

/// Tolerance of the exact (sampling-free) Euler identities.
pub const QUASI_TOL: f64 = 1e-10;
/// Tolerance of the pathwise return identity `R = (1 + c)/c * y`.
pub const PATHWISE_TOL: f64 = 1e-12;

/// Result of a command that ran to completion.
#[derive(Debug, Default)]
pub struct Outcome {
    pub stdout: Vec<u8>,
    pub checks: Vec<Check>,
    pub warnings: Vec<String>,
}

impl Outcome {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

fn economy(p: Params, out: &mut Outcome) -> anyhow::Result<Economy> {
    let econ = validate(
        Preferences::new(p.delta, p.gamma, p.psi),
        Endowment::new(p.mu, p.sigma),
    )?;
    out.warnings.extend(econ.warnings().iter().map(|w| w.to_string()));
    Ok(econ)
}

pub fn solve_cmd(cfg: &RunConfig) -> anyhow::Result<Outcome> {
    let mut out = Outcome::default();
    let econ = economy(cfg.params()?, &mut out)?;
    let s = solve(&econ);
    let mut record: Record = vec![
        ("a_factor", Value::Num(s.a_factor)),
        ("pd_ratio", Value::Num(s.pd_ratio)),
        ("ln_rf", Value::Num(s.ln_rf)),
        ("premium", Value::Num(s.premium)),
        ("e_ln_r", Value::Num(s.e_ln_r)),
        ("ln_e_r", Value::Num(s.ln_e_r)),
    ];
    if cfg.net_rates {
        record.push(("net_rf", Value::Num(s.net_risk_free())));
        record.push(("net_e_r", Value::Num(s.net_expected_return())));
        record.push(("net_premium", Value::Num(s.net_expected_return() - s.net_risk_free())));
    }
    record.push(("regime", Value::Text(classify(econ.preferences()).to_string())));
    out.stdout = render(&[record], cfg.format).into_bytes();
    Ok(out)
}

fn residual_check(name: &str, est: &McEstimate) -> Check {
    Check {
        name: name.into(),
        estimate: est.mean,
        expected: 0.0,
        std_error: est.std_error,
        bound: (SE_MULTIPLE * est.std_error + ROUNDING_FLOOR).min(ABS_CAP),
        pass: est.passes(),
    }
}

fn exact_check(name: &str, value: f64) -> Check {
    Check {
        name: name.into(),
        estimate: value,
        expected: 1.0,
        std_error: 0.0,
        bound: QUASI_TOL,
        pass: (value - 1.0).abs() <= QUASI_TOL,
    }
}

pub fn verify_cmd(cfg: &RunConfig) -> anyhow::Result<Outcome> {
    let mut out = Outcome::default();
    let econ = economy(cfg.params()?, &mut out)?;
    let mc = McConfig {
        draws: cfg.draws,
        seed: cfg.seed,
        antithetic: cfg.antithetic,
        execution: Execution::default(),
    };
    let equity = euler_residual_equity_with(&econ, &mc)?;
    let riskfree = euler_residual_riskfree_with(&econ, &mc)?;
    let exact = quasi_analytic(&econ)?;
    out.checks = vec![
        residual_check("euler_equity", &equity),
        residual_check("euler_riskfree", &riskfree),
        exact_check("exact_equity", exact.equity),
        exact_check("exact_riskfree", exact.riskfree),
    ];
    let mut text = String::new();
    if cfg.format == Format::Text {
        text.push_str(&format!(
            "draws {} seed {} antithetic {}\n",
            cfg.draws, cfg.seed, cfg.antithetic
        ));
    }
    text.push_str(&render_checks(&out.checks, cfg.format));
    out.stdout = text.into_bytes();
    Ok(out)
}

pub fn sweep_cmd(cfg: &RunConfig) -> anyhow::Result<Outcome> {
    let grid = cfg.grid()?;
    let rows = sweep_with(&grid, Execution::default())?;
    let format = match cfg.format {
        Format::Json => TableFormat::JsonLines,
        Format::Csv | Format::Text => TableFormat::Csv,
    };
    let mut buf = Vec::new();
    emit(&rows, format, &mut buf)?;
    let infeasible = rows.iter().filter(|r| !r.feasible).count();
    let mut out = Outcome {
        stdout: buf,
        ..Outcome::default()
    };
    if infeasible > 0 {
        out.warnings
            .push(format!("{infeasible} of {} cells have no equilibrium", rows.len()));
    }
    Ok(out)
}

fn panic_verdict(psi: f64, regime: PanicRegime, change: f64) -> String {
    let pct = 100.0 * change;
    match regime {
        PanicRegime::PriceFallsInPanic => format!(
            "EIS above one (psi = {psi}): prices fall when risk aversion rises; price change {pct:+.2}%"
        ),
        PanicRegime::PriceRisesInPanic => format!(
            "EIS below one (psi = {psi}): prices rise when risk aversion rises; price change {pct:+.2}%"
        ),
        PanicRegime::PriceInsensitive => format!(
            "prices do not respond to risk aversion (psi = {psi}, unit EIS or riskless growth); price change {pct:+.2}%"
        ),
    }
}

pub fn panic_cmd(cfg: &RunConfig) -> anyhow::Result<Outcome> {
    let mut out = Outcome::default();
    let p = cfg.params_at_gamma(cfg.gamma_from)?;
    let econ = economy(p, &mut out)?;
    let r = panic_episode(&econ, cfg.gamma_from, cfg.gamma_to)?;
    let record: Record = vec![
        ("gamma_from", Value::Num(r.gamma_from)),
        ("gamma_to", Value::Num(r.gamma_to)),
        ("psi", Value::Num(p.psi)),
        ("c_before", Value::Num(r.c_before)),
        ("c_after", Value::Num(r.c_after)),
        ("price_change", Value::Num(r.price_change)),
        ("regime", Value::Text(r.regime.to_string())),
    ];
    let mut text = render(&[record], cfg.format);
    if cfg.format == Format::Text {
        text.push_str(&panic_verdict(p.psi, r.regime, r.price_change));
        text.push('\n');
    }
    out.stdout = text.into_bytes();
    Ok(out)
}

pub fn simulate_cmd(cfg: &RunConfig) -> anyhow::Result<Outcome> {
    let mut out = Outcome::default();
    let econ = economy(cfg.params()?, &mut out)?;
    let path = simulate_path(&econ, cfg.periods, cfg.q0, cfg.seed)?;
    let moments = estimate_moments(&path)?;
    out.checks = moment_checks(&path, &moments)
        .into_iter()
        .map(|m| Check {
            bound: SE_MULTIPLE * m.std_error + ROUNDING_FLOOR,
            name: m.name,
            estimate: m.sample,
            expected: m.expected,
            std_error: m.std_error,
            pass: m.pass,
        })
        .collect();

    let factor = (1.0 + path.pd_ratio) / path.pd_ratio;
    let worst = path
        .gross_returns
        .iter()
        .zip(&path.growth)
        .map(|(r, y)| ((r - factor * y) / (factor * y)).abs())
        .fold(0.0, f64::max);
    out.checks.push(Check {
        name: "pathwise_return".into(),
        estimate: worst,
        expected: 0.0,
        std_error: 0.0,
        bound: PATHWISE_TOL,
        pass: worst <= PATHWISE_TOL,
    });

    if let Some(dest) = &cfg.path_csv {
        write_path_csv(&path, dest)?;
    }
    let mut text = String::new();
    if cfg.format == Format::Text {
        text.push_str(&format!(
            "periods {} seed {} pd_ratio {}\n",
            path.periods(),
            cfg.seed,
            path.pd_ratio
        ));
    }
    text.push_str(&render_checks(&out.checks, cfg.format));
    out.stdout = text.into_bytes();
    Ok(out)
}

fn write_path_csv(path: &lucas_ez::dynamics::Path, dest: &str) -> anyhow::Result<()> {
    let io_err = |e: std::io::Error| anyhow::anyhow!("IoFailure: {dest}: {e}");
    let mut w = BufWriter::new(File::create(dest).map_err(io_err)?);
    writeln!(w, "t,q,p,lnR").map_err(io_err)?;
    let ln_r = path.log_returns();
    for t in 0..=path.periods() {
        let ret = if t == 0 { String::new() } else { format_float(ln_r[t - 1]) };
        writeln!(
            w,
            "{t},{},{},{ret}",
            format_float(path.dividend(t)),
            format_float(path.price(t))
        )
        .map_err(io_err)?;
    }
    w.flush().map_err(io_err).context("writing path CSV")
}
