use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{Format, RunConfig};

#[derive(Debug, Parser)]
#[command(
    name = "lucas-ez",
    version,
    about = "Equilibrium prices of a Lucas tree under Epstein-Zin preferences",
    long_about = "Equilibrium prices of a Lucas tree under Epstein-Zin preferences.\n\n\
        Rates are reported in logs unless --net-rates is given. Every run writes a JSON \
        manifest with the effective configuration and check verdicts.\n\n\
        Exit codes: 0 success, 2 invalid input or no equilibrium, 3 statistical check \
        failed, 4 unit EIS (psi = 1) where the Monte Carlo oracle is undefined."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form equilibrium: price-dividend ratio, rates and premium
    Solve {
        #[command(flatten)]
        economy: EconomyArgs,
        #[arg(long, value_name = "VALUE", allow_hyphen_values = true)]
        /// Relative risk aversion gamma [default: 10]
        gamma: Option<String>,
        /// Also report net simple rates (e^x - 1) [default: off]
        #[arg(long)]
        net_rates: bool,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Monte Carlo check of both Euler equations, plus the exact lognormal check
    Verify {
        #[command(flatten)]
        economy: EconomyArgs,
        /// Relative risk aversion gamma [default: 10]
        #[arg(long, value_name = "VALUE", allow_hyphen_values = true)]
        gamma: Option<String>,
        #[command(flatten)]
        monte_carlo: MonteCarloArgs,
        /// Pair every draw with its mirror image [default: off]
        #[arg(long)]
        antithetic: bool,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Evaluate the equilibrium over a parameter grid (CSV or JSON lines)
    Sweep {
        #[command(flatten)]
        axes: AxisArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Reprice the tree after a permanent shift in risk aversion
    Panic {
        #[command(flatten)]
        economy: EconomyArgs,
        /// Risk aversion before the shift [default: 2]
        #[arg(long, value_name = "VALUE", allow_hyphen_values = true)]
        gamma_from: Option<f64>,
        /// Risk aversion after the shift [default: 10]
        #[arg(long, value_name = "VALUE", allow_hyphen_values = true)]
        gamma_to: Option<f64>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Simulate an equilibrium path and compare its moments with the closed forms
    Simulate {
        #[command(flatten)]
        economy: EconomyArgs,
        /// Relative risk aversion gamma [default: 10]
        #[arg(long, value_name = "VALUE", allow_hyphen_values = true)]
        gamma: Option<String>,
        /// Seed of the growth draws [default: 0]
        #[arg(long, value_name = "N")]
        seed: Option<u64>,
        /// Number of simulated periods [default: 10000]
        #[arg(long, value_name = "N")]
        periods: Option<usize>,
        /// Initial dividend q_0 [default: 1]
        #[arg(long, value_name = "VALUE", allow_hyphen_values = true)]
        q0: Option<f64>,
        /// Write the path as CSV (t,q,p,lnR) to this file [default: none]
        #[arg(long, value_name = "PATH")]
        path_csv: Option<String>,
        #[command(flatten)]
        common: CommonArgs,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Solve { .. } => "solve",
            Command::Verify { .. } => "verify",
            Command::Sweep { .. } => "sweep",
            Command::Panic { .. } => "panic",
            Command::Simulate { .. } => "simulate",
        }
    }

    pub fn common(&self) -> &CommonArgs {
        match self {
            Command::Solve { common, .. }
            | Command::Verify { common, .. }
            | Command::Sweep { common, .. }
            | Command::Panic { common, .. }
            | Command::Simulate { common, .. } => common,
        }
    }

    /// Copies every flag given on the command line into `cfg`.
    pub fn apply(&self, cfg: &mut RunConfig) {
        self.common().apply(cfg);
        match self {
            Command::Solve {
                economy,
                gamma,
                net_rates,
                ..
            } => {
                economy.apply(cfg);
                set(&mut cfg.gamma, gamma);
                if *net_rates {
                    cfg.net_rates = true;
                }
            }
            Command::Verify {
                economy,
                gamma,
                monte_carlo,
                antithetic,
                ..
            } => {
                economy.apply(cfg);
                set(&mut cfg.gamma, gamma);
                set(&mut cfg.seed, &monte_carlo.seed);
                set(&mut cfg.draws, &monte_carlo.draws);
                if *antithetic {
                    cfg.antithetic = true;
                }
            }
            Command::Sweep { axes, .. } => axes.apply(cfg),
            Command::Panic {
                economy,
                gamma_from,
                gamma_to,
                ..
            } => {
                economy.apply(cfg);
                set(&mut cfg.gamma_from, gamma_from);
                set(&mut cfg.gamma_to, gamma_to);
            }
            Command::Simulate {
                economy,
                gamma,
                seed,
                periods,
                q0,
                path_csv,
                ..
            } => {
                economy.apply(cfg);
                set(&mut cfg.gamma, gamma);
                set(&mut cfg.seed, seed);
                set(&mut cfg.periods, periods);
                set(&mut cfg.q0, q0);
                if path_csv.is_some() {
                    cfg.path_csv.clone_from(path_csv);
                }
            }
        }
    }
}

fn set<T: Clone>(slot: &mut T, flag: &Option<T>) {
    if let Some(v) = flag {
        *slot = v.clone();
    }
}

#[derive(Debug, Args)]
pub struct EconomyArgs {
    /// Rate of time preference delta, beta = e^-delta [default: 0.02]
    #[arg(long, value_name = "VALUE", allow_hyphen_values = true)]
    pub delta: Option<String>,
    /// Elasticity of intertemporal substitution psi [default: 1.5]
    #[arg(long, value_name = "VALUE", allow_hyphen_values = true)]
    pub psi: Option<String>,
    /// Mean log dividend growth mu [default: 0.018]
    #[arg(long, value_name = "VALUE", allow_hyphen_values = true)]
    pub mu: Option<String>,
    /// Volatility of log dividend growth sigma [default: 0.036]
    #[arg(long, value_name = "VALUE", allow_hyphen_values = true)]
    pub sigma: Option<String>,
}

impl EconomyArgs {
    fn apply(&self, cfg: &mut RunConfig) {
        set(&mut cfg.delta, &self.delta);
        set(&mut cfg.psi, &self.psi);
        set(&mut cfg.mu, &self.mu);
        set(&mut cfg.sigma, &self.sigma);
    }
}

/// Each axis is `lo:hi:n` (n points, both ends included), `a,b,c`, or one value.
#[derive(Debug, Args)]
pub struct AxisArgs {
    /// Risk aversion axis [default: 10]
    #[arg(long, value_name = "AXIS", allow_hyphen_values = true)]
    pub gamma: Option<String>,
    /// EIS axis [default: 1.5]
    #[arg(long, value_name = "AXIS", allow_hyphen_values = true)]
    pub psi: Option<String>,
    /// Time preference axis [default: 0.02]
    #[arg(long, value_name = "AXIS", allow_hyphen_values = true)]
    pub delta: Option<String>,
    /// Mean log growth axis [default: 0.018]
    #[arg(long, value_name = "AXIS", allow_hyphen_values = true)]
    pub mu: Option<String>,
    /// Growth volatility axis [default: 0.036]
    #[arg(long, value_name = "AXIS", allow_hyphen_values = true)]
    pub sigma: Option<String>,
}

impl AxisArgs {
    fn apply(&self, cfg: &mut RunConfig) {
        set(&mut cfg.gamma, &self.gamma);
        set(&mut cfg.psi, &self.psi);
        set(&mut cfg.delta, &self.delta);
        set(&mut cfg.mu, &self.mu);
        set(&mut cfg.sigma, &self.sigma);
    }
}

#[derive(Debug, Args)]
pub struct MonteCarloArgs {
    /// Seed of the Monte Carlo draws [default: 0]
    #[arg(long, value_name = "N")]
    pub seed: Option<u64>,
    /// Number of Monte Carlo draws [default: 1000000]
    #[arg(long, value_name = "N")]
    pub draws: Option<usize>,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Flat TOML file whose keys are flag names; flags take precedence [default: none]
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output format; sweep renders text as CSV [default: text]
    #[arg(long, value_name = "FORMAT")]
    pub format: Option<Format>,
    /// Write results to this file instead of stdout [default: stdout]
    #[arg(long, value_name = "PATH")]
    pub output: Option<String>,
    /// Where to write the run manifest, `-` for stderr [default: run_manifest.json]
    #[arg(long, value_name = "PATH")]
    pub manifest: Option<String>,
    /// Worker threads for Monte Carlo and sweeps; results do not depend on it [default: all cores]
    #[arg(long, value_name = "N")]
    pub threads: Option<usize>,
}

impl CommonArgs {
    fn apply(&self, cfg: &mut RunConfig) {
        set(&mut cfg.format, &self.format);
        if self.output.is_some() {
            cfg.output.clone_from(&self.output);
        }
        set(&mut cfg.manifest, &self.manifest);
        if self.threads.is_some() {
            cfg.threads = self.threads;
        }
    }
}
