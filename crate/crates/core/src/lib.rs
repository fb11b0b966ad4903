//! Equilibrium asset prices in a Lucas tree economy with Epstein-Zin preferences.
//!
//! - [`model`]: parameters, validation, the SDF exponent and preference regimes
//! - [`equilibrium`]: closed-form price-dividend ratio, rates and premium
//! - [`euler`]: seeded Monte Carlo and exact lognormal checks of the Euler equations
//! - [`sensitivity`]: comparative statics in risk aversion and finite-difference checks
//! - [`dynamics`]: simulated equilibrium paths and the risk-aversion shock scenario
//! - [`sweep`]: parameter grids and CSV / JSON-lines tables
//!
//! Monte Carlo chunks and sweep cells run on rayon when the `parallel`
//! feature is enabled (the default); results are bit-identical either way.

pub mod dynamics;
pub mod equilibrium;
pub mod error;
pub mod euler;
pub mod exec;
pub mod model;
pub mod rng;
pub mod sensitivity;
mod stats;
pub mod sweep;

pub use equilibrium::{solve, EquilibriumSolution};
pub use error::{Error, Result};
pub use euler::{McConfig, McEstimate};
pub use exec::Execution;
pub use model::{validate, Economy, Endowment, Preferences};
pub use sensitivity::{PanicRegime, SensitivityReport};
pub use stats::SampleMoments;
