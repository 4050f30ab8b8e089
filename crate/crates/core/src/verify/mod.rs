//! Oracles and verification suites: test corpora, a shooting solver for
//! the classical problem, manufactured loads and the property battery.

pub mod battery;
pub mod corpus;
pub mod manufactured;
pub mod shooting;

pub use battery::{identity_residuals, run_battery, IdentityResiduals, Status, SuiteResult};
pub use corpus::{random_dirichlet, sine_basis, smooth_corpus};
pub use manufactured::manufactured_forcing;
pub use shooting::shoot_power;
