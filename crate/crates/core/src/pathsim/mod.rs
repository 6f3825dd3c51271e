//! Simulated compensated Poisson paths on `[0, 1]`, Charlier polynomials,
//! exact pathwise evaluation of chaos expansions, pathwise Itô integrals and
//! a deterministic parallel Monte Carlo harness.

mod charlier;
mod eval;
mod ito;
mod mc;
mod path;
pub mod quad;

pub use charlier::{charlier, charlier_series, charlier_table};
pub use eval::{eval_chaos, CellTable, CompiledChaos};
pub use ito::{ito_integral, ito_integral_between, trace, trace_y_lambda, FnIntegrand, PathIntegrand, PathTrace, Piece};
pub use mc::{mc_estimate, mc_map, ratio_estimate, McEstimate, RatioEstimate};
pub use path::{sample_path, PoissonPath};
