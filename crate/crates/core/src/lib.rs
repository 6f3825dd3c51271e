//! Exact Poisson chaos calculus on a gridded time interval `[0, 1]`.
//!
//! Random variables are finite chaos expansions `c₀ + Σ I_n(f_n)` whose kernels
//! are piecewise constant on a [`Partition`](grid::Partition). On that class the
//! Malliavin derivative, the Skorohod integral, conditioning and the product
//! formula are all exact finite computations. A Monte Carlo path layer
//! ([`pathsim`]) evaluates the same objects on simulated compensated Poisson
//! paths, and [`verify`] turns each identity of the calculus into a named,
//! reproducible check.
//!
//! ```
//! use chaoslab::grid::{Partition, SymKernel};
//! use chaoslab::chaos::ChaosExpansion;
//!
//! let part = Partition::uniform(2).unwrap();
//! let b = SymKernel::tensor_power(&[1.0, 0.0], 1, &part).unwrap();
//! let f = ChaosExpansion::from_kernel(b);
//! // Ñ(B)² = I₂(1_B^{⊗2}) + Ñ(B) + λ(B)
//! let sq = f.multiply(&f, 8).unwrap();
//! assert_eq!(sq.expectation(), 0.5);
//! assert_eq!(sq.max_degree(), Some(2));
//! ```

pub mod chaos;
pub mod cli;
pub mod error;
pub mod grid;
pub mod pathsim;
pub mod represent;
pub mod verify;

pub use error::{ChaosError, Result};
