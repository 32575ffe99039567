//! Numerical laboratory for the planar Schrodinger-Poisson energy with a
//! logarithmic convolution kernel on bounded domains.
//!
//! The crate discretizes the mass-constrained energy
//! `J(u) = 1/2 ||grad u||^2 + (alpha/4) chi0(u^2,u^2) - (s/p) ||u||_p^p`
//! on scaled disks and squares, computes local-minimum and mountain-pass
//! solutions on the `L^2` sphere, and checks the landscape structure
//! (fibration maxima, Pohozaev identities, threshold constants, large-domain
//! asymptotics) against closed forms.

pub mod constants;
pub mod error;
pub mod fibration;
pub mod functional;
pub mod grid;
pub mod limit;
pub mod logkernel;
pub mod pipeline;
pub mod sequences;
pub mod solvers;

pub use error::SplabError;
pub use functional::{EnergyBreakdown, Params};
pub use grid::{DomainShape, Field, Grid};
pub use pipeline::RunConfig;
pub use solvers::SolveReport;
