//! Mimetic spectral element discretisation of the Poisson problem for volume
//! forms in two dimensions.
//!
//! The crate is organised bottom-up:
//!
//! * [`topology`]: oriented cell complexes, incidence matrices, dual grids;
//! * [`basis`]: GLL nodes, nodal and edge polynomials, reduction and reconstruction;
//! * [`geometry`]: the deformed element maps and their metric;
//! * [`assembly`]: mass and Hodge matrices;
//! * [`solvers`]: the dual-grid and single-grid mixed solvers;
//! * [`harness`]: manufactured problems, error norms, convergence studies.

pub mod assembly;
pub mod basis;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod linalg;
pub mod mesh;
pub mod solvers;
pub mod topology;

pub use error::{Error, Result};
