//! Slope theory of Euclidean lattices with exact arithmetic.

pub mod algpoints;
pub mod check;
pub mod error;
pub mod exact;
pub mod filtration;
pub mod git;
pub mod harness;
pub mod hn;
pub mod io;
pub mod lattice;
pub mod minima;
pub mod tensor;

pub use check::{CheckReport, Mode, Status};
pub use error::{Error, Result};
pub use filtration::RFiltration;
pub use lattice::{Lattice, LinearMap, Sublattice};
