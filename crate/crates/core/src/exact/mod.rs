//! Exact arithmetic: rationals, matrices, Hermite forms, exact logs and certified enclosures.

pub mod eigen;
pub mod hnf;
pub mod logrational;
pub mod matrix;
pub mod poly;
pub mod rational;
pub mod real;

pub use eigen::{max_eigenvalue_interval, EigenInterval};
pub use hnf::{hnf, saturate};
pub use logrational::LogRational;
pub use matrix::QMatrix;
pub use rational::{rat, rint, Int, Rational};
pub use real::{Enclosure, ExactReal};
