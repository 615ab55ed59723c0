//! Diagonal sums of uniformly random boxed plane partitions.
//!
//! An `a x b x c` boxed plane partition is an `a x b` matrix with entries in
//! `[0, c]`, weakly decreasing along rows and columns. Summing along the
//! diagonals `j - r = i` gives `S_{-a+1}, ..., S_{b-1}`. This crate provides
//!
//! - [`partition`]: the domain types, diagonal and contour views, symmetries;
//! - [`formulas`]: closed-form means, covariances and counts, exactly;
//! - [`enumerate`]: exhaustive enumeration and a diagonal transfer-matrix DP;
//! - [`genfunc`] / [`qpoly`]: the q-MacMahon product and the multivariate
//!   product over diagonal variables;
//! - [`sample`]: monotone coupling-from-the-past and heat-bath chains;
//! - [`stats`]: Monte Carlo moment estimates and goodness-of-fit tests;
//! - [`render`]: SVG figures with contours and diagonal sums.

pub mod enumerate;
pub mod error;
pub mod formulas;
pub mod genfunc;
pub mod io;
pub mod partition;
pub mod qpoly;
pub mod render;
pub mod sample;
pub mod stats;
pub mod verify;

pub use error::{Error, Result, Violation};
pub use formulas::ExactRational;
pub use partition::{BoxDims, CenteredSums, ContourSet, DiagonalSums, PlanePartition};
pub use qpoly::QPolynomial;
