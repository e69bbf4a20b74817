//! Spectral bounds for products and piecewise-smooth curves of unitary
//! matrices, together with the bi-invariant Finsler geometry of `U(n)` used
//! to check them.

pub mod cli;
pub mod error;
pub mod geometry;
pub mod io;
pub mod linalg;
pub mod random;
pub mod spectral;
pub mod theorems;
pub mod tol;

pub use error::{Error, Result};
