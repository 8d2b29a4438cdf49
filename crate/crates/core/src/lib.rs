//! Exact computational toolkit for polynomial rank filtrations over prime
//! fields, Gowers uniformity norms, approximate cocycle/coboundary calculus
//! and correcting-homomorphism search, verified at desk scale by exhaustive
//! enumeration and brute-force oracles.

pub mod budget;
pub mod error;
pub mod matrix;

pub mod cohomology;
pub mod corrector;
pub mod ffpoly;
pub mod gowers;
pub mod limits;
pub mod rank;

pub use budget::Budget;
pub use error::{Error, Result};
