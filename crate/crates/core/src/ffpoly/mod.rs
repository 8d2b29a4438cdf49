//! Exact arithmetic over F_p: polynomials, difference operators,
//! multilinearization, projections and character sums.

pub mod bias;
pub mod field;
pub mod multilinear;
pub mod poly;
pub mod text;

pub use bias::CharacterSum;
pub use field::{point_count, points, FieldVector, PrimeModulus};
pub use multilinear::{diagonal_restore, multilinearize, MultilinearForm};
pub use poly::{homogeneous_polys, monomials_of_degree, Monomial, Poly};
pub use text::{parse_poly, write_poly};
