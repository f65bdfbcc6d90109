//! Exact arbitrary-precision integer, rational, and integer-polynomial
//! arithmetic: the foundation for everything else in the crate.

pub mod factor;
pub mod intfact;
pub mod minpoly;
pub mod modpoly;
pub mod poly;
pub mod sturm;

pub use factor::{int_poly_factor, FactorList};
pub use minpoly::{min_poly_of_power, min_poly_of_trace};
pub use poly::{IntPolynomial, RatPoly};
pub use sturm::{real_root_count, sturm_roots_in_interval};
