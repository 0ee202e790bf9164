//! Characteristic cycles of nearby and vanishing cycle sheaves of polynomial
//! hypersurface singularities.
//!
//! The crate computes the same cycle along two independent routes: a
//! parameterized Morse count on the nearby fibers `f = a` (or on a
//! Morsification `f + a l`), stabilized as `a -> 0`, and the Euler
//! obstruction calculus applied to stalkwise Euler characteristics of the
//! Milnor fibers. Both routes must agree exactly.

pub mod cycles;
pub mod error;
pub mod invariants;
pub mod nearby;
pub mod poly;
pub mod quotient;
pub mod report;
pub(crate) mod serde_rational;

pub use error::{Error, Result};
pub use poly::{
    parse_poly, parse_rational, random_linear_form, LinearImage, Monomial, Polynomial, Rational,
    RationalLinearForm,
};
