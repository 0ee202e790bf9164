//! Quotient algebras of polynomial ideals: Gröbner bases, multiplication
//! matrices, local algebras at the origin and numeric solving.

mod algebra;
mod groebner;
mod linalg;
mod local;
mod roots;
mod solve;

use serde::{Deserialize, Serialize};

pub use algebra::{quotient_dimension, QuotientAlgebra};
pub use groebner::{groebner_basis, groebner_basis_with, normal_form, GroebnerConfig};
pub use linalg::{RatMatrix, UniPoly};
pub use local::{
    degree_cap_from_env, local_quotient, local_quotient_dimension, LocalQuotient,
    DEFAULT_DEGREE_CAP, DEGREE_CAP_ENV,
};
pub use roots::{aberth_roots, RootsResult};
pub use solve::{solve_quotient, solve_zero_dim_system, CriticalPointSet, SolveTolerances};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MonomialOrder {
    /// Degree reverse lexicographic, a global well-order.
    GrevLex,
    /// Negative degree order at the origin, computed by truncation.
    Local,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuotientDim {
    Finite(usize),
    Infinite,
}

impl QuotientDim {
    pub fn finite(self) -> Option<usize> {
        match self {
            QuotientDim::Finite(d) => Some(d),
            QuotientDim::Infinite => None,
        }
    }
}
