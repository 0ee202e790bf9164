use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Monomial, Polynomial, Rational};

/// Largest absolute value of a generated coefficient.
pub const LINEAR_FORM_RANGE: i64 = 100;

/// A linear form `c_1 x_1 + ... + c_n x_n` with exact rational coefficients.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RationalLinearForm {
    #[serde(with = "crate::serde_rational::vec")]
    pub coefficients: Vec<Rational>,
    pub seed: u64,
}

impl RationalLinearForm {
    pub fn new(coefficients: Vec<Rational>, seed: u64) -> Self {
        assert!(
            coefficients.iter().any(|c| !c.is_zero()),
            "a linear form needs a nonzero coefficient"
        );
        RationalLinearForm { coefficients, seed }
    }

    pub fn from_integers(coefficients: &[i64]) -> Self {
        Self::new(
            coefficients
                .iter()
                .map(|&c| Rational::from_integer(c.into()))
                .collect(),
            0,
        )
    }

    /// The coordinate form `x_index`.
    pub fn coordinate(n: usize, index: usize) -> Self {
        let mut c = vec![0i64; n];
        c[index] = 1;
        Self::from_integers(&c)
    }

    pub fn dimension(&self) -> usize {
        self.coefficients.len()
    }

    pub fn negated(&self) -> Self {
        RationalLinearForm {
            coefficients: self.coefficients.iter().map(|c| -c.clone()).collect(),
            seed: self.seed,
        }
    }

    pub fn to_polynomial(&self, vars: &[String]) -> Polynomial {
        assert_eq!(vars.len(), self.coefficients.len());
        Polynomial::from_terms(
            vars,
            self.coefficients
                .iter()
                .enumerate()
                .map(|(i, c)| (Monomial::variable(vars.len(), i), c.clone())),
        )
    }
}

/// Deterministic pseudo-random linear form.
///
/// Coefficients are integers drawn uniformly from `[-100, 100] \ {0}` by a
/// ChaCha8 stream seeded with `seed`, so the all-zero form never occurs.
pub fn random_linear_form(n: usize, seed: u64) -> RationalLinearForm {
    assert!(n >= 1, "dimension must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coefficients = (0..n)
        .map(|_| {
            let mut c = 0;
            while c == 0 {
                c = rng.gen_range(-LINEAR_FORM_RANGE..=LINEAR_FORM_RANGE);
            }
            Rational::from_integer(c.into())
        })
        .collect();
    RationalLinearForm { coefficients, seed }
}
