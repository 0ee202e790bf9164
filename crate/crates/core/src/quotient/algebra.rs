use std::collections::HashMap;

use num_traits::{One, Zero};

use super::groebner::{groebner_basis_with, normal_form, GroebnerConfig};
use super::linalg::RatMatrix;
use super::local::{local_quotient_dimension, DEFAULT_DEGREE_CAP};
use super::{MonomialOrder, QuotientDim};
use crate::error::{Error, Result};
use crate::poly::{Monomial, Polynomial, Rational};

/// Finite-dimensional quotient `Q[x] / I` of a zero-dimensional ideal,
/// with its standard monomial basis and multiplication matrices.
#[derive(Clone, Debug)]
pub struct QuotientAlgebra {
    generators: Vec<Polynomial>,
    order: MonomialOrder,
    groebner: Vec<Polynomial>,
    basis: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    matrices: Vec<RatMatrix>,
}

impl QuotientAlgebra {
    pub fn new(gens: &[Polynomial]) -> Result<Self> {
        Self::with_config(gens, &GroebnerConfig::default())
    }

    pub fn with_config(gens: &[Polynomial], config: &GroebnerConfig) -> Result<Self> {
        let groebner = groebner_basis_with(gens, MonomialOrder::GrevLex, config)?;
        let nvars = gens[0].nvars();
        let basis = match standard_monomials(&groebner, nvars) {
            Some(b) => b,
            None => return Err(Error::InfiniteQuotient),
        };
        let index: HashMap<Monomial, usize> = basis
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, m)| (m, i))
            .collect();
        let mut qa = QuotientAlgebra {
            generators: gens.to_vec(),
            order: MonomialOrder::GrevLex,
            groebner,
            basis,
            index,
            matrices: Vec::new(),
        };
        qa.matrices = (0..nvars).map(|i| qa.build_matrix(i)).collect();
        Ok(qa)
    }

    fn build_matrix(&self, var: usize) -> RatMatrix {
        let n = self.basis.len();
        let x = Monomial::variable(self.nvars(), var);
        let columns = self
            .basis
            .iter()
            .map(|b| {
                let m = b.mul(&x);
                if let Some(&k) = self.index.get(&m) {
                    let mut col = vec![Rational::zero(); n];
                    col[k] = Rational::one();
                    col
                } else {
                    let p = Polynomial::from_terms(
                        self.groebner[0].variables(),
                        [(m, Rational::one())],
                    );
                    self.coordinates(&p)
                }
            })
            .collect();
        RatMatrix::from_columns(columns)
    }

    pub fn nvars(&self) -> usize {
        self.generators[0].nvars()
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn groebner_basis(&self) -> &[Polynomial] {
        &self.groebner
    }

    /// Standard monomials in increasing grevlex order.
    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn normal_form(&self, p: &Polynomial) -> Polynomial {
        normal_form(p, &self.groebner)
    }

    /// Coordinates of the normal form of `p` in the standard basis.
    pub fn coordinates(&self, p: &Polynomial) -> Vec<Rational> {
        let nf = self.normal_form(p);
        let mut v = vec![Rational::zero(); self.basis.len()];
        for (m, c) in nf.terms() {
            v[self.index[m]] = c.clone();
        }
        v
    }

    /// Matrix of multiplication by `x_var`; column `j` holds the normal form
    /// of `x_var * basis[j]`.
    pub fn multiplication_matrix(&self, var: usize) -> &RatMatrix {
        &self.matrices[var]
    }

    pub fn multiplication_matrices(&self) -> &[RatMatrix] {
        &self.matrices
    }

    pub fn basis_index(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }
}

/// Standard monomials of a Gröbner basis, or `None` if there are infinitely many.
pub(crate) fn standard_monomials(groebner: &[Polynomial], nvars: usize) -> Option<Vec<Monomial>> {
    let leading: Vec<&Monomial> = groebner
        .iter()
        .map(|g| g.leading_monomial().unwrap())
        .collect();
    if leading.iter().any(|m| m.is_one()) {
        return Some(Vec::new());
    }
    let mut bounds = vec![u32::MAX; nvars];
    for m in &leading {
        if let Some(i) = m.pure_power_variable() {
            bounds[i] = bounds[i].min(m.exponents()[i]);
        }
    }
    if bounds.contains(&u32::MAX) {
        return None;
    }
    let mut out = Vec::new();
    let mut exps = vec![0u32; nvars];
    loop {
        let m = Monomial::from_exponents(exps.clone());
        if !leading.iter().any(|l| l.divides(&m)) {
            out.push(m);
        }
        // odometer over the box prod [0, bounds[i])
        let mut k = 0;
        loop {
            if k == nvars {
                out.sort();
                return Some(out);
            }
            exps[k] += 1;
            if exps[k] < bounds[k] {
                break;
            }
            exps[k] = 0;
            k += 1;
        }
    }
}

/// Dimension of the quotient by `gens` under the given order.
///
/// The global order counts standard monomials of a Gröbner basis; the local
/// order counts the local algebra at the origin with the default truncation cap.
pub fn quotient_dimension(gens: &[Polynomial], order: MonomialOrder) -> Result<QuotientDim> {
    match order {
        MonomialOrder::GrevLex => {
            let gb = groebner_basis_with(gens, order, &GroebnerConfig::default())?;
            Ok(match standard_monomials(&gb, gens[0].nvars()) {
                Some(b) => QuotientDim::Finite(b.len()),
                None => QuotientDim::Infinite,
            })
        }
        MonomialOrder::Local => {
            if gens.iter().all(Polynomial::is_zero) {
                return Err(Error::EmptyIdeal);
            }
            local_quotient_dimension(gens, DEFAULT_DEGREE_CAP).map(QuotientDim::Finite)
        }
    }
}
