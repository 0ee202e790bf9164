use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Monomial;
use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Terms are kept in a map ordered by grevlex, so the leading term is the
/// last entry. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    vars: Arc<[String]>,
    terms: BTreeMap<Monomial, Rational>,
}

/// Image of one variable under a linear substitution: `constant + sum coeffs[j] * y_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearImage {
    pub constant: Rational,
    pub coefficients: Vec<Rational>,
}

impl LinearImage {
    pub fn variable(nvars: usize, index: usize) -> Self {
        let mut coefficients = vec![Rational::zero(); nvars];
        coefficients[index] = Rational::one();
        LinearImage {
            constant: Rational::zero(),
            coefficients,
        }
    }

    pub fn linear(coefficients: Vec<Rational>) -> Self {
        LinearImage {
            constant: Rational::zero(),
            coefficients,
        }
    }
}

pub(crate) fn validate_variables(vars: &[String]) -> Result<()> {
    for (i, v) in vars.iter().enumerate() {
        let mut chars = v.chars();
        let ok = match chars.next() {
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
            }
            _ => false,
        };
        if !ok {
            return Err(Error::InvalidVariables(format!(
                "`{v}` is not an ASCII identifier"
            )));
        }
        if vars[..i].contains(v) {
            return Err(Error::InvalidVariables(format!("`{v}` declared twice")));
        }
    }
    Ok(())
}

impl Polynomial {
    pub fn zero(vars: &[String]) -> Self {
        Polynomial {
            vars: vars.into(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &[String], c: Rational) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(Monomial::one(vars.len()), c);
        p
    }

    /// The coordinate function `x_index`.
    pub fn variable(vars: &[String], index: usize) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(Monomial::variable(vars.len(), index), Rational::one());
        p
    }

    pub fn from_terms<I>(vars: &[String], terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut p = Self::zero(vars);
        for (m, c) in terms {
            assert_eq!(
                m.nvars(),
                vars.len(),
                "exponent vector length must match variables"
            );
            p.add_term(m, c);
        }
        p
    }

    pub(crate) fn with_vars_of(&self, terms: BTreeMap<Monomial, Rational>) -> Self {
        Polynomial {
            vars: self.vars.clone(),
            terms,
        }
    }

    pub fn variables(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn variable_index(&self, name: &str) -> Result<usize> {
        self.vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVariable {
                name: name.to_string(),
            })
    }

    /// Terms in increasing grevlex order.
    pub fn terms(
        &self,
    ) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&Monomial::one(self.nvars()))
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.keys().next_back()
    }

    pub fn leading_coefficient(&self) -> Option<&Rational> {
        self.terms.values().next_back()
    }

    /// Total degree; the zero polynomial has degree 0.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Lowest total degree of a term (order of vanishing at the origin).
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).min()
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub(crate) fn pop_leading(&mut self) -> Option<(Monomial, Rational)> {
        self.terms.pop_last()
    }

    fn check_same_ring(&self, other: &Polynomial) {
        assert!(
            Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars,
            "polynomials over different variable lists: {:?} vs {:?}",
            self.vars,
            other.vars
        );
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.vars);
        }
        self.with_vars_of(self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect())
    }

    /// `c * m * self`
    pub fn mul_term(&self, m: &Monomial, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.vars);
        }
        self.with_vars_of(self.terms.iter().map(|(t, a)| (t.mul(m), a * c)).collect())
    }

    /// Rescale so the leading coefficient is one.
    pub fn monic(&self) -> Polynomial {
        match self.leading_coefficient() {
            Some(lc) => self.scale(&lc.recip()),
            None => self.clone(),
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut result = Polynomial::constant(&self.vars, Rational::one());
        for _ in 0..e {
            result = &result * self;
        }
        result
    }

    pub fn differentiate(&self, var: &str) -> Result<Polynomial> {
        let i = self.variable_index(var)?;
        Ok(self.differentiate_index(i))
    }

    pub fn differentiate_index(&self, i: usize) -> Polynomial {
        let mut out = Polynomial::zero(&self.vars);
        for (m, c) in &self.terms {
            let e = m.exponents()[i];
            if e == 0 {
                continue;
            }
            let mut exps = m.exponents().to_vec();
            exps[i] -= 1;
            out.add_term(
                Monomial::from_exponents(exps),
                c * Rational::from_integer(e.into()),
            );
        }
        out
    }

    pub fn gradient(&self) -> Vec<Polynomial> {
        (0..self.nvars())
            .map(|i| self.differentiate_index(i))
            .collect()
    }

    /// Composition `p(image_1(y), ..., image_n(y))` in the new variables `new_vars`.
    pub fn substitute_linear(
        &self,
        map: &[LinearImage],
        new_vars: &[String],
    ) -> Result<Polynomial> {
        if map.len() != self.nvars() {
            return Err(Error::DimensionMismatch {
                expected: self.nvars(),
                found: map.len(),
            });
        }
        validate_variables(new_vars)?;
        let images: Vec<Polynomial> = map
            .iter()
            .map(|img| {
                if img.coefficients.len() != new_vars.len() {
                    return Err(Error::DimensionMismatch {
                        expected: new_vars.len(),
                        found: img.coefficients.len(),
                    });
                }
                let mut p = Polynomial::constant(new_vars, img.constant.clone());
                for (j, c) in img.coefficients.iter().enumerate() {
                    p.add_term(Monomial::variable(new_vars.len(), j), c.clone());
                }
                Ok(p)
            })
            .collect::<Result<_>>()?;

        // powers[i][e] = images[i]^e, filled lazily
        let mut powers: Vec<Vec<Polynomial>> = images
            .iter()
            .map(|_| vec![Polynomial::constant(new_vars, Rational::one())])
            .collect();
        let mut out = Polynomial::zero(new_vars);
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(new_vars, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap() * &images[i];
                    powers[i].push(next);
                }
                if e > 0 {
                    term = &term * &powers[i][e as usize];
                }
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// Evaluate at a complex point.
    ///
    /// Terms are summed in increasing grevlex order; each monomial is a
    /// product of integer powers of the coordinates taken in variable order.
    pub fn evaluate(&self, point: &[Complex64]) -> Complex64 {
        assert_eq!(
            point.len(),
            self.nvars(),
            "point dimension must match variable count"
        );
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            acc += rational_to_f64(c) * monomial_value(m, point);
        }
        acc
    }

    /// `sum |c| * |m(point)|`, a scale for relative residuals.
    pub fn evaluate_abs(&self, point: &[Complex64]) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| rational_to_f64(&c.abs()) * monomial_value(m, point).norm())
            .sum()
    }

    /// Residual of `self` at `point`, relative to the coefficient scale of
    /// the polynomial at the magnitude of the point.
    pub fn relative_residual(&self, point: &[Complex64]) -> f64 {
        let value = self.evaluate(point).norm();
        if value == 0.0 {
            return 0.0;
        }
        let r = point.iter().map(|z| z.norm()).fold(1.0f64, f64::max);
        let scale: f64 = self
            .terms
            .iter()
            .map(|(m, c)| rational_to_f64(&c.abs()) * r.powi(m.degree() as i32))
            .sum();
        value / scale
    }

    pub fn evaluate_rational(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars());
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.exponents()) {
                for _ in 0..e {
                    t *= x;
                }
            }
            acc += t;
        }
        acc
    }

    /// Replace a variable by a rational value, keeping the variable list.
    pub fn specialize(&self, index: usize, value: &Rational) -> Polynomial {
        let mut out = Polynomial::zero(&self.vars);
        for (m, c) in &self.terms {
            let mut exps = m.exponents().to_vec();
            let e = std::mem::replace(&mut exps[index], 0);
            let mut coef = c.clone();
            for _ in 0..e {
                coef *= value;
            }
            out.add_term(Monomial::from_exponents(exps), coef);
        }
        out
    }

    pub fn max_abs_coefficient(&self) -> f64 {
        self.terms
            .values()
            .map(|c| rational_to_f64(&c.abs()))
            .fold(0.0, f64::max)
    }
}

pub(crate) fn monomial_value(m: &Monomial, point: &[Complex64]) -> Complex64 {
    let mut v = Complex64::new(1.0, 0.0);
    for (x, &e) in point.iter().zip(m.exponents()) {
        if e > 0 {
            v *= x.powu(e);
        }
    }
    v
}

pub fn rational_to_f64(c: &Rational) -> f64 {
    c.to_f64().unwrap_or_else(|| {
        // fall back to a ratio of scaled magnitudes for very large parts
        let n = c.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = c.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.check_same_ring(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.check_same_ring(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.check_same_ring(rhs);
        let mut out = Polynomial::zero(&self.vars);
        for (m, c) in &self.terms {
            for (n, d) in &rhs.terms {
                out.add_term(m.mul(n), c * d);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.with_vars_of(
            self.terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        )
    }
}

impl fmt::Display for Polynomial {
    /// Canonical text form: terms in decreasing grevlex order, accepted by the parser.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            match (k, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let a = c.abs();
            let mut factors: Vec<String> = Vec::new();
            for (v, &e) in self.vars.iter().zip(m.exponents()) {
                match e {
                    0 => {}
                    1 => factors.push(v.clone()),
                    _ => factors.push(format!("{v}^{e}")),
                }
            }
            if factors.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{a}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial[{}]({})", self.vars.join(","), self)
    }
}
