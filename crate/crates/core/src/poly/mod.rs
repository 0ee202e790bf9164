//! Exact sparse multivariate polynomials over the rationals.

mod linear_form;
mod monomial;
mod parse;
mod polynomial;

pub use linear_form::{random_linear_form, RationalLinearForm, LINEAR_FORM_RANGE};
pub use monomial::{monomials_of_degree, Monomial};
pub use parse::parse_poly;
pub use polynomial::{rational_to_f64, LinearImage, Polynomial, Rational};

/// Convenience for building variable lists from string literals.
pub fn var_names<S: AsRef<str>>(names: &[S]) -> Vec<String> {
    names.iter().map(|s| s.as_ref().to_string()).collect()
}

/// Exact rational from `p`, `p/q`, a decimal such as `0.125`, or
/// scientific notation such as `1e-3`.
pub fn parse_rational(text: &str) -> crate::Result<Rational> {
    use num_bigint::BigInt;

    let bad = || crate::Error::Syntax {
        position: 0,
        message: format!("not a rational number: `{text}`"),
    };
    let t = text.trim();
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q == BigInt::from(0) {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    let (mantissa, exp) = match t.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let unsigned = int.trim_start_matches(['+', '-']);
    if (unsigned.is_empty() && frac.is_empty()) || int.len() - unsigned.len() > 1 {
        return Err(bad());
    }
    if !(unsigned.chars().all(|c| c.is_ascii_digit()) && frac.chars().all(|c| c.is_ascii_digit())) {
        return Err(bad());
    }
    let digits: BigInt = format!("{}0{unsigned}{frac}", &int[..int.len() - unsigned.len()])
        .parse()
        .map_err(|_| bad())?;
    let shift = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    Ok(if shift >= 0 {
        Rational::from_integer(digits * ten.pow(shift as u32))
    } else {
        Rational::new(digits, ten.pow(shift.unsigned_abs()))
    })
}
