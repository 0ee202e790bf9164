//! Numeric extraction of the points of a zero-dimensional ideal.
//!
//! The characteristic polynomial of a random rational combination
//! `u = sum r_i x_i` acting on the quotient algebra is computed exactly and
//! split into square-free factors, which gives the multiplicities without
//! any floating point. Coordinates come from the rational univariate
//! representation `x_i(p) = g_{x_i}(u(p)) / g_1(u(p))`, where the
//! polynomials `g_v` are built from exact traces `Tr(M_v M_u^j)`. Only the
//! roots of the square-free factors and the final evaluation are floating.

use num_complex::Complex64;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::algebra::QuotientAlgebra;
use super::linalg::{RatMatrix, UniPoly};
use super::roots::{aberth_roots, DEFAULT_MAX_ITERATIONS, DEFAULT_ROOT_TOLERANCE};
use crate::error::{Error, Result};
use crate::poly::{rational_to_f64, Monomial, Polynomial, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveTolerances {
    /// Largest accepted relative residual of a generator at a point.
    pub residual: f64,
    /// Relative distance below which two numeric points are merged.
    pub clustering: f64,
    /// Number of fresh random combinations tried before giving up.
    pub max_reseeds: usize,
    pub root_max_iterations: usize,
    pub root_tolerance: f64,
    /// Relative eigenvalue tolerance below which a critical point is degenerate.
    pub hessian: f64,
}

impl Default for SolveTolerances {
    fn default() -> Self {
        SolveTolerances {
            residual: 1e-8,
            clustering: 1e-6,
            max_reseeds: 5,
            root_max_iterations: DEFAULT_MAX_ITERATIONS,
            root_tolerance: DEFAULT_ROOT_TOLERANCE,
            hessian: 1e-8,
        }
    }
}

/// Solutions of a zero-dimensional system with multiplicities.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalPointSet {
    pub points: Vec<Vec<Complex64>>,
    pub multiplicities: Vec<usize>,
    pub residuals: Vec<f64>,
    pub total_with_multiplicity: usize,
}

impl CriticalPointSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn worst_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[Complex64], usize)> {
        self.points
            .iter()
            .map(Vec::as_slice)
            .zip(self.multiplicities.iter().copied())
    }
}

pub fn solve_zero_dim_system(
    gens: &[Polynomial],
    seed: u64,
    tol: &SolveTolerances,
) -> Result<CriticalPointSet> {
    let qa = QuotientAlgebra::new(gens)?;
    solve_quotient(&qa, seed, tol)
}

struct Combination {
    matrix: RatMatrix,
    factors: Vec<(UniPoly, usize)>,
    distinct: usize,
}

fn random_combination(qa: &QuotientAlgebra, rng: &mut ChaCha8Rng) -> Combination {
    let mut matrix = RatMatrix::zeros(qa.dimension());
    for m in qa.multiplication_matrices() {
        let mut w = 0i64;
        while w == 0 {
            w = rng.gen_range(-30..=30);
        }
        matrix.add_scaled(m, &Rational::from_integer(w.into()));
    }
    let factors = matrix
        .characteristic_polynomial()
        .squarefree_decomposition();
    let distinct = factors.iter().map(|(f, _)| f.degree()).sum();
    Combination {
        matrix,
        factors,
        distinct,
    }
}

/// Choose a combination whose number of distinct eigenvalues is maximal:
/// either every eigenvalue is simple, or two independent draws agree.
fn separating_combination(
    qa: &QuotientAlgebra,
    seed: u64,
    tol: &SolveTolerances,
) -> Result<Combination> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<Combination> = None;
    let mut best_seen_twice = false;
    for _ in 0..=tol.max_reseeds {
        let c = random_combination(qa, &mut rng);
        if c.distinct == qa.dimension() {
            return Ok(c);
        }
        match &best {
            Some(b) if b.distinct == c.distinct => best_seen_twice = true,
            Some(b) if b.distinct > c.distinct => {}
            _ => {
                best = Some(c);
                best_seen_twice = false;
            }
        }
        if best_seen_twice {
            return Ok(best.unwrap());
        }
    }
    Err(Error::DegenerateCombination {
        attempts: tol.max_reseeds + 1,
    })
}

pub fn solve_quotient(
    qa: &QuotientAlgebra,
    seed: u64,
    tol: &SolveTolerances,
) -> Result<CriticalPointSet> {
    let n = qa.nvars();
    let dim = qa.dimension();
    if dim == 0 {
        return Ok(CriticalPointSet {
            points: vec![],
            multiplicities: vec![],
            residuals: vec![],
            total_with_multiplicity: 0,
        });
    }
    let combo = separating_combination(qa, seed, tol)?;

    let squarefree = combo
        .factors
        .iter()
        .fold(UniPoly::one(), |acc, (f, _)| acc.mul(f));
    let trace_forms = trace_vector(qa);
    let one_coords = qa.coordinates(&Polynomial::constant(
        qa.generators()[0].variables(),
        Rational::one(),
    ));
    let mut numerators: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for var in 0..n {
        let v = qa.multiplication_matrix(var).mul_vec(&one_coords);
        numerators.push(rur_polynomial(&squarefree, &combo.matrix, &trace_forms, &v));
    }
    let denominator = rur_polynomial(&squarefree, &combo.matrix, &trace_forms, &one_coords);

    let mut points: Vec<Vec<Complex64>> = Vec::new();
    let mut multiplicities: Vec<usize> = Vec::new();
    for (k, (factor, mult)) in combo.factors.iter().enumerate() {
        let coeffs: Vec<Complex64> = factor
            .coefficients()
            .iter()
            .map(|c| Complex64::new(rational_to_f64(c), 0.0))
            .collect();
        let roots = aberth_roots(
            &coeffs,
            seed.wrapping_add(k as u64),
            tol.root_max_iterations,
            tol.root_tolerance,
        );
        if !roots.converged {
            log::warn!(
                "root finder did not converge on a factor of degree {}",
                factor.degree()
            );
        }
        for t in roots.roots {
            let d = horner(&denominator, t);
            let point: Vec<Complex64> = numerators.iter().map(|g| horner(g, t) / d).collect();
            points.push(point);
            multiplicities.push(*mult);
        }
    }

    let (mut points, multiplicities) = merge_clusters(points, multiplicities, tol.clustering);
    let generators: Vec<&Polynomial> = qa.generators().iter().filter(|g| !g.is_zero()).collect();
    for (p, &m) in points.iter_mut().zip(&multiplicities) {
        if m == 1 {
            polish(&generators, p);
        }
    }
    let residuals: Vec<f64> = points
        .iter()
        .map(|p| {
            generators
                .iter()
                .map(|g| g.relative_residual(p))
                .fold(0.0, f64::max)
        })
        .collect();
    let worst = residuals.iter().copied().fold(0.0, f64::max);
    if worst > tol.residual || worst.is_nan() {
        return Err(Error::IllConditioned {
            worst_residual: worst,
        });
    }
    let total: usize = multiplicities.iter().sum();
    debug_assert_eq!(total, dim);
    Ok(CriticalPointSet {
        points,
        multiplicities,
        residuals,
        total_with_multiplicity: total,
    })
}

/// `tau[b] = Tr(M_b)` for each standard monomial `b`, computed as
/// `sum_c e_c^T M_c` (row `c` of `M_c` only).
fn trace_vector(qa: &QuotientAlgebra) -> Vec<Rational> {
    let dim = qa.dimension();
    let mut tau = vec![Rational::zero(); dim];
    for (c, mono) in qa.basis().iter().enumerate() {
        let mut row = vec![Rational::zero(); dim];
        row[c] = Rational::one();
        let mut rest: Monomial = mono.clone();
        while let Some((var, next)) = rest.split_first_variable() {
            row = qa.multiplication_matrix(var).vec_mul(&row);
            rest = next;
        }
        for (t, r) in tau.iter_mut().zip(row) {
            *t += r;
        }
    }
    tau
}

/// `g_v(T) = sum_j Tr(M_v M_u^j) H_j(T)` with `H_j(T) = sum_{i>j} s_i T^{i-j-1}`,
/// returned as floating coefficients lowest degree first.
fn rur_polynomial(
    squarefree: &UniPoly,
    mu: &RatMatrix,
    tau: &[Rational],
    v: &[Rational],
) -> Vec<Complex64> {
    let s = squarefree.coefficients();
    let d = squarefree.degree();
    let mut out = vec![Rational::zero(); d.max(1)];
    let mut w = v.to_vec();
    for j in 0..d {
        let trace: Rational = tau
            .iter()
            .zip(&w)
            .filter(|(a, b)| !a.is_zero() && !b.is_zero())
            .map(|(a, b)| a * b)
            .sum();
        if !trace.is_zero() {
            for i in (j + 1)..=d {
                out[i - j - 1] += &trace * &s[i];
            }
        }
        w = mu.mul_vec(&w);
    }
    out.iter()
        .map(|c| Complex64::new(rational_to_f64(c), 0.0))
        .collect()
}

fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
}

fn merge_clusters(
    points: Vec<Vec<Complex64>>,
    mults: Vec<usize>,
    tol: f64,
) -> (Vec<Vec<Complex64>>, Vec<usize>) {
    let mut out_p: Vec<Vec<Complex64>> = Vec::new();
    let mut out_m: Vec<usize> = Vec::new();
    for (p, m) in points.into_iter().zip(mults) {
        let found = out_p.iter().position(|q| {
            let scale = norm(q).max(norm(&p)).max(1.0);
            distance(q, &p) < tol * scale
        });
        match found {
            Some(k) => {
                let (a, b) = (out_m[k] as f64, m as f64);
                for (x, y) in out_p[k].iter_mut().zip(&p) {
                    *x = (*x * a + *y * b) / (a + b);
                }
                out_m[k] += m;
            }
            None => {
                out_p.push(p);
                out_m.push(m);
            }
        }
    }
    (out_p, out_m)
}

pub(crate) fn norm(p: &[Complex64]) -> f64 {
    p.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub(crate) fn distance(p: &[Complex64], q: &[Complex64]) -> f64 {
    p.iter()
        .zip(q)
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// A few Gauss–Newton steps on the (possibly overdetermined) system; a step
/// is kept only if it lowers the residual.
fn polish(gens: &[&Polynomial], point: &mut [Complex64]) {
    let n = point.len();
    let jac: Vec<Vec<Polynomial>> = gens.iter().map(|g| g.gradient()).collect();
    let residual = |p: &[Complex64]| gens.iter().map(|g| g.evaluate(p).norm_sqr()).sum::<f64>();
    let mut current = residual(point);
    for _ in 0..4 {
        if current == 0.0 {
            return;
        }
        let values: Vec<Complex64> = gens.iter().map(|g| g.evaluate(point)).collect();
        let j: Vec<Vec<Complex64>> = jac
            .iter()
            .map(|row| row.iter().map(|d| d.evaluate(point)).collect())
            .collect();
        // normal equations (J^H J) delta = -J^H F
        let mut a = vec![vec![Complex64::new(0.0, 0.0); n + 1]; n];
        for r in 0..n {
            for c in 0..n {
                a[r][c] = j.iter().map(|row| row[r].conj() * row[c]).sum();
            }
            a[r][n] = -j
                .iter()
                .zip(&values)
                .map(|(row, f)| row[r].conj() * f)
                .sum::<Complex64>();
        }
        let Some(delta) = gaussian_solve(a) else {
            return;
        };
        let candidate: Vec<Complex64> = point.iter().zip(&delta).map(|(x, d)| x + d).collect();
        let next = residual(&candidate);
        if next < current {
            point.copy_from_slice(&candidate);
            current = next;
        } else {
            return;
        }
    }
}

fn gaussian_solve(mut a: Vec<Vec<Complex64>>) -> Option<Vec<Complex64>> {
    let n = a.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].norm().total_cmp(&a[j][col].norm()))?;
        let size = a[pivot][col].norm();
        if !size.is_finite() || size < 1e-300 {
            return None;
        }
        a.swap(col, pivot);
        for row in (col + 1)..n {
            let f = a[row][col] / a[col][col];
            let (upper, lower) = a.split_at_mut(row);
            for (t, v) in lower[0][col..].iter_mut().zip(&upper[col][col..]) {
                *t -= f * v;
            }
        }
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for row in (0..n).rev() {
        let s: Complex64 = ((row + 1)..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (a[row][n] - s) / a[row][row];
    }
    x.iter().all(|z| z.is_finite()).then_some(x)
}
