//! Critical point counts on nearby fibers and on Morsifications.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{Polynomial, Rational, RationalLinearForm};
use crate::quotient::{solve_zero_dim_system, CriticalPointSet, SolveTolerances};

/// Imaginary parts below this (relative) count as real.
pub const REALITY_TOLERANCE: f64 = 1e-8;

/// Points are counted if they lie in the open ball of radius `radius` and are
/// strictly closer to the origin than to every excluded point. The excluded
/// points are the limits of solutions that stay away from the origin.
#[derive(Clone, Debug, PartialEq)]
pub struct CountWindow {
    pub radius: f64,
    pub far_points: Vec<Vec<Complex64>>,
}

impl CountWindow {
    pub fn ball(radius: f64) -> Self {
        CountWindow {
            radius,
            far_points: Vec::new(),
        }
    }

    pub fn global() -> Self {
        CountWindow::ball(f64::INFINITY)
    }

    pub fn contains(&self, p: &[Complex64]) -> bool {
        let r = norm(p);
        r < self.radius && self.far_points.iter().all(|q| r < distance(p, q))
    }
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

#[derive(Clone, Debug, PartialEq)]
pub struct CountResult {
    /// Solutions inside the window, with multiplicity.
    pub count: usize,
    /// All solutions, with multiplicity.
    pub total: usize,
    pub solutions: CriticalPointSet,
    /// Indices into `solutions` of the counted points.
    pub inside: Vec<usize>,
    pub warnings: Vec<String>,
}

fn count_in_window(solutions: CriticalPointSet, window: &CountWindow) -> CountResult {
    let inside: Vec<usize> = (0..solutions.len())
        .filter(|&i| window.contains(&solutions.points[i]))
        .collect();
    let count = inside.iter().map(|&i| solutions.multiplicities[i]).sum();
    let mut warnings = Vec::new();
    if inside.iter().any(|&i| solutions.multiplicities[i] > 1) {
        warnings
            .push("non-Morse sample: a counted critical point has multiplicity > 1".to_string());
    }
    if count == 0 && solutions.total_with_multiplicity > 0 {
        warnings.push("radius-suspicious: every solution lies outside the window".to_string());
    }
    CountResult {
        count,
        total: solutions.total_with_multiplicity,
        solutions,
        inside,
        warnings,
    }
}

/// `{f_i c_j - f_j c_i = 0 (i < j), f = a}`: critical points of the linear
/// function `c` on the fiber `f = a`.
pub fn lagrange_system(
    f: &Polynomial,
    c: &RationalLinearForm,
    a: &Rational,
) -> Result<Vec<Polynomial>> {
    let n = f.nvars();
    if c.dimension() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: c.dimension(),
        });
    }
    let grad = f.gradient();
    let mut eqs = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let e = &grad[i].scale(&c.coefficients[j]) - &grad[j].scale(&c.coefficients[i]);
            if !e.is_zero() {
                eqs.push(e);
            }
        }
    }
    eqs.push(f - &Polynomial::constant(f.variables(), a.clone()));
    Ok(eqs)
}

/// `grad(f + a l) = 0`.
pub fn morsification_system(
    f: &Polynomial,
    l: &RationalLinearForm,
    a: &Rational,
) -> Result<Vec<Polynomial>> {
    if l.dimension() != f.nvars() {
        return Err(Error::DimensionMismatch {
            expected: f.nvars(),
            found: l.dimension(),
        });
    }
    let g = f + &l.to_polynomial(f.variables()).scale(a);
    Ok(g.gradient())
}

/// Number of critical points of `phi` on `{f = a}` inside the window.
pub fn restricted_critical_count(
    f: &Polynomial,
    phi: &RationalLinearForm,
    a: &Rational,
    window: &CountWindow,
    seed: u64,
    tol: &SolveTolerances,
) -> Result<CountResult> {
    let sols = solve_zero_dim_system(&lagrange_system(f, phi, a)?, seed, tol)?;
    Ok(count_in_window(sols, window))
}

/// Number of critical points of `f + a l` inside the window.
pub fn morsification_count(
    f: &Polynomial,
    l: &RationalLinearForm,
    a: &Rational,
    window: &CountWindow,
    seed: u64,
    tol: &SolveTolerances,
) -> Result<CountResult> {
    let sols = solve_zero_dim_system(&morsification_system(f, l, a)?, seed, tol)?;
    Ok(count_in_window(sols, window))
}

/// Solutions of the limiting system (`a = 0`) away from the origin.
#[derive(Clone, Debug, PartialEq)]
pub struct FarLimit {
    pub points: Vec<Vec<Complex64>>,
    /// Sum of the multiplicities of `points`.
    pub far_multiplicity: usize,
    /// Dimension of the quotient algebra of the limiting system.
    pub total: usize,
}

impl FarLimit {
    pub fn nearest(&self) -> Option<f64> {
        self.points.iter().map(|p| norm(p)).reduce(f64::min)
    }

    /// Whether the numeric far points account for everything outside the
    /// origin, given the exact local multiplicity there. A far point that
    /// sits within clustering distance of `0` gets merged into it and breaks
    /// this balance.
    pub fn separated(&self, local_multiplicity: usize) -> bool {
        self.total.checked_sub(local_multiplicity) == Some(self.far_multiplicity)
    }
}

/// Returns `None` when the limiting system is not zero-dimensional.
pub fn far_limit_points(
    system_at_zero: &[Polynomial],
    seed: u64,
    tol: &SolveTolerances,
) -> Result<Option<FarLimit>> {
    match solve_zero_dim_system(system_at_zero, seed, tol) {
        Ok(sols) => {
            let scale = sols.points.iter().map(|p| norm(p)).fold(1.0, f64::max);
            let far: Vec<usize> = (0..sols.len())
                .filter(|&i| norm(&sols.points[i]) > tol.clustering * scale)
                .collect();
            Ok(Some(FarLimit {
                far_multiplicity: far.iter().map(|&i| sols.multiplicities[i]).sum(),
                points: far.iter().map(|&i| sols.points[i].clone()).collect(),
                total: sols.total_with_multiplicity,
            }))
        }
        Err(Error::InfiniteQuotient) => Ok(None),
        Err(e) => Err(e),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Orientation {
    Plus,
    Minus,
}

impl Orientation {
    pub fn sign(self) -> i64 {
        match self {
            Orientation::Plus => 1,
            Orientation::Minus => -1,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Orientation::Plus => "+",
            Orientation::Minus => "-",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignedMorseCount {
    pub signed_count: i64,
    /// Morse indices, sorted.
    pub indices: Vec<u32>,
}

/// Signed count of real Morse critical points of `±phi` on `{f = a}` inside the window.
pub fn real_signed_morse_count(
    f: &Polynomial,
    phi: &RationalLinearForm,
    a: &Rational,
    window: &CountWindow,
    orientation: Orientation,
    seed: u64,
    tol: &SolveTolerances,
) -> Result<SignedMorseCount> {
    let phi = match orientation {
        Orientation::Plus => phi.clone(),
        Orientation::Minus => phi.negated(),
    };
    let res = restricted_critical_count(f, &phi, a, window, seed, tol)?;
    let mut indices = Vec::new();
    for &i in &res.inside {
        let p = &res.solutions.points[i];
        let scale = norm(p).max(1.0);
        if p.iter().any(|z| z.im.abs() > REALITY_TOLERANCE * scale) {
            continue;
        }
        if res.solutions.multiplicities[i] > 1 {
            return Err(Error::DegenerateMorse { smallest: 0.0 });
        }
        let x: Vec<f64> = p.iter().map(|z| z.re).collect();
        indices.push(morse_index(f, &phi, &x, tol.hessian)?);
    }
    indices.sort_unstable();
    let signed_count = indices
        .iter()
        .map(|&k| if k % 2 == 0 { 1 } else { -1 })
        .sum();
    Ok(SignedMorseCount {
        signed_count,
        indices,
    })
}

fn eval_real(p: &Polynomial, x: &[f64]) -> f64 {
    let z: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    p.evaluate(&z).re
}

/// Morse index of `phi` restricted to `{f = f(x)}` at the critical point `x`:
/// negative eigenvalues of the Hessian of `phi - lambda f` on `ker df`.
pub fn morse_index(
    f: &Polynomial,
    phi: &RationalLinearForm,
    x: &[f64],
    tolerance: f64,
) -> Result<u32> {
    let n = f.nvars();
    let z: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let grad_f = f.gradient();
    let grad: Vec<f64> = grad_f.iter().map(|g| g.evaluate(&z).re).collect();
    let gnorm2: f64 = grad.iter().map(|g| g * g).sum();
    // compare against the size of the terms, not of the result
    let gscale = grad_f
        .iter()
        .map(|g| g.evaluate_abs(&z))
        .fold(0.0, f64::max);
    if gnorm2 == 0.0 || gnorm2.sqrt() <= 1e-12 * gscale {
        return Err(Error::NonSmoothFiber);
    }
    if n == 1 {
        return Ok(0);
    }
    let c: Vec<f64> = phi
        .coefficients
        .iter()
        .map(crate::poly::rational_to_f64)
        .collect();
    let lambda = c.iter().zip(&grad).map(|(a, b)| a * b).sum::<f64>() / gnorm2;
    let hess = DMatrix::from_fn(n, n, |i, j| {
        -lambda * eval_real(&f.differentiate_index(i).differentiate_index(j), x)
    });
    // orthonormal basis of the tangent space: complete grad f by QR
    let mut m = DMatrix::<f64>::identity(n, n);
    m.set_column(0, &DVector::from_vec(grad.clone()));
    let q = m.qr().q();
    let basis = q.columns(1, n - 1).into_owned();
    let restricted = basis.transpose() * hess * &basis;
    let eig = SymmetricEigen::new(restricted).eigenvalues;
    let largest = eig.iter().map(|e| e.abs()).fold(0.0, f64::max);
    let smallest = eig.iter().map(|e| e.abs()).fold(f64::INFINITY, f64::min);
    if largest == 0.0 || smallest <= tolerance * largest {
        return Err(Error::DegenerateMorse { smallest });
    }
    Ok(eig.iter().filter(|e| **e < 0.0).count() as u32)
}
