//! Simultaneous complex root finding (Aberth–Ehrlich iteration).

use num_complex::Complex64;

pub const DEFAULT_MAX_ITERATIONS: usize = 200;
pub const DEFAULT_ROOT_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct RootsResult {
    pub roots: Vec<Complex64>,
    pub iterations: usize,
    pub converged: bool,
}

fn horner(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    // coefficients lowest degree first
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// All roots of `sum coeffs[i] z^i` (lowest degree first, nonzero leading).
///
/// Exact zero roots (vanishing trailing coefficients) are split off first.
/// The remaining roots start on a circle whose radius is the geometric mean
/// of the root moduli, rotated by an angle derived from `seed`; each root is
/// finished by two Newton steps on the full polynomial.
pub fn aberth_roots(
    coeffs: &[Complex64],
    seed: u64,
    max_iterations: usize,
    tolerance: f64,
) -> RootsResult {
    let mut coeffs: Vec<Complex64> = coeffs.to_vec();
    while coeffs
        .last()
        .is_some_and(|c| *c == Complex64::new(0.0, 0.0))
    {
        coeffs.pop();
    }
    assert!(
        !coeffs.is_empty(),
        "zero polynomial has no well-defined roots"
    );
    let zeros = coeffs
        .iter()
        .take_while(|c| **c == Complex64::new(0.0, 0.0))
        .count();
    let reduced: Vec<Complex64> = coeffs[zeros..].to_vec();
    let n = reduced.len() - 1;
    let mut roots = vec![Complex64::new(0.0, 0.0); zeros];
    if n == 0 {
        return RootsResult {
            roots,
            iterations: 0,
            converged: true,
        };
    }
    let lead = reduced[n];
    let monic: Vec<Complex64> = reduced.iter().map(|c| c / lead).collect();
    if n == 1 {
        roots.push(-monic[0]);
        return RootsResult {
            roots,
            iterations: 0,
            converged: true,
        };
    }

    let radius = monic[0].norm().powf(1.0 / n as f64).max(f64::MIN_POSITIVE);
    let offset = 0.4 + std::f64::consts::TAU * ((seed as f64 * 0.618_033_988_749_894_9).fract());
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            Complex64::from_polar(radius, offset + std::f64::consts::TAU * k as f64 / n as f64)
        })
        .collect();

    let mut converged = false;
    let mut iterations = 0;
    while iterations < max_iterations {
        iterations += 1;
        let mut max_step: f64 = 0.0;
        for i in 0..n {
            let (p, dp) = horner(&monic, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                z[i] -= step;
                max_step = max_step.max(step.norm() / z[i].norm().max(f64::MIN_POSITIVE));
            }
        }
        if max_step < tolerance {
            converged = true;
            break;
        }
    }
    for zi in z.iter_mut() {
        for _ in 0..2 {
            let (p, dp) = horner(&monic, *zi);
            let step = p / dp;
            if step.is_finite() && step.norm() < 1e-3 * zi.norm().max(1e-300) {
                *zi -= step;
            }
        }
    }
    roots.extend(z);
    RootsResult {
        roots,
        iterations,
        converged,
    }
}
