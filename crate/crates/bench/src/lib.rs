//! Shared inputs for the benchmarks.

use charcycle_core::{parse_poly, Polynomial};

pub fn poly(text: &str, vars: &[&str]) -> Polynomial {
    let vars: Vec<String> = vars.iter().map(|v| v.to_string()).collect();
    parse_poly(text, &vars).expect("benchmark input parses")
}

/// The Jacobian ideal of `f`.
pub fn jacobian(f: &Polynomial) -> Vec<Polynomial> {
    f.gradient()
}
