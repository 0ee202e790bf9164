//! Milnor numbers, generic section Milnor numbers and stalkwise Euler
//! characteristics of nearby and vanishing cycles of isolated hypersurface
//! singularities at the origin.

use std::sync::Arc;

use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cycles::{ConstructibleFunction, EulerObstructionTable, StratificationPoset, Stratum};
use crate::error::{Error, Result};
use crate::poly::{random_linear_form, LinearImage, Polynomial, Rational};
use crate::quotient::{degree_cap_from_env, local_quotient_dimension};

pub const DEFAULT_SECTION_TRIALS: usize = 5;

/// Stratum labels of an isolated singularity.
pub const Z_REG: &str = "Z_reg";
pub const ORIGIN: &str = "0";

/// Milnor number at the origin with the truncation cap taken from the environment.
pub fn milnor_number(f: &Polynomial) -> Result<usize> {
    milnor_number_with_cap(f, degree_cap_from_env())
}

pub fn milnor_number_with_cap(f: &Polynomial, degree_cap: u32) -> Result<usize> {
    if !f.constant_term().is_zero() {
        return Err(Error::NotOnHypersurface);
    }
    let grad = f.gradient();
    if grad.iter().any(|g| !g.constant_term().is_zero()) {
        return Err(Error::SmoothPoint);
    }
    local_quotient_dimension(&grad, degree_cap)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectionTrial {
    pub seed: u64,
    /// Hyperplane `sum c_i x_i = 0`.
    pub hyperplane: Vec<String>,
    pub milnor: Option<usize>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectionalMilnor {
    pub value: usize,
    pub trials: Vec<SectionTrial>,
    /// Set when fewer than two trials reach the minimum.
    pub warning: Option<String>,
}

/// Restriction of `f` to the hyperplane `{l = 0}` through the origin,
/// parameterized by the variables other than the last one with `c_k != 0`.
pub fn restrict_to_hyperplane(f: &Polynomial, l: &[Rational]) -> Result<Polynomial> {
    let n = f.nvars();
    if l.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: l.len(),
        });
    }
    let k = l
        .iter()
        .rposition(|c| !c.is_zero())
        .ok_or_else(|| Error::InvalidConfig("zero hyperplane".into()))?;
    let new_vars: Vec<String> = f
        .variables()
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != k)
        .map(|(_, v)| v.clone())
        .collect();
    let map: Vec<LinearImage> = (0..n)
        .map(|i| {
            if i == k {
                let coeffs = (0..n).filter(|&j| j != k).map(|j| -&l[j] / &l[k]).collect();
                LinearImage::linear(coeffs)
            } else {
                LinearImage::variable(n - 1, if i < k { i } else { i - 1 })
            }
        })
        .collect();
    f.substitute_linear(&map, &new_vars)
}

/// Minimum of the Milnor numbers of `f` restricted to `trials` random
/// hyperplanes through the origin.
pub fn sectional_milnor_number(
    f: &Polynomial,
    trials: usize,
    seed: u64,
) -> Result<SectionalMilnor> {
    sectional_milnor_number_with_cap(f, trials, seed, degree_cap_from_env())
}

pub fn sectional_milnor_number_with_cap(
    f: &Polynomial,
    trials: usize,
    seed: u64,
    cap: u32,
) -> Result<SectionalMilnor> {
    let n = f.nvars();
    if n < 2 {
        return Err(Error::InvalidConfig(
            "sections need at least 2 variables".into(),
        ));
    }
    if trials == 0 {
        return Err(Error::InvalidConfig(
            "at least one section trial is required".into(),
        ));
    }
    let results: Vec<(SectionTrial, Result<usize>)> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let s = seed.wrapping_add(t);
            let form = random_linear_form(n, s);
            let res = restrict_to_hyperplane(f, &form.coefficients)
                .and_then(|g| milnor_number_with_cap(&g, cap));
            let trial = SectionTrial {
                seed: s,
                hyperplane: form.coefficients.iter().map(|c| c.to_string()).collect(),
                milnor: res.as_ref().ok().copied(),
                error: res.as_ref().err().map(|e| e.code().to_string()),
            };
            (trial, res)
        })
        .collect();
    let value = match results.iter().filter_map(|(_, r)| r.as_ref().ok()).min() {
        Some(&v) => v,
        None => return Err(results.into_iter().next().unwrap().1.unwrap_err()),
    };
    let hits = results
        .iter()
        .filter(|(t, _)| t.milnor == Some(value))
        .count();
    let warning = (hits < 2)
        .then(|| format!("only {hits} of {trials} section trials reached the minimum {value}"));
    Ok(SectionalMilnor {
        value,
        trials: results.into_iter().map(|(t, _)| t).collect(),
        warning,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct IsolatedSingularityProfile {
    pub f: Polynomial,
    pub n: usize,
    pub mu: usize,
    pub mu_section: usize,
    pub section: SectionalMilnor,
}

impl IsolatedSingularityProfile {
    pub fn compute(f: &Polynomial, trials: usize, seed: u64) -> Result<Self> {
        Self::compute_with_cap(f, trials, seed, degree_cap_from_env())
    }

    pub fn compute_with_cap(f: &Polynomial, trials: usize, seed: u64, cap: u32) -> Result<Self> {
        let mu = milnor_number_with_cap(f, cap)?;
        let section = sectional_milnor_number_with_cap(f, trials, seed, cap)?;
        if section.value > mu {
            log::warn!(
                "section Milnor number {} exceeds Milnor number {}",
                section.value,
                mu
            );
        }
        Ok(IsolatedSingularityProfile {
            f: f.clone(),
            n: f.nvars(),
            mu,
            mu_section: section.value,
            section,
        })
    }

    pub fn section_seeds(&self) -> Vec<u64> {
        self.section.trials.iter().map(|t| t.seed).collect()
    }

    /// `(-1)^{n-1}`
    pub fn sign(&self) -> i64 {
        sign(self.n as i64 - 1)
    }

    /// Recorded check: `m_{Z cap H} <= m_Z`.
    pub fn section_bounded(&self) -> bool {
        self.mu_section <= self.mu
    }
}

pub(crate) fn sign(k: i64) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// `{Z_reg, 0}` with `0` in the closure of `Z_reg`, complex dimensions.
pub fn isolated_poset(n: usize) -> Arc<StratificationPoset> {
    let n = n as u32;
    let strata = vec![
        Stratum::new(Z_REG, n.saturating_sub(1), n),
        Stratum::new(ORIGIN, 0, n),
    ];
    Arc::new(StratificationPoset::new(strata, &[(ORIGIN, Z_REG)]).expect("static poset"))
}

/// `Eu_Z(0) = 1 + (-1)^n m_{Z cap H}`.
pub fn isolated_euler_table(
    poset: &StratificationPoset,
    profile: &IsolatedSingularityProfile,
) -> EulerObstructionTable {
    let mut eu = EulerObstructionTable::unit_diagonal(poset);
    let value = 1 + sign(profile.n as i64) * profile.mu_section as i64;
    eu.set(poset, Z_REG, ORIGIN, value)
        .expect("origin lies in the closure of Z_reg");
    eu
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SheafKind {
    Nearby,
    Vanishing,
    Restriction,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StalkEulerProfile {
    pub sheaf: SheafKind,
    pub chi: ConstructibleFunction,
}

/// `chi` of the nearby cycles `psi_f(C[n])[-1]`.
pub fn stalk_euler_nearby(
    poset: &Arc<StratificationPoset>,
    p: &IsolatedSingularityProfile,
) -> StalkEulerProfile {
    let s = p.sign();
    let chi = ConstructibleFunction::from_pairs(poset, [(Z_REG, s), (ORIGIN, s + p.mu as i64)])
        .expect("labels");
    StalkEulerProfile {
        sheaf: SheafKind::Nearby,
        chi,
    }
}

/// `chi` of the vanishing cycles `phi_f(C[n])[-1]`.
pub fn stalk_euler_vanishing(
    poset: &Arc<StratificationPoset>,
    p: &IsolatedSingularityProfile,
) -> StalkEulerProfile {
    let chi = ConstructibleFunction::from_pairs(poset, [(ORIGIN, p.mu as i64)]).expect("labels");
    StalkEulerProfile {
        sheaf: SheafKind::Vanishing,
        chi,
    }
}

/// `chi` of `C_Z[n-1]`.
pub fn stalk_euler_restriction(
    poset: &Arc<StratificationPoset>,
    p: &IsolatedSingularityProfile,
) -> StalkEulerProfile {
    let s = p.sign();
    let chi = ConstructibleFunction::from_pairs(poset, [(Z_REG, s), (ORIGIN, s)]).expect("labels");
    StalkEulerProfile {
        sheaf: SheafKind::Restriction,
        chi,
    }
}

/// Normal crossings `xyz` in three variables.
pub mod normal_crossings {
    use super::*;

    pub const PLANES: [&str; 3] = ["H1", "H2", "H3"];
    /// `L1 = {y = z = 0}`, `L2 = {x = z = 0}`, `L3 = {x = y = 0}`.
    pub const LINES: [&str; 3] = ["L1", "L2", "L3"];

    /// Open strata of `{xyz = 0}`: planes minus axes, axes minus origin, origin.
    pub fn poset() -> Arc<StratificationPoset> {
        let mut strata: Vec<Stratum> = PLANES.iter().map(|l| Stratum::new(*l, 2, 3)).collect();
        strata.extend(LINES.iter().map(|l| Stratum::new(*l, 1, 3)));
        strata.push(Stratum::new(ORIGIN, 0, 3));
        let rel = [
            ("L1", "H2"),
            ("L1", "H3"),
            ("L2", "H1"),
            ("L2", "H3"),
            ("L3", "H1"),
            ("L3", "H2"),
            (ORIGIN, "L1"),
            (ORIGIN, "L2"),
            (ORIGIN, "L3"),
        ];
        Arc::new(StratificationPoset::new(strata, &rel).expect("static poset"))
    }

    /// Homotopy type of the Milnor fiber at a point of each stratum and its
    /// Euler characteristic.
    pub fn milnor_fiber_table() -> Vec<(&'static str, &'static str, i64)> {
        let mut t: Vec<(&str, &str, i64)> = PLANES.iter().map(|l| (*l, "pt", 1)).collect();
        t.extend(LINES.iter().map(|l| (*l, "S^1", 0)));
        t.push((ORIGIN, "S^1 x S^1", 0));
        t
    }

    /// All closures are linear subspaces.
    pub fn euler_table(poset: &StratificationPoset) -> EulerObstructionTable {
        EulerObstructionTable::smooth_closures(poset)
    }

    fn from_fibers(poset: &Arc<StratificationPoset>, sheaf: SheafKind) -> StalkEulerProfile {
        let s = sign(2);
        let values: Vec<(&str, i64)> = milnor_fiber_table()
            .into_iter()
            .map(|(l, _, chi)| {
                let v = match sheaf {
                    SheafKind::Nearby => s * chi,
                    SheafKind::Vanishing => s * (chi - 1),
                    SheafKind::Restriction => s,
                };
                (l, v)
            })
            .collect();
        StalkEulerProfile {
            sheaf,
            chi: ConstructibleFunction::from_pairs(poset, values).expect("labels"),
        }
    }

    pub fn stalk_euler(poset: &Arc<StratificationPoset>, sheaf: SheafKind) -> StalkEulerProfile {
        from_fibers(poset, sheaf)
    }
}
