//! Local algebra at the origin by truncated linear algebra.
//!
//! For a truncation degree `D` the space `W_D` spanned by all `m * g`
//! (monomial multiples of the generators, terms of degree `>= D` dropped)
//! is put in echelon form with columns ordered by ascending degree, so pivots
//! are the leading monomials for the local order. If every monomial of some
//! degree `d < D` lies in `W_D`, then `m^d` is contained in the ideal of the
//! local ring (Nakayama) and the non-pivot monomials form a basis of the
//! local quotient.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::{monomials_of_degree, Monomial, Polynomial, Rational};

pub const DEFAULT_DEGREE_CAP: u32 = 24;

/// Environment variable overriding the truncation cap.
pub const DEGREE_CAP_ENV: &str = "CHARCYCLE_DEGREE_CAP";

/// The truncation cap from `CHARCYCLE_DEGREE_CAP`, or the default.
pub fn degree_cap_from_env() -> u32 {
    std::env::var(DEGREE_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_DEGREE_CAP)
}

#[derive(Clone, Debug, PartialEq)]
pub struct LocalQuotient {
    /// Standard monomials for the local order (a staircase).
    pub standard: Vec<Monomial>,
    /// Truncation degree at which the answer was accepted.
    pub truncation: u32,
    /// A degree `d` with `m^d` contained in the local ideal.
    pub certificate_degree: u32,
}

impl LocalQuotient {
    pub fn dimension(&self) -> usize {
        self.standard.len()
    }
}

pub fn local_quotient_dimension(gens: &[Polynomial], degree_cap: u32) -> Result<usize> {
    local_quotient(gens, degree_cap).map(|q| q.dimension())
}

pub fn local_quotient(gens: &[Polynomial], degree_cap: u32) -> Result<LocalQuotient> {
    let gens: Vec<&Polynomial> = gens.iter().filter(|g| !g.is_zero()).collect();
    if gens.is_empty() {
        return Err(Error::Undecided { degree_cap });
    }
    let nvars = gens[0].nvars();
    if gens.iter().any(|g| !g.constant_term().is_zero()) {
        // a unit generator: the local ring is trivial
        return Ok(LocalQuotient {
            standard: Vec::new(),
            truncation: 0,
            certificate_degree: 0,
        });
    }
    let min_order = gens.iter().filter_map(|g| g.order()).min().unwrap();

    let mut previous: Option<(Vec<Monomial>, Option<u32>)> = None;
    for truncation in (min_order + 1)..=degree_cap {
        let level = truncated_level(&gens, nvars, truncation);
        if let (Some(d), Some((prev_std, Some(_)))) = (level.certificate, &previous) {
            if *prev_std == level.standard {
                return Ok(LocalQuotient {
                    standard: level.standard,
                    truncation,
                    certificate_degree: d,
                });
            }
        }
        previous = Some((level.standard, level.certificate));
    }
    Err(Error::Undecided { degree_cap })
}

struct Level {
    standard: Vec<Monomial>,
    certificate: Option<u32>,
}

fn truncated_level(gens: &[&Polynomial], nvars: usize, truncation: u32) -> Level {
    // columns: ascending degree, decreasing grevlex inside a degree
    let mut columns: Vec<Monomial> = Vec::new();
    let mut degree_start = Vec::new();
    for d in 0..truncation {
        degree_start.push(columns.len());
        columns.extend(monomials_of_degree(nvars, d));
    }
    degree_start.push(columns.len());
    let index: HashMap<&Monomial, usize> =
        columns.iter().enumerate().map(|(i, m)| (m, i)).collect();

    let mut rows: Vec<BTreeMap<usize, Rational>> = Vec::new();
    for g in gens {
        let order = g.order().unwrap();
        for shift in &columns {
            if shift.degree() + order >= truncation {
                continue;
            }
            let row: BTreeMap<usize, Rational> = g
                .terms()
                .filter_map(|(t, c)| {
                    let m = t.mul(shift);
                    (m.degree() < truncation).then(|| (index[&m], c.clone()))
                })
                .collect();
            rows.push(row);
        }
    }
    rows.sort_by_key(|r| r.keys().next().copied());

    let mut pivots: Vec<Option<BTreeMap<usize, Rational>>> = vec![None; columns.len()];
    for mut row in rows {
        while let Some((&lead, _)) = row.iter().next() {
            match &pivots[lead] {
                Some(p) => {
                    let factor = &row[&lead] / &p[&lead];
                    for (k, v) in p {
                        let entry = row.entry(*k).or_insert_with(Rational::zero);
                        *entry -= &factor * v;
                        if entry.is_zero() {
                            row.remove(k);
                        }
                    }
                }
                None => {
                    pivots[lead] = Some(row);
                    break;
                }
            }
        }
    }

    let full_degree = |d: u32| -> bool {
        (degree_start[d as usize]..degree_start[d as usize + 1]).all(|c| pivots[c].is_some())
    };
    let mut certificate = None;
    for d in (0..truncation).rev() {
        if full_degree(d) {
            certificate = Some(d);
        } else {
            break;
        }
    }
    let mut standard: Vec<Monomial> = columns
        .iter()
        .enumerate()
        .filter(|(c, _)| pivots[*c].is_none())
        .map(|(_, m)| m.clone())
        .collect();
    standard.sort();
    Level {
        standard,
        certificate,
    }
}
