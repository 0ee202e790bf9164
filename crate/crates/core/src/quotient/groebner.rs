//! Buchberger's algorithm over the rationals with the grevlex order.
//!
//! Pairs are selected by smallest lcm degree (normal strategy). Useless pairs
//! are discarded by the product criterion and by the chain criterion.

use std::collections::{BTreeSet, HashSet};

use num_traits::Zero;

use super::MonomialOrder;
use crate::error::{Error, Result};
use crate::poly::{Monomial, Polynomial};

pub const DEFAULT_SPOLY_DEGREE_CAP: u32 = 30;
pub const DEFAULT_PAIR_CAP: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GroebnerConfig {
    /// Largest allowed degree of an S-polynomial lcm.
    pub degree_cap: u32,
    /// Largest allowed number of pending critical pairs.
    pub pair_cap: usize,
}

impl Default for GroebnerConfig {
    fn default() -> Self {
        GroebnerConfig {
            degree_cap: DEFAULT_SPOLY_DEGREE_CAP,
            pair_cap: DEFAULT_PAIR_CAP,
        }
    }
}

pub fn groebner_basis(gens: &[Polynomial], order: MonomialOrder) -> Result<Vec<Polynomial>> {
    groebner_basis_with(gens, order, &GroebnerConfig::default())
}

pub fn groebner_basis_with(
    gens: &[Polynomial],
    order: MonomialOrder,
    config: &GroebnerConfig,
) -> Result<Vec<Polynomial>> {
    if order == MonomialOrder::Local {
        return Err(Error::Unsupported(
            "standard bases for the local order are computed by local_quotient_dimension".into(),
        ));
    }
    let mut basis: Vec<Polynomial> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(Polynomial::monic)
        .collect();
    if basis.is_empty() {
        return Err(Error::EmptyIdeal);
    }
    if basis
        .iter()
        .any(|g| g.leading_monomial().is_some_and(Monomial::is_one))
    {
        let one = Polynomial::constant(basis[0].variables(), num_traits::One::one());
        return Ok(vec![one]);
    }

    // (lcm degree, lcm, i, j) with i < j
    let mut queue: BTreeSet<(u32, Monomial, usize, usize)> = BTreeSet::new();
    let mut pending: HashSet<(usize, usize)> = HashSet::new();
    for j in 0..basis.len() {
        for i in 0..j {
            push_pair(&basis, &mut queue, &mut pending, i, j);
        }
    }

    while let Some((deg, lcm, i, j)) = queue.pop_first() {
        pending.remove(&(i, j));
        if deg > config.degree_cap {
            return Err(Error::CapExceeded(format!(
                "S-polynomial degree {deg} exceeds cap {}",
                config.degree_cap
            )));
        }
        let (lm_i, lm_j) = (
            basis[i].leading_monomial().unwrap(),
            basis[j].leading_monomial().unwrap(),
        );
        if lm_i.is_coprime(lm_j) || chain_criterion(&basis, &pending, i, j, &lcm) {
            continue;
        }
        let s = s_polynomial(&basis[i], &basis[j], &lcm);
        let r = normal_form(&s, &basis);
        if r.is_zero() {
            continue;
        }
        let r = r.monic();
        if r.leading_monomial().unwrap().is_one() {
            return Ok(vec![r]);
        }
        basis.push(r);
        let k = basis.len() - 1;
        for i in 0..k {
            push_pair(&basis, &mut queue, &mut pending, i, k);
        }
        if pending.len() > config.pair_cap {
            return Err(Error::CapExceeded(format!(
                "{} pending pairs exceed cap {}",
                pending.len(),
                config.pair_cap
            )));
        }
    }

    Ok(reduce_basis(basis))
}

fn push_pair(
    basis: &[Polynomial],
    queue: &mut BTreeSet<(u32, Monomial, usize, usize)>,
    pending: &mut HashSet<(usize, usize)>,
    i: usize,
    j: usize,
) {
    let lcm = basis[i]
        .leading_monomial()
        .unwrap()
        .lcm(basis[j].leading_monomial().unwrap());
    queue.insert((lcm.degree(), lcm, i, j));
    pending.insert((i, j));
}

/// Pair (i, j) is redundant if some other leading monomial divides the lcm
/// and both pairs through it have already been treated.
fn chain_criterion(
    basis: &[Polynomial],
    pending: &HashSet<(usize, usize)>,
    i: usize,
    j: usize,
    lcm: &Monomial,
) -> bool {
    let key = |a: usize, b: usize| if a < b { (a, b) } else { (b, a) };
    basis.iter().enumerate().any(|(k, g)| {
        k != i
            && k != j
            && g.leading_monomial().unwrap().divides(lcm)
            && !pending.contains(&key(i, k))
            && !pending.contains(&key(j, k))
    })
}

fn s_polynomial(f: &Polynomial, g: &Polynomial, lcm: &Monomial) -> Polynomial {
    let (mf, cf) = f.leading_term().unwrap();
    let (mg, cg) = g.leading_term().unwrap();
    let a = f.mul_term(&mf.quotient_of(lcm).unwrap(), &cf.recip());
    let b = g.mul_term(&mg.quotient_of(lcm).unwrap(), &cg.recip());
    &a - &b
}

/// Full reduction of `p` modulo `divisors` (every term is reduced).
pub fn normal_form(p: &Polynomial, divisors: &[Polynomial]) -> Polynomial {
    let mut work = p.clone();
    let mut remainder = Polynomial::zero(p.variables());
    while let Some((m, c)) = work.pop_leading() {
        match divisors
            .iter()
            .find(|g| g.leading_monomial().unwrap().divides(&m))
        {
            Some(g) => {
                let (gm, gc) = g.leading_term().unwrap();
                let factor = -(c / gc);
                let shift = gm.quotient_of(&m).unwrap();
                for (t, a) in g.terms().rev().skip(1) {
                    work.add_term(t.mul(&shift), a * &factor);
                }
            }
            None => remainder.add_term(m, c),
        }
    }
    remainder
}

/// Minimal, interreduced, monic basis sorted by leading monomial.
fn reduce_basis(mut basis: Vec<Polynomial>) -> Vec<Polynomial> {
    basis.sort_by(|a, b| a.leading_monomial().cmp(&b.leading_monomial()));
    let mut minimal: Vec<Polynomial> = Vec::new();
    for (k, g) in basis.iter().enumerate() {
        let lm = g.leading_monomial().unwrap();
        let redundant = basis.iter().enumerate().any(|(l, h)| {
            let hm = h.leading_monomial().unwrap();
            l != k && hm.divides(lm) && (hm != lm || l < k)
        });
        if !redundant {
            minimal.push(g.clone());
        }
    }
    let mut reduced = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let (lm, _) = minimal[k].leading_term().unwrap();
        let lm = lm.clone();
        let others: Vec<Polynomial> = minimal
            .iter()
            .enumerate()
            .filter(|&(l, _)| l != k)
            .map(|(_, h)| h.clone())
            .collect();
        let mut tail = minimal[k].clone();
        tail.pop_leading();
        let tail = normal_form(&tail, &others);
        let mut g = tail;
        g.add_term(lm, num_traits::One::one());
        debug_assert!(!g.leading_coefficient().unwrap().is_zero());
        reduced.push(g);
    }
    reduced.sort_by(|a, b| a.leading_monomial().cmp(&b.leading_monomial()));
    reduced
}
