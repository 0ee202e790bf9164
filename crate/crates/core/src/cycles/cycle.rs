use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::poset::{EulerObstructionTable, StratificationPoset};
use crate::error::{Error, Result};

/// Integer combination `sum m_S [T*_S X]` of conormal cycles over a poset.
#[derive(Clone, Debug)]
pub struct LagrangianCycle {
    poset: Arc<StratificationPoset>,
    multiplicities: BTreeMap<String, i64>,
}

/// One row of the cycle block of a report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleEntry {
    pub stratum: String,
    pub dimension: u32,
    pub multiplicity: i64,
}

impl PartialEq for LagrangianCycle {
    fn eq(&self, other: &Self) -> bool {
        same_poset(&self.poset, &other.poset) && self.multiplicities == other.multiplicities
    }
}

impl Eq for LagrangianCycle {}

fn same_poset(a: &Arc<StratificationPoset>, b: &Arc<StratificationPoset>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

fn checked_labels<'a, I>(poset: &StratificationPoset, pairs: I) -> Result<BTreeMap<String, i64>>
where
    I: IntoIterator<Item = (&'a str, i64)>,
{
    let mut out: BTreeMap<String, i64> = BTreeMap::new();
    for (label, m) in pairs {
        poset.index_of(label)?;
        *out.entry(label.to_string()).or_default() += m;
    }
    out.retain(|_, m| *m != 0);
    Ok(out)
}

impl LagrangianCycle {
    pub fn zero(poset: &Arc<StratificationPoset>) -> Self {
        LagrangianCycle {
            poset: poset.clone(),
            multiplicities: BTreeMap::new(),
        }
    }

    /// `[T*_S X]` for a single stratum.
    pub fn conormal(poset: &Arc<StratificationPoset>, label: &str) -> Result<Self> {
        Self::from_pairs(poset, [(label, 1)])
    }

    pub fn from_pairs<'a, I>(poset: &Arc<StratificationPoset>, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, i64)>,
    {
        Ok(LagrangianCycle {
            poset: poset.clone(),
            multiplicities: checked_labels(poset, pairs)?,
        })
    }

    pub fn poset(&self) -> &Arc<StratificationPoset> {
        &self.poset
    }

    pub fn multiplicity(&self, label: &str) -> i64 {
        self.multiplicities.get(label).copied().unwrap_or(0)
    }

    pub fn support(&self) -> impl Iterator<Item = (&str, i64)> {
        self.multiplicities.iter().map(|(l, m)| (l.as_str(), *m))
    }

    pub fn is_zero(&self) -> bool {
        self.multiplicities.is_empty()
    }

    pub fn add(&self, other: &LagrangianCycle) -> Result<LagrangianCycle> {
        if !same_poset(&self.poset, &other.poset) {
            return Err(Error::PosetMismatch);
        }
        let mut m = self.multiplicities.clone();
        for (l, v) in &other.multiplicities {
            *m.entry(l.clone()).or_default() += v;
        }
        m.retain(|_, v| *v != 0);
        Ok(LagrangianCycle {
            poset: self.poset.clone(),
            multiplicities: m,
        })
    }

    pub fn sub(&self, other: &LagrangianCycle) -> Result<LagrangianCycle> {
        self.add(&other.negate())
    }

    pub fn negate(&self) -> LagrangianCycle {
        self.scale(-1)
    }

    pub fn scale(&self, k: i64) -> LagrangianCycle {
        let mut m: BTreeMap<String, i64> = self
            .multiplicities
            .iter()
            .map(|(l, v)| (l.clone(), v * k))
            .collect();
        m.retain(|_, v| *v != 0);
        LagrangianCycle {
            poset: self.poset.clone(),
            multiplicities: m,
        }
    }

    /// Cycle of `F[k]`: every multiplicity picks up `(-1)^k`.
    pub fn shift(&self, k: i64) -> LagrangianCycle {
        if k.rem_euclid(2) == 0 {
            self.clone()
        } else {
            self.negate()
        }
    }

    /// Rows in poset order.
    pub fn entries(&self) -> Vec<CycleEntry> {
        self.poset
            .strata()
            .iter()
            .filter_map(|s| {
                self.multiplicities.get(&s.label).map(|&m| CycleEntry {
                    stratum: s.label.clone(),
                    dimension: s.dimension,
                    multiplicity: m,
                })
            })
            .collect()
    }
}

impl fmt::Display for LagrangianCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, e) in self.entries().iter().enumerate() {
            let m = e.multiplicity;
            let sign = match (k, m < 0) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            };
            let abs = m.unsigned_abs();
            if abs == 1 {
                write!(f, "{sign}[T*_{}]", e.stratum)?;
            } else {
                write!(f, "{sign}{abs}[T*_{}]", e.stratum)?;
            }
        }
        Ok(())
    }
}

/// Values of `chi(F)` at generic points of each stratum.
#[derive(Clone, Debug)]
pub struct ConstructibleFunction {
    poset: Arc<StratificationPoset>,
    values: BTreeMap<String, i64>,
}

impl PartialEq for ConstructibleFunction {
    fn eq(&self, other: &Self) -> bool {
        same_poset(&self.poset, &other.poset) && self.values == other.values
    }
}

impl Eq for ConstructibleFunction {}

impl ConstructibleFunction {
    pub fn zero(poset: &Arc<StratificationPoset>) -> Self {
        ConstructibleFunction {
            poset: poset.clone(),
            values: BTreeMap::new(),
        }
    }

    pub fn from_pairs<'a, I>(poset: &Arc<StratificationPoset>, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, i64)>,
    {
        Ok(ConstructibleFunction {
            poset: poset.clone(),
            values: checked_labels(poset, pairs)?,
        })
    }

    pub fn poset(&self) -> &Arc<StratificationPoset> {
        &self.poset
    }

    pub fn value(&self, label: &str) -> i64 {
        self.values.get(label).copied().unwrap_or(0)
    }

    pub fn support(&self) -> impl Iterator<Item = (&str, i64)> {
        self.values.iter().map(|(l, v)| (l.as_str(), *v))
    }

    pub fn sub(&self, other: &ConstructibleFunction) -> Result<ConstructibleFunction> {
        if !same_poset(&self.poset, &other.poset) {
            return Err(Error::PosetMismatch);
        }
        let mut v = self.values.clone();
        for (l, x) in &other.values {
            *v.entry(l.clone()).or_default() -= x;
        }
        v.retain(|_, x| *x != 0);
        Ok(ConstructibleFunction {
            poset: self.poset.clone(),
            values: v,
        })
    }

    /// All strata with their values, zeros included, in poset order.
    pub fn table(&self) -> Vec<(String, i64)> {
        self.poset
            .labels()
            .map(|l| (l.to_string(), self.value(l)))
            .collect()
    }
}

/// Index theorem: `chi(T) = sum_{S >= T} m_S Eu_{closure(S)}(T)`.
pub fn chi_from_cc(
    c: &LagrangianCycle,
    eu: &EulerObstructionTable,
) -> Result<ConstructibleFunction> {
    let poset = c.poset();
    let mut values: BTreeMap<String, i64> = BTreeMap::new();
    for (s, m) in c.support() {
        for t in poset.closure(s) {
            *values.entry(t.to_string()).or_default() += m * eu.get(s, t)?;
        }
    }
    values.retain(|_, v| *v != 0);
    Ok(ConstructibleFunction {
        poset: poset.clone(),
        values,
    })
}

/// Inverse of [`chi_from_cc`], solved from the maximal strata down.
pub fn cc_from_chi(
    chi: &ConstructibleFunction,
    eu: &EulerObstructionTable,
) -> Result<LagrangianCycle> {
    let poset = chi.poset();
    let mut mult: BTreeMap<String, i64> = BTreeMap::new();
    for i in poset.top_down() {
        let t = poset.label(i);
        let mut rest = chi.value(t);
        for (s, m) in &mult {
            if s != t && poset.le(t, s) {
                rest -= m * eu.get(s, t)?;
            }
        }
        if rest != 0 {
            // unit diagonal
            let diag = eu.get(t, t)?;
            debug_assert_eq!(diag, 1);
            mult.insert(t.to_string(), rest * diag);
        }
    }
    Ok(LagrangianCycle {
        poset: poset.clone(),
        multiplicities: mult,
    })
}

/// Signed Morse pairing `sum_S m_S sum_p (-1)^{index(p)}` with a test Lagrangian.
pub fn pair_with_test(c: &LagrangianCycle, morse_data: &BTreeMap<String, Vec<u32>>) -> Result<i64> {
    let mut total = 0;
    for (s, m) in c.support() {
        let indices = morse_data
            .get(s)
            .ok_or_else(|| Error::MissingMorseData(s.to_string()))?;
        let signed: i64 = indices
            .iter()
            .map(|&k| if k % 2 == 0 { 1 } else { -1 })
            .sum();
        total += m * signed;
    }
    Ok(total)
}
