use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stratum {
    pub label: String,
    pub dimension: u32,
    pub ambient_dimension: u32,
}

impl Stratum {
    pub fn new(label: impl Into<String>, dimension: u32, ambient_dimension: u32) -> Self {
        Stratum {
            label: label.into(),
            dimension,
            ambient_dimension,
        }
    }
}

/// Strata with the closure order `T <= S` meaning `T` lies in the closure of `S`.
///
/// The relation is stored transitively closed. Construction rejects
/// duplicate labels, cycles, and strict relations that do not drop dimension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PosetData", into = "PosetData")]
pub struct StratificationPoset {
    strata: Vec<Stratum>,
    // below[s] = strict predecessors of s (strata in the closure of s, s excluded)
    below: Vec<BTreeSet<usize>>,
    index: HashMap<String, usize>,
}

#[derive(Serialize, Deserialize)]
struct PosetData {
    strata: Vec<Stratum>,
    /// Pairs `(lower, upper)` of the strict closure order.
    relations: Vec<(String, String)>,
}

impl TryFrom<PosetData> for StratificationPoset {
    type Error = Error;
    fn try_from(d: PosetData) -> Result<Self> {
        let rel: Vec<(&str, &str)> = d
            .relations
            .iter()
            .map(|(a, b)| (a.as_str(), b.as_str()))
            .collect();
        StratificationPoset::new(d.strata, &rel)
    }
}

impl From<StratificationPoset> for PosetData {
    fn from(p: StratificationPoset) -> Self {
        let relations = p
            .strict_pairs()
            .map(|(t, s)| (p.strata[t].label.clone(), p.strata[s].label.clone()))
            .collect();
        PosetData {
            strata: p.strata,
            relations,
        }
    }
}

impl StratificationPoset {
    /// `relations` lists pairs `(lower, upper)`; the transitive closure is taken.
    pub fn new(strata: Vec<Stratum>, relations: &[(&str, &str)]) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, s) in strata.iter().enumerate() {
            if index.insert(s.label.clone(), i).is_some() {
                return Err(Error::InvalidPoset(format!(
                    "duplicate stratum `{}`",
                    s.label
                )));
            }
        }
        let n = strata.len();
        let mut below = vec![BTreeSet::new(); n];
        for (lo, hi) in relations {
            let t = *index
                .get(*lo)
                .ok_or_else(|| Error::InvalidPoset(format!("unknown stratum `{lo}`")))?;
            let s = *index
                .get(*hi)
                .ok_or_else(|| Error::InvalidPoset(format!("unknown stratum `{hi}`")))?;
            if t == s {
                continue;
            }
            below[s].insert(t);
        }
        // transitive closure (Floyd–Warshall style on sets)
        for k in 0..n {
            for s in 0..n {
                if below[s].contains(&k) {
                    let extra: Vec<usize> = below[k].iter().copied().collect();
                    below[s].extend(extra);
                }
            }
        }
        for s in 0..n {
            if below[s].contains(&s) {
                return Err(Error::PosetCycle(strata[s].label.clone()));
            }
        }
        for s in 0..n {
            for &t in &below[s] {
                if strata[t].dimension >= strata[s].dimension {
                    return Err(Error::InvalidPoset(format!(
                        "`{}` < `{}` but dimension does not drop",
                        strata[t].label, strata[s].label
                    )));
                }
            }
        }
        Ok(StratificationPoset {
            strata,
            below,
            index,
        })
    }

    pub fn len(&self) -> usize {
        self.strata.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strata.is_empty()
    }

    pub fn strata(&self) -> &[Stratum] {
        &self.strata
    }

    pub fn stratum(&self, label: &str) -> Option<&Stratum> {
        self.index.get(label).map(|&i| &self.strata[i])
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.strata.iter().map(|s| s.label.as_str())
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::InvalidPoset(format!("unknown stratum `{label}`")))
    }

    /// `t <= s` in the closure order.
    pub fn le(&self, t: &str, s: &str) -> bool {
        match (self.index.get(t), self.index.get(s)) {
            (Some(&t), Some(&s)) => t == s || self.below[s].contains(&t),
            _ => false,
        }
    }

    /// Labels `T <= s`, including `s` itself.
    pub fn closure(&self, s: &str) -> Vec<&str> {
        let Some(&i) = self.index.get(s) else {
            return Vec::new();
        };
        std::iter::once(i)
            .chain(self.below[i].iter().copied())
            .map(|k| self.strata[k].label.as_str())
            .collect()
    }

    fn strict_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.len()).flat_map(move |s| self.below[s].iter().map(move |&t| (t, s)))
    }

    /// Indices sorted so that every stratum comes before the strata in its closure.
    pub(crate) fn top_down(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| {
            self.strata[b]
                .dimension
                .cmp(&self.strata[a].dimension)
                .then(a.cmp(&b))
        });
        order
    }

    pub(crate) fn label(&self, i: usize) -> &str {
        &self.strata[i].label
    }
}

/// Values `Eu_{closure(S)}(T)` for `T <= S`, with unit diagonal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerObstructionTable {
    rows: BTreeMap<String, BTreeMap<String, i64>>,
}

impl EulerObstructionTable {
    /// Table with only the diagonal entries `Eu_S(S) = 1`.
    pub fn unit_diagonal(poset: &StratificationPoset) -> Self {
        let rows = poset
            .labels()
            .map(|l| (l.to_string(), BTreeMap::from([(l.to_string(), 1)])))
            .collect();
        EulerObstructionTable { rows }
    }

    /// Every closure smooth: all entries equal 1.
    pub fn smooth_closures(poset: &StratificationPoset) -> Self {
        let rows = poset
            .labels()
            .map(|s| {
                (
                    s.to_string(),
                    poset
                        .closure(s)
                        .into_iter()
                        .map(|t| (t.to_string(), 1))
                        .collect(),
                )
            })
            .collect();
        EulerObstructionTable { rows }
    }

    pub fn set(
        &mut self,
        poset: &StratificationPoset,
        row: &str,
        column: &str,
        value: i64,
    ) -> Result<()> {
        if !poset.le(column, row) {
            return Err(Error::InvalidPoset(format!(
                "Eu[{row}]({column}) outside the closure of `{row}`"
            )));
        }
        if row == column && value != 1 {
            return Err(Error::InvalidPoset(format!("Eu[{row}]({row}) must be 1")));
        }
        self.rows
            .entry(row.to_string())
            .or_default()
            .insert(column.to_string(), value);
        Ok(())
    }

    pub fn get(&self, row: &str, column: &str) -> Result<i64> {
        self.rows
            .get(row)
            .and_then(|r| r.get(column))
            .copied()
            .ok_or_else(|| Error::MissingEuler {
                row: row.to_string(),
                column: column.to_string(),
            })
    }

    /// Check that `row` is present for every `T` in its closure.
    pub fn check_row(&self, poset: &StratificationPoset, row: &str) -> Result<()> {
        for t in poset.closure(row) {
            self.get(row, t)?;
        }
        Ok(())
    }
}
