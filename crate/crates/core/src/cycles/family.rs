use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Rational;

pub const DEFAULT_STABILITY_WINDOW: usize = 3;

/// Samples `(a_k, payload)` of a one-parameter family, `a_k` strictly
/// decreasing towards `0`.
#[derive(Clone, Debug, PartialEq)]
pub struct FamilyOfCycles<P> {
    samples: Vec<(Rational, P)>,
}

impl<P: Clone + PartialEq + fmt::Display> FamilyOfCycles<P> {
    pub fn new(samples: Vec<(Rational, P)>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::InvalidFamily(format!(
                "need at least 2 samples, got {}",
                samples.len()
            )));
        }
        if samples.iter().any(|(a, _)| *a <= Rational::zero()) {
            return Err(Error::InvalidFamily("parameters must be positive".into()));
        }
        if samples.windows(2).any(|w| w[1].0 >= w[0].0) {
            return Err(Error::InvalidFamily(
                "parameters must be strictly decreasing".into(),
            ));
        }
        Ok(FamilyOfCycles { samples })
    }

    pub fn samples(&self) -> &[(Rational, P)] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn payloads(&self) -> impl Iterator<Item = &P> {
        self.samples.iter().map(|(_, p)| p)
    }

    /// Replace the payload of sample `k`.
    pub fn with_payload(&self, k: usize, payload: P) -> Self {
        let mut samples = self.samples.clone();
        samples[k].1 = payload;
        FamilyOfCycles { samples }
    }
}

fn describe<P: fmt::Display>(a: &Rational, p: &P) -> String {
    format!("a={a}: {p}")
}

/// The common payload of the last `window` samples.
pub fn limit_of_family<P: Clone + PartialEq + fmt::Display>(
    fam: &FamilyOfCycles<P>,
    window: usize,
) -> Result<P> {
    if window == 0 || window > fam.len() {
        return Err(Error::InvalidFamily(format!(
            "window {window} with {} samples",
            fam.len()
        )));
    }
    let tail = &fam.samples[fam.len() - window..];
    if tail.iter().all(|(_, p)| *p == tail[0].1) {
        Ok(tail[0].1.clone())
    } else {
        Err(Error::NotStabilized {
            window,
            tail: tail.iter().map(|(a, p)| describe(a, p)).collect(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstancyReport {
    pub constant: bool,
    /// Most frequent payload (earliest on ties).
    pub reference: String,
    /// Samples whose payload differs from the reference.
    pub deviating: Vec<String>,
}

pub fn constancy_check<P: Clone + PartialEq + fmt::Display>(
    fam: &FamilyOfCycles<P>,
) -> ConstancyReport {
    let payloads: Vec<&P> = fam.payloads().collect();
    let count = |p: &P| payloads.iter().filter(|q| **q == p).count();
    let mut reference = payloads[0];
    let mut best = count(reference);
    for p in &payloads[1..] {
        let c = count(p);
        if c > best {
            reference = p;
            best = c;
        }
    }
    let deviating: Vec<String> = fam
        .samples
        .iter()
        .filter(|(_, p)| p != reference)
        .map(|(a, p)| describe(a, p))
        .collect();
    ConstancyReport {
        constant: deviating.is_empty(),
        reference: reference.to_string(),
        deviating,
    }
}

/// `10^{-1}, ..., 10^{-k}`.
pub fn geometric_schedule(k: u32) -> Vec<Rational> {
    (1..=k)
        .map(|e| Rational::new(1.into(), num_bigint::BigInt::from(10).pow(e)))
        .collect()
}
