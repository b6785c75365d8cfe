//! Probability tables over `Σ^n` for the binary alphabet.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::tolerance::ToleranceConfig;
use crate::word::{Word, MAX_WORD_LEN};

/// Full probability table over binary strings of length `n`, indexed by
/// [`Word::index`].
#[derive(Debug, Clone, PartialEq)]
pub struct StringDistribution {
    n: usize,
    probs: Vec<f64>,
}

impl StringDistribution {
    /// Wraps a raw table without checking its values. Use [`validate`] (or the
    /// ingesting constructors) before handing it to the identification pipeline.
    ///
    /// [`validate`]: StringDistribution::validate
    pub fn from_raw(n: usize, probs: Vec<f64>) -> Result<Self> {
        if n > MAX_WORD_LEN {
            return Err(Error::Length(format!("n = {n} exceeds {MAX_WORD_LEN}")));
        }
        if probs.len() != 1usize << n {
            return Err(Error::Length(format!(
                "table for n = {n} needs {} entries, got {}",
                1usize << n,
                probs.len()
            )));
        }
        Ok(Self { n, probs })
    }

    /// Ingests a table: clamps entries in `[-tol_entry, 0)` to zero and validates.
    pub fn from_table(n: usize, mut probs: Vec<f64>, tol: &ToleranceConfig) -> Result<Self> {
        for p in probs.iter_mut() {
            if *p < 0.0 && *p >= -tol.tol_entry {
                *p = 0.0;
            }
        }
        let dist = Self::from_raw(n, probs)?;
        dist.validate(tol)?;
        Ok(dist)
    }

    /// Ingests a map from binary strings to probabilities. All `2^n` keys are
    /// required; keys outside `Σ^n` are rejected.
    pub fn from_map(n: usize, map: &BTreeMap<String, f64>, tol: &ToleranceConfig) -> Result<Self> {
        if n > MAX_WORD_LEN {
            return Err(Error::Length(format!("n = {n} exceeds {MAX_WORD_LEN}")));
        }
        let mut probs = vec![f64::NAN; 1usize << n];
        for (key, &value) in map {
            let w: Word = key.parse()?;
            if w.len() != n {
                return Err(Error::Length(format!("key {key:?} does not have length {n}")));
            }
            probs[w.index()] = value;
        }
        if let Some(missing) = probs.iter().position(|p| p.is_nan()) {
            return Err(Error::MissingKey(Word::new(n, missing as u64).to_key()));
        }
        Self::from_table(n, probs, tol)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Probability of a full-length string.
    pub fn get(&self, w: &Word) -> f64 {
        assert_eq!(w.len(), self.n);
        self.probs[w.index()]
    }

    pub fn iter(&self) -> impl Iterator<Item = (Word, f64)> + '_ {
        Word::all_of_length(self.n).zip(self.probs.iter().copied())
    }

    pub fn to_map(&self) -> BTreeMap<String, f64> {
        self.iter().map(|(w, p)| (w.to_key(), p)).collect()
    }

    /// Checks entry bounds and total mass; reports the first violation.
    pub fn validate(&self, tol: &ToleranceConfig) -> Result<()> {
        for (w, p) in self.iter() {
            if !p.is_finite() || p < -tol.tol_entry {
                return Err(Error::NegativeEntry { key: w.to_key(), value: p });
            }
            if p > 1.0 + tol.tol_entry {
                return Err(Error::EntryAboveOne { key: w.to_key(), value: p });
            }
        }
        let sum: f64 = self.probs.iter().sum();
        if (sum - 1.0).abs() > tol.tol_sum {
            return Err(Error::SumNotOne { sum });
        }
        Ok(())
    }

    /// `p(u) = Σ_{w ∈ Σ^{n-m}} p(uw)` for every `u ∈ Σ^m`, indexed by `Word::index`.
    pub fn marginalize(&self, m: usize) -> Result<Vec<f64>> {
        if m > self.n {
            return Err(Error::Length(format!("cannot marginalize length {} to {m}", self.n)));
        }
        let block = 1usize << (self.n - m);
        Ok(self.probs.chunks(block).map(|c| c.iter().sum()).collect())
    }

    /// Marginal tables for every length `0..=n`, each summed directly from the
    /// length-`n` table.
    pub fn marginals(&self) -> Marginals {
        let tables = (0..=self.n)
            .map(|m| self.marginalize(m).expect("m <= n"))
            .collect();
        Marginals { tables }
    }

    /// Tests `Σ_a p(va) = Σ_a p(av)` for every `v ∈ Σ^{n-1}`.
    pub fn is_stationary(&self, tol: &ToleranceConfig) -> Result<bool> {
        if self.n < 2 {
            return Err(Error::Length(format!("stationarity needs n >= 2, got {}", self.n)));
        }
        let shorter = self.marginalize(self.n - 1)?;
        let half = 1usize << (self.n - 1);
        for (v, &left) in shorter.iter().enumerate() {
            let right = self.probs[v] + self.probs[half + v];
            if (left - right).abs() > tol.tol_stat {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Marginal probabilities `p(u)` for all `|u| ≤ n`.
#[derive(Debug, Clone)]
pub struct Marginals {
    tables: Vec<Vec<f64>>,
}

impl Marginals {
    pub fn max_len(&self) -> usize {
        self.tables.len() - 1
    }

    pub fn prob(&self, w: &Word) -> f64 {
        self.tables[w.len()][w.index()]
    }
}
