//! Splitting of primes of k[t] in R and enumeration of prime ideals by norm.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{FieldError, FunctionField};
use crate::algebra::factor::{factor_degrees, monic_irreducibles};
use crate::algebra::poly::FqPoly;
use crate::algebra::residue::ResidueField;

/// `count` primes above p, each with residue degree `residue_degree` over
/// `k[t]/(p)` and ramification index `ramification`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PrimePart {
    pub residue_degree: usize,
    pub ramification: usize,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeSplitting {
    pub p: FqPoly,
    /// Sorted, grouped by `(residue_degree, ramification)`.
    pub parts: Vec<PrimePart>,
}

impl PrimeSplitting {
    fn from_pairs(p: &FqPoly, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut grouped: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for key in pairs {
            *grouped.entry(key).or_default() += 1;
        }
        let parts = grouped
            .into_iter()
            .map(|((residue_degree, ramification), count)| PrimePart { residue_degree, ramification, count })
            .collect();
        PrimeSplitting { p: p.clone(), parts }
    }

    /// `sum e f g`, which must equal the field degree.
    pub fn total_degree(&self) -> usize {
        self.parts.iter().map(|pp| pp.residue_degree * pp.ramification * pp.count).sum()
    }
}

/// One prime ideal P of R, identified by the prime p below it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeIdeal {
    pub below: String,
    pub residue_degree: usize,
    pub ramification: usize,
    /// `deg |R/P| = deg p * residue_degree`.
    pub norm_degree: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeList {
    pub primes: Vec<PrimeIdeal>,
    /// Number of primes of each norm degree, for auditing.
    pub counts: BTreeMap<usize, usize>,
}

impl FunctionField {
    /// Splitting of p by Dedekind-Kummer: factor m modulo p.
    pub fn split_prime(&self, p: &FqPoly) -> Result<PrimeSplitting, FieldError> {
        let p = p.monic();
        if !self.maximal_at(&p) {
            return Err(FieldError::NotMaximalAt(p.to_string()));
        }
        let degs = factor_degrees(&self.reduce_mod(&p)?)?;
        Ok(PrimeSplitting::from_pairs(&p, degs.into_iter().map(|(f, e)| (f, e as usize))))
    }

    /// Splitting in a cyclotomic field from the order of p modulo the
    /// conductor: unramified with residue degree `ord(p mod f)` when p != f,
    /// totally ramified when p = f. `None` outside the cyclotomic case.
    pub fn split_prime_by_order(&self, p: &FqPoly) -> Result<Option<PrimeSplitting>, FieldError> {
        let Some(f) = self.conductor() else { return Ok(None) };
        let p = p.monic();
        let d = self.degree();
        if &p == f {
            return Ok(Some(PrimeSplitting::from_pairs(&p, [(1, d)])));
        }
        let rf = ResidueField::new(f)?;
        let ord = rf.mult_order(&p).ok_or_else(|| FieldError::Inconsistent(format!("{p} is not a unit mod {f}")))? as usize;
        Ok(Some(PrimeSplitting::from_pairs(&p, std::iter::repeat_n((ord, 1), d / ord))))
    }

    /// All primes of R with norm degree at most `maxdeg`.
    pub fn prime_ideals_up_to(&self, maxdeg: usize) -> Result<PrimeList, FieldError> {
        let mut primes = Vec::new();
        let mut counts = BTreeMap::new();
        for deg in 1..=maxdeg {
            for p in monic_irreducibles(&self.fq(), deg) {
                let split = self.split_prime(&p)?;
                for part in &split.parts {
                    let norm_degree = deg * part.residue_degree;
                    if norm_degree > maxdeg {
                        continue;
                    }
                    for _ in 0..part.count {
                        primes.push(PrimeIdeal {
                            below: p.to_string(),
                            residue_degree: part.residue_degree,
                            ramification: part.ramification,
                            norm_degree,
                        });
                        *counts.entry(norm_degree).or_insert(0) += 1;
                    }
                }
            }
        }
        Ok(PrimeList { primes, counts })
    }
}
