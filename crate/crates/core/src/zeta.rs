//! The value `zeta_R(1) = sum_I 1/|R/I|` as a series in `1/t`.
//!
//! Precision: an ideal of norm degree D contributes a term of exact
//! `1/t`-valuation D, so ideals of norm degree > N (and every product of
//! Euler factors exceeding degree N) only touch `O(t^-(N+1))`.
//!
//! Three routes are provided.
//! * Euler product over primes of norm degree <= N (any field, small N).
//! * Direct enumeration of ideals as multisets of primes (the oracle).
//! * For `k[t]` and Carlitz cyclotomic fields with irreducible conductor f,
//!   the group determinant `det(S_{g h^-1}) = zeta_R(1) (1 - 1/f)` over
//!   `G = (k[t]/f)^x`, with class sums `S_g = sum_{a monic, a = g mod f} 1/a`.
//!   The monic a of degree `D + m` in one class sum to
//!   `(1/f) P_m / e_m(t^m + g/f)` with `e_m(w) = prod_{deg c < m} (w + c)` and
//!   `P_m = prod_{c != 0} c`, so that partial sum has exact valuation
//!   `D + m q^m - deg P_m`. Summation stops once this exceeds N.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::fq::Fq;
use crate::algebra::laurent::{Laurent, LocalField};
use crate::algebra::lmatrix;
use crate::algebra::poly::FqPoly;
use crate::algebra::AlgebraError;
use crate::field::{FieldError, FunctionField};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ZetaError {
    #[error("determinant lost too much precision: O(t^-{got}) but O(t^-{want}) requested")]
    Precision { got: i64, want: i64 },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ZetaMethod {
    EulerProduct,
    DirectEnumeration,
    GroupDeterminant,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZetaResult {
    /// `zeta_R(1) + O(t^-(N+1))`, as a series in `u = 1/t`.
    pub value: Laurent,
    pub n: usize,
    pub method: ZetaMethod,
    /// Largest prime norm degree entering the Euler product or audit.
    pub prime_degree_cutoff: usize,
    /// Largest degree of monic polynomials summed in the class sums.
    pub class_sum_degree: Option<usize>,
    /// Primes per norm degree (up to `prime_degree_cutoff`).
    pub prime_counts: BTreeMap<usize, usize>,
    /// Ideals per norm degree implied by `prime_counts`.
    pub ideal_counts: BTreeMap<usize, u64>,
    pub warnings: Vec<String>,
}

impl ZetaResult {
    /// `v(zeta) = 0` with leading coefficient 1.
    pub fn is_normalized(&self) -> bool {
        self.value.valuation() == Some(0) && self.value.lead() == 1
    }
}

/// `zeta_R(1)` through `O(t^-(N+1))`, choosing the fastest exact route.
pub fn zeta_value(field: &FunctionField, n: usize) -> Result<ZetaResult, ZetaError> {
    if field.degree() == 1 {
        return group_determinant(field.fq(), &FqPoly::one(field.fq()), n, field);
    }
    match field.conductor() {
        Some(f) => group_determinant(field.fq(), f, n, field),
        None => zeta_euler_product(field, n),
    }
}

/// Exact valuation of the sum of `1/a` over monic a of degree `D + m` in one
/// class modulo a conductor of degree D.
pub fn class_sum_valuation(q: u32, d: usize, m: usize) -> i64 {
    let q = q as i64;
    let deg_p: i64 = (1..m as u32).map(|j| j as i64 * (q - 1) * q.pow(j)).sum();
    d as i64 + m as i64 * q.pow(m as u32) - deg_p
}

/// Degrees of monic polynomials that must be summed explicitly.
pub fn class_sum_degree_bound(q: u32, d: usize, n: usize) -> usize {
    let mut m = 0usize;
    while class_sum_valuation(q, d, m) <= n as i64 {
        m += 1;
    }
    // degrees D + m with m below the first negligible one, and all degrees < D
    (d + m).saturating_sub(1).max(d.saturating_sub(1))
}

/// Number of ideals of each norm degree `<= n` given prime counts per norm degree.
pub fn ideal_counts_from_primes(prime_counts: &BTreeMap<usize, usize>, n: usize) -> BTreeMap<usize, u64> {
    let mut series = vec![0u64; n + 1];
    series[0] = 1;
    for (&deg, &count) in prime_counts {
        if deg == 0 || deg > n {
            continue;
        }
        for _ in 0..count {
            // multiply by 1/(1 - T^deg)
            for i in deg..=n {
                series[i] += series[i - deg];
            }
        }
    }
    series.into_iter().enumerate().collect()
}

fn audit_cutoff(q: u32, n: usize) -> usize {
    let mut deg = 0usize;
    while deg < n && (q as u64).pow(deg as u32 + 1) <= 1 << 10 {
        deg += 1;
    }
    deg
}

/// Prime-degree cutoff, primes per norm degree, ideals per norm degree.
type Audit = (usize, BTreeMap<usize, usize>, BTreeMap<usize, u64>);

fn audit(field: &FunctionField, n: usize) -> Result<Audit, ZetaError> {
    let cutoff = audit_cutoff(field.q(), n);
    let primes = field.prime_ideals_up_to(cutoff)?;
    let ideals = ideal_counts_from_primes(&primes.counts, cutoff);
    Ok((cutoff, primes.counts, ideals))
}

fn warnings(field: &FunctionField) -> Vec<String> {
    if field.is_maximal() {
        Vec::new()
    } else {
        vec!["order k[t][x]/(m) is not certified maximal".to_string()]
    }
}

/// All monic polynomials of degree `deg`, in index order.
fn monic_of_degree(fq: Fq, deg: usize) -> impl Iterator<Item = FqPoly> {
    let count = (fq.q() as u64).pow(deg as u32);
    (0..count).map(move |idx| FqPoly::monic_from_index(fq, deg, idx))
}

fn group_determinant(fq: Fq, f: &FqPoly, n: usize, field: &FunctionField) -> Result<ZetaResult, ZetaError> {
    let lf = LocalField::rational(fq);
    let q = fq.q();
    let dd = f.deg().unwrap_or(0);
    let top = class_sum_degree_bound(q, dd, n);
    // residues of degree < D, nonzero, indexed by their coefficient index
    let size = (q as u64).pow(dd as u32) as usize;
    let target = n as i64 + 1;
    let mut slack = 8 + 2 * dd as i64 * (size as i64).min(64);
    loop {
        let cap = target + slack;
        let mut sums: Vec<Laurent> = vec![Laurent::zero(fq).truncate(cap); size];
        for deg in 0..=top {
            for a in monic_of_degree(fq, deg) {
                let g = if dd == 0 { FqPoly::zero(fq) } else { a.rem(f)? };
                if dd > 0 && g.is_zero() {
                    continue;
                }
                let inv = lf.embed_poly(&a).inv(cap)?;
                let idx = residue_index(&g);
                sums[idx] = sums[idx].add(&inv);
            }
        }
        let units: Vec<FqPoly> = if dd == 0 {
            vec![FqPoly::one(fq)]
        } else {
            (1..size as u64).map(|i| FqPoly::new(fq, index_digits(q, dd, i))).collect()
        };
        let sum_of = |g: &FqPoly| -> Laurent { if dd == 0 { sums[0].clone() } else { sums[residue_index(g)].clone() } };
        let det = if units.len() == 1 {
            sum_of(&units[0])
        } else {
            let inverses: Vec<FqPoly> = units.iter().map(|h| h.inv_mod(f).expect("unit")).collect();
            let rows: Vec<Vec<Laurent>> = units
                .iter()
                .map(|g| inverses.iter().map(|hinv| sum_of(&(g * hinv).rem(f).unwrap())).collect())
                .collect();
            lmatrix::det(&rows, cap)?
        };
        // divide by the Euler factor (1 - 1/f) of the trivial character
        let value = if dd == 0 {
            det
        } else {
            let one_minus = Laurent::one(fq).sub(&lf.embed_poly(f).inv(cap)?);
            det.mul_capped(&one_minus.inv(cap)?, cap)
        };
        if value.prec() >= target {
            let (cutoff, prime_counts, ideal_counts) = audit(field, n)?;
            return Ok(ZetaResult {
                value: value.truncate(target),
                n,
                method: ZetaMethod::GroupDeterminant,
                prime_degree_cutoff: cutoff,
                class_sum_degree: Some(top),
                prime_counts,
                ideal_counts,
                warnings: warnings(field),
            });
        }
        if slack > 1 << 14 {
            return Err(ZetaError::Precision { got: value.prec(), want: target });
        }
        slack *= 2;
    }
}

/// Index of a residue of degree < D by its base-q digits (all coefficients).
fn residue_index(g: &FqPoly) -> usize {
    let q = g.field().q() as usize;
    g.coeffs().iter().rev().fold(0usize, |acc, &c| acc * q + c as usize)
}

fn index_digits(q: u32, len: usize, mut idx: u64) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push((idx % q as u64) as u32);
        idx /= q as u64;
    }
    out
}

/// Euler product over primes of norm degree <= N.
pub fn zeta_euler_product(field: &FunctionField, n: usize) -> Result<ZetaResult, ZetaError> {
    let fq = field.fq();
    let lf = LocalField::rational(fq);
    let cap = n as i64 + 1;
    let mut value = Laurent::one(fq).truncate(cap);
    let mut prime_counts = BTreeMap::new();
    for (norm, _) in prime_norms(field, n)? {
        let deg = norm.degree() as usize;
        *prime_counts.entry(deg).or_insert(0) += 1;
        let inv = lf.embed_poly(&norm).inv(cap)?;
        let mut factor = Laurent::one(fq).truncate(cap);
        let mut pow = inv.clone();
        for _ in 1..=n / deg {
            factor = factor.add(&pow);
            pow = pow.mul_capped(&inv, cap);
        }
        value = value.mul_capped(&factor, cap);
    }
    let ideal_counts = ideal_counts_from_primes(&prime_counts, n);
    Ok(ZetaResult {
        value: value.truncate(cap),
        n,
        method: ZetaMethod::EulerProduct,
        prime_degree_cutoff: n,
        class_sum_degree: None,
        prime_counts,
        ideal_counts,
        warnings: warnings(field),
    })
}

/// Norms `p^f` (monic polynomials) of all primes with norm degree <= n, in a
/// fixed order (by degree of p, then index, then residue degree).
fn prime_norms(field: &FunctionField, n: usize) -> Result<Vec<(FqPoly, usize)>, ZetaError> {
    let mut out = Vec::new();
    for deg in 1..=n {
        for p in crate::algebra::factor::monic_irreducibles(&field.fq(), deg) {
            for part in field.split_prime(&p)?.parts {
                if deg * part.residue_degree <= n {
                    for _ in 0..part.count {
                        out.push((p.pow(part.residue_degree as u64), part.ramification));
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Enumerate every ideal of norm degree <= n as a multiset of primes and sum
/// `1/|R/I|` term by term.
pub fn zeta_direct_oracle(field: &FunctionField, n: usize) -> Result<ZetaResult, ZetaError> {
    let fq = field.fq();
    let lf = LocalField::rational(fq);
    let cap = n as i64 + 1;
    let norms: Vec<FqPoly> = prime_norms(field, n)?.into_iter().map(|(p, _)| p).collect();
    let mut prime_counts = BTreeMap::new();
    for p in &norms {
        *prime_counts.entry(p.degree() as usize).or_insert(0) += 1;
    }
    let mut total = Laurent::zero(fq).truncate(cap);
    let mut counts: BTreeMap<usize, u64> = (0..=n).map(|d| (d, 0)).collect();
    // depth-first over nondecreasing prime indices
    let mut stack: Vec<(usize, FqPoly)> = vec![(0, FqPoly::one(fq))];
    while let Some((start, norm)) = stack.pop() {
        let deg = norm.degree() as usize;
        *counts.get_mut(&deg).unwrap() += 1;
        total = total.add(&lf.embed_poly(&norm).inv(cap)?);
        for (i, p) in norms.iter().enumerate().skip(start) {
            if deg + p.degree() as usize <= n {
                stack.push((i, &norm * p));
            }
        }
    }
    Ok(ZetaResult {
        value: total,
        n,
        method: ZetaMethod::DirectEnumeration,
        prime_degree_cutoff: n,
        class_sum_degree: None,
        prime_counts,
        ideal_counts: counts,
        warnings: warnings(field),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_poly;
    use crate::drinfeld::{DrinfeldModule, LocalLog};

    fn k_t(q: u32) -> FunctionField {
        FunctionField::parse_min_poly(Fq::new(q).unwrap(), "x + t").unwrap()
    }

    fn carlitz_log_one(q: u32, n: usize) -> Laurent {
        let fq = Fq::new(q).unwrap();
        let exp = DrinfeldModule::carlitz(fq).exp_coefficients(6);
        let log = exp.log_coefficients(6).unwrap();
        let ll = LocalLog::new(&exp, &log, LocalField::rational(fq), 200).unwrap();
        ll.eval(&Laurent::one(fq), n as i64 + 1).unwrap()
    }

    #[test]
    fn small_examples() {
        let z = zeta_value(&k_t(2), 1).unwrap();
        assert_eq!(z.value, Laurent::one(Fq::new(2).unwrap()).truncate(2));
        for q in [2, 3] {
            let z0 = zeta_direct_oracle(&k_t(q), 0).unwrap();
            assert_eq!(z0.value, Laurent::one(Fq::new(q).unwrap()).truncate(1));
        }
    }

    #[test]
    fn rational_zeta_is_log_one() {
        for (q, n) in [(2u32, 30usize), (3, 20), (4, 12)] {
            let z = zeta_value(&k_t(q), n).unwrap();
            assert!(z.is_normalized());
            assert_eq!(z.value, carlitz_log_one(q, n), "q = {q}");
        }
    }

    #[test]
    fn class_sum_valuations() {
        // sum over monic a of degree 1 of 1/a is 1/(t^2 + t) for q = 2
        assert_eq!(class_sum_valuation(2, 0, 1), 2);
        assert_eq!(class_sum_valuation(2, 0, 4), 30);
        assert_eq!(class_sum_degree_bound(2, 0, 30), 4);
        let fq = Fq::new(3).unwrap();
        let lf = LocalField::rational(fq);
        for m in 1..4usize {
            let mut s = Laurent::zero(fq).truncate(200);
            for a in monic_of_degree(fq, m) {
                s = s.add(&lf.embed_poly(&a).inv(200).unwrap());
            }
            assert_eq!(s.valuation(), Some(class_sum_valuation(3, 0, m)));
        }
    }

    #[test]
    fn routes_agree_on_cyclotomic_fields() {
        let f2 = Fq::new(2).unwrap();
        for f in ["t^2+t+1", "t^3+t+1"] {
            let k = FunctionField::cyclotomic(f2, &parse_poly(f2, f, "t").unwrap()).unwrap();
            let det = zeta_value(&k, 6).unwrap();
            let euler = zeta_euler_product(&k, 6).unwrap();
            let direct = zeta_direct_oracle(&k, 6).unwrap();
            assert_eq!(det.value, euler.value, "{f}");
            assert_eq!(euler.value, direct.value, "{f}");
            assert_eq!(euler.ideal_counts, direct.ideal_counts);
            assert!(det.is_normalized());
        }
        let f3 = Fq::new(3).unwrap();
        let k = FunctionField::cyclotomic(f3, &FqPoly::var(f3)).unwrap();
        assert_eq!(zeta_value(&k, 7).unwrap().value, zeta_euler_product(&k, 7).unwrap().value);
    }

    #[test]
    fn truncation_consistency() {
        let f2 = Fq::new(2).unwrap();
        let k = FunctionField::cyclotomic(f2, &parse_poly(f2, "t^3+t+1", "t").unwrap()).unwrap();
        for n1 in [5usize, 10] {
            let a = zeta_value(&k, n1).unwrap();
            let b = zeta_value(&k, n1 + 5).unwrap();
            assert_eq!(b.value.truncate(n1 as i64 + 1), a.value);
        }
    }

    #[test]
    fn ideal_count_identity() {
        // k[t], q = 2: q^n monic polynomials of each degree
        let counts = zeta_direct_oracle(&k_t(2), 8).unwrap().ideal_counts;
        for (d, c) in counts {
            assert_eq!(c, 1u64 << d);
        }
    }
}
