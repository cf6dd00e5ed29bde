//! Drinfeld modules over k[t] and their exponential / logarithm coefficients.
//!
//! For `phi(t) = t + a_1 tau + ... + a_n tau^n` the functional equation
//! `phi(t) exp(X) = exp(tX)` gives
//! `e_i (t^(q^i) - t) = sum_{j=1}^{min(i,n)} a_j e_{i-j}^(q^j)`, `e_0 = 1`,
//! and the compositional inverse satisfies
//! `l_i = -sum_{k<i} l_k e_{i-k}^(q^k)`, `l_0 = 1`.
//! Coefficients are kept as exact rational functions.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::twisted::TwistedPoly;
use super::DrinfeldError;
use crate::algebra::fq::Fq;
use crate::algebra::poly::FqPoly;
use crate::algebra::ratfunc::{FractionRecord, RatFunc};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DrinfeldModule {
    fq: Fq,
    /// `a_1 .. a_n`, with `a_n != 0`.
    a: Vec<FqPoly>,
}

impl DrinfeldModule {
    pub fn new(fq: Fq, a: Vec<FqPoly>) -> Result<Self, DrinfeldError> {
        if a.last().is_some_and(|c| c.is_zero()) {
            return Err(DrinfeldError::ZeroLeading);
        }
        Ok(DrinfeldModule { fq, a })
    }

    /// `phi(t) = t + tau`.
    pub fn carlitz(fq: Fq) -> Self {
        DrinfeldModule { fq, a: vec![FqPoly::one(fq)] }
    }

    pub fn fq(&self) -> Fq {
        self.fq
    }

    pub fn q(&self) -> u32 {
        self.fq.q()
    }

    pub fn rank(&self) -> usize {
        self.a.len()
    }

    pub fn coefficients(&self) -> &[FqPoly] {
        &self.a
    }

    pub fn is_carlitz(&self) -> bool {
        self.a.len() == 1 && self.a[0].is_one()
    }

    pub fn phi_t(&self) -> TwistedPoly {
        let mut c = vec![FqPoly::var(self.fq)];
        c.extend(self.a.iter().cloned());
        TwistedPoly::new(self.fq, c)
    }

    /// The image of `a` under the k-algebra map `k[t] -> End(G_a)`, by Horner.
    pub fn phi_of(&self, a: &FqPoly) -> TwistedPoly {
        let phi_t = self.phi_t();
        let mut acc = TwistedPoly::zero(self.fq);
        for c in a.coeffs().iter().rev() {
            acc = acc.mul(&phi_t).add(&TwistedPoly::constant(FqPoly::constant(self.fq, *c)));
        }
        acc
    }

    /// `phi_f(x)` as a polynomial in x.
    pub fn torsion_poly(&self, f: &FqPoly) -> Vec<FqPoly> {
        self.phi_of(f).to_additive()
    }

    /// `phi_f(x) / x`: minimal polynomial of a primitive f-torsion point when
    /// f is irreducible (coefficients in k[t], lowest x-degree first).
    pub fn cyclotomic_min_poly(&self, f: &FqPoly) -> Result<Vec<FqPoly>, DrinfeldError> {
        if !crate::algebra::factor::is_irreducible(f) {
            return Err(DrinfeldError::Reducible(f.to_string()));
        }
        let mut add = self.torsion_poly(f);
        add.remove(0);
        Ok(add)
    }

    /// Exact coefficients `e_0 .. e_imax`.
    pub fn exp_coefficients(&self, imax: usize) -> ExpCoeffs {
        let fq = self.fq;
        let q = fq.q() as usize;
        let mut e: Vec<RatFunc> = vec![RatFunc::one(fq)];
        for i in 1..=imax {
            let mut s = RatFunc::zero(fq);
            for (j, aj) in self.a.iter().enumerate().map(|(j, a)| (j + 1, a)) {
                if j > i {
                    break;
                }
                s = s.add(&e[i - j].frobenius(j as u32).mul_poly(aj));
            }
            let tq = FqPoly::monomial(fq, 1, q.pow(i as u32));
            let den = &tq - &FqPoly::var(fq);
            e.push(s.div_poly(&den).expect("t^(q^i) - t is nonzero"));
        }
        ExpCoeffs { module: self.clone(), coeffs: e }
    }

    /// Lower bounds `b_i <= v(e_i)` (valuation at infinity) for all `i <= imax`,
    /// from the recursion alone. Exact for the Carlitz module.
    pub fn exp_valuation_bounds(&self, imax: usize) -> Vec<i64> {
        let q = self.q() as i64;
        let mut b = vec![0i64];
        for i in 1..=imax {
            let m = (1..=self.a.len().min(i))
                .map(|j| -self.a[j - 1].degree() + q.pow(j as u32) * b[i - j])
                .min()
                .unwrap_or(0);
            b.push(q.pow(i as u32) + m);
        }
        b
    }

    /// Number of exponential terms needed so that every omitted term
    /// `e_i lambda^(q^i)` has u-valuation `>= prec`, for `v_u(lambda) >= vmin`
    /// at a place of ramification index `e`.
    ///
    /// The tail is certified by checking that `e b_i + q^i vmin >= prec` and that
    /// the normalized bounds `b_i / q^i` are nondecreasing over a lookahead of
    /// `rank + 1` indices; for constant coefficients that monotonicity holds
    /// for all indices by induction on the recursion.
    pub fn exp_terms_needed(&self, vmin: i64, e: u32, prec: i64) -> Result<usize, DrinfeldError> {
        let limit = index_limit(self.q(), self.rank());
        let q = self.q() as i128;
        let b = self.exp_valuation_bounds(limit + self.rank() + 2);
        let term = |i: usize| -> i128 { e as i128 * b[i] as i128 + q.pow(i as u32) * vmin as i128 };
        let look = self.rank() + 1;
        for i0 in 0..limit {
            let window_ok = (i0..=i0 + look).all(|i| term(i) >= prec as i128);
            let increasing = (i0 + 1..=i0 + look).all(|i| term(i) > term(i - 1));
            if window_ok && increasing {
                return Ok(i0);
            }
        }
        Err(DrinfeldError::InsufficientTerms { required: limit })
    }

    /// Lower bounds on `v(l_i)` from `l_n = -sum_{k<n} l_k e_{n-k}^(q^k)`.
    /// Exact for the Carlitz module.
    pub fn log_valuation_bounds(&self, imax: usize) -> Vec<i64> {
        let q = self.q() as i64;
        let b = self.exp_valuation_bounds(imax);
        let mut c = vec![0i64];
        for n in 1..=imax {
            let m = (0..n).map(|k| c[k] + q.pow(k as u32) * b[n - k]).min().unwrap();
            c.push(m);
        }
        c
    }

    /// Logarithm analogue of [`Self::exp_terms_needed`].
    pub fn log_terms_needed(&self, vmin: i64, e: u32, prec: i64) -> Result<usize, DrinfeldError> {
        let limit = index_limit(self.q(), self.rank());
        let q = self.q() as i128;
        let look = self.rank() + 1;
        let c = self.log_valuation_bounds(limit + look + 1);
        let term = |i: usize| -> i128 { e as i128 * c[i] as i128 + q.pow(i as u32) * vmin as i128 };
        for i0 in 0..limit {
            let window_ok = (i0..=i0 + look).all(|i| term(i) >= prec as i128);
            let increasing = (i0 + 1..=i0 + look).all(|i| term(i) > term(i - 1));
            if window_ok && increasing {
                return Ok(i0);
            }
        }
        Err(DrinfeldError::InsufficientTerms { required: limit })
    }
}

/// Largest start index for tail searches that keeps every `q^i`-scaled
/// valuation bound well inside `i64`.
fn index_limit(q: u32, rank: usize) -> usize {
    let mut i = 0usize;
    let mut p: u128 = 1;
    while p * (i as u128 + 4) * 4 < (1u128 << 60) {
        p *= q as u128;
        i += 1;
    }
    i.saturating_sub(rank + 3).min(40)
}

/// Exact exponential coefficients `e_0..e_imax`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpCoeffs {
    module: DrinfeldModule,
    coeffs: Vec<RatFunc>,
}

impl ExpCoeffs {
    pub fn module(&self) -> &DrinfeldModule {
        &self.module
    }

    pub fn coeffs(&self) -> &[RatFunc] {
        &self.coeffs
    }

    pub fn imax(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Exact valuations `v(e_i)` at infinity.
    pub fn valuations(&self) -> Vec<i64> {
        self.coeffs.iter().map(|c| c.valuation().expect("exp coefficients are nonzero")).collect()
    }

    /// Largest `v` such that for `v(lambda) > v` the term valuations
    /// `v(e_i) + q^i v(lambda)` strictly increase; `None` means no bound
    /// (the rank 0 module, `exp = X`).
    pub fn convergence_threshold(&self) -> Option<Ratio<i64>> {
        if self.module.rank() == 0 {
            return None;
        }
        let q = self.module.q() as i64;
        let v = self.valuations();
        (0..v.len() - 1)
            .map(|i| {
                let dq = q.pow(i as u32 + 1) - q.pow(i as u32);
                Ratio::new(-(v[i + 1] - v[i]), dq)
            })
            .max()
    }

    /// Extend to more coefficients (recomputes from scratch).
    pub fn extended(&self, imax: usize) -> ExpCoeffs {
        if imax <= self.imax() {
            return self.clone();
        }
        self.module.exp_coefficients(imax)
    }

    /// Compositional inverse coefficients `l_0..l_imax` (`imax <= self.imax()`).
    pub fn log_coefficients(&self, imax: usize) -> Result<LogCoeffs, DrinfeldError> {
        if imax > self.imax() {
            return Err(DrinfeldError::InsufficientTerms { required: imax });
        }
        let fq = self.module.fq();
        let mut l: Vec<RatFunc> = vec![RatFunc::one(fq)];
        for n in 1..=imax {
            let mut s = RatFunc::zero(fq);
            for (k, lk) in l.iter().enumerate() {
                s = s.add(&lk.mul(&self.coeffs[n - k].frobenius(k as u32)));
            }
            l.push(s.neg());
        }
        Ok(LogCoeffs { coeffs: l })
    }

    pub fn to_records(&self) -> Vec<FractionRecord> {
        self.coeffs.iter().map(FractionRecord::from).collect()
    }
}

/// Exact logarithm coefficients `l_0..l_imax`, normalized by `l_0 = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogCoeffs {
    coeffs: Vec<RatFunc>,
}

impl LogCoeffs {
    pub fn coeffs(&self) -> &[RatFunc] {
        &self.coeffs
    }

    pub fn imax(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn valuations(&self) -> Vec<i64> {
        self.coeffs.iter().map(|c| c.valuation().expect("log coefficients are nonzero")).collect()
    }
}

/// Serialized exponential coefficients, used by the CLI cache.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpRecord {
    pub q: u32,
    pub module: Vec<Vec<u32>>,
    pub coefficients: Vec<FractionRecord>,
}

impl ExpCoeffs {
    pub fn to_record(&self) -> ExpRecord {
        ExpRecord {
            q: self.module.q(),
            module: self.module.a.iter().map(|p| p.coeffs().to_vec()).collect(),
            coefficients: self.to_records(),
        }
    }

    pub fn from_record(rec: &ExpRecord) -> Result<ExpCoeffs, DrinfeldError> {
        let fq = Fq::new(rec.q)?;
        let a = rec.module.iter().map(|c| FqPoly::new(fq, c.clone())).collect();
        let module = DrinfeldModule::new(fq, a)?;
        let coeffs = rec.coefficients.iter().map(|r| r.to_ratfunc(fq)).collect::<Result<Vec<_>, _>>()?;
        if coeffs.first() != Some(&RatFunc::one(fq)) {
            return Err(DrinfeldError::Corrupt("e_0 must be 1".into()));
        }
        Ok(ExpCoeffs { module, coeffs })
    }
}
