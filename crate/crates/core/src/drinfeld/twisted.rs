//! Twisted polynomials `sum b_i tau^i` over k[t] with `tau b = b^q tau`.

use crate::algebra::fq::Fq;
use crate::algebra::laurent::{Laurent, LocalField};
use crate::algebra::poly::FqPoly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedPoly {
    fq: Fq,
    coeffs: Vec<FqPoly>,
}

impl TwistedPoly {
    pub fn new(fq: Fq, mut coeffs: Vec<FqPoly>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        TwistedPoly { fq, coeffs }
    }

    pub fn zero(fq: Fq) -> Self {
        TwistedPoly { fq, coeffs: Vec::new() }
    }

    pub fn one(fq: Fq) -> Self {
        Self::constant(FqPoly::one(fq))
    }

    pub fn constant(c: FqPoly) -> Self {
        let fq = *c.field();
        TwistedPoly::new(fq, vec![c])
    }

    /// `tau^n`.
    pub fn tau_pow(fq: Fq, n: usize) -> Self {
        let mut coeffs = vec![FqPoly::zero(fq); n + 1];
        coeffs[n] = FqPoly::one(fq);
        TwistedPoly { fq, coeffs }
    }

    pub fn fq(&self) -> Fq {
        self.fq
    }

    pub fn coeffs(&self) -> &[FqPoly] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FqPoly {
        self.coeffs.get(i).cloned().unwrap_or_else(|| FqPoly::zero(self.fq))
    }

    /// tau-degree (`None` for zero).
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        TwistedPoly::new(self.fq, (0..n).map(|i| &self.coeff(i) + &other.coeff(i)).collect())
    }

    pub fn scale(&self, c: &FqPoly) -> Self {
        TwistedPoly::new(self.fq, self.coeffs.iter().map(|b| c * b).collect())
    }

    /// Composition `self * other`: `(a tau^i)(b tau^j) = a b^(q^i) tau^(i+j)`.
    pub fn mul(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::zero(self.fq);
        }
        let q = self.fq.q() as usize;
        let mut out = vec![FqPoly::zero(self.fq); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let qi = q.pow(i as u32);
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = &out[i + j] + &(a * &b.spread(qi));
                }
            }
        }
        TwistedPoly::new(self.fq, out)
    }

    /// The additive polynomial `sum b_i X^(q^i)` as coefficients in X.
    pub fn to_additive(&self) -> Vec<FqPoly> {
        let q = self.fq.q() as usize;
        let Some(n) = self.degree() else { return Vec::new() };
        let mut out = vec![FqPoly::zero(self.fq); q.pow(n as u32) + 1];
        for (i, b) in self.coeffs.iter().enumerate() {
            out[q.pow(i as u32)] = b.clone();
        }
        out
    }

    /// Apply to a series in a completion, truncating at `cap`.
    pub fn apply_local(&self, lf: &LocalField, x: &Laurent, cap: i64) -> Laurent {
        let mut acc = Laurent::zero(self.fq);
        for (i, b) in self.coeffs.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            // b has a pole at infinity, so keep that many extra digits of x
            let be = lf.embed_poly(b);
            let xi = x.frobenius(i as u32).truncate(cap - be.val_bound().min(0));
            acc = acc.add(&be.mul_capped(&xi, cap));
        }
        acc.truncate(cap)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twist_rule() {
        let f2 = Fq::new(2).unwrap();
        let t = FqPoly::var(f2);
        let tau = TwistedPoly::tau_pow(f2, 1);
        // tau * t = t^2 tau
        let lhs = tau.mul(&TwistedPoly::constant(t.clone()));
        assert_eq!(lhs, TwistedPoly::new(f2, vec![FqPoly::zero(f2), t.pow(2)]));
        let one = TwistedPoly::one(f2);
        assert_eq!(tau.mul(&one), tau);
    }

    #[test]
    fn carlitz_square() {
        // (t + tau)^2 = t^2 + (t^2 + t) tau + tau^2 over F_2
        let f2 = Fq::new(2).unwrap();
        let phi = TwistedPoly::new(f2, vec![FqPoly::var(f2), FqPoly::one(f2)]);
        let sq = phi.mul(&phi);
        assert_eq!(sq.coeffs(), &[FqPoly::from_ints(f2, &[0, 0, 1]), FqPoly::from_ints(f2, &[0, 1, 1]), FqPoly::one(f2)]);
        let add = sq.to_additive();
        assert_eq!(add.len(), 5);
        assert!(add[3].is_zero());
    }
}
