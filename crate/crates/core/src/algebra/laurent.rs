//! Truncated Laurent series over F_q with explicit absolute precision.
//!
//! A [`Laurent`] is `sum_{n >= val} a_n u^n + O(u^prec)`. Arithmetic tracks
//! the `O`-term pessimistically: a product is known to
//! `min(prec(x) + val(y), prec(y) + val(x))`, an inverse to
//! `prec(x) - 2 val(x)`. Series with no error term carry `prec = EXACT`.
//!
//! [`LocalField`] describes a completion `k((u))` of `k(t)` at a place above
//! infinity with residue field `k`, through the exact relation
//! `t = c * u^(-e)`.

use std::cmp::{max, min};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::fq::Fq;
use super::poly::FqPoly;
use super::ratfunc::RatFunc;
use super::AlgebraError;

/// Precision marker of a series without error term.
pub const EXACT: i64 = i64::MAX;

#[inline]
fn padd(p: i64, v: i64) -> i64 {
    if p == EXACT {
        EXACT
    } else {
        p + v
    }
}

#[inline]
fn pmul(p: i64, k: i64) -> i64 {
    if p == EXACT {
        EXACT
    } else {
        p * k
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Laurent {
    fq: Fq,
    /// Exponent of `coeffs[0]`; `coeffs[0] != 0` unless `coeffs` is empty.
    val: i64,
    coeffs: Vec<u32>,
    prec: i64,
}

/// Result of comparing two series on their common precision window.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Agreement {
    /// Exponents `< overlap` were compared.
    pub overlap: i64,
    /// First exponent where the series differ, if any.
    pub first_mismatch: Option<i64>,
}

impl Agreement {
    pub fn agrees(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

impl Laurent {
    pub fn new(fq: Fq, val: i64, coeffs: Vec<u32>, prec: i64) -> Self {
        let mut s = Laurent { fq, val, coeffs, prec };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        if self.prec != EXACT {
            let keep = (self.prec - self.val).max(0) as usize;
            self.coeffs.truncate(keep);
        }
        let lead = self.coeffs.iter().position(|&c| c != 0);
        match lead {
            None => {
                self.coeffs.clear();
                self.val = if self.prec == EXACT { 0 } else { self.prec };
            }
            Some(k) => {
                self.coeffs.drain(..k);
                self.val += k as i64;
                while self.coeffs.last() == Some(&0) {
                    self.coeffs.pop();
                }
            }
        }
    }

    pub fn zero(fq: Fq) -> Self {
        Laurent { fq, val: 0, coeffs: Vec::new(), prec: EXACT }
    }

    /// `O(u^prec)`.
    pub fn big_o(fq: Fq, prec: i64) -> Self {
        Laurent::new(fq, prec, Vec::new(), prec)
    }

    pub fn one(fq: Fq) -> Self {
        Laurent::monomial(fq, 1, 0)
    }

    pub fn constant(fq: Fq, c: u32) -> Self {
        Laurent::monomial(fq, c, 0)
    }

    /// `c u^n`, exact.
    pub fn monomial(fq: Fq, c: u32, n: i64) -> Self {
        Laurent::new(fq, n, vec![c], EXACT)
    }

    pub fn fq(&self) -> Fq {
        self.fq
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec == EXACT
    }

    /// True when no nonzero coefficient is known.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Exact valuation, `None` if the series is zero to its precision.
    pub fn valuation(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then_some(self.val)
    }

    /// Valuation or, for a zero series, its precision (a lower bound).
    pub fn val_bound(&self) -> i64 {
        if self.coeffs.is_empty() {
            self.prec
        } else {
            self.val
        }
    }

    /// Leading coefficient (0 for a zero series).
    pub fn lead(&self) -> u32 {
        self.coeffs.first().copied().unwrap_or(0)
    }

    /// Coefficient of `u^n`, `None` if beyond the precision.
    pub fn coeff(&self, n: i64) -> Option<u32> {
        if n >= self.prec {
            return None;
        }
        if n < self.val {
            return Some(0);
        }
        Some(self.coeffs.get((n - self.val) as usize).copied().unwrap_or(0))
    }

    /// Known nonzero-region coefficients, starting at `val`.
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    /// Coefficients for exponents `lo..hi`; errors if `hi > prec`.
    pub fn window(&self, lo: i64, hi: i64) -> Result<Vec<u32>, AlgebraError> {
        if hi > self.prec {
            return Err(AlgebraError::InvertPrecisionZero(self.prec));
        }
        Ok((lo..hi).map(|n| self.coeff(n).unwrap_or(0)).collect())
    }

    /// Lower the precision to `min(prec, p)`.
    pub fn truncate(&self, p: i64) -> Self {
        if p >= self.prec {
            return self.clone();
        }
        Laurent::new(self.fq, self.val, self.coeffs.clone(), p)
    }

    /// Drop all terms of exponent `>= p` but keep the series exact
    /// (as a Laurent polynomial).
    pub fn cut_exact(&self, p: i64) -> Self {
        let keep = (p - self.val).clamp(0, self.coeffs.len() as i64) as usize;
        Laurent::new(self.fq, self.val, self.coeffs[..keep].to_vec(), EXACT)
    }

    pub fn neg(&self) -> Self {
        let fq = self.fq;
        Laurent { fq, val: self.val, coeffs: self.coeffs.iter().map(|&c| fq.neg(c)).collect(), prec: self.prec }
    }

    pub fn scale(&self, c: u32) -> Self {
        if c == 0 {
            return Laurent::big_o(self.fq, self.prec).or_exact_zero(self.prec);
        }
        let fq = self.fq;
        Laurent { fq, val: self.val, coeffs: self.coeffs.iter().map(|&a| fq.mul(a, c)).collect(), prec: self.prec }
    }

    fn or_exact_zero(self, prec: i64) -> Self {
        if prec == EXACT {
            Laurent::zero(self.fq)
        } else {
            self
        }
    }

    /// Multiply by `u^k`.
    pub fn shift(&self, k: i64) -> Self {
        let mut s = self.clone();
        s.val += k;
        s.prec = padd(s.prec, k);
        if s.coeffs.is_empty() && s.prec != EXACT {
            s.val = s.prec;
        }
        s
    }

    pub fn add(&self, rhs: &Laurent) -> Laurent {
        self.add_scaled(rhs, 1)
    }

    pub fn sub(&self, rhs: &Laurent) -> Laurent {
        self.add_scaled(rhs, self.fq.neg(1))
    }

    /// `self + c * rhs`.
    pub fn add_scaled(&self, rhs: &Laurent, c: u32) -> Laurent {
        let fq = self.fq;
        let prec = min(self.prec, rhs.prec);
        if rhs.coeffs.is_empty() || c == 0 {
            return self.truncate(prec);
        }
        if self.coeffs.is_empty() {
            return rhs.scale(c).truncate(prec);
        }
        let lo = min(self.val, rhs.val);
        let hi_a = self.val + self.coeffs.len() as i64;
        let hi_b = rhs.val + rhs.coeffs.len() as i64;
        let hi = min(max(hi_a, hi_b), prec);
        if hi <= lo {
            return Laurent::big_o(fq, prec);
        }
        let mut out = vec![0u32; (hi - lo) as usize];
        for (i, &a) in self.coeffs.iter().enumerate() {
            let k = self.val + i as i64 - lo;
            if (k as usize) < out.len() {
                out[k as usize] = a;
            }
        }
        for (i, &b) in rhs.coeffs.iter().enumerate() {
            let k = (rhs.val + i as i64 - lo) as usize;
            if k < out.len() {
                out[k] = fq.add(out[k], fq.mul(b, c));
            }
        }
        Laurent::new(fq, lo, out, prec)
    }

    pub fn mul(&self, rhs: &Laurent) -> Laurent {
        self.mul_capped(rhs, EXACT)
    }

    /// Product, additionally truncated at `cap`.
    pub fn mul_capped(&self, rhs: &Laurent, cap: i64) -> Laurent {
        let fq = self.fq;
        let (va, vb) = (self.val_bound(), rhs.val_bound());
        if (self.coeffs.is_empty() && self.prec == EXACT) || (rhs.coeffs.is_empty() && rhs.prec == EXACT) {
            return Laurent::zero(fq);
        }
        let prec = min(min(padd(self.prec, vb), padd(rhs.prec, va)), cap);
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return Laurent::big_o(fq, prec);
        }
        let val = va + vb;
        let full = self.coeffs.len() + rhs.coeffs.len() - 1;
        let n = if prec == EXACT { full } else { min(full as i64, (prec - val).max(0)) as usize };
        let mut out = vec![0u32; n];
        let (a, b) = (&self.coeffs, &rhs.coeffs);
        if fq.q() == 2 {
            for (i, &ai) in a.iter().enumerate().take(n) {
                if ai == 0 {
                    continue;
                }
                let m = min(b.len(), n - i);
                for (o, &bj) in out[i..i + m].iter_mut().zip(&b[..m]) {
                    *o ^= bj;
                }
            }
        } else {
            for (i, &ai) in a.iter().enumerate().take(n) {
                if ai == 0 {
                    continue;
                }
                let m = min(b.len(), n - i);
                for (o, &bj) in out[i..i + m].iter_mut().zip(&b[..m]) {
                    if bj != 0 {
                        *o = fq.add(*o, fq.mul(ai, bj));
                    }
                }
            }
        }
        Laurent::new(fq, val, out, prec)
    }

    /// Multiplicative inverse, truncated at `cap` (required to be finite
    /// when the inverse of an exact series is not a monomial).
    pub fn inv(&self, cap: i64) -> Result<Laurent, AlgebraError> {
        let fq = self.fq;
        if self.coeffs.is_empty() {
            return Err(AlgebraError::InvertPrecisionZero(self.prec));
        }
        let v = self.val;
        let a0inv = fq.inv(self.coeffs[0]).unwrap();
        if self.coeffs.len() == 1 && self.prec == EXACT {
            return Ok(Laurent::monomial(fq, a0inv, -v).truncate(cap));
        }
        let prec = min(padd(self.prec, -2 * v), cap);
        assert!(prec != EXACT, "inverse of a non-monomial exact series needs a finite cap");
        let n = (prec + v).max(0) as usize;
        let mut b = vec![0u32; n];
        let neg_a0inv = fq.neg(a0inv);
        for k in 0..n {
            if k == 0 {
                b[0] = a0inv;
                continue;
            }
            let mut s = 0u32;
            for i in 1..=min(k, self.coeffs.len() - 1) {
                let ai = self.coeffs[i];
                if ai != 0 && b[k - i] != 0 {
                    s = fq.add(s, fq.mul(ai, b[k - i]));
                }
            }
            b[k] = fq.mul(s, neg_a0inv);
        }
        Ok(Laurent::new(fq, -v, b, prec))
    }

    pub fn div(&self, rhs: &Laurent, cap: i64) -> Result<Laurent, AlgebraError> {
        let inv_cap = if cap == EXACT { EXACT } else { cap - self.val_bound() };
        Ok(self.mul_capped(&rhs.inv(inv_cap)?, cap))
    }

    pub fn pow(&self, mut n: u64, cap: i64) -> Laurent {
        let mut base = self.truncate(cap);
        let mut acc = Laurent::one(self.fq);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul_capped(&base, cap);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul_capped(&base, cap);
            }
        }
        acc
    }

    /// `self^(q^j)`. Coefficients lie in F_q, so only exponents move.
    pub fn frobenius(&self, j: u32) -> Laurent {
        let k = (self.fq.q() as i64).pow(j);
        self.expand_exponents(k)
    }

    /// Substitute `u -> u^k` (k >= 1).
    pub fn expand_exponents(&self, k: i64) -> Laurent {
        if k == 1 {
            return self.clone();
        }
        let fq = self.fq;
        let prec = pmul(self.prec, k);
        if self.coeffs.is_empty() {
            return if prec == EXACT { Laurent::zero(fq) } else { Laurent::big_o(fq, prec) };
        }
        let mut out = vec![0u32; (self.coeffs.len() - 1) * k as usize + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            out[i * k as usize] = c;
        }
        Laurent::new(fq, self.val * k, out, prec)
    }

    /// Substitute `u -> c u` for a scalar `c`.
    pub fn substitute_scale(&self, c: u32) -> Laurent {
        let fq = self.fq;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &a)| {
                let n = self.val + i as i64;
                let cn = if n >= 0 { fq.pow(c, n as u64) } else { fq.inv(fq.pow(c, (-n) as u64)).unwrap() };
                fq.mul(a, cn)
            })
            .collect();
        Laurent::new(fq, self.val, coeffs, self.prec)
    }

    /// Compare on the common precision window.
    pub fn agreement(&self, other: &Laurent) -> Agreement {
        let d = self.sub(other);
        Agreement { overlap: d.prec, first_mismatch: d.valuation() }
    }

    /// Text rendering. With `inverse = true` the series is in `u = 1/var`
    /// and monomials print as `var^-n`.
    pub fn fmt_var(&self, var: &str, inverse: bool) -> String {
        let fq = self.fq;
        let mut terms = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let n = self.val + i as i64;
            let e = if inverse { -n } else { n };
            let mono = match e {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{e}"),
            };
            let cs = fq.format_elem(c);
            terms.push(match (mono.is_empty(), c == 1) {
                (true, _) => cs,
                (false, true) => mono,
                (false, false) => format!("{cs}*{mono}"),
            });
        }
        if self.prec != EXACT {
            let e = if inverse { -self.prec } else { self.prec };
            terms.push(format!("O({var}^{e})"));
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }

    pub fn to_record(&self) -> SeriesRecord {
        SeriesRecord {
            lowest_exponent: self.val,
            coefficients: self.coeffs.clone(),
            precision: (self.prec != EXACT).then_some(self.prec),
        }
    }
}

impl fmt::Debug for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_var("u", false))
    }
}

/// Versioned JSON shape of a series: `{lowest_exponent, coefficients, precision}`
/// in the uniformizer `u` (`u = 1/t` for k((1/t))).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesRecord {
    pub lowest_exponent: i64,
    pub coefficients: Vec<u32>,
    pub precision: Option<i64>,
}

impl SeriesRecord {
    pub fn to_laurent(&self, fq: Fq) -> Laurent {
        Laurent::new(fq, self.lowest_exponent, self.coefficients.clone(), self.precision.unwrap_or(EXACT))
    }
}

/// The completion `k((u))` of `k(t)` at a place above infinity with residue
/// field `k`, ramification index `e` and `t = c u^(-e)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LocalField {
    pub fq: Fq,
    pub e: u32,
    pub c: u32,
}

impl LocalField {
    /// `k((1/t))` itself.
    pub fn rational(fq: Fq) -> Self {
        LocalField { fq, e: 1, c: 1 }
    }

    /// The exact image of `t`.
    pub fn t(&self) -> Laurent {
        Laurent::monomial(self.fq, self.c, -(self.e as i64))
    }

    /// Exact image of a polynomial in t, dropping exponents `>= cap`.
    pub fn embed_poly_capped(&self, p: &FqPoly, cap: i64) -> Laurent {
        let fq = self.fq;
        if p.is_zero() {
            return Laurent::zero(fq);
        }
        let e = self.e as i64;
        let d = p.degree();
        let lo = -e * d;
        let len = min(e * d + 1, cap.saturating_sub(lo)).max(0);
        let mut out = vec![0u32; len as usize];
        let mut cpow = vec![1u32; (d + 1) as usize];
        for k in 1..=d as usize {
            cpow[k] = fq.mul(cpow[k - 1], self.c);
        }
        for (k, &a) in p.coeffs().iter().enumerate() {
            if a == 0 {
                continue;
            }
            let idx = (e * (d - k as i64)) as usize;
            if idx < out.len() {
                out[idx] = fq.mul(a, cpow[k]);
            }
        }
        let prec = if len < e * d + 1 { cap } else { EXACT };
        Laurent::new(fq, lo, out, prec)
    }

    pub fn embed_poly(&self, p: &FqPoly) -> Laurent {
        self.embed_poly_capped(p, EXACT)
    }

    /// Image of a rational function with absolute precision `prec`.
    pub fn embed_ratfunc(&self, r: &RatFunc, prec: i64) -> Result<Laurent, AlgebraError> {
        if r.is_zero() {
            return Ok(Laurent::zero(self.fq));
        }
        let e = self.e as i64;
        let vnum = -e * r.num().degree();
        let vden = -e * r.den().degree();
        // 1/den is needed to absolute precision prec - vnum, which only
        // involves the exponents of den below inv_prec + 2 vden.
        let inv_prec = prec - vnum;
        let den = self.embed_poly_capped(r.den(), inv_prec + 2 * vden);
        let inv = den.inv(inv_prec)?;
        let num = self.embed_poly_capped(r.num(), prec - vden);
        Ok(num.mul_capped(&inv, prec))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f2() -> Fq {
        Fq::new(2).unwrap()
    }

    #[test]
    fn geometric_series() {
        let fq = f2();
        // 1 - u with u = 1/t
        let x = Laurent::new(fq, 0, vec![1, 1], EXACT);
        let inv = x.inv(20).unwrap();
        assert_eq!(inv.prec(), 20);
        for n in 0..20 {
            assert_eq!(inv.coeff(n), Some(1));
        }
        let prod = x.mul(&inv);
        assert_eq!(prod.agreement(&Laurent::one(fq)).first_mismatch, None);
        assert_eq!(prod.prec(), 20);
    }

    #[test]
    fn valuations_add() {
        let fq = Fq::new(3).unwrap();
        let a = Laurent::monomial(fq, 1, 3);
        let b = Laurent::new(fq, 0, vec![1, 1], 10);
        assert_eq!(a.mul(&b).valuation(), Some(3));
        assert_eq!(a.mul(&b).prec(), 13);
        let c = Laurent::new(fq, -2, vec![2, 1, 0, 1], 5);
        let ci = c.inv(EXACT).unwrap();
        assert_eq!(ci.valuation(), Some(2));
        assert_eq!(ci.prec(), 9);
    }

    #[test]
    fn inverting_zero_fails() {
        assert!(Laurent::big_o(f2(), 4).inv(10).is_err());
    }

    #[test]
    fn render() {
        let fq = f2();
        let x = Laurent::new(fq, 0, vec![1, 0, 1], 31);
        assert_eq!(x.fmt_var("t", true), "1 + t^-2 + O(t^-31)");
    }

    #[test]
    fn embed_rational_functions() {
        let fq = f2();
        let lf = LocalField::rational(fq);
        // 1/(t^2 + t) = t^-2 + t^-3 + ...
        let r = RatFunc::new(FqPoly::one(fq), FqPoly::from_ints(fq, &[0, 1, 1])).unwrap();
        let s = lf.embed_ratfunc(&r, 10).unwrap();
        assert_eq!(s.prec(), 10);
        assert_eq!(s.valuation(), Some(2));
        for n in 2..10 {
            assert_eq!(s.coeff(n), Some(1));
        }
        // ramified: t = 2 u^-2 over F_3
        let f3 = Fq::new(3).unwrap();
        let lf = LocalField { fq: f3, e: 2, c: 2 };
        let t = lf.embed_poly(&FqPoly::var(f3));
        assert_eq!(t, Laurent::monomial(f3, 2, -2));
        let inv_t = lf.embed_ratfunc(&RatFunc::new(FqPoly::one(f3), FqPoly::var(f3)).unwrap(), 12).unwrap();
        assert_eq!(inv_t.coeff(2), Some(2));
        assert_eq!(inv_t.coeff(3), Some(0));
    }

    fn arb_series(q: u32) -> impl Strategy<Value = (i64, Vec<u32>, i64)> {
        (-5i64..5, prop::collection::vec(0u32..q, 0..12), 8i64..16)
    }

    proptest! {
        #[test]
        fn distributive(a in arb_series(3), b in arb_series(3), c in arb_series(3)) {
            let fq = Fq::new(3).unwrap();
            let x = Laurent::new(fq, a.0, a.1, a.2);
            let y = Laurent::new(fq, b.0, b.1, b.2);
            let z = Laurent::new(fq, c.0, c.1, c.2);
            let lhs = x.add(&y).mul(&z);
            let rhs = x.mul(&z).add(&y.mul(&z));
            prop_assert!(lhs.agreement(&rhs).agrees());
        }

        #[test]
        fn inverse_roundtrip(a in arb_series(2)) {
            let fq = f2();
            let x = Laurent::new(fq, a.0, a.1, a.2);
            prop_assume!(!x.is_zero());
            let xi = x.inv(EXACT).unwrap();
            let one = x.mul(&xi);
            prop_assert_eq!(one.valuation(), Some(0));
            prop_assert!(one.agreement(&Laurent::one(fq)).agrees());
            prop_assert_eq!(xi.valuation(), x.valuation().map(|v| -v));
        }

        #[test]
        fn frobenius_is_power(a in arb_series(3)) {
            let fq = Fq::new(3).unwrap();
            let x = Laurent::new(fq, a.0, a.1, a.2);
            let lhs = x.frobenius(1);
            let rhs = x.pow(3, EXACT);
            prop_assert!(lhs.agreement(&rhs).agrees());
        }
    }
}
