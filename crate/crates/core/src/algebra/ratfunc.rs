//! Exact rational functions in k(t).

use std::fmt;

use serde::{Deserialize, Serialize};

use super::fq::Fq;
use super::poly::FqPoly;
use super::AlgebraError;

/// `num / den` with `den` monic and `gcd(num, den) = 1`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatFunc {
    num: FqPoly,
    den: FqPoly,
}

impl RatFunc {
    pub fn new(num: FqPoly, den: FqPoly) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        if num.is_zero() {
            let fq = *den.field();
            return Ok(RatFunc { num, den: FqPoly::one(fq) });
        }
        let fq = *den.field();
        let g = if num.is_constant() || den.is_constant() { FqPoly::one(fq) } else { num.gcd(&den)? };
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap())
        };
        let lc = fq.inv(den.lc()).ok_or(AlgebraError::DivisionByZero)?;
        Ok(RatFunc { num: num.scale(&lc), den: den.scale(&lc) })
    }

    pub fn from_poly(p: FqPoly) -> Self {
        let fq = *p.field();
        RatFunc { num: p, den: FqPoly::one(fq) }
    }

    pub fn zero(fq: Fq) -> Self {
        Self::from_poly(FqPoly::zero(fq))
    }

    pub fn one(fq: Fq) -> Self {
        Self::from_poly(FqPoly::one(fq))
    }

    pub fn num(&self) -> &FqPoly {
        &self.num
    }

    pub fn den(&self) -> &FqPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Valuation at infinity, `deg den - deg num` (`None` for zero).
    pub fn valuation(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.den.degree() - self.num.degree())
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.den == other.den {
            return RatFunc::new(&self.num + &other.num, self.den.clone()).unwrap();
        }
        let num = &(&self.num * &other.den) + &(&other.num * &self.den);
        RatFunc::new(num, &self.den * &other.den).unwrap()
    }

    pub fn neg(&self) -> Self {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        RatFunc::new(&self.num * &other.num, &self.den * &other.den).unwrap()
    }

    pub fn mul_poly(&self, p: &FqPoly) -> Self {
        RatFunc::new(&self.num * p, self.den.clone()).unwrap()
    }

    pub fn div_poly(&self, p: &FqPoly) -> Result<Self, AlgebraError> {
        RatFunc::new(self.num.clone(), &self.den * p)
    }

    pub fn inv(&self) -> Result<Self, AlgebraError> {
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    /// `self^(q^j)`; coefficients lie in F_q so this spreads exponents.
    pub fn frobenius(&self, j: u32) -> Self {
        let k = (self.num.field().q() as usize).pow(j);
        RatFunc { num: self.num.spread(k), den: self.den.spread(k) }
    }

    pub fn to_fraction_strings(&self) -> (String, String) {
        (self.num.to_string(), self.den.to_string())
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

/// Serialized form: integer coefficient lists (lowest degree first).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FractionRecord {
    pub num: Vec<u32>,
    pub den: Vec<u32>,
}

impl From<&RatFunc> for FractionRecord {
    fn from(r: &RatFunc) -> Self {
        FractionRecord { num: r.num.coeffs().to_vec(), den: r.den.coeffs().to_vec() }
    }
}

impl FractionRecord {
    pub fn to_ratfunc(&self, fq: Fq) -> Result<RatFunc, AlgebraError> {
        let check = |v: &[u32]| v.iter().all(|&c| c < fq.q());
        if !check(&self.num) || !check(&self.den) {
            return Err(AlgebraError::Parse("coefficient out of range".into()));
        }
        RatFunc::new(FqPoly::new(fq, self.num.clone()), FqPoly::new(fq, self.den.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes() {
        let f3 = Fq::new(3).unwrap();
        let num = FqPoly::from_ints(f3, &[0, 2, 2]); // 2t^2 + 2t
        let den = FqPoly::from_ints(f3, &[0, 2]); // 2t
        let r = RatFunc::new(num, den).unwrap();
        assert_eq!(r.num(), &FqPoly::from_ints(f3, &[1, 1]));
        assert!(r.den().is_one());
        assert!(RatFunc::new(FqPoly::one(f3), FqPoly::zero(f3)).is_err());
    }

    #[test]
    fn field_ops() {
        let f2 = Fq::new(2).unwrap();
        let t = FqPoly::var(f2);
        let a = RatFunc::new(FqPoly::one(f2), t.clone()).unwrap();
        let b = RatFunc::new(FqPoly::one(f2), FqPoly::from_ints(f2, &[1, 1])).unwrap();
        // 1/t + 1/(t+1) = 1/(t^2+t) over F_2
        let s = a.add(&b);
        assert_eq!(s.den(), &FqPoly::from_ints(f2, &[0, 1, 1]));
        assert!(s.num().is_one());
        assert_eq!(s.valuation(), Some(2));
        assert_eq!(s.mul(&s.inv().unwrap()), RatFunc::one(f2));
        assert_eq!(a.frobenius(1), a.mul(&a));
    }
}
