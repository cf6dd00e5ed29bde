//! Residue fields k[t]/(p) for monic irreducible p.

use super::factor::is_irreducible;
use super::field::Field;
use super::fq::Fq;
use super::poly::FqPoly;
use super::AlgebraError;

#[derive(Clone, Debug, PartialEq)]
pub struct ResidueField {
    modulus: FqPoly,
}

impl ResidueField {
    pub fn new(p: &FqPoly) -> Result<Self, AlgebraError> {
        if !is_irreducible(p) {
            return Err(AlgebraError::Reducible(p.to_string()));
        }
        Ok(ResidueField { modulus: p.monic() })
    }

    pub fn modulus(&self) -> &FqPoly {
        &self.modulus
    }

    pub fn base(&self) -> Fq {
        *self.modulus.field()
    }

    pub fn reduce(&self, a: &FqPoly) -> FqPoly {
        a.rem(&self.modulus).expect("nonzero modulus")
    }

    /// Multiplicative order of a nonzero residue.
    pub fn mult_order(&self, a: &FqPoly) -> Option<u64> {
        let a = self.reduce(a);
        if a.is_zero() {
            return None;
        }
        let n = self.order() - 1;
        let mut ord = n;
        let mut m = n;
        let mut p = 2;
        let mut primes = Vec::new();
        while p * p <= m {
            if m.is_multiple_of(p) {
                primes.push(p);
                while m.is_multiple_of(p) {
                    m /= p;
                }
            }
            p += 1;
        }
        if m > 1 {
            primes.push(m);
        }
        for p in primes {
            while ord.is_multiple_of(p) && a.pow_mod((ord / p) as u128, &self.modulus).ok()?.is_one() {
                ord /= p;
            }
        }
        Some(ord)
    }
}

impl Field for ResidueField {
    type Elem = FqPoly;

    fn zero(&self) -> FqPoly {
        FqPoly::zero(self.base())
    }
    fn one(&self) -> FqPoly {
        FqPoly::one(self.base())
    }
    fn add(&self, a: &FqPoly, b: &FqPoly) -> FqPoly {
        a + b
    }
    fn sub(&self, a: &FqPoly, b: &FqPoly) -> FqPoly {
        a - b
    }
    fn neg(&self, a: &FqPoly) -> FqPoly {
        -a
    }
    fn mul(&self, a: &FqPoly, b: &FqPoly) -> FqPoly {
        self.reduce(&(a * b))
    }
    fn inv(&self, a: &FqPoly) -> Option<FqPoly> {
        a.inv_mod(&self.modulus)
    }
    fn is_zero(&self, a: &FqPoly) -> bool {
        a.is_zero()
    }
    fn characteristic(&self) -> u64 {
        self.base().p() as u64
    }
    fn order(&self) -> u64 {
        (self.base().q() as u64).pow(self.modulus.degree() as u32)
    }
    fn element(&self, mut idx: u64) -> FqPoly {
        let fq = self.base();
        let q = fq.q() as u64;
        let coeffs = (0..self.modulus.degree())
            .map(|_| {
                let c = (idx % q) as u32;
                idx /= q;
                c
            })
            .collect();
        FqPoly::new(fq, coeffs)
    }
    fn from_int(&self, n: i64) -> FqPoly {
        FqPoly::constant(self.base(), self.base().from_int(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::factor::factor_degrees;
    use crate::algebra::poly::Poly;

    #[test]
    fn residue_field_arithmetic() {
        let f2 = Fq::new(2).unwrap();
        let k = ResidueField::new(&FqPoly::from_ints(f2, &[1, 1, 1])).unwrap();
        assert_eq!(k.order(), 4);
        for i in 1..4 {
            let a = k.element(i);
            assert!(k.is_one(&k.mul(&a, &k.inv(&a).unwrap())));
            assert!(k.pow(&a, 4) == a);
        }
        assert!(ResidueField::new(&FqPoly::from_ints(f2, &[0, 1, 1])).is_err());
    }

    #[test]
    fn order_of_t_mod_primitive_quintic() {
        let f2 = Fq::new(2).unwrap();
        let f = FqPoly::from_ints(f2, &[1, 0, 1, 0, 0, 1]);
        let k = ResidueField::new(&f).unwrap();
        assert_eq!(k.mult_order(&FqPoly::var(f2)), Some(31));
    }

    #[test]
    fn polynomials_over_residue_fields_factor() {
        // x^3 - 1 over F_4 = F_2[t]/(t^2+t+1) splits into linear factors.
        let f2 = Fq::new(2).unwrap();
        let k = ResidueField::new(&FqPoly::from_ints(f2, &[1, 1, 1])).unwrap();
        let one = k.one();
        let p = Poly::new(k.clone(), vec![one.clone(), k.zero(), k.zero(), one]);
        assert_eq!(factor_degrees(&p).unwrap(), vec![(1, 1), (1, 1), (1, 1)]);
    }
}
