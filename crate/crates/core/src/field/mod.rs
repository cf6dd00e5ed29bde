//! Global function fields `K = k(t)[x]/(m(x))` with the power-basis order
//! `R = k[t][x]/(m)`, their places above infinity and prime splitting.

pub mod places;
pub mod primes;

use thiserror::Error;

use crate::algebra::factor::{factor_degrees, monic_irreducibles, squarefree};
use crate::algebra::fq::Fq;
use crate::algebra::parse::parse_bivariate;
use crate::algebra::poly::{FqPoly, Poly};
use crate::algebra::polymat::PolyMatrix;
use crate::algebra::residue::ResidueField;
use crate::algebra::AlgebraError;
use crate::drinfeld::{DrinfeldError, DrinfeldModule};

pub use places::InfinitePlace;
pub use primes::{PrimeIdeal, PrimeList, PrimePart, PrimeSplitting};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("defining polynomial must be monic in x of degree >= 1")]
    NotMonic,
    #[error("defining polynomial is inseparable")]
    Inseparable,
    #[error("could not certify irreducibility of the defining polynomial ({0})")]
    NotIrreducible(String),
    #[error("wild ramification at infinity (ramification index {0} divisible by the characteristic)")]
    WildRamification(u32),
    #[error("a place above infinity has residue degree > 1, which is not supported")]
    ResidueDegree,
    #[error("ramification beyond the first Newton polygon level is not supported")]
    FurtherRamification,
    #[error("precision {given} is insufficient; at least {required} is needed")]
    Precision { given: i64, required: i64 },
    #[error("order is not certified maximal at {0}")]
    NotMaximalAt(String),
    #[error("place enumeration inconsistent: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Drinfeld(#[from] DrinfeldError),
}

/// An element of `K` in the power basis with coefficients in k[t]
/// (entry `i` is the coefficient of `x^i`). Elements of `R` are exactly
/// these with polynomial coefficients.
pub type RElem = Vec<FqPoly>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionField {
    fq: Fq,
    /// Coefficients of m in x, lowest first, monic.
    m: Vec<FqPoly>,
    maximal: bool,
    conductor: Option<FqPoly>,
    /// Discriminant of m up to a unit; `None` when not computed (cyclotomic).
    disc: Option<FqPoly>,
}

impl FunctionField {
    /// The field generated by the primitive f-torsion of the Carlitz module.
    pub fn cyclotomic(fq: Fq, f: &FqPoly) -> Result<Self, FieldError> {
        let m = DrinfeldModule::carlitz(fq).cyclotomic_min_poly(&f.monic())?;
        let field = FunctionField { fq, m, maximal: true, conductor: Some(f.monic()), disc: None };
        field.cyclotomic_sanity()?;
        Ok(field)
    }

    /// A field given by an explicit monic separable irreducible polynomial.
    pub fn from_min_poly(fq: Fq, m: Vec<FqPoly>) -> Result<Self, FieldError> {
        let mut m = m;
        while m.last().is_some_and(|c| c.is_zero()) {
            m.pop();
        }
        if m.len() < 2 || !m.last().unwrap().is_one() {
            return Err(FieldError::NotMonic);
        }
        let mut field = FunctionField { fq, m, maximal: false, conductor: None, disc: None };
        let disc = field.discriminant();
        if disc.is_zero() {
            return Err(FieldError::Inseparable);
        }
        field.maximal = squarefree(&disc)?.iter().all(|(_, e)| *e == 1);
        field.disc = Some(disc);
        field.certify_irreducible()?;
        Ok(field)
    }

    /// Parse `m` from text in the variables `t` and `x`.
    pub fn parse_min_poly(fq: Fq, s: &str) -> Result<Self, FieldError> {
        Self::from_min_poly(fq, parse_bivariate(fq, s, "t", "x")?)
    }

    pub fn fq(&self) -> Fq {
        self.fq
    }

    pub fn q(&self) -> u32 {
        self.fq.q()
    }

    pub fn degree(&self) -> usize {
        self.m.len() - 1
    }

    pub fn min_poly(&self) -> &[FqPoly] {
        &self.m
    }

    pub fn is_maximal(&self) -> bool {
        self.maximal
    }

    pub fn conductor(&self) -> Option<&FqPoly> {
        self.conductor.as_ref()
    }

    /// Text form of m, e.g. `x^2 + t`.
    pub fn min_poly_string(&self) -> String {
        let mut terms = Vec::new();
        for (i, c) in self.m.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let xp = match i {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            };
            let cs = c.to_string();
            terms.push(match (c.is_one(), xp.is_empty(), c.coeffs().iter().filter(|&&a| a != 0).count() > 1) {
                (true, false, _) => xp,
                (_, true, _) => cs,
                (false, false, true) => format!("({cs})*{xp}"),
                (false, false, false) => format!("{cs}*{xp}"),
            });
        }
        terms.join(" + ")
    }

    pub fn zero(&self) -> RElem {
        vec![FqPoly::zero(self.fq); self.degree()]
    }

    pub fn one(&self) -> RElem {
        self.basis(0)
    }

    /// The power-basis element `x^i`.
    pub fn basis(&self, i: usize) -> RElem {
        let mut v = self.zero();
        v[i] = FqPoly::one(self.fq);
        v
    }

    /// Reduce a polynomial in x (any degree) modulo m.
    pub fn reduce(&self, mut a: Vec<FqPoly>) -> RElem {
        let d = self.degree();
        while a.len() > d {
            let top = a.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let base = a.len() - d;
            for (i, mi) in self.m[..d].iter().enumerate() {
                if !mi.is_zero() {
                    a[base + i] = &a[base + i] - &(&top * mi);
                }
            }
        }
        a.resize(d, FqPoly::zero(self.fq));
        a
    }

    pub fn add(&self, a: &RElem, b: &RElem) -> RElem {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    pub fn mul(&self, a: &RElem, b: &RElem) -> RElem {
        let mut out = vec![FqPoly::zero(self.fq); 2 * self.degree() - 1];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if !bj.is_zero() {
                    out[i + j] = &out[i + j] + &(ai * bj);
                }
            }
        }
        self.reduce(out)
    }

    /// Matrix of multiplication by `g` on the power basis (column i is `g x^i`).
    pub fn mult_matrix(&self, g: &RElem) -> PolyMatrix {
        let d = self.degree();
        let mut cols = Vec::with_capacity(d);
        let mut cur = g.clone();
        for _ in 0..d {
            cols.push(cur.clone());
            let mut shifted = vec![FqPoly::zero(self.fq)];
            shifted.extend(cur);
            cur = self.reduce(shifted);
        }
        let rows = (0..d).map(|i| (0..d).map(|j| cols[j][i].clone()).collect()).collect();
        PolyMatrix::from_rows(self.fq, rows).expect("square")
    }

    /// `m'(x)` as an element.
    pub fn derivative(&self) -> RElem {
        let fq = self.fq;
        let mut out = self.zero();
        for (i, mi) in self.m.iter().enumerate().skip(1) {
            out[i - 1] = mi.scale(&fq.from_int(i as i64));
        }
        out
    }

    /// `Res(m, m') = N(m'(x))`, which equals the discriminant up to sign.
    pub fn discriminant(&self) -> FqPoly {
        if let Some(d) = &self.disc {
            return d.clone();
        }
        let det = self.mult_matrix(&self.derivative()).det().expect("square");
        if det.is_zero() {
            det
        } else {
            det.monic()
        }
    }

    /// Coefficients of m reduced modulo p, over `k[t]/(p)`.
    pub fn reduce_mod(&self, p: &FqPoly) -> Result<Poly<ResidueField>, FieldError> {
        let rf = ResidueField::new(p)?;
        let coeffs = self.m.iter().map(|c| rf.reduce(c)).collect();
        Ok(Poly::new(rf, coeffs))
    }

    /// The order is maximal at p when certified globally, or when p^2
    /// does not divide the discriminant.
    pub fn maximal_at(&self, p: &FqPoly) -> bool {
        if self.maximal {
            return true;
        }
        let disc = self.discriminant();
        disc.rem(&p.pow(2)).map(|r| !r.is_zero()).unwrap_or(false)
    }

    /// Cyclotomic orders are maximal; as a sanity check m must reduce to
    /// `x^d` modulo the conductor and be squarefree modulo small primes
    /// away from it.
    fn cyclotomic_sanity(&self) -> Result<(), FieldError> {
        let f = self.conductor.as_ref().expect("cyclotomic");
        let d = self.degree();
        let red = self.reduce_mod(f)?;
        let expect: Vec<bool> = (0..=d).map(|i| i == d).collect();
        if red.coeffs().iter().map(|c| !c.is_zero()).collect::<Vec<_>>() != expect {
            return Err(FieldError::Inconsistent(format!("m is not x^{d} modulo the conductor")));
        }
        for p in monic_irreducibles(&self.fq, 1).into_iter().chain(monic_irreducibles(&self.fq, 2)) {
            if &p == f {
                continue;
            }
            let degs = factor_degrees(&self.reduce_mod(&p)?)?;
            if degs.iter().any(|&(_, e)| e > 1) {
                return Err(FieldError::Inconsistent(format!("m is not squarefree modulo {p}")));
            }
        }
        Ok(())
    }

    /// Irreducibility over k(t) via factorization patterns modulo primes:
    /// any factor of degree a over k(t) forces every unramified reduction to
    /// have a sub-multiset of factor degrees summing to a.
    fn certify_irreducible(&self) -> Result<(), FieldError> {
        let d = self.degree();
        if d == 1 {
            return Ok(());
        }
        let disc = self.discriminant();
        let mut possible: Vec<bool> = vec![true; d + 1];
        for deg in 1..=6usize {
            for p in monic_irreducibles(&self.fq, deg) {
                if disc.rem(&p)?.is_zero() {
                    continue;
                }
                let degs: Vec<usize> = factor_degrees(&self.reduce_mod(&p)?)?.into_iter().map(|(g, _)| g).collect();
                let mut sums = vec![false; d + 1];
                sums[0] = true;
                for g in degs {
                    for s in (g..=d).rev() {
                        sums[s] = sums[s] || sums[s - g];
                    }
                }
                for (a, slot) in possible.iter_mut().enumerate() {
                    *slot = *slot && sums[a];
                }
                if (1..d).all(|a| !possible[a]) {
                    return Ok(());
                }
            }
        }
        Err(FieldError::NotIrreducible(format!("m = {}", self.min_poly_string())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_poly;

    #[test]
    fn cyclotomic_degrees() {
        let f2 = Fq::new(2).unwrap();
        let k = FunctionField::cyclotomic(f2, &FqPoly::var(f2)).unwrap();
        assert_eq!(k.degree(), 1);
        assert_eq!(k.min_poly(), &[FqPoly::var(f2), FqPoly::one(f2)]);
        let f5 = parse_poly(f2, "t^5+t^2+1", "t").unwrap();
        assert_eq!(FunctionField::cyclotomic(f2, &f5).unwrap().degree(), 31);
        let f3 = Fq::new(3).unwrap();
        let k3 = FunctionField::cyclotomic(f3, &FqPoly::var(f3)).unwrap();
        assert_eq!(k3.min_poly_string(), "x^2 + t");
        assert!(FunctionField::cyclotomic(f2, &parse_poly(f2, "t^2+t", "t").unwrap()).is_err());
    }

    #[test]
    fn min_poly_mode() {
        let f3 = Fq::new(3).unwrap();
        let k = FunctionField::parse_min_poly(f3, "x^2 + t").unwrap();
        assert!(k.is_maximal());
        assert_eq!(k.discriminant(), FqPoly::var(f3));
        // x^2 - t^2 = (x - t)(x + t)
        assert!(matches!(FunctionField::parse_min_poly(f3, "x^2 - t^2"), Err(FieldError::NotIrreducible(_))));
        // x^2 + t^2 over F_3 is irreducible but its discriminant t^2 is not squarefree
        let k2 = FunctionField::parse_min_poly(f3, "x^2 + t^2").unwrap();
        assert!(!k2.is_maximal());
        let f2 = Fq::new(2).unwrap();
        assert_eq!(FunctionField::parse_min_poly(f2, "x^2 + t"), Err(FieldError::Inseparable));
        assert_eq!(FunctionField::parse_min_poly(f2, "t*x^2 + 1"), Err(FieldError::NotMonic));
    }

    #[test]
    fn arithmetic_mod_m() {
        let f2 = Fq::new(2).unwrap();
        let k = FunctionField::cyclotomic(f2, &parse_poly(f2, "t^2+t+1", "t").unwrap()).unwrap();
        let x = k.basis(1);
        let mut acc = k.one();
        for _ in 0..3 {
            acc = k.mul(&acc, &x);
        }
        // m(x) = 0 gives x^3 = -(m_0 + m_1 x + m_2 x^2)
        let m = k.min_poly();
        let expect: RElem = (0..3).map(|i| -&m[i]).collect();
        assert_eq!(acc, expect);
        let a = vec![FqPoly::var(f2), FqPoly::one(f2), FqPoly::zero(f2)];
        let b = vec![FqPoly::one(f2), FqPoly::zero(f2), FqPoly::var(f2)];
        assert_eq!(k.mul(&a, &b), k.mul(&b, &a));
    }
}
